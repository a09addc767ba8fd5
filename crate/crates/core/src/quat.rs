//! Quaternion scalar arithmetic.
//!
//! A quaternion is stored as four `f64` components `w + x i + y j + z k`
//! with the defining relations `i^2 = j^2 = k^2 = i j k = -1`. The product
//! is non-commutative; every operation here keeps the factor order of its
//! arguments.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::fm;

/// `w + x i + y j + z k` over `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Embeds a real scalar.
    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Scalar part `Sc(q)`.
    #[inline]
    pub fn sc(self) -> f64 {
        self.w
    }

    /// Vector part `Vec(q)` as a quaternion with zero scalar part.
    #[inline]
    pub fn vec(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    /// Conjugate: negates the vector part.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Euclidean 4-norm `|q|`.
    #[inline]
    pub fn norm(self) -> f64 {
        fm::sqrt(self.norm_sqr())
    }

    /// Largest absolute component; handy for max-norm comparisons.
    #[inline]
    pub fn max_abs(self) -> f64 {
        let a = fm::abs(self.w).max(fm::abs(self.x));
        let b = fm::abs(self.y).max(fm::abs(self.z));
        a.max(b)
    }

    /// `q^{-1} = conj(q) / |q|^2`.
    ///
    /// Magnitudes below `1e-300` are treated as zero so that `1/|q|^2`
    /// cannot overflow.
    pub fn inv(self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::ZeroInverse);
        }
        let s = 1.0 / self.norm_sqr();
        Ok(self.conj() * s)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

/// Quaternion exponential, evaluated in closed form as
/// `e^{q0} (cos|v| + (v/|v|) sin|v|)` with `v = Vec(q)`.
///
/// For `|v| < 1e-8` the ratio `sin|v|/|v|` is replaced by its series to
/// avoid cancellation near the real axis.
pub fn qexp(q: Quaternion) -> Quaternion {
    let vn = fm::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    let ew = fm::exp(q.w);
    if vn < 1e-8 {
        let v2 = vn * vn;
        let ratio = 1.0 - v2 / 6.0 + v2 * v2 / 120.0;
        let c = 1.0 - v2 / 2.0 + v2 * v2 / 24.0;
        Quaternion::new(ew * c, ew * ratio * q.x, ew * ratio * q.y, ew * ratio * q.z)
    } else {
        let (s, c) = fm::sincos(vn);
        let r = s / vn;
        Quaternion::new(ew * c, ew * r * q.x, ew * r * q.y, ew * r * q.z)
    }
}

/// A pure imaginary unit quaternion: `Sc(u) = 0`, `|u| = 1`, so `u^2 = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureUnit(Quaternion);

impl PureUnit {
    pub const I: PureUnit = PureUnit(Quaternion::I);
    pub const J: PureUnit = PureUnit(Quaternion::J);
    pub const K: PureUnit = PureUnit(Quaternion::K);

    pub fn new(q: Quaternion) -> Result<Self> {
        if fm::abs(q.w) > 1e-12 {
            return Err(Error::Domain("pure unit must have zero scalar part"));
        }
        if fm::abs(q.norm() - 1.0) > 1e-12 {
            return Err(Error::Domain("pure unit must have unit norm"));
        }
        Ok(PureUnit(Quaternion::new(0.0, q.x, q.y, q.z)))
    }

    #[inline]
    pub fn get(self) -> Quaternion {
        self.0
    }

    /// `cos(theta) + u sin(theta)`, the rotor in the plane spanned by `u`.
    #[inline]
    pub fn rotor(self, theta: f64) -> Quaternion {
        let (s, c) = fm::sincos(theta);
        Quaternion::new(c, s * self.0.x, s * self.0.y, s * self.0.z)
    }
}

/// The scalar `1/sqrt(u 2 pi b)` defined as
/// `|2 pi b|^{-1/2} e^{u (sgn b - 2) pi / 4}` for a pure unit `u` and
/// nonzero real `b`. Its modulus is always `|2 pi b|^{-1/2}`.
pub fn inv_sqrt_scale(u: PureUnit, b: f64) -> Result<Quaternion> {
    if b == 0.0 {
        return Err(Error::ZeroParameter("b"));
    }
    let modulus = 1.0 / fm::sqrt(2.0 * core::f64::consts::PI * fm::abs(b));
    let sgn = if b > 0.0 { 1.0 } else { -1.0 };
    let theta = (sgn - 2.0) * core::f64::consts::FRAC_PI_4;
    Ok(u.rotor(theta) * modulus)
}
