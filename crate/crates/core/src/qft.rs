//! Right-sided quaternion Fourier transform machinery.
//!
//! Continuous-path operations evaluate the inversion-form integral
//! `(1/2pi) int_I F(w1, w2) e^{j w2 x2} e^{i w1 x1} dw` by composite
//! Gauss-Legendre quadrature; the generalized translation pre-multiplies
//! the spectrum with the conjugate kernels `e^{-i w1 y1} e^{-j w2 y2}` in
//! exactly that order. The discrete transform pair acts on index grids
//! with unitary `1/sqrt(n1 n2)` normalization so Parseval holds verbatim.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::fm;
use crate::quadrature::{Axis, Grid2, QuadratureRule};
use crate::quat::Quaternion;

const TWO_PI: f64 = core::f64::consts::TAU;

/// `cos t + i sin t`.
#[inline]
pub(crate) fn rotor_i(t: f64) -> Quaternion {
    let (s, c) = fm::sincos(t);
    Quaternion::new(c, s, 0.0, 0.0)
}

/// `cos t + j sin t`.
#[inline]
pub(crate) fn rotor_j(t: f64) -> Quaternion {
    let (s, c) = fm::sincos(t);
    Quaternion::new(c, 0.0, s, 0.0)
}

/// Quaternion samples on a uniform rectangular grid, row-major in the
/// first axis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatGrid2D {
    n1: usize,
    n2: usize,
    pub dx: (f64, f64),
    pub origin: (f64, f64),
    values: Vec<Quaternion>,
}

impl QuatGrid2D {
    pub fn zeros(n1: usize, n2: usize) -> Self {
        assert!(n1 > 0 && n2 > 0, "grid dimensions must be positive");
        Self {
            n1,
            n2,
            dx: (1.0, 1.0),
            origin: (0.0, 0.0),
            values: vec![Quaternion::ZERO; n1 * n2],
        }
    }

    pub fn from_fn(n1: usize, n2: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut g = Self::zeros(n1, n2);
        for r1 in 0..n1 {
            for r2 in 0..n2 {
                g.values[r1 * n2 + r2] = f(r1, r2);
            }
        }
        g
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline]
    pub fn get(&self, r1: usize, r2: usize) -> Quaternion {
        self.values[r1 * self.n2 + r2]
    }

    #[inline]
    pub fn set(&mut self, r1: usize, r2: usize, v: Quaternion) {
        self.values[r1 * self.n2 + r2] = v;
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn norm_l2(&self) -> f64 {
        fm::sqrt(self.values.iter().map(|q| q.norm_sqr()).sum())
    }

    pub fn max_abs_diff(&self, other: &QuatGrid2D) -> f64 {
        assert_eq!((self.n1, self.n2), (other.n1, other.n2));
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (&a, &b)| m.max((a - b).max_abs()))
    }
}

fn twiddles(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut cs = Vec::with_capacity(n);
    let mut sn = Vec::with_capacity(n);
    for r in 0..n {
        let (s, c) = fm::sincos(TWO_PI * r as f64 / n as f64);
        cs.push(c);
        sn.push(s);
    }
    (cs, sn)
}

/// Right-multiplies by `e^{sign * i * 2 pi k x / n1}` and sums along axis 1.
/// The `(w, x)` pair picks up the kernel directly; the `(y, z)` pair the
/// conjugated kernel, since `j e^{i t} = e^{-i t} j`.
fn pass_i(g: &QuatGrid2D, sign: f64) -> QuatGrid2D {
    let (n1, n2) = (g.n1, g.n2);
    let (cs, sn) = twiddles(n1);
    let mut out = g.clone();
    for k1 in 0..n1 {
        for x2 in 0..n2 {
            let (mut aw, mut ax, mut by, mut bz) = (0.0, 0.0, 0.0, 0.0);
            for x1 in 0..n1 {
                let q = g.values[x1 * n2 + x2];
                let r = (k1 * x1) % n1;
                let c = cs[r];
                let s = sign * sn[r];
                aw += q.w * c - q.x * s;
                ax += q.w * s + q.x * c;
                by += q.y * c + q.z * s;
                bz += -q.y * s + q.z * c;
            }
            out.values[k1 * n2 + x2] = Quaternion::new(aw, ax, by, bz);
        }
    }
    out
}

/// Right-multiplies by `e^{sign * j * 2 pi k x / n2}` and sums along axis 2.
/// Both the `(w, y)` and `(x, z)` pairs rotate in the j-plane with the
/// plain kernel: `q = (w + y j) + i (x + z j)`.
fn pass_j(g: &QuatGrid2D, sign: f64) -> QuatGrid2D {
    let (n1, n2) = (g.n1, g.n2);
    let (cs, sn) = twiddles(n2);
    let mut out = g.clone();
    for x1 in 0..n1 {
        for k2 in 0..n2 {
            let (mut uw, mut uy, mut vx, mut vz) = (0.0, 0.0, 0.0, 0.0);
            for x2 in 0..n2 {
                let q = g.values[x1 * n2 + x2];
                let r = (k2 * x2) % n2;
                let c = cs[r];
                let s = sign * sn[r];
                uw += q.w * c - q.y * s;
                uy += q.w * s + q.y * c;
                vx += q.x * c - q.z * s;
                vz += q.x * s + q.z * c;
            }
            out.values[x1 * n2 + k2] = Quaternion::new(uw, vx, uy, vz);
        }
    }
    out
}

fn scaled(mut g: QuatGrid2D, s: f64) -> QuatGrid2D {
    for v in &mut g.values {
        *v = *v * s;
    }
    g
}

/// Discrete right-sided QFT:
/// `F[k1,k2] = (1/sqrt(n1 n2)) sum f[x1,x2] e^{-i 2pi k1 x1/n1} e^{-j 2pi k2 x2/n2}`
/// with the i-kernel applied on the right first, then the j-kernel.
///
/// This is an index-space transform; grid spacing metadata passes through.
pub fn dqft(f: &QuatGrid2D) -> QuatGrid2D {
    let s = 1.0 / fm::sqrt((f.n1 * f.n2) as f64);
    scaled(pass_j(&pass_i(f, -1.0), -1.0), s)
}

/// Exact inverse of [`dqft`]: applies `e^{j 2pi k2 x2/n2}` then
/// `e^{i 2pi k1 x1/n1}` on the right, with the same normalization.
pub fn idqft(f: &QuatGrid2D) -> QuatGrid2D {
    let s = 1.0 / fm::sqrt((f.n1 * f.n2) as f64);
    scaled(pass_i(&pass_j(f, 1.0), 1.0), s)
}

pub type SpectrumMap = dyn Fn(f64, f64) -> Quaternion + Send + Sync;

/// A sigma-bandlimited frequency-domain evaluator: defined on
/// `I = [-sigma, sigma]^2`, zero outside. `cells` is a piecewise-smoothness
/// hint: quadrature grids split each axis of `I` into that many cells so
/// cell-boundary discontinuities (interpolation spectra) stay off panel
/// interiors.
#[derive(Clone)]
pub struct SpectrumFn {
    sigma: f64,
    cells: usize,
    map: Arc<SpectrumMap>,
}

impl SpectrumFn {
    pub fn new(sigma: f64, f: impl Fn(f64, f64) -> Quaternion + Send + Sync + 'static) -> Self {
        assert!(sigma > 0.0, "bandwidth must be positive");
        Self {
            sigma,
            cells: 1,
            map: Arc::new(f),
        }
    }

    pub fn from_arc(sigma: f64, cells: usize, map: Arc<SpectrumMap>) -> Self {
        assert!(sigma > 0.0 && cells >= 1);
        Self { sigma, cells, map }
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        assert!(cells >= 1);
        self.cells = cells;
        self
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Evaluates the spectrum; zero outside `I`.
    #[inline]
    pub fn eval(&self, w1: f64, w2: f64) -> Quaternion {
        if fm::abs(w1) > self.sigma || fm::abs(w2) > self.sigma {
            Quaternion::ZERO
        } else {
            (self.map)(w1, w2)
        }
    }

    /// Cell-aligned quadrature grid over `I`.
    pub fn grid(&self, rule: &QuadratureRule) -> Grid2 {
        Grid2::square(-self.sigma, self.sigma, self.cells, rule)
    }
}

impl core::fmt::Debug for SpectrumFn {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SpectrumFn")
            .field("sigma", &self.sigma)
            .field("cells", &self.cells)
            .finish()
    }
}

/// Bandlimited synthesis
/// `f(x) = (1/2pi) int_I F(w) e^{j w2 x2} e^{i w1 x1} dw`.
pub fn synthesize(spec: &SpectrumFn, x: (f64, f64), rule: &QuadratureRule) -> Quaternion {
    let g = spec.grid(rule);
    let mut acc = Quaternion::ZERO;
    for (&w1, &wt1) in g.ax1.nodes.iter().zip(&g.ax1.weights) {
        let ki = rotor_i(w1 * x.0);
        for (&w2, &wt2) in g.ax2.nodes.iter().zip(&g.ax2.weights) {
            let v = spec.eval(w1, w2);
            acc += (v * rotor_j(w2 * x.1) * ki) * (wt1 * wt2);
        }
    }
    acc * (1.0 / TWO_PI)
}

/// Generalized translation
/// `f(x1 (-) y1, x2 (-) y2) = (1/2pi) int e^{-i w1 y1} e^{-j w2 y2} F(w)
/// e^{j w2 x2} e^{i w1 x1} dw`, factor order exactly as written.
pub fn gen_translate(
    spec: &SpectrumFn,
    x: (f64, f64),
    y: (f64, f64),
    rule: &QuadratureRule,
) -> Quaternion {
    let g = spec.grid(rule);
    let mut acc = Quaternion::ZERO;
    for (&w1, &wt1) in g.ax1.nodes.iter().zip(&g.ax1.weights) {
        let li = rotor_i(-w1 * y.0);
        let ri = rotor_i(w1 * x.0);
        for (&w2, &wt2) in g.ax2.nodes.iter().zip(&g.ax2.weights) {
            let v = spec.eval(w1, w2);
            acc += (li * rotor_j(-w2 * y.1) * v * rotor_j(w2 * x.1) * ri) * (wt1 * wt2);
        }
    }
    acc * (1.0 / TWO_PI)
}

/// Spectral product `G = F H` (F on the left). The convolution `f (*) h` is
/// the inverse QFT of `G`; evaluate it with [`synthesize`].
pub fn gen_convolve(f: &SpectrumFn, h: &SpectrumFn) -> SpectrumFn {
    let sigma = f.sigma.min(h.sigma);
    let cells = f.cells.max(h.cells);
    let (fm_, hm) = (f.map.clone(), h.map.clone());
    let (fs, hs) = (f.sigma, h.sigma);
    SpectrumFn::from_arc(
        sigma,
        cells,
        Arc::new(move |w1: f64, w2: f64| {
            if fm::abs(w1) > fs || fm::abs(w2) > fs || fm::abs(w1) > hs || fm::abs(w2) > hs {
                Quaternion::ZERO
            } else {
                fm_(w1, w2) * hm(w1, w2)
            }
        }),
    )
}

/// Result of the spatial-path convolution, with truncation metadata.
#[derive(Debug, Clone, Copy)]
pub struct SpatialConvolution {
    pub value: Quaternion,
    /// Crude exterior-mass estimate: max integrand magnitude on the box
    /// boundary times a unit-width ring area.
    pub tail_estimate: f64,
    pub half_width: f64,
    /// Set when `tail_estimate` exceeds the requested tolerance.
    pub warning: bool,
}

/// Spatial-path convolution
/// `(f (*) h)(x) = (1/2pi) int f(y) h(x1 (-) y1, x2 (-) y2) dy`
/// over the truncation box `[-half_width, half_width]^2` by nested
/// tensor-product quadrature (outer over `y`, inner the generalized
/// translation of `h`), contracted axis by axis.
///
/// Must agree with `synthesize(&gen_convolve(f, h), x, rule)` up to
/// quadrature and truncation error.
pub fn convolve_spatial(
    f_spec: &SpectrumFn,
    h_spec: &SpectrumFn,
    x: (f64, f64),
    rule: &QuadratureRule,
    half_width: f64,
    tol: f64,
) -> SpatialConvolution {
    assert!(half_width > 0.0);
    let gh = h_spec.grid(rule);
    let gf = f_spec.grid(rule);
    let (nh1, nh2) = (gh.ax1.len(), gh.ax2.len());
    let (nf1, nf2) = (gf.ax1.len(), gf.ax2.len());

    // Outer grid: keep the oscillation (bandwidth f.sigma + h.sigma per
    // axis) below ~6 rad per panel.
    let kappa = f_spec.sigma + h_spec.sigma;
    let panels = ((2.0 * half_width * kappa / 6.0) as usize).max(4);
    let ax_out = Axis::composite(
        -half_width,
        half_width,
        1,
        &QuadratureRule {
            panels,
            order: rule.order,
        },
    );
    let nb = ax_out.len();

    // P[i][j] = H(w) e^{j w2 x2} e^{i w1 x1}
    let mut p = vec![Quaternion::ZERO; nh1 * nh2];
    for (i, &w1) in gh.ax1.nodes.iter().enumerate() {
        let ri = rotor_i(w1 * x.0);
        for (j, &w2) in gh.ax2.nodes.iter().enumerate() {
            p[i * nh2 + j] = h_spec.eval(w1, w2) * rotor_j(w2 * x.1) * ri;
        }
    }

    // f on the outer grid, synthesized with axis contractions:
    // U[i][b] = sum_j w_j F(nu_i, nu_j) e^{j nu_j y_b}
    // f[a][b] = (1/2pi) sum_i w_i U[i][b] e^{i nu_i y_a}
    let mut fv = vec![Quaternion::ZERO; nf1 * nf2];
    for (i, &w1) in gf.ax1.nodes.iter().enumerate() {
        for (j, &w2) in gf.ax2.nodes.iter().enumerate() {
            fv[i * nf2 + j] = f_spec.eval(w1, w2);
        }
    }
    let mut u = vec![Quaternion::ZERO; nf1 * nb];
    for (j, (&w2, &wt2)) in gf.ax2.nodes.iter().zip(&gf.ax2.weights).enumerate() {
        for (b, &yb) in ax_out.nodes.iter().enumerate() {
            let rj = rotor_j(w2 * yb) * wt2;
            for i in 0..nf1 {
                u[i * nb + b] += fv[i * nf2 + j] * rj;
            }
        }
    }
    let mut f_grid = vec![Quaternion::ZERO; nb * nb];
    for (i, (&w1, &wt1)) in gf.ax1.nodes.iter().zip(&gf.ax1.weights).enumerate() {
        for (a, &ya) in ax_out.nodes.iter().enumerate() {
            let ri = rotor_i(w1 * ya) * (wt1 / TWO_PI);
            for b in 0..nb {
                f_grid[a * nb + b] += u[i * nb + b] * ri;
            }
        }
    }

    // S[i][b] = sum_j w_j e^{-j w2_j y_b} P[i][j]
    let mut s = vec![Quaternion::ZERO; nh1 * nb];
    for (j, (&w2, &wt2)) in gh.ax2.nodes.iter().zip(&gh.ax2.weights).enumerate() {
        for (b, &yb) in ax_out.nodes.iter().enumerate() {
            let rj = rotor_j(-w2 * yb) * wt2;
            for i in 0..nh1 {
                s[i * nb + b] += rj * p[i * nh2 + j];
            }
        }
    }

    // V[i][b] = sum_a W_a f(y_a, y_b) e^{-i w1_i y_a}
    let mut v = vec![Quaternion::ZERO; nh1 * nb];
    for (a, (&ya, &wa)) in ax_out.nodes.iter().zip(&ax_out.weights).enumerate() {
        for (i, &w1) in gh.ax1.nodes.iter().enumerate() {
            let ri = rotor_i(-w1 * ya) * wa;
            for b in 0..nb {
                v[i * nb + b] += f_grid[a * nb + b] * ri;
            }
        }
    }

    let mut value = Quaternion::ZERO;
    for (b, &wb) in ax_out.weights.iter().enumerate() {
        let mut inner = Quaternion::ZERO;
        for (i, &wi) in gh.ax1.weights.iter().enumerate() {
            inner += (v[i * nb + b] * s[i * nb + b]) * wi;
        }
        value += inner * wb;
    }
    value = value * (1.0 / (TWO_PI * TWO_PI));

    // Boundary-ring magnitude of the integrand f(y) h~(x (-) y).
    let mut ring_max = 0.0f64;
    let mut ring_at = |a: usize, b: usize| {
        let ya = ax_out.nodes[a];
        let mut ht = Quaternion::ZERO;
        for (i, (&w1, &wi)) in gh.ax1.nodes.iter().zip(&gh.ax1.weights).enumerate() {
            ht += (rotor_i(-w1 * ya) * s[i * nb + b]) * wi;
        }
        ht = ht * (1.0 / TWO_PI);
        let m = f_grid[a * nb + b].norm() * ht.norm();
        if m > ring_max {
            ring_max = m;
        }
    };
    for b in 0..nb {
        ring_at(0, b);
        ring_at(nb - 1, b);
    }
    for a in 0..nb {
        ring_at(a, 0);
        ring_at(a, nb - 1);
    }
    let tail_estimate = ring_max * 8.0 * half_width;

    SpatialConvolution {
        value,
        tail_estimate,
        half_width,
        warning: tail_estimate > tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{self, SplitMix64};
    use core::f64::consts::PI;
    use proptest::prelude::*;

    /// O(N^4) definition sum, the oracle the fast transform must match.
    fn dqft_brute(f: &QuatGrid2D) -> QuatGrid2D {
        let (n1, n2) = (f.n1(), f.n2());
        let s = 1.0 / ((n1 * n2) as f64).sqrt();
        QuatGrid2D::from_fn(n1, n2, |k1, k2| {
            let mut acc = Quaternion::ZERO;
            for x1 in 0..n1 {
                for x2 in 0..n2 {
                    let t1 = -TWO_PI * (k1 * x1) as f64 / n1 as f64;
                    let t2 = -TWO_PI * (k2 * x2) as f64 / n2 as f64;
                    acc += f.get(x1, x2) * rotor_i(t1) * rotor_j(t2);
                }
            }
            acc * s
        })
    }

    fn random_grid(seed: u64, n1: usize, n2: usize) -> QuatGrid2D {
        let mut rng = SplitMix64::new(seed);
        QuatGrid2D::from_fn(n1, n2, |_, _| rng.next_quat())
    }

    #[test]
    fn dqft_delta_is_flat() {
        let mut f = QuatGrid2D::zeros(4, 4);
        f.set(0, 0, Quaternion::ONE);
        let spec = dqft(&f);
        for k1 in 0..4 {
            for k2 in 0..4 {
                assert!((spec.get(k1, k2) - Quaternion::real(0.25)).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn dqft_constant_is_delta() {
        let f = QuatGrid2D::from_fn(4, 4, |_, _| Quaternion::ONE);
        let spec = dqft(&f);
        assert!((spec.get(0, 0) - Quaternion::real(4.0)).max_abs() < 1e-13);
        for k1 in 0..4 {
            for k2 in 0..4 {
                if (k1, k2) != (0, 0) {
                    assert!(spec.get(k1, k2).max_abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn dqft_matches_brute_force() {
        for (seed, n1, n2) in [(1u64, 8, 8), (2, 5, 3), (3, 16, 16), (4, 12, 16)] {
            let f = random_grid(seed, n1, n2);
            assert!(dqft(&f).max_abs_diff(&dqft_brute(&f)) < 1e-10);
        }
    }

    #[test]
    fn idqft_inverts_dqft() {
        let f = random_grid(9, 8, 8);
        assert!(idqft(&dqft(&f)).max_abs_diff(&f) < 1e-10);
    }

    #[test]
    fn idqft_of_flat_is_delta() {
        let flat = QuatGrid2D::from_fn(4, 4, |_, _| Quaternion::real(0.25));
        let f = idqft(&flat);
        assert!((f.get(0, 0) - Quaternion::ONE).max_abs() < 1e-13);
        let zero = QuatGrid2D::zeros(3, 3);
        assert!(idqft(&zero).max_abs_diff(&zero) == 0.0);
    }

    #[test]
    fn synthesize_flat_spectrum_at_origin() {
        let f = spectra::poly_const(Quaternion::ONE, PI);
        let v = synthesize(&f, (0.0, 0.0), &QuadratureRule::default());
        assert!((v - Quaternion::real(TWO_PI)).max_abs() < 1e-10);
    }

    #[test]
    fn synthesize_flat_spectrum_is_sinc_product() {
        // For F = 1 on I the j- and i-integrals factor into
        // (2/pi) sin(sigma x2) sin(sigma x1) / (x1 x2).
        let sigma = PI;
        let f = spectra::poly_const(Quaternion::ONE, sigma);
        for (x1, x2) in [(0.7, -0.3), (1.3, 0.9), (-0.25, -1.7)] {
            let v = synthesize(&f, (x1, x2), &QuadratureRule::default());
            let expected = 2.0 / PI * (sigma * x1).sin() * (sigma * x2).sin() / (x1 * x2);
            assert!((v - Quaternion::real(expected)).max_abs() < 1e-10);
        }
    }

    #[test]
    fn synthesize_odd_spectrum_vanishes_at_origin() {
        let f = SpectrumFn::new(PI, |w1, w2| Quaternion::real(w1) + Quaternion::J * w2);
        let v = synthesize(&f, (0.0, 0.0), &QuadratureRule::default());
        assert!(v.max_abs() < 1e-12);
    }

    #[test]
    fn translate_by_zero_is_synthesis() {
        let f = spectra::random_smooth(5, PI);
        let rule = QuadratureRule::default();
        for (x1, x2) in [(0.3, 0.4), (-1.1, 0.7)] {
            let a = gen_translate(&f, (x1, x2), (0.0, 0.0), &rule);
            let b = synthesize(&f, (x1, x2), &rule);
            assert!((a - b).max_abs() < 1e-12);
        }
    }

    #[test]
    fn translate_shifts_real_even_axis2_spectra() {
        // For real-valued F even in w2 the generalized translation
        // coincides with the ordinary shift of the synthesis.
        let f = SpectrumFn::new(PI, |w1, w2| {
            Quaternion::real((0.3 + 0.2 * w1 + w1 * w1 / 9.0) * (1.0 + 0.5 * (w2 * w2).cos()))
        });
        let rule = QuadratureRule::default();
        for (x, y) in [((0.4, -0.2), (0.9, 0.5)), ((1.2, 0.6), (-0.3, 1.4))] {
            let a = gen_translate(&f, x, y, &rule);
            let b = synthesize(&f, (x.0 - y.0, x.1 - y.1), &rule);
            assert!((a - b).max_abs() < 1e-9, "({a:?}) vs ({b:?})");
        }
    }

    #[test]
    fn translate_is_not_ordinary_shift_in_general() {
        // Negative control: a generic i-complex spectrum does not shift
        // ordinarily (the j-kernel sandwich conjugates its i-part).
        let f = SpectrumFn::new(PI, |w1, w2| {
            Quaternion::new(0.4 + w2 / 6.0, 0.8 + w1 / 3.0 + w2 / 5.0, 0.0, 0.0)
        });
        let rule = QuadratureRule::default();
        let x = (0.7, 0.9);
        let y = (0.4, 1.1);
        let a = gen_translate(&f, x, y, &rule);
        let b = synthesize(&f, (x.0 - y.0, x.1 - y.1), &rule);
        assert!((a - b).max_abs() > 1e-3);
    }

    #[test]
    fn convolve_identity_filter() {
        let f = spectra::random_smooth(8, PI);
        let one = spectra::poly_const(Quaternion::ONE, PI);
        let g = gen_convolve(&f, &one);
        let rule = QuadratureRule::default();
        let a = synthesize(&g, (0.6, -0.8), &rule);
        let b = synthesize(&f, (0.6, -0.8), &rule);
        assert!((a - b).max_abs() < 1e-12);
    }

    #[test]
    fn convolve_order_matters() {
        let f = spectra::poly_const(Quaternion::I, PI);
        let h = spectra::poly_const(Quaternion::J, PI);
        let g = gen_convolve(&f, &h);
        assert_eq!(g.eval(0.1, 0.2), Quaternion::K);
        let swapped = gen_convolve(&h, &f);
        assert_eq!(swapped.eval(0.1, 0.2), -Quaternion::K);
    }

    #[test]
    fn convolve_rational_filter_is_identity_at_origin() {
        // H(0, 0) = 1 for the rational response, so G(0, 0) = F(0, 0).
        let f = spectra::random_smooth(4, PI);
        let h = SpectrumFn::new(PI, |w1, w2| {
            let pj = Quaternion::new(1.0, 0.0, -w2, 0.0) * (1.0 / (1.0 + w2 * w2));
            let pi_ = Quaternion::new(1.0, -w1, 0.0, 0.0) * (1.0 / (1.0 + w1 * w1));
            pj * pi_
        });
        let g = gen_convolve(&f, &h);
        assert!((g.eval(0.0, 0.0) - f.eval(0.0, 0.0)).max_abs() < 1e-15);
    }

    #[test]
    fn real_even_spectrum_synthesis_symmetries() {
        // For a real spectrum even in each variable the components of the
        // synthesized signal have definite parities: w even/even, the
        // i-part odd in x1, the j-part odd in x2, the k-part odd in both.
        let f = spectra::gauss_with(Quaternion::ONE, PI, PI / 3.0);
        let rule = QuadratureRule::default();
        for (x1, x2) in [(0.6, 0.9), (1.4, -0.3)] {
            let v = synthesize(&f, (x1, x2), &rule);
            let m1 = synthesize(&f, (-x1, x2), &rule);
            let m2 = synthesize(&f, (x1, -x2), &rule);
            let expect_m1 = Quaternion::new(v.w, -v.x, v.y, -v.z);
            let expect_m2 = Quaternion::new(v.w, v.x, -v.y, -v.z);
            assert!((m1 - expect_m1).max_abs() < 1e-12);
            assert!((m2 - expect_m2).max_abs() < 1e-12);
        }
    }

    #[test]
    fn spatial_identity_filter_matches_synthesis() {
        // h = F^{-1}(1) acts as the identity under (*): the spatial path
        // must reproduce f.
        let f = spectra::gauss_with(Quaternion::new(0.8, 0.3, -0.4, 0.2), PI, PI / 6.0);
        let one = spectra::poly_const(Quaternion::ONE, PI);
        let rule = QuadratureRule::default();
        let x = (0.45, -0.35);
        let got = convolve_spatial(&f, &one, x, &rule, 12.0, 1e-6);
        let want = synthesize(&f, x, &rule);
        assert!((got.value - want).max_abs() < 1e-6);
        assert!(!got.warning, "tail estimate {}", got.tail_estimate);
    }

    #[test]
    fn spatial_zero_signal_is_zero() {
        let zero = spectra::poly_const(Quaternion::ZERO, PI);
        let h = spectra::poly_const(Quaternion::ONE, PI);
        let got = convolve_spatial(&zero, &h, (0.3, 0.3), &QuadratureRule::default(), 6.0, 1e-6);
        assert_eq!(got.value, Quaternion::ZERO);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn parseval(seed in 0u64..1 << 40) {
            let f = random_grid(seed, 8, 8);
            let lhs = dqft(&f).norm_l2();
            let rhs = f.norm_l2();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }

        #[test]
        fn real_linearity(seed in 0u64..1 << 40, a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let f = random_grid(seed, 6, 5);
            let g = random_grid(seed ^ 0xabcd, 6, 5);
            let mixed = QuatGrid2D::from_fn(6, 5, |r1, r2| f.get(r1, r2) * a + g.get(r1, r2) * b);
            let lhs = dqft(&mixed);
            let ff = dqft(&f);
            let gg = dqft(&g);
            let rhs = QuatGrid2D::from_fn(6, 5, |r1, r2| ff.get(r1, r2) * a + gg.get(r1, r2) * b);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + lhs.norm_l2()));
        }

        #[test]
        fn brute_force_agreement_small(seed in 0u64..1 << 40, n1 in 1usize..7, n2 in 1usize..7) {
            let f = random_grid(seed, n1, n2);
            prop_assert!(dqft(&f).max_abs_diff(&dqft_brute(&f)) <= 1e-10);
        }
    }
}
