//! Float math routed through `libm` so the crate builds without `std` and
//! produces the same bits everywhere.

#![allow(dead_code)]

pub use libm::{cos, erf, exp, fabs as abs, floor, sin, sqrt};

#[inline]
pub fn sincos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

/// Small integer power by repeated squaring (f64::powi is std-only).
#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}
