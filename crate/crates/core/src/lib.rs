//! Quaternion-valued signal processing built on the right-sided quaternion
//! Fourier transform (QFT).
//!
//! The crate provides:
//!
//! - exact quaternion scalar arithmetic ([`quat`]),
//! - dense quaternion matrices inverted through their complex adjoint
//!   ([`linalg`]),
//! - the discrete and quadrature-based right-sided QFT together with the
//!   generalized translation and convolution ([`qft`]),
//! - multichannel generalized sampling expansions for bandlimited
//!   quaternion signals, including the oversampling, rational-filter and
//!   derivative-sampling filter banks ([`gse`]),
//! - the quaternion linear canonical transform (QLCT) and its
//!   single-channel sampling theorem ([`qlct`]),
//! - seeded test spectra for reproducible experiments ([`spectra`]).
//!
//! The crate is `no_std` (with `alloc`); all float math is routed through
//! `libm` so results are bit-identical with and without the standard
//! library. Everything here is a pure function over immutable values:
//! evaluation order inside each operation is fixed, so results do not
//! depend on the caller's threading.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
mod fm;
pub mod gse;
pub mod linalg;
pub mod qft;
pub mod qlct;
pub mod quadrature;
pub mod quat;
pub mod spectra;

pub use error::{Error, Result};
pub use quat::{qexp, Quaternion};
