//! Composite Gauss-Legendre quadrature on tensor-product grids.
//!
//! A [`QuadratureRule`] fixes the panel count and Gauss order used per
//! "cell" of an axis. Spectral integrals subdivide their domain into the
//! partition's cells first so piecewise-defined integrands stay smooth on
//! every panel. Node and weight order is fixed (ascending nodes, row-major
//! over the two axes), making every sum deterministic.

use alloc::vec::Vec;

use crate::fm;
use crate::quat::Quaternion;

/// Panels and Gauss-Legendre order per cell axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self {
            panels: 8,
            order: 12,
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss order must be positive");
    let n = order;
    let mut nodes = alloc::vec![0.0f64; n];
    let mut weights = alloc::vec![0.0f64; n];
    for k in 0..n.div_ceil(2) {
        let mut x = fm::cos(core::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative.
            let mut p0 = 1.0;
            let mut p1 = x;
            for m in 2..=n {
                let mf = m as f64;
                let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if fm::abs(dx) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -fm::abs(x);
        nodes[n - 1 - k] = fm::abs(x);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite quadrature along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Axis {
    /// Subdivides `[lo, hi]` into `cells` equal cells, each into
    /// `rule.panels` panels carrying `rule.order` Gauss nodes.
    pub fn composite(lo: f64, hi: f64, cells: usize, rule: &QuadratureRule) -> Self {
        assert!(hi > lo && cells >= 1 && rule.panels >= 1);
        let (base_nodes, base_weights) = gauss_legendre(rule.order);
        let segments = cells * rule.panels;
        let width = (hi - lo) / segments as f64;
        let mut nodes = Vec::with_capacity(segments * rule.order);
        let mut weights = Vec::with_capacity(segments * rule.order);
        for s in 0..segments {
            let a = lo + s as f64 * width;
            let mid = a + 0.5 * width;
            let half = 0.5 * width;
            for (t, w) in base_nodes.iter().zip(&base_weights) {
                nodes.push(mid + half * t);
                weights.push(half * w);
            }
        }
        Axis { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain 1D quadrature of a real integrand.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(x);
        }
        acc
    }
}

/// Tensor-product grid over a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    pub ax1: Axis,
    pub ax2: Axis,
}

impl Grid2 {
    pub fn new(ax1: Axis, ax2: Axis) -> Self {
        Self { ax1, ax2 }
    }

    /// Square grid over `[lo, hi]^2` with the same cell count per axis.
    pub fn square(lo: f64, hi: f64, cells: usize, rule: &QuadratureRule) -> Self {
        let ax = Axis::composite(lo, hi, cells, rule);
        Self {
            ax2: ax.clone(),
            ax1: ax,
        }
    }

    /// Quadrature of a quaternion-valued integrand, axis-1 major.
    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> Quaternion) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for (&x1, &w1) in self.ax1.nodes.iter().zip(&self.ax1.weights) {
            for (&x2, &w2) in self.ax2.nodes.iter().zip(&self.ax2.weights) {
                acc += f(x1, x2) * (w1 * w2);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_nodes_are_symmetric_and_positive() {
        for order in 1..=16 {
            let (nodes, weights) = gauss_legendre(order);
            let total: f64 = weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "order {order}");
            for k in 0..order {
                assert!(weights[k] > 0.0);
                assert!((nodes[k] + nodes[order - 1 - k]).abs() < 1e-13);
                assert!(nodes[k].abs() < 1.0);
            }
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // Order p is exact through degree 2p-1.
        let ax = Axis::composite(
            -1.0,
            2.0,
            1,
            &QuadratureRule {
                panels: 1,
                order: 6,
            },
        );
        let got = ax.integrate(|x| x.powi(11));
        let expected = (2.0f64.powi(12) - (-1.0f64).powi(12)) / 12.0;
        assert!((got - expected).abs() < 1e-12 * expected.abs());
    }

    #[test]
    fn composite_matches_single_panel() {
        let rule = QuadratureRule {
            panels: 4,
            order: 8,
        };
        let ax = Axis::composite(0.0, core::f64::consts::PI, 2, &rule);
        let got = ax.integrate(fm::sin);
        assert!((got - 2.0).abs() < 1e-14);
    }

    #[test]
    fn grid_integrates_separable() {
        let grid = Grid2::square(0.0, 1.0, 1, &QuadratureRule::default());
        let got = grid.integrate(|x, y| Quaternion::real(x * y));
        assert!((got.w - 0.25).abs() < 1e-14);
        assert_eq!(got.vec(), Quaternion::ZERO);
    }
}
