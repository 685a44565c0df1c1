//! Gauss–Hermite quadrature for integrals of the form `∫ e^{-t²} f(t) dt`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

/// `π^{-1/4}`.
const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

const RESCALE: f64 = 1e150;

/// Number of eigenvalues below `x` of the `n × n` Hermite Jacobi matrix.
fn sturm_count(x: f64, n: usize) -> usize {
    let mut d = -x;
    let mut count = usize::from(d < 0.0);
    for k in 1..n {
        let b2 = k as f64 / 2.0;
        let prev = if d == 0.0 { f64::MIN_POSITIVE } else { d };
        d = -x - b2 / prev;
        count += usize::from(d < 0.0);
    }
    count
}

/// Orthonormal Hermite values `(h_n(z), h_{n−1}(z))` divided by
/// `exp(log_scale)`, rescaled on the way to avoid overflow at large `|z|`.
fn hermite_recurrence(z: f64, n: usize) -> (f64, f64, f64) {
    let mut p1 = PI_POW_NEG_QUARTER;
    let mut p2 = 0.0;
    let mut log_scale = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * sqrt(2.0 / (jf + 1.0)) * p2 - sqrt(jf / (jf + 1.0)) * p3;
        if p1.abs() > RESCALE {
            p1 /= RESCALE;
            p2 /= RESCALE;
            log_scale += libm::log(RESCALE);
        }
    }
    (p1, p2, log_scale)
}

/// Nodes and weights of an `n`-point Gauss–Hermite rule (weight `e^{-t²}`).
///
/// Exact for polynomials of degree `2n − 1`. Nodes are stored ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Compute an `order`-point rule. `order` must be at least 1.
    ///
    /// Nodes are the eigenvalues of the Hermite Jacobi matrix (zero diagonal,
    /// off-diagonal `√(k/2)`), located by Sturm-sequence bisection and then
    /// polished by Newton iteration on the orthonormal Hermite recurrence.
    /// Weights are `2 / (√(2n)·h_{n−1}(t))²`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Hermite order must be positive");
        let n = order;
        let half = n / 2;
        let bound = sqrt(2.0 * n as f64) + 1.0;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        // Positive roots are eigenvalues n-half .. n-1 in ascending order.
        let mut lo = 0.0;
        for m in (n - half)..n {
            let mut hi = bound;
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(mid, n) > m {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-7 {
                    break;
                }
            }
            let mut z = 0.5 * (lo + hi);
            for _ in 0..8 {
                let (p_n, p_prev, _) = hermite_recurrence(z, n);
                let step = p_n / (sqrt(2.0 * n as f64) * p_prev);
                z -= step;
                if step.abs() <= 1e-16 * z.abs().max(1.0) {
                    break;
                }
            }
            let (_, p_prev, log_scale) = hermite_recurrence(z, n);
            let pp = sqrt(2.0 * n as f64) * p_prev.abs();
            let weight = libm::exp(core::f64::consts::LN_2 - 2.0 * (libm::log(pp) + log_scale));
            x[m] = z;
            w[m] = weight;
            lo = z;
            x[n - 1 - m] = -z;
            w[n - 1 - m] = weight;
        }
        if n % 2 == 1 {
            let (_, p_prev, log_scale) = hermite_recurrence(0.0, n);
            let pp = sqrt(2.0 * n as f64) * p_prev.abs();
            w[half] = libm::exp(core::f64::consts::LN_2 - 2.0 * (libm::log(pp) + log_scale));
        }
        GaussHermite {
            nodes: x,
            weights: w,
        }
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights matching [`nodes`](Self::nodes).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ e^{-t²} f(t) dt`, summed in node order.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Quadrature settings for the mixed-pair estimator.
///
/// Holds a ladder of rules starting at the configured order and doubling up
/// to [`MAX_NODES`](Self::MAX_NODES) (at least two rungs). An integral is
/// accepted at the first pair of consecutive rungs that agree within the
/// relative tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    tolerance: f64,
    rules: Vec<GaussHermite>,
}

impl QuadratureSpec {
    /// Default number of nodes.
    pub const DEFAULT_ORDER: usize = 64;
    /// Default relative agreement required between order `n` and `2n`.
    pub const DEFAULT_TOLERANCE: f64 = 1e-8;
    /// Largest accepted base order.
    pub const MAX_ORDER: usize = 512;
    /// Largest rule on the ladder, unless the base order forces more.
    pub const MAX_NODES: usize = 1024;

    /// Prepare the ladder starting at `order` nodes. `order` must be even,
    /// at least 8 and at most [`MAX_ORDER`](Self::MAX_ORDER).
    pub fn new(order: usize, tolerance: f64) -> Result<Self> {
        if !(8..=Self::MAX_ORDER).contains(&order) || order % 2 != 0 {
            return Err(Error::InvalidQuadratureOrder(order));
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidTolerance(tolerance));
        }
        let mut rules = vec![GaussHermite::new(order), GaussHermite::new(2 * order)];
        let mut next = 4 * order;
        while next <= Self::MAX_NODES {
            rules.push(GaussHermite::new(next));
            next *= 2;
        }
        Ok(QuadratureSpec { tolerance, rules })
    }

    /// Number of nodes of the base rule.
    pub fn order(&self) -> usize {
        self.rules[0].order()
    }

    /// Relative tolerance of the order-doubling check.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Base rule.
    pub fn base(&self) -> &GaussHermite {
        &self.rules[0]
    }

    /// Rule with twice as many nodes as the base.
    pub fn refined(&self) -> &GaussHermite {
        &self.rules[1]
    }

    /// All rules, each twice the order of the previous one.
    pub fn ladder(&self) -> &[GaussHermite] {
        &self.rules
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::new(Self::DEFAULT_ORDER, Self::DEFAULT_TOLERANCE)
            .expect("default quadrature settings are valid")
    }
}
