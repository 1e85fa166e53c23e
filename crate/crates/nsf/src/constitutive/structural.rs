//! Structural pressure laws P(Z), Z = ϱ/θ^{3/2}.
//!
//! A structural law is a nondecreasing function with P(0) = 0, P′(0) > 0,
//! together with three constants that the existence theory leans on:
//!
//! * `p_inf` — the limit of P(Z)/Z^{5/3} as Z → ∞ (degenerate-gas coefficient);
//! * `p_bar` — an upper bound for (5/3)P(Z) − P′(Z)·Z;
//! * `z_bar` — the threshold where the degenerate branch takes over, when the
//!   law has one.
//!
//! The companion entropy integrand is S′(Z) = −(3/2)·((5/3)P − P′Z)/Z²,
//! normalized (when the tail allows it) by S(Z) → 0 as Z → ∞.

use std::fmt;
use std::sync::Arc;

use crate::numerics::simpson_with_breaks;
use crate::Error;

/// Cutoff used by the quadrature fallback for the entropy normalization.
pub const ENTROPY_CUTOFF: f64 = 1e8;

/// Interface every structural pressure law provides.
///
/// Derivatives at kink locations are right limits.
pub trait StructuralLaw: fmt::Debug + Send + Sync {
    fn eval(&self, z: f64) -> f64;
    fn deriv(&self, z: f64) -> f64;
    fn deriv2(&self, z: f64) -> f64;

    /// Limit of P(Z)/Z^{5/3} at infinity; zero when the law has no
    /// degenerate tail (then the far-field hypotheses fail and the
    /// structural scan will say so).
    fn p_inf(&self) -> f64;

    /// Declared upper bound for (5/3)P − P′Z; may be infinite.
    fn p_bar(&self) -> f64;

    /// Degeneracy threshold, when meaningful.
    fn z_bar(&self) -> Option<f64>;

    /// Entropy S(Z) with S(∞) = 0 whenever the decay integral converges.
    ///
    /// Default implementation: adaptive quadrature of −S′ from `z` to
    /// [`ENTROPY_CUTOFF`] plus the analytic tail (3/2)·p_bar/cutoff estimate
    /// when `p_bar` is finite. Laws with closed forms override this.
    fn entropy(&self, z: f64) -> f64 {
        assert!(z > 0.0, "entropy needs Z > 0");
        if z >= ENTROPY_CUTOFF {
            return 1.5 * self.window_gap(z) / z;
        }
        // Integrate −S′ in u = ln Z: the eight-decade Z range becomes a
        // short interval and the integrand (3/2)·gap(e^u)/e^u decays
        // exponentially instead of quadratically.
        let integrand = |u: f64| {
            let y = u.exp();
            1.5 * self.window_gap(y) / y
        };
        let breaks: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .filter(|&b| b > 0.0)
            .map(f64::ln)
            .collect();
        let body = simpson_with_breaks(&integrand, z.ln(), ENTROPY_CUTOFF.ln(), &breaks, 1e-12);
        let tail = if self.p_bar().is_finite() {
            1.5 * self.window_gap(ENTROPY_CUTOFF) / ENTROPY_CUTOFF
        } else {
            0.0
        };
        body + tail
    }

    /// (5/3)P(Z) − P′(Z)·Z, the quantity `p_bar` bounds.
    fn window_gap(&self, z: f64) -> f64 {
        (5.0 / 3.0) * self.eval(z) - self.deriv(z) * z
    }

    /// Kink locations, for quadratures that must split there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Jumps of P′ as (location, jump) pairs: the singular part of the
    /// distributional curvature. Empty for C¹ laws.
    fn slope_jumps(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }

    /// Smallest admissible Z (nonzero only for mollified laws).
    fn domain_min(&self) -> f64 {
        0.0
    }
}

/// Shared handle to a structural law.
pub type LawHandle = Arc<dyn StructuralLaw>;

/// The classical P(Z) = Z law. Included as a reference point: it has no
/// degenerate tail, so `p_inf = 0`, `p_bar = ∞`, and the far-field
/// hypotheses fail. Entropy uses the S(1) = 0 convention because the
/// S(∞) = 0 normalization does not exist here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGasLaw;

impl StructuralLaw for IdealGasLaw {
    fn eval(&self, z: f64) -> f64 {
        z
    }
    fn deriv(&self, _z: f64) -> f64 {
        1.0
    }
    fn deriv2(&self, _z: f64) -> f64 {
        0.0
    }
    fn p_inf(&self) -> f64 {
        0.0
    }
    fn p_bar(&self) -> f64 {
        f64::INFINITY
    }
    fn z_bar(&self) -> Option<f64> {
        None
    }
    fn entropy(&self, z: f64) -> f64 {
        assert!(z > 0.0);
        -z.ln()
    }
}

/// Piecewise-linear structural law with a C¹ degenerate tail.
///
/// Knots (z_k, p_k) start at (0, 0); beyond the last knot the law continues
/// as A·Z^{5/3} + B with A, B matched to the last value and slope. The
/// one-knot case with slope 1 is the iconic two-branch law: P(Z) = Z up to
/// Z̄ and (3/5)Z̄^{−2/3}·Z^{5/3} + (2/5)Z̄ beyond.
#[derive(Clone)]
pub struct PiecewiseLaw {
    knots: Vec<(f64, f64)>,
    slopes: Vec<f64>,
    tail_a: f64,
    tail_b: f64,
    p_bar: f64,
    /// S at each knot, from the exact segment antiderivatives.
    entropy_knots: Vec<f64>,
}

impl fmt::Debug for PiecewiseLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseLaw")
            .field("knots", &self.knots)
            .field("tail_a", &self.tail_a)
            .field("tail_b", &self.tail_b)
            .finish()
    }
}

impl PiecewiseLaw {
    /// The iconic two-branch law with threshold `z_bar`.
    pub fn iconic(z_bar: f64) -> Result<Self, Error> {
        if !(z_bar > 0.0) || !z_bar.is_finite() {
            return Err(Error::domain(format!("z_bar must be positive, got {z_bar}")));
        }
        Self::from_table(&[(0.0, 0.0), (z_bar, z_bar)])
    }

    /// General monotone convex table. Requirements: first knot (0, 0),
    /// strictly increasing z, positive first slope, nondecreasing slopes.
    pub fn from_table(knots: &[(f64, f64)]) -> Result<Self, Error> {
        if knots.len() < 2 {
            return Err(Error::domain("need at least two knots"));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::domain("first knot must be (0, 0)"));
        }
        let mut slopes = Vec::with_capacity(knots.len() - 1);
        for w in knots.windows(2) {
            let dz = w[1].0 - w[0].0;
            if dz <= 0.0 {
                return Err(Error::domain("knot abscissae must be strictly increasing"));
            }
            slopes.push((w[1].1 - w[0].1) / dz);
        }
        if slopes[0] <= 0.0 {
            return Err(Error::domain("P must be strictly increasing from 0"));
        }
        for w in slopes.windows(2) {
            if w[1] < w[0] - 1e-14 * w[0].abs() {
                return Err(Error::domain("slopes must be nondecreasing (convexity)"));
            }
        }
        let (z_last, p_last) = *knots.last().unwrap();
        let b_last = *slopes.last().unwrap();
        // Tail A·Z^{5/3} + B matched in value and slope at the last knot.
        let tail_a = 0.6 * b_last * z_last.powf(-2.0 / 3.0);
        let tail_b = p_last - tail_a * z_last.powf(5.0 / 3.0);
        if tail_b < -1e-12 * p_last.max(1.0) {
            return Err(Error::domain(
                "table is too concave at the last knot for a degenerate tail",
            ));
        }

        // (5/3)P − P′Z is linear per segment, so its sup is at a knot or at
        // the tail constant (5/3)·B.
        let mut p_bar: f64 = (5.0 / 3.0) * tail_b;
        for (k, w) in knots.windows(2).enumerate() {
            for &(z, p) in &[w[0], w[1]] {
                p_bar = p_bar.max((5.0 / 3.0) * p - slopes[k] * z);
            }
        }

        // Entropy at knots, integrating S′ segment by segment from the tail.
        // Segment k: P = a + b·z, S′ = −(5/2)a/z² − b/z, antiderivative
        // A(z) = (5/2)a/z − b·ln z.
        let mut entropy_knots = vec![0.0; knots.len()];
        entropy_knots[knots.len() - 1] = 2.5 * tail_b / z_last;
        for k in (1..knots.len()).rev() {
            let (z_lo, p_lo) = knots[k - 1];
            let (z_hi, _) = knots[k];
            let b = slopes[k - 1];
            let a = p_lo - b * z_lo;
            let anti = |z: f64| 2.5 * a / z - b * z.ln();
            // First segment starts at z = 0 where S diverges; the knot value
            // there is never used (a = 0 on that segment keeps eval finite).
            entropy_knots[k - 1] = if z_lo > 0.0 {
                entropy_knots[k] - anti(z_hi) + anti(z_lo)
            } else {
                f64::INFINITY
            };
        }

        Ok(PiecewiseLaw {
            knots: knots.to_vec(),
            slopes,
            tail_a,
            tail_b,
            p_bar,
            entropy_knots,
        })
    }

    fn z_last(&self) -> f64 {
        self.knots.last().unwrap().0
    }

    /// Index of the segment containing z (z below the tail).
    fn segment(&self, z: f64) -> usize {
        debug_assert!(z < self.z_last());
        // Tables are tiny; linear scan beats binary search bookkeeping.
        for (k, w) in self.knots.windows(2).enumerate() {
            if z < w[1].0 {
                return k;
            }
        }
        self.slopes.len() - 1
    }

}

impl StructuralLaw for PiecewiseLaw {
    fn eval(&self, z: f64) -> f64 {
        assert!(z >= 0.0, "structural law needs Z >= 0");
        if z >= self.z_last() {
            self.tail_a * z.powf(5.0 / 3.0) + self.tail_b
        } else {
            let k = self.segment(z);
            let (z0, p0) = self.knots[k];
            p0 + self.slopes[k] * (z - z0)
        }
    }

    fn deriv(&self, z: f64) -> f64 {
        assert!(z >= 0.0);
        if z >= self.z_last() {
            (5.0 / 3.0) * self.tail_a * z.powf(2.0 / 3.0)
        } else {
            self.slopes[self.segment(z)]
        }
    }

    fn deriv2(&self, z: f64) -> f64 {
        assert!(z >= 0.0);
        if z >= self.z_last() {
            (10.0 / 9.0) * self.tail_a * z.powf(-1.0 / 3.0)
        } else {
            0.0
        }
    }

    fn p_inf(&self) -> f64 {
        self.tail_a
    }

    fn p_bar(&self) -> f64 {
        self.p_bar
    }

    fn z_bar(&self) -> Option<f64> {
        Some(self.z_last())
    }

    fn entropy(&self, z: f64) -> f64 {
        assert!(z > 0.0);
        if z >= self.z_last() {
            // Tail: (5/3)P − P′Z = (5/3)B, so S = (5/2)B/Z exactly.
            return 2.5 * self.tail_b / z;
        }
        let k = self.segment(z);
        let (z_lo, p_lo) = self.knots[k];
        let z_hi = self.knots[k + 1].0;
        let b = self.slopes[k];
        let a = p_lo - b * z_lo;
        let anti = |y: f64| 2.5 * a / y - b * y.ln();
        self.entropy_knots[k + 1] - anti(z_hi) + anti(z)
    }

    /// Branchwise form without the cancellation of the generic
    /// (5/3)P − P′Z: per segment P = a + bZ the gap is (5/3)a + (2/3)bZ,
    /// and on the tail it is the constant (5/3)B exactly.
    fn window_gap(&self, z: f64) -> f64 {
        assert!(z >= 0.0);
        if z >= self.z_last() {
            (5.0 / 3.0) * self.tail_b
        } else {
            let k = self.segment(z);
            let (z0, p0) = self.knots[k];
            let b = self.slopes[k];
            let a = p0 - b * z0;
            (5.0 / 3.0) * a + (2.0 / 3.0) * b * z
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.knots.iter().skip(1).map(|&(z, _)| z).collect()
    }

    fn slope_jumps(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for k in 1..self.slopes.len() {
            let jump = self.slopes[k] - self.slopes[k - 1];
            if jump != 0.0 {
                out.push((self.knots[k].0, jump));
            }
        }
        // Tail joins with matched slope, so no jump at z_last.
        out
    }
}
