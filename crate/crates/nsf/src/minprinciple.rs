//! The explicit temperature floor: a reaction constant M built from the
//! structural constants, a decaying level Y(t) solving dY/dt = -MY^2, and
//! the pointwise comparison V = K(theta) - Y(t) >= 0 that turns "the
//! temperature stays positive" into a checkable inequality with an explicit
//! schedule K^{-1}(Y(t)).

use crate::constitutive::{StructuralConstants, TransportLaws};
use crate::Error;

/// Absolute tolerance on the comparison value V below which a grid point
/// counts as a violation. Sits above the discretization noise floor at the
/// resolutions this crate runs.
pub const TOL_VIOLATION: f64 = 1e-9;

/// Coefficient convention for the reaction constant. Two structural
/// combinations are in circulation; both depend only on scale-free
/// constants, so either yields a valid schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MVariant {
    /// c = e_hi / kappa_ratio_lo, from completing the square in the
    /// reaction estimate Lambda d^2 - c Theta d >= -(c^2/4Lambda) Theta^2.
    #[default]
    Derived,
    /// c = (kappa_ratio_hi / kappa_ratio_lo) * e_lo, the alternative
    /// ratio-weighted coefficient.
    Alternative,
}

impl MVariant {
    pub fn name(self) -> &'static str {
        match self {
            MVariant::Derived => "derived",
            MVariant::Alternative => "alternative",
        }
    }
}

/// Reaction constant M = c^2 / (4 Lambda) controlling how fast the
/// temperature floor decays.
pub fn derive_m(sc: &StructuralConstants, variant: MVariant) -> Result<f64, Error> {
    if !(sc.lambda > 0.0) {
        return Err(Error::hypothesis(format!(
            "conductivity-viscosity floor Lambda must be positive for a temperature bound, got {}",
            sc.lambda
        )));
    }
    if !(sc.kappa_ratio_lo > 0.0) {
        return Err(Error::hypothesis(format!(
            "primitive ratio lower constant must be positive, got {}",
            sc.kappa_ratio_lo
        )));
    }
    let c = match variant {
        MVariant::Derived => sc.e_hi / sc.kappa_ratio_lo,
        MVariant::Alternative => (sc.kappa_ratio_hi / sc.kappa_ratio_lo) * sc.e_lo,
    };
    Ok(c * c / (4.0 * sc.lambda))
}

/// Initial level Y0 = (1/2) min{min K(theta0), min K(theta_B)}: half the
/// smallest conductivity primitive over the initial field and the boundary
/// trace samples. K is increasing, so the min passes through it.
pub fn initial_level(
    theta0: &[f64],
    theta_b: &[f64],
    laws: &TransportLaws,
) -> Result<f64, Error> {
    if theta0.is_empty() || theta_b.is_empty() {
        return Err(Error::domain(
            "initial level needs a nonempty field and boundary trace",
        ));
    }
    let mut min_theta = f64::INFINITY;
    for &th in theta0.iter().chain(theta_b) {
        if !(th > 0.0 && th.is_finite()) {
            return Err(Error::domain(format!(
                "initial level needs strictly positive temperatures, got {th}"
            )));
        }
        min_theta = min_theta.min(th);
    }
    Ok(0.5 * laws.kappa_primitive(min_theta))
}

/// The subsolution Y(t) = (1/Y0 + Mt)^{-1}, the exact solution of
/// dY/dt = -MY^2 with Y(0) = Y0.
pub fn subsolution(y0: f64, m: f64, t: f64) -> f64 {
    assert!(y0 > 0.0 && m >= 0.0 && t >= 0.0);
    // Algebraically identical, but avoids the 1/y0 blowup for tiny y0.
    y0 / (1.0 + y0 * m * t)
}

/// Everything needed to evaluate the temperature floor at any time:
/// the initial level, the reaction constant, and the conductivity
/// primitive pair (K, K^{-1}).
#[derive(Debug, Clone)]
pub struct BoundSchedule {
    y0: f64,
    m: f64,
    laws: TransportLaws,
}

impl BoundSchedule {
    pub fn new(y0: f64, m: f64, laws: TransportLaws) -> Result<Self, Error> {
        if !(y0 > 0.0 && y0.is_finite()) {
            return Err(Error::domain(format!(
                "initial level must be positive and finite, got {y0}"
            )));
        }
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::domain(format!(
                "reaction constant must be nonnegative and finite, got {m}"
            )));
        }
        Ok(BoundSchedule { y0, m, laws })
    }

    /// Builds the schedule for given data: Y0 from the two-way min, M from
    /// the structural constants.
    pub fn derive(
        theta0: &[f64],
        theta_b: &[f64],
        laws: &TransportLaws,
        sc: &StructuralConstants,
        variant: MVariant,
    ) -> Result<Self, Error> {
        let y0 = initial_level(theta0, theta_b, laws)?;
        let m = derive_m(sc, variant)?;
        BoundSchedule::new(y0, m, laws.clone())
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn y_at(&self, t: f64) -> f64 {
        subsolution(self.y0, self.m, t)
    }

    /// The temperature floor K^{-1}(Y(t)): positive and nonincreasing.
    pub fn bound_at(&self, t: f64) -> f64 {
        self.laws
            .invert_kappa_primitive(self.y_at(t))
            .expect("subsolution level stays positive")
    }

    /// Evaluates one snapshot against the schedule. `xs` and `theta` pair
    /// coordinates with cell temperatures.
    pub fn check_field(&self, t: f64, xs: &[f64], theta: &[f64]) -> SnapshotCheck {
        assert_eq!(xs.len(), theta.len());
        assert!(!theta.is_empty());
        let y = self.y_at(t);
        let bound = self.bound_at(t);
        let mut check = SnapshotCheck {
            t,
            min_theta: f64::INFINITY,
            bound,
            v_min: f64::INFINITY,
            violations: 0,
            worst_margin: f64::INFINITY,
            worst_x: f64::NAN,
        };
        for (&x, &th) in xs.iter().zip(theta) {
            assert!(th > 0.0, "temperature must stay positive at x = {x}");
            let v = self.laws.kappa_primitive(th) - y;
            let margin = th - bound;
            check.min_theta = check.min_theta.min(th);
            check.v_min = check.v_min.min(v);
            if v < -TOL_VIOLATION {
                check.violations += 1;
            }
            if margin < check.worst_margin {
                check.worst_margin = margin;
                check.worst_x = x;
            }
        }
        check
    }
}

/// One snapshot measured against the bound schedule.
#[derive(Debug, Clone, Copy)]
pub struct SnapshotCheck {
    pub t: f64,
    pub min_theta: f64,
    pub bound: f64,
    /// Min over the snapshot of V = K(theta) - Y(t).
    pub v_min: f64,
    /// Grid points with V below -[`TOL_VIOLATION`].
    pub violations: usize,
    /// Min over the snapshot of theta - bound.
    pub worst_margin: f64,
    pub worst_x: f64,
}

impl SnapshotCheck {
    /// CSV columns: t, min_theta, bound, V_min, violations.
    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.t, self.min_theta, self.bound, self.v_min, self.violations
        )
    }

    pub const CSV_HEADER: &'static str = "t,min_theta,bound,V_min,violations";
}

/// Accumulated worst case over a set of snapshot checks.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    /// Min over space-time of theta - bound.
    pub worst_margin: f64,
    /// (t, x) where the worst margin occurred.
    pub location: (f64, f64),
    /// Total grid points (across snapshots) with V < -tolerance.
    pub count: usize,
    /// Min over space-time of V = K(theta) - Y(t).
    pub v_min: f64,
}

impl ViolationReport {
    pub fn new() -> Self {
        ViolationReport {
            worst_margin: f64::INFINITY,
            location: (f64::NAN, f64::NAN),
            count: 0,
            v_min: f64::INFINITY,
        }
    }

    pub fn absorb(&mut self, check: &SnapshotCheck) {
        if check.worst_margin < self.worst_margin {
            self.worst_margin = check.worst_margin;
            self.location = (check.t, check.worst_x);
        }
        self.count += check.violations;
        self.v_min = self.v_min.min(check.v_min);
    }

    /// The theorem holds on this data set: no V dipped below -tolerance.
    pub fn ok(&self) -> bool {
        self.count == 0 && self.v_min >= -TOL_VIOLATION
    }
}

impl Default for ViolationReport {
    fn default() -> Self {
        ViolationReport::new()
    }
}
