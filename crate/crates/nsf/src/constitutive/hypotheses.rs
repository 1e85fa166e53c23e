//! Grid scans turning the structural hypotheses on the EOS and transport
//! laws into checkable predicates, and extraction of the scalar constants
//! (ratio window of the conductivity primitive, heat-capacity envelope,
//! reaction constant Λ) that the temperature lower bound is built from.
//!
//! All "for all ρ, θ" hypotheses are scanned on log-spaced grids; infima are
//! reported as estimates together with the minimizing grid point.

use super::eos::GasEOS;
use super::transport::TransportLaws;
use crate::numerics::log_grid;

/// Log-spaced scan grids for θ and ρ.
#[derive(Debug, Clone)]
pub struct ScanGrid {
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
}

impl ScanGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        ScanGrid {
            theta: log_grid(lo, hi, n),
            rho: log_grid(lo, hi, n),
        }
    }
}

impl Default for ScanGrid {
    /// 200 points per axis on [10⁻⁶, 10⁶].
    fn default() -> Self {
        ScanGrid::new(1e-6, 1e6, 200)
    }
}

/// Scalar constants extracted from the scans.
///
/// `kappa_ratio_lo/hi` bracket K(θ)/(θκ(θ)); `e_lo/e_hi` bracket
/// (∂p/∂θ)/(ϱc_v); `lambda` is the infimum of κη/C_v with the envelope
/// C_v(θ) = (9/4)·P̄·θ^{3/2} + 4aθ³.
#[derive(Debug, Clone, Copy)]
pub struct StructuralConstants {
    pub kappa_ratio_lo: f64,
    pub kappa_ratio_hi: f64,
    pub e_lo: f64,
    pub e_hi: f64,
    pub lambda: f64,
    pub p_bar: f64,
    pub radiation_a: f64,
}

impl StructuralConstants {
    /// Temperature-only envelope of ϱc_v.
    pub fn cv_bound(&self, theta: f64) -> f64 {
        2.25 * self.p_bar * theta.powf(1.5) + 4.0 * self.radiation_a * theta.powi(3)
    }
}

/// One failed hypothesis at one scan point. `rho` is set only for
/// hypotheses quantified over (ρ, θ).
#[derive(Debug, Clone)]
pub struct HypothesisViolation {
    pub hypothesis: &'static str,
    pub theta: f64,
    pub rho: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub constants: StructuralConstants,
    pub violations: Vec<HypothesisViolation>,
    /// Minimizing/maximizing θ of the reported estimates.
    pub lambda_argmin: f64,
    pub ratio_lo_argmin: f64,
    pub ratio_hi_argmax: f64,
}

impl HypothesisReport {
    /// True when every scanned hypothesis holds and the reaction constant
    /// is usable.
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.constants.lambda > 0.0
    }

    /// Violation counts grouped by hypothesis name, for compact display.
    pub fn summary(&self) -> Vec<(&'static str, usize)> {
        let mut out: Vec<(&'static str, usize)> = Vec::new();
        for v in &self.violations {
            match out.iter_mut().find(|(name, _)| *name == v.hypothesis) {
                Some((_, n)) => *n += 1,
                None => out.push((v.hypothesis, 1)),
            }
        }
        out
    }
}

const REL_TOL: f64 = 1e-12;
/// Convexity scan tolerance; loose enough for quadrature-based laws.
const CONVEXITY_TOL: f64 = 1e-9;

/// Scans every structural hypothesis on the default grid.
pub fn check_structural(eos: &GasEOS, laws: &TransportLaws) -> HypothesisReport {
    check_structural_on(eos, laws, &ScanGrid::default())
}

pub fn check_structural_on(
    eos: &GasEOS,
    laws: &TransportLaws,
    grid: &ScanGrid,
) -> HypothesisReport {
    let mut violations = Vec::new();
    let p_bar = eos.law().p_bar();
    let a = eos.radiation_a();

    // Transport windows and primitive-ratio scan over θ.
    let mut ratio_lo = f64::INFINITY;
    let mut ratio_hi = f64::NEG_INFINITY;
    let mut ratio_lo_argmin = f64::NAN;
    let mut ratio_hi_argmax = f64::NAN;
    let mut lambda = f64::INFINITY;
    let mut lambda_argmin = f64::NAN;
    let mut prev_k = 0.0;
    for &theta in &grid.theta {
        let mu = laws.mu(theta);
        let eta = laws.eta(theta);
        let kap = laws.kappa(theta);
        let lo = laws.mu_lo * theta.max(1.0);
        let hi = laws.mu_hi * (1.0 + theta);
        if mu < lo * (1.0 - REL_TOL) || mu > hi * (1.0 + REL_TOL) {
            violations.push(HypothesisViolation {
                hypothesis: "shear-viscosity-window",
                theta,
                rho: None,
                detail: format!("mu={mu} outside [{lo}, {hi}]"),
            });
        }
        if laws.mu_prime(theta).abs() > laws.mu_hi * (1.0 + REL_TOL) {
            violations.push(HypothesisViolation {
                hypothesis: "shear-viscosity-slope",
                theta,
                rho: None,
                detail: format!("|mu'|={} exceeds {}", laws.mu_prime(theta).abs(), laws.mu_hi),
            });
        }
        let eta_floor = laws.eta_lo * theta.min(1.0);
        let eta_cap = laws.eta_hi * (1.0 + theta);
        if !(eta > 0.0) || eta < eta_floor * (1.0 - REL_TOL) || eta > eta_cap * (1.0 + REL_TOL) {
            violations.push(HypothesisViolation {
                hypothesis: "bulk-viscosity-window",
                theta,
                rho: None,
                detail: format!("eta={eta} outside (0, {eta_cap}] with floor {eta_floor}"),
            });
        }
        let growth = theta.sqrt() + theta.powf(laws.beta());
        if kap < laws.kappa_growth_lo * growth * (1.0 - REL_TOL)
            || kap > laws.kappa_growth_hi * growth * (1.0 + REL_TOL)
        {
            violations.push(HypothesisViolation {
                hypothesis: "conductivity-growth-window",
                theta,
                rho: None,
                detail: format!(
                    "kappa={kap} outside [{}, {}]",
                    laws.kappa_growth_lo * growth,
                    laws.kappa_growth_hi * growth
                ),
            });
        }

        let k = laws.kappa_primitive(theta);
        if k <= prev_k {
            violations.push(HypothesisViolation {
                hypothesis: "primitive-monotonicity",
                theta,
                rho: None,
                detail: format!("K({theta})={k} does not exceed previous value {prev_k}"),
            });
        }
        prev_k = k;
        let r = k / (theta * kap);
        if r < ratio_lo {
            ratio_lo = r;
            ratio_lo_argmin = theta;
        }
        if r > ratio_hi {
            ratio_hi = r;
            ratio_hi_argmax = theta;
        }

        if p_bar.is_finite() {
            let cv_env = 2.25 * p_bar * theta.powf(1.5) + 4.0 * a * theta.powi(3);
            let l = kap * eta / cv_env;
            if l < lambda {
                lambda = l;
                lambda_argmin = theta;
            }
        }
    }

    if !p_bar.is_finite() {
        violations.push(HypothesisViolation {
            hypothesis: "heat-capacity-envelope",
            theta: f64::NAN,
            rho: None,
            detail: "structural law has unbounded (5/3)P - P'Z; no temperature-only \
                     envelope of rho*c_v exists"
                .into(),
        });
        lambda = 0.0;
        lambda_argmin = f64::NAN;
    }

    // Pressure-law window 0 < (5/3)P − P′Z ≤ P̄ over the Z values induced
    // by the (ρ, θ) grid, plus the (ρ, θ)-quantified hypotheses. States
    // below a smoothed law's domain floor are outside its quantifier.
    let z_floor = eos.law().domain_min();
    for &theta in &grid.theta {
        for &rho in &grid.rho {
            let z = eos.zed(rho, theta);
            if z < z_floor {
                continue;
            }
            let gap = eos.law().window_gap(z);
            if !(gap > 0.0) {
                violations.push(HypothesisViolation {
                    hypothesis: "pressure-gap-positivity",
                    theta,
                    rho: Some(rho),
                    detail: format!("(5/3)P - P'Z = {gap} at Z={z}"),
                });
            } else if p_bar.is_finite() && gap > p_bar * (1.0 + REL_TOL) {
                violations.push(HypothesisViolation {
                    hypothesis: "pressure-gap-bound",
                    theta,
                    rho: Some(rho),
                    detail: format!("(5/3)P - P'Z = {gap} exceeds {p_bar} at Z={z}"),
                });
            }

            let cv = eos.cv_unchecked(rho, theta);
            let ratio = eos.dp_dtheta_unchecked(rho, theta) / (rho * cv);
            if ratio < 1.0 / 3.0 - REL_TOL || ratio > 2.0 / 3.0 + REL_TOL {
                violations.push(HypothesisViolation {
                    hypothesis: "pressure-temperature-ratio",
                    theta,
                    rho: Some(rho),
                    detail: format!("dp_dtheta/(rho*cv) = {ratio} outside [1/3, 2/3]"),
                });
            }
            if p_bar.is_finite() {
                let env = 2.25 * p_bar * theta.powf(1.5) + 4.0 * a * theta.powi(3);
                if rho * cv > env * (1.0 + REL_TOL) {
                    violations.push(HypothesisViolation {
                        hypothesis: "heat-capacity-envelope",
                        theta,
                        rho: Some(rho),
                        detail: format!("rho*cv = {} exceeds C_v = {env}", rho * cv),
                    });
                }
            }
            let combo = eos.convexity_combo_unchecked(rho, theta);
            if combo < -CONVEXITY_TOL {
                violations.push(HypothesisViolation {
                    hypothesis: "energy-convexity",
                    theta,
                    rho: Some(rho),
                    detail: format!("2 de_drho + rho d2e_drho2 = {combo} < 0"),
                });
            }
        }
    }

    HypothesisReport {
        constants: StructuralConstants {
            kappa_ratio_lo: ratio_lo,
            kappa_ratio_hi: ratio_hi,
            e_lo: 1.0 / 3.0,
            e_hi: 2.0 / 3.0,
            lambda,
            p_bar,
            radiation_a: a,
        },
        violations,
        lambda_argmin,
        ratio_lo_argmin,
        ratio_hi_argmax,
    }
}
