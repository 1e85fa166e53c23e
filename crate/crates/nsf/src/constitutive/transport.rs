//! Temperature-dependent transport coefficients: shear viscosity μ, bulk
//! viscosity η, and heat conductivity κ, together with the conductivity
//! primitive K(θ) = ∫₀^θ κ and its inverse.
//!
//! The reference family is μ = μ₀(1+θ), η = η₀·min{1,θ},
//! κ = κ₀(θ^{1/2} + θ^β). κ is stored as a sum of power laws so that K has
//! a closed form and the ratio K(θ)/(θκ(θ)) has exact extreme values
//! 1/(1+max exponent) and 1/(1+min exponent).

use crate::numerics::invert_increasing;
use crate::Error;

/// Sum of power laws Σ cᵢ·θ^{pᵢ} with cᵢ > 0, pᵢ ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSum {
    terms: Vec<(f64, f64)>,
}

impl PowerSum {
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self, Error> {
        if terms.is_empty() {
            return Err(Error::domain("power sum needs at least one term"));
        }
        for &(c, p) in &terms {
            if !(c > 0.0) || !c.is_finite() || !(p >= 0.0) || !p.is_finite() {
                return Err(Error::domain(format!(
                    "power-sum term ({c})·θ^({p}) must have positive finite \
                     coefficient and nonnegative finite exponent"
                )));
            }
        }
        Ok(PowerSum { terms })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.terms.iter().map(|&(c, p)| c * theta.powf(p)).sum()
    }

    /// ∫₀^θ of the sum: Σ cᵢ·θ^{pᵢ+1}/(pᵢ+1).
    pub fn primitive(&self, theta: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, p)| c * theta.powf(p + 1.0) / (p + 1.0))
            .sum()
    }

    pub fn min_exponent(&self) -> f64 {
        self.terms.iter().map(|&(_, p)| p).fold(f64::INFINITY, f64::min)
    }

    pub fn max_exponent(&self) -> f64 {
        self.terms.iter().map(|&(_, p)| p).fold(0.0, f64::max)
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }
}

#[derive(Debug, Clone)]
pub struct TransportLaws {
    mu0: f64,
    eta0: f64,
    kappa: PowerSum,
    beta: f64,
    /// Window constants: μ₀·max{1,θ} ≤ μ ≤ mu_hi·(1+θ), η₀·min{1,θ} ≤ η ≤
    /// eta_hi·(1+θ), growth_lo·(θ^{1/2}+θ^β) ≤ κ ≤ growth_hi·(θ^{1/2}+θ^β).
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub eta_lo: f64,
    pub eta_hi: f64,
    pub kappa_growth_lo: f64,
    pub kappa_growth_hi: f64,
}

impl TransportLaws {
    /// μ = 1+θ, η = min{1,θ}, κ = θ^{1/2}+θ^β. Requires β > 6.
    pub fn reference(beta: f64) -> Result<Self, Error> {
        TransportLaws::scaled(1.0, 1.0, 1.0, beta)
    }

    /// μ = μ₀(1+θ), η = η₀·min{1,θ}, κ = κ₀(θ^{1/2}+θ^β). Requires β > 6.
    pub fn scaled(mu0: f64, eta0: f64, kappa0: f64, beta: f64) -> Result<Self, Error> {
        if !(beta > 6.0) || !beta.is_finite() {
            return Err(Error::domain(format!(
                "conductivity growth exponent must be > 6, got {beta}"
            )));
        }
        for (name, v) in [("mu0", mu0), ("eta0", eta0), ("kappa0", kappa0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!(
                    "transport scale {name} must be positive and finite, got {v}"
                )));
            }
        }
        let kappa = PowerSum::new(vec![(kappa0, 0.5), (kappa0, beta)])?;
        Ok(TransportLaws {
            mu0,
            eta0,
            kappa,
            beta,
            mu_lo: mu0,
            mu_hi: mu0,
            eta_lo: eta0,
            eta_hi: eta0,
            kappa_growth_lo: kappa0,
            kappa_growth_hi: kappa0,
        })
    }

    /// Arbitrary power-sum conductivity with the reference μ, η shapes.
    /// Exponent gates are not applied and η₀ = 0 is admitted, so that scans
    /// can exercise laws violating the windows; scans report every window
    /// the resulting law fails to satisfy.
    pub fn with_kappa(mu0: f64, eta0: f64, kappa: PowerSum) -> Result<Self, Error> {
        if !(mu0 > 0.0) || !mu0.is_finite() {
            return Err(Error::domain(format!(
                "transport scale mu0 must be positive and finite, got {mu0}"
            )));
        }
        if !(eta0 >= 0.0) || !eta0.is_finite() {
            return Err(Error::domain(format!(
                "transport scale eta0 must be nonnegative and finite, got {eta0}"
            )));
        }
        let beta = kappa.max_exponent();
        // Growth-window constants against θ^{1/2}+θ^β: extremes of the
        // ratio Σcᵢθ^{pᵢ}/(θ^{1/2}+θ^β) over θ > 0 are not closed-form in
        // general; scans refine these seed values.
        let c_sum: f64 = kappa.terms().iter().map(|&(c, _)| c).sum();
        let c_min = kappa
            .terms()
            .iter()
            .map(|&(c, _)| c)
            .fold(f64::INFINITY, f64::min);
        Ok(TransportLaws {
            mu0,
            eta0,
            kappa,
            beta,
            mu_lo: mu0,
            mu_hi: mu0,
            eta_lo: eta0,
            eta_hi: eta0,
            kappa_growth_lo: 0.5 * c_min,
            kappa_growth_hi: c_sum,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa_terms(&self) -> &PowerSum {
        &self.kappa
    }

    pub fn mu(&self, theta: f64) -> f64 {
        self.mu0 * (1.0 + theta)
    }

    pub fn mu_prime(&self, _theta: f64) -> f64 {
        self.mu0
    }

    pub fn eta(&self, theta: f64) -> f64 {
        self.eta0 * theta.min(1.0)
    }

    pub fn kappa(&self, theta: f64) -> f64 {
        self.kappa.eval(theta)
    }

    /// (μ, η, κ) with a positivity gate on θ.
    pub fn eval(&self, theta: f64) -> Result<(f64, f64, f64), Error> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::domain(format!(
                "transport laws need positive finite temperature, got {theta}"
            )));
        }
        Ok((self.mu(theta), self.eta(theta), self.kappa(theta)))
    }

    /// K(θ) = ∫₀^θ κ, strictly increasing with K(0) = 0.
    pub fn kappa_primitive(&self, theta: f64) -> f64 {
        self.kappa.primitive(theta)
    }

    /// K⁻¹(y) for y > 0, by bracketed bisection with a Newton polish.
    pub fn invert_kappa_primitive(&self, y: f64) -> Result<f64, Error> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::domain(format!(
                "conductivity primitive is positive, cannot invert at {y}"
            )));
        }
        Ok(invert_increasing(
            |t| self.kappa.primitive(t),
            |t| self.kappa.eval(t),
            y,
            1e-12,
        ))
    }

    /// Exact extreme values of K(θ)/(θκ(θ)) over θ > 0 for a power-sum κ:
    /// the ratio is a convex combination of 1/(pᵢ+1), so its range is
    /// [1/(1+max p), 1/(1+min p)].
    pub fn kappa_ratio_range(&self) -> (f64, f64) {
        (
            1.0 / (1.0 + self.kappa.max_exponent()),
            1.0 / (1.0 + self.kappa.min_exponent()),
        )
    }
}
