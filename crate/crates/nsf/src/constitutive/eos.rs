//! Equation of state of a monatomic gas with radiation, built on a
//! structural pressure law.
//!
//! With Z = ϱ/θ^{3/2} and a structural law P:
//!
//! ```text
//! p(ϱ, θ) = ϱθ·P(Z)/Z + (a/3)θ⁴
//! e(ϱ, θ) = (3/2)θ·P(Z)/Z + (a/ϱ)θ⁴
//! s(ϱ, θ) = S(Z) + (4a/3)θ³/ϱ
//! ```
//!
//! Everything else here (heat capacity, all first and second partials, the
//! Gibbs residuals) is exact differentiation of these three lines. The gas
//! parts reduce to combinations of P, P′, P″ and the window gap
//! G₅ = (5/3)P − P′Z; tests cross-check each closed form against central
//! finite differences.

use std::sync::Arc;

use super::structural::{IdealGasLaw, LawHandle, PiecewiseLaw};
use crate::Error;

#[derive(Debug, Clone)]
pub struct GasEOS {
    law: LawHandle,
    radiation_a: f64,
}

/// First and second partials of the internal energy e(ϱ, θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPartials {
    pub de_drho: f64,
    pub de_dtheta: f64,
    pub d2e_drho2: f64,
    pub d2e_drho_dtheta: f64,
}

/// First and mixed second partials of the entropy s(ϱ, θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPartials {
    pub ds_drho: f64,
    pub ds_dtheta: f64,
    pub d2s_drho2: f64,
    pub d2s_drho_dtheta: f64,
}

impl GasEOS {
    pub fn new(law: LawHandle, radiation_a: f64) -> Result<Self, Error> {
        if !(radiation_a >= 0.0) || !radiation_a.is_finite() {
            return Err(Error::domain(format!(
                "radiation coefficient must be finite and >= 0, got {radiation_a}"
            )));
        }
        Ok(GasEOS { law, radiation_a })
    }

    /// Iconic two-branch law with threshold `z_bar`, radiation `a`.
    pub fn iconic(z_bar: f64, radiation_a: f64) -> Result<Self, Error> {
        Ok(GasEOS {
            law: Arc::new(PiecewiseLaw::iconic(z_bar)?),
            radiation_a: check_a(radiation_a)?,
        })
    }

    /// Pure P(Z) = Z reference gas, no radiation.
    pub fn ideal() -> Self {
        GasEOS {
            law: Arc::new(IdealGasLaw),
            radiation_a: 0.0,
        }
    }

    pub fn law(&self) -> &LawHandle {
        &self.law
    }

    pub fn radiation_a(&self) -> f64 {
        self.radiation_a
    }

    pub fn zed(&self, rho: f64, theta: f64) -> f64 {
        rho / theta.powf(1.5)
    }

    fn check(&self, rho: f64, theta: f64) -> Result<(), Error> {
        if !(rho > 0.0) || !rho.is_finite() || !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::domain(format!(
                "state must have positive finite density and temperature, got rho={rho}, theta={theta}"
            )));
        }
        Ok(())
    }

    /// P(Z)/Z, extended by P′(0) at Z = 0.
    fn ratio(&self, z: f64) -> f64 {
        if z < 1e-290 {
            self.law.deriv(0.0)
        } else {
            self.law.eval(z) / z
        }
    }

    pub fn pressure(&self, rho: f64, theta: f64) -> Result<f64, Error> {
        self.check(rho, theta)?;
        Ok(self.pressure_unchecked(rho, theta))
    }

    pub(crate) fn pressure_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = self.zed(rho, theta);
        rho * theta * self.ratio(z) + self.radiation_a / 3.0 * theta.powi(4)
    }

    pub fn internal_energy(&self, rho: f64, theta: f64) -> Result<f64, Error> {
        self.check(rho, theta)?;
        Ok(self.internal_energy_unchecked(rho, theta))
    }

    pub(crate) fn internal_energy_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = self.zed(rho, theta);
        1.5 * theta * self.ratio(z) + self.radiation_a * theta.powi(4) / rho
    }

    pub fn entropy(&self, rho: f64, theta: f64) -> Result<f64, Error> {
        self.check(rho, theta)?;
        Ok(self.entropy_unchecked(rho, theta))
    }

    pub(crate) fn entropy_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = self.zed(rho, theta);
        self.law.entropy(z) + 4.0 * self.radiation_a / 3.0 * theta.powi(3) / rho
    }

    /// Specific heat at constant volume, c_v = ∂e/∂θ.
    pub fn cv(&self, rho: f64, theta: f64) -> Result<f64, Error> {
        self.check(rho, theta)?;
        Ok(self.cv_unchecked(rho, theta))
    }

    pub(crate) fn cv_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = self.zed(rho, theta);
        2.25 * self.gap_ratio(z) + 4.0 * self.radiation_a * theta.powi(3) / rho
    }

    /// ((5/3)P − P′Z)/Z, extended by its (2/3)P′(0) limit at Z = 0.
    fn gap_ratio(&self, z: f64) -> f64 {
        if z < 1e-290 {
            (2.0 / 3.0) * self.law.deriv(0.0)
        } else {
            self.law.window_gap(z) / z
        }
    }

    /// ∂p/∂θ = (3/2)θ^{3/2}·((5/3)P − P′Z) + (4a/3)θ³.
    pub fn dp_dtheta(&self, rho: f64, theta: f64) -> Result<f64, Error> {
        self.check(rho, theta)?;
        Ok(self.dp_dtheta_unchecked(rho, theta))
    }

    pub(crate) fn dp_dtheta_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = self.zed(rho, theta);
        1.5 * theta.powf(1.5) * self.law.window_gap(z)
            + 4.0 * self.radiation_a / 3.0 * theta.powi(3)
    }

    /// ∂p/∂ϱ = θ·P′(Z).
    pub fn dp_drho(&self, rho: f64, theta: f64) -> Result<f64, Error> {
        self.check(rho, theta)?;
        let z = self.zed(rho, theta);
        Ok(theta * self.law.deriv(z))
    }

    pub fn energy_partials(&self, rho: f64, theta: f64) -> Result<EnergyPartials, Error> {
        self.check(rho, theta)?;
        let z = self.zed(rho, theta);
        let p = self.law.eval(z);
        let dp = self.law.deriv(z);
        let d2p = self.law.deriv2(z);
        let a = self.radiation_a;
        let th4 = theta.powi(4);
        // G = (P′Z − P)/Z and G′·Z = [P″Z² − P′Z + P]/Z, both with exact
        // zero numerators on an ideal branch.
        let g = if z < 1e-290 { 0.0 } else { (dp * z - p) / z };
        let gpz = if z < 1e-290 {
            0.0
        } else {
            (d2p * z * z - dp * z + p) / z
        };
        let de_drho = 1.5 * theta * g / rho - a * th4 / (rho * rho);
        let d2e_drho2 = if z < 1e-290 {
            2.0 * a * th4 / (rho * rho * rho)
        } else {
            1.5 * theta * (d2p * z * z - 2.0 * dp * z + 2.0 * p) / (z * rho * rho)
                + 2.0 * a * th4 / (rho * rho * rho)
        };
        let d2e_drho_dtheta =
            1.5 * g / rho - 2.25 * gpz / rho - 4.0 * a * theta.powi(3) / (rho * rho);
        Ok(EnergyPartials {
            de_drho,
            de_dtheta: self.cv_unchecked(rho, theta),
            d2e_drho2,
            d2e_drho_dtheta,
        })
    }

    /// 2∂e/∂ϱ + ϱ∂²e/∂ϱ², which collapses to (3/2)θ^{−1/2}·P″(Z).
    /// Nonnegative exactly when the structural law is convex; it weights the
    /// density-gradient heating of the regularized temperature equation.
    pub fn convexity_combo(&self, rho: f64, theta: f64) -> Result<f64, Error> {
        self.check(rho, theta)?;
        Ok(self.convexity_combo_unchecked(rho, theta))
    }

    pub(crate) fn convexity_combo_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = self.zed(rho, theta);
        1.5 * self.law.deriv2(z) / theta.sqrt()
    }

    pub fn entropy_partials(&self, rho: f64, theta: f64) -> Result<EntropyPartials, Error> {
        self.check(rho, theta)?;
        let z = self.zed(rho, theta);
        let dp = self.law.deriv(z);
        let d2p = self.law.deriv2(z);
        let a = self.radiation_a;
        let g5 = self.law.window_gap(z);
        // S′Z = −(3/2)G₅/Z, S″Z² = −(3/2)(G₅′Z − 2G₅)/Z with
        // G₅′Z = (2/3)P′Z − P″Z².
        let (spz, sppz2, g5pz_minus_g5) = if z < 1e-290 {
            (-dp, dp, 0.0)
        } else {
            let g5pz = (2.0 / 3.0) * dp * z - d2p * z * z;
            (
                -1.5 * g5 / z,
                -1.5 * (g5pz - 2.0 * g5) / z,
                (g5pz - g5) / z,
            )
        };
        let ds_drho = spz / rho - 4.0 * a / 3.0 * theta.powi(3) / (rho * rho);
        let ds_dtheta = self.cv_unchecked(rho, theta) / theta;
        let d2s_drho2 = sppz2 / (rho * rho) + 8.0 * a / 3.0 * theta.powi(3) / (rho * rho * rho);
        let d2s_drho_dtheta =
            2.25 * g5pz_minus_g5 / (rho * theta) - 4.0 * a * theta.powi(2) / (rho * rho);
        Ok(EntropyPartials {
            ds_drho,
            ds_dtheta,
            d2s_drho2,
            d2s_drho_dtheta,
        })
    }

    /// Residuals of the two Gibbs identities relating s, e and p:
    ///
    /// ```text
    /// ∂s/∂ϱ − (1/θ)(∂e/∂ϱ − p/ϱ²)
    /// ϱ∂²s/∂ϱ² − (ϱ/θ)∂²e/∂ϱ² + (1/(ϱθ))∂p/∂ϱ − 2p/(θϱ²)
    /// ```
    ///
    /// Both vanish identically; the return values measure only floating-point
    /// noise and serve as a cross-check of the independently coded partials.
    pub fn gibbs_residuals(&self, rho: f64, theta: f64) -> Result<(f64, f64), Error> {
        let p = self.pressure(rho, theta)?;
        let ep = self.energy_partials(rho, theta)?;
        let sp = self.entropy_partials(rho, theta)?;
        let dpdr = self.dp_drho(rho, theta)?;
        let first = sp.ds_drho - (ep.de_drho - p / (rho * rho)) / theta;
        let second = rho * sp.d2s_drho2 - rho / theta * ep.d2e_drho2 + dpdr / (rho * theta)
            - 2.0 * p / (theta * rho * rho);
        Ok((first, second))
    }

    /// Squared adiabatic sound speed ∂p/∂ϱ + θ(∂p/∂θ)²/(ϱ²c_v).
    pub(crate) fn sound_speed_sq(&self, rho: f64, theta: f64) -> f64 {
        let z = self.zed(rho, theta);
        let dpdr = theta * self.law.deriv(z);
        let dpdt = self.dp_dtheta_unchecked(rho, theta);
        let cv = self.cv_unchecked(rho, theta);
        dpdr + theta * dpdt * dpdt / (rho * rho * cv)
    }
}

fn check_a(a: f64) -> Result<f64, Error> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::domain(format!(
            "radiation coefficient must be finite and >= 0, got {a}"
        )));
    }
    Ok(a)
}
