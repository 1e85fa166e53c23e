//! Declarative run configuration: one TOML document describing the state
//! law, transport coefficients, scenario fields as expressions, the
//! regularization strengths, the checks to run and where output goes.
//! Loading accumulates every detectable problem instead of stopping at the
//! first, so a bad file is fixed in one round trip.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::constitutive::{GasEOS, LawHandle, PiecewiseLaw, PowerSum, TransportLaws};
use crate::expr::{self, Expr};
use crate::minprinciple::MVariant;
use crate::mollifier::{mollify, MollifierKernel};
use crate::solver1d::{DtPolicy, Grid1D, Scenario};
use crate::Error;

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn seven() -> f64 {
    7.0
}

fn lit_one() -> String {
    "1".into()
}

fn lit_zero() -> String {
    "0".into()
}

fn default_preset() -> String {
    "iconic".into()
}

fn default_moll_delta() -> f64 {
    0.05
}

fn default_variant() -> String {
    "derived".into()
}

fn default_balance_coefficient() -> f64 {
    5.0
}

fn default_dir() -> String {
    "out".into()
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub eos: EosSection,
    #[serde(default)]
    pub transport: TransportSection,
    #[serde(default)]
    pub mollify: MollifySection,
    #[serde(default)]
    pub checks: ChecksSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub n: usize,
    #[serde(default)]
    pub x_left: f64,
    #[serde(default = "one")]
    pub x_right: f64,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "two")]
    pub gamma: f64,
    pub t_end: f64,
    pub record_dt: f64,
    /// Fixed step; omit for the stability-derived automatic step.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Cap for the automatic step; defaults to record_dt.
    #[serde(default)]
    pub dt_max: Option<f64>,
    #[serde(default)]
    pub conduction_only: bool,
    #[serde(default = "lit_one")]
    pub rho0: String,
    #[serde(default = "lit_one")]
    pub theta0: String,
    #[serde(default = "lit_zero")]
    pub u0: String,
    #[serde(default = "lit_one")]
    pub theta_b_left: String,
    #[serde(default = "lit_one")]
    pub theta_b_right: String,
    #[serde(default = "lit_zero")]
    pub g: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EosSection {
    /// "iconic" (kinked two-branch law with knee z_bar, the default),
    /// "boyle-mariotte" (pure linear law; its heat capacity has no
    /// degeneracy cap, so the structural scan rejects it for runs) or
    /// "tabulated" (piecewise-linear knots in `table`).
    pub preset: String,
    pub z_bar: f64,
    pub radiation_a: f64,
    pub table: Vec<[f64; 2]>,
}

impl Default for EosSection {
    fn default() -> Self {
        EosSection {
            preset: default_preset(),
            z_bar: 1.0,
            radiation_a: 0.0,
            table: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransportSection {
    pub mu0: f64,
    pub eta0: f64,
    pub kappa0: f64,
    pub beta: f64,
    /// Optional explicit conductivity terms [[c, p], ...] overriding the
    /// kappa0 (theta^1/2 + theta^beta) shape.
    pub kappa_terms: Vec<[f64; 2]>,
}

impl Default for TransportSection {
    fn default() -> Self {
        TransportSection {
            mu0: 1.0,
            eta0: 1.0,
            kappa0: 1.0,
            beta: seven(),
            kappa_terms: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MollifySection {
    pub enabled: bool,
    pub delta: f64,
}

impl Default for MollifySection {
    fn default() -> Self {
        MollifySection { enabled: false, delta: default_moll_delta() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChecksSection {
    /// Reaction-constant flavour for the temperature bound: "derived" or
    /// "alternative".
    pub m_variant: String,
    /// Compare a conduction-only run against the independent reference
    /// integrator.
    pub oracle: bool,
    /// C in the balance tolerance C (dt + dx^2), calibrated once on the
    /// conduction scenario.
    pub balance_coefficient: f64,
}

impl Default for ChecksSection {
    fn default() -> Self {
        ChecksSection {
            m_variant: default_variant(),
            oracle: false,
            balance_coefficient: default_balance_coefficient(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub eps: Vec<f64>,
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub plots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: default_dir(), plots: default_true() }
    }
}

/// Flattens an error into its message lines for accumulation.
fn lines_of(e: Error) -> Vec<String> {
    match e {
        Error::Config(list) => list,
        other => vec![other.to_string()],
    }
}

impl Config {
    /// Parses and validates a TOML document. All detectable problems are
    /// reported together.
    pub fn from_str(text: &str) -> Result<Self, Error> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| Error::Config(vec![e.to_string()]))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text)
    }

    fn validate(&self) -> Result<(), Error> {
        let mut errs = Vec::new();

        for (name, src, space_data) in [
            ("rho0", &self.scenario.rho0, true),
            ("theta0", &self.scenario.theta0, true),
            ("u0", &self.scenario.u0, true),
            ("theta_b_left", &self.scenario.theta_b_left, false),
            ("theta_b_right", &self.scenario.theta_b_right, false),
        ] {
            match expr::parse(src) {
                Ok(e) => {
                    if space_data && !e.is_time_free() {
                        errs.push(format!("{name} must depend on x only, got {src:?}"));
                    }
                    if !space_data && !e.is_space_free() {
                        errs.push(format!("{name} must depend on t only, got {src:?}"));
                    }
                }
                Err(e) => {
                    errs.extend(lines_of(e).into_iter().map(|m| format!("{name}: {m}")));
                }
            }
        }
        if let Err(e) = expr::parse(&self.scenario.g) {
            errs.extend(lines_of(e).into_iter().map(|m| format!("g: {m}")));
        }

        if let Err(e) = Grid1D::new(self.scenario.n, self.scenario.x_left, self.scenario.x_right) {
            errs.extend(lines_of(e));
        }
        if !self.scenario.t_end.is_finite() || self.scenario.t_end <= 0.0 {
            errs.push(format!("t_end must be positive, got {}", self.scenario.t_end));
        }
        if !self.scenario.record_dt.is_finite() || self.scenario.record_dt <= 0.0 {
            errs.push(format!(
                "record_dt must be positive, got {}",
                self.scenario.record_dt
            ));
        }
        if !self.scenario.eps.is_finite() || self.scenario.eps < 0.0 {
            errs.push(format!("eps must be finite and >= 0, got {}", self.scenario.eps));
        }
        if !self.scenario.delta.is_finite() || self.scenario.delta < 0.0 {
            errs.push(format!(
                "delta must be finite and >= 0, got {}",
                self.scenario.delta
            ));
        }
        if self.scenario.delta > 0.0 && !(self.scenario.gamma >= 2.0) {
            errs.push(format!(
                "gamma must be >= 2 when delta > 0, got {}",
                self.scenario.gamma
            ));
        }
        if let Some(dt) = self.scenario.dt {
            if !dt.is_finite() || dt <= 0.0 {
                errs.push(format!("dt must be positive, got {dt}"));
            }
        }
        if let Some(dt_max) = self.scenario.dt_max {
            if !dt_max.is_finite() || dt_max <= 0.0 {
                errs.push(format!("dt_max must be positive, got {dt_max}"));
            }
        }

        if let Err(e) = self.base_law() {
            errs.extend(lines_of(e));
        }
        if let Err(e) = self.transport() {
            errs.extend(lines_of(e));
        }
        if self.mollify.enabled && !(self.mollify.delta > 0.0 && self.mollify.delta.is_finite()) {
            errs.push(format!(
                "mollify.delta must be positive, got {}",
                self.mollify.delta
            ));
        }
        if self.m_variant().is_none() {
            errs.push(format!(
                "checks.m_variant must be \"derived\" or \"alternative\", got {:?}",
                self.checks.m_variant
            ));
        }
        if !(self.checks.balance_coefficient > 0.0) {
            errs.push(format!(
                "checks.balance_coefficient must be positive, got {}",
                self.checks.balance_coefficient
            ));
        }
        for (name, list) in [("sweep.eps", &self.sweep.eps), ("sweep.delta", &self.sweep.delta)] {
            for &v in list {
                if !v.is_finite() || v < 0.0 {
                    errs.push(format!("{name} entries must be finite and >= 0, got {v}"));
                }
            }
        }

        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    /// The structural law before any smoothing.
    fn base_law(&self) -> Result<LawHandle, Error> {
        match self.eos.preset.as_str() {
            "boyle-mariotte" => Ok(Arc::new(crate::constitutive::IdealGasLaw)),
            "iconic" => Ok(Arc::new(PiecewiseLaw::iconic(self.eos.z_bar)?)),
            "tabulated" => {
                let knots: Vec<(f64, f64)> =
                    self.eos.table.iter().map(|&[z, p]| (z, p)).collect();
                Ok(Arc::new(PiecewiseLaw::from_table(&knots)?))
            }
            other => Err(Error::Config(vec![format!(
                "eos.preset must be \"boyle-mariotte\", \"iconic\" or \"tabulated\", got {other:?}"
            )])),
        }
    }

    /// The structural law, smoothed when [mollify] asks for it.
    pub fn law(&self) -> Result<LawHandle, Error> {
        let base = self.base_law()?;
        if self.mollify.enabled {
            let kernel = MollifierKernel::new(self.mollify.delta)?;
            Ok(Arc::new(mollify(base, kernel)))
        } else {
            Ok(base)
        }
    }

    pub fn eos(&self) -> Result<GasEOS, Error> {
        GasEOS::new(self.law()?, self.eos.radiation_a)
    }

    pub fn transport(&self) -> Result<TransportLaws, Error> {
        if self.transport.kappa_terms.is_empty() {
            TransportLaws::scaled(
                self.transport.mu0,
                self.transport.eta0,
                self.transport.kappa0,
                self.transport.beta,
            )
        } else {
            let terms: Vec<(f64, f64)> =
                self.transport.kappa_terms.iter().map(|&[c, p]| (c, p)).collect();
            TransportLaws::with_kappa(
                self.transport.mu0,
                self.transport.eta0,
                PowerSum::new(terms)?,
            )
        }
    }

    pub fn m_variant(&self) -> Option<MVariant> {
        match self.checks.m_variant.as_str() {
            "derived" => Some(MVariant::Derived),
            "alternative" => Some(MVariant::Alternative),
            _ => None,
        }
    }

    /// Builds the runnable scenario, including the solver-side validation.
    pub fn scenario(&self) -> Result<Scenario, Error> {
        self.scenario_with(self.scenario.eps, self.scenario.delta)
    }

    /// Same scenario with the regularization strengths overridden; the
    /// sweep driver uses this.
    pub fn scenario_with(&self, eps: f64, delta: f64) -> Result<Scenario, Error> {
        let grid = Grid1D::new(self.scenario.n, self.scenario.x_left, self.scenario.x_right)?;
        let eos = self.eos()?;
        let laws = self.transport()?;
        let space = |src: &str| -> Result<Expr, Error> { expr::parse(src) };
        let rho0 = space(&self.scenario.rho0)?;
        let theta0 = space(&self.scenario.theta0)?;
        let u0 = space(&self.scenario.u0)?;
        let bl = space(&self.scenario.theta_b_left)?;
        let br = space(&self.scenario.theta_b_right)?;
        let g = space(&self.scenario.g)?;
        let dt_policy = match self.scenario.dt {
            Some(dt) => DtPolicy::Fixed(dt),
            None => DtPolicy::Auto {
                dt_max: self.scenario.dt_max.unwrap_or(self.scenario.record_dt),
            },
        };
        let sc = Scenario {
            grid,
            eos,
            laws,
            eps,
            delta_p: delta,
            gamma: self.scenario.gamma,
            rho0: Arc::new(move |x| rho0.eval(x, 0.0)),
            theta0: Arc::new(move |x| theta0.eval(x, 0.0)),
            u0: Arc::new(move |x| u0.eval(x, 0.0)),
            theta_b_left: Arc::new(move |t| bl.eval(0.0, t)),
            theta_b_right: Arc::new(move |t| br.eval(0.0, t)),
            g: Arc::new(move |t, x| g.eval(x, t)),
            t_end: self.scenario.t_end,
            dt_policy,
            conduction_only: self.scenario.conduction_only,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Balance tolerance C (dt + dx^2) for this configuration's grid and a
    /// given step size.
    pub fn balance_tolerance(&self, dt: f64) -> f64 {
        let dx = (self.scenario.x_right - self.scenario.x_left) / self.scenario.n as f64;
        self.checks.balance_coefficient * (dt + dx * dx)
    }
}
