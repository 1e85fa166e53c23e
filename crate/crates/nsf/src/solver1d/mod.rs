//! One-dimensional finite-difference integrator for the regularized
//! compressible heat-conducting system: density with artificial mass
//! diffusion and zero-flux walls, velocity with viscous plus artificial
//! diffusion and no-slip walls, temperature in parabolic form with
//! nonlinear conduction and prescribed wall temperatures. Staggered grid
//! (scalars at cell centers, velocity at nodes), operator splitting with
//! explicit transport and backward-Euler diffusion.

mod step;

pub use step::{step, StepFailure};

use std::fmt;
use std::sync::Arc;

use crate::constitutive::{GasEOS, TransportLaws};
use crate::Error;

/// Positivity floors for density and temperature. Crossing one marks the
/// step as failed; values are never clamped, since a clamp would hide
/// exactly the degeneracies this crate exists to detect.
pub const RHO_FLOOR: f64 = 1e-10;
pub const THETA_FLOOR: f64 = 1e-10;

/// Advective Courant factor for the automatic step-size policy.
pub const CFL: f64 = 0.4;

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Uniform staggered grid on [x_left, x_right]: `n` cells with centers at
/// x_left + (i + 1/2) dx and n + 1 nodes at x_left + j dx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    x_left: f64,
    x_right: f64,
}

impl Grid1D {
    pub fn new(n: usize, x_left: f64, x_right: f64) -> Result<Self, Error> {
        if n < 8 {
            return Err(Error::domain(format!(
                "grid needs at least 8 cells, got {n}"
            )));
        }
        if !(x_right - x_left).is_finite() || x_right <= x_left {
            return Err(Error::domain(format!(
                "grid interval [{x_left}, {x_right}] is empty or not finite"
            )));
        }
        Ok(Self { n, x_left, x_right })
    }

    /// Unit interval with `n` cells.
    pub fn unit(n: usize) -> Result<Self, Error> {
        Self::new(n, 0.0, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n as f64
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    pub fn node(&self, j: usize) -> f64 {
        self.x_left + j as f64 * self.dx()
    }
}

/// Discrete fields at one instant: densities and temperatures per cell,
/// velocities per node (walls always zero).
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub rho: Vec<f64>,
    pub theta: Vec<f64>,
    pub u: Vec<f64>,
    pub t: f64,
}

impl FluidState {
    /// Velocity interpolated to the center of cell `i`.
    pub fn u_at_cell(&self, i: usize) -> f64 {
        0.5 * (self.u[i] + self.u[i + 1])
    }
}

/// Step-size policy: a fixed step, or the stability-derived step capped at
/// `dt_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtPolicy {
    Fixed(f64),
    Auto { dt_max: f64 },
}

/// Complete problem description for one run.
#[derive(Clone)]
pub struct Scenario {
    pub grid: Grid1D,
    pub eos: GasEOS,
    pub laws: TransportLaws,
    /// Artificial mass-diffusion strength.
    pub eps: f64,
    /// Artificial pressure strength (delta rho^Gamma added to the pressure).
    pub delta_p: f64,
    /// Artificial pressure exponent; must be >= 2 whenever delta_p > 0.
    pub gamma: f64,
    pub rho0: SpaceFn,
    pub theta0: SpaceFn,
    pub u0: SpaceFn,
    pub theta_b_left: TimeFn,
    pub theta_b_right: TimeFn,
    /// Body force density g(t, x).
    pub g: FieldFn,
    pub t_end: f64,
    pub dt_policy: DtPolicy,
    /// Freeze density and velocity, evolving only the temperature equation.
    /// With zero velocity data this is the pure conduction problem.
    pub conduction_only: bool,
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scenario")
            .field("grid", &self.grid)
            .field("eps", &self.eps)
            .field("delta_p", &self.delta_p)
            .field("gamma", &self.gamma)
            .field("t_end", &self.t_end)
            .field("dt_policy", &self.dt_policy)
            .field("conduction_only", &self.conduction_only)
            .finish_non_exhaustive()
    }
}

impl Scenario {
    /// Checks every requirement and reports all failures at once.
    pub fn validate(&self) -> Result<(), Error> {
        let mut problems = Vec::new();
        if !self.eps.is_finite() || self.eps < 0.0 {
            problems.push(format!("eps must be finite and >= 0, got {}", self.eps));
        }
        if !self.delta_p.is_finite() || self.delta_p < 0.0 {
            problems.push(format!(
                "delta_p must be finite and >= 0, got {}",
                self.delta_p
            ));
        }
        if self.delta_p > 0.0 && !(self.gamma >= 2.0) {
            problems.push(format!(
                "gamma must be >= 2 when delta_p > 0, got {}",
                self.gamma
            ));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            problems.push(format!("t_end must be positive, got {}", self.t_end));
        }
        match self.dt_policy {
            DtPolicy::Fixed(dt) if !dt.is_finite() || dt <= 0.0 => {
                problems.push(format!("fixed dt must be positive, got {dt}"));
            }
            DtPolicy::Auto { dt_max } if !dt_max.is_finite() || dt_max <= 0.0 => {
                problems.push(format!("dt_max must be positive, got {dt_max}"));
            }
            _ => {}
        }
        if self.t_end > 0.0 && self.t_end.is_finite() {
            for k in 0..=32 {
                let t = self.t_end * k as f64 / 32.0;
                for (name, trace) in [
                    ("left", &self.theta_b_left),
                    ("right", &self.theta_b_right),
                ] {
                    let v = trace(t);
                    if !v.is_finite() || v <= 0.0 {
                        problems.push(format!(
                            "{name} wall temperature is {v} at t = {t}; it must stay positive"
                        ));
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }
}

/// Samples the initial data onto the staggered grid. Nonpositive density or
/// temperature samples are configuration errors; wall velocities are pinned
/// to zero regardless of the data.
pub fn init_state(sc: &Scenario) -> Result<FluidState, Error> {
    let n = sc.grid.n();
    let z_floor = sc.eos.law().domain_min();
    let mut problems = Vec::new();
    let mut rho = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    for i in 0..n {
        let x = sc.grid.cell_center(i);
        let r = (sc.rho0)(x);
        let th = (sc.theta0)(x);
        if !r.is_finite() || r <= 0.0 {
            problems.push(format!("rho0({x}) = {r} is not positive"));
        }
        if !th.is_finite() || th <= 0.0 {
            problems.push(format!("theta0({x}) = {th} is not positive"));
        } else if z_floor > 0.0 && r.is_finite() && r > 0.0 {
            let z = sc.eos.zed(r, th);
            if z < z_floor {
                problems.push(format!(
                    "initial state at x = {x} has Z = {z}, below the smoothed \
                     law's domain floor {z_floor}"
                ));
            }
        }
        rho.push(r);
        theta.push(th);
    }
    let mut u = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let v = if j == 0 || j == n {
            0.0
        } else {
            (sc.u0)(sc.grid.node(j))
        };
        if !v.is_finite() {
            problems.push(format!("u0({}) = {v} is not finite", sc.grid.node(j)));
        }
        u.push(v);
    }
    if problems.is_empty() {
        Ok(FluidState { rho, theta, u, t: 0.0 })
    } else {
        Err(Error::Config(problems))
    }
}

/// Stability-limited step size for the explicit sub-operators. Transport is
/// limited by the fastest signal, taken as |u| + sound speed since the
/// pressure coupling is explicit; the artificial mass diffusion feeds the
/// explicit cross terms, so dx^2/eps enters when eps > 0. Conduction and
/// viscosity are implicit and impose no limit here.
pub fn stable_dt(state: &FluidState, sc: &Scenario) -> f64 {
    let dx = sc.grid.dx();
    match sc.dt_policy {
        DtPolicy::Fixed(dt) => dt,
        DtPolicy::Auto { dt_max } => {
            let mut bound = dt_max;
            let mut speed: f64 = 0.0;
            for i in 0..sc.grid.n() {
                let c = sc.eos.sound_speed_sq(state.rho[i], state.theta[i]).max(0.0).sqrt();
                speed = speed.max(state.u_at_cell(i).abs() + c);
            }
            for &uj in &state.u {
                speed = speed.max(uj.abs());
            }
            if speed > 0.0 {
                bound = bound.min(CFL * dx / speed);
            }
            if sc.eps > 0.0 {
                bound = bound.min(CFL * dx * dx / sc.eps);
            }
            bound
        }
    }
}

/// Recorded snapshots of one run, oldest first.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<FluidState>,
}

impl Trajectory {
    pub fn last(&self) -> &FluidState {
        self.snapshots.last().expect("a trajectory holds at least the initial state")
    }

    /// One row per cell per snapshot with 17 significant digits, enough to
    /// reproduce every f64 exactly.
    pub fn csv(&self, grid: &Grid1D) -> String {
        let mut out = String::from("t,x,rho,theta,u\n");
        for snap in &self.snapshots {
            for i in 0..grid.n() {
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    snap.t,
                    grid.cell_center(i),
                    snap.rho[i],
                    snap.theta[i],
                    snap.u_at_cell(i),
                ));
            }
        }
        out
    }
}

/// Why and where a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub step: usize,
    pub t: f64,
    pub field: &'static str,
    pub cell: usize,
    pub value: f64,
}

impl RunFailure {
    pub fn reason(&self) -> &'static str {
        if self.field == "zed" {
            "state left the smoothed pressure law's domain"
        } else if self.value.is_finite() {
            "positivity floor crossed"
        } else {
            "numerical blowup"
        }
    }
}

/// A finished or aborted run: the trajectory collected so far plus failure
/// metadata when the integration stopped early.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub failure: Option<RunFailure>,
}

impl RunOutcome {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Integrates the scenario to t_end, recording a snapshot every `record_dt`
/// of simulated time (plus the initial state and the final one). Steps are
/// clipped to land on record times exactly, so snapshot spacing is uniform.
/// A failed step aborts the run and returns the partial trajectory together
/// with the failure metadata.
pub fn run(sc: &Scenario, record_dt: f64) -> Result<RunOutcome, Error> {
    if !record_dt.is_finite() || record_dt <= 0.0 {
        return Err(Error::domain(format!(
            "record cadence must be positive, got {record_dt}"
        )));
    }
    sc.validate()?;
    let mut state = init_state(sc)?;
    let mut trajectory = Trajectory { snapshots: vec![state.clone()] };
    let mut step_index = 0usize;
    let mut record_index = 1usize;

    loop {
        let target = (record_index as f64 * record_dt).min(sc.t_end);
        while state.t < target {
            let dt = stable_dt(&state, sc).min(target - state.t);
            if !dt.is_finite() || dt <= 0.0 {
                return Ok(RunOutcome {
                    trajectory,
                    failure: Some(RunFailure {
                        step: step_index,
                        t: state.t,
                        field: "dt",
                        cell: 0,
                        value: dt,
                    }),
                });
            }
            match step(&state, sc, dt) {
                Ok(next) => state = next,
                Err(f) => {
                    return Ok(RunOutcome {
                        trajectory,
                        failure: Some(RunFailure {
                            step: step_index,
                            t: state.t,
                            field: f.field,
                            cell: f.cell,
                            value: f.value,
                        }),
                    });
                }
            }
            step_index += 1;
            if target - state.t < 1e-12 * target.max(1.0) {
                state.t = target;
            }
        }
        trajectory.snapshots.push(state.clone());
        if target >= sc.t_end {
            return Ok(RunOutcome { trajectory, failure: None });
        }
        record_index += 1;
    }
}
