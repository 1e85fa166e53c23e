//! Balance diagnostics over recorded trajectories: total mass, the
//! ballistic energy with its dissipation/production bookkeeping, the total
//! energy residual, and the pointwise entropy production lower bound. All
//! integrals use the midpoint rule on cell centers; spatial gradients are
//! central in the interior and one-sided second order at the walls; time
//! derivatives of integral quantities come from the parabola through three
//! neighbouring snapshots (one-sided at the series ends).

use crate::constitutive::TransportLaws;
use crate::minprinciple::SnapshotCheck;
use crate::solver1d::{FluidState, Grid1D, Scenario, Trajectory};
use crate::Error;

/// One snapshot's balance bookkeeping. `inequality_margin` is production
/// minus drain: rhs - d/dt(ballistic) - dissipation, which vanishes for an
/// exact solution and must not dip below -tolerance for a faithful one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub t: f64,
    pub mass: f64,
    pub ballistic_energy: f64,
    pub dissipation: f64,
    pub rhs: f64,
    pub inequality_margin: f64,
    /// Cellwise minimum of (1/theta)(nu (du/dx)^2 + kappa (dtheta/dx)^2 / theta).
    pub entropy_production_lb: f64,
}

/// Midpoint-rule total mass.
pub fn total_mass(state: &FluidState, grid: &Grid1D) -> f64 {
    state.rho.iter().sum::<f64>() * grid.dx()
}

/// Wall temperatures at time `t`, checked finite and positive.
fn wall_values(sc: &Scenario, t: f64) -> Result<(f64, f64), Error> {
    let bl = (sc.theta_b_left)(t);
    let br = (sc.theta_b_right)(t);
    for (name, v) in [("left", bl), ("right", br)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::domain(format!(
                "{name} wall temperature is {v} at t = {t}; the linear extension needs positive traces"
            )));
        }
    }
    Ok((bl, br))
}

/// Time derivatives of the wall traces by a small central difference.
fn wall_rates(sc: &Scenario, t: f64) -> (f64, f64) {
    let h = 1e-6 * t.abs().max(1.0);
    let t_lo = (t - h).max(0.0);
    let span = t + h - t_lo;
    (
        ((sc.theta_b_left)(t + h) - (sc.theta_b_left)(t_lo)) / span,
        ((sc.theta_b_right)(t + h) - (sc.theta_b_right)(t_lo)) / span,
    )
}

/// Ballistic energy: integral of rho |u|^2 / 2 + rho e - thetaB rho s plus
/// the artificial pressure store, with thetaB extended linearly between the
/// walls. Errs when the extension is not positive.
pub fn ballistic_energy(state: &FluidState, sc: &Scenario) -> Result<f64, Error> {
    let (bl, br) = wall_values(sc, state.t)?;
    let grid = &sc.grid;
    let dx = grid.dx();
    let width = grid.x_right() - grid.x_left();
    let mut total = 0.0;
    for i in 0..grid.n() {
        let (r, th) = (state.rho[i], state.theta[i]);
        if !(r > 0.0) || !(th > 0.0) {
            return Err(Error::domain(format!(
                "ballistic energy needs positive fields, cell {i} has rho = {r}, theta = {th}"
            )));
        }
        let theta_b = bl + (br - bl) * (grid.cell_center(i) - grid.x_left()) / width;
        let uc = state.u_at_cell(i);
        let mut cell = 0.5 * r * uc * uc + r * sc.eos.internal_energy_unchecked(r, th)
            - theta_b * r * sc.eos.entropy_unchecked(r, th);
        if sc.delta_p > 0.0 {
            cell += sc.delta_p / (sc.gamma - 1.0) * r.powf(sc.gamma);
        }
        total += cell * dx;
    }
    Ok(total)
}

/// Cellwise lower bound on the entropy production rate:
/// (1/theta)(nu (du/dx)^2 + kappa (dtheta/dx)^2 / theta), always >= 0.
/// Temperature gradients are central inside and one-sided second order at
/// the edge cells.
pub fn entropy_production_lower(
    state: &FluidState,
    grid: &Grid1D,
    laws: &TransportLaws,
) -> Vec<f64> {
    let n = grid.n();
    let dx = grid.dx();
    let th = &state.theta;
    (0..n)
        .map(|i| {
            let dudx = (state.u[i + 1] - state.u[i]) / dx;
            let dth = if i == 0 {
                (-3.0 * th[0] + 4.0 * th[1] - th[2]) / (2.0 * dx)
            } else if i + 1 == n {
                (3.0 * th[n - 1] - 4.0 * th[n - 2] + th[n - 3]) / (2.0 * dx)
            } else {
                (th[i + 1] - th[i - 1]) / (2.0 * dx)
            };
            let nu = 4.0 / 3.0 * laws.mu(th[i]) + laws.eta(th[i]);
            (nu * dudx * dudx + laws.kappa(th[i]) * dth * dth / th[i]) / th[i]
        })
        .collect()
}

/// Everything the balance series need from one snapshot.
struct SnapshotIntegrals {
    mass: f64,
    ballistic: f64,
    total_energy: f64,
    /// Ballistic drain: artificial diffusion, weighted viscous/conductive
    /// production, and the mass-diffusion pressure term; all nonnegative.
    dissipation: f64,
    /// Ballistic production side.
    rhs: f64,
    /// Artificial-diffusion drain in the total energy balance.
    energy_dissipation: f64,
    /// Work, boundary heat flux and the mass-diffusion cross term in the
    /// total energy balance.
    energy_rhs: f64,
    sigma_min: f64,
}

fn integrate_snapshot(state: &FluidState, sc: &Scenario) -> Result<SnapshotIntegrals, Error> {
    let grid = &sc.grid;
    let n = grid.n();
    let dx = grid.dx();
    let width = grid.x_right() - grid.x_left();
    let (bl, br) = wall_values(sc, state.t)?;
    let (bl_dot, br_dot) = wall_rates(sc, state.t);
    let grad_b = (br - bl) / width;
    let rho = &state.rho;
    let th = &state.theta;
    for i in 0..n {
        if !(rho[i] > 0.0) || !(th[i] > 0.0) || !rho[i].is_finite() || !th[i].is_finite() {
            return Err(Error::domain(format!(
                "balance diagnostics need positive finite fields, cell {i} has rho = {}, theta = {}",
                rho[i], th[i]
            )));
        }
    }

    let mut out = SnapshotIntegrals {
        mass: 0.0,
        ballistic: 0.0,
        total_energy: 0.0,
        dissipation: 0.0,
        rhs: 0.0,
        energy_dissipation: 0.0,
        energy_rhs: 0.0,
        sigma_min: f64::INFINITY,
    };

    for i in 0..n {
        let (r, t_i) = (rho[i], th[i]);
        let x = grid.cell_center(i);
        let theta_b = bl + grad_b * (x - grid.x_left());
        let theta_b_dot = bl_dot + (br_dot - bl_dot) * (x - grid.x_left()) / width;
        let uc = state.u_at_cell(i);
        let dudx = (state.u[i + 1] - state.u[i]) / dx;
        // Temperature gradient: wall-anchored quadratic at the edge cells,
        // central inside.
        let dth = if i == 0 {
            (3.0 * th[0] + th[1] - 4.0 * bl) / (3.0 * dx)
        } else if i + 1 == n {
            (4.0 * br - 3.0 * th[n - 1] - th[n - 2]) / (3.0 * dx)
        } else {
            (th[i + 1] - th[i - 1]) / (2.0 * dx)
        };
        // Density gradient with mirror ghosts matching the zero-flux walls.
        let drho = if i == 0 {
            (rho[1] - rho[0]) / (2.0 * dx)
        } else if i + 1 == n {
            (rho[n - 1] - rho[n - 2]) / (2.0 * dx)
        } else {
            (rho[i + 1] - rho[i - 1]) / (2.0 * dx)
        };

        let e = sc.eos.internal_energy_unchecked(r, t_i);
        let s = sc.eos.entropy_unchecked(r, t_i);
        let cv = sc.eos.cv_unchecked(r, t_i);
        let ep = sc.eos.energy_partials(r, t_i).expect("positive state");
        let sp = sc.eos.entropy_partials(r, t_i).expect("positive state");
        let p_rho = sc.eos.dp_drho(r, t_i).expect("positive state");
        let nu = 4.0 / 3.0 * sc.laws.mu(t_i) + sc.laws.eta(t_i);
        let kap = sc.laws.kappa(t_i);
        let g = (sc.g)(state.t, x);

        out.mass += r * dx;
        let kinetic = 0.5 * r * uc * uc;
        let mut store = kinetic + r * e;
        if sc.delta_p > 0.0 {
            store += sc.delta_p / (sc.gamma - 1.0) * r.powf(sc.gamma);
        }
        out.total_energy += store * dx;
        out.ballistic += (store - theta_b * r * s) * dx;

        let production = nu * dudx * dudx + kap * dth * dth / t_i;
        out.sigma_min = out.sigma_min.min(production / t_i);

        let mut art = sc.eps * r * dudx * dudx;
        if sc.delta_p > 0.0 {
            art += sc.eps * sc.delta_p * sc.gamma * r.powf(sc.gamma - 2.0) * drho * drho;
        }
        out.energy_dissipation += art * dx;
        out.dissipation += (art
            + theta_b / t_i * production
            + sc.eps * theta_b / (r * t_i) * drho * drho * p_rho)
            * dx;

        let cross = sc.eps * drho * dth * (cv + r * ep.d2e_drho_dtheta);
        out.energy_rhs += (r * g * uc - cross) * dx;
        out.rhs += (-(r * s * theta_b_dot + r * s * uc * grad_b
            - kap / t_i * dth * grad_b
            - r * g * uc)
            - cross
            + sc.eps * grad_b * drho * (s + r * sp.ds_drho)
            + sc.eps * theta_b * drho * dth * (r * sp.d2s_drho_dtheta + sp.ds_dtheta))
            * dx;
    }

    // Boundary heat flux in the total energy balance, with the same
    // one-sided quadratic wall stencils the solver imposes.
    let flux_left = sc.laws.kappa(bl) * (9.0 * th[0] - th[1] - 8.0 * bl) / (3.0 * dx);
    let flux_right = sc.laws.kappa(br) * (8.0 * br - 9.0 * th[n - 1] + th[n - 2]) / (3.0 * dx);
    out.energy_rhs += flux_right - flux_left;
    Ok(out)
}

/// Slope at `ts[k]` of the parabola through three neighbouring samples,
/// clipped to one-sided windows at the ends. Exact for quadratic series and
/// tolerant of a shorter final interval.
fn series_slope(ts: &[f64], vs: &[f64], k: usize) -> f64 {
    let n = ts.len();
    assert!(n >= 2 && vs.len() == n);
    if n == 2 {
        return (vs[1] - vs[0]) / (ts[1] - ts[0]);
    }
    let mid = k.clamp(1, n - 2);
    let (t0, t1, t2) = (ts[mid - 1], ts[mid], ts[mid + 1]);
    let (f0, f1, f2) = (vs[mid - 1], vs[mid], vs[mid + 1]);
    let d01 = (f1 - f0) / (t1 - t0);
    let d12 = (f2 - f1) / (t2 - t1);
    let curv = (d12 - d01) / (t2 - t0);
    d01 + curv * (2.0 * ts[k] - t0 - t1)
}

/// Ballistic balance bookkeeping for every snapshot of a trajectory.
/// Needs at least two snapshots for the time derivative.
pub fn ballistic_residual(traj: &Trajectory, sc: &Scenario) -> Result<Vec<BalanceReport>, Error> {
    let snaps = &traj.snapshots;
    if snaps.len() < 2 {
        return Err(Error::domain(format!(
            "balance series need at least two snapshots, got {}",
            snaps.len()
        )));
    }
    let integrals: Vec<SnapshotIntegrals> = snaps
        .iter()
        .map(|s| integrate_snapshot(s, sc))
        .collect::<Result<_, _>>()?;
    let ts: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let ballistic: Vec<f64> = integrals.iter().map(|s| s.ballistic).collect();
    Ok(integrals
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let rate = series_slope(&ts, &ballistic, k);
            BalanceReport {
                t: ts[k],
                mass: s.mass,
                ballistic_energy: s.ballistic,
                dissipation: s.dissipation,
                rhs: s.rhs,
                inequality_margin: s.rhs - rate - s.dissipation,
                entropy_production_lb: s.sigma_min,
            }
        })
        .collect())
}

/// Total energy balance residual per snapshot: d/dt(energy store) plus the
/// artificial-diffusion drain minus work, boundary heat flux and the
/// mass-diffusion cross term. Zero for an exact solution.
pub fn total_energy_residual(traj: &Trajectory, sc: &Scenario) -> Result<Vec<f64>, Error> {
    let snaps = &traj.snapshots;
    if snaps.len() < 2 {
        return Err(Error::domain(format!(
            "balance series need at least two snapshots, got {}",
            snaps.len()
        )));
    }
    let integrals: Vec<SnapshotIntegrals> = snaps
        .iter()
        .map(|s| integrate_snapshot(s, sc))
        .collect::<Result<_, _>>()?;
    let ts: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let energy: Vec<f64> = integrals.iter().map(|s| s.total_energy).collect();
    Ok(integrals
        .iter()
        .enumerate()
        .map(|(k, s)| series_slope(&ts, &energy, k) + s.energy_dissipation - s.energy_rhs)
        .collect())
}

pub const CSV_HEADER: &str = "t,mass,ballistic,dissipation,rhs,margin,min_theta,bound,V_min";

/// Joins balance reports with minimum-principle snapshot checks into the
/// run's diagnostics table. The two series must cover the same snapshots.
pub fn csv_rows(reports: &[BalanceReport], checks: &[SnapshotCheck]) -> String {
    assert_eq!(reports.len(), checks.len(), "mismatched diagnostic series");
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (r, c) in reports.iter().zip(checks) {
        assert!(
            (r.t - c.t).abs() <= 1e-12 * r.t.abs().max(1.0),
            "diagnostic series disagree on snapshot times"
        );
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.t,
            r.mass,
            r.ballistic_energy,
            r.dissipation,
            r.rhs,
            r.inequality_margin,
            c.min_theta,
            c.bound,
            c.v_min,
        ));
    }
    out
}
