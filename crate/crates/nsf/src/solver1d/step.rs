//! One operator-split time step: explicit upwind transport and source
//! terms, then backward-Euler solves for the three diffusion operators.
//! All coefficients are frozen at the beginning of the step so each linear
//! solve stays tridiagonal.

use super::{FluidState, Scenario, RHO_FLOOR, THETA_FLOOR};
use crate::numerics::solve_tridiagonal;

/// First entry that left the admissible set during a step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    pub field: &'static str,
    pub cell: usize,
    pub value: f64,
}

/// Thermodynamic and transport coefficients evaluated on the incoming
/// state, shared by all three sub-updates.
struct Frozen {
    /// Physical plus artificial pressure per cell.
    p_tot: Vec<f64>,
    /// rho * c_v per cell.
    rcv: Vec<f64>,
    /// dp/dtheta per cell.
    p_th: Vec<f64>,
    /// 2 e_rho + rho e_rhorho per cell; nonnegative for convex laws.
    combo: Vec<f64>,
    /// Shear + bulk viscosity 4/3 mu + eta per cell.
    nu: Vec<f64>,
    /// Conductivity per cell.
    kap: Vec<f64>,
}

fn freeze(state: &FluidState, sc: &Scenario) -> Frozen {
    let n = sc.grid.n();
    let mut f = Frozen {
        p_tot: Vec::with_capacity(n),
        rcv: Vec::with_capacity(n),
        p_th: Vec::with_capacity(n),
        combo: Vec::with_capacity(n),
        nu: Vec::with_capacity(n),
        kap: Vec::with_capacity(n),
    };
    for i in 0..n {
        let (r, th) = (state.rho[i], state.theta[i]);
        let mut p = sc.eos.pressure_unchecked(r, th);
        if sc.delta_p > 0.0 {
            p += sc.delta_p * r.powf(sc.gamma);
        }
        let combo = sc.eos.convexity_combo_unchecked(r, th);
        debug_assert!(
            combo >= -1e-8,
            "nonconvex state law at rho = {r}, theta = {th}: combo = {combo}"
        );
        f.p_tot.push(p);
        f.rcv.push(r * sc.eos.cv_unchecked(r, th));
        f.p_th.push(sc.eos.dp_dtheta_unchecked(r, th));
        f.combo.push(combo);
        f.nu.push(4.0 / 3.0 * sc.laws.mu(th) + sc.laws.eta(th));
        f.kap.push(sc.laws.kappa(th));
    }
    f
}

fn admissible(field: &'static str, vals: &[f64], floor: f64) -> Result<(), StepFailure> {
    for (cell, &value) in vals.iter().enumerate() {
        if !value.is_finite() || value < floor {
            return Err(StepFailure { field, cell, value });
        }
    }
    Ok(())
}

/// Advances the state by `dt`. Backward-Euler diffusion keeps the implicit
/// parts unconditionally stable; the caller is responsible for a transport-
/// stable dt. A positivity-floor crossing or nonfinite value aborts the
/// step; the incoming state is never modified.
pub fn step(state: &FluidState, sc: &Scenario, dt: f64) -> Result<FluidState, StepFailure> {
    let frozen = freeze(state, sc);

    let rho = if sc.conduction_only {
        state.rho.clone()
    } else {
        continuity(state, sc, dt)
    };
    admissible("rho", &rho, RHO_FLOOR)?;

    let u = if sc.conduction_only {
        state.u.clone()
    } else {
        momentum(state, sc, &frozen, dt)
    };
    admissible("u", &u, f64::NEG_INFINITY)?;

    let theta = temperature(state, sc, &frozen, dt);
    admissible("theta", &theta, THETA_FLOOR)?;

    // Smoothed laws live on Z >= delta; leaving that set must surface as a
    // failed step here, not as a panic inside the next coefficient freeze.
    let z_floor = sc.eos.law().domain_min();
    if z_floor > 0.0 {
        for cell in 0..rho.len() {
            let z = sc.eos.zed(rho[cell], theta[cell]);
            if z < z_floor {
                return Err(StepFailure { field: "zed", cell, value: z });
            }
        }
    }

    Ok(FluidState { rho, theta, u, t: state.t + dt })
}

/// Mass update: upwind fluxes at nodes (wall fluxes vanish with the
/// velocity), then backward-Euler artificial diffusion with zero-flux ends.
fn continuity(state: &FluidState, sc: &Scenario, dt: f64) -> Vec<f64> {
    let n = sc.grid.n();
    let dx = sc.grid.dx();
    let mut flux = vec![0.0; n + 1];
    for j in 1..n {
        let uj = state.u[j];
        flux[j] = uj * if uj > 0.0 { state.rho[j - 1] } else { state.rho[j] };
    }
    let mut rho: Vec<f64> = (0..n)
        .map(|i| state.rho[i] - dt / dx * (flux[i + 1] - flux[i]))
        .collect();
    if sc.eps > 0.0 {
        let a = sc.eps * dt / (dx * dx);
        let lower = vec![-a; n - 1];
        let upper = vec![-a; n - 1];
        let mut diag = vec![1.0 + 2.0 * a; n];
        diag[0] = 1.0 + a;
        diag[n - 1] = 1.0 + a;
        let solved = solve_tridiagonal(&lower, &diag, &upper, &rho);
        // Rebuild the update from the solved field's face differences: each
        // interior difference enters two cells with opposite signs, so the
        // total mass is preserved to the last bit, which the elimination
        // alone does not guarantee.
        for i in 0..n {
            let d_left = if i == 0 { 0.0 } else { solved[i] - solved[i - 1] };
            let d_right = if i + 1 == n { 0.0 } else { solved[i + 1] - solved[i] };
            rho[i] += a * (d_right - d_left);
        }
    }
    rho
}

/// Velocity update on interior nodes: explicit upwind advection, pressure
/// gradient, body force and the mass-diffusion cross term, then implicit
/// viscosity plus artificial diffusion. Walls stay at zero.
fn momentum(state: &FluidState, sc: &Scenario, frozen: &Frozen, dt: f64) -> Vec<f64> {
    let n = sc.grid.n();
    let dx = sc.grid.dx();
    let u = &state.u;
    let mut rho_node = vec![0.0; n + 1];
    for j in 1..n {
        rho_node[j] = 0.5 * (state.rho[j - 1] + state.rho[j]);
    }
    let mut star = vec![0.0; n + 1];
    for j in 1..n {
        let uj = u[j];
        let adv = if uj > 0.0 {
            uj * (uj - u[j - 1]) / dx
        } else {
            uj * (u[j + 1] - uj) / dx
        };
        // Cells j-1 and j flank node j.
        let dp = (frozen.p_tot[j] - frozen.p_tot[j - 1]) / dx;
        let cross = 2.0 * sc.eps * (state.rho[j] - state.rho[j - 1]) / dx
            * (u[j + 1] - u[j - 1])
            / (2.0 * dx);
        let g = (sc.g)(state.t, sc.grid.node(j));
        star[j] = uj + dt * (-adv + (cross - dp) / rho_node[j] + g);
    }

    let m = n - 1;
    let mut lower = vec![0.0; m - 1];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m - 1];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let j = k + 1;
        // Cell j sits between nodes j and j+1, cell j-1 between j-1 and j.
        let visc = dt / (rho_node[j] * dx * dx);
        let art = sc.eps * dt / (dx * dx);
        let al = visc * frozen.nu[j - 1] + art;
        let ar = visc * frozen.nu[j] + art;
        diag[k] = 1.0 + al + ar;
        if k > 0 {
            lower[k - 1] = -al;
        }
        if k + 1 < m {
            upper[k] = -ar;
        }
        rhs[k] = star[j];
    }
    let solved = solve_tridiagonal(&lower, &diag, &upper, &rhs);
    let mut out = vec![0.0; n + 1];
    out[1..n].copy_from_slice(&solved);
    out
}

/// Temperature update in parabolic form: explicit upwind advection and the
/// heating sources, then backward-Euler conduction with the wall data
/// imposed at the end-of-step time through one-sided quadratic flux
/// stencils, so the wall temperature is met exactly.
fn temperature(state: &FluidState, sc: &Scenario, frozen: &Frozen, dt: f64) -> Vec<f64> {
    let n = sc.grid.n();
    let dx = sc.grid.dx();
    let u = &state.u;
    let th = &state.theta;
    let thb_l_now = (sc.theta_b_left)(state.t);
    let thb_r_now = (sc.theta_b_right)(state.t);

    let mut star = vec![0.0; n];
    for i in 0..n {
        let dudx = (u[i + 1] - u[i]) / dx;
        let uc = 0.5 * (u[i] + u[i + 1]);
        // Upwind advection; against a wall the gradient reaches to the wall
        // value half a cell away.
        let adv = if uc > 0.0 {
            if i == 0 {
                uc * (th[0] - thb_l_now) / (0.5 * dx)
            } else {
                uc * (th[i] - th[i - 1]) / dx
            }
        } else if uc < 0.0 {
            if i + 1 == n {
                uc * (thb_r_now - th[n - 1]) / (0.5 * dx)
            } else {
                uc * (th[i + 1] - th[i]) / dx
            }
        } else {
            0.0
        };
        // Central density gradient; mirror ghosts at the zero-flux walls.
        let drho = if i == 0 {
            (state.rho[1] - state.rho[0]) / (2.0 * dx)
        } else if i + 1 == n {
            (state.rho[n - 1] - state.rho[n - 2]) / (2.0 * dx)
        } else {
            (state.rho[i + 1] - state.rho[i - 1]) / (2.0 * dx)
        };
        // Viscous heating and the mass-diffusion source are pointwise
        // nonnegative; the pressure-work term carries either sign.
        let heating = frozen.nu[i] * dudx * dudx - th[i] * frozen.p_th[i] * dudx
            + sc.eps * drho * drho * frozen.combo[i];
        star[i] = th[i] + dt * (heating / frozen.rcv[i] - adv);
    }

    let thb_l = (sc.theta_b_left)(state.t + dt);
    let thb_r = (sc.theta_b_right)(state.t + dt);
    let kb_l = sc.laws.kappa(thb_l);
    let kb_r = sc.laws.kappa(thb_r);
    let mut lower = vec![0.0; n - 1];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n - 1];
    let mut rhs = star;
    for i in 0..n {
        let c = dt / (frozen.rcv[i] * dx * dx);
        if i == 0 {
            let kf = 0.5 * (frozen.kap[0] + frozen.kap[1]);
            diag[0] = 1.0 + c * (kf + 3.0 * kb_l);
            upper[0] = -c * (kf + kb_l / 3.0);
            rhs[0] += c * (8.0 / 3.0) * kb_l * thb_l;
        } else if i + 1 == n {
            let kf = 0.5 * (frozen.kap[n - 2] + frozen.kap[n - 1]);
            diag[n - 1] = 1.0 + c * (kf + 3.0 * kb_r);
            lower[n - 2] = -c * (kf + kb_r / 3.0);
            rhs[n - 1] += c * (8.0 / 3.0) * kb_r * thb_r;
        } else {
            let kl = 0.5 * (frozen.kap[i - 1] + frozen.kap[i]);
            let kr = 0.5 * (frozen.kap[i] + frozen.kap[i + 1]);
            lower[i - 1] = -c * kl;
            diag[i] = 1.0 + c * (kl + kr);
            upper[i] = -c * kr;
        }
    }
    solve_tridiagonal(&lower, &diag, &upper, &rhs)
}
