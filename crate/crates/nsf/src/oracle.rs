//! Independent reference integrator for the pure conduction problem
//! rho c_v dtheta/dt = d/dx(kappa(theta) dtheta/dx) with prescribed wall
//! temperatures. Deliberately shares nothing with the main solver: its own
//! time discretization (Crank-Nicolson with a midpoint coefficient
//! predictor), its own tridiagonal elimination, its own wall stencil. The
//! solver is verified against this curve, so any shared code would make
//! that comparison circular.

/// Pure conduction setup on [0, length] with `n` uniform cells; fields are
/// functions of temperature only (density is constant in this problem).
pub struct ConductionProblem<'a> {
    pub n: usize,
    pub length: f64,
    pub theta0: &'a dyn Fn(f64) -> f64,
    /// Fixed wall temperatures (left, right).
    pub theta_b: (f64, f64),
    pub kappa: &'a dyn Fn(f64) -> f64,
    /// theta -> rho * c_v at the problem's constant density.
    pub rho_cv: &'a dyn Fn(f64) -> f64,
}

/// Integrates to `t_end` with fixed step `dt`; returns cell-center
/// temperatures. Crank-Nicolson in time; coefficients are evaluated at a
/// half-step predictor so the nonlinear lag is second order too.
pub fn integrate(p: &ConductionProblem, t_end: f64, dt: f64) -> Vec<f64> {
    assert!(p.n >= 4 && p.length > 0.0 && dt > 0.0 && t_end >= 0.0);
    let dx = p.length / p.n as f64;
    let mut theta: Vec<f64> = (0..p.n)
        .map(|i| (p.theta0)((i as f64 + 0.5) * dx))
        .collect();
    assert!(theta.iter().all(|&t| t > 0.0), "initial data must be positive");

    let mut t = 0.0;
    while t < t_end - 1e-14 * t_end {
        let step = dt.min(t_end - t);
        // Predictor: half an explicit step, only to place the coefficients.
        let rate = apply(&theta, p, dx);
        let half: Vec<f64> = theta
            .iter()
            .zip(&rate)
            .map(|(&th, &r)| th + 0.5 * step * r)
            .collect();
        theta = cn_step(&theta, &half, p, dx, step);
        t += step;
    }
    theta
}

/// Block-averages a fine-grid cell field onto `coarse_n` cells.
pub fn restrict(fine: &[f64], coarse_n: usize) -> Vec<f64> {
    assert!(coarse_n > 0 && fine.len() % coarse_n == 0);
    let block = fine.len() / coarse_n;
    (0..coarse_n)
        .map(|i| fine[i * block..(i + 1) * block].iter().sum::<f64>() / block as f64)
        .collect()
}

/// d/dx(kappa dtheta/dx) / (rho c_v) with coefficients at `coef` (which may
/// be the state itself or a predictor), evaluated at state `theta`.
fn conduction_rate(theta: &[f64], coef: &[f64], p: &ConductionProblem, dx: f64) -> Vec<f64> {
    let n = theta.len();
    let (tb_l, tb_r) = p.theta_b;
    let mut out = vec![0.0; n];
    for i in 0..n {
        // Fluxes kappa * dtheta/dx at the two faces of cell i; wall faces
        // use the quadratic through the wall value and two cell centers.
        let f_left = if i == 0 {
            (p.kappa)(tb_l) * (9.0 * theta[0] - theta[1] - 8.0 * tb_l) / (3.0 * dx)
        } else {
            let k = 0.5 * ((p.kappa)(coef[i - 1]) + (p.kappa)(coef[i]));
            k * (theta[i] - theta[i - 1]) / dx
        };
        let f_right = if i == n - 1 {
            (p.kappa)(tb_r) * (8.0 * tb_r - 9.0 * theta[n - 1] + theta[n - 2]) / (3.0 * dx)
        } else {
            let k = 0.5 * ((p.kappa)(coef[i]) + (p.kappa)(coef[i + 1]));
            k * (theta[i + 1] - theta[i]) / dx
        };
        out[i] = (f_right - f_left) / (dx * (p.rho_cv)(coef[i]));
    }
    out
}

fn apply(theta: &[f64], p: &ConductionProblem, dx: f64) -> Vec<f64> {
    conduction_rate(theta, theta, p, dx)
}

/// One Crank-Nicolson step with coefficients held at `coef`.
fn cn_step(theta: &[f64], coef: &[f64], p: &ConductionProblem, dx: f64, dt: f64) -> Vec<f64> {
    let n = theta.len();
    let (tb_l, tb_r) = p.theta_b;
    let explicit = conduction_rate(theta, coef, p, dx);

    // Assemble (I - dt/2 A) theta_new = theta + dt/2 (A theta + b), where
    // the wall contributions enter b; A rows repeat the flux stencils.
    let kb_l = (p.kappa)(tb_l);
    let kb_r = (p.kappa)(tb_r);
    let mut lower = vec![0.0; n - 1];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n - 1];
    let mut rhs: Vec<f64> = theta
        .iter()
        .zip(&explicit)
        .map(|(&th, &r)| th + 0.5 * dt * r)
        .collect();
    for i in 0..n {
        let c = 0.5 * dt / ((p.rho_cv)(coef[i]) * dx * dx);
        if i == 0 {
            let kf = 0.5 * ((p.kappa)(coef[0]) + (p.kappa)(coef[1]));
            diag[0] = 1.0 + c * (kf + 3.0 * kb_l);
            upper[0] = -c * (kf + kb_l / 3.0);
            rhs[0] += c * (8.0 / 3.0) * kb_l * tb_l;
        } else if i == n - 1 {
            let kf = 0.5 * ((p.kappa)(coef[n - 2]) + (p.kappa)(coef[n - 1]));
            diag[n - 1] = 1.0 + c * (kf + 3.0 * kb_r);
            lower[n - 2] = -c * (kf + kb_r / 3.0);
            rhs[n - 1] += c * (8.0 / 3.0) * kb_r * tb_r;
        } else {
            let kl = 0.5 * ((p.kappa)(coef[i - 1]) + (p.kappa)(coef[i]));
            let kr = 0.5 * ((p.kappa)(coef[i]) + (p.kappa)(coef[i + 1]));
            lower[i - 1] = -c * kl;
            diag[i] = 1.0 + c * (kl + kr);
            upper[i] = -c * kr;
        }
    }
    sweep(&lower, &diag, &upper, &rhs)
}

/// Gaussian elimination for the tridiagonal system; intentionally a local
/// copy so the oracle stays independent of the solver's linear algebra.
fn sweep(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut r = rhs.to_vec();
    for i in 1..n {
        let w = lower[i - 1] / d[i - 1];
        d[i] -= w * upper[i - 1];
        r[i] -= w * r[i - 1];
    }
    let mut x = vec![0.0; n];
    x[n - 1] = r[n - 1] / d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (r[i] - upper[i] * x[i + 1]) / d[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn linear_profile_is_steady() {
        let p = ConductionProblem {
            n: 32,
            length: 1.0,
            theta0: &|x| 1.0 + x,
            theta_b: (1.0, 2.0),
            kappa: &|_| 1.0,
            rho_cv: &|_| 1.0,
        };
        let out = integrate(&p, 0.5, 1e-3);
        for (i, &th) in out.iter().enumerate() {
            let x = (i as f64 + 0.5) / 32.0;
            assert!((th - (1.0 + x)).abs() < 1e-11, "drift at cell {i}");
        }
    }

    #[test]
    fn sine_mode_decays_at_the_known_rate() {
        // theta = 1 + sin(pi x) e^{-pi^2 t} solves the constant-coefficient
        // problem exactly with walls at 1.
        let p = ConductionProblem {
            n: 256,
            length: 1.0,
            theta0: &|x| 1.0 + (PI * x).sin(),
            theta_b: (1.0, 1.0),
            kappa: &|_| 1.0,
            rho_cv: &|_| 1.0,
        };
        let t_end = 0.1;
        let out = integrate(&p, t_end, 1e-5);
        let decay = (-PI * PI * t_end).exp();
        let mut worst: f64 = 0.0;
        for (i, &th) in out.iter().enumerate() {
            let x = (i as f64 + 0.5) / 256.0;
            worst = worst.max((th - (1.0 + (PI * x).sin() * decay)).abs());
        }
        assert!(worst < 1e-4, "max error {worst}");
    }

    #[test]
    fn restriction_averages_blocks() {
        let fine = [1.0, 3.0, 2.0, 4.0, 10.0, 20.0, 30.0, 40.0];
        assert_eq!(restrict(&fine, 2), vec![2.5, 25.0]);
        assert_eq!(restrict(&fine, 4), vec![2.0, 3.0, 15.0, 35.0]);
    }

    #[test]
    fn nonlinear_conductivity_still_holds_walls() {
        // With kappa ~ theta^3 the steady profile is the one with linear
        // kappa-primitive: (theta^4)' constant; check the walls and
        // monotonicity after settling.
        let p = ConductionProblem {
            n: 64,
            length: 1.0,
            theta0: &|_| 1.15,
            theta_b: (1.0, 1.3),
            kappa: &|th: f64| th * th * th,
            rho_cv: &|_| 1.0,
        };
        let out = integrate(&p, 3.0, 2e-3);
        // Steady state has linear theta^4: theta = (1 + (1.3^4 - 1) x)^{1/4}.
        let span = 1.3f64.powi(4) - 1.0;
        for (i, &th) in out.iter().enumerate() {
            let x = (i as f64 + 0.5) / 64.0;
            let exact = (1.0 + span * x).powf(0.25);
            assert!((th - exact).abs() < 2e-4, "cell {i}: {th} vs {exact}");
        }
    }
}
