//! Acceptance gate. Each test checks one headline capability end to end
//! and prints a single `ACCEPT <name>: PASS (...)` line whose numbers are
//! the same ones the assertions enforce, so a failure is self-describing.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use nsf::constitutive::{
    check_structural, GasEOS, LawHandle, PiecewiseLaw, PowerSum, StructuralConstants,
    TransportLaws,
};
use nsf::diagnostics;
use nsf::minprinciple::{
    derive_m, initial_level, subsolution, BoundSchedule, MVariant, ViolationReport,
};
use nsf::mollifier::{mollify, shift_ladder, shift_rate, verify_mollified, MollifierKernel};
use nsf::numerics::{lin_grid, log_grid};
use nsf::oracle::{self, ConductionProblem};
use nsf::solver1d::{init_state, run, DtPolicy, Grid1D, RunOutcome, Scenario, SpaceFn, TimeFn};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sfn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> SpaceFn {
    Arc::new(f)
}

fn tfn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> TimeFn {
    Arc::new(f)
}

/// Quiescent unit box with unit walls; tests override what they vary.
fn base_scenario(n: usize, eos: GasEOS, laws: TransportLaws, t_end: f64) -> Scenario {
    Scenario {
        grid: Grid1D::unit(n).unwrap(),
        eos,
        laws,
        eps: 1e-3,
        delta_p: 1e-3,
        gamma: 2.0,
        rho0: sfn(|_| 1.0),
        theta0: sfn(|_| 1.0),
        u0: sfn(|_| 0.0),
        theta_b_left: tfn(|_| 1.0),
        theta_b_right: tfn(|_| 1.0),
        g: Arc::new(|_, _| 0.0),
        t_end,
        dt_policy: DtPolicy::Auto { dt_max: 0.01 },
        conduction_only: false,
    }
}

/// Scans the hypotheses and derives the floor schedule for a scenario,
/// sampling the boundary trace the way a certificate must: including t = 0
/// and t_end.
fn certify(sc: &Scenario, variant: MVariant) -> BoundSchedule {
    let report = check_structural(&sc.eos, &sc.laws);
    assert!(
        report.ok(),
        "structural hypotheses failed: {:?}",
        report.summary()
    );
    let state0 = init_state(sc).unwrap();
    let trace: Vec<f64> = (0..=64)
        .flat_map(|k| {
            let t = sc.t_end * k as f64 / 64.0;
            [(sc.theta_b_left)(t), (sc.theta_b_right)(t)]
        })
        .collect();
    BoundSchedule::derive(&state0.theta, &trace, &sc.laws, &report.constants, variant).unwrap()
}

/// Checks every snapshot against the schedule; returns the accumulated
/// report and the smallest distance min(theta) - bound seen.
fn check_floor(outcome: &RunOutcome, sc: &Scenario, schedule: &BoundSchedule) -> (ViolationReport, f64) {
    let xs: Vec<f64> = (0..sc.grid.n()).map(|i| sc.grid.cell_center(i)).collect();
    let mut report = ViolationReport::new();
    let mut gap = f64::INFINITY;
    for snap in &outcome.trajectory.snapshots {
        let chk = schedule.check_field(snap.t, &xs, &snap.theta);
        gap = gap.min(chk.min_theta - chk.bound);
        report.absorb(&chk);
    }
    (report, gap)
}

fn mass_drift(outcome: &RunOutcome, sc: &Scenario) -> f64 {
    let snaps = &outcome.trajectory.snapshots;
    let first = diagnostics::total_mass(&snaps[0], &sc.grid);
    let last = diagnostics::total_mass(snaps.last().unwrap(), &sc.grid);
    (last - first).abs()
}

#[test]
fn floor_certificates_hold_across_randomized_scenarios() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let cases = 20;
    let mut worst_gap = f64::INFINITY;
    let mut snapshots = 0usize;
    for k in 0..cases {
        let z_bar = [0.5, 1.0, 2.0][k % 3];
        let rad_a = [0.0, 0.5][k % 2];
        let eos = GasEOS::iconic(z_bar, rad_a).unwrap();
        let laws = TransportLaws::scaled(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            7.0,
        )
        .unwrap();
        let theta_base = rng.gen_range(0.7..1.4);
        let theta_bump = rng.gen_range(0.0..0.5);
        let rho_base = rng.gen_range(0.6..1.8);
        let rho_wave = rng.gen_range(0.0..0.3);
        let u_amp = rng.gen_range(0.0..0.3);
        let (wl, wr) = (rng.gen_range(0.7..1.5), rng.gen_range(0.7..1.5));
        let wobble = if k % 2 == 0 { 0.15 } else { 0.0 };

        let mut sc = base_scenario(128, eos, laws, 0.5);
        sc.rho0 = sfn(move |x| rho_base * (1.0 + rho_wave * (2.0 * PI * x).sin()));
        sc.theta0 = sfn(move |x| theta_base + theta_bump * (PI * x).sin().powi(2));
        sc.u0 = sfn(move |x| u_amp * (2.0 * PI * x).sin());
        sc.theta_b_left = tfn(move |t| wl * (1.0 + wobble * (3.0 * t).sin()));
        sc.theta_b_right = tfn(move |t| wr * (1.0 - wobble * (2.0 * t).sin() * 0.5));

        let schedule = certify(&sc, MVariant::Derived);
        let outcome = run(&sc, 0.05).unwrap();
        assert!(
            outcome.completed(),
            "case {k} aborted: {:?}",
            outcome.failure
        );
        snapshots += outcome.trajectory.snapshots.len();
        let (report, gap) = check_floor(&outcome, &sc, &schedule);
        assert!(
            report.ok(),
            "case {k}: {} floor violations, worst margin {:.3e} at {:?}",
            report.count,
            report.worst_margin,
            report.location
        );
        worst_gap = worst_gap.min(gap);
    }
    let elapsed = start.elapsed();
    assert!(worst_gap > 0.0, "floor gap closed to {worst_gap:.3e}");
    assert!(
        elapsed.as_secs() < 60,
        "floor suite took {elapsed:.1?}, budget 60 s"
    );
    println!(
        "ACCEPT temperature-floor: PASS ({cases} randomized runs, {snapshots} snapshots, \
         0 violations, min(theta_min - bound) = {worst_gap:.4e}, {elapsed:.1?})"
    );
}

#[test]
fn conduction_tracks_the_independent_oracle_at_second_order() {
    let eos = GasEOS::iconic(1.0, 0.0).unwrap();
    let laws = TransportLaws::reference(7.0).unwrap();
    let t_end = 0.1;
    let (wl, wr) = (0.85, 1.1);
    let theta0 = |x: f64| 0.85 + 0.25 * x + 0.3 * (PI * x).sin();

    let kappa = |th: f64| laws.kappa(th);
    let rho_cv = |th: f64| eos.cv(1.0, th).expect("positive state");
    let fine = oracle::integrate(
        &ConductionProblem {
            n: 1024,
            length: 1.0,
            theta0: &theta0,
            theta_b: (wl, wr),
            kappa: &kappa,
            rho_cv: &rho_cv,
        },
        t_end,
        1e-5,
    );

    let mut errs = Vec::new();
    for &(n, dt) in &[(32usize, 1.6e-4), (64, 4e-5), (128, 1e-5)] {
        let mut sc = base_scenario(n, eos.clone(), laws.clone(), t_end);
        sc.eps = 0.0;
        sc.delta_p = 0.0;
        sc.conduction_only = true;
        sc.theta0 = sfn(theta0);
        sc.theta_b_left = tfn(move |_| wl);
        sc.theta_b_right = tfn(move |_| wr);
        sc.dt_policy = DtPolicy::Fixed(dt);
        let outcome = run(&sc, t_end).unwrap();
        assert!(outcome.completed(), "conduction run n = {n} aborted");
        let reference = oracle::restrict(&fine, n);
        let err = outcome
            .trajectory
            .last()
            .theta
            .iter()
            .zip(&reference)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0f64, f64::max);
        errs.push(err);
    }
    let r1 = (errs[0] / errs[1]).log2();
    let r2 = (errs[1] / errs[2]).log2();
    assert!(
        errs[2] <= 2e-5,
        "finest-grid relative error {:.3e} exceeds 2e-5",
        errs[2]
    );
    for (r, lvl) in [(r1, "32->64"), (r2, "64->128")] {
        assert!(
            (1.7..=2.3).contains(&r),
            "refinement {lvl} converged at order {r:.2}, expected about 2 \
             (errors {errs:?})"
        );
    }
    println!(
        "ACCEPT conduction-oracle: PASS (rel errors {:.3e} / {:.3e} / {:.3e} at n = 32/64/128, \
         orders {r1:.2} and {r2:.2})",
        errs[0], errs[1], errs[2]
    );
}

#[test]
fn state_functions_match_closed_forms_and_scanned_constants() {
    let start = Instant::now();
    let iconic = GasEOS::iconic(1.0, 0.0).unwrap();
    let rad3 = GasEOS::iconic(1.0, 3.0).unwrap();
    let rad1 = GasEOS::iconic(1.0, 1.0).unwrap();

    // Pressure, energy, entropy, heat capacity against hand-computed values.
    let closed: [(f64, f64); 10] = [
        (iconic.pressure(1.0, 1.0).unwrap(), 1.0),
        (iconic.pressure(8.0, 1.0).unwrap(), 19.6),
        (rad3.pressure(1.0, 1.0).unwrap(), 2.0),
        (iconic.internal_energy(1.0, 1.0).unwrap(), 1.5),
        (iconic.entropy(1.0, 1.0).unwrap(), 1.0),
        (iconic.entropy(2.0, 1.0).unwrap(), 0.5),
        (rad3.entropy(4.0, 1.0).unwrap(), 1.25),
        (iconic.cv(1.0, 2.0).unwrap(), 1.5),
        (iconic.cv(2.0, 1.0).unwrap(), 0.75),
        (rad1.cv(1.0, 1.0).unwrap(), 5.5),
    ];
    for (i, (got, want)) in closed.iter().enumerate() {
        assert!(
            (got - want).abs() < 1e-12,
            "closed-form check {i}: got {got}, want {want}"
        );
    }

    // Conductivity primitive at unit temperature.
    let laws = TransportLaws::reference(7.0).unwrap();
    let k1 = laws.kappa_primitive(1.0);
    assert!((k1 - 19.0 / 24.0).abs() < 1e-14, "K(1) = {k1}");

    // Scanned structural constants for the unit-knee law.
    let report = check_structural(&iconic, &laws);
    assert!(report.ok(), "{:?}", report.summary());
    let c = report.constants;
    for (got, want, name) in [
        (c.lambda, 2.0 / 3.0, "lambda"),
        (c.kappa_ratio_lo, 0.125, "ratio_lo"),
        (c.kappa_ratio_hi, 2.0 / 3.0, "ratio_hi"),
        (c.e_lo, 1.0 / 3.0, "e_lo"),
        (c.e_hi, 2.0 / 3.0, "e_hi"),
        (c.p_bar, 2.0 / 3.0, "p_bar"),
    ] {
        assert!((got - want).abs() < 1e-9, "{name}: got {got}, want {want}");
    }
    let m_derived = derive_m(&c, MVariant::Derived).unwrap();
    let m_alt = derive_m(&c, MVariant::Alternative).unwrap();
    assert!((m_derived - 32.0 / 3.0).abs() < 1e-8, "M = {m_derived}");
    assert!((m_alt - 32.0 / 27.0).abs() < 1e-8, "M_alt = {m_alt}");

    // Convexity combination: zero on the linear law, 2^(-1/3) on the
    // degenerate tail at (rho, theta) = (2, 1).
    let flat = GasEOS::ideal().convexity_combo(1.7, 0.9).unwrap();
    assert!(flat.abs() < 1e-13, "ideal combo {flat}");
    let combo = iconic.convexity_combo(2.0, 1.0).unwrap();
    let want = 2.0f64.powf(-1.0 / 3.0);
    assert!((combo - want).abs() < 1e-12, "combo {combo}, want {want}");

    // Gibbs consistency of every family member, smoothed laws included.
    let base: LawHandle = Arc::new(PiecewiseLaw::iconic(1.0).unwrap());
    let smooth = GasEOS::new(
        Arc::new(mollify(Arc::clone(&base), MollifierKernel::new(0.05).unwrap())),
        0.3,
    )
    .unwrap();
    let members = [
        ("ideal", GasEOS::ideal()),
        ("iconic", iconic),
        ("iconic-radiation", GasEOS::iconic(2.0, 1.0).unwrap()),
        ("mollified", smooth),
    ];
    let mut worst_gibbs = 0.0f64;
    for (name, eos) in &members {
        for &rho in &[0.3, 1.0, 2.7] {
            for &theta in &[0.5, 1.0, 2.2] {
                let (g1, g2) = eos.gibbs_residuals(rho, theta).unwrap();
                worst_gibbs = worst_gibbs.max(g1.abs()).max(g2.abs());
                assert!(
                    g1.abs() < 1e-12 && g2.abs() < 1e-12,
                    "{name} Gibbs residuals ({g1:.3e}, {g2:.3e}) at ({rho}, {theta})"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "constitutive pack took {elapsed:.1?}");
    println!(
        "ACCEPT state-functions: PASS (10 closed forms to 1e-12, constants \
         Lambda/windows/M to 1e-9, worst Gibbs residual {worst_gibbs:.2e}, {elapsed:.1?})"
    );
}

#[test]
fn mollification_window_shift_halves_with_the_kernel() {
    let start = Instant::now();
    let base: LawHandle = Arc::new(PiecewiseLaw::iconic(1.0).unwrap());
    let deltas = [0.2, 0.1, 0.05, 0.025];
    let shifts = shift_ladder(&base, &deltas).unwrap();
    let mut ratios = Vec::new();
    for w in shifts.windows(2) {
        let r = w[1] / w[0];
        assert!(
            (0.3..=0.7).contains(&r),
            "halving ratio {r:.3} outside [0.3, 0.7]; shifts {shifts:?}"
        );
        ratios.push(r);
    }
    let rate = shift_rate(&deltas, &shifts);

    // Structure preservation at one representative width.
    let molly = mollify(Arc::clone(&base), MollifierKernel::new(0.1).unwrap());
    let verify = verify_mollified(&molly, &lin_grid(0.1, 10.0, 500));
    assert!(verify.ok(), "{verify:?}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "ladder took {elapsed:.1?}");
    println!(
        "ACCEPT mollification-ladder: PASS (shifts {:?} for deltas {:?}, \
         halving ratios {:?}, slope {rate:.3}, structure checks hold, {elapsed:.1?})",
        shifts
            .iter()
            .map(|s| format!("{s:.3e}"))
            .collect::<Vec<_>>(),
        deltas,
        ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
    );
}

#[test]
fn reaction_constant_and_decay_schedule_are_exact() {
    // Frozen reaction constants from constants assembled by hand.
    let gas = StructuralConstants {
        kappa_ratio_lo: 0.125,
        kappa_ratio_hi: 0.5,
        e_lo: 4.0 / 9.0,
        e_hi: 2.0 / 3.0,
        lambda: 1.0,
        p_bar: 2.0 / 3.0,
        radiation_a: 0.0,
    };
    let m1 = derive_m(&gas, MVariant::Derived).unwrap();
    let m2 = derive_m(&gas, MVariant::Alternative).unwrap();
    assert!((m1 - 64.0 / 9.0).abs() < 1e-12, "derived M = {m1}");
    assert!((m2 - 64.0 / 81.0).abs() < 1e-12, "alternative M = {m2}");
    let unit = StructuralConstants {
        kappa_ratio_lo: 0.5,
        kappa_ratio_hi: 0.5,
        e_lo: 0.5,
        e_hi: 1.0,
        lambda: 1.0,
        p_bar: 1.0,
        radiation_a: 0.0,
    };
    let m3 = derive_m(&unit, MVariant::Derived).unwrap();
    assert!((m3 - 1.0).abs() < 1e-15, "unit M = {m3}");

    // Initial level for unit data: half the conductivity primitive.
    let laws = TransportLaws::reference(7.0).unwrap();
    let y0 = initial_level(&[1.0; 8], &[1.0; 2], &laws).unwrap();
    assert!((y0 - 19.0 / 48.0).abs() < 1e-15, "Y0 = {y0}");

    // The decay solves dY/dt = -M Y^2: central-difference residual.
    let h = 3e-5;
    let mut worst_ode = 0.0f64;
    for &t in &[0.1, 1.0, 10.0] {
        let dy = (subsolution(y0, m1, t + h) - subsolution(y0, m1, t - h)) / (2.0 * h);
        let resid = dy + m1 * subsolution(y0, m1, t).powi(2);
        worst_ode = worst_ode.max(resid.abs());
        assert!(resid.abs() < 1e-8, "ODE residual {resid:.3e} at t = {t}");
    }

    // Primitive inversion round-trips over eight decades.
    let mut worst_inv = 0.0f64;
    for theta in log_grid(1e-6, 100.0, 40) {
        let back = laws.invert_kappa_primitive(laws.kappa_primitive(theta)).unwrap();
        let rel = ((back - theta) / theta).abs();
        worst_inv = worst_inv.max(rel);
        assert!(rel < 1e-12, "round trip at {theta:.3e}: rel error {rel:.3e}");
    }

    // The bound schedule is positive, nonincreasing, and sits exactly at
    // K^{-1} of the decay level.
    let schedule = BoundSchedule::new(y0, m1, laws.clone()).unwrap();
    let mut prev = f64::INFINITY;
    for t in lin_grid(0.0, 10.0, 50) {
        let b = schedule.bound_at(t);
        assert!(b > 0.0 && b <= prev + 1e-12, "bound not monotone at t = {t}");
        let level = laws.kappa_primitive(b);
        let y = schedule.y_at(t);
        assert!(
            ((level - y) / y).abs() < 1e-9,
            "K(bound) = {level} vs Y = {y} at t = {t}"
        );
        prev = b;
    }
    println!(
        "ACCEPT reaction-schedule: PASS (M = 64/9, 64/81, 1 exact; Y0 = 19/48; \
         worst ODE residual {worst_ode:.2e}; worst inversion {worst_inv:.2e}; \
         bound monotone over [0, 10])"
    );
}

#[test]
fn balance_ledgers_close_on_live_runs() {
    let start = Instant::now();

    // (a) A uniform box at wall temperature is a fixed point: every ledger
    // row must vanish to rounding.
    let eos = GasEOS::iconic(1.0, 0.0).unwrap();
    let laws = TransportLaws::reference(7.0).unwrap();
    let mut steady = base_scenario(32, eos, laws, 0.01);
    steady.dt_policy = DtPolicy::Auto { dt_max: 1e-3 };
    let outcome = run(&steady, 0.005).unwrap();
    assert!(outcome.completed());
    let reports = diagnostics::ballistic_residual(&outcome.trajectory, &steady).unwrap();
    let energy = diagnostics::total_energy_residual(&outcome.trajectory, &steady).unwrap();
    assert!(reports.len() >= 3);
    let mut steady_worst = 0.0f64;
    for (r, e) in reports.iter().zip(&energy) {
        steady_worst = steady_worst.max(r.inequality_margin.abs()).max(e.abs());
        assert!(
            r.inequality_margin.abs() <= 1e-10 && e.abs() <= 1e-10,
            "steady ledger row at t = {}: margin {:.3e}, energy {:.3e}",
            r.t,
            r.inequality_margin,
            e
        );
        assert!((0.0..=1e-12).contains(&r.dissipation));
    }
    assert!(mass_drift(&outcome, &steady) <= 1e-14);

    // (b) A small conduction bump with constant conductivity: margins and
    // energy residuals must close to the splitting error.
    let kappa_flat = PowerSum::new(vec![(1.0, 0.0)]).unwrap();
    let flat_laws = TransportLaws::with_kappa(1.0, 1.0, kappa_flat).unwrap();
    let bump = |dt: f64| {
        let mut sc = base_scenario(32, GasEOS::ideal(), flat_laws.clone(), 2e-4);
        sc.eps = 0.0;
        sc.delta_p = 0.0;
        sc.theta0 = sfn(|x| 1.0 + 1e-3 * (PI * x).sin().powi(4));
        sc.dt_policy = DtPolicy::Fixed(dt);
        sc
    };
    let sc = bump(2.5e-7);
    let outcome = run(&sc, 2e-5).unwrap();
    assert!(outcome.completed());
    let reports = diagnostics::ballistic_residual(&outcome.trajectory, &sc).unwrap();
    let energy = diagnostics::total_energy_residual(&outcome.trajectory, &sc).unwrap();
    let rows = reports.len();
    assert!(rows >= 5);
    // First and last rows use one-sided slope fits; the interior rows are
    // the meaningful ledger.
    let mut worst_margin = f64::INFINITY;
    let mut worst_energy = 0.0f64;
    for k in 1..rows - 1 {
        worst_margin = worst_margin.min(reports[k].inequality_margin);
        worst_energy = worst_energy.max(energy[k].abs());
    }
    for r in &reports {
        assert!(r.dissipation >= 0.0, "negative dissipation {:?}", r.dissipation);
    }
    assert!(
        worst_margin >= -1e-6,
        "interior margin {worst_margin:.3e} below -1e-6"
    );
    assert!(
        worst_energy <= 1e-7,
        "interior energy residual {worst_energy:.3e} above 1e-7"
    );
    assert!(mass_drift(&outcome, &sc) <= 1e-13);

    // (c) Halving dt halves the interior energy defect (first-order
    // splitting), so the coarse/fine ratio sits near 2.
    let coarse_sc = bump(5e-7);
    let coarse = run(&coarse_sc, 2e-5).unwrap();
    let coarse_energy = diagnostics::total_energy_residual(&coarse.trajectory, &coarse_sc).unwrap();
    let coarse_worst = coarse_energy[1..coarse_energy.len() - 1]
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    let ratio = coarse_worst / worst_energy;
    assert!(
        (1.4..=2.6).contains(&ratio),
        "dt-refinement ratio {ratio:.2} outside [1.4, 2.6] \
         (coarse {coarse_worst:.3e}, fine {worst_energy:.3e})"
    );

    let elapsed = start.elapsed();
    println!(
        "ACCEPT balance-ledgers: PASS (steady worst {steady_worst:.2e}; bump interior \
         margin {worst_margin:.2e}, energy {worst_energy:.2e}; dt ratio {ratio:.2}, {elapsed:.1?})"
    );
}

#[test]
fn regularization_sweep_completes_with_certified_floors() {
    let start = Instant::now();

    let reference = TransportLaws::reference(7.0).unwrap();
    let smooth_eos = GasEOS::new(
        Arc::new(mollify(
            Arc::new(PiecewiseLaw::iconic(1.0).unwrap()) as LawHandle,
            MollifierKernel::new(0.05).unwrap(),
        )),
        0.0,
    )
    .unwrap();

    type Build = Box<dyn Fn() -> Scenario>;
    let families: Vec<(&str, MVariant, Build)> = vec![
        ("quiescent-cooling", MVariant::Derived, {
            let (eos, laws) = (GasEOS::iconic(1.0, 0.0).unwrap(), reference.clone());
            Box::new(move || {
                let mut sc = base_scenario(64, eos.clone(), laws.clone(), 0.2);
                sc.theta_b_left = tfn(|_| 0.8);
                sc.theta_b_right = tfn(|_| 0.8);
                sc
            })
        }),
        ("shear", MVariant::Alternative, {
            let (eos, laws) = (GasEOS::iconic(1.0, 0.0).unwrap(), reference.clone());
            Box::new(move || {
                let mut sc = base_scenario(64, eos.clone(), laws.clone(), 0.2);
                sc.u0 = sfn(|x| 0.3 * (2.0 * PI * x).sin());
                sc
            })
        }),
        ("compression-gradient", MVariant::Derived, {
            let eos = GasEOS::iconic(2.0, 0.0).unwrap();
            let laws = TransportLaws::scaled(1.3, 0.7, 1.5, 8.0).unwrap();
            Box::new(move || {
                let mut sc = base_scenario(64, eos.clone(), laws.clone(), 0.2);
                sc.rho0 = sfn(|x| 0.9 + 0.4 * x);
                sc.u0 = sfn(|x| -0.2 * (PI * x).sin());
                sc.theta0 = sfn(|_| 1.1);
                sc.theta_b_left = tfn(|_| 1.1);
                sc.theta_b_right = tfn(|_| 0.9);
                sc
            })
        }),
        ("radiation-hot-spot", MVariant::Alternative, {
            let (eos, laws) = (GasEOS::iconic(1.0, 1.0).unwrap(), reference.clone());
            Box::new(move || {
                let mut sc = base_scenario(64, eos.clone(), laws.clone(), 0.2);
                sc.theta0 = sfn(|x| 1.0 + 0.8 * (-((x - 0.5) / 0.15).powi(2)).exp());
                sc
            })
        }),
        ("mollified-wobble", MVariant::Derived, {
            let (eos, laws) = (smooth_eos, reference.clone());
            Box::new(move || {
                let mut sc = base_scenario(64, eos.clone(), laws.clone(), 0.2);
                sc.theta0 = sfn(|x| 1.05 + 0.1 * (PI * x).cos());
                sc.theta_b_left = tfn(|t| 1.0 + 0.1 * (3.0 * t).sin());
                sc.theta_b_right = tfn(|t| 1.0 + 0.1 * (3.0 * t).cos());
                sc
            })
        }),
    ];

    let grid_eps = [1e-2, 1e-3, 1e-4];
    let mut total_runs = 0usize;
    let mut worst_gap = f64::INFINITY;
    let mut worst_drift = 0.0f64;
    for (name, variant, build) in &families {
        let schedule = certify(&build(), *variant);
        for &eps in &grid_eps {
            for &delta_p in &grid_eps {
                let mut sc = build();
                sc.eps = eps;
                sc.delta_p = delta_p;
                let outcome = run(&sc, 0.04).unwrap();
                assert!(
                    outcome.completed(),
                    "{name} eps = {eps:.0e} delta = {delta_p:.0e} aborted: {:?}",
                    outcome.failure
                );
                let (report, gap) = check_floor(&outcome, &sc, &schedule);
                assert!(
                    report.ok(),
                    "{name} eps = {eps:.0e} delta = {delta_p:.0e}: {} violations, \
                     worst margin {:.3e}",
                    report.count,
                    report.worst_margin
                );
                let drift = mass_drift(&outcome, &sc);
                assert!(
                    drift <= 1e-11,
                    "{name} eps = {eps:.0e} delta = {delta_p:.0e}: mass drift {drift:.3e}"
                );
                worst_gap = worst_gap.min(gap);
                worst_drift = worst_drift.max(drift);
                total_runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(total_runs, 45);
    assert!(
        elapsed.as_secs() < 300,
        "sweep took {elapsed:.1?}, budget 300 s"
    );
    println!(
        "ACCEPT regularization-sweep: PASS (5 families x 9 (eps, delta) pairs, all \
         completed with zero floor violations, min(theta_min - bound) = {worst_gap:.3e}, \
         max mass drift {worst_drift:.2e}, {elapsed:.1?})"
    );
}

#[test]
fn identical_inputs_reproduce_identical_artifacts() {
    let make = |mollified: bool| {
        let eos = if mollified {
            GasEOS::new(
                Arc::new(mollify(
                    Arc::new(PiecewiseLaw::iconic(1.0).unwrap()) as LawHandle,
                    MollifierKernel::new(0.05).unwrap(),
                )),
                0.0,
            )
            .unwrap()
        } else {
            GasEOS::iconic(1.0, 0.0).unwrap()
        };
        let mut sc = base_scenario(48, eos, TransportLaws::reference(7.0).unwrap(), 0.05);
        sc.u0 = sfn(|x| 0.2 * (2.0 * PI * x).sin());
        sc.theta0 = sfn(|x| 1.0 + 0.2 * (PI * x).sin().powi(2));
        sc
    };
    for (name, mollified) in [("piecewise", false), ("mollified", true)] {
        let sc_a = make(mollified);
        let sc_b = make(mollified);
        let a = run(&sc_a, 0.01).unwrap();
        let b = run(&sc_b, 0.01).unwrap();
        assert!(a.completed() && b.completed());
        let csv_a = a.trajectory.csv(&sc_a.grid);
        let csv_b = b.trajectory.csv(&sc_b.grid);
        assert!(csv_a == csv_b, "{name}: trajectory tables differ between reruns");

        let schedule = certify(&sc_a, MVariant::Derived);
        let xs: Vec<f64> = (0..sc_a.grid.n()).map(|i| sc_a.grid.cell_center(i)).collect();
        let rows = |outcome: &RunOutcome, sc: &Scenario| {
            let reports = diagnostics::ballistic_residual(&outcome.trajectory, sc).unwrap();
            let checks: Vec<_> = outcome
                .trajectory
                .snapshots
                .iter()
                .map(|s| schedule.check_field(s.t, &xs, &s.theta))
                .collect();
            diagnostics::csv_rows(&reports, &checks)
        };
        assert!(
            rows(&a, &sc_a) == rows(&b, &sc_b),
            "{name}: diagnostics tables differ between reruns"
        );
    }
    println!(
        "ACCEPT determinism: PASS (piecewise and mollified reruns produce byte-identical \
         trajectory and diagnostics tables)"
    );
}
