//! Command-line surface: integrate configured scenarios, sweep the
//! regularization grid, scan the structural hypotheses, and rebuild plots
//! from a finished run directory. Artifacts carry full float precision, so
//! rerunning the same configuration reproduces them byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::Config;
use crate::constitutive::check_structural;
use crate::diagnostics;
use crate::minprinciple::{derive_m, BoundSchedule, MVariant, SnapshotCheck, ViolationReport};
use crate::oracle;
use crate::plot;
use crate::solver1d::{self, init_state, RunOutcome, Scenario};
use crate::Error;

/// Process exit codes: 0 clean, 1 usage or configuration problems, 2 the
/// temperature bound was violated, 3 the integration aborted early (blowup
/// or a positivity floor), 4 a structural hypothesis failed.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_ABORTED: i32 = 3;
pub const EXIT_HYPOTHESIS: i32 = 4;

#[derive(Parser)]
#[command(
    name = "nsf",
    version,
    about = "Heat-conducting compressible flow in 1D with a certified temperature floor"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one scenario and write trajectory, diagnostics, status,
    /// manifest and plots
    Run {
        /// TOML configuration file
        config: PathBuf,
        /// Output directory, overriding [output].dir
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate every (eps, delta) pair from [sweep] in parallel; honors
    /// NSF_WORKERS, writes one subdirectory per case plus a summary manifest
    Sweep {
        /// TOML configuration file
        config: PathBuf,
        /// Root output directory, overriding [output].dir
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the structural hypotheses of the configured laws and print the
    /// extracted constants
    CheckEos {
        /// TOML configuration file
        config: PathBuf,
    },
    /// Rebuild the SVG figures of a run directory from its CSV tables
    Plot {
        /// Directory holding trajectory.csv and diagnostics.csv
        dir: PathBuf,
    },
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if informational { EXIT_OK } else { EXIT_CONFIG };
        }
    };
    let result = match cli.cmd {
        Cmd::Run { config, out } => cmd_run(&config, out),
        Cmd::Sweep { config, out } => cmd_sweep(&config, out),
        Cmd::CheckEos { config } => cmd_check_eos(&config),
        Cmd::Plot { dir } => cmd_plot(&dir),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            for line in error_lines(&e) {
                eprintln!("error: {line}");
            }
            match e {
                Error::Hypothesis(_) => EXIT_HYPOTHESIS,
                _ => EXIT_CONFIG,
            }
        }
    }
}

fn error_lines(e: &Error) -> Vec<String> {
    match e {
        Error::Config(list) => list.clone(),
        other => vec![other.to_string()],
    }
}

fn to_toml<T: Serialize>(value: &T) -> Result<String, Error> {
    toml::to_string_pretty(value).map_err(|e| Error::domain(format!("serialize: {e}")))
}

#[derive(Serialize)]
struct Status {
    completed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<StatusFailure>,
}

#[derive(Serialize)]
struct StatusFailure {
    step: usize,
    t: f64,
    field: String,
    cell: usize,
    value: f64,
    reason: String,
}

#[derive(Serialize)]
struct Manifest {
    config: ManifestConfig,
    derived: ManifestDerived,
    files: ManifestFiles,
    result: CaseSummary,
}

#[derive(Serialize)]
struct ManifestConfig {
    source: String,
    n: usize,
    eps: f64,
    delta: f64,
    gamma: f64,
    t_end: f64,
    record_dt: f64,
    eos_preset: String,
    m_variant: String,
    conduction_only: bool,
}

#[derive(Serialize)]
struct ManifestDerived {
    lambda: f64,
    kappa_ratio_lo: f64,
    kappa_ratio_hi: f64,
    e_lo: f64,
    e_hi: f64,
    p_bar: f64,
    reaction_m: f64,
    initial_level_y0: f64,
    final_bound: f64,
}

#[derive(Serialize)]
struct ManifestFiles {
    trajectory: String,
    diagnostics: String,
    status: String,
    plots: Vec<String>,
}

/// Per-case result digest; doubles as the [result] manifest table and one
/// row of the sweep summary.
#[derive(Clone, Serialize)]
struct CaseSummary {
    eps: f64,
    delta: f64,
    dir: String,
    completed: bool,
    snapshots: usize,
    final_t: f64,
    min_theta: f64,
    v_min: f64,
    worst_margin: f64,
    violations: usize,
    mass_drift: f64,
    max_energy_residual: f64,
    balance_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_error: Option<f64>,
    exit: i32,
}

fn cmd_run(config_path: &Path, out: Option<PathBuf>) -> Result<i32, Error> {
    let cfg = Config::load(config_path)?;
    let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    let source = config_path.display().to_string();
    let summary = run_case(
        &cfg,
        &source,
        ".",
        cfg.scenario.eps,
        cfg.scenario.delta,
        &dir,
        cfg.output.plots,
    )?;
    println!(
        "run: {} snapshots to t = {:.6}, min theta {:.6e}, V_min {:.3e}, {} bound violations",
        summary.snapshots, summary.final_t, summary.min_theta, summary.v_min, summary.violations
    );
    match summary.exit {
        EXIT_VIOLATION => println!("result: completed, temperature bound VIOLATED"),
        EXIT_ABORTED => println!("result: aborted early, see {}/status.toml", dir.display()),
        _ => println!("result: completed, temperature bound held"),
    }
    println!("wrote artifacts under {}", dir.display());
    Ok(summary.exit)
}

/// One full integration: scenario build, hypothesis scan, bound schedule,
/// time loop, minimum-principle audit, balance series, artifact files.
/// `label` names the case directory relative to whoever reads the manifest,
/// keeping artifacts independent of where the output tree lives.
fn run_case(
    cfg: &Config,
    source: &str,
    label: &str,
    eps: f64,
    delta: f64,
    dir: &Path,
    with_plots: bool,
) -> Result<CaseSummary, Error> {
    let sc = cfg.scenario_with(eps, delta)?;

    let hypo = check_structural(&sc.eos, &sc.laws);
    if !hypo.ok() {
        let mut lines = vec![format!(
            "structural hypotheses fail for the configured laws (Lambda = {:e})",
            hypo.constants.lambda
        )];
        for (name, count) in hypo.summary() {
            lines.push(format!("  {name}: {count} scan points"));
        }
        return Err(Error::hypothesis(lines.join("\n")));
    }
    let variant = cfg.m_variant().expect("variant names are config-validated");

    // Bound schedule from the initial field and sampled boundary traces.
    let state0 = init_state(&sc)?;
    let trace: Vec<f64> = (0..=128)
        .flat_map(|k| {
            let t = sc.t_end * k as f64 / 128.0;
            [(sc.theta_b_left)(t), (sc.theta_b_right)(t)]
        })
        .collect();
    let schedule =
        BoundSchedule::derive(&state0.theta, &trace, &sc.laws, &hypo.constants, variant)?;
    let dt_estimate = match sc.dt_policy {
        solver1d::DtPolicy::Fixed(dt) => dt,
        solver1d::DtPolicy::Auto { .. } => solver1d::stable_dt(&state0, &sc),
    };

    let outcome = solver1d::run(&sc, cfg.scenario.record_dt)?;
    let traj = &outcome.trajectory;

    // Minimum-principle audit of every recorded snapshot.
    let xs: Vec<f64> = (0..sc.grid.n()).map(|i| sc.grid.cell_center(i)).collect();
    let checks: Vec<SnapshotCheck> = traj
        .snapshots
        .iter()
        .map(|s| schedule.check_field(s.t, &xs, &s.theta))
        .collect();
    let mut violation = ViolationReport::new();
    for c in &checks {
        violation.absorb(c);
    }
    let min_theta = checks.iter().map(|c| c.min_theta).fold(f64::INFINITY, f64::min);

    // Balance series; a run that aborted inside the first record interval
    // has a single snapshot and no time derivative to take.
    let (balance, energy_residual) = if traj.snapshots.len() >= 2 {
        (
            diagnostics::ballistic_residual(traj, &sc)?,
            diagnostics::total_energy_residual(traj, &sc)?,
        )
    } else {
        (Vec::new(), Vec::new())
    };
    let mass0 = diagnostics::total_mass(&traj.snapshots[0], &sc.grid);
    let mass1 = diagnostics::total_mass(traj.last(), &sc.grid);
    let mass_drift = ((mass1 - mass0) / mass0).abs();
    let max_energy_residual =
        energy_residual.iter().fold(0.0f64, |acc, &r| acc.max(r.abs()));

    let oracle_error = if cfg.checks.oracle {
        oracle_check(&sc, &outcome)
    } else {
        None
    };

    fs::create_dir_all(dir)?;
    fs::write(dir.join("trajectory.csv"), traj.csv(&sc.grid))?;
    let diag_csv = if balance.is_empty() {
        format!("{}\n", diagnostics::CSV_HEADER)
    } else {
        diagnostics::csv_rows(&balance, &checks)
    };
    fs::write(dir.join("diagnostics.csv"), diag_csv)?;

    let mut plots = Vec::new();
    if with_plots {
        let last = traj.last();
        fs::write(
            dir.join("theta_strip.svg"),
            plot::theta_strip(&xs, &last.theta, last.t),
        )?;
        plots.push("theta_strip.svg".to_string());
        let ts: Vec<f64> = checks.iter().map(|c| c.t).collect();
        let mins: Vec<f64> = checks.iter().map(|c| c.min_theta).collect();
        let bounds: Vec<f64> = checks.iter().map(|c| c.bound).collect();
        fs::write(
            dir.join("min_theta.svg"),
            plot::bound_overlay(&ts, &mins, &bounds),
        )?;
        plots.push("min_theta.svg".to_string());
        if !balance.is_empty() {
            let bts: Vec<f64> = balance.iter().map(|r| r.t).collect();
            let ball: Vec<f64> = balance.iter().map(|r| r.ballistic_energy).collect();
            let marg: Vec<f64> = balance.iter().map(|r| r.inequality_margin).collect();
            fs::write(
                dir.join("balance.svg"),
                plot::balance_chart(&bts, &ball, &marg),
            )?;
            plots.push("balance.svg".to_string());
        }
    }

    let status = Status {
        completed: outcome.completed(),
        failure: outcome.failure.as_ref().map(|f| StatusFailure {
            step: f.step,
            t: f.t,
            field: f.field.to_string(),
            cell: f.cell,
            value: f.value,
            reason: f.reason().to_string(),
        }),
    };
    fs::write(dir.join("status.toml"), to_toml(&status)?)?;

    let exit = if outcome.failure.is_some() {
        EXIT_ABORTED
    } else if !violation.ok() {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    };
    let summary = CaseSummary {
        eps,
        delta,
        dir: label.to_string(),
        completed: outcome.completed(),
        snapshots: traj.snapshots.len(),
        final_t: traj.last().t,
        min_theta,
        v_min: violation.v_min,
        worst_margin: violation.worst_margin,
        violations: violation.count,
        mass_drift,
        max_energy_residual,
        balance_tolerance: cfg.balance_tolerance(dt_estimate),
        oracle_error,
        exit,
    };

    let manifest = Manifest {
        config: ManifestConfig {
            source: source.to_string(),
            n: sc.grid.n(),
            eps,
            delta,
            gamma: sc.gamma,
            t_end: sc.t_end,
            record_dt: cfg.scenario.record_dt,
            eos_preset: cfg.eos.preset.clone(),
            m_variant: variant.name().to_string(),
            conduction_only: sc.conduction_only,
        },
        derived: ManifestDerived {
            lambda: hypo.constants.lambda,
            kappa_ratio_lo: hypo.constants.kappa_ratio_lo,
            kappa_ratio_hi: hypo.constants.kappa_ratio_hi,
            e_lo: hypo.constants.e_lo,
            e_hi: hypo.constants.e_hi,
            p_bar: hypo.constants.p_bar,
            reaction_m: schedule.m(),
            initial_level_y0: schedule.y0(),
            final_bound: schedule.bound_at(traj.last().t),
        },
        files: ManifestFiles {
            trajectory: "trajectory.csv".to_string(),
            diagnostics: "diagnostics.csv".to_string(),
            status: "status.toml".to_string(),
            plots,
        },
        result: summary.clone(),
    };
    fs::write(dir.join("manifest.toml"), to_toml(&manifest)?)?;

    Ok(summary)
}

/// Compares a completed conduction-only run against the independent
/// reference integrator at 8x resolution. The reference models constant
/// density and fixed walls, so anything else opts out (None).
fn oracle_check(sc: &Scenario, outcome: &RunOutcome) -> Option<f64> {
    if !sc.conduction_only || !outcome.completed() {
        return None;
    }
    let n = sc.grid.n();
    let rho0 = (sc.rho0)(sc.grid.cell_center(0));
    let uniform = (0..n)
        .all(|i| ((sc.rho0)(sc.grid.cell_center(i)) - rho0).abs() <= 1e-12 * rho0.abs());
    let bl = (sc.theta_b_left)(0.0);
    let br = (sc.theta_b_right)(0.0);
    let steady = (0..=16).all(|k| {
        let t = sc.t_end * k as f64 / 16.0;
        ((sc.theta_b_left)(t) - bl).abs() <= 1e-12 && ((sc.theta_b_right)(t) - br).abs() <= 1e-12
    });
    if !uniform || !steady {
        return None;
    }
    let x_left = sc.grid.x_left();
    let theta0 = |x: f64| (sc.theta0)(x_left + x);
    let kappa = |th: f64| sc.laws.kappa(th);
    let rho_cv = |th: f64| rho0 * sc.eos.cv(rho0, th).expect("positive state");
    let problem = oracle::ConductionProblem {
        n: 8 * n,
        length: sc.grid.x_right() - x_left,
        theta0: &theta0,
        theta_b: (bl, br),
        kappa: &kappa,
        rho_cv: &rho_cv,
    };
    let t_end = outcome.trajectory.last().t;
    let fine = oracle::integrate(&problem, t_end, t_end / 4096.0);
    let coarse = oracle::restrict(&fine, n);
    let scale = coarse.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1e-300);
    let err = outcome
        .trajectory
        .last()
        .theta
        .iter()
        .zip(&coarse)
        .fold(0.0f64, |a, (&x, &y)| a.max((x - y).abs()));
    Some(err / scale)
}

#[derive(Serialize)]
struct SweepManifest {
    case: Vec<CaseSummary>,
}

fn case_dir_name(eps: f64, delta: f64) -> String {
    format!("eps{eps:e}_delta{delta:e}")
}

fn cmd_sweep(config_path: &Path, out: Option<PathBuf>) -> Result<i32, Error> {
    let cfg = Config::load(config_path)?;
    let root = out
        .unwrap_or_else(|| PathBuf::from(&cfg.output.dir))
        .join("sweep");
    let eps_list = if cfg.sweep.eps.is_empty() {
        vec![cfg.scenario.eps]
    } else {
        cfg.sweep.eps.clone()
    };
    let delta_list = if cfg.sweep.delta.is_empty() {
        vec![cfg.scenario.delta]
    } else {
        cfg.sweep.delta.clone()
    };
    let cases: Vec<(f64, f64)> = eps_list
        .iter()
        .flat_map(|&e| delta_list.iter().map(move |&d| (e, d)))
        .collect();

    let source = config_path.display().to_string();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<CaseSummary, Error>)>> = Mutex::new(Vec::new());
    let workers = std::env::var("NSF_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .min(cases.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= cases.len() {
                    break;
                }
                let (eps, delta) = cases[k];
                let name = case_dir_name(eps, delta);
                let dir = root.join(&name);
                let res = run_case(&cfg, &source, &name, eps, delta, &dir, false);
                results.lock().unwrap().push((k, res));
            });
        }
    });
    let mut collected = results.into_inner().unwrap();
    collected.sort_by_key(|&(k, _)| k);

    let mut summaries = Vec::new();
    let mut exit = EXIT_OK;
    for (k, res) in collected {
        let (eps, delta) = cases[k];
        match res {
            Ok(s) => {
                println!(
                    "case eps={eps:e} delta={delta:e}: exit {} ({} snapshots, V_min {:.3e})",
                    s.exit, s.snapshots, s.v_min
                );
                exit = exit.max(s.exit);
                summaries.push(s);
            }
            Err(e) => {
                eprintln!(
                    "error: case eps={eps:e} delta={delta:e}: {}",
                    error_lines(&e).join("; ")
                );
                exit = exit.max(match e {
                    Error::Hypothesis(_) => EXIT_HYPOTHESIS,
                    _ => EXIT_CONFIG,
                });
            }
        }
    }
    fs::create_dir_all(&root)?;
    fs::write(
        root.join("manifest.toml"),
        to_toml(&SweepManifest { case: summaries })?,
    )?;
    println!(
        "sweep: {} cases with {workers} workers, worst exit {exit}, summary in {}",
        cases.len(),
        root.join("manifest.toml").display()
    );
    Ok(exit)
}

fn cmd_check_eos(config_path: &Path) -> Result<i32, Error> {
    let cfg = Config::load(config_path)?;
    let eos = cfg.eos()?;
    let laws = cfg.transport()?;
    let report = check_structural(&eos, &laws);
    let c = &report.constants;
    println!("window gap P_bar        : {:.6e}", c.p_bar);
    println!("radiation constant a    : {:.6e}", c.radiation_a);
    println!(
        "primitive ratio window  : [{:.6e}, {:.6e}]  (theta {:.3e} / {:.3e})",
        c.kappa_ratio_lo, c.kappa_ratio_hi, report.ratio_lo_argmin, report.ratio_hi_argmax
    );
    println!("coupling window         : [{:.6e}, {:.6e}]", c.e_lo, c.e_hi);
    println!(
        "coupling floor Lambda   : {:.6e}  (theta {:.3e})",
        c.lambda, report.lambda_argmin
    );
    for variant in [MVariant::Derived, MVariant::Alternative] {
        match derive_m(c, variant) {
            Ok(m) => println!("reaction M ({:<11}) : {:.6e}", variant.name(), m),
            Err(e) => println!(
                "reaction M ({:<11}) : unavailable: {}",
                variant.name(),
                error_lines(&e).join("; ")
            ),
        }
    }
    if report.violations.is_empty() {
        println!("hypotheses: all hold on the scan grid");
    } else {
        for (name, count) in report.summary() {
            println!("hypothesis FAILED: {name} at {count} scan points");
        }
        if let Some(v) = report.violations.first() {
            let at_rho = v.rho.map_or(String::new(), |r| format!(", rho = {r:.6e}"));
            println!("  first: theta = {:.6e}{at_rho}: {}", v.theta, v.detail);
        }
    }
    Ok(if report.ok() { EXIT_OK } else { EXIT_HYPOTHESIS })
}

fn cmd_plot(dir: &Path) -> Result<i32, Error> {
    let traj = plot::Table::parse(&fs::read_to_string(dir.join("trajectory.csv"))?)?;
    let ts = traj.column("t")?;
    if ts.is_empty() {
        return Err(Error::domain("trajectory.csv has no rows"));
    }
    let xs_all = traj.column("x")?;
    let th_all = traj.column("theta")?;
    // Full-precision formatting round-trips exactly, so the final snapshot
    // is the set of rows whose time equals the last one bitwise.
    let t_last = ts[ts.len() - 1];
    let mut xs = Vec::new();
    let mut theta = Vec::new();
    for k in 0..ts.len() {
        if ts[k] == t_last {
            xs.push(xs_all[k]);
            theta.push(th_all[k]);
        }
    }
    fs::write(
        dir.join("theta_strip.svg"),
        plot::theta_strip(&xs, &theta, t_last),
    )?;
    let mut written = vec!["theta_strip.svg"];

    let diag_path = dir.join("diagnostics.csv");
    if diag_path.exists() {
        let diag = plot::Table::parse(&fs::read_to_string(&diag_path)?)?;
        if diag.rows() >= 2 {
            let t = diag.column("t")?;
            fs::write(
                dir.join("min_theta.svg"),
                plot::bound_overlay(t, diag.column("min_theta")?, diag.column("bound")?),
            )?;
            fs::write(
                dir.join("balance.svg"),
                plot::balance_chart(t, diag.column("ballistic")?, diag.column("margin")?),
            )?;
            written.push("min_theta.svg");
            written.push("balance.svg");
        }
    }
    println!("plot: wrote {} under {}", written.join(", "), dir.display());
    Ok(EXIT_OK)
}
