//! The four run modes behind the command-line front end.
//!
//! Every command resolves its inputs through [`RunConfig`], writes its
//! outputs atomically under the configured directory, and reports through
//! the shared exit convention: 0 when everything passed or converged, 1 when
//! a check failed or an iteration did not converge, 2 (via `Err`) when the
//! configuration itself is unusable.

use std::io;
use std::path::{Path, PathBuf};

use halfwave::flux::StructuralFlux;
use halfwave::solver::{solve_nonhomogeneous, SolveResult, SourceData, WeakProblem};
use halfwave::traces::{hardy_vanishing_check, trace_initial, x_norm_upper};
use halfwave::verify::{self, CheckRow, Suite};
use halfwave::{HalfwaveError, SampledField2D, SpaceTimeGrid};

use crate::config::{profile, BoundarySpec, Command, RunConfig, SourceSpec};
use crate::output::{field_to_csv, residuals_to_csv, write_atomic, Manifest};

fn write_err(e: io::Error, path: &Path) -> String {
    format!("cannot write {}: {e}", path.display())
}

fn ensure_out_dir(dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))
}

fn print_rows(rows: &[CheckRow]) {
    for row in rows {
        println!(
            "{:.<44} {}",
            row.check,
            if row.pass { "pass" } else { "FAIL" }
        );
    }
}

fn write_report(rows: &[CheckRow], out_dir: &Path) -> Result<PathBuf, String> {
    let report = out_dir.join("report.csv");
    write_atomic(&report, &verify::rows_to_csv(rows)).map_err(|e| write_err(e, &report))?;
    Ok(report)
}

/// Echoes every parameter that can influence the numbers into the manifest.
fn push_common(man: &mut Manifest, cfg: &RunConfig, command: Command) {
    man.push("command", command.name());
    man.push("halfwave_version", halfwave::VERSION);
    man.push("cli_version", env!("CARGO_PKG_VERSION"));
    man.push("seed", cfg.seed);
    man.push("x_min", cfg.x_min);
    man.push("x_max", cfg.x_max);
    man.push("m", cfg.m);
    man.push("t_max", cfg.t_max);
    man.push("n", cfg.n);
    man.push("flux", &cfg.flux.name);
    man.push("flux_p", cfg.flux.p);
    man.push("flux_coefficient", cfg.flux.coefficient);
    man.push("source", cfg.source.describe());
    man.push("boundary", cfg.boundary.describe());
    man.push("exact", cfg.exact.as_deref().unwrap_or("none"));
    man.push("field", cfg.field.describe());
    man.push("tol", format!("{:e}", cfg.tol));
    man.push("max_iter", cfg.max_iter);
    man.push("samples", cfg.samples);
    man.push("refine", cfg.refine);
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Runs a named check suite, appends an audit of the configured flux when
/// the config supplies one, writes `report.csv`, and prints one line per
/// check.
pub fn cmd_verify(cfg: &RunConfig) -> Result<u8, String> {
    let suite = Suite::from_name(&cfg.suite).ok_or_else(|| {
        format!(
            "unknown suite '{}'; use fraccalc, seminorms, flux, solver, traces, or all",
            cfg.suite
        )
    })?;
    cfg.validate()?;
    ensure_out_dir(&cfg.out_dir)?;

    let mut rows = verify::run_suite(suite);
    if cfg.flux_given && matches!(suite, Suite::Flux | Suite::All) {
        let flux = cfg.flux.build()?;
        rows.extend(verify::audit_rows("configured", &flux, cfg.seed, cfg.samples));
    }

    let report = write_report(&rows, &cfg.out_dir)?;
    print_rows(&rows);
    let failed = rows.iter().filter(|r| !r.pass).count();
    println!(
        "{} checks, {failed} failed, report at {}",
        rows.len(),
        report.display()
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

/// Structurally audits the configured flux alone and writes the three-row
/// report.
pub fn cmd_audit(cfg: &RunConfig) -> Result<u8, String> {
    cfg.validate()?;
    ensure_out_dir(&cfg.out_dir)?;
    let flux = cfg.flux.build()?;
    let rows = verify::audit_rows(&cfg.flux.name, &flux, cfg.seed, cfg.samples);
    let report = write_report(&rows, &cfg.out_dir)?;
    print_rows(&rows);
    let ok = verify::all_pass(&rows);
    println!(
        "flux {} is {}, report at {}",
        cfg.flux.name,
        if ok { "clean" } else { "NOT clean" },
        report.display()
    );
    Ok(if ok { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

/// Outcome of one refinement level that completed.
struct LevelRun {
    level: usize,
    grid: SpaceTimeGrid,
    result: SolveResult,
    sup_error: Option<f64>,
    l2_error: Option<f64>,
}

/// Solves the configured problem, optionally across a refinement sweep, and
/// writes the solution field, the residual history, the error-vs-h table
/// when an exact profile is configured, and the run manifest.
pub fn cmd_solve(cfg: &RunConfig) -> Result<u8, String> {
    cfg.validate()?;
    if matches!(cfg.source, SourceSpec::Manufactured) && cfg.exact.is_none() {
        return Err("source = manufactured needs `exact = <profile>` under [problem]".into());
    }
    if cfg.refine > 1 {
        if cfg.exact.is_none() {
            return Err(
                "a refinement sweep needs `exact = <profile>` under [problem] to measure \
                 errors against"
                    .into(),
            );
        }
        if cfg.uses_csv_inputs() {
            return Err(
                "refinement sweeps need analytic source and boundary data; csv inputs cannot \
                 be resampled onto finer grids"
                    .into(),
            );
        }
    }
    if matches!(cfg.boundary, BoundarySpec::Exact) && cfg.exact.is_none() {
        return Err("boundary = exact needs `exact = <profile>` under [problem]".into());
    }
    ensure_out_dir(&cfg.out_dir)?;

    let flux = cfg.flux.build()?;
    let exact_fn = cfg
        .exact
        .as_deref()
        .map(|name| profile(name).expect("exact names are validated at parse time"));

    let mut manifest = Manifest::new();
    push_common(&mut manifest, cfg, Command::Solve);

    let mut completed: Vec<LevelRun> = Vec::new();
    let mut failure: Option<(usize, HalfwaveError)> = None;
    for level in 0..cfg.refine {
        let scale = 1usize << level;
        let grid = SpaceTimeGrid::new(
            cfg.x_min,
            cfg.x_max,
            (cfg.m - 1) * scale + 1,
            cfg.t_max,
            (cfg.n - 1) * scale + 1,
        )
        .map_err(|e| e.to_string())?;
        let problem = build_problem(cfg, &flux, grid, exact_fn)?;
        match solve_nonhomogeneous(&problem) {
            Ok(result) => {
                let (sup_error, l2_error) = match exact_fn {
                    Some(f) => {
                        let exact = SampledField2D::from_fn(grid, f);
                        let (sup, l2) = field_errors(&result.u, &exact);
                        (Some(sup), Some(l2))
                    }
                    None => (None, None),
                };
                println!(
                    "level {level}: grid {}x{}, residual {:.3e}{}",
                    grid.m(),
                    grid.n(),
                    result.residual_dual_norm,
                    match sup_error {
                        Some(e) => format!(", sup error {e:.3e}"),
                        None => String::new(),
                    }
                );
                completed.push(LevelRun {
                    level,
                    grid,
                    result,
                    sup_error,
                    l2_error,
                });
            }
            Err(e) => {
                eprintln!("level {level} failed: {e}");
                failure = Some((level, e));
                break;
            }
        }
    }

    let mut outputs = Vec::new();
    if let Some(run) = completed.last() {
        let solution = cfg.out_dir.join("solution.csv");
        write_atomic(&solution, &field_to_csv(&run.result.u))
            .map_err(|e| write_err(e, &solution))?;
        outputs.push("solution.csv");
        let residuals = cfg.out_dir.join("residuals.csv");
        write_atomic(&residuals, &residuals_to_csv(&run.result.energy_trace))
            .map_err(|e| write_err(e, &residuals))?;
        outputs.push("residuals.csv");
    }
    if exact_fn.is_some() && !completed.is_empty() {
        let errors = cfg.out_dir.join("errors.csv");
        write_atomic(&errors, &errors_to_csv(&completed)).map_err(|e| write_err(e, &errors))?;
        outputs.push("errors.csv");
    }
    outputs.push("manifest.txt");
    manifest.push("outputs", outputs.join(" "));

    for run in &completed {
        manifest.push(
            &format!("level_{}_grid", run.level),
            format!("m={} n={}", run.grid.m(), run.grid.n()),
        );
        manifest.push(
            &format!("level_{}_iterations", run.level),
            run.result.iterations,
        );
        manifest.push(
            &format!("level_{}_residual_dual_norm", run.level),
            format!("{:.16e}", run.result.residual_dual_norm),
        );
        if let (Some(sup), Some(l2)) = (run.sup_error, run.l2_error) {
            manifest.push(
                &format!("level_{}_sup_error", run.level),
                format!("{sup:.16e}"),
            );
            manifest.push(
                &format!("level_{}_l2_error", run.level),
                format!("{l2:.16e}"),
            );
        }
    }
    if let Some(run) = completed.last() {
        manifest.push("iterations", run.result.iterations);
        manifest.push(
            "residual_dual_norm",
            format!("{:.16e}", run.result.residual_dual_norm),
        );
        manifest.push(
            "regularized_residual",
            format!("{:.16e}", run.result.regularized_residual),
        );
    }

    // The terminal manifest row: sweep orders on success, the failure flag on
    // a partial run.
    let exit = match &failure {
        Some((level, e)) => {
            manifest.push("completed_levels", completed.len());
            let kept = match completed.last() {
                Some(run) => format!("outputs carry level {}", run.level),
                None => "no level completed".to_string(),
            };
            manifest.push("status", format!("partial: {kept}; level {level} failed: {e}"));
            1
        }
        None => {
            manifest.push("status", "converged");
            if completed.len() >= 2 {
                let sups: Vec<f64> = completed.iter().filter_map(|r| r.sup_error).collect();
                let orders: Vec<String> = sups
                    .windows(2)
                    .map(|w| {
                        if w[0] == 0.0 && w[1] == 0.0 {
                            // Both levels reproduce the exact solution to the
                            // bit, as manufactured runs do.
                            "exact".into()
                        } else {
                            format!("{:.3}", (w[0] / w[1]).log2())
                        }
                    })
                    .collect();
                manifest.push("measured_orders", orders.join(" "));
            }
            0
        }
    };

    let path = cfg.out_dir.join("manifest.txt");
    write_atomic(&path, &manifest.render()).map_err(|e| write_err(e, &path))?;
    println!("wrote {} to {}", outputs.join(", "), cfg.out_dir.display());
    Ok(exit)
}

fn build_problem(
    cfg: &RunConfig,
    flux: &StructuralFlux,
    grid: SpaceTimeGrid,
    exact_fn: Option<fn(f64, f64) -> f64>,
) -> Result<WeakProblem, String> {
    let boundary = match &cfg.boundary {
        BoundarySpec::Exact => SampledField2D::from_fn(
            grid,
            exact_fn.expect("boundary = exact is rejected earlier without an exact profile"),
        ),
        BoundarySpec::Field(spec) => spec.sample(grid)?,
    };
    let source = match &cfg.source {
        SourceSpec::Manufactured => {
            let star = SampledField2D::from_fn(
                grid,
                exact_fn.expect("manufactured sources are rejected earlier without a profile"),
            );
            SourceData::pointwise(verify::discrete_manufacture(flux, &star))
        }
        SourceSpec::Field(spec) => {
            let f = spec.sample(grid)?;
            if f.max_abs() == 0.0 {
                SourceData::zero(grid)
            } else {
                SourceData::pointwise(f)
            }
        }
    };
    let mut problem =
        WeakProblem::new(grid, flux.clone(), source, boundary).map_err(|e| e.to_string())?;
    problem.tol = cfg.tol;
    problem.max_iter = cfg.max_iter;
    Ok(problem)
}

/// Sup and grid-weighted l2 distance between a solution and the sampled
/// exact profile.
fn field_errors(u: &SampledField2D, exact: &SampledField2D) -> (f64, f64) {
    let grid = u.grid();
    let cell = grid.dx() * grid.dt();
    let mut sup = 0.0f64;
    let mut l2_sq = 0.0f64;
    for (a, b) in u.values().iter().zip(exact.values()) {
        let d = a - b;
        sup = sup.max(d.abs());
        l2_sq += d * d * cell;
    }
    (sup, l2_sq.sqrt())
}

fn errors_to_csv(completed: &[LevelRun]) -> String {
    let mut out = String::from("level,m,n,dx,dt,sup_error,l2_error\n");
    for run in completed {
        out.push_str(&format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            run.level,
            run.grid.m(),
            run.grid.n(),
            run.grid.dx(),
            run.grid.dt(),
            run.sup_error.unwrap_or(f64::NAN),
            run.l2_error.unwrap_or(f64::NAN),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

/// Decomposes the configured field into its continuous and vanishing parts,
/// writes the initial trace and both parts, and records the decomposition
/// norms in the manifest.
pub fn cmd_trace(cfg: &RunConfig) -> Result<u8, String> {
    cfg.validate()?;
    ensure_out_dir(&cfg.out_dir)?;
    let grid = cfg.grid()?;
    let flux = cfg.flux.build()?;
    let u = cfg.field.sample(grid)?;

    let mut manifest = Manifest::new();
    push_common(&mut manifest, cfg, Command::Trace);

    let parts = match x_norm_upper(&u, &flux) {
        Ok(parts) => parts,
        Err(e @ HalfwaveError::NonConvergence { .. }) => {
            eprintln!("decomposition failed: {e}");
            manifest.push("outputs", "manifest.txt");
            manifest.push("status", format!("failed: {e}"));
            let path = cfg.out_dir.join("manifest.txt");
            write_atomic(&path, &manifest.render()).map_err(|err| write_err(err, &path))?;
            return Ok(1);
        }
        Err(e) => return Err(e.to_string()),
    };

    let datum = trace_initial(&parts);
    let mut trace_csv = String::from("x,trace\n");
    for (i, v) in datum.values().values().iter().enumerate() {
        trace_csv.push_str(&format!("{:.16e},{v:.16e}\n", grid.x(i)));
    }
    let trace_path = cfg.out_dir.join("trace.csv");
    write_atomic(&trace_path, &trace_csv).map_err(|e| write_err(e, &trace_path))?;

    let mut parts_csv = String::from("x,t,u1,u2\n");
    for i in 0..grid.m() {
        for j in 0..grid.n() {
            parts_csv.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                grid.x(i),
                grid.t(j),
                parts.u1.at(i, j),
                parts.u2.at(i, j)
            ));
        }
    }
    let parts_path = cfg.out_dir.join("parts.csv");
    write_atomic(&parts_path, &parts_csv).map_err(|e| write_err(e, &parts_path))?;

    manifest.push("outputs", "trace.csv parts.csv manifest.txt");
    manifest.push("norm_upper", format!("{:.16e}", parts.norm_upper));
    if let Ok(hardy) = hardy_vanishing_check(&parts.u1) {
        manifest.push("u1_hardy_value", format!("{:.16e}", hardy.value));
        manifest.push(
            "u1_hardy_growth_per_halving",
            format!("{:.16e}", hardy.growth_per_halving),
        );
        manifest.push("u1_hardy_vanishes", hardy.vanishes_at_zero);
    }
    manifest.push("status", "ok");
    let path = cfg.out_dir.join("manifest.txt");
    write_atomic(&path, &manifest.render()).map_err(|e| write_err(e, &path))?;

    println!(
        "wrote trace.csv, parts.csv, manifest.txt to {} (norm_upper = {:.6e})",
        cfg.out_dir.display(),
        parts.norm_upper
    );
    Ok(0)
}
