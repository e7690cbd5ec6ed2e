//! Command-line front end for the halfwave library: deterministic
//! verification, solve, trace, and audit runs driven by a flat `key = value`
//! config. Identical configuration and seed produce byte-identical output
//! files.

mod commands;
mod config;
mod output;

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use crate::config::{Command, RunConfig};

const USAGE: &str = "\
usage: halfwave <command> [--config PATH] [--suite NAME] [--out DIR] [--seed N] [--refine K]

commands:
  verify   run a named check suite; writes report.csv, exits 1 on any failing row
  solve    solve the configured problem; writes solution.csv, residuals.csv,
           errors.csv (when an exact profile is set), and manifest.txt
  trace    decompose the configured field; writes trace.csv, parts.csv, manifest.txt
  audit    structurally audit the configured flux; writes report.csv

flags:
  --config PATH   flat key = value config with [run]/[grid]/[flux]/[problem] sections
  --suite NAME    verify suite: fraccalc, seminorms, flux, solver, traces, all (default all)
  --out DIR       output directory (default halfwave-out)
  --seed N        seed for the randomized flux audits (default 0)
  --refine K      grid refinement levels for solve sweeps (default 1)

environment:
  HALFWAVE_THREADS   cap the worker thread count (results do not depend on it)

exit codes: 0 success, 1 failed check or non-convergence, 2 usage or config error
";

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<u8, String> {
    configure_threads()?;
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args.iter().any(|a| a == "--help" || a == "-h") {
        print!("{USAGE}");
        return if args.is_empty() {
            Err("a command is required".into())
        } else {
            Ok(0)
        };
    }

    let mut command = None;
    let mut config_path: Option<PathBuf> = None;
    let mut suite = None;
    let mut out = None;
    let mut seed = None;
    let mut refine = None;

    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => config_path = Some(PathBuf::from(flag_value(&mut it, "--config")?)),
            "--suite" => suite = Some(flag_value(&mut it, "--suite")?),
            "--out" => out = Some(PathBuf::from(flag_value(&mut it, "--out")?)),
            "--seed" => seed = Some(parse_flag(&flag_value(&mut it, "--seed")?, "--seed")?),
            "--refine" => {
                refine = Some(parse_flag(&flag_value(&mut it, "--refine")?, "--refine")?)
            }
            name if !name.starts_with('-') => {
                if command.is_some() {
                    return Err(format!("unexpected extra argument '{name}'\n{USAGE}"));
                }
                command = Some(
                    Command::from_name(name)
                        .ok_or_else(|| format!("unknown command '{name}'\n{USAGE}"))?,
                );
            }
            other => return Err(format!("unknown flag '{other}'\n{USAGE}")),
        }
    }

    let mut cfg = RunConfig::default();
    if let Some(path) = &config_path {
        cfg.apply_file(path)?;
    }
    if let Some(name) = suite {
        cfg.suite = name;
    }
    if let Some(dir) = out {
        cfg.out_dir = dir;
    }
    if let Some(value) = seed {
        cfg.seed = value;
    }
    if let Some(levels) = refine {
        cfg.refine = levels;
    }
    if command.is_some() {
        cfg.command = command;
    }

    let command = cfg.command.ok_or_else(|| {
        format!("no command given on the command line or as `command =` under [run]\n{USAGE}")
    })?;
    match command {
        Command::Verify => commands::cmd_verify(&cfg),
        Command::Solve => commands::cmd_solve(&cfg),
        Command::Trace => commands::cmd_trace(&cfg),
        Command::Audit => commands::cmd_audit(&cfg),
    }
}

/// Applies the `HALFWAVE_THREADS` cap to the global worker pool. Every
/// reduction in the library is order-fixed, so the thread count changes
/// wall-clock time only, never bytes.
fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HALFWAVE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|e| format!("cannot parse HALFWAVE_THREADS '{raw}': {e}"))?;
    if threads == 0 {
        return Err("HALFWAVE_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("cannot configure the worker pool: {e}"))
}

fn flag_value(it: &mut std::slice::Iter<'_, String>, flag: &str) -> Result<String, String> {
    it.next()
        .cloned()
        .ok_or_else(|| format!("{flag} needs a value\n{USAGE}"))
}

fn parse_flag<T: FromStr>(raw: &str, flag: &str) -> Result<T, String>
where
    T::Err: Display,
{
    raw.parse()
        .map_err(|e| format!("cannot parse {flag} value '{raw}': {e}"))
}
