//! Subcommand implementations.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use refgov::control::RobotState;
use refgov::prediction::PredictionMethod;
use refgov::simulator::{Scenario, Trace, TraceStatus};
use refgov::Vec2;

use crate::output::{emit_outputs, Format};
use crate::scenario_file::{check_start, Overrides, ScenarioFile};

/// Process exit codes.
pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_HORIZON: i32 = 2;

pub fn exit_code(status: &TraceStatus) -> i32 {
    match status {
        TraceStatus::Converged => EXIT_CONVERGED,
        TraceStatus::Horizon => EXIT_HORIZON,
        TraceStatus::Error(_) => EXIT_ERROR,
    }
}

/// Worst code of a batch: any error beats any horizon.
pub fn combine_exit_codes(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().fold(EXIT_CONVERGED, |acc, c| match (acc, c) {
        (EXIT_ERROR, _) | (_, EXIT_ERROR) => EXIT_ERROR,
        (EXIT_HORIZON, _) | (_, EXIT_HORIZON) => EXIT_HORIZON,
        _ => EXIT_CONVERGED,
    })
}

/// Options shared by the simulating subcommands.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub formats: BTreeSet<Format>,
    pub overrides: Overrides,
    pub seed: Option<u64>,
}

pub fn read_scenario_file(path: &Path) -> anyhow::Result<ScenarioFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    ScenarioFile::from_json(&text).with_context(|| format!("invalid scenario {}", path.display()))
}

/// Randomizes the initial derivatives of order >= 1, shrinking the draw
/// until the start is safe.
pub fn randomize_initial_state(s: Scenario<f64>, seed: u64) -> anyhow::Result<Scenario<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = s.initial_state().clone();
    let n = base.order();
    let draw: Vec<Vec2<f64>> = (1..n).map(|_| Vec2::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
    let g = s.initial_governor();
    let mut scale = 1.0;
    for _ in 0..40 {
        let mut d = vec![base.position()];
        d.extend(draw.iter().map(|&v| v * scale));
        let state = RobotState::new(d)?;
        let candidate = s.clone().with_initial_state(state, g)?;
        if candidate.validate().is_ok() {
            return Ok(candidate);
        }
        scale *= 0.5;
    }
    Ok(s)
}

/// Builds a runnable scenario from a file plus command-line options.
pub fn prepare(file: &ScenarioFile, opts: &RunOptions) -> anyhow::Result<Scenario<f64>> {
    let mut s = opts.overrides.apply(file.build_unchecked()?)?;
    if let Some(seed) = opts.seed {
        s = randomize_initial_state(s, seed)?;
    }
    let delta = check_start(&s)?;
    log::debug!("initial safety level {delta:e}");
    for w in s.warnings() {
        log::warn!("{w}");
    }
    Ok(s)
}

fn summary_line(name: &str, trace: &Trace<f64>) -> String {
    let s = trace.summary();
    format!(
        "{name}: status={} travel_time={:.4} min_clearance={:.4} path_length={:.4}",
        s.status, s.travel_time, s.min_clearance, s.path_length
    )
}

fn stem_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}

pub fn run_one(path: &Path, opts: &RunOptions) -> anyhow::Result<Trace<f64>> {
    let file = read_scenario_file(path)?;
    let s = prepare(&file, opts).with_context(|| format!("scenario {}", path.display()))?;
    let trace = s.run()?;
    if let Some(dir) = &opts.out {
        for f in emit_outputs(dir, &stem_of(path), s.free_space(), s.path(), &trace, &opts.formats)? {
            log::info!("wrote {}", f.display());
        }
    }
    Ok(trace)
}

pub fn cmd_run(path: &Path, opts: &RunOptions) -> i32 {
    match run_one(path, opts) {
        Ok(trace) => {
            println!("{}", summary_line(&stem_of(path), &trace));
            exit_code(&trace.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

pub fn cmd_validate(path: &Path) -> i32 {
    let result = read_scenario_file(path).and_then(|f| {
        let s = f.build_unchecked()?;
        Ok((check_start(&s)?, s.warnings()))
    });
    match result {
        Ok((delta, warnings)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            println!("{}: valid (initial safety level {delta:.6})", path.display());
            EXIT_CONVERGED
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

/// Scenario files (`*.json`) directly under `dir`, sorted by name.
pub fn scenario_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn cmd_batch(dir: &Path, parallel: bool, opts: &RunOptions) -> i32 {
    let files = match scenario_files(dir) {
        Ok(f) if f.is_empty() => {
            eprintln!("error: no scenario files in {}", dir.display());
            return EXIT_ERROR;
        }
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_ERROR;
        }
    };
    let job = |p: &PathBuf| match run_one(p, opts) {
        Ok(trace) => (summary_line(&stem_of(p), &trace), exit_code(&trace.status)),
        Err(e) => (format!("{}: error: {e:#}", stem_of(p)), EXIT_ERROR),
    };
    let results: Vec<(String, i32)> = if parallel { files.par_iter().map(job).collect() } else { files.iter().map(job).collect() };
    for (line, _) in &results {
        println!("{line}");
    }
    combine_exit_codes(results.iter().map(|r| r.1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub method: String,
    pub order: usize,
    pub status: String,
    pub travel_time: f64,
    pub min_clearance: f64,
    pub path_length: f64,
}

/// Copy of `base` with a different order and method; the initial
/// derivatives are truncated or zero-padded.
pub fn variant(base: &ScenarioFile, order: usize, method: PredictionMethod) -> anyhow::Result<ScenarioFile> {
    let interval = match base.root_interval {
        Some(i) => i,
        None => bail!("sweep needs a scenario with `root_interval` so roots can be regenerated per order"),
    };
    let mut f = base.clone();
    f.order = order;
    f.roots = None;
    f.root_interval = Some(interval);
    f.method = method.name().to_string();
    if let Some(state) = &mut f.initial_state {
        state.resize(order, [0.0, 0.0]);
    }
    Ok(f)
}

pub fn sweep(base: &ScenarioFile, orders: &[usize], methods: &[PredictionMethod], parallel: bool, opts: &RunOptions) -> anyhow::Result<Vec<SweepRow>> {
    let mut jobs = Vec::new();
    for &m in methods {
        for &n in orders {
            jobs.push((m, n, variant(base, n, m)?));
        }
    }
    let job = |(m, n, f): &(PredictionMethod, usize, ScenarioFile)| -> anyhow::Result<SweepRow> {
        let trace = prepare(f, opts)?.run()?;
        let s = trace.summary();
        Ok(SweepRow {
            method: m.name().to_string(),
            order: *n,
            status: s.status.name().to_string(),
            travel_time: s.travel_time,
            min_clearance: s.min_clearance,
            path_length: s.path_length,
        })
    };
    if parallel {
        jobs.par_iter().map(job).collect()
    } else {
        jobs.iter().map(job).collect()
    }
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = format!("{:<12} {:>5} {:>10} {:>12} {:>14} {:>12}\n", "method", "order", "status", "travel_time", "min_clearance", "path_length");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<12} {:>5} {:>10} {:>12.4} {:>14.4} {:>12.4}",
            r.method, r.order, r.status, r.travel_time, r.min_clearance, r.path_length
        );
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("method,order,status,travel_time,min_clearance,path_length\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.method, r.order, r.status, r.travel_time, r.min_clearance, r.path_length);
    }
    out
}

pub fn cmd_sweep(path: &Path, orders: &[usize], methods: &[PredictionMethod], parallel: bool, opts: &RunOptions) -> i32 {
    let result = read_scenario_file(path).and_then(|base| sweep(&base, orders, methods, parallel, opts));
    let rows = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_ERROR;
        }
    };
    print!("{}", sweep_table(&rows));
    if let Some(dir) = &opts.out {
        let stem = format!("{}_sweep", stem_of(path));
        let write = || -> anyhow::Result<()> {
            std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
            if opts.formats.contains(&Format::Csv) {
                std::fs::write(dir.join(format!("{stem}.csv")), sweep_csv(&rows))?;
            }
            if opts.formats.contains(&Format::Json) {
                std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&rows)? + "\n")?;
            }
            Ok(())
        };
        if let Err(e) = write() {
            eprintln!("error: {e:#}");
            return EXIT_ERROR;
        }
    }
    combine_exit_codes(rows.iter().map(|r| match r.status.as_str() {
        "converged" => EXIT_CONVERGED,
        "horizon" => EXIT_HORIZON,
        _ => EXIT_ERROR,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_priority() {
        assert_eq!(combine_exit_codes([]), 0);
        assert_eq!(combine_exit_codes([0, 2, 0]), 2);
        assert_eq!(combine_exit_codes([2, 1, 0]), 1);
    }
}
