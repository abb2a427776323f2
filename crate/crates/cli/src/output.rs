//! Trace artifacts: CSV samples, JSON summary and SVG figure.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::Serialize;

use refgov::environment::{FreeSpace, Region};
use refgov::geometry::sample_boundary;
use refgov::planner::ReferencePath;
use refgov::simulator::Trace;
use refgov::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format {other:?}; expected csv, json or svg")),
        }
    }
}

pub fn parse_formats(s: &str) -> Result<BTreeSet<Format>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(Format::from_str).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryJson {
    pub travel_time: f64,
    pub min_clearance: f64,
    pub path_length: f64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SummaryJson {
    pub fn from_trace(trace: &Trace<f64>) -> Self {
        let s = trace.summary();
        let message = match &s.status {
            refgov::simulator::TraceStatus::Error(m) => Some(m.clone()),
            _ => None,
        };
        Self {
            travel_time: s.travel_time,
            min_clearance: s.min_clearance,
            path_length: s.path_length,
            status: s.status.name().to_string(),
            message,
        }
    }
}

pub fn summary_json(trace: &Trace<f64>) -> String {
    let mut s = serde_json::to_string_pretty(&SummaryJson::from_trace(trace)).expect("summary serializes");
    s.push('\n');
    s
}

/// One row per sample, full round-trip precision.
pub fn trace_csv(trace: &Trace<f64>) -> String {
    let order = trace.samples.first().map_or(1, |s| s.state.order());
    let mut out = String::from("t");
    for i in 0..order {
        let _ = write!(out, ",p{i}x,p{i}y");
    }
    out.push_str(",gx,gy,delta,ref_speed\n");
    for s in &trace.samples {
        let _ = write!(out, "{}", s.t);
        for d in s.state.derivatives() {
            let _ = write!(out, ",{},{}", d.x, d.y);
        }
        let _ = writeln!(out, ",{},{},{},{}", s.governor.x, s.governor.y, s.delta, s.ref_speed);
    }
    out
}

/// Shortest decimal form of `x` rounded to six significant digits.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    let s = format!("{rounded}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn points_attr(pts: &[Vec2<f64>]) -> String {
    let mut s = String::with_capacity(pts.len() * 16);
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", sig6(p.x), sig6(p.y));
    }
    s
}

fn region_element(region: &Region<f64>, style: &str) -> String {
    match region {
        Region::Disk { center, radius } => {
            format!(r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#, sig6(center.x), sig6(center.y), sig6(*radius))
        }
        Region::Polygon(v) => format!(r#"<polygon points="{}" {style}/>"#, points_attr(v)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Simulated time between prediction-set snapshots; `None` disables them.
    pub snapshot_interval: Option<f64>,
    /// Boundary samples per snapshot outline.
    pub snapshot_samples: usize,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { snapshot_interval: Some(2.0), snapshot_samples: 64 }
    }
}

/// Figure in world coordinates (y up).
pub fn trace_svg(fs: &FreeSpace<f64>, path: &ReferencePath<f64>, trace: &Trace<f64>, opts: &SvgOptions) -> String {
    let env = fs.environment();
    let ball = env.workspace.bounding_ball();
    let margin = 0.05 * ball.radius.max(1e-3);
    let (x0, y0) = (ball.center.x - ball.radius - margin, ball.center.y - ball.radius - margin);
    let size = 2.0 * (ball.radius + margin);
    let stroke = sig6(size / 400.0);
    let mark = sig6(size / 100.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="600">"#,
        sig6(x0),
        sig6(-(y0 + size)),
        sig6(size),
        sig6(size)
    );
    out.push_str("<g transform=\"scale(1,-1)\">\n");

    // Configuration-space obstacles: everything outside F is gray.
    out.push_str("<g id=\"configuration-space\">\n");
    let _ = writeln!(out, "{}", region_element(&env.workspace, r##"fill="#bbbbbb" stroke="none""##));
    let _ = writeln!(out, "{}", region_element(fs.eroded_workspace(), r##"fill="#ffffff" stroke="none""##));
    for obs in fs.inflated_obstacles() {
        let mut outline = Vec::new();
        for prim in obs.boundary() {
            let mut pts = prim.polyline(fs.arc_tolerance());
            if !outline.is_empty() {
                pts.remove(0);
            }
            outline.extend(pts);
        }
        let _ = writeln!(out, r##"<polygon points="{}" fill="#bbbbbb" stroke="none"/>"##, points_attr(&outline));
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"workspace\">\n");
    let _ = writeln!(out, "{}", region_element(&env.workspace, &format!(r##"fill="none" stroke="#000000" stroke-width="{stroke}""##)));
    for obs in &env.obstacles {
        let _ = writeln!(out, "{}", region_element(obs, r##"fill="#000000" stroke="none""##));
    }
    out.push_str("</g>\n");

    if let Some(dt) = opts.snapshot_interval.filter(|dt| *dt > 0.0) {
        out.push_str("<g id=\"predictions\">\n");
        let mut next = 0.0;
        for s in &trace.samples {
            if s.t + 1e-12 < next {
                continue;
            }
            next = s.t + dt;
            let outline = sample_boundary(&s.range.to_convex_set(), opts.snapshot_samples.max(3));
            let _ = writeln!(
                out,
                r##"<polygon points="{}" fill="#1f77b4" fill-opacity="0.1" stroke="#1f77b4" stroke-opacity="0.5" stroke-width="{stroke}"/>"##,
                points_attr(&outline)
            );
        }
        out.push_str("</g>\n");
    }

    let _ = writeln!(
        out,
        r##"<polyline id="path" points="{}" fill="none" stroke="#d62728" stroke-width="{stroke}" stroke-dasharray="{} {}"/>"##,
        points_attr(path.waypoints()),
        sig6(size / 100.0),
        sig6(size / 200.0)
    );
    let robot: Vec<_> = trace.samples.iter().map(|s| s.state.position()).collect();
    let governor: Vec<_> = trace.samples.iter().map(|s| s.governor).collect();
    let _ = writeln!(
        out,
        r##"<polyline id="robot" points="{}" fill="none" stroke="#1f77b4" stroke-width="{stroke}"/>"##,
        points_attr(&robot)
    );
    let _ = writeln!(
        out,
        r##"<polyline id="governor" points="{}" fill="none" stroke="#2ca02c" stroke-width="{stroke}"/>"##,
        points_attr(&governor)
    );
    if let Some(start) = robot.first() {
        let _ = writeln!(out, r##"<circle id="start" cx="{}" cy="{}" r="{mark}" fill="#1f77b4"/>"##, sig6(start.x), sig6(start.y));
    }
    let goal = path.goal();
    let _ = writeln!(out, r##"<circle id="goal" cx="{}" cy="{}" r="{mark}" fill="#d62728"/>"##, sig6(goal.x), sig6(goal.y));
    out.push_str("</g>\n</svg>\n");
    out
}

/// Writes the requested artifacts as `<dir>/<stem>.<ext>`; returns the paths.
pub fn emit_outputs(
    dir: &Path,
    stem: &str,
    fs: &FreeSpace<f64>,
    path: &ReferencePath<f64>,
    trace: &Trace<f64>,
    formats: &BTreeSet<Format>,
) -> anyhow::Result<Vec<PathBuf>> {
    if dir.exists() && !dir.is_dir() {
        bail!("output destination {} is not a directory", dir.display());
    }
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let mut written = Vec::new();
    for &f in formats {
        let contents = match f {
            Format::Csv => trace_csv(trace),
            Format::Json => summary_json(trace),
            Format::Svg => trace_svg(fs, path, trace, &SvgOptions::default()),
        };
        let file = dir.join(format!("{stem}.{}", f.extension()));
        std::fs::write(&file, contents).with_context(|| format!("cannot write {}", file.display()))?;
        written.push(file);
    }
    Ok(written)
}
