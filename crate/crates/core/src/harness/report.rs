use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::patch_study::PatchStudyReport;
use super::sweep::{NormKind, SweepReport};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::param("format", format!("unknown format `{other}`"))),
        }
    }
}

/// Parses a comma-separated list such as `csv,json`.
pub fn parse_formats(list: &str) -> Result<Vec<Format>> {
    let mut out: Vec<Format> = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let f: Format = item.parse()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

pub const CSV_COLUMNS: [&str; 12] = [
    "case_index",
    "lambda",
    "t",
    "l1",
    "l2",
    "l4",
    "linf",
    "u_l2",
    "u_linf",
    "xnorm",
    "hipass_l2",
    "annulus_l2",
];

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// One row per case and sample time, columns as in [`CSV_COLUMNS`].
pub fn write_csv(report: &SweepReport, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for case in &report.cases {
        for s in &case.samples {
            w.write_record([
                case.case_index.to_string(),
                case.lambda.to_string(),
                s.t.to_string(),
                s.l1.to_string(),
                s.l2.to_string(),
                s.l4.to_string(),
                s.linf.to_string(),
                s.u_l2.to_string(),
                s.u_linf.to_string(),
                s.xnorm.to_string(),
                opt(s.hipass_l2),
                opt(s.annulus_l2),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Log-log plot of `sup_t` error against `λ` with the fitted line.
pub fn svg_plot(report: &SweepReport, norm: NormKind) -> Option<String> {
    let fit = report.fit(norm)?;
    let pts: Vec<(f64, f64)> = report
        .cases
        .iter()
        .map(|c| Some((c.lambda.log10(), c.sup(norm)?.log10())))
        .collect::<Option<_>>()?;
    let (w, h, pad) = (480.0, 360.0, 50.0);
    let line = |x: f64| (fit.intercept + fit.exponent * x * std::f64::consts::LN_10) / std::f64::consts::LN_10;
    let (x0, x1) = (fit.lambda_min.log10(), fit.lambda_max.log10());
    let ys: Vec<f64> = pts.iter().map(|p| p.1).chain([line(x0), line(x1)]).collect();
    let (y0, y1) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let sx = |x: f64| pad + (x - x0) / span(x0, x1) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / span(y0, y1) * (h - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{pad} {pad} V{} H{}" stroke="black" fill="none"/>"#,
        h - pad,
        w - pad
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">log10 lambda</text>"#,
        w / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-size="13" transform="rotate(-90 14 {})" text-anchor="middle">log10 sup_t {}</text>"#,
        h / 2.0,
        h / 2.0,
        norm
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-size="13" text-anchor="middle">{}: slope {:.4}, residual {:.2e}</text>"#,
        w / 2.0,
        norm,
        fit.exponent,
        fit.residual
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="2"/>"#,
        sx(x0),
        sy(line(x0)),
        sx(x1),
        sy(line(x1))
    );
    for (x, y) in pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="firebrick"/>"#,
            sx(x),
            sy(y)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Writes `sweep.csv`, `sweep.json` and `fit_<norm>.svg` as requested; returns the paths.
pub fn emit_report(report: &SweepReport, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let mut written = Vec::new();
    for format in formats {
        match format {
            Format::Csv => {
                let path = dir.join("sweep.csv");
                write_csv(report, fs::File::create(&path)?)?;
                written.push(path);
            }
            Format::Json => {
                let path = dir.join("sweep.json");
                fs::write(&path, serde_json::to_string_pretty(report)?)?;
                written.push(path);
            }
            Format::Svg => {
                for fit in &report.fits {
                    let norm: NormKind = fit.norm.parse()?;
                    if let Some(svg) = svg_plot(report, norm) {
                        let path = dir.join(format!("fit_{norm}.svg"));
                        fs::write(&path, svg)?;
                        written.push(path);
                    }
                }
            }
        }
    }
    Ok(written)
}

/// Writes `patch_study.csv` and/or `patch_study.json`; SVG is not produced for this report.
pub fn emit_patch_report(
    report: &PatchStudyReport,
    dir: &Path,
    formats: &[Format],
) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let mut written = Vec::new();
    for format in formats {
        match format {
            Format::Csv => {
                let path = dir.join("patch_study.csv");
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["t", "sup_difference", "symmetric_difference_area", "intersection_area"])?;
                for i in 0..report.times.len() {
                    w.write_record([
                        report.times[i].to_string(),
                        report.sup_difference[i].to_string(),
                        report.symmetric_difference_area[i].to_string(),
                        report.intersection_area[i].to_string(),
                    ])?;
                }
                w.flush()?;
                written.push(path);
            }
            Format::Json => {
                let path = dir.join("patch_study.json");
                fs::write(&path, serde_json::to_string_pretty(report)?)?;
                written.push(path);
            }
            Format::Svg => {}
        }
    }
    Ok(written)
}
