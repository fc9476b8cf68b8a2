//! CSV and SVG output of convergence studies.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{ConvergenceReport, StabilityRow};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "scheme,preset,omega,delta,n_steps,l2_error,wall_time_s,slope";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "svg" => Ok(ReportFormat::Svg),
            _ => Err(Error::Config(format!("unknown format `{s}` (expected csv or svg)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// Write measured wall times; when off the column holds `0` so that
    /// repeated runs give identical files.
    pub timing: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { timing: true }
    }
}

/// One CSV record.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scheme: String,
    pub preset: String,
    pub omega: Option<f64>,
    pub delta: f64,
    pub n_steps: usize,
    pub l2_error: f64,
    pub wall_time_s: f64,
    pub slope: Option<f64>,
}

impl CsvRow {
    pub fn from_report(report: &ConvergenceReport, opts: ReportOptions) -> Vec<CsvRow> {
        report
            .rows
            .iter()
            .map(|r| CsvRow {
                scheme: report.method.scheme().to_string(),
                preset: report.method.preset_label().to_string(),
                omega: report.method.omega(),
                delta: r.delta,
                n_steps: r.n_steps,
                l2_error: r.l2_error,
                wall_time_s: if opts.timing { r.wall_time_s } else { 0.0 },
                slope: report.slope,
            })
            .collect()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn emit_csv(reports: &[ConvergenceReport], opts: ReportOptions) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for row in reports.iter().flat_map(|r| CsvRow::from_report(r, opts)) {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            row.scheme,
            row.preset,
            opt(row.omega),
            row.delta,
            row.n_steps,
            row.l2_error,
            row.wall_time_s,
            opt(row.slope)
        );
    }
    s
}

fn field<T: FromStr>(v: &str, name: &str, line: usize) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad {name} `{v}`")))
}

fn opt_field(v: &str, name: &str, line: usize) -> Result<Option<f64>> {
    if v.is_empty() {
        Ok(None)
    } else {
        field(v, name, line).map(Some)
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        _ => return Err(Error::Parse("missing or unexpected CSV header".into())),
    }
    let mut out = Vec::new();
    for (no, line) in lines.enumerate() {
        let line_no = no + 2;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(Error::Parse(format!("line {line_no}: expected 8 columns, got {}", cols.len())));
        }
        out.push(CsvRow {
            scheme: cols[0].to_string(),
            preset: cols[1].to_string(),
            omega: opt_field(cols[2], "omega", line_no)?,
            delta: field(cols[3], "delta", line_no)?,
            n_steps: field(cols[4], "n_steps", line_no)?,
            l2_error: field(cols[5], "l2_error", line_no)?,
            wall_time_s: field(cols[6], "wall_time_s", line_no)?,
            slope: opt_field(cols[7], "slope", line_no)?,
        });
    }
    Ok(out)
}

pub fn stability_csv(rows: &[StabilityRow]) -> String {
    let mut s = String::from("lambda_over_c,omega,admissible,blew_up,steps_taken\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.lambda_over_c, r.omega, r.admissible, r.blew_up, r.steps_taken);
    }
    s
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Log-log plot of error against Δ, one polyline per report.
pub fn render_svg(reports: &[ConvergenceReport]) -> String {
    let (w, h) = (720.0, 480.0);
    let (left, right, top, bottom) = (80.0, 250.0, 30.0, 60.0);
    let series: Vec<Vec<(f64, f64)>> = reports
        .iter()
        .map(|r| {
            r.rows
                .iter()
                .filter(|row| !row.blew_up && row.l2_error > 0.0 && row.l2_error.is_finite())
                .map(|row| (row.delta.log2(), row.l2_error.log10()))
                .collect()
        })
        .collect();
    let all: Vec<&(f64, f64)> = series.iter().flatten().collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let lo = all.iter().map(|p| f(p)).fold(f64::INFINITY, f64::min);
        let hi = all.iter().map(|p| f(p)).fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() {
            (lo.floor(), hi.ceil().max(lo.floor() + 1.0))
        } else {
            (0.0, 1.0)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let mut x = x0;
    while x <= x1 + 1e-9 {
        let px = sx(x);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{top}" stroke="#ddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">2^{x}</text>"##,
            top + ph,
            top + ph + 18.0
        );
        x += 1.0;
    }
    let mut y = y0;
    while y <= y1 + 1e-9 {
        let py = sy(y);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{y}</text>"##,
            left + pw,
            left - 6.0,
            py + 4.0
        );
        y += 1.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">grid step</text>"#,
        left + pw / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">L2 error on disc</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    for (n, (report, pts)) in reports.iter().zip(&series).enumerate() {
        let colour = PALETTE[n % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = top + 14.0 + 18.0 * n as f64;
        let lx = left + pw + 15.0;
        let slope = report.slope.map(|v| format!("{v:.2}")).unwrap_or_else(|| "n/a".into());
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{} (slope {slope})</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            report.label()
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_report(path: &Path, reports: &[ConvergenceReport], format: ReportFormat, opts: ReportOptions) -> Result<()> {
    let body = match format {
        ReportFormat::Csv => emit_csv(reports, opts),
        ReportFormat::Svg => render_svg(reports),
    };
    std::fs::write(path, body)?;
    Ok(())
}
