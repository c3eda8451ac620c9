use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::record::{ResultRecord, Series, Table};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Fixed-width scientific form with 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `scenario,pass,checks,outputs,inputs`, one row per record; list cells are
/// `;`-separated `key=value` pairs in a fixed order.
pub fn results_csv(records: &[ResultRecord]) -> String {
    let mut out = String::from("scenario,pass,checks,outputs,inputs\n");
    for r in records {
        let checks: Vec<String> = r
            .checks
            .iter()
            .map(|c| format!("{}={}{}{}:{}", c.name, format_float(c.value), c.op, format_float(c.threshold), c.pass))
            .collect();
        let outputs: Vec<String> = r.outputs.iter().map(|(k, v)| format!("{k}={}", format_float(*v))).collect();
        let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&r.scenario),
            r.pass,
            csv_field(&checks.join(";")),
            csv_field(&outputs.join(";")),
            csv_field(&inputs.join(";"))
        );
    }
    out
}

pub fn table_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        out.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

/// Log-log plot of a series with its fitted line and a reference line of the
/// theoretical slope through the first point.
pub fn series_svg(series: &Series) -> Result<String> {
    let pts: Vec<(f64, f64)> = series
        .points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log2(), y.log2()))
        .collect();
    if pts.is_empty() {
        return Err(Error::domain(format!("series `{}` has no positive points", series.name)));
    }
    let (w, h, pad) = (640.0, 440.0, 60.0);
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let line_y = |slope: f64, icpt: f64, x: f64| slope * x + icpt;
    let theory = series.theory_slope.map(|s| (s, pts[0].1 - s * pts[0].0));
    for (s, c) in series.fit.iter().map(|f| (f.slope, f.intercept)).chain(theory) {
        for x in [x0, x1] {
            y0 = y0.min(line_y(s, c, x));
            y1 = y1.max(line_y(s, c, x));
        }
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let _ = writeln!(svg, r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#, w / 2.0, series.name);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">log2 {}</text>"#,
        w / 2.0,
        h - 15.0,
        series.x_label
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {})">log2 {}</text>"#,
        h / 2.0,
        h / 2.0,
        series.y_label
    );
    if let Some(f) = series.fit {
        let _ = writeln!(
            svg,
            r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="2"/>"#,
            sx(x0),
            sy(line_y(f.slope, f.intercept, x0)),
            sx(x1),
            sy(line_y(f.slope, f.intercept, x1))
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" fill="steelblue">fit slope {:.4} (r2 {:.4})</text>"#,
            pad + 10.0,
            pad + 18.0,
            f.slope,
            f.r2
        );
    }
    if let Some((s, c)) = theory {
        let _ = writeln!(
            svg,
            r#"<line class="theory" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-dasharray="6 4" stroke-width="1.5"/>"#,
            sx(x0),
            sy(line_y(s, c, x0)),
            sx(x1),
            sy(line_y(s, c, x1))
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" fill="firebrick">theory slope {s:.4}</text>"#,
            pad + 10.0,
            pad + 36.0
        );
    }
    for &(x, y) in &pts {
        let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#, sx(x), sy(y));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes `results.csv`, `results.json`, per-table CSVs and (with
/// [`Format::Svg`]) one plot per series into `dir`. Returns the paths written.
pub fn emit_report(records: &[ResultRecord], dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::domain("no records to report"));
    }
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    if formats.contains(&Format::Csv) {
        put("results.csv".into(), results_csv(records))?;
        for r in records {
            for t in &r.tables {
                put(format!("{}-{}.csv", r.scenario, t.name), table_csv(t))?;
            }
        }
    }
    if formats.contains(&Format::Json) {
        let mut body = serde_json::to_string_pretty(records)?;
        body.push('\n');
        put("results.json".into(), body)?;
    }
    if formats.contains(&Format::Svg) {
        for r in records {
            for s in &r.series {
                put(format!("{}-{}.svg", r.scenario, s.name), series_svg(s)?)?;
            }
        }
    }
    Ok(written)
}

/// Wall-clock seconds per scenario; kept apart from the byte-stable files.
pub fn write_timing(records: &[ResultRecord], dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut body = String::from("scenario,wall_time_s\n");
    for r in records {
        let _ = writeln!(body, "{},{:.3}", r.scenario, r.wall_time);
    }
    let path = dir.join("timing.csv");
    fs::write(&path, body)?;
    Ok(path)
}
