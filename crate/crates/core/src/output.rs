//! Dataset writers: CSV, JSON and a minimal SVG line chart.
//!
//! CSV layout: a header row with the axis names followed by the series names
//! in scenario order, then one row per scan point. Numbers are printed in
//! scientific notation with 17 significant digits so that they round-trip
//! exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scenarios::ScanResult;

fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn to_csv(result: &ScanResult) -> String {
    let series: Vec<_> = result.axes.iter().chain(result.columns.iter()).collect();
    let mut out = String::new();
    let header: Vec<&str> = series.iter().map(|s| s.name.as_str()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in 0..result.len() {
        let cells: Vec<String> = series.iter().map(|s| fmt_value(s.values[row])).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Metadata plus columnar arrays. Non-finite values become `null`.
pub fn to_json(result: &ScanResult) -> String {
    serde_json::to_string_pretty(result).expect("scan results serialise")
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Line chart of every column against the first axis, one `<polyline>` per
/// series.
pub fn to_svg(result: &ScanResult) -> String {
    let (w, h) = (800.0, 500.0);
    let (left, right, top, bottom) = (80.0, 170.0, 30.0, 60.0);
    let (pw, ph) = (w - left - right, h - top - bottom);
    let x = result.abscissa();
    let axis = &result.axes[0];

    let finite = |v: &f64| v.is_finite();
    let (xmin, xmax) = bounds(x.iter().copied().filter(finite));
    let (ymin, ymax) = bounds(
        result
            .columns
            .iter()
            .flat_map(|c| c.values.iter().copied())
            .filter(finite),
    );
    let sx = |v: f64| left + (v - xmin) / (xmax - xmin) * pw;
    let sy = |v: f64| top + ph - (v - ymin) / (ymax - ymin) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = xmin + f * (xmax - xmin);
        let yv = ymin + f * (ymax - ymin);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(xv),
            top + ph + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{} ({})</text>"#,
        left + pw / 2.0,
        h - 15.0,
        axis.name,
        axis.unit
    );
    let units: Vec<&str> = {
        let mut u: Vec<&str> = result.columns.iter().map(|c| c.unit.as_str()).collect();
        u.dedup();
        u
    };
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">value ({})</text>"#,
        top + ph / 2.0,
        top + ph / 2.0,
        units.join(", ")
    );

    for (k, col) in result.columns.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = x
            .iter()
            .zip(&col.values)
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(&a, &b)| format!("{:.2},{:.2}", sx(a), sy(b)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-series="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            col.name,
            points.join(" ")
        );
        let ly = top + 14.0 + 16.0 * k as f64;
        let lx = left + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 24.0, ly + 4.0, col.name);
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename, so `path` is never left half-written.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{run, Grid, ScanSpec};

    fn small() -> ScanResult {
        let mut spec = ScanSpec::coherence_version();
        spec.abscissa = Grid::new(-1.0, 1.0, 3);
        run(&spec).unwrap()
    }

    #[test]
    fn csv_has_header_and_full_precision() {
        let csv = to_csv(&small());
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("zeta,R_alphabeta,R_AB,I_alpha,"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("-1.0000000000000000e0,"));
        assert_eq!(csv.lines().count(), 4);
        for cell in first.split(',') {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(fmt_value(v), cell);
        }
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let r = small();
        let svg = to_svg(&r);
        assert_eq!(svg.matches("<polyline").count(), r.columns.len());
        assert!(svg.contains("zeta (rad)"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested").join("out.csv");
        write_atomic(&p, "a").unwrap();
        write_atomic(&p, "b").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "b");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
