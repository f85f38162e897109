//! Scan tables as CSV and SVG scatter plots.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use valdist::zerolab::ScanReport;

use crate::error::CliError;

pub const HEADER: [&str; 4] = ["sigma", "t", "winding", "margin"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub sigma: f64,
    pub t: f64,
    pub winding: i64,
    pub margin: f64,
}

pub fn rows(report: &ScanReport) -> Vec<Row> {
    report
        .hits
        .iter()
        .map(|h| {
            let c = h.region.center();
            Row { sigma: c.re, t: c.im, winding: h.winding, margin: h.margin }
        })
        .collect()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn from_csv(text: &str) -> Result<Vec<Row>, CliError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    if header.iter().ne(HEADER) {
        return Err(CliError::Usage(format!("csv header must be {}", HEADER.join(","))));
    }
    rd.deserialize().map(|r| r.map_err(|e| CliError::Usage(format!("csv: {e}")))).collect()
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 56.0;

fn span(v: impl Iterator<Item = f64>, default: (f64, f64)) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        return default;
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

/// Scatter of region centres in the `(sigma, t)` plane.
pub fn svg(rows: &[Row], title: &str) -> String {
    let (x0, x1) = span(rows.iter().map(|r| r.sigma), (1.0, 2.0));
    let (y0, y1) = span(rows.iter().map(|r| r.t), (0.0, 1.0));
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{xv:.3}</text>"#,
            px(xv),
            H - PAD + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{yv:.2}</text>"#,
            PAD - 6.0,
            py(yv) + 4.0
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">sigma</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(s, r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">t</text>"#, H / 2.0, H / 2.0);
    for r in rows {
        let colour = if r.winding == 1 { "#1f5fa8" } else { "#a8321f" };
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{colour}"/>"#, px(r.sigma), py(r.t));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
