//! Minimal SVG line plots of result tables.

use std::fmt::Write;

use super::table::{ResultTable, TableKind};

const W: f64 = 640.0;
const H: f64 = 420.0;
const M: f64 = 60.0;
const COLORS: [&str; 7] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

/// One polyline per label, optional log-scaled x axis. Saturation tables
/// also draw the bound as a dashed line.
pub fn render(table: &ResultTable, title: &str, x_label: &str, log_x: bool) -> String {
    let fx = |x: f64| if log_x { x.log10() } else { x };
    let mut series: Vec<(String, Vec<(f64, f64)>)> = table
        .labels()
        .into_iter()
        .map(|l| {
            let pts = table.series(&l).iter().map(|r| (fx(r.sweep_value), r.mean)).collect();
            (l, pts)
        })
        .collect();
    if table.kind == TableKind::Saturation {
        if let Some(first) = table.labels().first() {
            let pts: Vec<(f64, f64)> = table
                .series(first)
                .iter()
                .filter_map(|r| r.bound.map(|b| (fx(r.sweep_value), b)))
                .collect();
            if !pts.is_empty() {
                series.push(("pswf-bound".into(), pts));
            }
        }
    }
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.1.iter().copied()).filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = all.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), p| (a.min(p.0), b.max(p.0), c.min(p.1), d.max(p.1)),
    );
    if !(x1 > x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{M} {M} L{M} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        b = H - M,
        r = W - M
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let xs = if log_x { 10f64.powf(xv) } else { xv };
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, px(xv), H - M + 16.0, tick(xs));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, M - 6.0, py(yv) + 4.0, tick(yv));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 16.0, escape(x_label));
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if label == "pswf-bound" { r#" stroke-dasharray="6 4""# } else { "" };
        let path: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|p| format!("{:.1},{:.1}", px(p.0), py(p.1)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"{dash}/>"#, path.join(" "));
        let ly = M + 14.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{}</text>"#, W - M - 150.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
