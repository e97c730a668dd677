//! Static SVG chart of a bound profile.

use std::fmt::Write;

use crate::mixbounds::BoundProfile;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn polyline(points: &[(f64, f64)], colour: &str, out: &mut String) {
    if points.is_empty() {
        return;
    }
    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    writeln!(out, r#"  <polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#, pts.join(" ")).unwrap();
    for (x, y) in points {
        writeln!(out, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{colour}"/>"#).unwrap();
    }
}

/// Upper and lower total variation bounds against `r`.
pub fn render_profile(p: &BoundProfile) -> String {
    let (r0, r1) = match (p.rows.first(), p.rows.last()) {
        (Some(a), Some(b)) => (a.r as f64, b.r as f64),
        _ => (0.0, 1.0),
    };
    let span = if r1 > r0 { r1 - r0 } else { 1.0 };
    let px = |r: u64| LEFT + (r as f64 - r0) / span * (W - LEFT - RIGHT);
    let py = |v: f64| TOP + (1.0 - v.clamp(0.0, 1.0)) * (H - TOP - BOTTOM);

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"  <rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(s, r#"  <text x="{}" y="22" text-anchor="middle" font-size="14">{} ({})</text>"#, W / 2.0, p.spec, p.variant).unwrap();

    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    writeln!(s, r#"  <line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#).unwrap();
    writeln!(s, r#"  <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#).unwrap();
    for v in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = py(v);
        writeln!(s, r##"  <line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/>"##).unwrap();
        writeln!(s, r#"  <text x="{}" y="{:.2}" text-anchor="end">{v}</text>"#, x0 - 6.0, y + 4.0).unwrap();
    }
    let step = ((p.rows.len() as f64) / 10.0).ceil().max(1.0) as usize;
    for row in p.rows.iter().step_by(step) {
        let x = px(row.r);
        writeln!(s, r#"  <line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y1 + 5.0).unwrap();
        writeln!(s, r#"  <text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, y1 + 18.0, row.r).unwrap();
    }
    writeln!(s, r#"  <text x="{}" y="{}" text-anchor="middle">r</text>"#, (x0 + x1) / 2.0, H - 10.0).unwrap();
    writeln!(
        s,
        r#"  <text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">total variation</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();

    let upper: Vec<_> = p.rows.iter().filter_map(|r| r.upper_tv.map(|v| (px(r.r), py(v)))).collect();
    let lower: Vec<_> = p.rows.iter().filter_map(|r| r.lower_tv.map(|v| (px(r.r), py(v)))).collect();
    polyline(&upper, "#c0392b", &mut s);
    polyline(&lower, "#2471a3", &mut s);

    let lx = x1 - 120.0;
    writeln!(s, r##"  <line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="#c0392b" stroke-width="2"/>"##, y0 + 10.0, lx + 20.0, y0 + 10.0).unwrap();
    writeln!(s, r#"  <text x="{}" y="{}">upper bound</text>"#, lx + 26.0, y0 + 14.0).unwrap();
    writeln!(s, r##"  <line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="#2471a3" stroke-width="2"/>"##, y0 + 28.0, lx + 20.0, y0 + 28.0).unwrap();
    writeln!(s, r#"  <text x="{}" y="{}">lower bound</text>"#, lx + 26.0, y0 + 32.0).unwrap();
    writeln!(s, "</svg>").unwrap();
    s
}
