//! Minimal SVG line plot for a scan.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const M: f64 = 48.0;

/// One polyline through `(x, y)` with the `y = 0` axis drawn dashed.
pub fn line_plot(points: &[(f64, f64)], x_label: &str, y_label: &str, comment: &str) -> String {
    let (x0, x1) = bounds(points.iter().map(|p| p.0));
    let (mut y0, mut y1) = bounds(points.iter().map(|p| p.1).chain([0.0]));
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0).max(1e-300) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(s, "<!-- {} -->", comment.replace("--", "- -")).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    )
    .unwrap();
    writeln!(
        s,
        r##"<line x1="{M}" y1="{z:.3}" x2="{}" y2="{z:.3}" stroke="#888" stroke-dasharray="4 3"/>"##,
        W - M,
        z = sy(0.0)
    )
    .unwrap();
    let pts: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
        .collect();
    writeln!(
        s,
        r##"<polyline fill="none" stroke="#1f5fbf" stroke-width="1.5" points="{}"/>"##,
        pts.join(" ")
    )
    .unwrap();
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, t: &str| {
        writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{t}</text>"#
        )
        .unwrap();
    };
    text(&mut s, W / 2.0, H - 12.0, "middle", x_label);
    text(&mut s, 14.0, M - 12.0, "start", y_label);
    text(&mut s, M, H - M + 16.0, "middle", &format!("{x0:.3}"));
    text(&mut s, W - M, H - M + 16.0, "middle", &format!("{x1:.3}"));
    text(&mut s, M - 4.0, sy(y0) + 4.0, "end", &format!("{y0:.3}"));
    text(&mut s, M - 4.0, sy(y1) + 4.0, "end", &format!("{y1:.3}"));
    text(&mut s, M - 4.0, sy(0.0) + 4.0, "end", "0");
    s.push_str("</svg>\n");
    s
}

fn bounds(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}
