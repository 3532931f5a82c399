//! Minimal SVG line chart of `log10 ||P^2 f||` against the wavenumber.

use std::fmt::Write as _;

use crate::scan::ScanRecord;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Renders the finite `log_proj2` values of `records`. Returns a chart with
/// axes only when nothing is finite.
pub fn render_svg(records: &[ScanRecord]) -> String {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.log_proj2.is_finite())
        .map(|r| (r.k, r.log_proj2))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0, 1.0, 0.0, 1.0);
    if let (Some(first), Some(last)) = (points.first(), points.last()) {
        x0 = first.0;
        x1 = last.0;
        y0 = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        y1 = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{left}" y="{}" font-size="12">{x0:.3}</text><text x="{right}" y="{}" font-size="12" text-anchor="end">{x1:.3}</text>"#,
        bottom + 20.0,
        bottom + 20.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{bottom}" font-size="12" text-anchor="end">{y0:.1}</text><text x="{}" y="{top}" font-size="12" text-anchor="end">{y1:.1}</text>"#,
        left - 5.0,
        left - 5.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">k</text><text x="15" y="{}" font-size="13" transform="rotate(-90 15 {})" text-anchor="middle">log10 |P^2 f|</text>"#,
        0.5 * WIDTH,
        HEIGHT - 10.0,
        0.5 * HEIGHT,
        0.5 * HEIGHT
    );
    if !points.is_empty() {
        svg.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points=""#);
        for (i, &(x, y)) in points.iter().enumerate() {
            if i > 0 {
                svg.push(' ');
            }
            let _ = write!(svg, "{:.2},{:.2}", sx(x), sy(y));
        }
        svg.push_str("\"/>\n");
    }
    svg.push_str("</svg>\n");
    svg
}
