//! Static SVG drawings of meandric systems.

use std::fmt::Write;

use crate::meander::MeandricSystem;
use crate::nclat::Point;

const SPACING: f64 = 40.0;
const MARGIN: f64 = 30.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

/// Color of the `k`-th loop; cycles through a fixed palette.
pub fn loop_color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

/// Draws the `2n` points on a horizontal line, `alpha`'s fattened arcs above
/// and `beta`'s below, each loop in its own color.
pub fn render_svg(system: &MeandricSystem) -> String {
    let n = system.n();
    let points = 2 * n;
    let width = 2.0 * MARGIN + SPACING * (points.max(2) - 1) as f64;
    // the widest arc spans every point
    let radius = SPACING * (points.max(2) - 1) as f64 / 2.0;
    let height = 2.0 * (radius + MARGIN) + 20.0;
    let mid = height / 2.0;
    let x = |pos: usize| MARGIN + SPACING * pos as f64;

    let loops = system.trace_loops();
    let mut color_of = vec![0usize; points];
    for (k, curve) in loops.iter().enumerate() {
        for &p in curve {
            color_of[p] = k;
        }
    }

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(
        svg,
        "<title>alpha = {}, beta = {}, {} loop{}</title>",
        cycles_or_identity(&system.alpha().to_cycles()),
        cycles_or_identity(&system.beta().to_cycles()),
        loops.len(),
        if loops.len() == 1 { "" } else { "s" }
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r##"<line x1="{:.1}" y1="{mid:.1}" x2="{:.1}" y2="{mid:.1}" stroke="#999" stroke-width="1"/>"##,
        MARGIN / 2.0,
        width - MARGIN / 2.0
    )
    .unwrap();
    for (pairing, sweep) in [(system.alpha().fatten(), 1), (system.beta().fatten(), 0)] {
        for (p, q) in pairing.pairs() {
            let (a, b) = (p.position(), q.position());
            let r = (x(b) - x(a)) / 2.0;
            writeln!(
                svg,
                r#"<path d="M {:.1} {mid:.1} A {r:.1} {r:.1} 0 0 {sweep} {:.1} {mid:.1}" fill="none" stroke="{}" stroke-width="2"/>"#,
                x(a),
                x(b),
                loop_color(color_of[a])
            )
            .unwrap();
        }
    }
    for pos in 0..points {
        writeln!(
            svg,
            r#"<circle cx="{:.1}" cy="{mid:.1}" r="3" fill="black"/>"#,
            x(pos)
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            x(pos),
            height - 6.0,
            Point::from_position(pos)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn cycles_or_identity(text: &str) -> &str {
    if text.is_empty() {
        "()"
    } else {
        text
    }
}
