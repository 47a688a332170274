//! SVG pictures of arrow diagrams.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::diagram::{ArrowDiagram, Role};

const SIZE: f64 = 260.0;
const RADIUS: f64 = 100.0;

fn point(i: usize, n: usize, r: f64) -> (f64, f64) {
    // Position 0 at the top, increasing counterclockwise.
    let a = PI / 2.0 + 2.0 * PI * i as f64 / n.max(1) as f64;
    (SIZE / 2.0 + r * a.cos(), SIZE / 2.0 - r * a.sin())
}

/// Skeleton circle with each chord drawn as a straight arrow from tail to
/// head and labelled by its number at both endpoints. The diagram is drawn
/// in canonical form, so equal diagrams give identical output.
pub fn render_svg(d: &ArrowDiagram) -> String {
    let d = d.canonical_form();
    let n = d.len();
    let mut s = String::new();
    let c = SIZE / 2.0;
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, "<title>{}</title>", if d.is_empty() { "empty diagram".into() } else { d.serialize() }).unwrap();
    s.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"7\" ",
        "markerHeight=\"7\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"black\"/></marker></defs>\n"
    ));
    writeln!(s, r#"<circle cx="{c:.2}" cy="{c:.2}" r="{RADIUS:.2}" fill="none" stroke="black" stroke-width="1.5"/>"#)
        .unwrap();
    for [tail, head] in d.chord_positions() {
        let (x1, y1) = point(tail, n, RADIUS);
        let (x2, y2) = point(head, n, RADIUS);
        writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="1.2" marker-end="url(#arrow)"/>"#
        )
        .unwrap();
    }
    for (i, e) in d.endpoints().iter().enumerate() {
        let (x, y) = point(i, n, RADIUS);
        let fill = if e.role == Role::Tail { "black" } else { "white" };
        writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{fill}" stroke="black"/>"#).unwrap();
        let (lx, ly) = point(i, n, RADIUS + 14.0);
        writeln!(
            s,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-family="sans-serif" font-size="11" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            e.chord + 1
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
