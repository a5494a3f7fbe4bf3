//! Static chord-diagram rendering.
//!
//! Points `1..=n` sit on a circle, clockwise from the top. Two-element blocks
//! are chords, larger blocks filled polygons; a chain gets one panel per
//! member. Output depends only on the input.

use std::fmt::Write;

use crate::apartments::NCSpanningTree;
use crate::chain::Chain;
use crate::partition::Partition;
use crate::universe::{elements, Mask, Universe};

const PANEL: f64 = 240.0;
const HEIGHT: f64 = 262.0;
const RADIUS: f64 = 90.0;
const PALETTE: [&str; 6] = [
    "#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085",
];

fn point(u: Universe, e: u8, radius: f64, ox: f64) -> (f64, f64) {
    let theta = std::f64::consts::TAU * (e as f64 - 1.0) / u.n() as f64;
    (
        ox + PANEL / 2.0 + radius * theta.sin(),
        120.0 - radius * theta.cos(),
    )
}

fn header(panels: usize) -> String {
    let width = PANEL * panels.max(1) as f64;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{HEIGHT:.0}\" \
         viewBox=\"0 0 {width:.0} {HEIGHT:.0}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn frame(out: &mut String, u: Universe, ox: f64, caption: &str) {
    let _ = writeln!(
        out,
        "<circle cx=\"{:.3}\" cy=\"120.000\" r=\"{RADIUS:.3}\" fill=\"none\" stroke=\"#bbbbbb\"/>",
        ox + PANEL / 2.0
    );
    for e in u.elements() {
        let (x, y) = point(u, e, RADIUS, ox);
        let (lx, ly) = point(u, e, RADIUS + 16.0, ox);
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3.500\" fill=\"black\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{lx:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{e}</text>",
            ly + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{}</text>",
        ox + PANEL / 2.0,
        HEIGHT - 10.0,
        escape(caption)
    );
}

fn block(out: &mut String, u: Universe, mask: Mask, colour: &str, ox: f64) {
    let pts: Vec<(f64, f64)> = elements(mask).map(|e| point(u, e, RADIUS, ox)).collect();
    match pts.as_slice() {
        [] | [_] => {}
        [(x1, y1), (x2, y2)] => {
            let _ = writeln!(
                out,
                "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" \
                 stroke=\"{colour}\" stroke-width=\"2.500\"/>"
            );
        }
        _ => {
            let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            let _ = writeln!(
                out,
                "<polygon points=\"{}\" fill=\"{colour}\" fill-opacity=\"0.350\" \
                 stroke=\"{colour}\" stroke-width=\"2.000\"/>",
                list.join(" ")
            );
        }
    }
}

fn partition_panel(out: &mut String, p: &Partition, ox: f64) {
    let u = p.universe();
    let _ = writeln!(out, "<g>");
    for (k, b) in p.blocks().enumerate() {
        block(out, u, b.mask(), PALETTE[k % PALETTE.len()], ox);
    }
    frame(out, u, ox, &p.to_string());
    let _ = writeln!(out, "</g>");
}

pub fn render_partition(p: &Partition) -> String {
    let mut out = header(1);
    partition_panel(&mut out, p, 0.0);
    out.push_str("</svg>\n");
    out
}

pub fn render_chain(c: &Chain) -> String {
    let mut out = header(c.len());
    for (k, p) in c.members().iter().enumerate() {
        partition_panel(&mut out, p, k as f64 * PANEL);
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_tree(t: &NCSpanningTree) -> String {
    let u = t.universe();
    let mut out = header(1);
    let _ = writeln!(out, "<g>");
    for &(a, b) in t.edges() {
        block(
            &mut out,
            u,
            crate::universe::bit(a) | crate::universe::bit(b),
            PALETTE[0],
            0.0,
        );
    }
    frame(&mut out, u, 0.0, &t.to_string());
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
