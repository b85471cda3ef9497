//! Layered SVG drawing of a 2-frame: clusters as horizontal boxes, `R`
//! edges pointing upwards, irreflexive worlds dashed.

use mmlogic::frame::TwoFrame;
use std::fmt::Write;

const RADIUS: f64 = 18.0;
const GAP: f64 = 56.0;
const LEVEL_HEIGHT: f64 = 110.0;
const PAD: f64 = 24.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Level of each cluster: how many clusters lie strictly below it.
fn levels(frame: &TwoFrame) -> Vec<usize> {
    let skel = frame.e_skeleton();
    let k = skel.classes.len();
    (0..k)
        .map(|c| {
            (0..k)
                .filter(|&d| d != c && skel.r0.contains(d, c) && !skel.r0.contains(c, d))
                .count()
        })
        .collect()
}

pub fn render(frame: &TwoFrame, labels: &[String]) -> String {
    let clusters = frame.e_clusters();
    let lv = levels(frame);
    // Compact the level numbers so that no row is empty.
    let mut distinct: Vec<usize> = lv.clone();
    distinct.sort();
    distinct.dedup();
    let row = |c: usize| distinct.binary_search(&lv[c]).unwrap();
    let rows = distinct.len();

    let mut pos = vec![(0.0, 0.0); frame.size()];
    let mut boxes = Vec::new();
    let mut width: f64 = 0.0;
    let mut cursor = vec![PAD; rows];
    for (ci, cluster) in clusters.iter().enumerate() {
        let r = row(ci);
        let y = PAD + RADIUS + 14.0 + (rows - 1 - r) as f64 * LEVEL_HEIGHT;
        let x0 = cursor[r];
        let mut x = x0 + RADIUS + 8.0;
        for w in cluster.iter() {
            pos[w] = (x, y);
            x += GAP;
        }
        let x1 = x - GAP + RADIUS + 8.0;
        boxes.push((x0, y - RADIUS - 8.0, x1 - x0, 2.0 * RADIUS + 16.0));
        cursor[r] = x1 + 32.0;
        width = width.max(x1);
    }
    let height = PAD + 14.0 + rows as f64 * LEVEL_HEIGHT - 30.0;
    let width = width + PAD;

    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.0} {height:.0}" width="{width:.0}" height="{height:.0}" class="frame">"#
    );
    out.push_str(
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#333"/></marker></defs>"##,
    );
    for (x, y, w, h) in &boxes {
        let _ = write!(
            out,
            r##"<rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{h:.1}" rx="12" fill="#eef3fb" stroke="#8aa4c8"/>"##
        );
    }
    for (a, b) in frame.r().pairs().filter(|(a, b)| a != b) {
        let ((x1, y1), (x2, y2)) = (pos[a], pos[b]);
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (ux, uy) = (dx / len, dy / len);
        // Bend arrows inside a cluster so that opposite pairs stay apart.
        let same_row = (y1 - y2).abs() < 1e-9;
        let (sx, sy, ex, ey) = (x1 + ux * RADIUS, y1 + uy * RADIUS, x2 - ux * RADIUS, y2 - uy * RADIUS);
        if same_row {
            let bend = if x2 > x1 { -28.0 } else { 28.0 };
            let (mx, my) = ((sx + ex) / 2.0, (sy + ey) / 2.0 + bend);
            let _ = write!(
                out,
                r##"<path d="M {sx:.1} {sy:.1} Q {mx:.1} {my:.1} {ex:.1} {ey:.1}" fill="none" stroke="#333" marker-end="url(#arrow)"/>"##
            );
        } else {
            let _ = write!(
                out,
                r##"<line x1="{sx:.1}" y1="{sy:.1}" x2="{ex:.1}" y2="{ey:.1}" stroke="#333" marker-end="url(#arrow)"/>"##
            );
        }
    }
    for w in 0..frame.size() {
        let (x, y) = pos[w];
        let dash = if frame.r().contains(w, w) { "" } else { r#" stroke-dasharray="4 3""# };
        let _ = write!(
            out,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="{RADIUS}" fill="#fff" stroke="#333"{dash}/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"##,
            y + 4.5,
            escape(frame.world_name(w))
        );
        if let Some(l) = labels.get(w).filter(|l| !l.is_empty()) {
            let _ = write!(
                out,
                r##"<text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="11" fill="#a33">{}</text>"##,
                y + RADIUS + 20.0,
                escape(l)
            );
        }
    }
    out.push_str("</svg>");
    out
}
