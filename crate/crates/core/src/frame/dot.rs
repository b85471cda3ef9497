use super::TwoFrame;
use std::fmt::Write;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Graphviz rendering: each `E`-cluster is a same-rank subgraph drawn
/// horizontally, `R` edges point upwards. Reflexive worlds are drawn as
/// solid circles, irreflexive ones dashed. `labels[i]`, when present, is
/// appended to the node label of world `i`.
pub fn to_dot(frame: &TwoFrame, labels: &[String]) -> String {
    let mut out = String::from("digraph frame {\n  rankdir=BT;\n  node [shape=circle];\n");
    for (ci, cluster) in frame.e_clusters().iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{ci} {{\n    rank=same;\n    style=rounded;");
        for w in cluster.iter() {
            let mut label = frame.world_name(w).to_string();
            if let Some(extra) = labels.get(w).filter(|l| !l.is_empty()) {
                label.push_str("\\n");
                label.push_str(extra);
            }
            let style = if frame.r().contains(w, w) { "solid" } else { "dashed" };
            let _ = writeln!(
                out,
                "    {} [label={}, style={style}];",
                quote(frame.world_name(w)),
                quote(&label)
            );
        }
        out.push_str("  }\n");
    }
    for (a, b) in frame.r().pairs().filter(|(a, b)| a != b) {
        let _ = writeln!(out, "  {} -> {};", quote(frame.world_name(a)), quote(frame.world_name(b)));
    }
    out.push_str("}\n");
    out
}
