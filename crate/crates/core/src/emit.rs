//! Serialization: DOT for rendering, and a line-oriented structured text
//! format that round-trips.
//!
//! The text format is UTF-8, one record per line:
//!
//! ```text
//! tree nodes=<n> arcs=<m>
//! node <id> kind=<kind> [prov=<provenance>]
//! arc <id-a> <id-b> len=<rational> kind=<glue|bridge:EDGE>
//! end
//! ```
//!
//! Identifiers and provenance strings never contain whitespace. Output is
//! deterministic: identical trees serialize byte-identically.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pretree::{ArcKind, NodeKind, StructuralTree, TreeArc, TreeNode};
use crate::Rational;

pub fn tree_to_text(tree: &StructuralTree) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "tree nodes={} arcs={}",
        tree.nodes.len(),
        tree.arcs.len()
    )
    .unwrap();
    let mut order: Vec<usize> = (0..tree.nodes.len()).collect();
    order.sort_by(|&a, &b| tree.nodes[a].id.cmp(&tree.nodes[b].id));
    for &i in &order {
        let n = &tree.nodes[i];
        match &n.provenance {
            Some(p) => writeln!(out, "node {} kind={} prov={}", n.id, n.kind.label(), p).unwrap(),
            None => writeln!(out, "node {} kind={}", n.id, n.kind.label()).unwrap(),
        }
    }
    let mut arcs: Vec<(String, String, Rational, String)> = tree
        .arcs
        .iter()
        .map(|a| {
            let (x, y) = (tree.nodes[a.a].id.clone(), tree.nodes[a.b].id.clone());
            let (x, y) = if x <= y { (x, y) } else { (y, x) };
            (x, y, a.length, a.kind.label())
        })
        .collect();
    arcs.sort();
    for (x, y, len, kind) in arcs {
        writeln!(out, "arc {x} {y} len={len} kind={kind}").unwrap();
    }
    out.push_str("end\n");
    out
}

pub fn tree_from_text(text: &str) -> Result<StructuralTree> {
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut arcs: Vec<TreeArc> = Vec::new();
    let mut seen_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "tree" => {
                seen_header = true;
            }
            "node" => {
                if toks.len() < 3 {
                    return Err(Error::input(format!(
                        "line {lineno}: malformed node record"
                    )));
                }
                let id = toks[1].to_string();
                let mut kind = NodeKind::Element;
                let mut provenance = None;
                for t in &toks[2..] {
                    if let Some(k) = t.strip_prefix("kind=") {
                        kind = NodeKind::from_label(k).ok_or_else(|| {
                            Error::input(format!("line {lineno}: unknown node kind `{k}`"))
                        })?;
                    } else if let Some(p) = t.strip_prefix("prov=") {
                        provenance = Some(p.to_string());
                    }
                }
                nodes.push(TreeNode {
                    id,
                    kind,
                    provenance,
                });
            }
            "arc" => {
                if toks.len() < 5 {
                    return Err(Error::input(format!("line {lineno}: malformed arc record")));
                }
                let a = nodes.iter().position(|n| n.id == toks[1]).ok_or_else(|| {
                    Error::input(format!(
                        "line {lineno}: arc endpoint `{}` not declared",
                        toks[1]
                    ))
                })?;
                let b = nodes.iter().position(|n| n.id == toks[2]).ok_or_else(|| {
                    Error::input(format!(
                        "line {lineno}: arc endpoint `{}` not declared",
                        toks[2]
                    ))
                })?;
                let mut length = Rational::new(1, 1);
                let mut kind = ArcKind::Glue;
                for t in &toks[3..] {
                    if let Some(l) = t.strip_prefix("len=") {
                        length = parse_rational(l).ok_or_else(|| {
                            Error::input(format!("line {lineno}: bad length `{l}`"))
                        })?;
                    } else if let Some(k) = t.strip_prefix("kind=") {
                        kind = if k == "glue" {
                            ArcKind::Glue
                        } else if let Some(e) = k.strip_prefix("bridge:") {
                            ArcKind::Bridge(e.to_string())
                        } else {
                            return Err(Error::input(format!(
                                "line {lineno}: unknown arc kind `{k}`"
                            )));
                        };
                    }
                }
                arcs.push(TreeArc { a, b, length, kind });
            }
            "end" => break,
            other => {
                return Err(Error::input(format!(
                    "line {lineno}: unknown record `{other}`"
                )))
            }
        }
    }
    if !seen_header {
        return Err(Error::input("missing `tree` header"));
    }
    let tree = StructuralTree {
        nodes,
        arcs,
        root: None,
    };
    tree.validate()
        .map_err(|e| Error::input(format!("parsed tree is invalid: {e}")))?;
    Ok(tree)
}

fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((n, d)) = s.split_once('/') {
        Some(Rational::new(n.parse().ok()?, d.parse().ok()?))
    } else {
        Some(Rational::from_integer(s.parse().ok()?))
    }
}

fn dot_shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Element => "ellipse",
        NodeKind::Class => "ellipse",
        NodeKind::CutVertex => "circle",
        NodeKind::Necklace => "doublecircle",
        NodeKind::InseparablePair => "diamond",
        NodeKind::MaxInseparable => "box",
        NodeKind::End => "triangle",
    }
}

pub fn tree_to_dot(tree: &StructuralTree) -> String {
    let mut out = String::from("graph tree {\n");
    let mut order: Vec<usize> = (0..tree.nodes.len()).collect();
    order.sort_by(|&a, &b| tree.nodes[a].id.cmp(&tree.nodes[b].id));
    for &i in &order {
        let n = &tree.nodes[i];
        writeln!(
            out,
            "  \"{}\" [shape={}, label=\"{}\\n{}\"];",
            n.id,
            dot_shape(n.kind),
            n.id,
            n.kind.label()
        )
        .unwrap();
    }
    let mut arcs: Vec<(String, String, Rational, String)> = tree
        .arcs
        .iter()
        .map(|a| {
            let (x, y) = (tree.nodes[a.a].id.clone(), tree.nodes[a.b].id.clone());
            let (x, y) = if x <= y { (x, y) } else { (y, x) };
            (x, y, a.length, a.kind.label())
        })
        .collect();
    arcs.sort();
    for (x, y, len, kind) in arcs {
        writeln!(
            out,
            "  \"{x}\" -- \"{y}\" [label=\"{len}\", tooltip=\"{kind}\"];"
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Structured text for a cut-pair collection: necklaces with their cyclic
/// cells and gaps, inseparable pairs, maximal inseparable sets.
pub fn collection_to_text(r: &crate::cutpair::RSystem) -> String {
    let mut out = String::new();
    writeln!(out, "collection elements={}", r.elements.len()).unwrap();
    for (i, n) in r.necklaces.iter().enumerate() {
        writeln!(out, "necklace necklace:{i} cells={}", n.cell_summary()).unwrap();
        for gap in &n.gaps {
            let (a, b) = &gap.side_vertices;
            writeln!(out, "gap of=necklace:{i} sides={a},{b} fat={}", gap.fat).unwrap();
        }
    }
    for (p, q) in &r.inseparable.cut_pairs {
        writeln!(out, "pair {p} {q}").unwrap();
    }
    for m in &r.inseparable.max_inseparable {
        let pts: Vec<String> = m.iter().map(|p| p.to_string()).collect();
        writeln!(out, "maxinsep {}", pts.join(" ")).unwrap();
    }
    out.push_str("end\n");
    out
}

/// Structured text for a cut-point analysis.
pub fn cutpoints_to_text(a: &crate::cutpoint::CutPointAnalysis) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "cutpoints vertices={} bridges={} classes={}",
        a.cuts.vertex_cut_points.len(),
        a.cuts.bridge_edges.len(),
        a.classes.len()
    )
    .unwrap();
    for v in &a.cuts.vertex_cut_points {
        writeln!(out, "cutvertex {v}").unwrap();
    }
    for e in &a.cuts.bridge_edges {
        writeln!(out, "bridge {e}").unwrap();
    }
    for (i, c) in a.classes.iter().enumerate() {
        let (vs, es) = c.region.cells();
        let mut cells: Vec<String> = vs.iter().map(|v| format!("v:{v}")).collect();
        cells.extend(es.iter().map(|e| format!("e:{e}")));
        writeln!(
            out,
            "class class:{i} singleton={} cells={}",
            c.singleton,
            cells.join(",")
        )
        .unwrap();
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::cutpoint::{build_cutpoint_tree, build_p};

    #[test]
    fn text_round_trip_preserves_structure() {
        let g = corpus::load("barbell");
        let p = build_p(&g, 3).unwrap();
        let tree = build_cutpoint_tree(&g, &p).unwrap();
        let text = tree_to_text(&tree);
        let back = tree_from_text(&text).unwrap();
        assert_eq!(tree_to_text(&back), text);
        assert_eq!(back.nodes.len(), tree.nodes.len());
        assert_eq!(back.arcs.len(), tree.arcs.len());
    }

    #[test]
    fn text_output_is_deterministic() {
        let g = corpus::load("k4");
        let r = crate::cutpair::build_r(&g, 3).unwrap();
        let t1 = crate::cutpair::build_jsj_tree(&r).unwrap();
        let r2 = crate::cutpair::build_r(&g, 3).unwrap();
        let t2 = crate::cutpair::build_jsj_tree(&r2).unwrap();
        assert_eq!(tree_to_text(&t1), tree_to_text(&t2));
    }

    #[test]
    fn dot_mentions_every_node_and_arc() {
        let g = corpus::load("theta");
        let r = crate::cutpair::build_r(&g, 3).unwrap();
        let tree = crate::cutpair::build_jsj_tree(&r).unwrap();
        let dot = tree_to_dot(&tree);
        assert!(dot.starts_with("graph tree {"));
        for n in &tree.nodes {
            assert!(dot.contains(&format!("\"{}\"", n.id)));
        }
        assert_eq!(dot.matches(" -- ").count(), tree.arcs.len());
    }

    #[test]
    fn malformed_text_is_rejected() {
        assert!(tree_from_text("node a kind=class\nend\n").is_err());
        assert!(tree_from_text("tree nodes=1 arcs=0\nnode a kind=wat\nend\n").is_err());
    }
}
