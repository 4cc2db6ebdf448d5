//! Executable property suite.
//!
//! Every structural law the pipeline relies on is rechecked here at finite
//! scale, exhaustively over the sample grid: the pretree axioms for both
//! relations, interval laws, adjacency and terminality structure, the
//! cut-pair separation laws, collection intersection bounds, circle-map
//! properties, induced-action behavior, and stability of every symbolic
//! output under grid refinement.
//!
//! Checks return outcomes instead of failing fast so that a full matrix can
//! be printed; the CLI turns failures into a nonzero exit.

use std::collections::{BTreeMap, BTreeSet};

use crate::actions::{classify_tree_map, is_non_nesting_tree, TreeMap};
use crate::combined::{build_combined_tree, induced_combined_images, induced_jsj_images};
use crate::continuum::{GraphContinuum, Point};
use crate::cutpair::{circle_map, is_circle, CutStructure, RSystem};
use crate::cutpoint::{
    build_cutpoint_tree, build_p, metrize, Automorphism, CutPointPretree, MetricMode, PNode,
};
use crate::emit;
use crate::error::Result;
use crate::pretree::{ArcKind, BetweennessTable, IntervalKind, NodeKind, StructuralTree};
use crate::Rational;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> CheckOutcome {
        CheckOutcome {
            name: name.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> CheckOutcome {
        CheckOutcome {
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }

    fn of(name: impl Into<String>, failure: Option<String>, ok: impl Into<String>) -> CheckOutcome {
        match failure {
            Some(d) => CheckOutcome::fail(name, d),
            None => CheckOutcome::pass(name, ok),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub graph: String,
    pub granularity: u32,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("== {} (grid {}) ==\n", self.graph, self.granularity);
        for o in &self.outcomes {
            out.push_str(&format!(
                "{:<44} {}  {}\n",
                o.name,
                if o.passed { "PASS" } else { "FAIL" },
                o.detail
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    /// The structural laws of the decomposition itself.
    Lemmas,
    /// Everything: representative independence, circle-map properties,
    /// induced actions, metrization determinism, grid stability.
    Full,
}

/// Runs the suite for one graph. `autos` supplies the automorphisms to drive
/// the action checks (identity is always added).
pub fn verify_graph(
    g: &GraphContinuum,
    name: &str,
    granularity: u32,
    level: VerifyLevel,
    autos: &[Automorphism],
) -> Result<VerifyReport> {
    let mut outcomes = Vec::new();
    let p = build_p(g, granularity)?;
    outcomes.push(check_axioms("pretree-axioms-P", &p.table));
    outcomes.push(check_interval_subset("interval-subset-P", &p.table));
    outcomes.push(check_interval_prefixes("interval-order-P", &p.table));
    outcomes.push(check_adjacency_structure(g, &p));
    outcomes.push(check_singletons_terminal(&p));
    outcomes.push(check_adjacent_pairs_inside_intervals(&p.table));
    let cut_tree = build_cutpoint_tree(g, &p)?;
    outcomes.push(check_cut_tree_matches_pretree(g, &p, &cut_tree));
    if level == VerifyLevel::Full {
        outcomes.push(check_representative_independence(g, &p));
        outcomes.push(check_point_witnesses(g, &p));
        outcomes.push(check_metrize_deterministic(&cut_tree));
    }

    // Cut-pair checks run on the whole space when it has no cut points,
    // otherwise on every block.
    let mut blocks: Vec<(String, GraphContinuum)> = Vec::new();
    if p.analysis.cuts.vertex_cut_points.is_empty() && p.analysis.cuts.bridge_edges.is_empty() {
        blocks.push((String::new(), g.clone()));
    } else {
        for (i, class) in p.analysis.classes.iter().enumerate() {
            if !class.singleton {
                blocks.push((
                    format!("[block{i}]"),
                    crate::combined::block_closure(g, &p, i)?,
                ));
            }
        }
    }
    for (tag, block) in &blocks {
        let r = crate::cutpair::build_r(block, granularity)?;
        outcomes.push(check_axioms(format!("pretree-axioms-R{tag}"), &r.table));
        outcomes.push(check_interval_subset(
            format!("interval-subset-R{tag}"),
            &r.table,
        ));
        outcomes.push(check_triangle_inclusion(
            format!("triangle-inclusion-R{tag}"),
            &r.table,
        ));
        outcomes.push(check_cross_separation(block, &r.cs, tag));
        outcomes.push(check_cyclic_extension(block, &r.cs, tag));
        outcomes.push(check_separable_pairs_covered(&r, tag));
        outcomes.push(check_pair_within_necklace(block, &r, tag));
        outcomes.push(check_gap_sides(&r, tag));
        outcomes.push(check_intersection_bound(&r, tag));
        outcomes.push(check_mutual_nonseparation(block, &r, tag));
        outcomes.push(check_collection_meets_edges(block, &r, tag));
        outcomes.push(check_circle_characterization(block, &r.cs, tag));
        let jsj = crate::cutpair::build_jsj_tree(&r)?;
        outcomes.push(check_tree_matches_table(
            format!("tree-oracle-R{tag}"),
            &jsj,
            &r.table,
        ));
        if level == VerifyLevel::Full {
            outcomes.push(check_insep_or_cyclic(block, &r.cs, tag));
            outcomes.push(check_circle_map_separation(block, &r, tag));
            outcomes.push(check_pair_witnesses(block, &r, tag));
            if tag.is_empty() {
                outcomes.push(check_circle_map_equivariance(block, &r, autos));
            }
        }
    }

    let combined = build_combined_tree(g, granularity)?;
    outcomes.push(match combined.tree.validate() {
        Ok(()) => CheckOutcome::pass(
            "combined-tree-valid",
            format!(
                "{} nodes, {} arcs",
                combined.tree.nodes.len(),
                combined.tree.arcs.len()
            ),
        ),
        Err(e) => CheckOutcome::fail("combined-tree-valid", e.to_string()),
    });
    outcomes.push(check_nontrivial_blocks_touch_cuts(&p, &combined));

    if level == VerifyLevel::Full {
        outcomes.push(check_actions(g, name, &p, &cut_tree, &combined, autos));
    }

    Ok(VerifyReport {
        graph: name.to_string(),
        granularity,
        outcomes,
    })
}

/// Compares every symbolic output at two granularities.
pub fn grid_stability(g: &GraphContinuum, name: &str, g1: u32, g2: u32) -> Result<CheckOutcome> {
    let name_check = format!("grid-stability-{g1}-vs-{g2}");
    let p1 = build_p(g, g1)?;
    let p2 = build_p(g, g2)?;
    if p1.analysis.symbolic_summary() != p2.analysis.symbolic_summary() {
        return Ok(CheckOutcome::fail(
            name_check,
            format!("{name}: cut structure differs"),
        ));
    }
    let t1 = emit::tree_to_text(&build_cutpoint_tree(g, &p1)?);
    let t2 = emit::tree_to_text(&build_cutpoint_tree(g, &p2)?);
    if t1 != t2 {
        return Ok(CheckOutcome::fail(
            name_check,
            format!("{name}: cut-point tree differs"),
        ));
    }
    // Per-block collections and trees.
    let blocks1 = cutpair_blocks(g, &p1)?;
    let blocks2 = cutpair_blocks(g, &p2)?;
    if blocks1.len() != blocks2.len() {
        return Ok(CheckOutcome::fail(
            name_check,
            format!("{name}: block count differs"),
        ));
    }
    for (b1, b2) in blocks1.iter().zip(blocks2.iter()) {
        let r1 = crate::cutpair::build_r(b1, g1)?;
        let r2 = crate::cutpair::build_r(b2, g2)?;
        if r1.symbolic_summary() != r2.symbolic_summary() {
            return Ok(CheckOutcome::fail(
                name_check,
                format!("{name}: collection differs between grids"),
            ));
        }
        let j1 = emit::tree_to_text(&crate::cutpair::build_jsj_tree(&r1)?);
        let j2 = emit::tree_to_text(&crate::cutpair::build_jsj_tree(&r2)?);
        if j1 != j2 {
            return Ok(CheckOutcome::fail(
                name_check,
                format!("{name}: JSJ tree differs"),
            ));
        }
    }
    let c1 = emit::tree_to_text(&build_combined_tree(g, g1)?.tree);
    let c2 = emit::tree_to_text(&build_combined_tree(g, g2)?.tree);
    if c1 != c2 {
        return Ok(CheckOutcome::fail(
            name_check,
            format!("{name}: combined tree differs"),
        ));
    }
    Ok(CheckOutcome::pass(
        name_check,
        "all symbolic outputs identical",
    ))
}

fn cutpair_blocks(g: &GraphContinuum, p: &CutPointPretree) -> Result<Vec<GraphContinuum>> {
    if p.analysis.cuts.vertex_cut_points.is_empty() && p.analysis.cuts.bridge_edges.is_empty() {
        return Ok(vec![g.clone()]);
    }
    let mut out = Vec::new();
    for (i, class) in p.analysis.classes.iter().enumerate() {
        if !class.singleton {
            out.push(crate::combined::block_closure(g, p, i)?);
        }
    }
    Ok(out)
}

fn check_axioms(name: impl Into<String>, table: &BetweennessTable) -> CheckOutcome {
    let report = table.verify_axioms();
    if report.is_pretree() {
        CheckOutcome::pass(name, format!("{} elements", table.len()))
    } else {
        CheckOutcome::fail(name, report.to_string().replace('\n', "; "))
    }
}

/// Membership of `[x, y]` inside `[x, z]` whenever `y` lies in `[x, z]`.
fn check_interval_subset(name: impl Into<String>, table: &BetweennessTable) -> CheckOutcome {
    let n = table.len();
    let mut failure = None;
    'outer: for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                let y_in = y == x || y == z || table.between_idx(x, y, z);
                if !y_in {
                    continue;
                }
                for w in 0..n {
                    let w_in_xy = w == x || w == y || table.between_idx(x, w, y);
                    let w_in_xz = w == x || w == z || table.between_idx(x, w, z);
                    if w_in_xy && !w_in_xz {
                        failure = Some(format!(
                            "[{}, {}] not inside [{}, {}]: {} escapes",
                            table.name(x),
                            table.name(y),
                            table.name(x),
                            table.name(z),
                            table.name(w)
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    CheckOutcome::of(name, failure, "all interval inclusions hold")
}

/// Every prefix of a closed interval in its anchored order is itself the
/// closed interval up to its last member; nonempty subsets have maxima.
fn check_interval_prefixes(name: impl Into<String>, table: &BetweennessTable) -> CheckOutcome {
    let n = table.len();
    let mut failure = None;
    'outer: for x in 0..n {
        for y in 0..n {
            let interval = match table.interval(table.name(x), table.name(y), IntervalKind::Closed)
            {
                Ok(i) => i,
                Err(e) => {
                    failure = Some(e.to_string());
                    break 'outer;
                }
            };
            for (k, member) in interval.members.iter().enumerate() {
                let prefix = match table.interval(table.name(x), member, IntervalKind::Closed) {
                    Ok(i) => i,
                    Err(e) => {
                        failure = Some(e.to_string());
                        break 'outer;
                    }
                };
                if prefix.members != interval.members[..=k] {
                    failure = Some(format!(
                        "prefix of [{}, {}] at {} is not an interval",
                        table.name(x),
                        table.name(y),
                        member
                    ));
                    break 'outer;
                }
            }
        }
    }
    CheckOutcome::of(
        name,
        failure,
        "nested unions of intervals are intervals; maxima exist",
    )
}

/// Adjacent table pairs are either a cut point with a nonsingleton class
/// containing it in its closure, or consecutive atoms of a common bridge.
fn check_adjacency_structure(g: &GraphContinuum, p: &CutPointPretree) -> CheckOutcome {
    let name = "adjacency-cut-class";
    let classification = p.table.classify();
    let mut failure = None;
    for (a, b) in &classification.adjacent_pairs {
        let na = &p.nodes[p.table.idx(a).unwrap()];
        let nb = &p.nodes[p.table.idx(b).unwrap()];
        let ok = match (na, nb) {
            (PNode::Class(i), PNode::CutVertex(v)) | (PNode::CutVertex(v), PNode::Class(i)) => {
                !p.analysis.classes[*i].singleton
                    && p.analysis.classes[*i].adjacent_cuts.contains(v)
            }
            // Sampling artifacts: consecutive positions along one bridge.
            (PNode::BridgeSample(e1, _), PNode::BridgeSample(e2, _)) => e1 == e2,
            (PNode::BridgeSample(e, _), PNode::CutVertex(v))
            | (PNode::CutVertex(v), PNode::BridgeSample(e, _)) => {
                let rec = g.edge(e).unwrap();
                g.vertex_id(rec.u) == v || g.vertex_id(rec.v) == v
            }
            (PNode::BridgeSample(e, _), PNode::Class(i))
            | (PNode::Class(i), PNode::BridgeSample(e, _)) => {
                // A terminal leaf class at the dangling end of a bridge.
                let rec = g.edge(e).unwrap();
                p.analysis.classes[*i].singleton
                    && [rec.u, rec.v].iter().any(|&vi| {
                        p.analysis.classes[*i]
                            .region
                            .vertices
                            .contains(g.vertex_id(vi))
                    })
            }
            _ => false,
        };
        if ok {
            continue;
        }
        failure = Some(format!("unexplained adjacency ({a}, {b})"));
        break;
    }
    CheckOutcome::of(
        name,
        failure,
        "every adjacency is cut-to-class or along a bridge",
    )
}

fn check_singletons_terminal(p: &CutPointPretree) -> CheckOutcome {
    let name = "singleton-classes-terminal";
    let classification = p.table.classify();
    let mut failure = None;
    for (i, class) in p.analysis.classes.iter().enumerate() {
        if class.singleton && !classification.terminals.contains(&format!("class:{i}")) {
            failure = Some(format!("singleton class:{i} is not terminal"));
            break;
        }
    }
    CheckOutcome::of(name, failure, "every singleton non-cut class is terminal")
}

/// Adjacent pairs inside a closed interval appear consecutively in its
/// order; their number is finite and enumerated.
fn check_adjacent_pairs_inside_intervals(table: &BetweennessTable) -> CheckOutcome {
    let name = "interval-adjacent-pairs";
    let classification = table.classify();
    let mut failure = None;
    let mut count = 0usize;
    'outer: for x in 0..table.len() {
        for y in 0..table.len() {
            let interval = table
                .interval(table.name(x), table.name(y), IntervalKind::Closed)
                .unwrap();
            for (a, b) in &classification.adjacent_pairs {
                let pa = interval.members.iter().position(|m| m == a);
                let pb = interval.members.iter().position(|m| m == b);
                if let (Some(pa), Some(pb)) = (pa, pb) {
                    count += 1;
                    if pa.abs_diff(pb) != 1 {
                        failure = Some(format!(
                            "adjacent pair ({a}, {b}) not consecutive in [{}, {}]",
                            table.name(x),
                            table.name(y)
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    CheckOutcome::of(
        name,
        failure,
        format!("{count} in-interval adjacencies, all consecutive"),
    )
}

/// The cut-point tree, with bridge arcs subdivided at the sample positions,
/// has exactly the pretree betweenness on all triples.
pub fn check_cut_tree_matches_pretree(
    g: &GraphContinuum,
    p: &CutPointPretree,
    tree: &StructuralTree,
) -> CheckOutcome {
    let name = "tree-oracle-P";
    let sub = match subdivide_bridges(g, p, tree) {
        Ok(s) => s,
        Err(e) => return CheckOutcome::fail(name, e.to_string()),
    };
    let n = p.table.len();
    let mut failure = None;
    'outer: for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                let table_says = p.table.between_idx(x, z, y);
                let tree_says =
                    sub.tree
                        .tree_between(sub.node_of[x], sub.node_of[z], sub.node_of[y]);
                if table_says != tree_says {
                    failure = Some(format!(
                        "betweenness disagrees at ({}, {}, {})",
                        p.table.name(x),
                        p.table.name(z),
                        p.table.name(y)
                    ));
                    break 'outer;
                }
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{n}^3 triples agree"))
}

struct SubdividedTree {
    tree: StructuralTree,
    /// Pretree element index to subdivided tree node.
    node_of: Vec<usize>,
}

/// Splits every bridge arc at its sample positions so that each pretree
/// element owns a tree node.
fn subdivide_bridges(
    g: &GraphContinuum,
    p: &CutPointPretree,
    tree: &StructuralTree,
) -> Result<SubdividedTree> {
    let mut sub = tree.clone();
    for (ai, arc) in tree.arcs.iter().enumerate() {
        let e = match &arc.kind {
            ArcKind::Bridge(e) => e.clone(),
            ArcKind::Glue => continue,
        };
        let rec = g.edge(&e)?;
        // The arc runs from the element at the u end to the element at the
        // v end; samples are ordered by parameter from u.
        let u_node = crate::cutpoint::PNode::CutVertex(g.vertex_id(rec.u).to_string());
        let u_id = if p
            .analysis
            .cuts
            .vertex_cut_points
            .contains(g.vertex_id(rec.u))
        {
            u_node.id()
        } else {
            let ci = p
                .analysis
                .class_of_point(&Point::vertex(g.vertex_id(rec.u).to_string()))
                .expect("endpoint class");
            format!("class:{ci}")
        };
        let mut from = sub.arcs[ai].a;
        if sub.nodes[from].id != u_id {
            std::mem::swap(&mut from, &mut sub.arcs[ai].b);
            sub.arcs[ai].a = from;
        }
        let samples = p.analysis.grid.edge_samples(&e);
        let mut prev = from;
        let to = sub.arcs[ai].b;
        // Retarget the original arc to the first sample, then chain.
        for (si, s) in samples.iter().enumerate() {
            let id = match s {
                Point::EdgePoint { edge, t } => format!("bridge:{edge}@{t}"),
                _ => unreachable!(),
            };
            sub.nodes.push(crate::pretree::TreeNode {
                id,
                kind: NodeKind::Element,
                provenance: None,
            });
            let new_idx = sub.nodes.len() - 1;
            if si == 0 {
                sub.arcs[ai].b = new_idx;
            } else {
                sub.arcs.push(crate::pretree::TreeArc {
                    a: prev,
                    b: new_idx,
                    length: Rational::new(1, 1),
                    kind: ArcKind::Glue,
                });
            }
            prev = new_idx;
        }
        sub.arcs.push(crate::pretree::TreeArc {
            a: prev,
            b: to,
            length: Rational::new(1, 1),
            kind: ArcKind::Glue,
        });
    }
    sub.validate()?;
    let mut node_of = Vec::new();
    for node in p.nodes.iter() {
        node_of.push(sub.node_idx(&node.id())?);
    }
    Ok(SubdividedTree { tree: sub, node_of })
}

/// Betweenness answers do not depend on the chosen class representatives.
fn check_representative_independence(g: &GraphContinuum, p: &CutPointPretree) -> CheckOutcome {
    let name = "representative-independence";
    let n = p.nodes.len();
    let mut failure = None;
    let reps_of = |node: &PNode| -> Vec<Point> {
        match node {
            PNode::Class(i) => p.analysis.classes[*i]
                .members
                .iter()
                .take(3)
                .cloned()
                .collect(),
            other => vec![p.analysis.representative(other)],
        }
    };
    'outer: for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                if x == y || z == x || z == y {
                    continue;
                }
                let expected = p.table.between_idx(x, z, y);
                for a in reps_of(&p.nodes[x]) {
                    for b in reps_of(&p.nodes[y]) {
                        for c in reps_of(&p.nodes[z]) {
                            let got = if p.nodes[z].is_cut() {
                                p.analysis.separates_point(g, &c, &a, &b)
                            } else {
                                continue;
                            };
                            if got != expected {
                                failure = Some(format!(
                                    "({}, {}, {}) flips with representatives {a}, {c}, {b}",
                                    p.table.name(x),
                                    p.table.name(z),
                                    p.table.name(y)
                                ));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    CheckOutcome::of(name, failure, "stable under representative choice")
}

/// Separation witnesses for single cut points: closed halves, connected,
/// meeting exactly in the cut.
fn check_point_witnesses(g: &GraphContinuum, p: &CutPointPretree) -> CheckOutcome {
    let name = "witness-soundness-points";
    let mut failure = None;
    let mut checked = 0;
    'outer: for c in &p.analysis.cut_candidates {
        let grid = &p.analysis.grid.points;
        for a in grid {
            for b in grid {
                if a >= b || a == c || b == c {
                    continue;
                }
                let sep = match g.separates(std::slice::from_ref(c), a, b) {
                    Ok(s) => s,
                    Err(e) => {
                        failure = Some(e.to_string());
                        break 'outer;
                    }
                };
                if !sep.separated {
                    continue;
                }
                checked += 1;
                match sep.witness {
                    Some((y, z)) => {
                        let mut uni = y.clone();
                        uni.union_with(&z);
                        let inter = y.intersect(&z);
                        let cut_region =
                            crate::continuum::Region::from_points(std::slice::from_ref(c));
                        if uni != g.full_region()
                            || inter != cut_region
                            || !y.is_connected(g)
                            || !z.is_connected(g)
                        {
                            failure = Some(format!("unsound witness for cut at {c}"));
                            break 'outer;
                        }
                    }
                    None => {
                        failure = Some(format!("single cut point {c} produced no witness"));
                        break 'outer;
                    }
                }
                // One witness per cut candidate keeps this bounded.
                continue 'outer;
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{checked} witnesses validated"))
}

/// Witnesses for sampled cut pairs on a cut-point-free block.
fn check_pair_witnesses(g: &GraphContinuum, r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("witness-soundness-pairs{tag}");
    let mut failure = None;
    let mut checked = 0;
    'outer: for (pa, pb) in r.cs.grid_cut_pairs().iter().take(40) {
        let removed = [pa.clone(), pb.clone()];
        for a in &r.cs.grid.points {
            for b in &r.cs.grid.points {
                if a >= b || removed.contains(a) || removed.contains(b) {
                    continue;
                }
                let sep = match g.separates(&removed, a, b) {
                    Ok(s) => s,
                    Err(e) => {
                        failure = Some(e.to_string());
                        break 'outer;
                    }
                };
                if !sep.separated {
                    continue;
                }
                checked += 1;
                if let Some((y, z)) = sep.witness {
                    let mut uni = y.clone();
                    uni.union_with(&z);
                    let inter = y.intersect(&z);
                    if uni != g.full_region()
                        || inter != crate::continuum::Region::from_points(&removed)
                        || !y.is_connected(g)
                        || !z.is_connected(g)
                    {
                        failure = Some(format!("unsound witness for pair {pa},{pb}"));
                        break 'outer;
                    }
                }
                continue 'outer;
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{checked} witnesses validated"))
}

/// Triangle inclusion on a table: `[x, y] ⊆ [x, z] ∪ [z, y]` for all triples.
fn check_triangle_inclusion(name: impl Into<String>, table: &BetweennessTable) -> CheckOutcome {
    let n = table.len();
    let mut failure = None;
    'outer: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let in_xy = table.between_idx(x, w, y);
                    if !in_xy || w == z {
                        continue;
                    }
                    let in_xz = w == x || w == z || table.between_idx(x, w, z);
                    let in_zy = w == y || w == z || table.between_idx(z, w, y);
                    if !in_xz && !in_zy {
                        failure = Some(format!(
                            "{} in ({}, {}) escapes both [{}, {}] and [{}, {}]",
                            table.name(w),
                            table.name(x),
                            table.name(y),
                            table.name(x),
                            table.name(z),
                            table.name(z),
                            table.name(y)
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    CheckOutcome::of(name, failure, "triangle inclusion holds on all triples")
}

/// When one sampled cut pair separates another, all of: the separation is
/// mutual, both complements have exactly two components, and the four points
/// admit a cyclic decomposition.
fn check_cross_separation(g: &GraphContinuum, cs: &CutStructure, tag: &str) -> CheckOutcome {
    let name = format!("cross-separation{tag}");
    let pairs = cs.grid_cut_pairs();
    let mut failure = None;
    let mut checked = 0;
    let mut cyclic_cache: BTreeMap<Vec<Point>, bool> = BTreeMap::new();
    'outer: for (a, b) in &pairs {
        let ab = cs.pair_index(a, b).unwrap();
        for (c, d) in &pairs {
            if [c, d].iter().any(|p| *p == a || *p == b) {
                continue;
            }
            if !cs.pair_separates(ab, c, d) {
                continue;
            }
            checked += 1;
            let cd = cs.pair_index(c, d).unwrap();
            if !cs.pair_separates(cd, a, b) {
                failure = Some(format!("({a},{b}) separates ({c},{d}) but not conversely"));
                break 'outer;
            }
            if cs.pair_component_count(ab) != 2 || cs.pair_component_count(cd) != 2 {
                failure = Some(format!(
                    "complement of ({a},{b}) or ({c},{d}) does not have exactly two components"
                ));
                break 'outer;
            }
            let mut four = vec![a.clone(), b.clone(), c.clone(), d.clone()];
            four.sort();
            let cyclic = *cyclic_cache.entry(four.clone()).or_insert_with(|| {
                matches!(
                    crate::cutpair::cyclic_decomposition(g, cs, &four),
                    Ok(Some(_))
                )
            });
            if !cyclic {
                failure = Some(format!("({a},{b},{c},{d}) admits no cyclic decomposition"));
                break 'outer;
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{checked} crossing pairs validated"))
}

/// A cut pair separating points of an all-pairs-cut set extends it to a
/// cyclic set.
fn check_cyclic_extension(g: &GraphContinuum, cs: &CutStructure, tag: &str) -> CheckOutcome {
    let name = format!("cyclic-extension{tag}");
    let pairs = cs.grid_cut_pairs();
    let mut failure = None;
    let mut checked = 0;
    let mut cyclic_cache: BTreeMap<Vec<Point>, bool> = BTreeMap::new();
    let mut verify_ext = |base: &[Point], a: &Point, b: &Point| -> bool {
        let mut s: Vec<Point> = base.to_vec();
        s.push(a.clone());
        s.push(b.clone());
        s.sort();
        s.dedup();
        *cyclic_cache.entry(s.clone()).or_insert_with(|| {
            matches!(crate::cutpair::cyclic_decomposition(g, cs, &s), Ok(Some(_)))
        })
    };
    'outer: for (p, q) in &pairs {
        for (a, b) in &pairs {
            if [a, b].iter().any(|x| *x == p || *x == q) {
                continue;
            }
            let idx = cs.pair_index(a, b).unwrap();
            if !cs.pair_separates(idx, p, q) {
                continue;
            }
            checked += 1;
            if !verify_ext(&[p.clone(), q.clone()], a, b) {
                failure = Some(format!("({p},{q}) + separating ({a},{b}) is not cyclic"));
                break 'outer;
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{checked} extensions validated"))
}

/// Sampled sets in which every pair is a cut pair are inseparable or cyclic
/// (sizes three and four).
fn check_insep_or_cyclic(g: &GraphContinuum, cs: &CutStructure, tag: &str) -> CheckOutcome {
    let name = format!("insep-or-cyclic{tag}");
    let pts = &cs.grid.points;
    let n = pts.len();
    let mut failure = None;
    let mut checked = 0;
    let all_pairs_cut = |s: &[usize]| {
        s.iter().enumerate().all(|(i, &a)| {
            s.iter()
                .skip(i + 1)
                .all(|&b| cs.is_cut_pair(&pts[a], &pts[b]))
        })
    };
    let all_pairs_insep = |s: &[usize]| {
        s.iter().enumerate().all(|(i, &a)| {
            s.iter()
                .skip(i + 1)
                .all(|&b| !cs.separable(&pts[a], &pts[b]))
        })
    };
    let mut check_set = |s: &[usize]| -> Option<String> {
        if !all_pairs_cut(s) {
            return None;
        }
        checked += 1;
        if all_pairs_insep(s) {
            return None;
        }
        let set: Vec<Point> = s.iter().map(|&i| pts[i].clone()).collect();
        match crate::cutpair::cyclic_decomposition(g, cs, &set) {
            Ok(Some(_)) => None,
            _ => Some(format!(
                "all-pairs-cut set {:?} is neither inseparable nor cyclic",
                set.iter().map(|p| p.to_string()).collect::<Vec<_>>()
            )),
        }
    };
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            if !cs.is_cut_pair(&pts[i], &pts[j]) {
                continue;
            }
            for k in (j + 1)..n {
                if let Some(f) = check_set(&[i, j, k]) {
                    failure = Some(f);
                    break 'outer;
                }
                for l in (k + 1)..n {
                    if let Some(f) = check_set(&[i, j, k, l]) {
                        failure = Some(f);
                        break 'outer;
                    }
                }
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{checked} sets checked"))
}

/// Every separable sampled cut pair lies in exactly one necklace.
fn check_separable_pairs_covered(r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("separable-pairs-in-necklaces{tag}");
    let mut failure = None;
    let mut checked = 0;
    for (p, q) in r.cs.grid_cut_pairs() {
        if !r.cs.separable(&p, &q) {
            continue;
        }
        checked += 1;
        let homes = r
            .necklaces
            .iter()
            .filter(|n| n.members.contains(&p) && n.members.contains(&q))
            .count();
        if homes != 1 {
            failure = Some(format!("separable pair {p},{q} lies in {homes} necklaces"));
            break;
        }
    }
    CheckOutcome::of(
        name,
        failure,
        format!("{checked} separable pairs, all covered once"),
    )
}

/// Whenever a necklace's point set separates two grid points, some cut pair
/// inside the necklace already separates them.
fn check_pair_within_necklace(g: &GraphContinuum, r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("pair-within-necklace{tag}");
    let mut failure = None;
    let mut checked = 0;
    'outer: for necklace in &r.necklaces {
        let comps = g.cell_complement_components(&necklace.vertex_cells(), &necklace.edge_cells());
        let assignment: Vec<Option<usize>> =
            r.cs.grid
                .points
                .iter()
                .map(|p| comps.iter().position(|c| c.contains(p)))
                .collect();
        let members: BTreeSet<&Point> = necklace.members.iter().collect();
        let inner_pairs: Vec<usize> =
            r.cs.cut_pairs
                .iter()
                .enumerate()
                .filter(|(_, (p, q))| members.contains(p) && members.contains(q))
                .map(|(i, _)| i)
                .collect();
        for (i, x) in r.cs.grid.points.iter().enumerate() {
            for (j, y) in r.cs.grid.points.iter().enumerate() {
                if i >= j {
                    continue;
                }
                match (assignment[i], assignment[j]) {
                    (Some(a), Some(b)) if a != b => {}
                    _ => continue,
                }
                checked += 1;
                let found = inner_pairs.iter().any(|&pi| {
                    let (p, q) = &r.cs.cut_pairs[pi];
                    p != x && p != y && q != x && q != y && r.cs.pair_separates(pi, x, y)
                });
                if !found {
                    failure = Some(format!(
                        "necklace separates {x} from {y} but no inner cut pair does"
                    ));
                    break 'outer;
                }
            }
        }
    }
    CheckOutcome::of(
        name,
        failure,
        format!("{checked} separations traced to cut pairs"),
    )
}

/// Gap sides: two distinct points forming an inseparable set.
fn check_gap_sides(r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("gap-sides-inseparable{tag}");
    let mut failure = None;
    'outer: for necklace in &r.necklaces {
        for gap in &necklace.gaps {
            let (a, b) = &gap.side_vertices;
            if a == b {
                failure = Some(format!("gap with coinciding sides at {a}"));
                break 'outer;
            }
            if !gap.fat {
                failure = Some(format!("non-fat gap between {a} and {b}"));
                break 'outer;
            }
            let (pa, pb) = (Point::vertex(a.clone()), Point::vertex(b.clone()));
            if r.cs.separable(&pa, &pb) {
                failure = Some(format!("gap sides {a},{b} are separable"));
                break 'outer;
            }
        }
    }
    CheckOutcome::of(
        name,
        failure,
        "all gap side unions are nonsingleton inseparable sets",
    )
}

/// Distinct elements share fewer than three sampled points; a two-point
/// intersection is an inseparable cut pair.
fn check_intersection_bound(r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("intersection-bound{tag}");
    let n = r.elements.len();
    let mut failure = None;
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            let inter: Vec<&Point> = r.points[i].intersection(&r.points[j]).collect();
            if inter.len() >= 3 {
                failure = Some(format!(
                    "{} and {} share {} points",
                    r.ids[i],
                    r.ids[j],
                    inter.len()
                ));
                break 'outer;
            }
            if inter.len() == 2
                && !(r.cs.is_cut_pair(inter[0], inter[1]) && !r.cs.separable(inter[0], inter[1]))
            {
                failure = Some(format!(
                    "two-point intersection of {} and {} is not an inseparable cut pair",
                    r.ids[i], r.ids[j]
                ));
                break 'outer;
            }
        }
    }
    CheckOutcome::of(name, failure, "pairwise intersections bounded")
}

/// No element separates two points of another element.
fn check_mutual_nonseparation(g: &GraphContinuum, r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("mutual-nonseparation{tag}");
    let mut failure = None;
    'outer: for (s, elem) in r.elements.iter().enumerate() {
        // Component assignment of grid points under removal of element s.
        let assignment: Vec<Option<usize>> = {
            let comps = match elem {
                crate::cutpair::RElem::Necklace(ni) => {
                    let nk = &r.necklaces[*ni];
                    g.cell_complement_components(&nk.vertex_cells(), &nk.edge_cells())
                }
                _ => {
                    let removed: Vec<Point> = r.points[s].iter().cloned().collect();
                    g.components_after_removal(&removed)
                }
            };
            r.cs.grid
                .points
                .iter()
                .map(|p| comps.iter().position(|c| c.contains(p)))
                .collect()
        };
        for (t, _) in r.elements.iter().enumerate() {
            if s == t {
                continue;
            }
            let t_pts: Vec<&Point> = r.points[t].difference(&r.points[s]).collect();
            for (i, a) in t_pts.iter().enumerate() {
                for b in t_pts.iter().skip(i + 1) {
                    let ia = r.cs.grid.points.iter().position(|p| p == *a).unwrap();
                    let ib = r.cs.grid.points.iter().position(|p| p == *b).unwrap();
                    if let (Some(ca), Some(cb)) = (assignment[ia], assignment[ib]) {
                        if ca != cb {
                            failure = Some(format!(
                                "{} separates {a} from {b} of {}",
                                r.ids[s], r.ids[t]
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    CheckOutcome::of(name, failure, "no element separates points of another")
}

/// Every closed edge meets some element of the collection.
fn check_collection_meets_edges(g: &GraphContinuum, r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("collection-meets-continua{tag}");
    let mut failure = None;
    for e in g.edge_recs() {
        let mut edge_pts: Vec<Point> = r.cs.grid.edge_samples(&e.id);
        edge_pts.push(Point::vertex(g.vertex_id(e.u).to_string()));
        edge_pts.push(Point::vertex(g.vertex_id(e.v).to_string()));
        let meets = (0..r.elements.len()).any(|i| edge_pts.iter().any(|p| r.points[i].contains(p)));
        if !meets {
            failure = Some(format!("edge `{}` meets no element", e.id));
            break;
        }
    }
    CheckOutcome::of(name, failure, "every closed edge meets the collection")
}

fn check_circle_characterization(g: &GraphContinuum, cs: &CutStructure, tag: &str) -> CheckOutcome {
    let name = format!("circle-characterization{tag}");
    match is_circle(g, cs) {
        Ok(v) => CheckOutcome::pass(name, format!("is_circle = {v}, structure agrees")),
        Err(e) => CheckOutcome::fail(name, e.to_string()),
    }
}

/// Circle-map separation transfer in both directions on sampled points.
fn check_circle_map_separation(g: &GraphContinuum, r: &RSystem, tag: &str) -> CheckOutcome {
    let name = format!("circle-map-separation{tag}");
    let mut failure = None;
    let mut checked = 0;
    'outer: for necklace in &r.necklaces {
        let layout = match circle_map(g, &r.cs, necklace) {
            Ok(l) => l,
            Err(e) => {
                failure = Some(e.to_string());
                break 'outer;
            }
        };
        let members = &necklace.members;
        let grid = &r.cs.grid.points;
        // Injectivity on the necklace: all member angles distinct.
        let distinct: BTreeSet<Rational> = members.iter().map(|m| layout.point_angle[m]).collect();
        if distinct.len() != members.len() {
            failure = Some("layout identifies two necklace points".to_string());
            break 'outer;
        }
        for (ai, a) in members.iter().enumerate() {
            for b in members.iter().skip(ai + 1) {
                let idx = match r.cs.pair_index(a, b) {
                    Some(i) => i,
                    None => continue,
                };
                let (fa, fb) = (layout.point_angle[a], layout.point_angle[b]);
                for x in grid {
                    for y in grid {
                        if x >= y || [a, b].contains(&x) || [a, b].contains(&y) {
                            continue;
                        }
                        let (fx, fy) = (layout.point_angle[x], layout.point_angle[y]);
                        let circle_sep = circle_separates(fa, fb, fx, fy);
                        let space_sep = r.cs.pair_separates(idx, x, y);
                        checked += 1;
                        // Angle separation must imply separation in the
                        // space.
                        if circle_sep && !space_sep {
                            failure = Some(format!(
                                "angles of ({a},{b}) separate {x},{y} but the pair does not"
                            ));
                            break 'outer;
                        }
                        // Separation of a necklace point transfers to
                        // angles.
                        if space_sep && members.contains(x) && !circle_sep {
                            failure = Some(format!(
                                "({a},{b}) separates necklace point {x} from {y} but angles do not"
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{checked} transfers checked"))
}

/// An automorphism stabilizing a necklace permutes its vertex stations by a
/// rotation or a reflected rotation of the angle order.
fn check_circle_map_equivariance(
    g: &GraphContinuum,
    r: &RSystem,
    autos: &[Automorphism],
) -> CheckOutcome {
    let name = "circle-map-equivariance";
    let mut failure = None;
    let mut checked = 0;
    'outer: for necklace in &r.necklaces {
        let layout = match circle_map(g, &r.cs, necklace) {
            Ok(l) => l,
            Err(e) => {
                failure = Some(e.to_string());
                break 'outer;
            }
        };
        let member_set: BTreeSet<&Point> = necklace.members.iter().collect();
        for auto in autos {
            let image_set: BTreeSet<Point> =
                necklace.members.iter().map(|p| auto.apply(p)).collect();
            if image_set.iter().collect::<BTreeSet<&Point>>() != member_set {
                continue; // does not stabilize this necklace
            }
            checked += 1;
            // Station sequence in angle order, and the positions their
            // images land on.
            let mut stations = layout.station_angles.clone();
            stations.sort_by_key(|(_, a)| *a);
            let order: Vec<&String> = stations.iter().map(|(v, _)| v).collect();
            let m = order.len();
            if m <= 2 {
                continue;
            }
            let positions: Vec<usize> = order
                .iter()
                .map(|v| {
                    let img = &auto.vertex_map[*v];
                    order
                        .iter()
                        .position(|w| *w == img)
                        .expect("image is a station")
                })
                .collect();
            let rotation = (0..m).all(|i| positions[(i + 1) % m] == (positions[i] + 1) % m);
            let reflection = (0..m).all(|i| positions[(i + 1) % m] == (positions[i] + m - 1) % m);
            if !rotation && !reflection {
                failure = Some(format!(
                    "stabilizing automorphism scrambles the cyclic station order: {positions:?}"
                ));
                break 'outer;
            }
        }
    }
    CheckOutcome::of(
        name,
        failure,
        format!("{checked} stabilizing maps order-preserving"),
    )
}

fn circle_separates(a: Rational, b: Rational, x: Rational, y: Rational) -> bool {
    if x == a || x == b || y == a || y == b {
        return false;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let inside = |t: Rational| t > lo && t < hi;
    inside(x) != inside(y)
}

fn check_nontrivial_blocks_touch_cuts(
    p: &CutPointPretree,
    combined: &crate::combined::CombinedTree,
) -> CheckOutcome {
    let name = "nontrivial-blocks-touch-cuts";
    let has_cuts =
        !p.analysis.cuts.vertex_cut_points.is_empty() || !p.analysis.cuts.bridge_edges.is_empty();
    let mut failure = None;
    for block in &combined.blocks {
        if block.jsj.nodes.len() <= 1 || !has_cuts {
            continue;
        }
        let class = &p.analysis.classes[block.class_index];
        if class.adjacent_cuts.is_empty() {
            failure = Some(format!(
                "block of class:{} has a nontrivial tree but no adjacent cut point",
                block.class_index
            ));
            break;
        }
    }
    CheckOutcome::of(
        name,
        failure,
        "every nontrivial block is adjacent to a cut point",
    )
}

fn check_metrize_deterministic(tree: &StructuralTree) -> CheckOutcome {
    let name = "metrize-deterministic";
    let a = metrize(tree, MetricMode::Canonical, None);
    let b = metrize(tree, MetricMode::Canonical, None);
    match (a, b) {
        (Ok(a), Ok(b)) => {
            if emit::tree_to_text(&a) == emit::tree_to_text(&b) {
                CheckOutcome::pass(name, "canonical metric replays identically")
            } else {
                CheckOutcome::fail(name, "two canonical runs differ")
            }
        }
        (Err(e), _) | (_, Err(e)) => CheckOutcome::fail(name, e.to_string()),
    }
}

/// Every supplied automorphism induces a non-nesting elliptic map with
/// connected fixed set on each produced tree, and squaring preserves type.
fn check_actions(
    g: &GraphContinuum,
    name_of_graph: &str,
    p: &CutPointPretree,
    cut_tree: &StructuralTree,
    combined: &crate::combined::CombinedTree,
    autos: &[Automorphism],
) -> CheckOutcome {
    let name = "induced-actions-elliptic";
    let mut failure = None;
    let mut count = 0;
    let mut all: Vec<Automorphism> = vec![Automorphism::identity(g)];
    all.extend(autos.iter().cloned());
    'outer: for auto in &all {
        // Cut-point tree.
        let trees: Vec<(String, StructuralTree, BTreeMap<String, String>)> = {
            let mut ts = Vec::new();
            match crate::cutpoint::induced_node_images(p, cut_tree, auto) {
                Ok(images) => ts.push(("cut tree".to_string(), cut_tree.clone(), images)),
                Err(e) => {
                    failure = Some(format!("{name_of_graph}: {e}"));
                    break 'outer;
                }
            }
            match induced_combined_images(g, combined, p, auto) {
                Ok(images) => ts.push(("combined tree".to_string(), combined.tree.clone(), images)),
                Err(e) => {
                    failure = Some(format!("{name_of_graph}: {e}"));
                    break 'outer;
                }
            }
            if combined.blocks.len() == 1
                && combined.blocks[0].class_index == 0
                && p.analysis.classes.len() == 1
            {
                let block = &combined.blocks[0];
                match induced_jsj_images(&block.r, auto) {
                    Ok(images) => ts.push(("jsj tree".to_string(), block.jsj.clone(), images)),
                    Err(e) => {
                        failure = Some(format!("{name_of_graph}: {e}"));
                        break 'outer;
                    }
                }
            }
            ts
        };
        for (label, tree, images) in trees {
            let m = match TreeMap::from_node_images(&tree, &images) {
                Ok(m) => m,
                Err(e) => {
                    failure = Some(format!("{label}: {e}"));
                    break 'outer;
                }
            };
            if !is_non_nesting_tree(&tree, &m).passed() {
                failure = Some(format!("{label}: induced map nests"));
                break 'outer;
            }
            let c = match classify_tree_map(&tree, &m) {
                Ok(c) => c,
                Err(e) => {
                    failure = Some(format!("{label}: {e}"));
                    break 'outer;
                }
            };
            if !c.fixed.is_connected(&tree) {
                failure = Some(format!("{label}: fixed set disconnected"));
                break 'outer;
            }
            // Squaring stays elliptic.
            let sq = m.then(&tree, &m);
            if classify_tree_map(&tree, &sq).is_err() {
                failure = Some(format!("{label}: square of elliptic failed to classify"));
                break 'outer;
            }
            count += 1;
        }
    }
    CheckOutcome::of(name, failure, format!("{count} induced maps, all elliptic"))
}

/// Re-check that a tree built from a table agrees with it on all triples.
pub fn check_tree_matches_table(
    name: impl Into<String>,
    tree: &StructuralTree,
    table: &BetweennessTable,
) -> CheckOutcome {
    let n = table.len();
    let mut failure = None;
    'outer: for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                let xi = tree.node_idx(table.name(x)).unwrap();
                let zi = tree.node_idx(table.name(z)).unwrap();
                let yi = tree.node_idx(table.name(y)).unwrap();
                if table.between_idx(x, z, y) != tree.tree_between(xi, zi, yi) {
                    failure = Some(format!(
                        "disagreement at ({}, {}, {})",
                        table.name(x),
                        table.name(z),
                        table.name(y)
                    ));
                    break 'outer;
                }
            }
        }
    }
    CheckOutcome::of(name, failure, format!("{n}^3 triples agree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn lemma_suite_passes_on_small_corpus() {
        for name in ["arc", "c5", "theta"] {
            let g = corpus::load(name);
            let report = verify_graph(&g, name, 3, VerifyLevel::Lemmas, &[]).unwrap();
            assert!(report.all_passed(), "{}", report.render());
        }
    }

    #[test]
    fn full_suite_passes_on_barbell() {
        let g = corpus::load("barbell");
        let autos = corpus::automorphism_maps("barbell", &g);
        let report = verify_graph(&g, "barbell", 3, VerifyLevel::Full, &autos).unwrap();
        assert!(report.all_passed(), "{}", report.render());
    }

    #[test]
    fn grid_stability_on_theta() {
        let g = corpus::load("theta");
        let outcome = grid_stability(&g, "theta", 3, 5).unwrap();
        assert!(outcome.passed, "{}", outcome.detail);
    }
}
