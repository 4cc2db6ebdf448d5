//! Acceptance suite: every exit criterion, one test and one printed verdict
//! line per criterion. Run with `cargo test --test acceptance -- --nocapture`
//! to see the matrix.

use std::collections::BTreeMap;
use std::time::Instant;

use cuttrees::actions::{
    classify_line_map, classify_tree_map, global_fixed_point_line, is_non_nesting_tree,
    GlobalFixOutcome, LineClassification, LineMap, PeriodicLine, TreeMap,
};
use cuttrees::combined::{build_combined_tree, induced_combined_images, induced_jsj_images};
use cuttrees::continuum::Point;
use cuttrees::corpus;
use cuttrees::cutpair::{build_jsj_tree, build_r, is_circle, CutStructure, RElem};
use cuttrees::cutpoint::{build_cutpoint_tree, build_p, induced_node_images, metrize, MetricMode};
use cuttrees::pretree::{assemble_tree, ArcKind, LengthPolicy, NodeKind, StructuralTree};
use cuttrees::verify::{self, VerifyLevel};
use cuttrees::{ratio, Rational};

fn verdict(criterion: &str, passed: bool, detail: &str) {
    println!(
        "{criterion}: {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "{criterion}: {detail}");
}

/// Criterion 1: both pretree relations pass all four axioms exhaustively on
/// every corpus graph, within ten seconds per graph at grid 3.
#[test]
fn criterion_1_pretree_axiom_suite() {
    let mut worst = 0.0f64;
    for (name, _) in corpus::all() {
        let g = corpus::load(name);
        let start = Instant::now();
        let p = build_p(&g, 3).expect("cut-point pretree builds");
        let report = p.table.verify_axioms();
        assert!(report.is_pretree(), "{name}: P axioms failed:\n{report}");
        // The cut-pair relation of every block (or of the whole space).
        let blocks = blocks_of(&g, 3);
        for block in &blocks {
            let r = build_r(block, 3).expect("cut-pair collection builds");
            let report = r.table.verify_axioms();
            assert!(report.is_pretree(), "{name}: R axioms failed:\n{report}");
        }
        let elapsed = start.elapsed().as_secs_f64();
        worst = worst.max(elapsed);
        assert!(
            elapsed < 10.0,
            "{name}: axiom suite took {elapsed:.2}s (budget 10s)"
        );
    }
    verdict(
        "criterion 1 (pretree axioms, P and R, all corpus graphs)",
        true,
        &format!("zero violations; worst graph {worst:.2}s < 10s"),
    );
}

fn blocks_of(
    g: &cuttrees::continuum::GraphContinuum,
    granularity: u32,
) -> Vec<cuttrees::continuum::GraphContinuum> {
    let p = build_p(g, granularity).unwrap();
    if p.analysis.cuts.vertex_cut_points.is_empty() && p.analysis.cuts.bridge_edges.is_empty() {
        return vec![g.clone()];
    }
    (0..p.analysis.classes.len())
        .filter(|&i| !p.analysis.classes[i].singleton)
        .map(|i| cuttrees::combined::block_closure(g, &p, i).unwrap())
        .collect()
}

/// Criterion 2: tree betweenness equals pretree betweenness, exactly, for
/// every assembled tree and its source table.
#[test]
fn criterion_2_oracle_equivalence() {
    for (name, _) in corpus::all() {
        let g = corpus::load(name);
        let p = build_p(&g, 3).unwrap();
        // Generic assembly of the sampled table.
        let kinds = BTreeMap::new();
        let sampled_tree = assemble_tree(&p.table, &kinds, LengthPolicy::Unit)
            .unwrap_or_else(|e| panic!("{name}: sampled table failed to assemble: {e}"));
        let oc = verify::check_tree_matches_table("sampled-P", &sampled_tree, &p.table);
        assert!(oc.passed, "{name}: {}", oc.detail);
        // The quotient cut-point tree, with bridges subdivided back at the
        // sample positions.
        let cut_tree = build_cutpoint_tree(&g, &p).unwrap();
        let oc = verify::check_cut_tree_matches_pretree(&g, &p, &cut_tree);
        assert!(oc.passed, "{name}: {}", oc.detail);
        // Every block collection and its tree.
        for block in blocks_of(&g, 3) {
            let r = build_r(&block, 3).unwrap();
            let jsj = build_jsj_tree(&r).unwrap();
            let oc = verify::check_tree_matches_table("R", &jsj, &r.table);
            assert!(oc.passed, "{name}: {}", oc.detail);
        }
    }
    verdict(
        "criterion 2 (tree betweenness = pretree betweenness, all triples)",
        true,
        "exact agreement on every assembled tree",
    );
}

/// Criterion 3: the complete-graph block structure on four vertices.
#[test]
fn criterion_3_k4_structural_counts() {
    let g = corpus::load("k4");
    let r = build_r(&g, 3).unwrap();
    let necklaces = r
        .elements
        .iter()
        .filter(|e| matches!(e, RElem::Necklace(_)))
        .count();
    let pairs = r
        .elements
        .iter()
        .filter(|e| matches!(e, RElem::InseparablePair(_)))
        .count();
    let maxes: Vec<usize> = r
        .elements
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e, RElem::MaxInseparable(_)))
        .map(|(i, _)| r.points[i].len())
        .collect();
    assert_eq!(necklaces, 6, "expected 6 necklaces");
    assert_eq!(pairs, 6, "expected 6 inseparable cut pairs");
    assert_eq!(
        maxes,
        vec![4],
        "expected one maximal inseparable set of size 4"
    );
    let tree = build_jsj_tree(&r).unwrap();
    assert_eq!(tree.nodes.len(), 13, "expected 13 typed nodes");
    let center = tree
        .nodes
        .iter()
        .position(|n| n.kind == NodeKind::MaxInseparable)
        .expect("central element present");
    assert_eq!(tree.degree(center), 6);
    for (i, n) in tree.nodes.iter().enumerate() {
        if n.kind == NodeKind::Necklace {
            assert_eq!(tree.degree(i), 1, "necklaces are leaves");
            let (mid, _) = tree.neighbors(i)[0];
            assert_eq!(tree.nodes[mid].kind, NodeKind::InseparablePair);
            let far: Vec<NodeKind> = tree
                .neighbors(mid)
                .iter()
                .map(|(w, _)| tree.nodes[*w].kind)
                .collect();
            assert!(far.contains(&NodeKind::MaxInseparable));
        }
    }
    verdict(
        "criterion 3 (complete graph on four vertices)",
        true,
        "6 necklaces, 6 pairs, one size-4 inseparable set; 13-node tree, necklace-pair-center branches",
    );
}

/// Criterion 4: the theta graph.
#[test]
fn criterion_4_theta_structure() {
    let g = corpus::load("theta");
    let r = build_r(&g, 3).unwrap();
    assert_eq!(r.elements.len(), 4, "expected 4 collection elements");
    let tree = build_jsj_tree(&r).unwrap();
    assert_eq!(tree.nodes.len(), 4);
    let center = tree
        .nodes
        .iter()
        .position(|n| n.kind == NodeKind::InseparablePair)
        .expect("pair is present");
    assert_eq!(
        tree.degree(center),
        3,
        "pair must be the 3-leaf star center"
    );
    let (p, q) = &r.inseparable.cut_pairs[0];
    assert_eq!(
        (p.clone(), q.clone()),
        (Point::vertex("a"), Point::vertex("b")),
        "the pair is the branch vertex pair"
    );
    let idx = r.cs.pair_index(p, q).unwrap();
    assert_eq!(
        r.cs.pair_component_count(idx),
        3,
        "pair has 3 complementary components"
    );
    verdict(
        "criterion 4 (theta graph)",
        true,
        "collection of 4; 3-leaf star centered at the branch pair; 3 complementary components",
    );
}

/// Criterion 5: the circle characterization matches the cycle graphs
/// exactly.
#[test]
fn criterion_5_circle_characterization() {
    for (name, _) in corpus::all() {
        let g = corpus::load(name);
        let expected = corpus::circle_names().contains(&name);
        let got = match CutStructure::new(&g, 3) {
            Ok(cs) => is_circle(&g, &cs).unwrap(),
            // A continuum with cut points is never a circle.
            Err(_) => false,
        };
        assert_eq!(got, expected, "{name}: is_circle mismatch");
    }
    verdict(
        "criterion 5 (circle characterization)",
        true,
        "true exactly on cycle graphs across the corpus",
    );
}

/// Criterion 6: the lemma suite passes with identical outcomes at grids 3
/// and 5.
#[test]
fn criterion_6_lemma_suite_grid_3_and_5() {
    for (name, _) in corpus::all() {
        let g = corpus::load(name);
        let r3 = verify::verify_graph(&g, name, 3, VerifyLevel::Lemmas, &[]).unwrap();
        let r5 = verify::verify_graph(&g, name, 5, VerifyLevel::Lemmas, &[]).unwrap();
        assert!(r3.all_passed(), "{name} @3:\n{}", r3.render());
        assert!(r5.all_passed(), "{name} @5:\n{}", r5.render());
        let o3: Vec<(String, bool)> = r3
            .outcomes
            .iter()
            .map(|o| (o.name.clone(), o.passed))
            .collect();
        let o5: Vec<(String, bool)> = r5
            .outcomes
            .iter()
            .map(|o| (o.name.clone(), o.passed))
            .collect();
        assert_eq!(o3, o5, "{name}: outcome matrix differs between grids");
    }
    verdict(
        "criterion 6 (lemma suite, grids 3 and 5)",
        true,
        "zero counterexamples; identical outcome matrices",
    );
}

/// Second, direct implementation of the canonical length schedule, used as
/// the metrization oracle: walk the span from the base, attach the path to
/// each remaining leaf in id order, give the n-th attached path total length
/// 1/2^(n-1) split evenly over its arcs, and give every arc outside the span
/// length one.
fn independent_canonical_lengths(tree: &StructuralTree) -> Vec<Rational> {
    let relevant: Vec<usize> = (0..tree.nodes.len())
        .filter(|&i| {
            matches!(
                tree.nodes[i].kind,
                NodeKind::CutVertex | NodeKind::Necklace | NodeKind::InseparablePair
            ) || tree
                .arcs
                .iter()
                .any(|a| matches!(a.kind, ArcKind::Bridge(_)) && (a.a == i || a.b == i))
        })
        .collect();
    let mut lengths: Vec<Rational> = vec![ratio(1, 1); tree.arcs.len()];
    if relevant.is_empty() {
        return lengths;
    }
    // Span arcs: those with relevant nodes on both sides after removal.
    let span_arcs: Vec<usize> = (0..tree.arcs.len())
        .filter(|&ai| {
            if matches!(tree.arcs[ai].kind, ArcKind::Bridge(_)) {
                return true;
            }
            let mut side = vec![false; tree.nodes.len()];
            let mut stack = vec![tree.arcs[ai].a];
            side[tree.arcs[ai].a] = true;
            while let Some(v) = stack.pop() {
                for (w, wi) in tree.neighbors(v) {
                    if wi != ai && !side[w] {
                        side[w] = true;
                        stack.push(w);
                    }
                }
            }
            relevant.iter().any(|&r| side[r]) && relevant.iter().any(|&r| !side[r])
        })
        .collect();
    let base = *relevant
        .iter()
        .min_by_key(|&&i| tree.nodes[i].id.clone())
        .unwrap();
    // Span leaves: span-degree <= 1, excluding the base.
    let mut span_degree: BTreeMap<usize, usize> = BTreeMap::new();
    let mut span_nodes: std::collections::BTreeSet<usize> = relevant.iter().copied().collect();
    for &ai in &span_arcs {
        *span_degree.entry(tree.arcs[ai].a).or_insert(0) += 1;
        *span_degree.entry(tree.arcs[ai].b).or_insert(0) += 1;
        span_nodes.insert(tree.arcs[ai].a);
        span_nodes.insert(tree.arcs[ai].b);
    }
    let mut leaves: Vec<usize> = span_nodes
        .iter()
        .copied()
        .filter(|&v| v != base && span_degree.get(&v).copied().unwrap_or(0) <= 1)
        .collect();
    leaves.sort_by_key(|&v| tree.nodes[v].id.clone());
    let mut built = std::collections::BTreeSet::new();
    built.insert(base);
    let mut n = 0u32;
    for leaf in leaves {
        let path = tree.path(base, leaf);
        let attach = path.iter().rposition(|v| built.contains(v)).unwrap();
        if path[attach..].len() < 2 {
            continue;
        }
        let arcs = tree.path_arcs(path[attach], leaf);
        let total = ratio(1, 1) / Rational::from_integer(2i64.pow(n));
        for &ai in &arcs {
            lengths[ai] = total / Rational::from_integer(arcs.len() as i64);
        }
        for &v in &path[attach..] {
            built.insert(v);
        }
        n += 1;
    }
    lengths
}

/// Criterion 7: metrization determinism, independent replay, and the exact
/// geometric barbell length.
#[test]
fn criterion_7_metrization() {
    for (name, _) in corpus::all() {
        let g = corpus::load(name);
        let p = build_p(&g, 3).unwrap();
        let tree = build_cutpoint_tree(&g, &p).unwrap();
        let m1 = metrize(&tree, MetricMode::Canonical, None).unwrap();
        let m2 = metrize(&tree, MetricMode::Canonical, None).unwrap();
        assert_eq!(
            cuttrees::emit::tree_to_text(&m1),
            cuttrees::emit::tree_to_text(&m2),
            "{name}: canonical metric not deterministic"
        );
        let expected = independent_canonical_lengths(&tree);
        for (ai, arc) in m1.arcs.iter().enumerate() {
            assert_eq!(
                arc.length, expected[ai],
                "{name}: arc {ai} disagrees with the independent replay"
            );
        }
        // JSJ trees of the blocks as well.
        for block in blocks_of(&g, 3) {
            let r = build_r(&block, 3).unwrap();
            let jsj = build_jsj_tree(&r).unwrap();
            let m = metrize(&jsj, MetricMode::Canonical, None).unwrap();
            let expected = independent_canonical_lengths(&jsj);
            for (ai, arc) in m.arcs.iter().enumerate() {
                assert_eq!(
                    arc.length, expected[ai],
                    "{name}: JSJ arc {ai} replay mismatch"
                );
            }
        }
    }
    // Geometric barbell: 1 + bridge length + 1, exactly.
    let g = corpus::load("barbell");
    let bridge_len = g.edge("bridge").unwrap().length;
    let p = build_p(&g, 3).unwrap();
    let tree = build_cutpoint_tree(&g, &p).unwrap();
    let m = metrize(&tree, MetricMode::Geometric, None).unwrap();
    let c0 = m.node_idx("class:0").unwrap();
    let c1 = m.node_idx("class:1").unwrap();
    assert_eq!(
        m.path_length(c0, c1),
        ratio(1, 1) + bridge_len + ratio(1, 1)
    );
    verdict(
        "criterion 7 (metrization)",
        true,
        &format!(
            "deterministic; independent replay identical; barbell geometric span = 1 + {bridge_len} + 1"
        ),
    );
}

/// Criterion 8: induced actions are non-nesting and elliptic with connected
/// fixed sets; the synthetic certificates classify as specified.
#[test]
fn criterion_8_actions() {
    let mut induced_count = 0;
    for (name, _) in corpus::all() {
        let g = corpus::load(name);
        let p = build_p(&g, 3).unwrap();
        let cut_tree = build_cutpoint_tree(&g, &p).unwrap();
        let combined = build_combined_tree(&g, 3).unwrap();
        for auto in corpus::automorphism_maps(name, &g) {
            let mut targets: Vec<(StructuralTree, BTreeMap<String, String>)> = Vec::new();
            let images = induced_node_images(&p, &cut_tree, &auto)
                .unwrap_or_else(|e| panic!("{name}: cut-tree images: {e}"));
            targets.push((cut_tree.clone(), images));
            let images = induced_combined_images(&g, &combined, &p, &auto)
                .unwrap_or_else(|e| panic!("{name}: combined images: {e}"));
            targets.push((combined.tree.clone(), images));
            if p.analysis.cuts.vertex_cut_points.is_empty()
                && p.analysis.cuts.bridge_edges.is_empty()
            {
                let r = build_r(&g, 3).unwrap();
                let jsj = build_jsj_tree(&r).unwrap();
                let images = induced_jsj_images(&r, &auto)
                    .unwrap_or_else(|e| panic!("{name}: JSJ images: {e}"));
                targets.push((jsj, images));
            }
            for (tree, images) in targets {
                let m = TreeMap::from_node_images(&tree, &images)
                    .unwrap_or_else(|e| panic!("{name}: tree map: {e}"));
                assert!(
                    is_non_nesting_tree(&tree, &m).passed(),
                    "{name}: induced map nests"
                );
                let c = classify_tree_map(&tree, &m)
                    .unwrap_or_else(|e| panic!("{name}: classify: {e}"));
                assert!(!c.fixed.is_empty(), "{name}: induced map must be elliptic");
                assert!(
                    c.fixed.is_connected(&tree),
                    "{name}: fixed set disconnected"
                );
                induced_count += 1;
            }
        }
    }
    // Synthetic pair with disjoint fixed sets: the commutator certificate.
    let a = LineMap::reflection(ratio(0, 1));
    let b = LineMap::reflection(ratio(1, 1));
    let outcome = global_fixed_point_line(&[a, b]).unwrap();
    let commutator_translation = match outcome {
        GlobalFixOutcome::Commutator { translation, .. } => translation,
        other => panic!("expected a commutator certificate, got {other:?}"),
    };
    assert!(commutator_translation > ratio(0, 1));
    // Periodic-line shift: hyperbolic with a period-length fundamental
    // segment.
    let line = PeriodicLine {
        block: vec![ratio(1, 1), ratio(1, 2)],
    };
    match classify_line_map(&line.shift()).unwrap() {
        LineClassification::Hyperbolic {
            translation,
            fundamental,
        } => {
            assert_eq!(translation, line.period());
            assert_eq!(fundamental.1 - fundamental.0, line.period());
        }
        other => panic!("shift must be hyperbolic, got {other:?}"),
    }
    verdict(
        "criterion 8 (group actions)",
        true,
        &format!(
            "{induced_count} induced maps elliptic with connected fixed sets; commutator certificate hyperbolic (translation {commutator_translation}); shift hyperbolic with period-length segment"
        ),
    );
}

/// Criterion 9: every symbolic output is identical at grids 3 and 5.
#[test]
fn criterion_9_grid_stability() {
    for (name, _) in corpus::all() {
        let g = corpus::load(name);
        let outcome = verify::grid_stability(&g, name, 3, 5).unwrap();
        assert!(outcome.passed, "{name}: {}", outcome.detail);
    }
    verdict(
        "criterion 9 (grid stability)",
        true,
        "cut points, classes, necklaces, inseparable structure, and all trees identical at grids 3 and 5",
    );
}
