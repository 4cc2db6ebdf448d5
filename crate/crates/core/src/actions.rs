//! Classification of tree maps by homeomorphisms.
//!
//! A non-nesting map never sends a closed interval properly into itself.
//! Non-nesting maps are elliptic (some fixed point; the fixed set is then
//! connected) or hyperbolic (an invariant line — the axis — translated by
//! the map). Finite graph automorphisms only ever induce elliptic maps;
//! hyperbolic behavior needs an infinite invariant line and is reachable
//! here through synthetic periodic lines.
//!
//! All fixed points are found exactly by solving rational affine maps.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::pretree::StructuralTree;
use crate::Rational;

/// A bijection of a finite tree preserving incidence: a node permutation
/// together with the induced arc permutation and per-arc orientation.
#[derive(Debug, Clone)]
pub struct TreeMap {
    pub node_image: Vec<usize>,
    /// Arc index to (image arc index, reversed flag).
    pub arc_image: Vec<(usize, bool)>,
}

impl TreeMap {
    /// Validates node images and derives the arc bijection. Every arc must
    /// map onto an arc between the image endpoints.
    pub fn from_node_images(
        tree: &StructuralTree,
        images: &BTreeMap<String, String>,
    ) -> Result<TreeMap> {
        let n = tree.nodes.len();
        let mut node_image = vec![usize::MAX; n];
        for (from, to) in images {
            node_image[tree.node_idx(from)?] = tree.node_idx(to)?;
        }
        if node_image.contains(&usize::MAX) {
            return Err(Error::input("node map does not cover every tree node"));
        }
        let distinct: BTreeSet<usize> = node_image.iter().copied().collect();
        if distinct.len() != n {
            return Err(Error::input("node map is not a bijection"));
        }
        let mut arc_image = Vec::new();
        for arc in &tree.arcs {
            let (ia, ib) = (node_image[arc.a], node_image[arc.b]);
            let img = tree
                .arcs
                .iter()
                .position(|c| (c.a == ia && c.b == ib) || (c.a == ib && c.b == ia))
                .ok_or_else(|| {
                    Error::input(format!(
                        "map does not preserve incidence: no arc between `{}` and `{}`",
                        tree.nodes[ia].id, tree.nodes[ib].id
                    ))
                })?;
            let reversed = tree.arcs[img].a == ib;
            arc_image.push((img, reversed));
        }
        Ok(TreeMap {
            node_image,
            arc_image,
        })
    }

    pub fn identity(tree: &StructuralTree) -> TreeMap {
        TreeMap {
            node_image: (0..tree.nodes.len()).collect(),
            arc_image: (0..tree.arcs.len()).map(|i| (i, false)).collect(),
        }
    }

    /// First `self`, then `other`.
    pub fn then(&self, tree: &StructuralTree, other: &TreeMap) -> TreeMap {
        let node_image = self
            .node_image
            .iter()
            .map(|&i| other.node_image[i])
            .collect();
        let arc_image = self
            .arc_image
            .iter()
            .map(|&(a, rev)| {
                let (b, rev2) = other.arc_image[a];
                (b, rev != rev2)
            })
            .collect();
        let _ = tree;
        TreeMap {
            node_image,
            arc_image,
        }
    }

    pub fn inverse(&self, tree: &StructuralTree) -> TreeMap {
        let mut node_image = vec![0; tree.nodes.len()];
        for (i, &j) in self.node_image.iter().enumerate() {
            node_image[j] = i;
        }
        let mut arc_image = vec![(0, false); tree.arcs.len()];
        for (i, &(j, rev)) in self.arc_image.iter().enumerate() {
            arc_image[j] = (i, rev);
        }
        TreeMap {
            node_image,
            arc_image,
        }
    }

    /// Commutator `self⁻¹ ∘ other⁻¹ ∘ self ∘ other` (rightmost acts first).
    pub fn commutator(&self, tree: &StructuralTree, other: &TreeMap) -> TreeMap {
        other
            .then(tree, self)
            .then(tree, &other.inverse(tree))
            .then(tree, &self.inverse(tree))
    }
}

/// Verdict of the nesting check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Exhaustive non-nesting check for a finite tree map.
///
/// For a bijection taking arcs to arcs, a properly nested interval forces a
/// properly nested interval with node endpoints, so checking all node pairs
/// is exact: the image interval `[g(a), g(b)]` is properly contained in
/// `[a, b]` only if both image endpoints lie on the path and the endpoint
/// sets differ.
pub fn is_non_nesting_tree(tree: &StructuralTree, m: &TreeMap) -> Verdict {
    let n = tree.nodes.len();
    for a in 0..n {
        for b in (a + 1)..n {
            let (ia, ib) = (m.node_image[a], m.node_image[b]);
            if (ia == a && ib == b) || (ia == b && ib == a) {
                continue;
            }
            let path = tree.path(a, b);
            if path.contains(&ia) && path.contains(&ib) {
                // Same node count on both paths forces equality of the point
                // sets only when the endpoints agree; here they differ.
                let image_path = tree.path(ia, ib);
                if image_path.len() < path.len() {
                    return Verdict::Fail {
                        witness: format!(
                            "[{}, {}] maps into [{}, {}]",
                            tree.nodes[a].id,
                            tree.nodes[b].id,
                            tree.nodes[ia].id,
                            tree.nodes[ib].id
                        ),
                    };
                }
            }
        }
    }
    Verdict::Pass
}

/// Fixed set of a finite tree map: fixed nodes, pointwise-fixed arcs, and
/// midpoints of reversed self-mapped arcs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeFixedSet {
    pub nodes: Vec<usize>,
    pub whole_arcs: Vec<usize>,
    pub arc_midpoints: Vec<usize>,
}

impl TreeFixedSet {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.whole_arcs.is_empty() && self.arc_midpoints.is_empty()
    }

    /// Connectivity of the fixed set as a subset of the tree.
    pub fn is_connected(&self, tree: &StructuralTree) -> bool {
        let mut atoms: Vec<(char, usize)> = Vec::new();
        for &v in &self.nodes {
            atoms.push(('n', v));
        }
        for &a in &self.whole_arcs {
            atoms.push(('a', a));
        }
        for &a in &self.arc_midpoints {
            atoms.push(('m', a));
        }
        if atoms.len() <= 1 {
            return true;
        }
        let nodes: BTreeSet<usize> = self.nodes.iter().copied().collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); atoms.len()];
        for (i, &(ki, vi)) in atoms.iter().enumerate() {
            for (j, &(kj, vj)) in atoms.iter().enumerate() {
                if i >= j {
                    continue;
                }
                let touch = match ((ki, vi), (kj, vj)) {
                    (('n', v), ('a', a)) | (('a', a), ('n', v)) => {
                        tree.arcs[a].a == v || tree.arcs[a].b == v
                    }
                    // A whole fixed arc always carries its endpoints with it;
                    // they are fixed nodes and appear in `nodes`.
                    _ => false,
                };
                let _ = nodes;
                if touch {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let mut seen = vec![false; atoms.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == atoms.len()
    }

    /// Deterministic description of one fixed point, if any.
    pub fn least_point(&self, tree: &StructuralTree) -> Option<String> {
        let mut cands: Vec<String> = Vec::new();
        for &v in &self.nodes {
            cands.push(tree.nodes[v].id.clone());
        }
        for &a in &self.arc_midpoints {
            cands.push(format!(
                "midpoint({},{})",
                tree.nodes[tree.arcs[a].a].id, tree.nodes[tree.arcs[a].b].id
            ));
        }
        cands.sort();
        cands.into_iter().next()
    }
}

/// Classification of a finite tree map. Bijections of finite trees always
/// fix a point, so the elliptic case is the only one; an empty fixed set is
/// an internal error.
#[derive(Debug, Clone)]
pub struct TreeClassification {
    pub fixed: TreeFixedSet,
}

pub fn classify_tree_map(tree: &StructuralTree, m: &TreeMap) -> Result<TreeClassification> {
    if let Verdict::Fail { witness } = is_non_nesting_tree(tree, m) {
        return Err(Error::precondition(format!("map is nesting: {witness}")));
    }
    let mut fixed = TreeFixedSet::default();
    for (i, &img) in m.node_image.iter().enumerate() {
        if img == i {
            fixed.nodes.push(i);
        }
    }
    for (i, &(img, reversed)) in m.arc_image.iter().enumerate() {
        if img != i {
            continue;
        }
        if reversed {
            fixed.arc_midpoints.push(i);
        } else {
            fixed.whole_arcs.push(i);
        }
    }
    if fixed.is_empty() {
        return Err(Error::internal(
            "finite tree bijection with empty fixed set",
        ));
    }
    if !fixed.is_connected(tree) {
        return Err(Error::internal(
            "fixed set of a non-nesting map is disconnected",
        ));
    }
    Ok(TreeClassification { fixed })
}

/// Bi-infinite line built from a repeating block of arc lengths. Positions
/// are affine coordinates; the shift by one period is an automorphism.
#[derive(Debug, Clone)]
pub struct PeriodicLine {
    pub block: Vec<Rational>,
}

impl PeriodicLine {
    pub fn period(&self) -> Rational {
        self.block.iter().copied().sum()
    }

    pub fn shift(&self) -> LineMap {
        LineMap {
            scale: Rational::new(1, 1),
            offset: self.period(),
        }
    }
}

/// Affine bijection of the line, `x ↦ scale·x + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineMap {
    pub scale: Rational,
    pub offset: Rational,
}

impl LineMap {
    pub fn reflection(center: Rational) -> LineMap {
        LineMap {
            scale: Rational::new(-1, 1),
            offset: center * Rational::new(2, 1),
        }
    }

    pub fn translation(by: Rational) -> LineMap {
        LineMap {
            scale: Rational::new(1, 1),
            offset: by,
        }
    }

    pub fn apply(&self, x: Rational) -> Rational {
        self.scale * x + self.offset
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &LineMap) -> LineMap {
        LineMap {
            scale: other.scale * self.scale,
            offset: other.scale * self.offset + other.offset,
        }
    }

    pub fn inverse(&self) -> LineMap {
        LineMap {
            scale: Rational::new(1, 1) / self.scale,
            offset: -self.offset / self.scale,
        }
    }

    pub fn commutator(&self, other: &LineMap) -> LineMap {
        other
            .then(self)
            .then(&other.inverse())
            .then(&self.inverse())
    }

    pub fn fixed_set(&self) -> LineFixedSet {
        if self.scale == Rational::new(1, 1) {
            if self.offset.is_zero() {
                LineFixedSet::Everything
            } else {
                LineFixedSet::Empty
            }
        } else {
            LineFixedSet::Point(self.offset / (Rational::new(1, 1) - self.scale))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineFixedSet {
    Empty,
    Point(Rational),
    Everything,
}

/// Non-nesting check for a line map. Affine maps make the check exact: the
/// verdict is independent of the search bound, which is accepted for
/// interface parity with lazy tree inputs.
pub fn is_non_nesting_line(m: &LineMap, _bound: u32) -> Verdict {
    let one = Rational::new(1, 1);
    if m.scale.abs() == one {
        return Verdict::Pass;
    }
    // A contracting map (or the inverse of an expanding one) nests an
    // interval around its fixed point.
    let (g, label) = if m.scale.abs() < one {
        (*m, "g")
    } else {
        (m.inverse(), "g^-1")
    };
    let f = match g.fixed_set() {
        LineFixedSet::Point(f) => f,
        _ => Rational::zero(),
    };
    let a = f;
    let b = f + one;
    let (ia, ib) = (g.apply(a), g.apply(b));
    Verdict::Fail {
        witness: format!("{label}([{a}, {b}]) = [{ia}, {ib}]"),
    }
}

/// Classification of a line map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineClassification {
    Elliptic {
        fixed: LineFixedSet,
    },
    Hyperbolic {
        translation: Rational,
        fundamental: (Rational, Rational),
    },
}

pub fn classify_line_map(m: &LineMap) -> Result<LineClassification> {
    if !is_non_nesting_line(m, 1).passed() {
        return Err(Error::precondition("map is nesting"));
    }
    match m.fixed_set() {
        LineFixedSet::Empty => {
            // Translation. The supremum construction from an arbitrary base
            // point: on [a, g(a)] the points x with g(x) still inside are
            // exactly x = a for a forward translation, so the fundamental
            // segment is [a, g(a)] anchored at the base point 0.
            let c = Rational::zero();
            Ok(LineClassification::Hyperbolic {
                translation: m.offset.abs(),
                fundamental: (c, m.apply(c)),
            })
        }
        fixed => Ok(LineClassification::Elliptic { fixed }),
    }
}

/// Outcome of the common-fixed-point search.
#[derive(Debug, Clone)]
pub enum GlobalFixOutcome {
    /// A point fixed by every generator.
    Fixed(String),
    /// Two generators with disjoint fixed sets; their commutator is the
    /// hyperbolic certificate.
    Commutator {
        i: usize,
        j: usize,
        translation: Rational,
    },
}

/// Common fixed point of elliptic maps on a finite tree. Generators must be
/// elliptic (automatic on finite trees) and the intersection is never empty
/// there, so this always produces a point.
pub fn global_fixed_point_tree(
    tree: &StructuralTree,
    maps: &[TreeMap],
) -> Result<GlobalFixOutcome> {
    if maps.is_empty() {
        return Err(Error::precondition("no generators given"));
    }
    let classes: Vec<TreeClassification> = maps
        .iter()
        .map(|m| classify_tree_map(tree, m))
        .collect::<Result<Vec<_>>>()?;
    // Atom-level intersection.
    let in_all = |atom: &(char, usize)| {
        classes.iter().all(|c| match atom {
            ('n', v) => c.fixed.nodes.contains(v),
            ('a', a) => c.fixed.whole_arcs.contains(a),
            ('m', a) => c.fixed.arc_midpoints.contains(a) || c.fixed.whole_arcs.contains(a),
            _ => false,
        })
    };
    let mut atoms: Vec<(char, usize)> = Vec::new();
    for v in 0..tree.nodes.len() {
        atoms.push(('n', v));
    }
    for a in 0..tree.arcs.len() {
        atoms.push(('a', a));
        atoms.push(('m', a));
    }
    for atom in &atoms {
        if in_all(atom) {
            let desc = match atom {
                ('n', v) => tree.nodes[*v].id.clone(),
                ('a', a) => format!(
                    "arc({},{})",
                    tree.nodes[tree.arcs[*a].a].id, tree.nodes[tree.arcs[*a].b].id
                ),
                ('m', a) => format!(
                    "midpoint({},{})",
                    tree.nodes[tree.arcs[*a].a].id, tree.nodes[tree.arcs[*a].b].id
                ),
                _ => unreachable!(),
            };
            return Ok(GlobalFixOutcome::Fixed(desc));
        }
    }
    Err(Error::internal(
        "elliptic maps of a finite tree with empty common fixed set",
    ))
}

/// Common fixed point of elliptic line maps, or the hyperbolic-commutator
/// certificate for a pair with disjoint fixed sets.
pub fn global_fixed_point_line(maps: &[LineMap]) -> Result<GlobalFixOutcome> {
    if maps.is_empty() {
        return Err(Error::precondition("no generators given"));
    }
    let mut fixed_sets = Vec::new();
    for (i, m) in maps.iter().enumerate() {
        match m.fixed_set() {
            LineFixedSet::Empty => {
                return Err(Error::precondition(format!("generator {i} is hyperbolic")))
            }
            f => fixed_sets.push(f),
        }
    }
    // Intersection over points and full lines.
    let mut common: Option<LineFixedSet> = None;
    for f in &fixed_sets {
        common = Some(match (common, f) {
            (None, f) => f.clone(),
            (Some(LineFixedSet::Everything), f) => f.clone(),
            (Some(LineFixedSet::Point(p)), LineFixedSet::Everything) => LineFixedSet::Point(p),
            (Some(LineFixedSet::Point(p)), LineFixedSet::Point(q)) => {
                if p == *q {
                    LineFixedSet::Point(p)
                } else {
                    LineFixedSet::Empty
                }
            }
            (Some(LineFixedSet::Empty), _) => LineFixedSet::Empty,
            (Some(f), LineFixedSet::Empty) => f,
        });
    }
    match common.unwrap() {
        LineFixedSet::Point(p) => Ok(GlobalFixOutcome::Fixed(format!("x={p}"))),
        LineFixedSet::Everything => Ok(GlobalFixOutcome::Fixed("everywhere".to_string())),
        LineFixedSet::Empty => {
            // Find a disjoint pair and certify their commutator hyperbolic.
            for i in 0..maps.len() {
                for j in (i + 1)..maps.len() {
                    let disjoint = match (&fixed_sets[i], &fixed_sets[j]) {
                        (LineFixedSet::Point(p), LineFixedSet::Point(q)) => p != q,
                        _ => false,
                    };
                    if !disjoint {
                        continue;
                    }
                    let c = maps[i].commutator(&maps[j]);
                    match classify_line_map(&c)? {
                        LineClassification::Hyperbolic { translation, .. } => {
                            return Ok(GlobalFixOutcome::Commutator { i, j, translation });
                        }
                        LineClassification::Elliptic { .. } => {
                            return Err(Error::internal(
                                "commutator of disjoint elliptics is not hyperbolic",
                            ));
                        }
                    }
                }
            }
            Err(Error::internal(
                "empty intersection without a disjoint pair",
            ))
        }
    }
}

/// A family of elliptic maps given by their fixed sets: the n-th map fixes
/// the tail ray starting at `start + n·step`.
#[derive(Debug, Clone)]
pub struct TailFixFamily {
    pub start: Rational,
    pub step: Rational,
}

/// Outcome of the fixed-end search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndOutcome {
    /// A common fixed point exists; no end needs fixing.
    FixedPoint(String),
    /// The fixed sets escape in one direction; that end is invariant.
    End { direction: String },
    /// No end detected within the representable description.
    NoEnd,
}

/// Fixed-end detection for a synthetic family: when the tail rays escape,
/// the family fixes the end they escape toward; otherwise their intersection
/// is itself a tail ray.
pub fn fixed_end_family(family: &TailFixFamily) -> EndOutcome {
    if family.step > Rational::zero() {
        EndOutcome::End {
            direction: "+infinity".to_string(),
        }
    } else {
        EndOutcome::FixedPoint(format!("ray from x={}", family.start))
    }
}

/// Fixed-end query for finitely many concrete elliptic line maps: their
/// fixed sets are points or the whole line, so either a common point exists
/// or a disjoint pair produces the hyperbolic-commutator obstruction; no end
/// is invariant either way.
pub fn fixed_end_line(maps: &[LineMap]) -> Result<EndOutcome> {
    match global_fixed_point_line(maps)? {
        GlobalFixOutcome::Fixed(desc) => Ok(EndOutcome::FixedPoint(desc)),
        GlobalFixOutcome::Commutator { .. } => Ok(EndOutcome::NoEnd),
    }
}

/// Fixed-end query for finitely many concrete elliptic maps on a finite
/// tree: a common fixed point always exists, so no end is reported.
pub fn fixed_end_tree(tree: &StructuralTree, maps: &[TreeMap]) -> Result<EndOutcome> {
    match global_fixed_point_tree(tree, maps)? {
        GlobalFixOutcome::Fixed(_) => Ok(EndOutcome::NoEnd),
        GlobalFixOutcome::Commutator { .. } => Ok(EndOutcome::NoEnd),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::cutpoint::{build_cutpoint_tree, build_p, induced_node_images, Automorphism};
    use crate::ratio;

    fn barbell_tree_and_swap() -> (StructuralTree, TreeMap) {
        let g = corpus::load("barbell");
        let p = build_p(&g, 3).unwrap();
        let tree = build_cutpoint_tree(&g, &p).unwrap();
        let auto = Automorphism::from_vertex_images(
            &g,
            &[
                ("u1".into(), "v1".into()),
                ("u2".into(), "v2".into()),
                ("u3".into(), "v3".into()),
                ("v1".into(), "u1".into()),
                ("v2".into(), "u2".into()),
                ("v3".into(), "u3".into()),
            ],
            &[],
        )
        .unwrap();
        let images = induced_node_images(&p, &tree, &auto).unwrap();
        let m = TreeMap::from_node_images(&tree, &images).unwrap();
        (tree, m)
    }

    #[test]
    fn identity_is_non_nesting() {
        let g = corpus::load("barbell");
        let p = build_p(&g, 3).unwrap();
        let tree = build_cutpoint_tree(&g, &p).unwrap();
        let id = TreeMap::identity(&tree);
        assert!(is_non_nesting_tree(&tree, &id).passed());
    }

    #[test]
    fn finite_tree_automorphism_is_non_nesting() {
        let (tree, m) = barbell_tree_and_swap();
        assert!(is_non_nesting_tree(&tree, &m).passed());
    }

    #[test]
    fn contracting_line_map_fails_with_witness() {
        let m = LineMap {
            scale: ratio(1, 2),
            offset: ratio(0, 1),
        };
        match is_non_nesting_line(&m, 4) {
            Verdict::Fail { witness } => assert!(witness.contains("[0, 1]"), "{witness}"),
            Verdict::Pass => panic!("contraction must nest"),
        }
    }

    #[test]
    fn barbell_swap_is_elliptic_with_bridge_midpoint_fixed() {
        let (tree, m) = barbell_tree_and_swap();
        let c = classify_tree_map(&tree, &m).unwrap();
        assert!(c.fixed.nodes.is_empty());
        assert_eq!(c.fixed.arc_midpoints.len(), 1);
        let arc = &tree.arcs[c.fixed.arc_midpoints[0]];
        assert!(matches!(arc.kind, crate::pretree::ArcKind::Bridge(_)));
        assert!(c.fixed.is_connected(&tree));
    }

    #[test]
    fn c5_rotation_fixes_the_single_node() {
        let g = corpus::load("c5");
        let r = crate::cutpair::build_r(&g, 3).unwrap();
        let tree = crate::cutpair::build_jsj_tree(&r).unwrap();
        let auto = Automorphism::from_vertex_images(
            &g,
            &[
                ("c0".into(), "c1".into()),
                ("c1".into(), "c2".into()),
                ("c2".into(), "c3".into()),
                ("c3".into(), "c4".into()),
                ("c4".into(), "c0".into()),
            ],
            &[],
        )
        .unwrap();
        let images = crate::combined::induced_jsj_images(&r, &auto).unwrap();
        let m = TreeMap::from_node_images(&tree, &images).unwrap();
        let c = classify_tree_map(&tree, &m).unwrap();
        assert_eq!(c.fixed.nodes.len(), 1);
    }

    #[test]
    fn unit_shift_on_periodic_line_is_hyperbolic() {
        let line = PeriodicLine {
            block: vec![ratio(1, 2), ratio(1, 3)],
        };
        let shift = line.shift();
        match classify_line_map(&shift).unwrap() {
            LineClassification::Hyperbolic {
                translation,
                fundamental,
            } => {
                assert_eq!(translation, line.period());
                assert_eq!(fundamental.1 - fundamental.0, line.period());
            }
            other => panic!("shift must be hyperbolic, got {other:?}"),
        }
    }

    #[test]
    fn reflection_is_elliptic_at_its_center() {
        let r = LineMap::reflection(ratio(3, 2));
        match classify_line_map(&r).unwrap() {
            LineClassification::Elliptic { fixed } => {
                assert_eq!(fixed, LineFixedSet::Point(ratio(3, 2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nesting_map_is_rejected_by_classify() {
        let m = LineMap {
            scale: ratio(1, 2),
            offset: ratio(1, 1),
        };
        assert!(classify_line_map(&m).is_err());
    }

    #[test]
    fn single_elliptic_generator_fixes_a_point() {
        let (tree, m) = barbell_tree_and_swap();
        match global_fixed_point_tree(&tree, &[m]).unwrap() {
            GlobalFixOutcome::Fixed(desc) => assert!(desc.contains("midpoint"), "{desc}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_rotations_fix_the_center() {
        let g = corpus::load("star");
        let p = build_p(&g, 3).unwrap();
        let tree = build_cutpoint_tree(&g, &p).unwrap();
        let mut maps = Vec::new();
        for images in corpus::automorphisms("star") {
            let pairs: Vec<(String, String)> = images
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
            let auto = Automorphism::from_vertex_images(&g, &pairs, &[]).unwrap();
            let images = induced_node_images(&p, &tree, &auto).unwrap();
            maps.push(TreeMap::from_node_images(&tree, &images).unwrap());
        }
        match global_fixed_point_tree(&tree, &maps).unwrap() {
            GlobalFixOutcome::Fixed(desc) => assert_eq!(desc, "cut:c"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disjoint_reflections_yield_hyperbolic_commutator() {
        let a = LineMap::reflection(ratio(0, 1));
        let b = LineMap::reflection(ratio(1, 1));
        match global_fixed_point_line(&[a, b]).unwrap() {
            GlobalFixOutcome::Commutator { translation, .. } => {
                assert_eq!(translation, ratio(4, 1));
            }
            other => panic!("expected commutator certificate, got {other:?}"),
        }
    }

    #[test]
    fn hyperbolic_generator_is_a_precondition_error() {
        let a = LineMap::reflection(ratio(0, 1));
        let t = LineMap::translation(ratio(1, 1));
        let err = global_fixed_point_line(&[a, t]).unwrap_err();
        assert!(err.to_string().contains("generator 1"), "{err}");
    }

    #[test]
    fn escaping_tail_family_fixes_an_end() {
        let family = TailFixFamily {
            start: ratio(0, 1),
            step: ratio(1, 1),
        };
        assert_eq!(
            fixed_end_family(&family),
            EndOutcome::End {
                direction: "+infinity".to_string()
            }
        );
    }

    #[test]
    fn single_elliptic_line_map_reports_its_fixed_point() {
        let r = LineMap::reflection(ratio(2, 1));
        match fixed_end_line(&[r]).unwrap() {
            EndOutcome::FixedPoint(desc) => assert_eq!(desc, "x=2"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_tree_generators_report_no_end() {
        let (tree, m) = barbell_tree_and_swap();
        assert_eq!(fixed_end_tree(&tree, &[m]).unwrap(), EndOutcome::NoEnd);
    }

    #[test]
    fn commutator_composition_is_exact() {
        let a = LineMap::reflection(ratio(0, 1));
        let b = LineMap::reflection(ratio(1, 1));
        let c = a.commutator(&b);
        // b then a is a translation by -2; the commutator doubles it.
        assert_eq!(c.scale, ratio(1, 1));
        assert_eq!(c.offset.abs(), ratio(4, 1));
    }

    #[test]
    fn elliptic_powers_stay_elliptic() {
        let (tree, m) = barbell_tree_and_swap();
        let square = m.then(&tree, &m);
        let c1 = classify_tree_map(&tree, &m).unwrap();
        let c2 = classify_tree_map(&tree, &square).unwrap();
        assert!(!c1.fixed.is_empty() && !c2.fixed.is_empty());
    }

    #[test]
    fn induced_map_is_an_isometry_in_geometric_mode() {
        // A length-preserving automorphism maps every arc onto an arc of the
        // same geometric length.
        let (tree, m) = barbell_tree_and_swap();
        for (i, &(img, _)) in m.arc_image.iter().enumerate() {
            assert_eq!(tree.arcs[i].length, tree.arcs[img].length);
        }
    }

    #[test]
    fn hyperbolic_axis_is_invariant_and_fixed_point_free() {
        let line = PeriodicLine {
            block: vec![ratio(2, 1)],
        };
        let shift = line.shift();
        // The axis is the whole line: the map permutes it (affine bijection)
        // and fixes nothing on it.
        assert_eq!(shift.fixed_set(), LineFixedSet::Empty);
        let back = shift.then(&shift.inverse());
        assert_eq!(
            back,
            LineMap {
                scale: ratio(1, 1),
                offset: ratio(0, 1)
            }
        );
    }
}
