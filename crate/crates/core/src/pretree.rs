//! Abstract pretree machinery.
//!
//! A betweenness table materializes a ternary relation over a finite ground
//! set. Four axioms characterize pretrees:
//!
//! 1. nothing lies strictly between a point and itself;
//! 2. the relation is symmetric in its outer arguments;
//! 3. if `z` lies in `(x, y)` then `y` does not lie in `(x, z)`;
//! 4. if `z` lies in `(x, y)` and `w != z` then `z` lies in `(x, w)` or in
//!    `(y, w)`.
//!
//! Verification is exhaustive. A verified table assembles into a
//! [`StructuralTree`] whose path betweenness reproduces the table exactly;
//! the assembly refuses tables that fail any axiom.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Rational;

/// Explicit finite betweenness relation. `between(x, z, y)` reads
/// "`z` lies in the open interval `(x, y)`".
#[derive(Debug, Clone)]
pub struct BetweennessTable {
    ground: Vec<String>,
    index: BTreeMap<String, usize>,
    rel: Vec<bool>,
}

impl BetweennessTable {
    /// Builds a table by evaluating `f(x, z, y)` on all ordered triples.
    pub fn from_fn(ground: Vec<String>, mut f: impl FnMut(usize, usize, usize) -> bool) -> Self {
        let n = ground.len();
        let index = ground
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        let mut rel = vec![false; n * n * n];
        for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    rel[(x * n + z) * n + y] = f(x, z, y);
                }
            }
        }
        BetweennessTable { ground, index, rel }
    }

    pub fn empty(ground: Vec<String>) -> Self {
        Self::from_fn(ground, |_, _, _| false)
    }

    pub fn set(&mut self, x: &str, z: &str, y: &str, value: bool) -> Result<()> {
        let (x, z, y) = (self.idx(x)?, self.idx(z)?, self.idx(y)?);
        let n = self.ground.len();
        self.rel[(x * n + z) * n + y] = value;
        self.rel[(y * n + z) * n + x] = value;
        Ok(())
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn idx(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown pretree node `{id}`")))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.ground[i]
    }

    #[inline]
    pub fn between_idx(&self, x: usize, z: usize, y: usize) -> bool {
        let n = self.ground.len();
        self.rel[(x * n + z) * n + y]
    }

    pub fn between(&self, x: &str, z: &str, y: &str) -> Result<bool> {
        Ok(self.between_idx(self.idx(x)?, self.idx(z)?, self.idx(y)?))
    }

    /// Exhaustively checks the four pretree axioms, reporting the first
    /// violating tuple per axiom.
    pub fn verify_axioms(&self) -> AxiomReport {
        let n = self.ground.len();
        let mut report = AxiomReport::all_pass();

        'a1: for x in 0..n {
            for z in 0..n {
                // nothing between a point and itself, and an open interval
                // never contains its own endpoints
                if self.between_idx(x, z, x) {
                    report.axiom1 = AxiomOutcome::violation(vec![self.name(x), self.name(z)]);
                    break 'a1;
                }
                for y in 0..n {
                    if self.between_idx(x, z, y) && (z == x || z == y) {
                        report.axiom1 =
                            AxiomOutcome::violation(vec![self.name(x), self.name(z), self.name(y)]);
                        break 'a1;
                    }
                }
            }
        }

        'a2: for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    if self.between_idx(x, z, y) != self.between_idx(y, z, x) {
                        report.axiom2 =
                            AxiomOutcome::violation(vec![self.name(x), self.name(z), self.name(y)]);
                        break 'a2;
                    }
                }
            }
        }

        'a3: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.between_idx(x, y, z) && self.between_idx(x, z, y) {
                        report.axiom3 =
                            AxiomOutcome::violation(vec![self.name(x), self.name(y), self.name(z)]);
                        break 'a3;
                    }
                }
            }
        }

        'a4: for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    if !self.between_idx(x, z, y) {
                        continue;
                    }
                    for w in 0..n {
                        if w != z && !self.between_idx(x, z, w) && !self.between_idx(y, z, w) {
                            report.axiom4 = AxiomOutcome::violation(vec![
                                self.name(x),
                                self.name(z),
                                self.name(y),
                                self.name(w),
                            ]);
                            break 'a4;
                        }
                    }
                }
            }
        }

        report
    }

    /// Members of the interval between `x` and `y`, ordered by the linear
    /// order anchored at `x` (the first-named endpoint comes first).
    ///
    /// Assumes the table passed axiom verification; on a non-pretree the
    /// interval order need not be total and this panics.
    pub fn interval(&self, x: &str, y: &str, kind: IntervalKind) -> Result<Interval> {
        let xi = self.idx(x)?;
        let yi = self.idx(y)?;
        if xi == yi {
            let members = match kind {
                IntervalKind::Closed => vec![self.ground[xi].clone()],
                _ => Vec::new(),
            };
            return Ok(Interval {
                x: x.to_string(),
                y: y.to_string(),
                kind,
                members,
            });
        }
        let mut inner: Vec<usize> = (0..self.ground.len())
            .filter(|&z| self.between_idx(xi, z, yi))
            .collect();
        inner.sort_by(|&a, &b| self.order_in_interval(xi, yi, a, b));
        let mut members = Vec::new();
        if matches!(kind, IntervalKind::Closed | IntervalKind::HalfOpen) {
            members.push(self.ground[xi].clone());
        }
        members.extend(inner.iter().map(|&z| self.ground[z].clone()));
        if matches!(kind, IntervalKind::Closed) {
            members.push(self.ground[yi].clone());
        }
        Ok(Interval {
            x: x.to_string(),
            y: y.to_string(),
            kind,
            members,
        })
    }

    /// Comparator for two interior members of `[x, y]`, anchored at `x`.
    fn order_in_interval(&self, x: usize, y: usize, a: usize, b: usize) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if a == b {
            return Ordering::Equal;
        }
        if a == x || b == y {
            return Ordering::Less;
        }
        if b == x || a == y {
            return Ordering::Greater;
        }
        if self.between_idx(x, a, b) {
            return Ordering::Less;
        }
        if self.between_idx(x, b, a) {
            return Ordering::Greater;
        }
        // A verified pretree interval is linearly ordered; reaching this
        // branch means the table is not a pretree.
        panic!(
            "interval order is not total between `{}` and `{}`",
            self.ground[a], self.ground[b]
        );
    }

    /// Adjacent pairs (empty open interval), terminal nodes (never strictly
    /// between two others), and the discreteness flag.
    pub fn classify(&self) -> Classification {
        let n = self.ground.len();
        let mut adjacent = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                if !(0..n).any(|z| self.between_idx(x, z, y)) {
                    adjacent.push((self.ground[x].clone(), self.ground[y].clone()));
                }
            }
        }
        let mut terminals = Vec::new();
        for z in 0..n {
            let strictly_inside = (0..n).any(|x| (0..n).any(|y| self.between_idx(x, z, y)));
            if !strictly_inside {
                terminals.push(self.ground[z].clone());
            }
        }
        // Every closed interval of a finite table is finite.
        Classification {
            adjacent_pairs: adjacent,
            terminals,
            discrete: true,
        }
    }
}

/// Result of classifying a table's nodes.
#[derive(Debug, Clone)]
pub struct Classification {
    pub adjacent_pairs: Vec<(String, String)>,
    pub terminals: Vec<String>,
    pub discrete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Open,
    /// `[x, y)`: closed at the first-named endpoint.
    HalfOpen,
    Closed,
}

/// An interval of a pretree with its members in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub x: String,
    pub y: String,
    pub kind: IntervalKind,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomOutcome {
    Pass,
    Violation(Vec<String>),
}

impl AxiomOutcome {
    fn violation(names: Vec<&str>) -> AxiomOutcome {
        AxiomOutcome::Violation(names.into_iter().map(|s| s.to_string()).collect())
    }

    pub fn passed(&self) -> bool {
        matches!(self, AxiomOutcome::Pass)
    }
}

/// Per-axiom verdicts; `PASS` on all four exactly when the table is a pretree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom1: AxiomOutcome,
    pub axiom2: AxiomOutcome,
    pub axiom3: AxiomOutcome,
    pub axiom4: AxiomOutcome,
}

impl AxiomReport {
    fn all_pass() -> AxiomReport {
        AxiomReport {
            axiom1: AxiomOutcome::Pass,
            axiom2: AxiomOutcome::Pass,
            axiom3: AxiomOutcome::Pass,
            axiom4: AxiomOutcome::Pass,
        }
    }

    pub fn is_pretree(&self) -> bool {
        self.axiom1.passed() && self.axiom2.passed() && self.axiom3.passed() && self.axiom4.passed()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, outcome) in [
            ("axiom1", &self.axiom1),
            ("axiom2", &self.axiom2),
            ("axiom3", &self.axiom3),
            ("axiom4", &self.axiom4),
        ] {
            match outcome {
                AxiomOutcome::Pass => writeln!(f, "{name}: PASS")?,
                AxiomOutcome::Violation(t) => {
                    writeln!(f, "{name}: VIOLATION at ({})", t.join(", "))?
                }
            }
        }
        Ok(())
    }
}

/// Role of a tree node; drives rendering and the metrization span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NodeKind {
    /// Generic element of an abstract table.
    Element,
    /// Equivalence class of non-cut points.
    Class,
    /// Vertex cut point.
    CutVertex,
    Necklace,
    InseparablePair,
    MaxInseparable,
    /// Explicit end node created by the combined construction.
    End,
}

impl NodeKind {
    pub fn label(self) -> &'static str {
        match self {
            NodeKind::Element => "element",
            NodeKind::Class => "class",
            NodeKind::CutVertex => "cutpoint",
            NodeKind::Necklace => "necklace",
            NodeKind::InseparablePair => "pair",
            NodeKind::MaxInseparable => "maxinsep",
            NodeKind::End => "end",
        }
    }

    pub fn from_label(s: &str) -> Option<NodeKind> {
        Some(match s {
            "element" => NodeKind::Element,
            "class" => NodeKind::Class,
            "cutpoint" => NodeKind::CutVertex,
            "necklace" => NodeKind::Necklace,
            "pair" => NodeKind::InseparablePair,
            "maxinsep" => NodeKind::MaxInseparable,
            "end" => NodeKind::End,
            _ => return None,
        })
    }
}

/// Why an arc exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcKind {
    /// Unit interval glued between an adjacent pair.
    Glue,
    /// The interior of a bridge edge of the source continuum.
    Bridge(String),
}

impl ArcKind {
    pub fn label(&self) -> String {
        match self {
            ArcKind::Glue => "glue".to_string(),
            ArcKind::Bridge(e) => format!("bridge:{e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub id: String,
    pub kind: NodeKind,
    pub provenance: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TreeArc {
    pub a: usize,
    pub b: usize,
    pub length: Rational,
    pub kind: ArcKind,
}

/// Finite tree with typed nodes and positively weighted arcs.
#[derive(Debug, Clone)]
pub struct StructuralTree {
    pub nodes: Vec<TreeNode>,
    pub arcs: Vec<TreeArc>,
    pub root: Option<usize>,
}

impl StructuralTree {
    pub fn node_idx(&self, id: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| Error::input(format!("unknown tree node `{id}`")))
    }

    pub fn neighbors(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ai, arc) in self.arcs.iter().enumerate() {
            if arc.a == v {
                out.push((arc.b, ai));
            } else if arc.b == v {
                out.push((arc.a, ai));
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// Node sequence of the unique simple path from `a` to `b` (inclusive).
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        if a == b {
            return vec![a];
        }
        let mut prev = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::new();
        queue.push_back(a);
        prev[a] = a;
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for (w, _) in self.neighbors(v) {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        assert!(prev[b] != usize::MAX, "tree is connected");
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Does node `z` lie strictly between nodes `x` and `y`?
    pub fn tree_between(&self, x: usize, z: usize, y: usize) -> bool {
        if z == x || z == y || x == y {
            return false;
        }
        self.path(x, y).contains(&z)
    }

    /// Structural validity: connected, acyclic, strictly positive lengths.
    pub fn validate(&self) -> Result<()> {
        for arc in &self.arcs {
            if arc.length <= Rational::zero() {
                return Err(Error::internal(format!(
                    "arc {}--{} has nonpositive length",
                    self.nodes[arc.a].id, self.nodes[arc.b].id
                )));
            }
        }
        if self.nodes.is_empty() {
            return Err(Error::internal("tree has no nodes"));
        }
        if self.arcs.len() + 1 != self.nodes.len() {
            return Err(Error::internal(format!(
                "tree has {} nodes but {} arcs",
                self.nodes.len(),
                self.arcs.len()
            )));
        }
        // Connectivity (acyclicity then follows from the arc count).
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::new();
        queue.push_back(0);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for (w, _) in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        if count != self.nodes.len() {
            return Err(Error::internal("tree is not connected"));
        }
        Ok(())
    }

    /// Total length of the path between two nodes.
    pub fn path_length(&self, a: usize, b: usize) -> Rational {
        let path = self.path(a, b);
        let mut total = Rational::zero();
        for w in path.windows(2) {
            let arc = self
                .arcs
                .iter()
                .find(|arc| (arc.a == w[0] && arc.b == w[1]) || (arc.a == w[1] && arc.b == w[0]))
                .expect("path steps along arcs");
            total += arc.length;
        }
        total
    }

    /// Arc indices along the path from `a` to `b`.
    pub fn path_arcs(&self, a: usize, b: usize) -> Vec<usize> {
        let path = self.path(a, b);
        let mut out = Vec::new();
        for w in path.windows(2) {
            let ai = self
                .arcs
                .iter()
                .position(|arc| {
                    (arc.a == w[0] && arc.b == w[1]) || (arc.a == w[1] && arc.b == w[0])
                })
                .expect("path steps along arcs");
            out.push(ai);
        }
        out
    }
}

/// How glued arcs receive lengths during assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthPolicy {
    /// Every glued arc gets length one.
    Unit,
}

/// Assembles the tree of a verified pretree table: one node per ground
/// element, one glued arc per adjacent pair.
///
/// Refuses tables that fail axiom verification, returning the report. The
/// betweenness of the result is checked against the table on every triple.
pub fn assemble_tree(
    table: &BetweennessTable,
    kinds: &BTreeMap<String, NodeKind>,
    _lengths: LengthPolicy,
) -> Result<StructuralTree> {
    let report = table.verify_axioms();
    if !report.is_pretree() {
        return Err(Error::NotPretree(report));
    }
    let nodes: Vec<TreeNode> = table
        .ground()
        .iter()
        .map(|id| TreeNode {
            id: id.clone(),
            kind: kinds.get(id).copied().unwrap_or(NodeKind::Element),
            provenance: None,
        })
        .collect();
    let classification = table.classify();
    let mut arcs = Vec::new();
    for (a, b) in &classification.adjacent_pairs {
        arcs.push(TreeArc {
            a: table.idx(a)?,
            b: table.idx(b)?,
            length: Rational::new(1, 1),
            kind: ArcKind::Glue,
        });
    }
    let tree = StructuralTree {
        nodes,
        arcs,
        root: None,
    };
    tree.validate()?;

    // Tree betweenness must coincide with the table on all triples.
    let n = table.len();
    for x in 0..n {
        for z in 0..n {
            for y in 0..n {
                if table.between_idx(x, z, y) != tree.tree_between(x, z, y) {
                    return Err(Error::internal(format!(
                        "tree betweenness disagrees with the table at ({}, {}, {})",
                        table.name(x),
                        table.name(z),
                        table.name(y)
                    )));
                }
            }
        }
    }
    Ok(tree)
}

/// A subset of a tree: whole nodes, whole arcs, and arc portions reaching an
/// excluded node (open at that end).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRegion {
    pub nodes: Vec<String>,
    pub whole_arcs: Vec<(String, String)>,
    /// `(kept end, excluded end)`: the arc minus its excluded endpoint.
    pub partial_arcs: Vec<(String, String)>,
}

/// The set of tree points whose closed path from `s` avoids `avoid` —
/// reported as the nodes reachable without touching `avoid`, the arcs among
/// them, and the half-open portions of arcs leading into `avoid`.
pub fn neighborhood(tree: &StructuralTree, s: &str, avoid: &[String]) -> Result<TreeRegion> {
    let s = tree.node_idx(s)?;
    let mut avoid_idx = BTreeSet::new();
    for a in avoid {
        avoid_idx.insert(tree.node_idx(a)?);
    }
    if avoid_idx.contains(&s) {
        return Err(Error::precondition("base point lies in the avoided set"));
    }
    let mut seen = vec![false; tree.nodes.len()];
    seen[s] = true;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        for (w, _) in tree.neighbors(v) {
            if !seen[w] && !avoid_idx.contains(&w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut nodes = Vec::new();
    for (i, n) in tree.nodes.iter().enumerate() {
        if seen[i] {
            nodes.push(n.id.clone());
        }
    }
    let mut whole = Vec::new();
    let mut partial = Vec::new();
    for arc in &tree.arcs {
        match (seen[arc.a], seen[arc.b]) {
            (true, true) => {
                whole.push((tree.nodes[arc.a].id.clone(), tree.nodes[arc.b].id.clone()))
            }
            (true, false) if avoid_idx.contains(&arc.b) => {
                partial.push((tree.nodes[arc.a].id.clone(), tree.nodes[arc.b].id.clone()))
            }
            (false, true) if avoid_idx.contains(&arc.a) => {
                partial.push((tree.nodes[arc.b].id.clone(), tree.nodes[arc.a].id.clone()))
            }
            _ => {}
        }
    }
    Ok(TreeRegion {
        nodes,
        whole_arcs: whole,
        partial_arcs: partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A linear chain `n0 < n1 < ... < n{k-1}` as a betweenness table.
    pub(crate) fn chain(names: &[&str]) -> BetweennessTable {
        let ground: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        BetweennessTable::from_fn(ground, |x, z, y| (x < z && z < y) || (y < z && z < x))
    }

    #[test]
    fn three_chain_passes_all_axioms() {
        let t = chain(&["a", "b", "c"]);
        let report = t.verify_axioms();
        assert!(report.is_pretree(), "{report}");
    }

    #[test]
    fn reflexive_betweenness_violates_axiom_one() {
        let mut t = BetweennessTable::empty(vec!["a".into(), "b".into()]);
        t.set("a", "b", "a", true).unwrap();
        let report = t.verify_axioms();
        assert_eq!(
            report.axiom1,
            AxiomOutcome::Violation(vec!["a".to_string(), "b".to_string()])
        );
    }

    #[test]
    fn closed_interval_at_equal_endpoints_is_singleton() {
        let t = chain(&["a", "b", "c"]);
        let i = t.interval("a", "a", IntervalKind::Closed).unwrap();
        assert_eq!(i.members, vec!["a"]);
        let o = t.interval("a", "a", IntervalKind::Open).unwrap();
        assert!(o.members.is_empty());
    }

    #[test]
    fn open_interval_of_three_chain() {
        let t = chain(&["a", "b", "c"]);
        let i = t.interval("a", "c", IntervalKind::Open).unwrap();
        assert_eq!(i.members, vec!["b"]);
    }

    #[test]
    fn interval_order_is_anchored_at_first_endpoint() {
        let t = chain(&["a", "b", "c", "d"]);
        let i = t.interval("d", "a", IntervalKind::Closed).unwrap();
        assert_eq!(i.members, vec!["d", "c", "b", "a"]);
    }

    #[test]
    fn three_chain_classification() {
        let t = chain(&["a", "b", "c"]);
        let c = t.classify();
        assert_eq!(
            c.adjacent_pairs,
            vec![
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "c".to_string())
            ]
        );
        assert_eq!(c.terminals, vec!["a", "c"]);
        assert!(c.discrete);
    }

    #[test]
    fn assemble_three_chain_is_path_with_unit_arcs() {
        let t = chain(&["a", "b", "c"]);
        let tree = assemble_tree(&t, &BTreeMap::new(), LengthPolicy::Unit).unwrap();
        assert_eq!(tree.nodes.len(), 3);
        assert_eq!(tree.arcs.len(), 2);
        assert!(tree.arcs.iter().all(|a| a.length == Rational::new(1, 1)));
        assert!(tree.tree_between(
            tree.node_idx("a").unwrap(),
            tree.node_idx("b").unwrap(),
            tree.node_idx("c").unwrap()
        ));
    }

    #[test]
    fn assemble_refuses_non_pretree() {
        let mut t = BetweennessTable::empty(vec!["a".into(), "b".into(), "c".into()]);
        t.set("a", "b", "c", true).unwrap();
        t.set("a", "c", "b", true).unwrap(); // violates axiom 3
        match assemble_tree(&t, &BTreeMap::new(), LengthPolicy::Unit) {
            Err(Error::NotPretree(report)) => assert!(!report.is_pretree()),
            other => panic!("expected NotPretree, got {other:?}"),
        }
    }

    #[test]
    fn neighborhood_with_empty_avoid_is_whole_tree() {
        let t = chain(&["a", "b", "c"]);
        let tree = assemble_tree(&t, &BTreeMap::new(), LengthPolicy::Unit).unwrap();
        let r = neighborhood(&tree, "a", &[]).unwrap();
        assert_eq!(r.nodes, vec!["a", "b", "c"]);
        assert_eq!(r.whole_arcs.len(), 2);
        assert!(r.partial_arcs.is_empty());
    }

    #[test]
    fn neighborhood_blocked_by_middle_node() {
        let t = chain(&["a", "b", "c"]);
        let tree = assemble_tree(&t, &BTreeMap::new(), LengthPolicy::Unit).unwrap();
        let r = neighborhood(&tree, "a", &["b".to_string()]).unwrap();
        assert_eq!(r.nodes, vec!["a"]);
        assert!(r.whole_arcs.is_empty());
        assert_eq!(r.partial_arcs, vec![("a".to_string(), "b".to_string())]);
    }
}
