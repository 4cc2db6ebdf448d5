//! Cut points of a graph continuum and the tree they span.
//!
//! The cut points of a finite graph realization are its articulation
//! vertices together with every interior point of a bridge edge. Non-cut
//! points fall into equivalence classes (two points are equivalent when no
//! cut point separates them); classes plus cut points carry a betweenness
//! relation that forms a pretree, and the pretree assembles into a tree.
//!
//! Bridge interiors are uncountable, so the pretree table materializes them
//! through their grid samples, while the structural tree keeps each bridge
//! symbolic as a single arc carrying the edge's provenance. Samples exist to
//! make axiom checks exhaustive; the tree is the faithful finite quotient.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::continuum::{GraphContinuum, Point, Region, SampleGrid};
use crate::error::{Error, Result};
use crate::pretree::{ArcKind, BetweennessTable, NodeKind, StructuralTree, TreeArc, TreeNode};
use crate::Rational;

/// Cut points reported symbolically: vertices, and edges whose whole
/// interior consists of cut points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPointSet {
    pub vertex_cut_points: BTreeSet<String>,
    pub bridge_edges: BTreeSet<String>,
}

/// Exactly the articulation vertices plus all bridge-edge interiors.
pub fn cut_points(g: &GraphContinuum) -> CutPointSet {
    let mut vertex_cut_points = BTreeSet::new();
    for v in g.vertex_ids() {
        if g.is_cut_point(&Point::vertex(v.clone())) {
            vertex_cut_points.insert(v.clone());
        }
    }
    let mut bridge_edges = BTreeSet::new();
    let half = Rational::new(1, 2);
    for e in g.edge_recs() {
        if g.is_cut_point(&Point::edge(e.id.clone(), half)) {
            bridge_edges.insert(e.id.clone());
        }
    }
    CutPointSet {
        vertex_cut_points,
        bridge_edges,
    }
}

/// One equivalence class of non-cut points.
#[derive(Debug, Clone)]
pub struct EquivClass {
    /// Symbolic extent: member vertices plus whole open edge interiors.
    pub region: Region,
    /// Grid points belonging to the class, sorted.
    pub members: Vec<Point>,
    pub singleton: bool,
    /// Articulation vertices contained in the closure of the class.
    pub adjacent_cuts: BTreeSet<String>,
}

impl EquivClass {
    pub fn representative(&self) -> &Point {
        &self.members[0]
    }
}

/// Element of the cut-point pretree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PNode {
    Class(usize),
    CutVertex(String),
    BridgeSample(String, Rational),
}

impl PNode {
    pub fn id(&self) -> String {
        match self {
            PNode::Class(i) => format!("class:{i}"),
            PNode::CutVertex(v) => format!("cut:{v}"),
            PNode::BridgeSample(e, t) => format!("bridge:{e}@{t}"),
        }
    }

    pub fn is_cut(&self) -> bool {
        !matches!(self, PNode::Class(_))
    }
}

/// Everything the cut-point stage derives from one graph at one granularity.
#[derive(Debug, Clone)]
pub struct CutPointAnalysis {
    pub grid: SampleGrid,
    pub cuts: CutPointSet,
    pub classes: Vec<EquivClass>,
    /// Points at which the realization can be cut: articulation vertices,
    /// bridge samples, and the midpoints of every inter-sample gap on a
    /// bridge. Complete for interval computations at grid resolution.
    pub cut_candidates: Vec<Point>,
    /// Component id of every grid point after removing each candidate.
    candidate_components: Vec<BTreeMap<Point, usize>>,
}

impl CutPointAnalysis {
    pub fn new(g: &GraphContinuum, granularity: u32) -> Result<CutPointAnalysis> {
        let grid = SampleGrid::new(g, granularity);
        let cuts = cut_points(g);

        let mut cut_candidates: Vec<Point> = Vec::new();
        for v in &cuts.vertex_cut_points {
            cut_candidates.push(Point::vertex(v.clone()));
        }
        let k = granularity as i64;
        for e in &cuts.bridge_edges {
            for i in 1..=k {
                cut_candidates.push(Point::edge(e.clone(), Rational::new(i, k + 1)));
            }
            for i in 0..=k {
                cut_candidates.push(Point::edge(
                    e.clone(),
                    Rational::new(2 * i + 1, 2 * (k + 1)),
                ));
            }
        }
        cut_candidates.sort();
        cut_candidates.dedup();

        let mut candidate_components = Vec::new();
        for c in &cut_candidates {
            let comps = g.components_after_removal(std::slice::from_ref(c));
            let mut assignment = BTreeMap::new();
            for p in &grid.points {
                if p == c {
                    continue;
                }
                if let Some(i) = comps.iter().position(|r| r.contains(p)) {
                    assignment.insert(p.clone(), i);
                }
            }
            candidate_components.push(assignment);
        }

        // Non-cut grid points.
        let non_cut: Vec<Point> = grid
            .points
            .iter()
            .filter(|p| match p {
                Point::Vertex(v) => !cuts.vertex_cut_points.contains(v),
                Point::EdgePoint { edge, .. } => !cuts.bridge_edges.contains(edge),
            })
            .cloned()
            .collect();

        // Group into classes: equivalent iff no cut point separates.
        let mut class_of: Vec<usize> = (0..non_cut.len()).collect();
        for i in 0..non_cut.len() {
            for j in (i + 1)..non_cut.len() {
                if class_of[j] != j {
                    continue;
                }
                if class_of[i] == class_of[j] {
                    continue;
                }
                let separated = (0..cut_candidates.len()).any(|ci| {
                    let assign = &candidate_components[ci];
                    match (assign.get(&non_cut[i]), assign.get(&non_cut[j])) {
                        (Some(a), Some(b)) => a != b,
                        _ => false,
                    }
                });
                if !separated {
                    let target = class_of[i];
                    let from = class_of[j];
                    for c in class_of.iter_mut() {
                        if *c == from {
                            *c = target;
                        }
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
        for (i, p) in non_cut.iter().enumerate() {
            groups.entry(class_of[i]).or_default().push(p.clone());
        }
        let mut member_lists: Vec<Vec<Point>> = groups.into_values().collect();
        for m in member_lists.iter_mut() {
            m.sort();
        }
        member_lists.sort();

        let mut classes = Vec::new();
        for members in member_lists {
            let mut region = Region::default();
            let mut edges_present: BTreeMap<String, usize> = BTreeMap::new();
            for p in &members {
                match p {
                    Point::Vertex(v) => {
                        region.vertices.insert(v.clone());
                    }
                    Point::EdgePoint { edge, .. } => {
                        *edges_present.entry(edge.clone()).or_insert(0) += 1;
                    }
                }
            }
            for (e, count) in &edges_present {
                if *count != granularity as usize {
                    return Err(Error::internal(format!(
                        "class splits the interior of edge `{e}`: {count} of {granularity} samples"
                    )));
                }
                region.segments.insert(
                    e.clone(),
                    vec![crate::continuum::Segment {
                        lo: Rational::zero(),
                        lo_closed: false,
                        hi: Rational::new(1, 1),
                        hi_closed: false,
                    }],
                );
            }
            let mut adjacent_cuts = BTreeSet::new();
            for e in edges_present.keys() {
                let rec = g.edge(e)?;
                for vi in [rec.u, rec.v] {
                    let vid = g.vertex_id(vi).to_string();
                    if cuts.vertex_cut_points.contains(&vid) {
                        adjacent_cuts.insert(vid);
                    }
                }
            }
            let singleton = region.segments.is_empty() && region.vertices.len() == 1;
            classes.push(EquivClass {
                region,
                members,
                singleton,
                adjacent_cuts,
            });
        }

        Ok(CutPointAnalysis {
            grid,
            cuts,
            classes,
            cut_candidates,
            candidate_components,
        })
    }

    pub fn class_of_point(&self, p: &Point) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.region.contains(p) || c.members.contains(p))
    }

    /// Separation verdict for arbitrary exact points, preferring the
    /// precomputed tables and falling back to a direct component query.
    pub fn separates_point(&self, g: &GraphContinuum, c: &Point, a: &Point, b: &Point) -> bool {
        if a == c || b == c {
            return false;
        }
        if let Some(ci) = self.cut_candidates.iter().position(|x| x == c) {
            let assign = &self.candidate_components[ci];
            if let (Some(x), Some(y)) = (assign.get(a), assign.get(b)) {
                return x != y;
            }
        }
        match g.separates(std::slice::from_ref(c), a, b) {
            Ok(sep) => sep.separated,
            Err(_) => false,
        }
    }

    /// Representative continuum point of a pretree element.
    pub fn representative(&self, node: &PNode) -> Point {
        match node {
            PNode::Class(i) => self.classes[*i].representative().clone(),
            PNode::CutVertex(v) => Point::vertex(v.clone()),
            PNode::BridgeSample(e, t) => Point::edge(e.clone(), *t),
        }
    }

    /// Does `z` lie strictly between `x` and `y` in the cut-point pretree?
    ///
    /// Cut-point case: the cut point separates representatives. Class case:
    /// the half-open intervals `[a, c)` and `(c, b]` of the realization are
    /// disjoint for representatives `a`, `c`, `b`.
    pub fn between(&self, g: &GraphContinuum, x: &PNode, z: &PNode, y: &PNode) -> bool {
        if z == x || z == y {
            return false;
        }
        let a = self.representative(x);
        let b = self.representative(y);
        let c = self.representative(z);
        if z.is_cut() {
            return self.separates_point(g, &c, &a, &b);
        }
        if x == y {
            return false;
        }
        // Candidate points that could lie in both half-open intervals: every
        // cut candidate, plus the endpoints a and b themselves (which count
        // when they are cut points, i.e. when x or y is a cut element).
        let mut cands: Vec<(Point, bool)> = self
            .cut_candidates
            .iter()
            .map(|d| (d.clone(), true))
            .collect();
        cands.push((a.clone(), x.is_cut()));
        cands.push((b.clone(), y.is_cut()));
        for (d, d_is_cut) in cands {
            if d == c {
                continue;
            }
            let in_first = d == a || (d_is_cut && d != a && self.separates_point(g, &d, &a, &c));
            if !in_first {
                continue;
            }
            let in_second = d == b || (d_is_cut && d != b && self.separates_point(g, &d, &c, &b));
            if in_second {
                return false;
            }
        }
        true
    }

    /// The pretree element a grid point belongs to.
    pub fn node_of_point(&self, p: &Point) -> Result<PNode> {
        match p {
            Point::Vertex(v) if self.cuts.vertex_cut_points.contains(v) => {
                Ok(PNode::CutVertex(v.clone()))
            }
            Point::EdgePoint { edge, t } if self.cuts.bridge_edges.contains(edge) => {
                Ok(PNode::BridgeSample(edge.clone(), *t))
            }
            _ => self
                .class_of_point(p)
                .map(PNode::Class)
                .ok_or_else(|| Error::internal(format!("point {p} is outside the grid classes"))),
        }
    }

    /// Point-level betweenness: is the element of `z` strictly between the
    /// elements of `x` and `y`?
    pub fn between_points(
        &self,
        g: &GraphContinuum,
        x: &Point,
        z: &Point,
        y: &Point,
    ) -> Result<bool> {
        let (nx, nz, ny) = (
            self.node_of_point(x)?,
            self.node_of_point(z)?,
            self.node_of_point(y)?,
        );
        Ok(self.between(g, &nx, &nz, &ny))
    }

    /// Ground elements of the pretree table, in canonical order.
    pub fn pretree_nodes(&self) -> Vec<PNode> {
        let mut nodes = Vec::new();
        for i in 0..self.classes.len() {
            nodes.push(PNode::Class(i));
        }
        for v in &self.cuts.vertex_cut_points {
            nodes.push(PNode::CutVertex(v.clone()));
        }
        for e in &self.cuts.bridge_edges {
            for p in self.grid.edge_samples(e) {
                if let Point::EdgePoint { edge, t } = p {
                    nodes.push(PNode::BridgeSample(edge, t));
                }
            }
        }
        nodes
    }

    /// Deterministic symbolic description used for grid-stability checks:
    /// independent of the sampling granularity.
    pub fn symbolic_summary(&self) -> String {
        let mut out = String::new();
        out.push_str("cut-vertices:");
        for v in &self.cuts.vertex_cut_points {
            out.push(' ');
            out.push_str(v);
        }
        out.push_str("\nbridges:");
        for e in &self.cuts.bridge_edges {
            out.push(' ');
            out.push_str(e);
        }
        for class in &self.classes {
            let (vs, es) = class.region.cells();
            out.push_str("\nclass:");
            for v in &vs {
                out.push_str(&format!(" v:{v}"));
            }
            for e in &es {
                out.push_str(&format!(" e:{e}"));
            }
            if class.singleton {
                out.push_str(" (singleton)");
            }
            if !class.adjacent_cuts.is_empty() {
                out.push_str(" adj:");
                for c in &class.adjacent_cuts {
                    out.push_str(&format!(" {c}"));
                }
            }
        }
        out.push('\n');
        out
    }
}

/// The cut-point pretree: verified table plus the analysis it came from.
#[derive(Debug, Clone)]
pub struct CutPointPretree {
    pub nodes: Vec<PNode>,
    pub table: BetweennessTable,
    pub analysis: CutPointAnalysis,
}

/// Builds and verifies the cut-point pretree table.
///
/// An axiom violation here is an internal error: it indicates a bug in the
/// separation oracle, not bad input.
pub fn build_p(g: &GraphContinuum, granularity: u32) -> Result<CutPointPretree> {
    let analysis = CutPointAnalysis::new(g, granularity)?;
    let nodes = analysis.pretree_nodes();
    let ids: Vec<String> = nodes.iter().map(|n| n.id()).collect();
    let table = BetweennessTable::from_fn(ids, |x, z, y| {
        analysis.between(g, &nodes[x], &nodes[z], &nodes[y])
    });
    let report = table.verify_axioms();
    if !report.is_pretree() {
        return Err(Error::internal(format!(
            "cut-point relation failed pretree verification:\n{report}"
        )));
    }
    Ok(CutPointPretree {
        nodes,
        table,
        analysis,
    })
}

/// Pretree element corresponding to a bridge endpoint vertex: the vertex cut
/// point when the endpoint is one, otherwise the (singleton) class node.
fn endpoint_node(p: &CutPointPretree, vid: &str) -> Result<String> {
    if p.analysis.cuts.vertex_cut_points.contains(vid) {
        return Ok(format!("cut:{vid}"));
    }
    let point = Point::vertex(vid.to_string());
    match p.analysis.class_of_point(&point) {
        Some(i) => Ok(format!("class:{i}")),
        None => Err(Error::internal(format!(
            "bridge endpoint `{vid}` is in no class"
        ))),
    }
}

/// Builds the cut-point tree: one node per class and per vertex cut point,
/// one provenance arc per bridge, one glued unit arc per adjacent
/// (class, cut point) pair. Bridge arcs carry the edge length.
pub fn build_cutpoint_tree(g: &GraphContinuum, p: &CutPointPretree) -> Result<StructuralTree> {
    let mut nodes: Vec<TreeNode> = Vec::new();
    for (i, class) in p.analysis.classes.iter().enumerate() {
        let (vs, es) = class.region.cells();
        let prov: Vec<String> = vs
            .iter()
            .map(|v| format!("v:{v}"))
            .chain(es.iter().map(|e| format!("e:{e}")))
            .collect();
        nodes.push(TreeNode {
            id: format!("class:{i}"),
            kind: NodeKind::Class,
            provenance: Some(prov.join(",")),
        });
    }
    for v in &p.analysis.cuts.vertex_cut_points {
        nodes.push(TreeNode {
            id: format!("cut:{v}"),
            kind: NodeKind::CutVertex,
            provenance: Some(format!("v:{v}")),
        });
    }
    let mut tree = StructuralTree {
        nodes,
        arcs: Vec::new(),
        root: None,
    };

    for e in &p.analysis.cuts.bridge_edges {
        let rec = g.edge(e)?;
        let a = endpoint_node(p, g.vertex_id(rec.u))?;
        let b = endpoint_node(p, g.vertex_id(rec.v))?;
        let (ai, bi) = (tree.node_idx(&a)?, tree.node_idx(&b)?);
        tree.arcs.push(TreeArc {
            a: ai,
            b: bi,
            length: rec.length,
            kind: ArcKind::Bridge(e.clone()),
        });
    }
    for (i, class) in p.analysis.classes.iter().enumerate() {
        let ci = tree.node_idx(&format!("class:{i}"))?;
        for cv in &class.adjacent_cuts {
            let vi = tree.node_idx(&format!("cut:{cv}"))?;
            tree.arcs.push(TreeArc {
                a: ci,
                b: vi,
                length: Rational::new(1, 1),
                kind: ArcKind::Glue,
            });
        }
    }
    tree.validate()?;
    Ok(tree)
}

/// Length assignment strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    /// Replays the inductive schedule 1, 1/2, ..., 1/2^n over the subtree
    /// spanned by the cut structure; glued arcs outside the span get length
    /// one. Deterministic given the enumeration seed.
    Canonical,
    /// Bridge arcs keep their edge lengths; glued arcs get length one.
    Geometric,
}

/// Node kinds that anchor the metrization span. For cut-point trees these
/// are the vertex cut points; for JSJ trees the necklaces and inseparable
/// pairs; bridge arcs always belong to the span.
fn is_span_node(kind: NodeKind) -> bool {
    matches!(
        kind,
        NodeKind::CutVertex | NodeKind::Necklace | NodeKind::InseparablePair
    )
}

/// Re-assigns arc lengths without touching nodes, arcs, or betweenness.
pub fn metrize(
    tree: &StructuralTree,
    mode: MetricMode,
    seed: Option<&str>,
) -> Result<StructuralTree> {
    let mut out = tree.clone();
    match mode {
        MetricMode::Geometric => {
            for arc in out.arcs.iter_mut() {
                if matches!(arc.kind, ArcKind::Glue) {
                    arc.length = Rational::new(1, 1);
                }
            }
        }
        MetricMode::Canonical => {
            let span = span_subtree(tree);
            for arc in out.arcs.iter_mut() {
                arc.length = Rational::new(1, 1);
            }
            if let Some((relevant, span_nodes, span_arcs)) = span {
                let base = match seed {
                    Some(id) => {
                        let i = tree.node_idx(id)?;
                        if !span_nodes.contains(&i) {
                            return Err(Error::input(format!(
                                "seed `{id}` does not lie in the metrization span"
                            )));
                        }
                        i
                    }
                    // The base is an element of the enumerated set itself,
                    // not a pass-through node of the span.
                    None => *relevant
                        .iter()
                        .min_by_key(|&&i| tree.nodes[i].id.clone())
                        .expect("span is nonempty"),
                };
                assign_span_lengths(tree, &span_nodes, &span_arcs, base, &mut out)?;
            }
        }
    }
    Ok(out)
}

/// Minimal subtree containing every span node and every bridge arc.
/// Returns `(relevant nodes, span nodes, span arcs)`, or `None` when the
/// span is empty.
fn span_subtree(
    tree: &StructuralTree,
) -> Option<(BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>)> {
    let mut relevant: BTreeSet<usize> = BTreeSet::new();
    for (i, n) in tree.nodes.iter().enumerate() {
        if is_span_node(n.kind) {
            relevant.insert(i);
        }
    }
    for arc in &tree.arcs {
        if matches!(arc.kind, ArcKind::Bridge(_)) {
            relevant.insert(arc.a);
            relevant.insert(arc.b);
        }
    }
    if relevant.is_empty() {
        return None;
    }
    // Union of paths between relevant nodes: keep nodes that lie between two
    // relevant ones.
    let mut span_nodes: BTreeSet<usize> = relevant.clone();
    let rel: Vec<usize> = relevant.iter().copied().collect();
    for i in 0..rel.len() {
        for j in (i + 1)..rel.len() {
            for v in tree.path(rel[i], rel[j]) {
                span_nodes.insert(v);
            }
        }
    }
    let mut span_arcs = BTreeSet::new();
    for (ai, arc) in tree.arcs.iter().enumerate() {
        if span_nodes.contains(&arc.a) && span_nodes.contains(&arc.b) {
            // An arc is in the span when it lies on a path between relevant
            // nodes, which for a tree is equivalent to both sides of the arc
            // containing a relevant node.
            if arc_on_span_path(tree, ai, &relevant) {
                span_arcs.insert(ai);
            }
        }
    }
    // Drop nodes not incident to any span arc unless they are relevant
    // (a single relevant node with no span arcs is a degenerate span).
    let mut keep: BTreeSet<usize> = relevant.clone();
    for &ai in &span_arcs {
        keep.insert(tree.arcs[ai].a);
        keep.insert(tree.arcs[ai].b);
    }
    Some((relevant, keep, span_arcs))
}

/// Does removing this arc leave relevant nodes on both sides?
fn arc_on_span_path(tree: &StructuralTree, arc_idx: usize, relevant: &BTreeSet<usize>) -> bool {
    let arc = &tree.arcs[arc_idx];
    if matches!(arc.kind, ArcKind::Bridge(_)) {
        return true;
    }
    // Collect nodes on arc.a's side when the arc is removed.
    let mut side = vec![false; tree.nodes.len()];
    side[arc.a] = true;
    let mut stack = vec![arc.a];
    while let Some(v) = stack.pop() {
        for (w, ai) in tree.neighbors(v) {
            if ai == arc_idx || side[w] {
                continue;
            }
            side[w] = true;
            stack.push(w);
        }
    }
    let a_side = relevant.iter().any(|&r| side[r]);
    let b_side = relevant.iter().any(|&r| !side[r]);
    a_side && b_side
}

/// The inductive schedule: enumerate span leaves from the base in id order;
/// the n-th newly attached path gets total length 1/2^(n-1), split equally
/// among its arcs.
fn assign_span_lengths(
    tree: &StructuralTree,
    span_nodes: &BTreeSet<usize>,
    span_arcs: &BTreeSet<usize>,
    base: usize,
    out: &mut StructuralTree,
) -> Result<()> {
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for &ai in span_arcs {
        *degree.entry(tree.arcs[ai].a).or_insert(0) += 1;
        *degree.entry(tree.arcs[ai].b).or_insert(0) += 1;
    }
    let mut leaves: Vec<usize> = span_nodes
        .iter()
        .copied()
        .filter(|&v| v != base && degree.get(&v).copied().unwrap_or(0) <= 1)
        .collect();
    leaves.sort_by_key(|&v| tree.nodes[v].id.clone());

    let mut built: BTreeSet<usize> = BTreeSet::new();
    built.insert(base);
    let mut assigned: BTreeSet<usize> = BTreeSet::new();
    let mut piece_no: u32 = 0;
    for leaf in leaves {
        let path = tree.path(base, leaf);
        let attach_pos = path
            .iter()
            .rposition(|v| built.contains(v))
            .expect("base is always built");
        let new_nodes = &path[attach_pos..];
        if new_nodes.len() < 2 {
            continue;
        }
        let arcs = tree.path_arcs(path[attach_pos], leaf);
        let total = Rational::new(1, 1) / Rational::from_integer(2i64.pow(piece_no));
        let share = total / Rational::from_integer(arcs.len() as i64);
        for ai in &arcs {
            out.arcs[*ai].length = share;
            assigned.insert(*ai);
        }
        for v in new_nodes {
            built.insert(*v);
        }
        piece_no += 1;
    }
    for &ai in span_arcs {
        if !assigned.contains(&ai) {
            return Err(Error::internal("metrization left a span arc unassigned"));
        }
    }
    Ok(())
}

/// An incidence-preserving permutation of vertices and edges with compatible
/// lengths.
#[derive(Debug, Clone)]
pub struct Automorphism {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
    /// True when the image edge is traversed against its stored orientation.
    pub edge_flip: BTreeMap<String, bool>,
}

impl Automorphism {
    pub fn identity(g: &GraphContinuum) -> Automorphism {
        let vertex_map = g
            .vertex_ids()
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        let edge_map = g
            .edge_recs()
            .iter()
            .map(|e| (e.id.clone(), e.id.clone()))
            .collect();
        let edge_flip = g
            .edge_recs()
            .iter()
            .map(|e| (e.id.clone(), false))
            .collect();
        Automorphism {
            vertex_map,
            edge_map,
            edge_flip,
        }
    }

    /// Builds from vertex images, inferring edge images when unique. For
    /// parallel edges the identity assignment is preferred when it is among
    /// the candidates; anything still ambiguous must be pinned explicitly.
    pub fn from_vertex_images(
        g: &GraphContinuum,
        vertex_pairs: &[(String, String)],
        edge_pairs: &[(String, String)],
    ) -> Result<Automorphism> {
        let mut vertex_map: BTreeMap<String, String> = BTreeMap::new();
        for (from, to) in vertex_pairs {
            g.vertex_idx(from)?;
            g.vertex_idx(to)?;
            if vertex_map.insert(from.clone(), to.clone()).is_some() {
                return Err(Error::input(format!("vertex `{from}` mapped twice")));
            }
        }
        for v in g.vertex_ids() {
            vertex_map.entry(v.clone()).or_insert_with(|| v.clone());
        }
        let images: BTreeSet<&String> = vertex_map.values().collect();
        if images.len() != g.vertex_ids().len() {
            return Err(Error::input("vertex images are not a permutation"));
        }

        let mut edge_map: BTreeMap<String, String> = BTreeMap::new();
        for (from, to) in edge_pairs {
            g.edge_idx(from)?;
            g.edge_idx(to)?;
            edge_map.insert(from.clone(), to.clone());
        }
        let mut used: BTreeSet<String> = edge_map.values().cloned().collect();
        for e in g.edge_recs() {
            if edge_map.contains_key(&e.id) {
                continue;
            }
            let iu = &vertex_map[g.vertex_id(e.u)];
            let iv = &vertex_map[g.vertex_id(e.v)];
            let mut want: Vec<&String> = vec![iu, iv];
            want.sort();
            let candidates: Vec<&crate::continuum::EdgeRec> = g
                .edge_recs()
                .iter()
                .filter(|f| {
                    if used.contains(&f.id) || f.length != e.length {
                        return false;
                    }
                    let mut have = vec![g.vertex_id(f.u).to_string(), g.vertex_id(f.v).to_string()];
                    have.sort();
                    have == [want[0].clone(), want[1].clone()]
                })
                .collect();
            let image = match candidates.len() {
                0 => {
                    return Err(Error::input(format!(
                        "no length-compatible image for edge `{}`",
                        e.id
                    )))
                }
                1 => candidates[0].id.clone(),
                _ if candidates.iter().any(|f| f.id == e.id) => e.id.clone(),
                _ => {
                    return Err(Error::input(format!(
                        "ambiguous image for edge `{}`; specify it explicitly",
                        e.id
                    )))
                }
            };
            used.insert(image.clone());
            edge_map.insert(e.id.clone(), image);
        }

        // Validate incidence and lengths, derive orientation flips.
        let mut edge_flip = BTreeMap::new();
        for e in g.edge_recs() {
            let img = g.edge(&edge_map[&e.id])?;
            if img.length != e.length {
                return Err(Error::input(format!(
                    "edge `{}` maps to `{}` of different length",
                    e.id, img.id
                )));
            }
            let iu = &vertex_map[g.vertex_id(e.u)];
            let iv = &vertex_map[g.vertex_id(e.v)];
            let (ju, jv) = (g.vertex_id(img.u), g.vertex_id(img.v));
            let flip = if iu == ju && iv == jv {
                false
            } else if iu == jv && iv == ju {
                // Loops traverse identically.
                img.u != img.v
            } else {
                return Err(Error::input(format!(
                    "edge `{}` image `{}` does not preserve incidence",
                    e.id, img.id
                )));
            };
            edge_flip.insert(e.id.clone(), flip);
        }
        Ok(Automorphism {
            vertex_map,
            edge_map,
            edge_flip,
        })
    }

    /// Parses `pv <from> <to>` / `pe <from> <to>` lines.
    pub fn parse(g: &GraphContinuum, text: &str) -> Result<Automorphism> {
        let mut vp = Vec::new();
        let mut ep = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match (toks[0], toks.len()) {
                ("pv", 3) => vp.push((toks[1].to_string(), toks[2].to_string())),
                ("pe", 3) => ep.push((toks[1].to_string(), toks[2].to_string())),
                _ => {
                    return Err(Error::input(format!(
                        "line {}: expected `pv <from> <to>` or `pe <from> <to>`",
                        lineno + 1
                    )))
                }
            }
        }
        Automorphism::from_vertex_images(g, &vp, &ep)
    }

    pub fn apply(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::vertex(self.vertex_map[v].clone()),
            Point::EdgePoint { edge, t } => {
                let img = self.edge_map[edge].clone();
                let t = if self.edge_flip[edge] {
                    Rational::new(1, 1) - *t
                } else {
                    *t
                };
                Point::edge(img, t)
            }
        }
    }
}

/// Node images on the cut-point tree induced by a graph automorphism:
/// classes map to classes, cut vertices to cut vertices.
pub fn induced_node_images(
    p: &CutPointPretree,
    tree: &StructuralTree,
    auto: &Automorphism,
) -> Result<BTreeMap<String, String>> {
    let mut images = BTreeMap::new();
    for node in &tree.nodes {
        let image_id = match node.kind {
            NodeKind::CutVertex => {
                let v = node.id.strip_prefix("cut:").unwrap();
                format!("cut:{}", auto.vertex_map[v])
            }
            NodeKind::Class => {
                let i: usize = node.id.strip_prefix("class:").unwrap().parse().unwrap();
                let rep = p.analysis.classes[i].representative();
                let img = auto.apply(rep);
                match p.analysis.class_of_point(&img) {
                    Some(j) => format!("class:{j}"),
                    None => {
                        return Err(Error::input(format!(
                            "automorphism does not permute classes: image of {rep} is in none"
                        )))
                    }
                }
            }
            _ => node.id.clone(),
        };
        images.insert(node.id.clone(), image_id);
    }
    let distinct: BTreeSet<&String> = images.values().collect();
    if distinct.len() != images.len() {
        return Err(Error::input("induced node map is not a bijection"));
    }
    Ok(images)
}
