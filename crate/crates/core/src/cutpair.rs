//! Cut pairs of a continuum without cut points, and the tree they span.
//!
//! For a 2-connected graph realization the separating structure is carried
//! by pairs of points. Maximal cyclic subsets with more than two elements
//! (necklaces), maximal inseparable subsets, and inseparable cut pairs
//! together form a collection carrying a betweenness relation; the verified
//! relation assembles into the JSJ tree of the continuum.
//!
//! Everything is computed from the separation oracle over a sample grid,
//! with symbolic cell-level reporting. Cut positions are drawn from the grid
//! plus the midpoint of every inter-sample gap, which by edge-interior
//! uniformity exhausts all separation behaviors a real point can have
//! relative to grid points.

use std::collections::{BTreeMap, BTreeSet};

use crate::continuum::{GraphContinuum, Point, Region, SampleGrid};
use crate::error::{Error, Result};
use crate::pretree::{assemble_tree, BetweennessTable, LengthPolicy, NodeKind, StructuralTree};
use crate::Rational;

/// A cell of the realization: a vertex or a whole closed edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cell {
    Vertex(String),
    Edge(String),
}

impl Cell {
    pub fn id(&self) -> String {
        match self {
            Cell::Vertex(v) => format!("v:{v}"),
            Cell::Edge(e) => format!("e:{e}"),
        }
    }
}

/// Precomputed separation structure of a cut-point-free continuum: every
/// candidate cut pair together with the component assignment of all grid
/// points under its removal.
#[derive(Debug, Clone)]
pub struct CutStructure {
    pub grid: SampleGrid,
    /// Grid points plus inter-sample gap midpoints.
    pub candidates: Vec<Point>,
    /// Candidate pairs whose removal disconnects the realization, sorted.
    pub cut_pairs: Vec<(Point, Point)>,
    pair_set: BTreeSet<(Point, Point)>,
    pair_components: Vec<PairComponents>,
}

#[derive(Debug, Clone)]
struct PairComponents {
    count: usize,
    assignment: BTreeMap<Point, usize>,
}

fn ordered(p: &Point, q: &Point) -> (Point, Point) {
    if p <= q {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    }
}

impl CutStructure {
    pub fn new(g: &GraphContinuum, granularity: u32) -> Result<CutStructure> {
        let cuts = crate::cutpoint::cut_points(g);
        if !cuts.vertex_cut_points.is_empty() || !cuts.bridge_edges.is_empty() {
            return Err(Error::precondition(format!(
                "continuum has cut points (vertices: {:?}, bridges: {:?})",
                cuts.vertex_cut_points, cuts.bridge_edges
            )));
        }
        let grid = SampleGrid::new(g, granularity);
        let candidates = grid.with_gap_midpoints(g);
        let mut cut_pairs = Vec::new();
        let mut pair_components = Vec::new();
        for i in 0..candidates.len() {
            for j in (i + 1)..candidates.len() {
                let (p, q) = (&candidates[i], &candidates[j]);
                let removed = [p.clone(), q.clone()];
                let comps = g.components_after_removal(&removed);
                if comps.len() < 2 {
                    continue;
                }
                let mut assignment = BTreeMap::new();
                for x in &grid.points {
                    if x == p || x == q {
                        continue;
                    }
                    if let Some(c) = comps.iter().position(|r| r.contains(x)) {
                        assignment.insert(x.clone(), c);
                    }
                }
                cut_pairs.push((p.clone(), q.clone()));
                pair_components.push(PairComponents {
                    count: comps.len(),
                    assignment,
                });
            }
        }
        let pair_set = cut_pairs.iter().cloned().collect();
        Ok(CutStructure {
            grid,
            candidates,
            cut_pairs,
            pair_set,
            pair_components,
        })
    }

    pub fn is_cut_pair(&self, p: &Point, q: &Point) -> bool {
        self.pair_set.contains(&ordered(p, q))
    }

    pub fn pair_index(&self, p: &Point, q: &Point) -> Option<usize> {
        let key = ordered(p, q);
        self.cut_pairs.iter().position(|x| *x == key)
    }

    pub fn pair_component_count(&self, idx: usize) -> usize {
        self.pair_components[idx].count
    }

    /// Does the `idx`-th cut pair separate grid points `x` and `y`?
    pub fn pair_separates(&self, idx: usize, x: &Point, y: &Point) -> bool {
        let pc = &self.pair_components[idx];
        match (pc.assignment.get(x), pc.assignment.get(y)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        }
    }

    /// Is the (unordered) grid pair separated by some disjoint cut pair?
    pub fn separable(&self, x: &Point, y: &Point) -> bool {
        self.separating_pair(x, y).is_some()
    }

    /// A cut pair separating `x` from `y`, if any.
    pub fn separating_pair(&self, x: &Point, y: &Point) -> Option<usize> {
        (0..self.cut_pairs.len()).find(|&i| {
            let (p, q) = &self.cut_pairs[i];
            p != x && p != y && q != x && q != y && self.pair_separates(i, x, y)
        })
    }

    /// Grid-only cut pairs (reported externally; gap-midpoint pairs exist
    /// solely as separation witnesses).
    pub fn grid_cut_pairs(&self) -> Vec<(Point, Point)> {
        let grid: BTreeSet<&Point> = self.grid.points.iter().collect();
        self.cut_pairs
            .iter()
            .filter(|(p, q)| grid.contains(p) && grid.contains(q))
            .cloned()
            .collect()
    }
}

/// Result of a cyclic-decomposition query.
#[derive(Debug, Clone)]
pub enum CyclicKind {
    /// Pairs are cyclic by definition; no decomposition is produced.
    PairFiat,
    Decomposed(CyclicDecomposition),
}

/// A circular chain of regions meeting consecutively in single stations.
#[derive(Debug, Clone)]
pub struct CyclicDecomposition {
    pub stations: Vec<Point>,
    /// `pieces[i]` joins `stations[i]` to `stations[(i+1) % n]`.
    pub pieces: Vec<Region>,
}

/// Searches for a cyclic decomposition of the realization by the finite
/// point set `s`.
///
/// For two points the answer is the fiat marker exactly when they form a cut
/// pair. For three or more, the decomposition (unique up to rotation and
/// reflection; canonicalized lexicographically) is returned when it exists.
pub fn cyclic_decomposition(
    g: &GraphContinuum,
    cs: &CutStructure,
    s: &[Point],
) -> Result<Option<CyclicKind>> {
    let set: BTreeSet<Point> = s.iter().cloned().collect();
    if set.len() < 2 {
        return Err(Error::precondition(
            "cyclic decomposition needs at least two points",
        ));
    }
    if set.len() == 2 {
        let pts: Vec<&Point> = set.iter().collect();
        let is_pair =
            cs.is_cut_pair(pts[0], pts[1]) || g.is_cut_pair(pts[0], pts[1]).unwrap_or(false);
        return Ok(if is_pair {
            Some(CyclicKind::PairFiat)
        } else {
            None
        });
    }
    let stations: Vec<Point> = set.into_iter().collect();
    match station_cycle(g, &stations)? {
        None => Ok(None),
        Some(cycle) => {
            let decomposition = build_decomposition(g, &cycle)?;
            Ok(Some(CyclicKind::Decomposed(decomposition)))
        }
    }
}

/// Connectivity pattern of the complement of a finite station set: when every
/// component touches exactly two stations and the touch graph is a single
/// cycle through all stations, returns the stations in (canonical) cyclic
/// order.
fn station_cycle(g: &GraphContinuum, stations: &[Point]) -> Result<Option<Vec<Point>>> {
    let comps = g.components_after_removal(stations);
    let mut touch: BTreeMap<Point, BTreeSet<Point>> = BTreeMap::new();
    for st in stations {
        touch.insert(st.clone(), BTreeSet::new());
    }
    for comp in &comps {
        let closure = comp.closure(g);
        let boundary: Vec<&Point> = stations.iter().filter(|s| closure.contains(s)).collect();
        if boundary.len() != 2 {
            // A component clinging to one station would make it a cut point;
            // three or more stations on one component rule out cyclicity.
            return Ok(None);
        }
        touch
            .get_mut(boundary[0])
            .unwrap()
            .insert(boundary[1].clone());
        touch
            .get_mut(boundary[1])
            .unwrap()
            .insert(boundary[0].clone());
    }
    if touch.values().any(|n| n.len() != 2) {
        return Ok(None);
    }
    // Walk the 2-regular touch graph; it must be one cycle.
    let start: Point = touch.keys().next().unwrap().clone();
    let mut order: Vec<Point> = vec![start.clone()];
    let mut prev: Option<Point> = None;
    let mut cur = start.clone();
    loop {
        let nbrs = &touch[&cur];
        let next = nbrs
            .iter()
            .find(|n| prev.as_ref() != Some(*n))
            .cloned()
            .unwrap_or_else(|| nbrs.iter().next().cloned().unwrap());
        if next == start {
            break;
        }
        order.push(next.clone());
        prev = Some(cur);
        cur = next;
        if order.len() > stations.len() {
            return Ok(None);
        }
    }
    if order.len() != stations.len() {
        return Ok(None);
    }
    Ok(Some(canonical_cycle(order)))
}

/// Lexicographically least rotation/reflection of a cyclic sequence.
fn canonical_cycle<T: Clone + Ord>(cycle: Vec<T>) -> Vec<T> {
    let n = cycle.len();
    let mut best: Option<Vec<T>> = None;
    for rot in 0..n {
        for flip in [false, true] {
            let cand: Vec<T> = (0..n)
                .map(|i| {
                    let idx = if flip {
                        (rot + n - i) % n
                    } else {
                        (rot + i) % n
                    };
                    cycle[idx].clone()
                })
                .collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

fn build_decomposition(g: &GraphContinuum, cycle: &[Point]) -> Result<CyclicDecomposition> {
    let comps = g.components_after_removal(cycle);
    let n = cycle.len();
    let mut pieces: Vec<Region> = vec![Region::default(); n];
    for comp in &comps {
        let closure = comp.closure(g);
        let boundary: Vec<usize> = (0..n).filter(|&i| closure.contains(&cycle[i])).collect();
        if boundary.len() != 2 {
            return Err(Error::internal(
                "decomposition component lost its station pair",
            ));
        }
        let (a, b) = (boundary[0], boundary[1]);
        let slot = if (a + 1) % n == b {
            a
        } else if (b + 1) % n == a {
            b
        } else {
            return Err(Error::internal("component joins nonconsecutive stations"));
        };
        pieces[slot].union_with(&closure);
    }
    for (i, piece) in pieces.iter_mut().enumerate() {
        piece.add_point(&cycle[i]);
        piece.add_point(&cycle[(i + 1) % n]);
    }
    // Validate the three defining properties.
    for i in 0..n {
        let j = (i + 1) % n;
        let inter = pieces[i].intersect(&pieces[j]);
        if inter != Region::from_points(std::slice::from_ref(&cycle[j])) {
            return Err(Error::internal(format!(
                "consecutive pieces {i},{j} meet in more than their station"
            )));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let d = (n + j - i) % n;
            if d > 1 && d < n - 1 && !pieces[i].intersect(&pieces[j]).is_empty() {
                return Err(Error::internal(format!(
                    "nonconsecutive pieces {i},{j} intersect"
                )));
            }
        }
    }
    let mut union = Region::default();
    for p in &pieces {
        union.union_with(p);
    }
    if union != g.full_region() {
        return Err(Error::internal(
            "decomposition pieces do not cover the space",
        ));
    }
    Ok(CyclicDecomposition {
        stations: cycle.to_vec(),
        pieces,
    })
}

/// The closure of an equivalence class of the complement of a necklace.
#[derive(Debug, Clone)]
pub struct Gap {
    pub region: Region,
    /// The two sides, as closed regions. For graph continua both are
    /// singleton vertices.
    pub sides: (Region, Region),
    /// The two side vertices.
    pub side_vertices: (String, String),
    pub fat: bool,
    /// Grid points inside the gap (excluding the sides).
    pub members: Vec<Point>,
}

/// A maximal cyclic subset with more than two elements, as cells in cyclic
/// order, plus its gaps.
#[derive(Debug, Clone)]
pub struct Necklace {
    pub cells: Vec<Cell>,
    /// Grid points of the necklace, sorted.
    pub members: Vec<Point>,
    pub gaps: Vec<Gap>,
}

impl Necklace {
    pub fn vertex_cells(&self) -> BTreeSet<String> {
        self.cells
            .iter()
            .filter_map(|c| match c {
                Cell::Vertex(v) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn edge_cells(&self) -> BTreeSet<String> {
        self.cells
            .iter()
            .filter_map(|c| match c {
                Cell::Edge(e) => Some(e.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn cell_summary(&self) -> String {
        self.cells
            .iter()
            .map(|c| c.id())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// All necklaces of the continuum.
///
/// The maximal cyclic subset containing a separable cut pair is unique, so
/// each necklace is the closure of one such pair under "forms a cut pair
/// with every member"; the closure is order-independent.
pub fn necklaces(g: &GraphContinuum, cs: &CutStructure) -> Result<Vec<Necklace>> {
    let grid_pairs = cs.grid_cut_pairs();
    let mut seen: BTreeSet<Vec<Point>> = BTreeSet::new();
    let mut out = Vec::new();
    for (p, q) in &grid_pairs {
        if !cs.separable(p, q) {
            continue;
        }
        let members = grow_cyclic(cs, p, q);
        if seen.contains(&members) {
            continue;
        }
        seen.insert(members.clone());
        let cells = member_cells(g, cs, &members)?;
        let ordered_cells = order_cells(g, &members)?;
        debug_assert_eq!(
            ordered_cells.iter().cloned().collect::<BTreeSet<_>>(),
            cells.iter().cloned().collect::<BTreeSet<_>>()
        );
        let gaps = compute_gaps(g, cs, &ordered_cells)?;
        out.push(Necklace {
            cells: ordered_cells,
            members,
            gaps,
        });
    }
    out.sort_by_key(|n| n.members.clone());
    Ok(out)
}

/// Greedy closure of a separable cut pair under pairwise cut-pair formation.
fn grow_cyclic(cs: &CutStructure, p: &Point, q: &Point) -> Vec<Point> {
    let mut members: BTreeSet<Point> = BTreeSet::new();
    members.insert(p.clone());
    members.insert(q.clone());
    loop {
        let mut added = false;
        for x in &cs.grid.points {
            if members.contains(x) {
                continue;
            }
            if members.iter().all(|m| cs.is_cut_pair(x, m)) {
                members.insert(x.clone());
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    members.into_iter().collect()
}

/// Converts a grid point set into whole cells, validating cell alignment:
/// an edge belongs exactly when all its interior samples do, and then both
/// endpoints must belong as well.
fn member_cells(g: &GraphContinuum, cs: &CutStructure, members: &[Point]) -> Result<Vec<Cell>> {
    let set: BTreeSet<&Point> = members.iter().collect();
    let mut cells = Vec::new();
    for v in g.vertex_ids() {
        if set.contains(&Point::vertex(v.clone())) {
            cells.push(Cell::Vertex(v.clone()));
        }
    }
    for e in g.edge_recs() {
        let samples = cs.grid.edge_samples(&e.id);
        let inside = samples.iter().filter(|s| set.contains(s)).count();
        if inside == 0 {
            continue;
        }
        if inside != samples.len() {
            return Err(Error::internal(format!(
                "necklace splits the interior of edge `{}`",
                e.id
            )));
        }
        for vi in [e.u, e.v] {
            if !set.contains(&Point::vertex(g.vertex_id(vi).to_string())) {
                return Err(Error::internal(format!(
                    "necklace contains edge `{}` but not its endpoint `{}`",
                    e.id,
                    g.vertex_id(vi)
                )));
            }
        }
        cells.push(Cell::Edge(e.id.clone()));
    }
    Ok(cells)
}

/// Recovers the cyclic cell order of a necklace from the decomposition of
/// its full sampled station set.
fn order_cells(g: &GraphContinuum, members: &[Point]) -> Result<Vec<Cell>> {
    if members.len() < 3 {
        return Err(Error::internal(
            "necklace has fewer than three sampled stations",
        ));
    }
    let cycle = station_cycle(g, members)?
        .ok_or_else(|| Error::internal("necklace stations admit no cyclic decomposition"))?;
    let mut cells: Vec<Cell> = Vec::new();
    for p in &cycle {
        let cell = match p {
            Point::Vertex(v) => Cell::Vertex(v.clone()),
            Point::EdgePoint { edge, .. } => Cell::Edge(edge.clone()),
        };
        if cells.last() == Some(&cell) {
            continue;
        }
        cells.push(cell);
    }
    while cells.len() > 1 && cells.first() == cells.last() {
        cells.pop();
    }
    Ok(canonical_cycle(cells))
}

/// Gaps of a necklace: components of the complement grouped by their
/// boundary pair (the equivalence classes of the complement under "lands in
/// the same piece of every cyclic decomposition").
fn compute_gaps(g: &GraphContinuum, cs: &CutStructure, cells: &[Cell]) -> Result<Vec<Gap>> {
    let mut vs = BTreeSet::new();
    let mut es = BTreeSet::new();
    for c in cells {
        match c {
            Cell::Vertex(v) => {
                vs.insert(v.clone());
            }
            Cell::Edge(e) => {
                es.insert(e.clone());
            }
        }
    }
    let comps = g.cell_complement_components(&vs, &es);
    let mut by_boundary: BTreeMap<(String, String), Vec<Region>> = BTreeMap::new();
    for comp in comps {
        let closure = comp.closure(g);
        let boundary: Vec<String> = vs
            .iter()
            .filter(|v| closure.vertices.contains(*v))
            .cloned()
            .collect();
        if boundary.len() != 2 {
            return Err(Error::internal(format!(
                "gap component touches {} necklace vertices",
                boundary.len()
            )));
        }
        by_boundary
            .entry((boundary[0].clone(), boundary[1].clone()))
            .or_default()
            .push(comp);
    }
    let mut gaps = Vec::new();
    for ((a, b), comps) in by_boundary {
        let mut region = Region::default();
        for c in &comps {
            region.union_with(c);
        }
        let members: Vec<Point> = cs
            .grid
            .points
            .iter()
            .filter(|p| region.contains(p))
            .cloned()
            .collect();
        let region = region.closure(g);
        let side_a = Region::from_points(&[Point::vertex(a.clone())]);
        let side_b = Region::from_points(&[Point::vertex(b.clone())]);
        let fat = side_a.intersect(&side_b).is_empty();
        gaps.push(Gap {
            region,
            sides: (side_a, side_b),
            side_vertices: (a, b),
            fat,
            members,
        });
    }
    Ok(gaps)
}

/// Maximal inseparable subsets (with at least two elements) and inseparable
/// cut pairs, computed over grid points.
#[derive(Debug, Clone)]
pub struct InseparableStructure {
    pub max_inseparable: Vec<Vec<Point>>,
    pub cut_pairs: Vec<(Point, Point)>,
}

pub fn inseparable_structure(cs: &CutStructure) -> InseparableStructure {
    let pts = &cs.grid.points;
    let n = pts.len();
    let mut insep = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if !cs.separable(&pts[i], &pts[j]) {
                insep[i][j] = true;
                insep[j][i] = true;
            }
        }
    }
    let mut cut_pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if insep[i][j] && cs.is_cut_pair(&pts[i], &pts[j]) {
                cut_pairs.push((pts[i].clone(), pts[j].clone()));
            }
        }
    }
    // Maximal cliques of the inseparability graph, restricted to points with
    // at least one inseparable partner.
    let active: Vec<usize> = (0..n).filter(|&i| (0..n).any(|j| insep[i][j])).collect();
    let mut cliques: Vec<BTreeSet<usize>> = Vec::new();
    bron_kerbosch(
        &insep,
        BTreeSet::new(),
        active.iter().copied().collect(),
        BTreeSet::new(),
        &mut cliques,
    );
    let mut max_inseparable: Vec<Vec<Point>> = cliques
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| c.into_iter().map(|i| pts[i].clone()).collect::<Vec<_>>())
        .collect();
    max_inseparable.sort();
    max_inseparable.dedup();
    InseparableStructure {
        max_inseparable,
        cut_pairs,
    }
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: BTreeSet<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<BTreeSet<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let candidates: Vec<usize> = p.iter().copied().collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.insert(v);
        let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
        let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.remove(&v);
        x.insert(v);
    }
}

/// Is the realization a circle? True exactly when every sampled pair of
/// points is separated by some sampled cut pair. Cross-checked against the
/// graph-theoretic characterization (connected, every vertex of degree two).
pub fn is_circle(g: &GraphContinuum, cs: &CutStructure) -> Result<bool> {
    let pts = &cs.grid.points;
    let mut oracle = true;
    'outer: for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if !cs.separable(&pts[i], &pts[j]) {
                oracle = false;
                break 'outer;
            }
        }
    }
    let structural = (0..g.vertex_ids().len()).all(|v| g.degree(v) == 2);
    if oracle != structural {
        return Err(Error::internal(format!(
            "circle characterization disagrees with graph structure (oracle {oracle}, structural {structural})"
        )));
    }
    Ok(oracle)
}

/// Equal-spacing circular layout of a necklace: vertex stations receive
/// rational angles in [0,1); edge cells and fat gaps occupy the arcs between
/// them.
#[derive(Debug, Clone)]
pub struct CircularLayout {
    /// Angle of each vertex station.
    pub station_angles: Vec<(String, Rational)>,
    /// `(edge id, from angle, to angle, reversed)` for each edge cell.
    pub edge_arcs: Vec<(String, Rational, Rational, bool)>,
    /// `(side pair, from angle, to angle)` for each gap.
    pub gap_arcs: Vec<((String, String), Rational, Rational)>,
    /// Angle assigned to every grid point of the continuum.
    pub point_angle: BTreeMap<Point, Rational>,
}

pub fn circle_map(g: &GraphContinuum, cs: &CutStructure, n: &Necklace) -> Result<CircularLayout> {
    // Rotate the cell cycle to start at a vertex cell.
    let start = n
        .cells
        .iter()
        .position(|c| matches!(c, Cell::Vertex(_)))
        .ok_or_else(|| Error::internal("necklace has no vertex station"))?;
    let k = n.cells.len();
    let cells: Vec<Cell> = (0..k).map(|i| n.cells[(start + i) % k].clone()).collect();

    // Pieces: edge cells and gap slots between consecutive vertex stations.
    enum Piece {
        Edge(String, String), // edge id, entering vertex
        Gap(String, String),  // the two side vertices in traversal order
    }
    let mut pieces: Vec<Piece> = Vec::new();
    let mut vertex_order: Vec<String> = Vec::new();
    let mut i = 0;
    while i < cells.len() {
        let v = match &cells[i] {
            Cell::Vertex(v) => v.clone(),
            Cell::Edge(_) => return Err(Error::internal("cell cycle must alternate at vertices")),
        };
        vertex_order.push(v.clone());
        let next = &cells[(i + 1) % cells.len()];
        match next {
            Cell::Edge(e) => {
                pieces.push(Piece::Edge(e.clone(), v));
                i += 2;
            }
            Cell::Vertex(w) => {
                pieces.push(Piece::Gap(v, w.clone()));
                i += 1;
            }
        }
    }
    let m = pieces.len() as i64;
    let mut station_angles = Vec::new();
    let mut edge_arcs = Vec::new();
    let mut gap_arcs = Vec::new();
    let mut point_angle: BTreeMap<Point, Rational> = BTreeMap::new();
    for (idx, v) in vertex_order.iter().enumerate() {
        let angle = Rational::new(idx as i64, m);
        station_angles.push((v.clone(), angle));
        point_angle.insert(Point::vertex(v.clone()), angle);
    }
    for (idx, piece) in pieces.iter().enumerate() {
        let lo = Rational::new(idx as i64, m);
        let hi = Rational::new(idx as i64 + 1, m);
        match piece {
            Piece::Edge(e, entering) => {
                let rec = g.edge(e)?;
                let reversed = g.vertex_id(rec.u) != entering;
                edge_arcs.push((e.clone(), lo, hi, reversed));
                for p in cs.grid.edge_samples(e) {
                    if let Point::EdgePoint { t, .. } = &p {
                        let t = if reversed {
                            Rational::new(1, 1) - *t
                        } else {
                            *t
                        };
                        point_angle.insert(p.clone(), lo + t * (hi - lo));
                    }
                }
            }
            Piece::Gap(a, b) => {
                let gap = n
                    .gaps
                    .iter()
                    .find(|gap| {
                        let (ga, gb) = &gap.side_vertices;
                        (ga == a && gb == b) || (ga == b && gb == a)
                    })
                    .ok_or_else(|| {
                        Error::internal(format!("no gap between consecutive stations {a},{b}"))
                    })?;
                gap_arcs.push(((a.clone(), b.clone()), lo, hi));
                let mid = (lo + hi) / Rational::new(2, 1);
                for p in &gap.members {
                    point_angle.insert(p.clone(), mid);
                }
            }
        }
    }
    // Every gap must have been placed.
    if gap_arcs.len() != n.gaps.len() {
        return Err(Error::internal(
            "a gap's sides are not consecutive necklace stations",
        ));
    }
    Ok(CircularLayout {
        station_angles,
        edge_arcs,
        gap_arcs,
        point_angle,
    })
}

/// One element of the collection carrying the cut-pair betweenness relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RElem {
    Necklace(usize),
    InseparablePair(usize),
    MaxInseparable(usize),
}

impl RElem {
    pub fn kind(&self) -> NodeKind {
        match self {
            RElem::Necklace(_) => NodeKind::Necklace,
            RElem::InseparablePair(_) => NodeKind::InseparablePair,
            RElem::MaxInseparable(_) => NodeKind::MaxInseparable,
        }
    }
}

/// Necklaces, maximal inseparable subsets, and inseparable cut pairs of a
/// cut-point-free continuum, with the verified betweenness table over them.
#[derive(Debug, Clone)]
pub struct RSystem {
    pub cs: CutStructure,
    pub necklaces: Vec<Necklace>,
    pub inseparable: InseparableStructure,
    pub elements: Vec<RElem>,
    /// Grid point set of each element.
    pub points: Vec<BTreeSet<Point>>,
    pub ids: Vec<String>,
    pub table: BetweennessTable,
}

impl RSystem {
    /// Indices of elements whose point set contains the given point.
    pub fn elements_containing(&self, p: &Point) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| self.points[i].contains(p))
            .collect()
    }

    /// Symbolic description independent of grid granularity.
    pub fn symbolic_summary(&self) -> String {
        let mut out = String::new();
        for n in &self.necklaces {
            out.push_str(&format!("necklace: {}\n", n.cell_summary()));
            for gap in &n.gaps {
                let (a, b) = &gap.side_vertices;
                out.push_str(&format!("  gap sides {a},{b} fat={}\n", gap.fat));
            }
        }
        for (p, q) in &self.inseparable.cut_pairs {
            out.push_str(&format!("pair: {p} {q}\n"));
        }
        for m in &self.inseparable.max_inseparable {
            let pts: Vec<String> = m.iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("maxinsep: {}\n", pts.join(" ")));
        }
        out
    }
}

/// Builds the collection and its betweenness table, then verifies the
/// pretree axioms and the structural laws the collection must satisfy
/// (pairwise intersection bound, mutual non-separation, and that every edge
/// meets some element). Violations are internal errors.
pub fn build_r(g: &GraphContinuum, granularity: u32) -> Result<RSystem> {
    let cs = CutStructure::new(g, granularity)?;
    let necklaces = necklaces(g, &cs)?;
    let inseparable = inseparable_structure(&cs);

    let mut elements: Vec<RElem> = Vec::new();
    let mut points: Vec<BTreeSet<Point>> = Vec::new();
    for (i, n) in necklaces.iter().enumerate() {
        elements.push(RElem::Necklace(i));
        points.push(n.members.iter().cloned().collect());
    }
    for (i, (p, q)) in inseparable.cut_pairs.iter().enumerate() {
        elements.push(RElem::InseparablePair(i));
        points.push([p.clone(), q.clone()].into_iter().collect());
    }
    for (i, m) in inseparable.max_inseparable.iter().enumerate() {
        let set: BTreeSet<Point> = m.iter().cloned().collect();
        // A maximal inseparable set that coincides with an inseparable cut
        // pair is the same subset of the continuum; keep one element.
        if points.contains(&set) {
            continue;
        }
        elements.push(RElem::MaxInseparable(i));
        points.push(set);
    }

    // Component assignment under removal of each element's point set.
    let mut elem_components: Vec<Option<(usize, BTreeMap<Point, usize>)>> = Vec::new();
    for (i, elem) in elements.iter().enumerate() {
        match elem {
            RElem::InseparablePair(_) => elem_components.push(None),
            RElem::Necklace(ni) => {
                let n = &necklaces[*ni];
                let comps = g.cell_complement_components(&n.vertex_cells(), &n.edge_cells());
                elem_components.push(Some(component_assignment(&cs, comps)));
            }
            RElem::MaxInseparable(_) => {
                let removed: Vec<Point> = points[i].iter().cloned().collect();
                let comps = g.components_after_removal(&removed);
                elem_components.push(Some(component_assignment(&cs, comps)));
            }
        }
    }

    let core = RCore {
        cs: &cs,
        elements: &elements,
        points: &points,
        elem_components: &elem_components,
    };
    let n = elements.len();
    let mut ids = Vec::new();
    for e in &elements {
        ids.push(match e {
            RElem::Necklace(i) => format!("necklace:{i}"),
            RElem::InseparablePair(i) => {
                let (p, q) = &inseparable.cut_pairs[*i];
                format!("pair:{p}+{q}")
            }
            RElem::MaxInseparable(i) => format!("maxinsep:{i}"),
        });
    }
    let table = BetweennessTable::from_fn(ids.clone(), |x, z, y| core.between(x, z, y));

    let report = table.verify_axioms();
    if !report.is_pretree() {
        return Err(Error::internal(format!(
            "cut-pair relation failed pretree verification:\n{report}"
        )));
    }

    // Pairwise intersection bound: distinct elements share fewer than three
    // points, and a two-point intersection is an inseparable cut pair.
    for i in 0..n {
        for j in (i + 1)..n {
            let inter: Vec<&Point> = points[i].intersection(&points[j]).collect();
            if inter.len() >= 3 {
                return Err(Error::internal(format!(
                    "elements {} and {} share {} points",
                    ids[i],
                    ids[j],
                    inter.len()
                )));
            }
            if inter.len() == 2 {
                let (p, q) = (inter[0], inter[1]);
                if !(cs.is_cut_pair(p, q) && !cs.separable(p, q)) {
                    return Err(Error::internal(format!(
                        "two-point intersection of {} and {} is not an inseparable cut pair",
                        ids[i], ids[j]
                    )));
                }
            }
        }
    }
    // Mutual non-separation.
    for i in 0..n {
        for j in 0..n {
            if i != j && core.separates_points_of(i, j) {
                return Err(Error::internal(format!(
                    "element {} separates points of {}",
                    ids[i], ids[j]
                )));
            }
        }
    }
    // Every nondegenerate subcontinuum meets the collection; closed edges
    // generate them all.
    for e in g.edge_recs() {
        let mut edge_pts: Vec<Point> = cs.grid.edge_samples(&e.id);
        edge_pts.push(Point::vertex(g.vertex_id(e.u).to_string()));
        edge_pts.push(Point::vertex(g.vertex_id(e.v).to_string()));
        let meets = (0..n).any(|i| edge_pts.iter().any(|p| points[i].contains(p)));
        if !meets {
            return Err(Error::internal(format!(
                "edge `{}` meets no element of the collection",
                e.id
            )));
        }
    }

    Ok(RSystem {
        cs,
        necklaces,
        inseparable,
        elements,
        points,
        ids,
        table,
    })
}

fn component_assignment(cs: &CutStructure, comps: Vec<Region>) -> (usize, BTreeMap<Point, usize>) {
    let mut assignment = BTreeMap::new();
    for p in &cs.grid.points {
        if let Some(i) = comps.iter().position(|r| r.contains(p)) {
            assignment.insert(p.clone(), i);
        }
    }
    (comps.len(), assignment)
}

/// Internal view used while constructing the betweenness table.
struct RCore<'a> {
    cs: &'a CutStructure,
    elements: &'a [RElem],
    points: &'a [BTreeSet<Point>],
    elem_components: &'a [Option<(usize, BTreeMap<Point, usize>)>],
}

impl RCore<'_> {
    fn is_pair(&self, i: usize) -> bool {
        matches!(self.elements[i], RElem::InseparablePair(_))
    }

    /// Does element `s` separate a point of `r - s` from a point of `t - s`?
    fn separates(&self, s: usize, r: usize, t: usize) -> bool {
        let r_pts: Vec<&Point> = self.points[r].difference(&self.points[s]).collect();
        let t_pts: Vec<&Point> = self.points[t].difference(&self.points[s]).collect();
        if r_pts.is_empty() || t_pts.is_empty() {
            return false;
        }
        if self.is_pair(s) {
            let mut it = self.points[s].iter();
            let (p, q) = (it.next().unwrap(), it.next().unwrap());
            let idx = match self.cs.pair_index(p, q) {
                Some(i) => i,
                None => return false,
            };
            return r_pts
                .iter()
                .any(|rp| t_pts.iter().any(|tp| self.cs.pair_separates(idx, rp, tp)));
        }
        let (_, assignment) = self.elem_components[s]
            .as_ref()
            .expect("non-pair has components");
        r_pts.iter().any(|rp| {
            t_pts
                .iter()
                .any(|tp| match (assignment.get(*rp), assignment.get(*tp)) {
                    (Some(a), Some(b)) => a != b,
                    _ => false,
                })
        })
    }

    /// Betweenness in the inseparable-pair sense only.
    fn pair_between(&self, s: usize, r: usize, t: usize) -> bool {
        self.is_pair(s) && self.separates(s, r, t)
    }

    /// Is `z` between `x` and `y`?
    fn between(&self, x: usize, z: usize, y: usize) -> bool {
        if z == x || z == y || x == y {
            return false;
        }
        if self.is_pair(z) {
            return self.separates(z, x, y);
        }
        // Containment clause: an inseparable pair inside z lies between z
        // and anything, unless it already separates the two in the pair
        // sense.
        let x_inside = self.points[x].is_subset(&self.points[z]);
        if x_inside && self.is_pair(x) && !self.pair_between(x, z, y) {
            return true;
        }
        let y_inside = self.points[y].is_subset(&self.points[z]);
        if y_inside && self.is_pair(y) && !self.pair_between(y, z, x) {
            return true;
        }
        // Separation clause, unless an inseparable pair accounts for both
        // separations already.
        if !self.separates(z, x, y) {
            return false;
        }
        let blocked = (0..self.elements.len()).any(|q| {
            q != z && self.is_pair(q) && self.pair_between(q, x, z) && self.pair_between(q, y, z)
        });
        !blocked
    }

    /// Does element `s` separate two points of `t - s`?
    fn separates_points_of(&self, s: usize, t: usize) -> bool {
        let t_pts: Vec<&Point> = self.points[t].difference(&self.points[s]).collect();
        if self.is_pair(s) {
            let mut it = self.points[s].iter();
            let (p, q) = (it.next().unwrap(), it.next().unwrap());
            let idx = match self.cs.pair_index(p, q) {
                Some(i) => i,
                None => return false,
            };
            for i in 0..t_pts.len() {
                for j in (i + 1)..t_pts.len() {
                    if self.cs.pair_separates(idx, t_pts[i], t_pts[j]) {
                        return true;
                    }
                }
            }
            return false;
        }
        let (_, assignment) = self.elem_components[s]
            .as_ref()
            .expect("non-pair has components");
        for i in 0..t_pts.len() {
            for j in (i + 1)..t_pts.len() {
                if let (Some(a), Some(b)) = (assignment.get(t_pts[i]), assignment.get(t_pts[j])) {
                    if a != b {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Assembles the JSJ tree from the verified collection table: one node per
/// element, one glued unit arc per adjacent pair.
pub fn build_jsj_tree(r: &RSystem) -> Result<StructuralTree> {
    let mut kinds = BTreeMap::new();
    for (i, e) in r.elements.iter().enumerate() {
        kinds.insert(r.ids[i].clone(), e.kind());
    }
    let mut tree = assemble_tree(&r.table, &kinds, LengthPolicy::Unit)?;
    for (i, e) in r.elements.iter().enumerate() {
        let node = tree
            .nodes
            .iter_mut()
            .find(|n| n.id == r.ids[i])
            .expect("assembled tree keeps ground ids");
        node.provenance = Some(match e {
            RElem::Necklace(ni) => r.necklaces[*ni].cell_summary(),
            _ => {
                let pts: Vec<String> = r.points[i].iter().map(|p| p.to_string()).collect();
                pts.join(",")
            }
        });
    }
    Ok(tree)
}
