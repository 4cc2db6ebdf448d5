//! Finite graph model of a continuum.
//!
//! A [`GraphContinuum`] is a finite connected multigraph (loops and parallel
//! edges allowed) with positive rational edge lengths. Its geometric
//! realization — one point per vertex, one unit-parameter open interval per
//! edge — is the space every other module works on. Points are exact:
//! a vertex, or an edge interior position with rational parameter in (0, 1).
//!
//! The central primitive is removal of a finite point set followed by a
//! connectivity computation; `separates` and the cut-point / cut-pair
//! predicates are thin layers over it. Removal of whole cells (vertices and
//! closed edges) is provided separately for the cut-pair machinery.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Rational;

/// A location on the realization: a vertex, or an edge interior point with
/// parameter `0 < t < 1` measured from the edge's first endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(String),
    EdgePoint { edge: String, t: Rational },
}

impl Point {
    pub fn vertex(id: impl Into<String>) -> Point {
        Point::Vertex(id.into())
    }

    pub fn edge(id: impl Into<String>, t: Rational) -> Point {
        let t_ok = t > Rational::zero() && t < Rational::new(1, 1);
        debug_assert!(t_ok, "edge point parameter must lie strictly in (0,1)");
        Point::EdgePoint { edge: id.into(), t }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(v) => write!(f, "v:{v}"),
            Point::EdgePoint { edge, t } => write!(f, "e:{edge}@{t}"),
        }
    }
}

/// One edge record. `u` and `v` index into the vertex table; loops have
/// `u == v`.
#[derive(Debug, Clone)]
pub struct EdgeRec {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub length: Rational,
}

/// Finite connected multigraph with positive rational edge lengths.
#[derive(Debug, Clone)]
pub struct GraphContinuum {
    vertices: Vec<String>,
    vertex_index: BTreeMap<String, usize>,
    edges: Vec<EdgeRec>,
    edge_index: BTreeMap<String, usize>,
    /// Incident edge indices per vertex; loops appear twice.
    incidence: Vec<Vec<usize>>,
}

impl GraphContinuum {
    /// Builds and validates a continuum from id lists.
    pub fn build(
        vertices: Vec<String>,
        edges: Vec<(String, String, String, Rational)>,
    ) -> Result<GraphContinuum> {
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate vertex id `{v}`")));
            }
        }
        let mut edge_index = BTreeMap::new();
        let mut recs = Vec::new();
        for (id, u, v, length) in edges {
            let ui = *vertex_index.get(&u).ok_or_else(|| {
                Error::input(format!("edge `{id}` references undeclared vertex `{u}`"))
            })?;
            let vi = *vertex_index.get(&v).ok_or_else(|| {
                Error::input(format!("edge `{id}` references undeclared vertex `{v}`"))
            })?;
            if length <= Rational::zero() {
                return Err(Error::input(format!(
                    "edge `{id}` has nonpositive length {length}"
                )));
            }
            if edge_index.insert(id.clone(), recs.len()).is_some() {
                return Err(Error::input(format!("duplicate edge id `{id}`")));
            }
            recs.push(EdgeRec {
                id,
                u: ui,
                v: vi,
                length,
            });
        }
        if vertices.is_empty() {
            return Err(Error::input("graph has no vertices"));
        }
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (i, e) in recs.iter().enumerate() {
            incidence[e.u].push(i);
            incidence[e.v].push(i);
        }
        let g = GraphContinuum {
            vertices,
            vertex_index,
            edges: recs,
            edge_index,
            incidence,
        };
        let comps = g.components_after_removal(&[]);
        if comps.len() > 1 {
            return Err(Error::input(format!(
                "graph realization is disconnected; first two components: [{}] and [{}]",
                comps[0].summary(),
                comps[1].summary()
            )));
        }
        Ok(g)
    }

    /// Parses the line-oriented edge-list format:
    ///
    /// ```text
    /// # comment
    /// v <id>
    /// e <id> <u> <v> [length]
    /// ```
    ///
    /// Lengths are integers or rationals `p/q`; the default is 1.
    pub fn parse(text: &str) -> Result<GraphContinuum> {
        let mut vertices: Vec<String> = Vec::new();
        let mut edges: Vec<(String, String, String, Rational)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "v" => {
                    if toks.len() != 2 {
                        return Err(Error::input(format!("line {lineno}: expected `v <id>`")));
                    }
                    vertices.push(toks[1].to_string());
                }
                "e" => {
                    if toks.len() != 4 && toks.len() != 5 {
                        return Err(Error::input(format!(
                            "line {lineno}: expected `e <id> <u> <v> [length]`"
                        )));
                    }
                    let length = if toks.len() == 5 {
                        parse_rational(toks[4]).ok_or_else(|| {
                            Error::input(format!("line {lineno}: bad length `{}`", toks[4]))
                        })?
                    } else {
                        Rational::new(1, 1)
                    };
                    edges.push((
                        toks[1].to_string(),
                        toks[2].to_string(),
                        toks[3].to_string(),
                        length,
                    ));
                }
                other => {
                    return Err(Error::input(format!(
                        "line {lineno}: unknown directive `{other}`"
                    )));
                }
            }
        }
        GraphContinuum::build(vertices, edges).map_err(|e| match e {
            Error::Input(msg) => Error::Input(msg),
            e => e,
        })
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_recs(&self) -> &[EdgeRec] {
        &self.edges
    }

    pub fn vertex_id(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_idx(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown vertex `{id}`")))
    }

    pub fn edge_idx(&self, id: &str) -> Result<usize> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown edge `{id}`")))
    }

    pub fn edge(&self, id: &str) -> Result<&EdgeRec> {
        Ok(&self.edges[self.edge_idx(id)?])
    }

    /// Degree of a vertex; loops contribute 2.
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Checks that a point actually names a vertex or edge of this graph and
    /// has an in-range parameter.
    pub fn validate_point(&self, p: &Point) -> Result<()> {
        match p {
            Point::Vertex(v) => self.vertex_idx(v).map(|_| ()),
            Point::EdgePoint { edge, t } => {
                self.edge_idx(edge)?;
                if *t <= Rational::zero() || *t >= Rational::new(1, 1) {
                    return Err(Error::input(format!(
                        "edge point parameter {t} outside (0,1) on edge `{edge}`"
                    )));
                }
                Ok(())
            }
        }
    }

    /// The whole realization as a closed region.
    pub fn full_region(&self) -> Region {
        let mut r = Region::default();
        for v in &self.vertices {
            r.vertices.insert(v.clone());
        }
        for e in &self.edges {
            r.segments.insert(
                e.id.clone(),
                vec![Segment {
                    lo: Rational::zero(),
                    lo_closed: false,
                    hi: Rational::new(1, 1),
                    hi_closed: false,
                }],
            );
        }
        r
    }

    /// Connected components of the realization minus a finite point set.
    ///
    /// Components are open regions, returned in deterministic order
    /// (lexicographic by smallest contained cell).
    pub fn components_after_removal(&self, removed: &[Point]) -> Vec<Region> {
        let mut removed_vertices: BTreeSet<usize> = BTreeSet::new();
        let mut removed_edge_ts: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for p in removed {
            match p {
                Point::Vertex(v) => {
                    if let Some(&i) = self.vertex_index.get(v) {
                        removed_vertices.insert(i);
                    }
                }
                Point::EdgePoint { edge, t } => {
                    if let Some(&i) = self.edge_index.get(edge) {
                        removed_edge_ts.entry(i).or_default().push(*t);
                    }
                }
            }
        }
        for ts in removed_edge_ts.values_mut() {
            ts.sort();
            ts.dedup();
        }

        // Atoms: surviving vertices plus maximal open edge segments between
        // consecutive removed interior points.
        #[derive(Clone)]
        enum Atom {
            Vertex(usize),
            Seg {
                edge: usize,
                lo: Rational,
                hi: Rational,
            },
        }
        let mut atoms: Vec<Atom> = Vec::new();
        let mut vertex_atom: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            if !removed_vertices.contains(&v) {
                vertex_atom.insert(v, atoms.len());
                atoms.push(Atom::Vertex(v));
            }
        }
        let zero = Rational::zero();
        let one = Rational::new(1, 1);
        let mut seg_atoms: Vec<(usize, usize)> = Vec::new(); // (atom idx, edge)
        for (ei, _e) in self.edges.iter().enumerate() {
            let cuts = removed_edge_ts.get(&ei).cloned().unwrap_or_default();
            let mut bounds = vec![zero];
            bounds.extend(cuts.iter().copied());
            bounds.push(one);
            for w in bounds.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if lo < hi {
                    seg_atoms.push((atoms.len(), ei));
                    atoms.push(Atom::Seg { edge: ei, lo, hi });
                }
            }
        }

        let mut uf = UnionFind::new(atoms.len());
        for &(ai, ei) in &seg_atoms {
            let e = &self.edges[ei];
            if let Atom::Seg { lo, hi, .. } = atoms[ai].clone() {
                if lo == zero {
                    if let Some(&va) = vertex_atom.get(&e.u) {
                        uf.union(ai, va);
                    }
                }
                if hi == one {
                    if let Some(&va) = vertex_atom.get(&e.v) {
                        uf.union(ai, va);
                    }
                }
            }
        }

        // Group atoms into regions.
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..atoms.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut comps: Vec<Region> = Vec::new();
        for (_, members) in groups {
            let mut r = Region::default();
            for ai in members {
                match &atoms[ai] {
                    Atom::Vertex(v) => {
                        r.vertices.insert(self.vertices[*v].clone());
                    }
                    Atom::Seg { edge, lo, hi } => {
                        r.segments
                            .entry(self.edges[*edge].id.clone())
                            .or_default()
                            .push(Segment {
                                lo: *lo,
                                lo_closed: false,
                                hi: *hi,
                                hi_closed: false,
                            });
                    }
                }
            }
            r.normalize();
            comps.push(r);
        }
        comps.sort_by_key(|a| a.sort_key());
        comps
    }

    /// Components of the realization minus a union of whole closed cells
    /// (vertices and closed edges). Used for necklace and inseparable-set
    /// removal, where the removed set is infinite but cell-aligned.
    pub fn cell_complement_components(
        &self,
        removed_vertices: &BTreeSet<String>,
        removed_edges: &BTreeSet<String>,
    ) -> Vec<Region> {
        let rv: BTreeSet<usize> = removed_vertices
            .iter()
            .filter_map(|v| self.vertex_index.get(v).copied())
            .collect();
        let re: BTreeSet<usize> = removed_edges
            .iter()
            .filter_map(|e| self.edge_index.get(e).copied())
            .collect();

        let mut atoms: Vec<(bool, usize)> = Vec::new(); // (is_vertex, idx)
        let mut vertex_atom: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            if !rv.contains(&v) {
                vertex_atom.insert(v, atoms.len());
                atoms.push((true, v));
            }
        }
        let mut uf = UnionFind::new(atoms.len() + self.edges.len());
        let base = atoms.len();
        let mut live_edges = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            if re.contains(&ei) {
                continue;
            }
            live_edges.push(ei);
            if let Some(&va) = vertex_atom.get(&e.u) {
                uf.union(base + ei, va);
            }
            if let Some(&va) = vertex_atom.get(&e.v) {
                uf.union(base + ei, va);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, _) in atoms.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        for &ei in &live_edges {
            groups
                .entry(uf.find(base + ei))
                .or_default()
                .push(base + ei);
        }
        let mut comps = Vec::new();
        for (_, members) in groups {
            let mut r = Region::default();
            for m in members {
                if m < base {
                    let (_, v) = atoms[m];
                    r.vertices.insert(self.vertices[v].clone());
                } else {
                    let e = &self.edges[m - base];
                    r.segments.insert(
                        e.id.clone(),
                        vec![Segment {
                            lo: Rational::zero(),
                            lo_closed: false,
                            hi: Rational::new(1, 1),
                            hi_closed: false,
                        }],
                    );
                }
            }
            r.normalize();
            comps.push(r);
        }
        comps.sort_by_key(|a| a.sort_key());
        comps
    }

    /// Does the finite set `c` separate `a` from `b`? When it does and the
    /// witness construction succeeds (which is exactly the minimal-separator
    /// situation), two closed regions `(y, z)` are returned with
    /// `a ∈ y`, `b ∈ z`, `y ∪ z = X` and `y ∩ z = c`.
    pub fn separates(&self, c: &[Point], a: &Point, b: &Point) -> Result<Separation> {
        for p in c {
            if p == a || p == b {
                return Err(Error::input(format!(
                    "query point {p} is a member of the removed set"
                )));
            }
        }
        self.validate_point(a)?;
        self.validate_point(b)?;
        let comps = self.components_after_removal(c);
        let ca = comps.iter().position(|r| r.contains(a));
        let cb = comps.iter().position(|r| r.contains(b));
        let (ca, cb) = match (ca, cb) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::internal("query point not found in any component")),
        };
        if ca == cb {
            return Ok(Separation {
                separated: false,
                witness: None,
            });
        }
        let witness = self.separation_witness(c, &comps, ca, cb);
        Ok(Separation {
            separated: true,
            witness,
        })
    }

    /// Attempts the two natural groupings of components into closed halves.
    fn separation_witness(
        &self,
        c: &[Point],
        comps: &[Region],
        ca: usize,
        cb: usize,
    ) -> Option<(Region, Region)> {
        let cut = Region::from_points(c);
        let full = self.full_region();
        let groupings = [
            // everything except b's component | b's component
            (
                (0..comps.len()).filter(|&i| i != cb).collect::<Vec<_>>(),
                vec![cb],
            ),
            // a's component | everything else
            (
                vec![ca],
                (0..comps.len()).filter(|&i| i != ca).collect::<Vec<_>>(),
            ),
        ];
        for (ys, zs) in groupings {
            let mut y = Region::default();
            for i in &ys {
                y.union_with(&comps[*i]);
            }
            y = y.closure(self);
            let mut z = Region::default();
            for i in &zs {
                z.union_with(&comps[*i]);
            }
            z = z.closure(self);
            let inter = y.intersect(&z);
            let mut uni = y.clone();
            uni.union_with(&z);
            if inter == cut && uni == full && y.is_connected(self) && z.is_connected(self) {
                return Some((y, z));
            }
        }
        None
    }

    /// A point is a cut point when its removal disconnects the realization.
    pub fn is_cut_point(&self, p: &Point) -> bool {
        self.components_after_removal(std::slice::from_ref(p)).len() > 1
    }

    /// An unordered pair of non-cut points is a cut pair when its joint
    /// removal disconnects the realization.
    pub fn is_cut_pair(&self, p: &Point, q: &Point) -> Result<bool> {
        if p == q {
            return Err(Error::precondition("cut pair requires two distinct points"));
        }
        if self.is_cut_point(p) || self.is_cut_point(q) {
            return Ok(false);
        }
        Ok(self.components_after_removal(&[p.clone(), q.clone()]).len() > 1)
    }

    /// Number of components after removing a finite point set.
    pub fn component_count(&self, removed: &[Point]) -> usize {
        self.components_after_removal(removed).len()
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.parse().ok()?;
        let d: i64 = d.parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: i64 = s.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}

/// Outcome of a separation query.
#[derive(Debug, Clone)]
pub struct Separation {
    pub separated: bool,
    /// Closed halves `(y, z)` meeting exactly in the removed set, when the
    /// removed set is a minimal separator of the two query points.
    pub witness: Option<(Region, Region)>,
}

/// A rational sub-interval of one edge's unit parameter range.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Segment {
    fn contains(&self, t: Rational) -> bool {
        (self.lo < t || (self.lo == t && self.lo_closed))
            && (t < self.hi || (t == self.hi && self.hi_closed))
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

/// A subset of the realization: whole vertices plus per-edge disjoint
/// rational sub-intervals. Interval endpoints at 0 or 1 never stand for the
/// endpoint vertices; those are tracked in `vertices`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Region {
    pub vertices: BTreeSet<String>,
    pub segments: BTreeMap<String, Vec<Segment>>,
}

impl Region {
    pub fn from_points(points: &[Point]) -> Region {
        let mut r = Region::default();
        for p in points {
            r.add_point(p);
        }
        r
    }

    pub fn add_point(&mut self, p: &Point) {
        match p {
            Point::Vertex(v) => {
                self.vertices.insert(v.clone());
            }
            Point::EdgePoint { edge, t } => {
                self.segments
                    .entry(edge.clone())
                    .or_default()
                    .push(Segment {
                        lo: *t,
                        lo_closed: true,
                        hi: *t,
                        hi_closed: true,
                    });
                self.normalize();
            }
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.vertices.contains(v),
            Point::EdgePoint { edge, t } => self
                .segments
                .get(edge)
                .map(|segs| segs.iter().any(|s| s.contains(*t)))
                .unwrap_or(false),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.segments.values().all(|s| s.is_empty())
    }

    /// Sorts and merges segments. Segments merge only when they genuinely
    /// overlap or touch with at least one closed endpoint; open abutting
    /// segments stay separate so that membership stays exact.
    pub fn normalize(&mut self) {
        self.segments.retain(|_, segs| {
            segs.retain(|s| !s.is_empty());
            !segs.is_empty()
        });
        for segs in self.segments.values_mut() {
            segs.sort();
            let mut merged: Vec<Segment> = Vec::new();
            for s in segs.drain(..) {
                if let Some(last) = merged.last_mut() {
                    let touches =
                        s.lo < last.hi || (s.lo == last.hi && (s.lo_closed || last.hi_closed));
                    if touches {
                        if s.hi > last.hi || (s.hi == last.hi && s.hi_closed) {
                            last.hi = s.hi;
                            last.hi_closed = s.hi_closed;
                        }
                        if s.lo == last.lo && s.lo_closed {
                            last.lo_closed = true;
                        }
                        continue;
                    }
                }
                merged.push(s);
            }
            *segs = merged;
        }
    }

    pub fn union_with(&mut self, other: &Region) {
        for v in &other.vertices {
            self.vertices.insert(v.clone());
        }
        for (e, segs) in &other.segments {
            self.segments
                .entry(e.clone())
                .or_default()
                .extend(segs.iter().cloned());
        }
        self.normalize();
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut r = Region {
            vertices: self
                .vertices
                .intersection(&other.vertices)
                .cloned()
                .collect(),
            ..Region::default()
        };
        for (e, segs) in &self.segments {
            if let Some(osegs) = other.segments.get(e) {
                let mut out = Vec::new();
                for a in segs {
                    for b in osegs {
                        let lo;
                        let lo_closed;
                        if a.lo > b.lo {
                            lo = a.lo;
                            lo_closed = a.lo_closed;
                        } else if b.lo > a.lo {
                            lo = b.lo;
                            lo_closed = b.lo_closed;
                        } else {
                            lo = a.lo;
                            lo_closed = a.lo_closed && b.lo_closed;
                        }
                        let hi;
                        let hi_closed;
                        if a.hi < b.hi {
                            hi = a.hi;
                            hi_closed = a.hi_closed;
                        } else if b.hi < a.hi {
                            hi = b.hi;
                            hi_closed = b.hi_closed;
                        } else {
                            hi = a.hi;
                            hi_closed = a.hi_closed && b.hi_closed;
                        }
                        let seg = Segment {
                            lo,
                            lo_closed,
                            hi,
                            hi_closed,
                        };
                        if !seg.is_empty() {
                            out.push(seg);
                        }
                    }
                }
                if !out.is_empty() {
                    r.segments.insert(e.clone(), out);
                }
            }
        }
        r.normalize();
        r
    }

    /// Topological closure within the realization: segment endpoints become
    /// closed and segments reaching an edge end absorb the endpoint vertex.
    pub fn closure(&self, g: &GraphContinuum) -> Region {
        let mut r = self.clone();
        let zero = Rational::zero();
        let one = Rational::new(1, 1);
        let mut extra_vertices: Vec<String> = Vec::new();
        for (e, segs) in &mut r.segments {
            let rec = g.edge(e).expect("region references unknown edge");
            for s in segs.iter_mut() {
                if s.lo == zero {
                    extra_vertices.push(g.vertex_id(rec.u).to_string());
                } else {
                    s.lo_closed = true;
                }
                if s.hi == one {
                    extra_vertices.push(g.vertex_id(rec.v).to_string());
                } else {
                    s.hi_closed = true;
                }
            }
        }
        for v in extra_vertices {
            r.vertices.insert(v);
        }
        r.normalize();
        r
    }

    /// Connectivity of the region as a point set.
    pub fn is_connected(&self, g: &GraphContinuum) -> bool {
        // Atoms: member vertices and segments.
        type Atom = (Option<String>, Option<(String, Segment)>);
        let mut atoms: Vec<Atom> = Vec::new();
        let mut vertex_atom: BTreeMap<String, usize> = BTreeMap::new();
        for v in &self.vertices {
            vertex_atom.insert(v.clone(), atoms.len());
            atoms.push((Some(v.clone()), None));
        }
        for (e, segs) in &self.segments {
            for s in segs {
                atoms.push((None, Some((e.clone(), s.clone()))));
            }
        }
        if atoms.is_empty() {
            return true;
        }
        let zero = Rational::zero();
        let one = Rational::new(1, 1);
        let mut uf = UnionFind::new(atoms.len());
        let seg_atoms: Vec<(usize, String, Segment)> = atoms
            .iter()
            .enumerate()
            .filter_map(|(i, (_, s))| s.clone().map(|(e, seg)| (i, e, seg)))
            .collect();
        for (i, e, seg) in &seg_atoms {
            let rec = g.edge(e).expect("region references unknown edge");
            // A segment connects to an endpoint vertex of its edge when it
            // reaches the edge end (the vertex is then in its closure).
            if seg.lo == zero {
                if let Some(&va) = vertex_atom.get(g.vertex_id(rec.u)) {
                    uf.union(*i, va);
                }
            }
            if seg.hi == one {
                if let Some(&va) = vertex_atom.get(g.vertex_id(rec.v)) {
                    uf.union(*i, va);
                }
            }
        }
        // Segments on the same edge touching at a shared closed endpoint.
        for (i, e, s1) in &seg_atoms {
            for (j, e2, s2) in &seg_atoms {
                if i >= j || e != e2 {
                    continue;
                }
                if s1.hi == s2.lo && (s1.hi_closed || s2.lo_closed) {
                    uf.union(*i, *j);
                }
                if s2.hi == s1.lo && (s2.hi_closed || s1.lo_closed) {
                    uf.union(*i, *j);
                }
            }
        }
        let root = uf.find(0);
        (1..atoms.len()).all(|i| uf.find(i) == root)
    }

    /// Whole cells spanned by the region: vertices plus edges whose full open
    /// interior is covered.
    pub fn cells(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let verts = self.vertices.clone();
        let mut edges = BTreeSet::new();
        for (e, segs) in &self.segments {
            if segs.len() == 1
                && segs[0].lo == Rational::zero()
                && segs[0].hi == Rational::new(1, 1)
            {
                edges.insert(e.clone());
            }
        }
        (verts, edges)
    }

    /// Key used for the documented deterministic component order.
    fn sort_key(&self) -> (u8, String, Rational) {
        if let Some(v) = self.vertices.iter().next() {
            return (0, v.clone(), Rational::zero());
        }
        if let Some((e, segs)) = self.segments.iter().next() {
            return (1, e.clone(), segs[0].lo);
        }
        (2, String::new(), Rational::zero())
    }

    /// Short human-readable description (used in error messages).
    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self.vertices.iter().cloned().collect();
        for (e, segs) in &self.segments {
            for s in segs {
                let lo_b = if s.lo_closed { '[' } else { '(' };
                let hi_b = if s.hi_closed { ']' } else { ')' };
                parts.push(format!("{e}{lo_b}{},{}{hi_b}", s.lo, s.hi));
            }
        }
        parts.join(" ")
    }
}

/// All vertices plus `granularity` evenly spaced interior samples per edge.
/// The finite stand-in for a dense subset of the realization.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    pub granularity: u32,
    pub points: Vec<Point>,
}

impl SampleGrid {
    pub fn new(g: &GraphContinuum, granularity: u32) -> SampleGrid {
        assert!(granularity >= 1, "grid granularity must be at least 1");
        let mut points = Vec::new();
        for v in g.vertex_ids() {
            points.push(Point::vertex(v.clone()));
        }
        let k = granularity as i64;
        for e in g.edge_recs() {
            for i in 1..=k {
                points.push(Point::edge(e.id.clone(), Rational::new(i, k + 1)));
            }
        }
        points.sort();
        SampleGrid {
            granularity,
            points,
        }
    }

    /// Sample points lying on one edge, in increasing parameter order.
    pub fn edge_samples(&self, edge: &str) -> Vec<Point> {
        self.points
            .iter()
            .filter(|p| matches!(p, Point::EdgePoint { edge: e, .. } if e == edge))
            .cloned()
            .collect()
    }

    /// Grid points plus midpoints of every gap between consecutive samples
    /// (and between the edge ends and the outermost samples). Any real point
    /// of the realization has the same separation behavior, relative to grid
    /// points, as one of these; they are the complete set of cut-candidate
    /// positions.
    pub fn with_gap_midpoints(&self, g: &GraphContinuum) -> Vec<Point> {
        let mut pts = self.points.clone();
        let k = self.granularity as i64;
        let denom = 2 * (k + 1);
        for e in g.edge_recs() {
            for i in 0..=k {
                pts.push(Point::edge(e.id.clone(), Rational::new(2 * i + 1, denom)));
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ratio;

    #[test]
    fn parse_single_edge() {
        let g = GraphContinuum::parse("v a\nv b\ne e1 a b\n").unwrap();
        assert_eq!(g.vertex_ids().len(), 2);
        assert_eq!(g.edge_recs().len(), 1);
        assert_eq!(g.edge("e1").unwrap().length, ratio(1, 1));
    }

    #[test]
    fn parse_five_cycle() {
        let g = GraphContinuum::parse(corpus::C5).unwrap();
        assert_eq!(g.vertex_ids().len(), 5);
        assert_eq!(g.edge_recs().len(), 5);
    }

    #[test]
    fn parse_undeclared_vertex_names_it() {
        let err = GraphContinuum::parse("v a\ne e1 a zz\n").unwrap_err();
        assert!(err.to_string().contains("zz"), "{err}");
    }

    #[test]
    fn parse_rejects_nonpositive_length() {
        let err = GraphContinuum::parse("v a\nv b\ne e1 a b 0\n").unwrap_err();
        assert!(err.to_string().contains("nonpositive"), "{err}");
    }

    #[test]
    fn parse_rejects_disconnected_and_cites_components() {
        let err = GraphContinuum::parse("v a\nv b\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("disconnected"), "{msg}");
        assert!(msg.contains('a') && msg.contains('b'), "{msg}");
    }

    #[test]
    fn circle_minus_one_point_is_connected() {
        let g = GraphContinuum::parse(corpus::C5).unwrap();
        let comps = g.components_after_removal(&[Point::vertex("c0")]);
        assert_eq!(comps.len(), 1);
    }

    #[test]
    fn circle_minus_two_points_has_two_components() {
        let g = GraphContinuum::parse(corpus::C5).unwrap();
        let comps =
            g.components_after_removal(&[Point::vertex("c0"), Point::edge("s2", ratio(1, 2))]);
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn theta_minus_branch_vertices_has_three_components() {
        let g = GraphContinuum::parse(corpus::THETA).unwrap();
        let comps = g.components_after_removal(&[Point::vertex("a"), Point::vertex("b")]);
        assert_eq!(comps.len(), 3);
    }

    #[test]
    fn empty_cut_never_separates() {
        let g = GraphContinuum::parse(corpus::K4).unwrap();
        let sep = g
            .separates(&[], &Point::vertex("u"), &Point::vertex("x"))
            .unwrap();
        assert!(!sep.separated);
    }

    #[test]
    fn barbell_bridge_midpoint_separates_with_witness() {
        let g = GraphContinuum::parse(corpus::BARBELL).unwrap();
        let c = Point::edge("bridge", ratio(1, 2));
        let sep = g
            .separates(
                std::slice::from_ref(&c),
                &Point::vertex("u2"),
                &Point::vertex("v2"),
            )
            .unwrap();
        assert!(sep.separated);
        let (y, z) = sep
            .witness
            .expect("minimal separator must produce a witness");
        assert!(y.contains(&Point::vertex("u2")));
        assert!(z.contains(&Point::vertex("v2")));
        let inter = y.intersect(&z);
        assert_eq!(inter, Region::from_points(&[c]));
        let mut uni = y.clone();
        uni.union_with(&z);
        assert_eq!(uni, g.full_region());
        assert!(y.is_connected(&g) && z.is_connected(&g));
    }

    #[test]
    fn k4_pair_separates_open_edge_from_opposite_vertex() {
        let g = GraphContinuum::parse(corpus::K4).unwrap();
        let sep = g
            .separates(
                &[Point::vertex("u"), Point::vertex("v")],
                &Point::edge("uv", ratio(1, 2)),
                &Point::vertex("w"),
            )
            .unwrap();
        assert!(sep.separated);
    }

    #[test]
    fn query_point_inside_cut_is_an_error() {
        let g = GraphContinuum::parse(corpus::C5).unwrap();
        let p = Point::vertex("c0");
        assert!(g
            .separates(std::slice::from_ref(&p), &p, &Point::vertex("c1"))
            .is_err());
    }

    #[test]
    fn circle_has_no_cut_points_and_all_pairs_cut() {
        let g = GraphContinuum::parse(corpus::C5).unwrap();
        let grid = SampleGrid::new(&g, 2);
        for p in &grid.points {
            assert!(!g.is_cut_point(p), "{p} must not cut a circle");
        }
        for (i, p) in grid.points.iter().enumerate() {
            for q in grid.points.iter().skip(i + 1) {
                assert!(
                    g.is_cut_pair(p, q).unwrap(),
                    "{p},{q} must be a cut pair of a circle"
                );
            }
        }
    }

    #[test]
    fn barbell_articulation_vertex_is_cut_point() {
        let g = GraphContinuum::parse(corpus::BARBELL).unwrap();
        assert!(g.is_cut_point(&Point::vertex("u1")));
        assert!(g.is_cut_point(&Point::vertex("v1")));
        assert!(!g.is_cut_point(&Point::vertex("u2")));
    }

    #[test]
    fn theta_branch_pair_is_cut_pair_with_three_components() {
        let g = GraphContinuum::parse(corpus::THETA).unwrap();
        let a = Point::vertex("a");
        let b = Point::vertex("b");
        assert!(g.is_cut_pair(&a, &b).unwrap());
        assert_eq!(g.components_after_removal(&[a, b]).len(), 3);
    }

    #[test]
    fn loop_vertex_cut_only_with_other_edges() {
        // A loop plus a pendant edge: the loop vertex is a cut point.
        let g = GraphContinuum::parse("v a\nv b\ne l a a\ne p a b\n").unwrap();
        assert!(g.is_cut_point(&Point::vertex("a")));
        // A bare loop: removing the vertex leaves the open loop connected.
        let g2 = GraphContinuum::parse("v a\ne l a a\n").unwrap();
        assert!(!g2.is_cut_point(&Point::vertex("a")));
    }

    #[test]
    fn region_closure_and_intersection_are_exact() {
        let g = GraphContinuum::parse("v a\nv b\ne e1 a b\n").unwrap();
        let comps = g.components_after_removal(&[Point::edge("e1", ratio(1, 2))]);
        assert_eq!(comps.len(), 2);
        let y = comps[0].closure(&g);
        let z = comps[1].closure(&g);
        let inter = y.intersect(&z);
        assert_eq!(
            inter,
            Region::from_points(&[Point::edge("e1", ratio(1, 2))])
        );
    }

    #[test]
    fn grid_contains_all_vertices_and_samples() {
        let g = GraphContinuum::parse(corpus::THETA).unwrap();
        let grid = SampleGrid::new(&g, 3);
        assert_eq!(grid.points.len(), 2 + 3 * 3);
        let cands = grid.with_gap_midpoints(&g);
        assert_eq!(cands.len(), 2 + 3 * 3 + 3 * 4);
    }
}
