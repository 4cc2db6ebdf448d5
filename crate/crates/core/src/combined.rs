//! The combined tree: cut-point structure refined by per-block cut-pair
//! structure.
//!
//! Each nonsingleton equivalence class of the cut-point pretree has a
//! closure that is a connected, locally connected continuum without cut
//! points (a block). The combined tree replaces every such class node by the
//! JSJ tree of its block; the glued arc that joined a cut point to the class
//! now attaches at the element of the block's collection containing that cut
//! point.

use std::collections::{BTreeMap, BTreeSet};

use crate::continuum::{GraphContinuum, Point};
use crate::cutpair::{build_jsj_tree, build_r, RSystem};
use crate::cutpoint::{build_cutpoint_tree, build_p, Automorphism, CutPointPretree};
use crate::error::{Error, Result};
use crate::pretree::{ArcKind, NodeKind, StructuralTree, TreeArc, TreeNode};
use crate::Rational;

/// One block of the continuum: the closure of a nonsingleton class, as a
/// standalone continuum, with its cut-pair system and JSJ tree.
#[derive(Debug)]
pub struct Block {
    /// Index of the class this block closes over.
    pub class_index: usize,
    pub graph: GraphContinuum,
    pub r: RSystem,
    pub jsj: StructuralTree,
}

/// The combined tree plus its attachment records.
#[derive(Debug)]
pub struct CombinedTree {
    pub tree: StructuralTree,
    pub blocks: Vec<Block>,
    /// `(cut vertex id, attachment node id)` per replaced glue arc.
    pub attachments: Vec<(String, String)>,
}

/// The closure of a nonsingleton class as a standalone continuum. The result
/// is connected and has no cut points; a violation is an internal error
/// because it contradicts the class computation.
pub fn block_closure(
    g: &GraphContinuum,
    p: &CutPointPretree,
    class_index: usize,
) -> Result<GraphContinuum> {
    let class = &p.analysis.classes[class_index];
    if class.singleton {
        return Err(Error::precondition(
            "block closure requires a nonsingleton class",
        ));
    }
    let (class_vertices, class_edges) = class.region.cells();
    let mut vertices: BTreeSet<String> = class_vertices;
    let mut edges = Vec::new();
    for e in &class_edges {
        let rec = g.edge(e)?;
        vertices.insert(g.vertex_id(rec.u).to_string());
        vertices.insert(g.vertex_id(rec.v).to_string());
        edges.push((
            rec.id.clone(),
            g.vertex_id(rec.u).to_string(),
            g.vertex_id(rec.v).to_string(),
            rec.length,
        ));
    }
    let block = GraphContinuum::build(vertices.into_iter().collect(), edges)
        .map_err(|e| Error::internal(format!("block closure is not a valid continuum: {e}")))?;
    let cuts = crate::cutpoint::cut_points(&block);
    if !cuts.vertex_cut_points.is_empty() || !cuts.bridge_edges.is_empty() {
        return Err(Error::internal(format!(
            "block closure of class {class_index} has cut points"
        )));
    }
    Ok(block)
}

/// The element of a block's collection at which a glued arc for the cut
/// point `v` attaches: the unique inclusion-minimal element containing `v`,
/// and when several minimal elements tie, the tree median of all elements
/// containing `v`.
fn attachment_node(block: &Block, v: &str) -> Result<Option<String>> {
    let point = Point::vertex(v.to_string());
    let candidates = block.r.elements_containing(&point);
    if candidates.is_empty() {
        return Ok(None);
    }
    if candidates.len() == 1 {
        return Ok(Some(block.r.ids[candidates[0]].clone()));
    }
    // Inclusion-minimal candidates.
    let minimal: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&i| {
            !candidates
                .iter()
                .any(|&j| j != i && block.r.points[j].is_subset(&block.r.points[i]))
        })
        .collect();
    if minimal.len() == 1 {
        return Ok(Some(block.r.ids[minimal[0]].clone()));
    }
    // Tree median over all candidates.
    let nodes: Vec<usize> = candidates
        .iter()
        .map(|&i| block.jsj.node_idx(&block.r.ids[i]))
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(usize, usize)> = None; // (total hops, node)
    for &cand in &nodes {
        let total: usize = nodes
            .iter()
            .map(|&n| block.jsj.path(cand, n).len() - 1)
            .sum();
        let better = match best {
            None => true,
            Some((t, b)) => {
                total < t || (total == t && block.jsj.nodes[cand].id < block.jsj.nodes[b].id)
            }
        };
        if better {
            best = Some((total, cand));
        }
    }
    Ok(best.map(|(_, b)| block.jsj.nodes[b].id.clone()))
}

/// Builds the combined tree of a continuum: the cut-point tree with every
/// nonsingleton class node replaced by the JSJ tree of its block closure.
pub fn build_combined_tree(g: &GraphContinuum, granularity: u32) -> Result<CombinedTree> {
    let p = build_p(g, granularity)?;
    let cut_tree = build_cutpoint_tree(g, &p)?;

    let mut blocks = Vec::new();
    for (i, class) in p.analysis.classes.iter().enumerate() {
        if class.singleton {
            continue;
        }
        let graph = block_closure(g, &p, i)?;
        let r = build_r(&graph, granularity)?;
        let jsj = build_jsj_tree(&r)?;
        blocks.push(Block {
            class_index: i,
            graph,
            r,
            jsj,
        });
    }

    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut arcs: Vec<TreeArc> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let push_node =
        |nodes: &mut Vec<TreeNode>, index: &mut BTreeMap<String, usize>, node: TreeNode| {
            index.insert(node.id.clone(), nodes.len());
            nodes.push(node);
        };

    // Cut vertices and singleton classes survive unchanged.
    for node in &cut_tree.nodes {
        let keep = match node.kind {
            NodeKind::CutVertex => true,
            NodeKind::Class => {
                let i: usize = node.id.strip_prefix("class:").unwrap().parse().unwrap();
                p.analysis.classes[i].singleton
            }
            _ => false,
        };
        if keep {
            push_node(&mut nodes, &mut index, node.clone());
        }
    }
    // Block subtrees, namespaced per block.
    for (bi, block) in blocks.iter().enumerate() {
        for n in &block.jsj.nodes {
            push_node(
                &mut nodes,
                &mut index,
                TreeNode {
                    id: format!("b{bi}.{}", n.id),
                    kind: n.kind,
                    provenance: Some(match &n.provenance {
                        Some(pv) => format!("block{bi}:{pv}"),
                        None => format!("block{bi}"),
                    }),
                },
            );
        }
        for a in &block.jsj.arcs {
            arcs.push(TreeArc {
                a: index[&format!("b{bi}.{}", block.jsj.nodes[a.a].id)],
                b: index[&format!("b{bi}.{}", block.jsj.nodes[a.b].id)],
                length: a.length,
                kind: a.kind.clone(),
            });
        }
    }
    // Bridges survive; their endpoints are cut vertices or singleton classes.
    for arc in &cut_tree.arcs {
        if let ArcKind::Bridge(e) = &arc.kind {
            let a = &cut_tree.nodes[arc.a].id;
            let b = &cut_tree.nodes[arc.b].id;
            arcs.push(TreeArc {
                a: *index.get(a).ok_or_else(|| {
                    Error::internal(format!("bridge endpoint `{a}` missing from combined tree"))
                })?,
                b: *index.get(b).ok_or_else(|| {
                    Error::internal(format!("bridge endpoint `{b}` missing from combined tree"))
                })?,
                length: arc.length,
                kind: ArcKind::Bridge(e.clone()),
            });
        }
    }
    // Glue arcs re-attach inside the block subtrees.
    let mut attachments = Vec::new();
    for arc in &cut_tree.arcs {
        if !matches!(arc.kind, ArcKind::Glue) {
            continue;
        }
        let (class_node, cut_node) = if cut_tree.nodes[arc.a].kind == NodeKind::Class {
            (arc.a, arc.b)
        } else {
            (arc.b, arc.a)
        };
        let class_idx: usize = cut_tree.nodes[class_node]
            .id
            .strip_prefix("class:")
            .unwrap()
            .parse()
            .unwrap();
        let cut_id = cut_tree.nodes[cut_node].id.clone();
        let v = cut_id.strip_prefix("cut:").unwrap().to_string();
        let bi = blocks
            .iter()
            .position(|b| b.class_index == class_idx)
            .ok_or_else(|| Error::internal("glue arc points at a singleton class"))?;
        let attach_local = match attachment_node(&blocks[bi], &v)? {
            Some(id) => id,
            None => {
                // The cut point lies in no element of the block collection:
                // it appears as an end of the block's tree. Materialize the
                // end and hang it off the element nearest to the vertex.
                let end_id = format!("end:{v}");
                let host = nearest_element(&blocks[bi], &v)?;
                let full_end = format!("b{bi}.{end_id}");
                if !index.contains_key(&full_end) {
                    push_node(
                        &mut nodes,
                        &mut index,
                        TreeNode {
                            id: full_end.clone(),
                            kind: NodeKind::End,
                            provenance: Some(format!("block{bi}:v:{v}")),
                        },
                    );
                    arcs.push(TreeArc {
                        a: index[&full_end],
                        b: index[&format!("b{bi}.{host}")],
                        length: Rational::new(1, 1),
                        kind: ArcKind::Glue,
                    });
                }
                end_id
            }
        };
        let attach_full = format!("b{bi}.{attach_local}");
        attachments.push((cut_id.clone(), attach_full.clone()));
        arcs.push(TreeArc {
            a: index[&cut_id],
            b: *index
                .get(&attach_full)
                .ok_or_else(|| Error::internal(format!("attachment `{attach_full}` missing")))?,
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
    Ok(CombinedTree {
        tree,
        blocks,
        attachments,
    })
}

/// Deterministic fallback host for an end node: the first element whose
/// point set touches an edge incident to the vertex.
fn nearest_element(block: &Block, v: &str) -> Result<String> {
    let vi = block.graph.vertex_idx(v)?;
    for e in block.graph.edge_recs() {
        if e.u != vi && e.v != vi {
            continue;
        }
        for sample in block.r.cs.grid.edge_samples(&e.id) {
            for (i, pts) in block.r.points.iter().enumerate() {
                if pts.contains(&sample) {
                    return Ok(block.r.ids[i].clone());
                }
            }
        }
    }
    Err(Error::internal(format!("no element near vertex `{v}`")))
}

/// Node images of the combined tree under a graph automorphism.
pub fn induced_combined_images(
    g: &GraphContinuum,
    combined: &CombinedTree,
    p: &CutPointPretree,
    auto: &Automorphism,
) -> Result<BTreeMap<String, String>> {
    // Class image: the class containing the image of a representative.
    let class_image = |i: usize| -> Result<usize> {
        let rep = p.analysis.classes[i].representative();
        let img = auto.apply(rep);
        p.analysis
            .class_of_point(&img)
            .ok_or_else(|| Error::input("automorphism does not permute classes".to_string()))
    };
    // Block image: blocks are indexed by class.
    let block_of_class: BTreeMap<usize, usize> = combined
        .blocks
        .iter()
        .enumerate()
        .map(|(bi, b)| (b.class_index, bi))
        .collect();
    let mut images = BTreeMap::new();
    for node in &combined.tree.nodes {
        let id = &node.id;
        let image = if let Some(v) = id.strip_prefix("cut:") {
            format!("cut:{}", auto.vertex_map[v])
        } else if let Some(cidx) = id.strip_prefix("class:") {
            let i: usize = cidx.parse().unwrap();
            format!("class:{}", class_image(i)?)
        } else {
            // Block-namespaced node.
            let (bpart, local) = id
                .split_once('.')
                .ok_or_else(|| Error::internal(format!("unexpected node id `{id}`")))?;
            let bi: usize = bpart.strip_prefix('b').unwrap().parse().unwrap();
            let block = &combined.blocks[bi];
            let target_class = class_image(block.class_index)?;
            let tbi = *block_of_class
                .get(&target_class)
                .ok_or_else(|| Error::internal("image class has no block"))?;
            let target = &combined.blocks[tbi];
            let local_image = if let Some(v) = local.strip_prefix("end:") {
                format!("end:{}", auto.vertex_map[v])
            } else {
                // Match elements by image point sets.
                let ei = block
                    .r
                    .ids
                    .iter()
                    .position(|eid| eid == local)
                    .ok_or_else(|| Error::internal(format!("unknown element `{local}`")))?;
                let image_points: BTreeSet<Point> =
                    block.r.points[ei].iter().map(|pt| auto.apply(pt)).collect();
                let ti = target
                    .r
                    .points
                    .iter()
                    .position(|pts| *pts == image_points)
                    .ok_or_else(|| {
                        Error::input(format!(
                            "automorphism does not permute the collection at `{local}`"
                        ))
                    })?;
                target.r.ids[ti].clone()
            };
            format!("b{tbi}.{local_image}")
        };
        images.insert(id.clone(), image);
    }
    let _ = g;
    let distinct: BTreeSet<&String> = images.values().collect();
    if distinct.len() != images.len() {
        return Err(Error::input("induced combined map is not a bijection"));
    }
    Ok(images)
}

/// Node images of a JSJ tree under an automorphism of a cut-point-free
/// continuum.
pub fn induced_jsj_images(r: &RSystem, auto: &Automorphism) -> Result<BTreeMap<String, String>> {
    let mut images = BTreeMap::new();
    for (i, id) in r.ids.iter().enumerate() {
        let image_points: BTreeSet<Point> = r.points[i].iter().map(|p| auto.apply(p)).collect();
        let j = r
            .points
            .iter()
            .position(|pts| *pts == image_points)
            .ok_or_else(|| Error::input(format!("automorphism does not permute `{id}`")))?;
        images.insert(id.clone(), r.ids[j].clone());
    }
    let distinct: BTreeSet<&String> = images.values().collect();
    if distinct.len() != images.len() {
        return Err(Error::input("induced collection map is not a bijection"));
    }
    Ok(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn barbell_block_closure_is_triangle_without_cut_points() {
        let g = corpus::load("barbell");
        let p = build_p(&g, 3).unwrap();
        let nonsingleton: Vec<usize> = (0..p.analysis.classes.len())
            .filter(|&i| !p.analysis.classes[i].singleton)
            .collect();
        assert_eq!(nonsingleton.len(), 2);
        let block = block_closure(&g, &p, nonsingleton[0]).unwrap();
        assert_eq!(block.vertex_ids().len(), 3);
        assert_eq!(block.edge_recs().len(), 3);
    }

    #[test]
    fn c5_block_closure_is_c5_itself() {
        let g = corpus::load("c5");
        let p = build_p(&g, 3).unwrap();
        let block = block_closure(&g, &p, 0).unwrap();
        assert_eq!(block.vertex_ids().len(), 5);
        assert_eq!(block.edge_recs().len(), 5);
    }

    #[test]
    fn twok4_block_closure_is_k4() {
        let g = corpus::load("twok4");
        let p = build_p(&g, 3).unwrap();
        let block = block_closure(&g, &p, 0).unwrap();
        assert_eq!(block.vertex_ids().len(), 4);
        assert_eq!(block.edge_recs().len(), 6);
    }

    #[test]
    fn barbell_combined_is_path_between_necklace_leaves() {
        let g = corpus::load("barbell");
        let c = build_combined_tree(&g, 3).unwrap();
        // necklace -- glue -- u1 -- bridge -- v1 -- glue -- necklace
        assert_eq!(c.tree.nodes.len(), 4);
        assert_eq!(c.tree.arcs.len(), 3);
        let necklaces: Vec<usize> = (0..c.tree.nodes.len())
            .filter(|&i| c.tree.nodes[i].kind == NodeKind::Necklace)
            .collect();
        assert_eq!(necklaces.len(), 2);
        for n in necklaces {
            assert_eq!(c.tree.degree(n), 1);
        }
        assert_eq!(c.attachments.len(), 2);
    }

    #[test]
    fn c5_combined_is_single_node() {
        let g = corpus::load("c5");
        let c = build_combined_tree(&g, 3).unwrap();
        assert_eq!(c.tree.nodes.len(), 1);
        assert_eq!(c.tree.nodes[0].kind, NodeKind::Necklace);
    }

    #[test]
    fn twok4_attaches_at_the_maximal_inseparable_sets() {
        let g = corpus::load("twok4");
        let c = build_combined_tree(&g, 3).unwrap();
        // Two 13-node spiders joined through the shared cut vertex.
        assert_eq!(c.tree.nodes.len(), 27);
        assert_eq!(c.attachments.len(), 2);
        for (cut, attach) in &c.attachments {
            assert_eq!(cut, "cut:w");
            assert!(
                attach.contains("maxinsep"),
                "expected maxinsep attachment, got {attach}"
            );
        }
    }

    #[test]
    fn theta_pendant_combined_structure() {
        let g = corpus::load("theta_pendant");
        let c = build_combined_tree(&g, 3).unwrap();
        // theta block: star of 4; triangle block: single necklace; plus the
        // cut vertex between them.
        assert_eq!(c.tree.nodes.len(), 6);
        assert_eq!(c.tree.arcs.len(), 5);
        // The theta-side attachment is the inseparable pair {a,b}.
        let pair_attach = c
            .attachments
            .iter()
            .filter(|(_, a)| a.contains("pair"))
            .count();
        let necklace_attach = c
            .attachments
            .iter()
            .filter(|(_, a)| a.contains("necklace"))
            .count();
        assert_eq!((pair_attach, necklace_attach), (1, 1));
    }

    #[test]
    fn arc_combined_equals_cut_tree() {
        let g = corpus::load("arc");
        let c = build_combined_tree(&g, 3).unwrap();
        assert_eq!(c.tree.nodes.len(), 2);
        assert_eq!(c.tree.arcs.len(), 1);
        assert!(c.blocks.is_empty());
    }
}
