//! Bundled example graphs and their automorphisms.
//!
//! The set covers every node kind and betweenness case the pipeline can
//! produce: terminal singleton classes (arc, path3, star), pure circles (c5),
//! an inseparable cut pair with three complementary components (theta), a
//! maximal inseparable set (k4), bridges between blocks (barbell), a shared
//! articulation vertex between two rigid blocks (twok4), and a cut point
//! attaching a circle block to a cut-pair block (theta_pendant).

use crate::continuum::GraphContinuum;
use crate::cutpoint::Automorphism;

pub const ARC: &str = "\
# single edge: every interior point is a cut point
v a
v b
e e1 a b
";

pub const PATH3: &str = "\
v a
v b
v c
e e1 a b
e e2 b c
";

pub const STAR: &str = "\
# K_{1,3}
v c
v l1
v l2
v l3
e s1 c l1
e s2 c l2
e s3 c l3
";

pub const C5: &str = "\
v c0
v c1
v c2
v c3
v c4
e s0 c0 c1
e s1 c1 c2
e s2 c2 c3
e s3 c3 c4
e s4 c4 c0
";

pub const THETA: &str = "\
# two vertices joined by three parallel edges
v a
v b
e e1 a b
e e2 a b
e e3 a b
";

pub const K4: &str = "\
v u
v v
v w
v x
e uv u v
e uw u w
e ux u x
e vw v w
e vx v x
e wx w x
";

pub const BARBELL: &str = "\
# two triangles joined by a bridge of length 2
v u1
v u2
v u3
v v1
v v2
v v3
e ua u1 u2
e ub u2 u3
e uc u3 u1
e bridge u1 v1 2
e va v1 v2
e vb v2 v3
e vc v3 v1
";

pub const TWOK4: &str = "\
# two K4 blocks sharing the articulation vertex w
v w
v a1
v a2
v a3
v b1
v b2
v b3
e a12 a1 a2
e a13 a1 a3
e a23 a2 a3
e aw1 w a1
e aw2 w a2
e aw3 w a3
e b12 b1 b2
e b13 b1 b3
e b23 b2 b3
e bw1 w b1
e bw2 w b2
e bw3 w b3
";

pub const THETA_PENDANT: &str = "\
# theta block and a triangle block sharing the cut point a
v a
v b
v p
v q
e e1 a b
e e2 a b
e e3 a b
e tp a p
e tq a q
e tpq p q
";

/// Name/text pairs for every bundled graph, in deterministic order.
pub fn all() -> Vec<(&'static str, &'static str)> {
    vec![
        ("arc", ARC),
        ("path3", PATH3),
        ("star", STAR),
        ("c5", C5),
        ("theta", THETA),
        ("k4", K4),
        ("barbell", BARBELL),
        ("twok4", TWOK4),
        ("theta_pendant", THETA_PENDANT),
    ]
}

/// Graphs whose realizations are circles.
pub fn circle_names() -> Vec<&'static str> {
    vec!["c5"]
}

pub fn get(name: &str) -> Option<&'static str> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, t)| t)
}

pub fn load(name: &str) -> GraphContinuum {
    GraphContinuum::parse(get(name).expect("unknown corpus graph")).expect("corpus graph parses")
}

/// Nontrivial automorphisms exercised by the action suite, per graph.
/// Every map is given by vertex images; edge images are inferred.
pub fn automorphisms(name: &str) -> Vec<Vec<(&'static str, &'static str)>> {
    match name {
        "arc" => vec![vec![("a", "b"), ("b", "a")]],
        "path3" => vec![vec![("a", "c"), ("b", "b"), ("c", "a")]],
        "star" => vec![
            vec![("c", "c"), ("l1", "l2"), ("l2", "l3"), ("l3", "l1")],
            vec![("c", "c"), ("l1", "l2"), ("l2", "l1"), ("l3", "l3")],
        ],
        "c5" => vec![
            // rotation
            vec![
                ("c0", "c1"),
                ("c1", "c2"),
                ("c2", "c3"),
                ("c3", "c4"),
                ("c4", "c0"),
            ],
            // reflection fixing c0
            vec![
                ("c0", "c0"),
                ("c1", "c4"),
                ("c2", "c3"),
                ("c3", "c2"),
                ("c4", "c1"),
            ],
        ],
        "theta" => vec![vec![("a", "b"), ("b", "a")]],
        "k4" => vec![
            vec![("u", "v"), ("v", "u"), ("w", "w"), ("x", "x")],
            vec![("u", "v"), ("v", "w"), ("w", "u"), ("x", "x")],
        ],
        "barbell" => vec![
            // swap the two triangles across the bridge
            vec![
                ("u1", "v1"),
                ("u2", "v2"),
                ("u3", "v3"),
                ("v1", "u1"),
                ("v2", "u2"),
                ("v3", "u3"),
            ],
            // rotate nothing, swap the off-bridge triangle vertices
            vec![
                ("u1", "u1"),
                ("u2", "u3"),
                ("u3", "u2"),
                ("v1", "v1"),
                ("v2", "v2"),
                ("v3", "v3"),
            ],
        ],
        "twok4" => vec![
            // swap the two blocks
            vec![
                ("w", "w"),
                ("a1", "b1"),
                ("a2", "b2"),
                ("a3", "b3"),
                ("b1", "a1"),
                ("b2", "a2"),
                ("b3", "a3"),
            ],
            // rotate one block
            vec![
                ("w", "w"),
                ("a1", "a2"),
                ("a2", "a3"),
                ("a3", "a1"),
                ("b1", "b1"),
                ("b2", "b2"),
                ("b3", "b3"),
            ],
        ],
        "theta_pendant" => vec![vec![("a", "a"), ("b", "b"), ("p", "q"), ("q", "p")]],
        _ => Vec::new(),
    }
}

/// Builds the automorphism objects for a corpus graph, including identity.
pub fn automorphism_maps(name: &str, g: &GraphContinuum) -> Vec<Automorphism> {
    let mut maps = vec![Automorphism::identity(g)];
    for images in automorphisms(name) {
        let pairs: Vec<(String, String)> = images
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        maps.push(
            Automorphism::from_vertex_images(g, &pairs, &[])
                .expect("corpus automorphism must validate"),
        );
    }
    maps
}
