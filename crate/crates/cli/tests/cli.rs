//! End-to-end tests of the command-line interface: artifact content,
//! determinism, round-tripping, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cuttrees"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("cuttrees-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

const BARBELL: &str = "\
v u1\nv u2\nv u3\nv v1\nv v2\nv v3\n\
e ua u1 u2\ne ub u2 u3\ne uc u3 u1\n\
e bridge u1 v1 2\n\
e va v1 v2\ne vb v2 v3\ne vc v3 v1\n";

const C5: &str = "\
v c0\nv c1\nv c2\nv c3\nv c4\n\
e s0 c0 c1\ne s1 c1 c2\ne s2 c2 c3\ne s3 c3 c4\ne s4 c4 c0\n";

const K4: &str = "\
v u\nv v\nv w\nv x\n\
e uv u v\ne uw u w\ne ux u x\ne vw v w\ne vx v x\ne wx w x\n";

#[test]
fn barbell_cutpoint_tree_succeeds() {
    let path = write_temp("barbell.graph", BARBELL);
    let out = bin().args(["cutpoint-tree"]).arg(&path).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("tree nodes=4 arcs=3"), "{text}");
    assert!(text.contains("kind=bridge:bridge"), "{text}");
}

#[test]
fn disconnected_file_exits_two_citing_components() {
    let path = write_temp("disconnected.graph", "v a\nv b\nv c\ne e1 a b\n");
    let out = bin().args(["cutpoint-tree"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("disconnected"), "{err}");
    assert!(err.contains('c') && err.contains('a'), "{err}");
}

#[test]
fn c5_cutpoint_tree_is_single_node() {
    let path = write_temp("c5.graph", C5);
    let out = bin().args(["cutpoint-tree"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("tree nodes=1 arcs=0"));
}

#[test]
fn k4_jsj_tree_is_thirteen_node_spider() {
    let path = write_temp("k4.graph", K4);
    let out = bin().args(["jsj-tree"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tree nodes=13 arcs=12"), "{text}");
    assert!(text.contains("collection elements=13"), "{text}");
}

#[test]
fn jsj_tree_on_cut_point_graph_exits_four() {
    let path = write_temp("barbell2.graph", BARBELL);
    let out = bin().args(["jsj-tree"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("combined"), "{err}");
}

#[test]
fn identical_flags_give_byte_identical_artifacts() {
    let path = write_temp("k4-det.graph", K4);
    let run = || {
        let out = bin()
            .args(["jsj-tree"])
            .arg(&path)
            .args(["--metric", "canonical", "--format", "text"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn text_artifact_round_trips_to_isomorphic_tree() {
    let path = write_temp("barbell3.graph", BARBELL);
    let out = bin()
        .args(["cutpoint-tree"])
        .arg(&path)
        .args(["--metric", "geometric"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let tree_part: String = {
        let start = text.find("tree nodes=").unwrap();
        text[start..].to_string()
    };
    let tree = cuttrees::emit::tree_from_text(&tree_part).unwrap();
    assert_eq!(cuttrees::emit::tree_to_text(&tree), tree_part);
}

#[test]
fn action_reports_elliptic_with_bridge_midpoint() {
    let graph = write_temp("barbell4.graph", BARBELL);
    let map = write_temp(
        "barbell-swap.map",
        "pv u1 v1\npv v1 u1\npv u2 v2\npv v2 u2\npv u3 v3\npv v3 u3\n",
    );
    let out = bin()
        .args(["action"])
        .arg(&graph)
        .arg("--map")
        .arg(&map)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(
        text.contains("tree=cutpoint nonnesting=PASS type=elliptic"),
        "{text}"
    );
    assert!(text.contains("midpoint"), "{text}");
    assert!(text.contains("connected=true"), "{text}");
}

#[test]
fn bad_automorphism_exits_two() {
    let graph = write_temp("barbell5.graph", BARBELL);
    let map = write_temp("bad.map", "pv u1 u2\n");
    let out = bin()
        .args(["action"])
        .arg(&graph)
        .arg("--map")
        .arg(&map)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_single_graph_passes() {
    let path = write_temp("theta.graph", "v a\nv b\ne e1 a b\ne e2 a b\ne e3 a b\n");
    let out = bin().args(["verify"]).arg(&path).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_bundled_corpus_is_all_pass() {
    let out = bin().args(["verify"]).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(
        text.matches("PASS").count() > 200,
        "matrix looks truncated:\n{text}"
    );
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn unknown_flag_is_rejected() {
    let path = write_temp("c5b.graph", C5);
    let out = bin()
        .args(["cutpoint-tree"])
        .arg(&path)
        .arg("--wat")
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn dot_output_is_well_formed() {
    let path = write_temp("k4-dot.graph", K4);
    let out = bin()
        .args(["jsj-tree"])
        .arg(&path)
        .args(["--format", "dot"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("graph tree {"));
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn closed_stdout_pipe_is_not_an_error() {
    let path = write_temp("k4-pipe.graph", K4);
    let out = Command::new("bash")
        .arg("-c")
        .arg(format!(
            "set -o pipefail; {} jsj-tree {} | true",
            env!("CARGO_BIN_EXE_cuttrees"),
            path.display()
        ))
        .output()
        .unwrap();
    assert!(out.status.success(), "broken pipe must not fail: {out:?}");
    assert!(
        out.stderr.is_empty(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn on_disk_graphs_match_the_embedded_corpus() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs");
    for (name, text) in cuttrees::corpus::all() {
        let on_disk = std::fs::read_to_string(root.join(format!("{name}.graph")))
            .unwrap_or_else(|e| panic!("graphs/{name}.graph: {e}"));
        assert_eq!(
            on_disk, text,
            "graphs/{name}.graph drifted from the embedded corpus"
        );
    }
}

#[test]
fn verify_gate_runs_lemma_suite() {
    let path = write_temp("theta2.graph", "v a\nv b\ne e1 a b\ne e2 a b\ne e3 a b\n");
    let out = bin()
        .args(["jsj-tree"])
        .arg(&path)
        .args(["--verify", "lemmas"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("pretree-axioms"), "{err}");
}

#[test]
fn seed_flag_changes_base_but_stays_deterministic() {
    let path = write_temp(
        "star.graph",
        "v c\nv l1\nv l2\nv l3\ne s1 c l1\ne s2 c l2\ne s3 c l3\n",
    );
    let with_seed = |seed: &str| {
        let out = bin()
            .args(["cutpoint-tree"])
            .arg(&path)
            .args(["--metric", "canonical", "--seed", seed])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        stdout(&out)
    };
    let a1 = with_seed("cut:c");
    let a2 = with_seed("cut:c");
    assert_eq!(a1, a2);
    let b = with_seed("class:0");
    assert_ne!(a1, b, "different bases give different canonical schedules");
}
