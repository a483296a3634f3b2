use std::path::Path;
use std::process::Command;

use chromloc_cli::{parse_report, render, ExitStatus, Report, RunConfig};
use clap::Parser;
use graphviz_rust::dot_structures::{Graph, Stmt};

fn config(args: &[&str]) -> RunConfig {
    RunConfig::try_parse_from(std::iter::once("chromloc").chain(args.iter().copied())).unwrap()
}

fn text(args: &[&str]) -> (String, ExitStatus) {
    render(&config(args)).unwrap()
}

fn structured(args: &[&str]) -> Report {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    parse_report(&text(&all).0).unwrap()
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_chromloc"))
        .args(args)
        .env_remove("CHROMLOC_MAX_GROUP_ORDER")
        .env_remove("CHROMLOC_MAX_PAIRS")
        .env_remove("CHROMLOC_HEIGHT_BOUND")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// `(nodes, edges)` of a parsed DOT digraph.
fn dot_shape(dot: &str) -> (Vec<String>, usize) {
    let graph = graphviz_rust::parse(dot).expect("DOT parses");
    let stmts = match graph {
        Graph::DiGraph { stmts, .. } => stmts,
        Graph::Graph { .. } => panic!("expected a digraph"),
    };
    let mut nodes = Vec::new();
    let mut edges = 0;
    for s in stmts {
        match s {
            Stmt::Node(n) => nodes.push(format!("{:?}", n.id.0)),
            Stmt::Edge(_) => edges += 1,
            _ => {}
        }
    }
    (nodes, edges)
}

#[test]
fn transfer_enumerate_on_c9_lists_five_systems() {
    let (out, status) = text(&["transfer-enumerate", "--group", "cyclic:9"]);
    assert_eq!(status, ExitStatus::Success);
    assert!(out.starts_with("group cyclic:9: 5 transfer systems"));
    match structured(&["transfer-enumerate", "--group", "cyclic:9"]) {
        Report::TransferSystems(r) => {
            assert_eq!(r.count, 5);
            assert_eq!(r.systems.len(), 5);
            assert!(r.systems[0].pairs.is_empty());
            assert_eq!(r.systems[4].pairs.len(), 3);
        }
        other => panic!("unexpected report {other:?}"),
    }
}

#[test]
fn decide_reports_verdicts() {
    let certified = structured(&["decide", "--group", "cyclic:4", "--operad", "complete", "--locus", "ell:2,(1,0,0)"]);
    let Report::Decision(r) = certified else { panic!() };
    assert_eq!(r.verdict, "certified-preserves");
    assert!(r.witnesses.is_empty());

    let refused = structured(&["decide", "--group", "cyclic:4", "--operad", "complete", "--ell", "2:0,1,0"]);
    let Report::Decision(r) = refused else { panic!() };
    assert_eq!(r.verdict, "no-guarantee");
    assert!(!r.witnesses.is_empty());

    let trivial = structured(&["decide", "--group", "cyclic:4", "--operad", "trivial", "--ell", "2:0,1,0"]);
    let Report::Decision(r) = trivial else { panic!() };
    assert_eq!(r.verdict, "certified-preserves");
}

#[test]
fn decide_single_norm() {
    let (out, _) = text(&["decide", "--group", "cyclic:4", "--norm", "C2#0,C4#0", "--ell", "2:0,1,0"]);
    assert!(out.contains("verdict: certified-preserves"), "{out}");
    let (out, _) = text(&["decide", "--group", "cyclic:4", "--norm", "C1#0,C2#0", "--ell", "2:0,1,0"]);
    assert!(out.contains("verdict: no-guarantee"), "{out}");
}

#[test]
fn dot_subgroup_lattice_of_s3_has_six_nodes() {
    let (out, _) = text(&["dot", "--group", "symmetric:3", "--what", "subgroup-lattice"]);
    let (nodes, edges) = dot_shape(&out);
    assert_eq!(nodes.len(), 6);
    assert_eq!(edges, 8);
}

#[test]
fn dot_c4_lattice_is_a_chain() {
    let (out, _) = text(&["dot", "--group", "cyclic:4", "--what", "subgroup-lattice"]);
    let (nodes, edges) = dot_shape(&out);
    assert_eq!(nodes.len(), 3);
    assert_eq!(edges, 2);
    assert!(out.contains("\"C1#0\" -> \"C2#0\"") && out.contains("\"C2#0\" -> \"C4#0\""));
}

#[test]
fn dot_transfer_poset_of_cp2_has_five_nodes() {
    for g in ["cyclic:4", "cyclic:9", "cyclic:25"] {
        let (out, _) = text(&["dot", "--group", g, "--what", "transfer-poset"]);
        let (nodes, edges) = dot_shape(&out);
        assert_eq!(nodes.len(), 5, "{g}");
        assert_eq!(edges, 5, "{g}");
    }
    let (out, _) = text(&["transfer-enumerate", "--group", "cyclic:4", "--format", "dot"]);
    assert_eq!(dot_shape(&out).0.len(), 5);
}

#[test]
fn dot_prime_poset_of_c2() {
    let (out, _) = text(&["dot", "--group", "cyclic:2", "--what", "prime-poset", "--height-bound", "2"]);
    let (nodes, edges) = dot_shape(&out);
    assert_eq!(nodes.len(), 6);
    assert_eq!(edges, 4);
    for name in ["P(C1#0,0,any)", "P(C1#0,2,2)", "P(C2#0,0,any)", "P(C2#0,2,2)"] {
        assert!(out.contains(&format!("\"{name}\"")), "{name}");
    }
    assert!(out.contains("\"P(C2#0,2,2)\" -> \"P(C2#0,1,2)\""));
}

#[test]
fn every_dot_output_parses() {
    for g in ["cyclic:6", "dihedral:8", "quaternion", "cyclic:2*cyclic:2"] {
        for what in ["subgroup-lattice", "transfer-poset", "prime-poset"] {
            let (out, _) = text(&["dot", "--group", g, "--what", what]);
            assert!(!dot_shape(&out).0.is_empty(), "{g} {what}");
        }
    }
}

const COMMANDS: &[&[&str]] = &[
    &["lattice", "--group", "dihedral:8"],
    &["transfer-enumerate", "--group", "symmetric:3"],
    &["spectrum-validate", "--ell", "2:3,1,0"],
    &["spectrum-validate", "--group", "cyclic:9", "--locus", "ell:3:1,0,inf"],
    &["decide", "--group", "cyclic:8", "--operad", "complete", "--ell", "2:0,1,0,0"],
    &["ell-enumerate", "--prime", "3", "--n", "2", "--height-bound", "2", "--include-infinity"],
    &["ell-enumerate", "--prime", "2", "--n", "2", "--height-bound", "2", "--commutative"],
    &["cross-validate", "--prime", "2", "--n", "2", "--height-bound", "2"],
];

#[test]
fn structured_reports_round_trip() {
    for args in COMMANDS {
        let mut all = args.to_vec();
        all.extend(["--format", "structured"]);
        let json = text(&all).0;
        let parsed = parse_report(&json).unwrap();
        assert_eq!(parsed.to_json(), json, "{args:?}");
        assert_eq!(parse_report(&parsed.to_json()).unwrap(), parsed);
    }
}

#[test]
fn output_is_deterministic() {
    for args in COMMANDS {
        for format in ["text", "structured"] {
            let mut all = args.to_vec();
            all.extend(["--format", format]);
            let a = binary(&all);
            let b = binary(&all);
            assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
            assert_eq!(a.stdout, b.stdout, "{args:?}");
        }
    }
}

#[test]
fn exit_codes() {
    let decide = ["decide", "--group", "cyclic:4", "--operad", "complete", "--ell", "2:0,1,0"];
    assert_eq!(binary(&decide).status.code(), Some(0));
    let mut strict = decide.to_vec();
    strict.push("--strict");
    assert_eq!(binary(&strict).status.code(), Some(1));
    let certified = ["decide", "--group", "cyclic:4", "--operad", "complete", "--ell", "2:1,0,0", "--strict"];
    assert_eq!(binary(&certified).status.code(), Some(0));

    assert_eq!(binary(&["spectrum-validate", "--ell", "2:3,1,0", "--strict"]).status.code(), Some(1));
    assert_eq!(binary(&["spectrum-validate", "--ell", "2:2,1,0", "--strict"]).status.code(), Some(0));

    for bad in [
        &["lattice", "--group", "cyclic:x"][..],
        &["lattice", "--group", "cyclic:128"],
        &["decide", "--group", "cyclic:4", "--operad", "complete", "--locus", "ell:2:9,0,0"],
        &["decide", "--group", "cyclic:4", "--operad", "missing.toml", "--ell", "2:0,0,0"],
        &["ell-enumerate", "--prime", "4", "--n", "1"],
        &["ell-enumerate", "--prime", "2", "--n", "1", "--height-bound", "99"],
        &["cross-validate", "--prime", "2", "--n", "9"],
        &["spectrum-validate", "--ell", "2:0,x"],
        &["decide", "--group", "cyclic:4"],
    ] {
        let out = binary(bad);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bounds_come_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_chromloc"))
        .args(["lattice", "--group", "cyclic:8"])
        .env("CHROMLOC_MAX_GROUP_ORDER", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound exceeded"));

    let out = Command::new(env!("CARGO_BIN_EXE_chromloc"))
        .args(["transfer-enumerate", "--group", "cyclic:8"])
        .env("CHROMLOC_MAX_PAIRS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn toml_documents() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let group = write(d, "group.toml", "schema_version = 1\ngroup = \"cyclic:4\"\n");
    let locus = write(
        d,
        "locus.toml",
        r#"schema_version = 1

[[entries]]
subgroup = "C1#0"
heights = "0..1"
prime = 2

[[entries]]
subgroup = "C2#0"
heights = [0]
prime = "any"

[[entries]]
subgroup = "C4#0"
heights = [0]
prime = "any"
"#,
    );
    let ell = write(d, "ell.toml", "schema_version = 1\np = 2\nell = [1, 0, 0]\n");
    let ell_locus = structured(&["spectrum-validate", "--group", &group, "--locus", &ell]);
    let doc_locus = structured(&["spectrum-validate", "--group", &group, "--locus", &locus]);
    let (Report::LocusValidation(a), Report::LocusValidation(b)) = (&ell_locus, &doc_locus) else { panic!() };
    assert_eq!(a.locus_digest, b.locus_digest);
    assert_eq!(b.ell.as_deref(), Some("2:1,0,0"));
    assert!(b.valid);

    let open = write(d, "open.toml", "schema_version = 1\npairs = [[\"C1#0\", \"C4#0\"]]\n");
    let closed = write(d, "closed.toml", "schema_version = 1\npairs = [[\"C1#0\", \"C4#0\"]]\nclose = true\n");
    let err = render(&config(&["decide", "--group", &group, "--operad", &open, "--locus", &locus])).unwrap_err();
    assert!(err.to_string().contains("restriction"), "{err}");
    let Report::Decision(r) = structured(&["decide", "--group", &group, "--operad", &closed, "--locus", &locus]) else {
        panic!()
    };
    assert_eq!(r.subject.pairs, [["C1#0", "C2#0"], ["C1#0", "C4#0"]]);
    let complete = write(d, "complete.toml", "schema_version = 1\npreset = \"complete\"\n");
    let Report::Decision(c) = structured(&["decide", "--group", &group, "--operad", &complete, "--locus", &locus]) else {
        panic!()
    };
    let Report::Decision(k) = structured(&["decide", "--group", &group, "--operad", "complete", "--locus", &locus]) else {
        panic!()
    };
    assert_eq!(c.subject.digest, k.subject.digest);
}

#[test]
fn parse_errors_name_the_line_or_field() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let broken = write(d, "broken.toml", "schema_version = 1\n[[entries]]\nsubgroup = \n");
    let err = render(&config(&["spectrum-validate", "--group", "cyclic:2", "--locus", &broken])).unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");

    let unknown = write(d, "unknown.toml", "schema_version = 1\n[[entries]]\nsubgroup = \"C7#0\"\nheights = [0]\nprime = \"any\"\n");
    let err = render(&config(&["spectrum-validate", "--group", "cyclic:2", "--locus", &unknown])).unwrap_err();
    assert!(err.to_string().contains("entries[0].subgroup"), "{err}");

    let bad_heights = write(d, "h.toml", "schema_version = 1\n[[entries]]\nsubgroup = \"C1#0\"\nheights = \"up to 3\"\nprime = 2\n");
    let err = render(&config(&["spectrum-validate", "--group", "cyclic:2", "--locus", &bad_heights])).unwrap_err();
    assert!(err.to_string().contains("entries[0].heights"), "{err}");

    let version = write(d, "v.toml", "schema_version = 7\np = 2\nell = [0, 0]\n");
    let err = render(&config(&["spectrum-validate", "--ell", &version])).unwrap_err();
    assert!(err.to_string().contains("schema_version"), "{err}");
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lattice.json");
    let out = binary(&["lattice", "--group", "cyclic:6", "--format", "structured", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let Report::Lattice(r) = parse_report(&std::fs::read_to_string(&path).unwrap()).unwrap() else { panic!() };
    assert_eq!(r.subgroups.len(), 4);
    assert_eq!(r.covers.len(), 4);
}
