use std::io::Write;
use std::process::Command;

use hsub::graph::{generate_random_graph, WeightMode};
use hsub::serialize_graph;
use tempfile::NamedTempFile;

struct Out {
    code: i32,
    results: Vec<String>,
    report: Vec<String>,
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn hsub(args: &[&str], input: Option<&NamedTempFile>) -> Out {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hsub"));
    cmd.args(args);
    if let Some(f) = input {
        cmd.arg("-i").arg(f.path());
    }
    let out = cmd.output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let (report, results): (Vec<String>, Vec<String>) =
        stdout.lines().map(String::from).partition(|l| l.starts_with('#'));
    Out {
        code: out.status.code().unwrap(),
        results,
        report,
    }
}

/// Fast path and `--oracle` agree on the result lines.
fn agree(args: &[&str], input: &NamedTempFile) -> Out {
    let fast = hsub(args, Some(input));
    let mut with = args.to_vec();
    with.push("--oracle");
    let slow = hsub(&with, Some(input));
    assert!(fast.code == 0 || fast.code == 3, "{args:?} exited {}", fast.code);
    assert_eq!(fast.code, slow.code, "{args:?}");
    assert_eq!(fast.results, slow.results, "{args:?}");
    fast
}

const TRIANGLE: &str = "g 3\nvw 1 1\nvw 2 2\nvw 3 3\ne 1 2\ne 2 3\ne 1 3\n";

#[test]
fn triangle_on_weighted_k3() {
    let f = file(TRIANGLE);
    let out = hsub(&["triangle", "--mode", "det"], Some(&f));
    assert_eq!(out.code, 0);
    assert_eq!(out.results, ["6.0\t1,2,3"]);
    assert!(out.report.iter().any(|l| l == "# algorithm triangle/det"));
}

#[test]
fn cycle_on_a_path_is_absent() {
    let f = file("g 4\ne 1 2\ne 2 3\ne 3 4\n");
    let out = hsub(&["cycle", "-k", "4"], Some(&f));
    assert_eq!(out.code, 3);
    assert!(out.results.is_empty());
}

#[test]
fn plan_line() {
    let out = hsub(&["plan", "--omega", "2.376", "--h", "4"], None);
    assert_eq!(out.code, 0);
    assert_eq!(out.results, ["t=3.376 a=1 b=2 c=1"]);
}

#[test]
fn exit_codes_for_bad_usage_and_input() {
    assert_eq!(hsub(&["triangle", "--mode", "nope"], None).code, 1);
    assert_eq!(hsub(&["clique"], None).code, 1);
    assert_eq!(hsub(&["plan", "--h", "2"], None).code, 1);
    let bad = file("g 3\ne 1 4\n");
    assert_eq!(hsub(&["triangle"], Some(&bad)).code, 2);
    let uncolored = file(TRIANGLE);
    assert_eq!(hsub(&["mono", "--h", "3"], Some(&uncolored)).code, 2);
}

#[test]
fn oracle_prefix_matches_flag() {
    let f = file(TRIANGLE);
    let a = hsub(&["oracle", "triangle"], Some(&f));
    let b = hsub(&["triangle", "--oracle"], Some(&f));
    assert_eq!(a.code, 0);
    assert_eq!(a.results, b.results);
    assert!(a.report.iter().any(|l| l.starts_with("# algorithm oracle/")));
}

#[test]
fn triangle_modes_agree_with_oracle() {
    for seed in 0..6 {
        let g = generate_random_graph(14, 0.4, WeightMode::Vertex, None, seed);
        let f = file(&serialize_graph(&g));
        for mode in ["det", "rand", "sparse", "allpairs"] {
            agree(&["triangle", "--mode", mode], &f);
        }
    }
}

#[test]
fn minimize_negates() {
    let f = file(TRIANGLE);
    let out = hsub(&["triangle", "--minimize"], Some(&f));
    assert_eq!(out.results, ["6.0\t1,2,3"]);
    let g = generate_random_graph(12, 0.6, WeightMode::Vertex, None, 3);
    let f = file(&serialize_graph(&g));
    agree(&["clique", "--h", "4", "--minimize"], &f);
}

#[test]
fn cliques_and_patterns_agree_with_oracle() {
    for seed in 0..4 {
        let g = generate_random_graph(11, 0.6, WeightMode::Both, None, seed);
        let f = file(&serialize_graph(&g));
        agree(&["clique", "--h", "4"], &f);
        agree(&["clique", "--h", "3", "--all-pairs"], &f);
        agree(&["clique", "--h", "4", "--by", "edge"], &f);
        agree(&["k22"], &f);
        agree(&["k2k", "-k", "3"], &f);
        agree(&["beta", "--h", "3"], &f);
        agree(&["dense-sub", "-k", "4"], &f);
        let p = file("g 3\ne 1 2\ne 2 3\n");
        let path = p.path().to_str().unwrap();
        agree(&["pattern", "--pattern-file", path], &f);
        agree(&["pattern", "--pattern-file", path, "--all-pairs"], &f);
    }
}

#[test]
fn cycles_agree_with_oracle_and_ignore_threads() {
    for seed in 0..3 {
        let g = generate_random_graph(9, 0.5, WeightMode::Edge, None, seed);
        let f = file(&serialize_graph(&g));
        for mode in ["sparse", "dense"] {
            let one = agree(&["cycle", "-k", "4", "--mode", mode, "--delta", "0.001"], &f);
            let two = hsub(
                &["cycle", "-k", "4", "--mode", mode, "--delta", "0.001", "--threads", "2"],
                Some(&f),
            );
            assert_eq!(one.results, two.results);
        }
    }
}

#[test]
fn colored_cliques_match_oracle_existence() {
    for seed in 0..4 {
        let g = generate_random_graph(10, 0.7, WeightMode::None, Some(2), seed);
        let f = file(&serialize_graph(&g));
        for h in ["3", "4"] {
            let fast = hsub(&["mono", "--h", h], Some(&f));
            let slow = hsub(&["oracle", "mono", "--h", h], Some(&f));
            assert_eq!(fast.code, slow.code);
        }
        let g = generate_random_graph(9, 0.8, WeightMode::None, Some(6), seed);
        let f = file(&serialize_graph(&g));
        let fast = hsub(&["rainbow", "--h", "3", "--seed", "7"], Some(&f));
        let slow = hsub(&["oracle", "rainbow", "--h", "3"], Some(&f));
        assert_eq!(fast.code, slow.code);
    }
}

#[test]
fn market_matches_oracle() {
    let f = file("market 2 3\nb 1 1:5 2:1\nb 2 1:5 2:5\ns 1 1:6\ns 2 1:1 2:2\n");
    for pref in ["count", "surplus", "price", "expr:C - P + R"] {
        let out = agree(&["market", "--pref", pref], &f);
        assert_eq!(out.results.len(), 2);
        assert!(out.report.iter().any(|l| l == "# blocking pairs 0"));
    }
}

#[test]
fn matrix_commands_match_oracle() {
    let f = file("m 2 2\n0 0\n1 1\nm 2 2\n0 0\n1 1\n");
    let out = agree(&["dominance"], &f);
    assert_eq!(out.results, ["m 2 2", "2 2", "0 2"]);
    let w = file("m 2 2\n0 0\n1 1\nm 2 2\n0 0\n1 1\nm 2 2\n1 2\n3 4\n");
    agree(&["dominance", "--bucket", "1"], &w);
    let d = file("m 2 2\n0 3\ninf 1\nm 2 2\n2 0\n5 inf\n");
    agree(&["msb", "--bits", "3"], &d);
}

#[test]
fn bench_prints_a_table() {
    let out = hsub(&["bench", "--suite", "bool", "--sizes", "8,16"], None);
    assert_eq!(out.code, 0);
    assert_eq!(out.results.len(), 3);
    assert!(out.results[1..].iter().all(|l| l.ends_with("\ttrue")));
}
