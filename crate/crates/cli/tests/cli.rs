use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

const TRIANGLE: &str = "c s=1 a=2 t=3\np orp 3 3\ne 1 3 1\ne 1 2 1\ne 2 3 1\n";
const FOUR_EDGE: &str = "p orp 4 4\ne 1 4 4\ne 1 2 1\ne 2 4 1\ne 2 4 3\n";

fn orp(args: &[&str]) -> Output {
    orp_stdin(args, "")
}

fn orp_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_orp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn solve_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.gr", TRIANGLE);
    let out = orp(&["solve", "-g", &g, "-t", "3"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["y"], json!([2, 2, 0]));
    assert_eq!(doc["dest"], 3);
    assert_eq!(doc["vertices"][2]["successor"], Value::Null);

    let one = json_of(&orp(&["solve", "-g", &g, "-t", "3", "--source", "1"]));
    assert_eq!(one["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(one["vertices"][0]["id"], 1);
}

#[test]
fn saved_table_reproduces_potentials() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.gr", TRIANGLE);
    let tab = dir.path().join("tri.tab");
    let tab = tab.to_str().unwrap();
    let solved = orp(&["solve", "-g", &g, "-t", "3", "--save-table", tab]);
    assert!(solved.status.success());
    let text = std::fs::read_to_string(tab).unwrap();
    assert_eq!(
        text.lines().filter(|l| !l.starts_with(['p', 'c'])).count(),
        3
    );
    let loaded = orp(&["solve", "-g", &g, "-t", "3", "--load-table", tab]);
    assert!(loaded.status.success());
    assert_eq!(json_of(&loaded), json_of(&solved));

    // a table for another destination is refused
    let wrong = orp(&["solve", "-g", &g, "-t", "1", "--load-table", tab]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn pareto_bound_too_tight_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "four.gr", FOUR_EDGE);
    let out = orp(&["pareto", "-g", &g, "-s", "1", "-t", "4", "-B", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out), json!({ "feasible": false }));

    let ok = json_of(&orp(&["pareto", "-g", &g, "-s", "1", "-t", "4", "-B", "4"]));
    assert_eq!(ok["feasible"], true);
    assert_eq!(ok["length"], 2);
    assert_eq!(ok["path"], json!([1, 2]));

    let free = json_of(&orp(&[
        "pareto", "-g", &g, "-s", "1", "-t", "4", "-B", "inf",
    ]));
    assert_eq!(free["length"], 2);
}

#[test]
fn greedy_on_generated_bad_example_costs_13() {
    let gen = orp(&["gen", "bad-example", "-k", "1", "-M", "4"]);
    assert!(gen.status.success());
    let graph = String::from_utf8(gen.stdout).unwrap();
    let out = orp_stdin(
        &[
            "simulate",
            "-g",
            "-",
            "-s",
            "1",
            "-t",
            "2",
            "--strategy",
            "greedy",
            "-k",
            "1",
            "--worst-case",
        ],
        &graph,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json_of(&out);
    assert_eq!(doc["totalCost"], 13);
    assert_eq!(doc["stranded"], false);

    let opt = orp_stdin(
        &[
            "simulate",
            "-g",
            "-",
            "-s",
            "1",
            "-t",
            "2",
            "--strategy",
            "optimal",
            "-k",
            "1",
            "--worst-case",
        ],
        &graph,
    );
    assert_eq!(json_of(&opt)["totalCost"], 5);
}

#[test]
fn fixed_scenario_walk() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.gr", TRIANGLE);
    let out = orp(&[
        "simulate",
        "-g",
        &g,
        "-s",
        "1",
        "-t",
        "3",
        "--strategy",
        "optimal",
        "--fail",
        "0",
    ]);
    let doc = json_of(&out);
    assert_eq!(doc["totalCost"], 2);
    assert_eq!(
        doc["steps"][0],
        json!({ "from": 1, "edge": 0, "to": 1, "failed": true })
    );

    let too_many = orp(&[
        "simulate",
        "-g",
        &g,
        "-s",
        "1",
        "-t",
        "3",
        "--strategy",
        "greedy",
        "--fail",
        "0,1",
    ]);
    assert_eq!(too_many.status.code(), Some(2));
}

#[test]
fn fast_and_oracle_outputs_agree() {
    let gen = orp(&[
        "gen",
        "random",
        "-n",
        "6",
        "-m",
        "10",
        "--max-weight",
        "9",
        "--seed",
        "5",
    ]);
    let graph = String::from_utf8(gen.stdout).unwrap();
    let run = |args: &[&str]| json_of(&orp_stdin(args, &graph));

    let fast = run(&["solve", "-g", "-", "-t", "2"]);
    let slow = run(&["oracle", "orp", "-g", "-", "-t", "2"]);
    assert_eq!(fast["y"], slow["y"]);

    for k in ["0", "1", "2"] {
        let fast = run(&["korp", "-g", "-", "-t", "2", "-k", k]);
        let slow = run(&["oracle", "korp", "-g", "-", "-t", "2", "-k", k]);
        assert_eq!(fast["y"], slow["y"], "k = {k}");
        assert_eq!(fast["k"], slow["k"]);
    }

    let fast = run(&["svalues", "-g", "-", "-t", "2"]);
    let slow = run(&["oracle", "svalues", "-g", "-", "-t", "2"]);
    for (a, b) in fast["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .zip(slow["vertices"].as_array().unwrap())
    {
        assert_eq!(a["dstar"], b["dstar"]);
        assert_eq!(a["svalue"], b["svalue"]);
    }
}

#[test]
fn every_subcommand_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.gr", TRIANGLE);
    let cases: [&[&str]; 6] = [
        &["gen", "random", "-n", "50", "-m", "120", "--seed", "9"],
        &["solve", "-g", &g, "-t", "3"],
        &["korp", "-g", &g, "-t", "3", "-k", "1"],
        &["svalues", "-g", &g, "-t", "3"],
        &[
            "simulate",
            "-g",
            &g,
            "-s",
            "2",
            "-t",
            "3",
            "--strategy",
            "greedy",
            "-k",
            "2",
            "--worst-case",
        ],
        &["oracle", "paths", "-g", &g, "-s", "1", "-t", "3"],
    ];
    for args in cases {
        let a = orp(args);
        let b = orp(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = json_of(&orp(&["bench", "--sizes", "256,512", "--seed", "3"]));
    let b = json_of(&orp(&["bench", "--sizes", "256,512", "--seed", "3"]));
    for (x, y) in a["runs"]
        .as_array()
        .unwrap()
        .iter()
        .zip(b["runs"].as_array().unwrap())
    {
        assert_eq!(x["heapPops"], y["heapPops"]);
        assert_eq!(x["contractions"], y["contractions"]);
        assert!(x["contractions"].as_u64().unwrap() < x["n"].as_u64().unwrap());
    }
}

#[test]
fn float_lengths_are_accepted() {
    let out = orp_stdin(
        &["solve", "-g", "-", "-t", "3"],
        "p orp 3 3\ne 1 3 1.5\ne 1 2 0.5\ne 2 3 1\n",
    );
    assert!(out.status.success());
    assert_eq!(json_of(&out)["y"], json!([1.5, 2, 0]));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.gr", TRIANGLE);
    let bad = write(dir.path(), "bad.gr", "p orp 2 1\ne 1 3 1\n");
    for args in [
        vec!["solve", "-g", "/nonexistent/graph", "-t", "1"],
        vec!["solve", "-g", &bad, "-t", "1"],
        vec!["solve", "-g", &g, "-t", "4"],
        vec!["solve", "-g", &g],
        vec!["solve", "-g", &g, "-t", "1", "--frobnicate"],
        vec!["pareto", "-g", &g, "-s", "1", "-t", "3", "-B", "-1"],
        vec![
            "simulate",
            "-g",
            &g,
            "-s",
            "1",
            "-t",
            "3",
            "--strategy",
            "greedy",
        ],
    ] {
        let out = orp(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn guard_violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.gr", TRIANGLE);
    let out = orp(&["korp", "-g", &g, "-t", "3", "-k", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let budget = orp(&[
        "simulate",
        "-g",
        &g,
        "-s",
        "1",
        "-t",
        "3",
        "--strategy",
        "greedy",
        "-k",
        "2",
        "--worst-case",
        "--budget",
        "2",
    ]);
    assert_eq!(budget.status.code(), Some(1));
}
