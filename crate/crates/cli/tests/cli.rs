use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn evasion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evasion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn hollow_triangle_homology() {
    let v = json_of(&evasion(&["homology", "--facets", "[[0,1],[1,2],[0,2]]", "-p", "5"]));
    assert_eq!(v["reduced_dims"], serde_json::json!([0, 1]));
    assert_eq!(v["euler_characteristic"], 0);
}

#[test]
fn contains_cycle_on_four_vertices_is_evasive() {
    let v = json_of(&evasion(&["dtc", "--property", "contains_cycle", "-n", "4"]));
    assert_eq!(v["dtc"], 6);
    assert_eq!(v["evasive"], true);
}

#[test]
fn verify_all_passes() {
    let out = evasion(&["verify", "all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["failed"], false);
}

#[test]
fn verify_output_is_independent_of_thread_count() {
    let one = evasion(&["verify", "all", "--threads", "1"]);
    let four = evasion(&["verify", "all", "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn repeated_random_runs_are_identical() {
    let args = ["homology", "--random", "9", "--seed", "0x1234", "-p", "3"];
    assert_eq!(evasion(&args).stdout, evasion(&args).stdout);
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let out = evasion(&["homology", "--fixture", "torus", "-p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--prime"));

    let out = evasion(&["homology", "--facets", "[[0,1]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--facets"));

    let out = evasion(&["verify", "no-such-theorem"]);
    assert_eq!(out.status.code(), Some(2));

    let out = evasion(&["homology", "--format", "dot", "--fixture", "torus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--format"));
}

#[test]
fn hypothesis_violation_is_not_applicable() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"left": 1, "right": 2, "ones": [1]}}"#).unwrap();
    let v = json_of(&evasion(&[
        "verify",
        "yao-bipartite",
        "--table",
        file.path().to_str().unwrap(),
    ]));
    assert_eq!(v["cases"][0]["report"]["verdict"]["status"], "not-applicable");
    assert_eq!(v["failed"], false);
}

#[test]
fn complex_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"facets": [[0,1,2],[2,3]]}}"#).unwrap();
    let v = json_of(&evasion(&["collapse", "--input", file.path().to_str().unwrap()]));
    assert_eq!(v["outcome"], "collapsible");
    assert_eq!(v["terminal"]["facets"].as_array().unwrap().len(), 1);
}

#[test]
fn hollow_triangle_does_not_collapse() {
    let v = json_of(&evasion(&["collapse", "--fixture", "hollow-triangle"]));
    assert_eq!(v["outcome"], "not_collapsible");
}

#[test]
fn collapse_onto_a_subcomplex() {
    let v = json_of(&evasion(&["collapse", "--fixture", "full:2", "--onto", "[[0,1]]"]));
    assert_eq!(v["outcome"], "certificate");
}

#[test]
fn subdivision_of_an_edge() {
    let v = json_of(&evasion(&["subdivide", "--fixture", "full:1"]));
    assert_eq!(v["facets"].as_array().unwrap().len(), 2);
    assert_eq!(v["labels"].as_array().unwrap().len(), 3);
    assert_eq!(v["euler_characteristic"], 1);
}

#[test]
fn rotation_quotient_of_the_triangle() {
    let v = json_of(&evasion(&["quotient", "--fixture", "full:2", "--perm", "(0 1 2)"]));
    assert_eq!(v["group_order"], 3);
    assert_eq!(v["orbits"], serde_json::json!([[0, 1, 2]]));
    assert_eq!(v["invariant_simplices"], serde_json::json!([[0, 1, 2]]));
    assert_eq!(v["invariant_is_subcomplex"], false);
}

#[test]
fn delta_of_connectivity_on_three_vertices() {
    let v = json_of(&evasion(&["delta", "--property", "connected", "-n", "3"]));
    assert_eq!(v["facets"], serde_json::json!([[0], [1], [2]]));
    assert_eq!(v["monotone"], "monotone");
    assert_eq!(v["invariant"], "invariant");
}

#[test]
fn truth_table_property() {
    // edge 0 present: a dictator, decided by one query
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"n": 3, "ones": [1, 3, 5, 7]}}"#).unwrap();
    let v = json_of(&evasion(&["dtc", "--table", file.path().to_str().unwrap(), "--tree"]));
    assert_eq!(v["dtc"], 1);
    assert_eq!(v["tree"]["nodes"].as_array().unwrap().len(), 3);
}

#[test]
fn dot_exports() {
    let out = evasion(&["export-dot", "--fixture", "full:1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph faces {"));
    assert_eq!(text.matches("->").count(), 2);

    let out = evasion(&[
        "dtc",
        "--property",
        "has_edge",
        "-n",
        "3",
        "--param",
        "0",
        "--format",
        "dot",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
}

#[test]
fn verify_a_single_property() {
    let v = json_of(&evasion(&[
        "verify",
        "lower-bound",
        "--property",
        "connected",
        "-n",
        "5",
    ]));
    assert_eq!(v["cases"][0]["report"]["verdict"]["status"], "pass");
}
