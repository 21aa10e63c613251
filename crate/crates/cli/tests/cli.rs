use std::process::{Command, Output};

fn rootfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootfree")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = rootfree(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn roots_listing() {
    let o = rootfree(&["roots", "A3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
    let c3 = stdout(&rootfree(&["roots", "C3"]));
    let order: Vec<&str> = c3.lines().map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(
        order,
        ["[1,0,0]", "[0,1,0]", "[0,0,1]", "[1,1,0]", "[0,1,1]", "[1,2,0]", "[1,1,1]", "[1,2,1]", "[1,2,2]"]
    );
    let bad = rootfree(&["roots", "Z9"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn free_verdicts() {
    let o = rootfree(&["free", "A3", "w:", "2", "1", "3", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("nonfree"));
    assert!(stdout(&rootfree(&["free", "A3", "w: 1 2 3 2 1"])).starts_with("free {1,2,2}"));
    assert!(stdout(&rootfree(&["free", "A3", "--padded", "w:"])).starts_with("free {0,0,0}"));
    let v = json(&["free", "A3", "w: 1 2 3 2 1"]);
    assert_eq!(v["verdict"]["status"], "free");
    assert_eq!(v["verdict"]["coexponents"], serde_json::json!([1, 2, 2]));
    assert_eq!(v["poincare"], serde_json::json!([1, 5, 8, 4]));
    // The same subset given as a mask and as a root list.
    let by_mask = json(&["free", "A3", v["mask"].as_str().unwrap()]);
    let roots: Vec<String> =
        v["subset"].as_array().unwrap().iter().map(|r| r.to_string()).collect();
    let by_roots = json(&["free", "A3", &roots.join(" ")]);
    assert_eq!(by_mask, v);
    assert_eq!(by_roots, v);
    assert_eq!(rootfree(&["free", "A3", "nonsense"]).status.code(), Some(2));
    assert_eq!(rootfree(&["free", "A3", "w: 4"]).status.code(), Some(2));
}

#[test]
fn translation() {
    let run = |s: &str| stdout(&rootfree(&["translate", "A3", s, "--root", "[1,0,0]"])).trim().to_string();
    assert_eq!(run("[1,0,0] [1,1,0] [1,1,1]"), "{[1,0,0], [0,1,0], [0,1,1]}");
    assert_eq!(run("[1,0,0] [1,1,0] [1,1,1] [0,1,1]"), "{[1,0,0], [0,1,0], [0,1,1], [1,1,1]}");
    assert_eq!(run("[1,0,0] [0,1,0] [0,0,1]"), "{[1,0,0], [0,1,0], [0,0,1]}");
    let v = json(&["translate", "A3", "w: 1 2 3 2 1", "--to-ideal"]);
    assert_eq!(v["exponents"], serde_json::json!([1, 2, 2]));
    let ideal = json(&["translate", "A3", "[1,0,0] [0,1,0]", "--to-ideal"]);
    assert_eq!(ideal["path"], serde_json::json!([]));
    assert_eq!(ideal["ideal"], serde_json::json!([[1, 0, 0], [0, 1, 0]]));
    assert_eq!(rootfree(&["translate", "A3", "all"]).status.code(), Some(2));
}

#[test]
fn graphs() {
    let text = stdout(&rootfree(&["graph", "A2"]));
    assert!(text.starts_with("7 vertices, 2 edges, 5 terminal"));
    let g = json(&["graph", "A3"]);
    let f = json(&["graph", "A3", "--filtered"]);
    assert_eq!(g["edges"], f["edges"]);
    let dot = stdout(&rootfree(&["--format", "dot", "graph", "A3", "--filtered"]));
    assert!(dot.starts_with("digraph"));
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
}

#[test]
fn pattern_search() {
    let v = json(&["patterns", "A3", "--class", "biconvex"]);
    assert_eq!(v["patterns"].as_array().unwrap().len(), 1);
    assert_eq!(v["patterns"][0]["word"], "2 1 3 2");
    assert_eq!(json(&["patterns", "A2"])["patterns"], serde_json::json!([]));
    assert_eq!(json(&["patterns", "C3"])["counts"]["MINIMAL_PATTERN"], 50);
    // F4 is gated behind the full tier.
    assert_eq!(rootfree(&["patterns", "F4"]).status.code(), Some(2));
}

#[test]
fn pattern_search_is_thread_independent() {
    let one = stdout(&rootfree(&["--threads", "1", "patterns", "D4", "--class", "biconvex"]));
    let many = stdout(&rootfree(&["--threads", "4", "patterns", "D4", "--class", "biconvex"]));
    assert_eq!(one, many);
    assert!(one.starts_with("D4 biconvex minimal patterns: 4"));
}

#[test]
fn pattern_cache() {
    let dir = std::env::temp_dir().join(format!("rootfree-cli-cache-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let a = json(&["--cache", d, "patterns", "B3", "--class", "biconvex"]);
    let b = json(&["--cache", d, "patterns", "B3", "--class", "biconvex"]);
    assert_eq!(a, b);
    assert_eq!(a["patterns"].as_array().unwrap().len(), 7);
    assert!(std::fs::read_dir(&dir).unwrap().count() >= 1);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn local_checks() {
    let o = rootfree(&["verify", "L", "3", "B4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = rootfree(&["verify", "L", "3", "D4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample {"));
    assert_eq!(rootfree(&["verify", "T", "3", "A3"]).status.code(), Some(0));
    let o = rootfree(&["--format", "json", "verify", "L", "3", "D4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["counterexample"].as_array().unwrap().len(), 5);
}

#[test]
fn labelings() {
    let native = stdout(&rootfree(&["roots", "B3"]));
    let paper = stdout(&rootfree(&["--labeling", "paper", "roots", "B3"]));
    let bourbaki = stdout(&rootfree(&["--labeling", "bourbaki", "roots", "B3"]));
    assert_eq!(native, paper);
    assert_ne!(native, bourbaki);
    let v = json(&["--labeling", "bourbaki", "free", "C3", "w: 3 2 1 3 2 3"]);
    assert_eq!(v["verdict"]["status"], "nonfree");
    assert_eq!(rootfree(&["--labeling", "other", "roots", "A2"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(rootfree(&[]).status.code(), Some(2));
    assert_eq!(rootfree(&["--bogus", "roots", "A2"]).status.code(), Some(2));
    assert_eq!(rootfree(&["--format", "dot", "roots", "A2"]).status.code(), Some(2));
    assert!(rootfree(&["--help"]).status.success());
}

#[test]
fn reachability() {
    let v = json(&["reach", "C3"]);
    assert_eq!(v["ideals"], v["reached"]);
}
