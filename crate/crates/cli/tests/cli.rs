use std::path::Path;
use std::process::{Command, Output};

fn flipgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flipgap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(|r| r.trim().to_string()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn family_glue_and_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for which in ["plus", "minus"] {
        let o = flipgap(&["family", "--n", "3", "--which", which, "-o", &p(d, which)]);
        assert!(o.status.success());
    }
    let o = flipgap(&["flip-distance", "--from", &p(d, "plus"), "--to", &p(d, "minus"), "--emit-path", &p(d, "path")]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "distance"), "10");

    let o = flipgap(&["glue", "--plus", &p(d, "plus"), "--minus", &p(d, "minus"), "-o", &p(d, "sphere")]);
    assert!(o.status.success());

    let o = flipgap(&["min-tet", "--sphere", &p(d, "sphere"), "--counting-bound", "--emit", &p(d, "tets")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(value(&out, "best"), "9");
    assert_eq!(value(&out, "optimal"), "true");

    let o = flipgap(&["validate", "--sphere", &p(d, "sphere"), "--tets", &p(d, "tets")]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "euler"), "1");

    let o = flipgap(&["lp-bound", "--sphere", &p(d, "sphere")]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "objective"), "9");

    let o = flipgap(&["recut", "--sphere", &p(d, "sphere"), "--stop-at", "9"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "distance"), "9");

    let o = flipgap(&["render", "--input", &p(d, "path"), "--kind", "path", "--from", &p(d, "plus")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("<g class=\"frame\">").count(), 11);
}

#[test]
fn double_cap_construction() {
    let dir = tempfile::tempdir().unwrap();
    let cap = p(dir.path(), "cap");
    assert!(flipgap(&["double-cap", "-o", &cap]).status.success());
    let o = flipgap(&["cone", "--sphere", &cap, "--search-pairs"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "tets"), "43");
    let o = flipgap(&["cone", "--sphere", &cap, "--vertex", "11"]);
    assert_eq!(value(&stdout(&o), "tets"), "44");
    let o = flipgap(&["bad-cycles", "--sphere", &cap]);
    assert!(o.status.success());
    let out = stdout(&o);
    let total = out.lines().last().unwrap().strip_prefix("bad ").unwrap();
    assert!(total.parse::<usize>().unwrap() > 0);
    assert!(out.contains("bad length 5 cycle"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(p(d, "junk"), "hello\n").unwrap();
    let o = flipgap(&["flip-distance", "--from", &p(d, "junk"), "--to", &p(d, "junk")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    flipgap(&["family", "--n", "3", "-o", &p(d, "plus")]);
    flipgap(&["family", "--n", "3", "--which", "minus", "-o", &p(d, "minus")]);
    let o = flipgap(&["flip-distance", "--from", &p(d, "plus"), "--to", &p(d, "minus"), "--max-nodes", "3"]);
    assert_eq!(o.status.code(), Some(3));

    let o = flipgap(&["verify-family", "--n-max", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(json["rows"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));
}
