use std::path::PathBuf;
use std::process::{Command, Output};

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn wautom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wautom")).args(args).output().expect("binary runs")
}

fn model(name: &str) -> String {
    models().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn word_weight() {
    let o = wautom(&["weight", &model("example.wa"), "--state", "A", "--word", "ab"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "14\n");
}

#[test]
fn partition_of_the_example() {
    let o = wautom(&["equiv-complete", &model("example.wa")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("partition: {A} {B} {C}"));
}

#[test]
fn json_output_parses() {
    let o = wautom(&["--json", "equiv-complete", &model("example.wa")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "completed");
    assert_eq!(v["partition"].as_array().unwrap().len(), 3);
}

#[test]
fn threshold_violation() {
    let o = wautom(&["universality", &model("threshold.wa"), "--initial", "0", "--threshold", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("NOT UNIVERSAL"));
    assert!(out.contains("witness: aaaa"));
    assert!(out.contains("weight: 4"));
    let dir = tempfile::tempdir().unwrap();
    let free = dir.path().join("free.wa");
    std::fs::write(
        &free,
        "@semiring tropical-nat\n@alphabet a,b\n@states X,Y\n@edge X a X 0\n@edge X b X 3\n\
          @edge X b Y 0\n@edge Y a X 0\n@edge Y b Y 0\n@final X 2\n@final Y 1\n",
    )
    .unwrap();
    let o = wautom(&["universality", free.to_str().unwrap(), "--initial", "0,inf", "--threshold", "2"]);
    assert!(stdout(&o).starts_with("UNIVERSAL"), "{}", stdout(&o));
    let o = wautom(&["universality", free.to_str().unwrap(), "--initial", "0,inf", "--threshold", "1"]);
    assert!(stdout(&o).contains("witness: ε"));
}

#[test]
fn looping_instance_exhausts_the_budget() {
    let o = wautom(&["--budget", "300", "equiv-complete", &model("looping.wa")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("budget exhausted"));
}

#[test]
fn upto_verdicts() {
    let o = wautom(&["equiv-upto", &model("example.wa"), "--left", "0,1,0", "--right", "0,1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUIVALENT"));
    let o = wautom(&["equiv-upto", &model("example.wa"), "--left", "1,0,0", "--right", "0,1,0"]);
    assert!(stdout(&o).starts_with("NOT EQUIVALENT"));
}

#[test]
fn cts_backends() {
    let o = wautom(&["cts-bisim", &model("upgrade.cts")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("B ~ C : {phi2}"));
    let bdd = stdout(&wautom(&["cts-bisim", &model("features.cts"), "--backend", "bdd"]));
    let downset = stdout(&wautom(&["cts-bisim", &model("features.cts"), "--backend", "downset"]));
    assert_eq!(bdd.lines().skip(1).collect::<Vec<_>>(), downset.lines().skip(1).collect::<Vec<_>>());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.wa");
    std::fs::write(&bad, "@semiring rational\n@alphabet a\n@states A\n@edge A a Z 1\n").unwrap();
    let o = wautom(&["equiv-complete", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let o = wautom(&["equiv-complete", dir.path().join("missing.wa").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    // universality only runs over the tropical naturals
    let o = wautom(&["universality", &model("example.wa"), "--initial", "1,0,0", "--threshold", "3"]);
    assert_eq!(o.status.code(), Some(4));

    let o = wautom(&["cts-bisim", &model("upgrade.cts"), "--backend", "bdd"]);
    assert_eq!(o.status.code(), Some(4));

    let o = wautom(&["equiv-upto", &model("example.wa"), "--left", "1,0", "--right", "0,1,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn semiring_definitions() {
    let dir = tempfile::tempdir().unwrap();
    let ws = dir.path().to_str().unwrap();
    let poset = dir.path().join("chain.poset");
    std::fs::write(&poset, "@conditions lo,hi\n@le lo hi\n").unwrap();
    let ok = |args: &[&str]| wautom(&[&["--workspace", ws][..], args].concat()).status.code();
    assert_eq!(ok(&["semiring", "define-lattice", "chain", "chain.poset"]), Some(0));
    assert_eq!(ok(&["semiring", "define-zmod", "z6", "6"]), Some(0));
    assert_eq!(ok(&["semiring", "define-product", "pair", "z6", "chain"]), Some(0));
    assert_eq!(ok(&["semiring", "define-zmod", "z6", "7"]), Some(2));

    std::fs::write(
        dir.path().join("m.wa"),
        "@semiring pair\n@alphabet a\n@states A,B\n@edge A a B (5,{lo,hi})\n@final B (1,{lo})\n",
    )
    .unwrap();
    let o = wautom(&["--workspace", ws, "weight", "m.wa", "--state", "A", "--word", "a"]);
    assert_eq!(stdout(&o), "(5,{lo})\n", "{}", String::from_utf8_lossy(&o.stderr));
    let list = stdout(&wautom(&["--workspace", ws, "semiring", "list"]));
    assert!(list.contains("pair"), "{list}");

    // z6 is used by pair, pair by m.wa
    assert_eq!(ok(&["semiring", "delete", "z6"]), Some(2));
    assert_eq!(ok(&["semiring", "delete", "pair"]), Some(2));
    std::fs::remove_file(dir.path().join("m.wa")).unwrap();
    assert_eq!(ok(&["semiring", "delete", "pair"]), Some(0));
    assert_eq!(ok(&["semiring", "delete", "z6"]), Some(0));
    assert_eq!(ok(&["semiring", "delete", "boolean"]), Some(2));
}

#[test]
fn generated_models_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.wa");
    let args = ["gen-random", "--semiring", "zmod(6)", "--states", "4", "--seed", "9"];
    let o = wautom(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(stdout(&wautom(&["check", out.to_str().unwrap()])), text);
    assert_eq!(stdout(&wautom(&args)), text);
    let dot = stdout(&wautom(&["export-dot", out.to_str().unwrap()]));
    assert!(dot.starts_with("digraph"));
}

#[test]
fn small_bench() {
    let o = wautom(&[
        "--json", "bench", "--semiring", "rational", "--states", "3,4", "--runs", "5", "--percentiles", "50,95",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["runtimes"].as_array().unwrap().len(), 5);
}
