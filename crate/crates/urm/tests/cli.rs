use std::path::PathBuf;
use std::process::{Command, Output};

use urm::formats::{from_json, ExactDoc, InstanceDoc, MultisetDoc, PuzzleDoc, ResolutionDoc};

const FIGURE2: &str = r#"{"m":4,"components":[[1,2],[3,4],[1],[2,3],[4]]}"#;
const FIGURE3: &str = r#"{"m":5,"components":[[1,2],[3,4],[5],[1,4],[3,5],[2],[1,5],[2,3],[4]]}"#;

fn urm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_urm"))
        .args(args)
        .env_remove("URM_MAX_M")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("urm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn structured(args: &[&str]) -> String {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    stdout(&urm(&all)).trim_end().to_string()
}

#[test]
fn construct_sizes() {
    let doc: InstanceDoc = from_json(&structured(&[
        "construct",
        "--n",
        "7",
        "--m",
        "4",
        "--kind",
        "pair",
    ]))
    .unwrap();
    assert_eq!(doc.components.len(), 14);
    let doc: InstanceDoc = from_json(&structured(&["construct", "--n", "2", "--m", "5"])).unwrap();
    assert_eq!(doc.components.len(), 6);
    let doc: InstanceDoc = from_json(&structured(&[
        "construct",
        "--n",
        "1",
        "--m",
        "4",
        "--kind",
        "central",
        "--k",
        "3",
    ]))
    .unwrap();
    assert_eq!(doc.components, vec![vec![1, 3], vec![2], vec![4]]);
}

#[test]
fn structured_output_round_trips() {
    for args in [
        &["construct", "--n", "5", "--m", "4"][..],
        &[
            "construct",
            "--n",
            "3",
            "--m",
            "6",
            "--kind",
            "central",
            "--k",
            "3",
        ],
    ] {
        let text = structured(args);
        let doc: InstanceDoc = from_json(&text).unwrap();
        let inst = doc.to_instance().unwrap();
        assert_eq!(urm::formats::to_json(&InstanceDoc::from_instance(&inst)), text);
    }
    let text = structured(&["zebra", "gen", "--n", "3", "--m", "4", "--seed", "5"]);
    let doc: PuzzleDoc = from_json(&text).unwrap();
    assert_eq!(
        urm::formats::to_json(&PuzzleDoc::from_puzzle(&doc.to_puzzle().unwrap())),
        text
    );
}

#[test]
fn resolve_figures_and_unbalanced() {
    let f2 = scratch("f2.json", FIGURE2);
    assert!(stdout(&urm(&["resolve", f2.to_str().unwrap()])).starts_with("UNIQUE"));
    let f3 = scratch("f3.json", FIGURE3);
    let doc: ResolutionDoc = from_json(&structured(&["resolve", f3.to_str().unwrap()])).unwrap();
    assert_eq!(doc.status, "MULTIPLE");
    assert_eq!(doc.n, 3);
    assert_eq!(doc.witnesses.len(), 2);
    let bad = scratch("bad.json", r#"{"m":2,"components":[[1],[1,2]]}"#);
    let out = stdout(&urm(&["resolve", bad.to_str().unwrap(), "--n", "2"]));
    assert!(out.starts_with("UNRESOLVABLE"));
}

#[test]
fn resolve_reads_instances() {
    let inst = structured(&["construct", "--n", "6", "--m", "4"]);
    let path = scratch("inst.json", &inst);
    let doc: ResolutionDoc = from_json(&structured(&["resolve", path.to_str().unwrap()])).unwrap();
    assert_eq!((doc.status.as_str(), doc.n), ("UNIQUE", 6));
}

#[test]
fn bounds_values() {
    let row: serde_json::Value =
        serde_json::from_str(&structured(&["bounds", "--n", "7", "--m", "10"])).unwrap();
    assert_eq!(row["lower"], 21);
    assert_eq!(row["regime"], "SMALL");
    let row: serde_json::Value =
        serde_json::from_str(&structured(&["bounds", "--n", "2", "--m", "5"])).unwrap();
    assert_eq!(row["exact"], 6);
    let row: serde_json::Value =
        serde_json::from_str(&structured(&["bounds", "--n", "13", "--m", "5"])).unwrap();
    assert_eq!(row["exact"], 27);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&structured(&["table", "--m", "2-5"])).unwrap();
    assert_eq!(rows.len(), 1 + 3 + 7 + 15);
}

#[test]
fn exact_searches() {
    let doc: ExactDoc = from_json(&structured(&["exact", "--n", "2", "--m", "3"])).unwrap();
    assert_eq!((doc.value, doc.exhausted), (4, true));
    let doc: ExactDoc = from_json(&structured(&["exact", "--n", "3", "--m", "3"])).unwrap();
    assert_eq!((doc.value, doc.exhausted), (6, true));
    let doc: ExactDoc = from_json(&structured(&[
        "exact",
        "--n",
        "3",
        "--m",
        "5",
        "--max-nodes",
        "20",
    ]))
    .unwrap();
    assert!(!doc.exhausted);
    assert_eq!(doc.witness.components.len(), doc.value);
    let doc: ExactDoc = from_json(&structured(&["pk", "--k", "2", "--m", "4"])).unwrap();
    assert_eq!(doc.value, 7);
}

#[test]
fn zebra_commands() {
    let text = structured(&["zebra", "gen", "--n", "2", "--m", "5", "--seed", "1"]);
    let doc: PuzzleDoc = from_json(&text).unwrap();
    assert_eq!(doc.rules.len(), 4);
    assert_eq!(
        text,
        structured(&["zebra", "gen", "--n", "2", "--m", "5", "--seed", "1"])
    );
    let path = scratch("pz.json", &text);
    let sols: Vec<serde_json::Value> =
        serde_json::from_str(&structured(&["zebra", "solve", path.to_str().unwrap()])).unwrap();
    assert_eq!(sols.len(), 1);
    let check: serde_json::Value =
        serde_json::from_str(&structured(&["zebra", "check", path.to_str().unwrap()])).unwrap();
    assert_eq!(check["rules"], 4);
    assert_eq!(check["minimum_rules"], 4);
    assert_eq!(check["unique"], true);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| urm(args).status.code().unwrap();
    assert_eq!(code(&["construct", "--n", "9", "--m", "4", "--kind", "pair"]), 3);
    let bad = scratch("malformed.json", r#"{"m":2,"components":[[3]]}"#);
    assert_eq!(code(&["resolve", bad.to_str().unwrap(), "--n", "1"]), 4);
    assert_eq!(code(&["construct", "--n", "2", "--m", "30"]), 5);
    let contradiction = scratch(
        "contradiction.json",
        r#"{"n":2,"m":2,"categories":[{"name":"A","values":["a1","a2"]},{"name":"B","values":["b1","b2"]}],"rules":[{"cat_a":0,"val_a":0,"cat_b":1,"val_b":0},{"cat_a":0,"val_a":0,"cat_b":1,"val_b":1}],"seed":0}"#,
    );
    assert_eq!(code(&["zebra", "solve", contradiction.to_str().unwrap()]), 6);
    assert_eq!(code(&["resolve", "/nonexistent/file.json"]), 1);
    assert_eq!(code(&["construct", "--m", "4"]), 2);
}

#[test]
fn env_cap_only_lowers() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_urm"))
            .args(["construct", "--n", "2", "--m", "6"])
            .env("URM_MAX_M", cap)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(run("5"), 5);
    assert_eq!(run("6"), 0);
    assert_eq!(run("1000"), 0);
    assert_eq!(run("lots"), 4);
}

#[test]
fn output_file_and_stdin() {
    let dir = std::env::temp_dir().join(format!("urm-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ms.json");
    let out = urm(&[
        "construct",
        "--n",
        "2",
        "--m",
        "3",
        "--format",
        "structured",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let doc: InstanceDoc = from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.n, 2);

    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_urm"))
        .args(["resolve", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(FIGURE2.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("UNIQUE"));
    assert_eq!(from_json::<MultisetDoc>(FIGURE2).unwrap().components.len(), 5);
}
