use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiersurf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn purify_table_rows_and_header() {
    let o = run(&["purify-table", "--fidelity", "0.985", "--eps", "0.001", "--ps", "0.99", "--max-tiers", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# hiersurf "));
    assert!(text.contains("# schema: hiersurf/1"));
    assert!(text.contains("\"max_tiers\":3"));
    let n: Vec<String> = data_rows(&text).into_iter().map(|r| r[4].clone()).collect();
    assert_eq!(n, ["1", "4", "8", "16"]);

    let o = run(&["purify-table", "--fidelity", "0.985", "--max-tiers", "0"]);
    assert_eq!(data_rows(&stdout(&o)).len(), 1);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["purify-table", "--fidelity", "0.985", "--ps", "1.0"],
        vec!["purify-table", "--fidelity", "0.2"],
        vec!["threshold", "--dim", "5"],
        vec!["threshold", "--rates", "0.01,0.02"],
        vec!["threshold", "--dim", "5", "--simple", "1", "--rates", "0.01,0.02"],
        vec!["threshold", "--dim", "4", "--rates", "0.01,0.02"],
        vec!["threshold", "--simple", "1", "--rates", "0.1:0.05:0.01"],
        vec!["cost", "--simple", "1", "--fidelity", "1.5"],
        vec!["cost", "--simple", "1", "--fidelity", "0.9", "--tiers", "many"],
        vec!["layout-dump"],
        vec!["no-such-command"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn missing_input_is_internal() {
    assert_eq!(run(&["decode-check", "/nonexistent/graph.txt"]).status.code(), Some(1));
}

#[test]
fn decode_check_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hiersurf"))
        .args(["decode-check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"nodes 4\n0 1 5\n1 2 1\n2 3 5\n0 3 11\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "total_weight 10\n0 1\n2 3\n");
}

#[test]
fn layout_dump_is_versioned_json() {
    let o = run(&["layout-dump", "--dim", "5", "--L", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "hiersurf/1");
    assert_eq!(v["config"]["module"]["dim"], 5);
}

#[test]
fn threshold_output_ignores_thread_count() {
    let dir = std::env::temp_dir().join(format!("hiersurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        // same paths: the config header echoes them
        let csv = dir.join("t.csv");
        let json = dir.join("t.json");
        let o = run(&[
            "--threads",
            threads,
            "threshold",
            "--perimeter",
            "--rates",
            "0.06:0.12:0.03",
            "--L",
            "3,5",
            "--trials",
            "500",
            "--out",
            csv.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(v["schema"], "hiersurf/1");
        files.push(std::fs::read_to_string(&csv).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(data_rows(&files[0]).len(), 6);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cost_far_above_threshold_is_reported_unachievable() {
    let o = run(&[
        "cost", "--simple", "1", "--fidelity", "0.5", "--tiers", "0", "--trials", "100", "--L", "3,5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["best"], serde_json::Value::Null);
    assert_eq!(v["result"]["reports"][0]["achievable"], false);
}
