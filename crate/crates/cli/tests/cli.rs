use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pasting(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pasting"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pasting-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// Compares against a golden file; set `PASTING_UPDATE_GOLDEN=1` to rewrite it.
fn assert_golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("PASTING_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "golden file {name} differs");
}

#[test]
fn check_running_example_is_a_pasting_scheme() {
    let o = pasting(&["check", "examples/running.paste"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("valid anchored graph with 3 interior faces"));
    assert!(out.contains("faces in order: theta1 theta2 theta3"));
}

#[test]
fn check_empty_faces_is_not_a_scheme() {
    let o = pasting(&["check", "examples/empty.paste"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no interior faces: not a pasting scheme"));
}

#[test]
fn check_reversed_edge_reports_the_violation() {
    let o = pasting(&["check", "examples/reversed.paste"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("is not a directed path"));
}

#[test]
fn check_obstruction_reports_the_stuck_frontier() {
    let o = pasting(&["check", "examples/obstruction.paste"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("stuck at frontier"));
}

#[test]
fn missing_file_exits_one_on_stderr() {
    let o = pasting(&["check", "examples/does-not-exist.paste"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("does-not-exist.paste"));
}

#[test]
fn bad_usage_exits_one() {
    let o = pasting(&["eval", "examples/running.paste", "--model", "tensor"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn unmatched_paren_is_located() {
    let path = scratch(
        "unmatched.paste",
        "diagram bad\nobjects A B C\nedge f1 : A -> B\nedge f2 : B -> C\nglobal source = A ; sink = C ; dom = f1 (f2 ; cod = f1 f2\n",
    );
    let o = pasting(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains(":5:41"), "{err}");
    assert!(err.contains("unmatched '('"), "{err}");
}

#[test]
fn extend_tags_inverse_then_forward_associator() {
    let o = pasting(&["extend", "examples/running.paste"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("5 factors, 2 inserted associativity faces"));
    let tags: Vec<&str> = out
        .lines()
        .filter_map(|l| {
            let l = l.trim_start();
            let (index, rest) = l.split_once(". ")?;
            index.parse::<usize>().ok()?;
            rest.split_whitespace().next()
        })
        .collect();
    assert_eq!(tags, ["theta1", "a^-1", "theta2", "a", "theta3"]);
}

#[test]
fn extend_redundant_pair_adds_two_factors() {
    let o = pasting(&[
        "extend",
        "examples/running.paste",
        "--strategy",
        "redundant-pair",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7 factors, 4 inserted associativity faces"));
}

#[test]
fn extend_reordered_is_inapplicable_on_a_single_presentation() {
    let o = pasting(&[
        "extend",
        "examples/running.paste",
        "--strategy",
        "reordered",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("single presentation"));
}

#[test]
fn schemes_all_on_side_by_side_lists_both_orders() {
    let o = pasting(&["--json", "schemes", "examples/side_by_side.paste", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 2);
}

#[test]
fn eval_strategies_agree_on_the_running_example() {
    let composite = |strategy: &str| {
        let o = pasting(&[
            "--json",
            "eval",
            "examples/running.paste",
            "--model",
            "span",
            "--assignments",
            "examples/running.span",
            "--strategy",
            strategy,
        ]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["composite"].clone()
    };
    let canonical = composite("canonical");
    assert_eq!(composite("redundant-pair"), canonical);
    assert_eq!(composite("shortest-route"), canonical);
}

#[test]
fn eval_side_by_side_matrix_block() {
    let base = [
        "--json",
        "eval",
        "examples/side_by_side.paste",
        "--model",
        "matrix",
    ];
    let o = pasting(&base);
    assert_eq!(o.status.code(), Some(0));
    let mut reordered = base.to_vec();
    reordered.extend(["--strategy", "reordered"]);
    let r = pasting(&reordered);
    assert_eq!(r.status.code(), Some(0));
    let a: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&r)).unwrap();
    assert_eq!(a["composite"], b["composite"]);
}

#[test]
fn eval_with_wrong_model_kind_is_rejected() {
    let o = pasting(&[
        "eval",
        "examples/running.paste",
        "--model",
        "span",
        "--assignments",
        "examples/running.matrix",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_reports_match_golden_files() {
    let cases: [(&str, &[&str]); 5] = [
        ("check_running.json", &["check", "examples/running.paste"]),
        (
            "schemes_running.json",
            &["schemes", "examples/running.paste"],
        ),
        ("extend_running.json", &["extend", "examples/running.paste"]),
        (
            "eval_running_span.json",
            &[
                "eval",
                "examples/running.paste",
                "--model",
                "span",
                "--assignments",
                "examples/running.span",
            ],
        ),
        (
            "eval_running_matrix.json",
            &[
                "eval",
                "examples/running.paste",
                "--model",
                "matrix",
                "--assignments",
                "examples/running.matrix",
            ],
        ),
    ];
    for (golden, args) in cases {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let first = stdout(&pasting(&full));
        let second = stdout(&pasting(&full));
        assert_eq!(first, second, "{golden} is not stable across runs");
        assert_golden(golden, &first);
    }
}

#[test]
fn json_errors_carry_the_schema_version() {
    let o = pasting(&["--json", "check", "examples/does-not-exist.paste"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["exit_code"], 1);
}

#[test]
fn verify_matrix_is_deterministic() {
    let args = [
        "verify", "--trials", "10", "--seed", "42", "--model", "matrix",
    ];
    let a = pasting(&args);
    let b = pasting(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("all suites passed"));
}

#[test]
fn verify_rejects_oversized_configs() {
    let o = pasting(&["verify", "--max-faces", "9"]);
    assert_eq!(o.status.code(), Some(1));
}
