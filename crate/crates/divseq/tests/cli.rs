use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn divseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divseq")).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json artifact")
}

#[test]
fn mersenne_table_matches_golden_bytes() {
    let out = divseq(&["int", "--a", "2", "--b", "1", "--n-max", "30", "--table"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(out.stdout, std::fs::read(golden("mersenne_1_30.txt")).unwrap());
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["int", "--n-max", "0"][..],
        &["int", "--a", "2", "--b", "3", "--n-max", "5"],
        &["int", "--n-max", "5", "--checks", "nonsense"],
        &["int", "--n-max", "5", "--budget-trial", "1"],
        &["int", "--n-max", "5", "--no-such-flag"],
        &["ec", "--curve", "0,0", "--point", "0,0", "--n-max", "5"],
        &["ec", "--curve", "0,-11", "--point", "3,5", "--n-max", "5"],
        &["ec", "--curve", "0,1", "--point", "2,3", "--n-max", "5"],
        &["eds", "--curve", "0,-11", "--point", "3,4", "--n-max", "0"],
        &["ff", "--q", "6"],
        &["ff", "--q", "2", "--a", "t^2"],
    ] {
        let out = divseq(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn torsion_point_is_rejected_with_its_order() {
    let out = divseq(&["ec", "--curve", "0,1", "--point", "2,3", "--n-max", "5"]);
    assert!(stderr(&out).contains('6'), "{}", stderr(&out));
}

#[test]
fn failed_check_exits_1_with_the_instance() {
    let out = divseq(&["int", "--a", "3", "--b", "1", "--n-min", "2", "--n-max", "3", "--checks", "zsigmondy", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let rec = json(&out);
    let fails: Vec<&serde_json::Value> =
        rec["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0]["n"], 2);
    let detail = fails[0]["detail"].as_str().unwrap();
    assert!(detail.contains("P(3^2 - 1^2) = 2 < 3") && detail.contains("power of two"), "{detail}");
    assert!(stderr(&out).contains("FAIL zsigmondy n=2"));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let runs: [&[&str]; 3] = [
        &["ec", "--curve", "0,-11", "--point", "3,4", "--n-max", "20", "--factor-max", "10", "--checks", "all", "--cm-m", "12", "--format", "json"],
        &["ff", "--q", "4", "--a", "t+g", "--ell-max", "23", "--checks", "all", "--k-max", "4", "--oracle-deg", "4", "--density-x", "1000", "--seed", "9", "--format", "csv"],
        &["report", "--suite", "arith", "--seed", "3", "--cases", "200", "--format", "json"],
    ];
    for args in runs {
        let a = divseq(args);
        let b = divseq(args);
        assert_eq!(code(&a), 0, "{args:?}: {}", stderr(&a));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn golden_mismatch_exits_1_at_the_first_divergent_row() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(golden("mersenne_1_30.txt")).unwrap();
    let wrong = text.replace("12 | 3^2 * 5 * 7 * 13\n", "12 | 3^2 * 5 * 17\n");
    assert_ne!(wrong, text);
    let path = dir.path().join("g.txt");
    std::fs::write(&path, wrong).unwrap();
    let out = divseq(&["int", "--n-max", "30", "--golden", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("line 13 (row 12)") && err.contains("golden `12 | 3^2 * 5 * 17`"), "{err}");
}

#[test]
fn golden_compares_the_table_whatever_the_format() {
    let g = golden("mersenne_1_30.txt");
    let out = divseq(&["int", "--n-max", "30", "--format", "csv", "--golden", g.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("n,2^n - 1,value,P,P_exact,omega\n"));
}

#[test]
fn missing_golden_exits_2() {
    let out = divseq(&["int", "--n-max", "3", "--golden", "/nonexistent/golden.txt"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("does not exist"));
}

#[test]
fn out_writes_the_artifact_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.txt");
    std::fs::write(&path, "stale").unwrap();
    let out = divseq(&["int", "--n-max", "30", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(golden("mersenne_1_30.txt")).unwrap());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn csv_rows_have_the_header_width() {
    let out = divseq(&["eds", "--curve", "0,-11", "--point", "3,4", "--n-max", "12", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["n", "w_n", "ward"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    assert_eq!((&rows[1][1], &rows[2][1], &rows[4][2]), ("8", "-153", "yes"));
}

#[test]
fn claims_are_verified_against_d_n() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "# d_4\n4 | 2^4 * 37 * 167\n").unwrap();
    let out = divseq(&["ec", "--curve", "0,-11", "--point", "3,4", "--n-max", "5", "--blind", "--claims", good.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("4,2^4 * 37 * 167,verified,"), "{text}");
    assert!(text.contains("5,449 * 104759,blind,"), "{text}");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "4 | 2^4 * 37 * 163\n").unwrap();
    let out = divseq(&["ec", "--curve", "0,-11", "--point", "3,4", "--n-max", "5", "--claims", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("d_4"), "{}", stderr(&out));
}

#[test]
fn starved_budget_marks_incomplete_rows() {
    let out = divseq(&["ec", "--curve", "0,-11", "--point", "3,4", "--n-max", "9", "--budget-trial", "100", "--budget-rho", "16", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rec = json(&out);
    let exhausted: Vec<u64> = rec["budget_exhausted"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert!(!exhausted.is_empty());
    for n in exhausted {
        assert!(rec["rows"][n as usize - 1][1].as_str().unwrap().contains("C<"));
    }
}

#[test]
fn rational_base_point() {
    // 2(3,4) on y^2 = x^3 - 11
    let out = divseq(&["ec", "--curve", "0,-11", "--point", "345/64,-6179/512", "--n-max", "6", "--factor-max", "0", "--checks", "divisibility,canonical,ward", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rec = json(&out);
    assert_eq!(rec["rows"][0][1], "8");
    assert!(rec["checks"].as_array().unwrap().iter().any(|c| c["check"] == "ward" && c["status"] == "skipped"));
}
