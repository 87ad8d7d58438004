use std::fs;
use std::process::{Command, Output};

fn stringc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringc"))
        .args(args)
        .env_remove("STRINGC_CACHE_DIR")
        .output()
        .expect("run stringc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn involution_row_matches_published_shape() {
    let o = stringc(&["involutions", "--family", "N_II", "--n", "9", "--m", "7", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row = stdout(&o).lines().find(|l| l.starts_with("| N_II,9(7)")).unwrap().to_string();
    assert!(row.contains("| 7 + 0 |"), "{row}");
}

#[test]
fn historical_row_is_an_engine_error() {
    let o = stringc(&["catalog", "build", "--family", "M_II-A", "--n", "27", "--m", "7", "--historical"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("order mismatch"));
    assert!(stderr(&o).contains("order 64"), "{}", stderr(&o));

    let o = stringc(&["catalog", "build", "--family", "M_II-A", "--n", "27", "--m", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| 128 |"));
}

#[test]
fn verify_theorem_names_the_winners() {
    let o = stringc(&["verify-theorem", "--m", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("M_II-D,3(7), M_II-D,19(7)"));
    assert!(!out.contains("| FAIL |"));
}

#[test]
fn classify_json_matches_expected() {
    let o = stringc(&["classify", "--m", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["matches_expected"], true);
    assert_eq!(v["summary"]["winners"], serde_json::json!(["M_II-D,3(7)", "M_II-D,19(7)"]));
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 146);
    let winners = records.iter().filter(|r| r["certificates"].as_u64().unwrap() > 0).count();
    assert_eq!(winners, 2);
}

#[test]
fn output_is_deterministic_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let plain = stringc(&["classify", "--m", "7", "--format", "json"]);
    let cold = stringc(&["--cache-dir", cache, "classify", "--m", "7", "--format", "json"]);
    let warm = stringc(&["--cache-dir", cache, "-v", "classify", "--m", "7", "--format", "json"]);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(stderr(&warm).contains("cache hits 146, misses 0"), "{}", stderr(&warm));
    let again = stringc(&["classify", "--m", "7", "--format", "json"]);
    assert_eq!(plain.stdout, again.stdout);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_stringc"))
            .args(["-v", "catalog", "build", "--family", "M_II-D", "--n", "3"])
            .env("STRINGC_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    assert!(stderr(&run()).contains("misses 1"));
    assert!(stderr(&run()).contains("hits 1"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(stringc(&["catalog", "build", "--family", "M_IV", "--n", "1"]).status.code(), Some(1));
    assert_eq!(stringc(&["catalog", "build", "--family", "M_II-D", "--n", "99"]).status.code(), Some(1));
    assert_eq!(stringc(&["classify", "--m", "11"]).status.code(), Some(1));
    assert_eq!(stringc(&["classify", "--m", "6"]).status.code(), Some(1));
    assert_eq!(stringc(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(stringc(&["--help"]).status.code(), Some(0));
    assert_eq!(stringc(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "# batch settings\nformat = csv\nworkers = 2\n").unwrap();
    let path = path.to_str().unwrap();
    let o = stringc(&["--config", path, "involutions", "--family", "N_II", "--n", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("group,central,non-central,total,count,φ_X,published\n"));
    assert!(stdout(&o).contains("\"N_II,9(7)\""));
    let o = stringc(&["--config", path, "--format", "md", "involutions", "--family", "N_II", "--n", "9"]);
    assert!(stdout(&o).starts_with("| group |"));

    fs::write(dir.path().join("bad.conf"), "colour = blue\n").unwrap();
    let bad = dir.path().join("bad.conf");
    let o = stringc(&["--config", bad.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fp_order_preset_and_file() {
    let o = stringc(&["fp", "order", "--preset", "coxeter", "--m", "7", "--e", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 128);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d4.txt");
    fs::write(&path, "gens: a b\na^2\nb^2\n(a b)^4\n").unwrap();
    let o = stringc(&["fp", "order", "--file", path.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 8);

    fs::write(&path, "a^2\n(a b\n").unwrap();
    let o = stringc(&["fp", "order", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("classes.json");
    let o = stringc(&["sweep", "--family", "M_II-F", "--m", "7", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let classes = v["classes"].as_array().unwrap();
    let new = classes.iter().filter(|c| c["elsewhere"].is_null()).count();
    assert_eq!(new, 9);
    assert!(v["unmatched_rows"].as_array().unwrap().is_empty());
}

#[test]
fn isomorphisms_between_rows() {
    let o = stringc(&["iso", "known", "--m", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = stringc(&["iso", "find", "--family", "M_II-A", "--source", "23", "--target", "24", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["isomorphic"], true);
    let o = stringc(&["iso", "find", "--family", "M_II-D", "--source", "3", "--target", "19", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["isomorphic"], false);
}

#[test]
fn decompose_and_engine_check() {
    let o = stringc(&["decompose", "--m", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("m = 7: PASS"));
    let o = stringc(&["engine-check", "--family", "N_II", "--m", "7", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn catalog_list_counts_rows() {
    let o = stringc(&["catalog", "list", "--m", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 146);
    let o = stringc(&["catalog", "list", "--family", "M_II-D", "--m", "8", "--format", "csv"]);
    assert!(stdout(&o).contains("\"M_II-D,19(8)\",M_II-D,19,"));
}
