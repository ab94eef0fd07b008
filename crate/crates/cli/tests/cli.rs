use std::path::Path;
use std::process::{Command, Output};

use nilsheet_core::orbits::OrbitLabel;

fn nilsheet(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilsheet"))
        .args(args)
        .env("NILSHEET_CACHE_DIR", cache)
        .env_remove("NILSHEET_TABLE")
        .env_remove("NILSHEET_MAX_RANK")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn orbits_json_has_four_records_that_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilsheet(dir.path(), &["orbits", "C2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 4);
    for r in records {
        let o: OrbitLabel = serde_json::from_value(r["orbit"].clone()).unwrap();
        assert_eq!(o.to_string().parse::<OrbitLabel>().unwrap(), o);
    }
}

#[test]
fn namikawa_of_regular_a2() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilsheet(dir.path(), &["namikawa", "A2:3", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cells, ["A2:3", "0", "1", "2", "A2", "6"]);
}

#[test]
fn cover_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilsheet(dir.path(), &["verify", "C2", "--suite", "cover"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).trim_end().ends_with("PASS"));
}

#[test]
fn all_suites_pass_on_b3() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilsheet(dir.path(), &["verify", "B3", "--samples", "200", "--seed", "3", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilsheet(dir.path(), &["datum", "D4:2,2,2,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("requires tag"));
    let out = nilsheet(dir.path(), &["datum", "C2:3,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("odd multiplicity"));
    let out = nilsheet(dir.path(), &["rigid", "B3:3,x,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("column"));
    assert!(out.stdout.is_empty());
    let out = nilsheet(dir.path(), &["datum", "B3:3,2,2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn rank_cap_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nilsheet"))
        .args(["orbits", "C4"])
        .env("NILSHEET_CACHE_DIR", dir.path())
        .env("NILSHEET_MAX_RANK", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_table_rule_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tables/criteria.toml");
    let text = std::fs::read_to_string(src).unwrap();
    let cut = text.replace("[birationality.D]\nrule = \"tail-collapse\"\nvery_even_exception = true\n", "");
    assert_ne!(cut, text);
    let table = dir.path().join("partial.toml");
    std::fs::write(&table, cut).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nilsheet"))
        .args(["datum", "D4", "--no-cache"])
        .env("NILSHEET_TABLE", &table)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains("criterion-not-transcribed"));
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["datum", "C3", "--format", "json"];
    let first = nilsheet(dir.path(), &args);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let second = nilsheet(dir.path(), &args);
    let fresh = nilsheet(dir.path(), &["datum", "C3", "--format", "json", "--no-cache"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, fresh.stdout);
    let out = nilsheet(dir.path(), &["verify", "C3", "--suite", "cache"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("identical"));
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let first = nilsheet(dir.path(), &["orbits", "B2", "--format", "csv"]);
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), "{not json").unwrap();
    }
    let second = nilsheet(dir.path(), &["orbits", "B2", "--format", "csv"]);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).starts_with("orbit,dim,h2,A(O)\n"));
}

#[test]
fn label_and_induce() {
    let dir = tempfile::tempdir().unwrap();
    let out = nilsheet(dir.path(), &["label", "C2 | xi=(1;0) | nilp=[1];[2]", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["label"]["levi"]["blocks"], serde_json::json!([1, 1]));
    let out = nilsheet(dir.path(), &["induce", "D4", "(2,2;m=0)-", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("D4:4,4:II"));
    let out = nilsheet(dir.path(), &["label", "C2 | xi=(1;0) | nilp=[2];[2]"]);
    assert_eq!(out.status.code(), Some(2));
}
