use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use selfdual::catalog::{hex_digest, Catalog};
use selfdual::circulant::{build_four_circulant, CirculantPair};
use selfdual::codes::CodeFile;
use selfdual::wenum::min_weight;
use selfdual::BitVector;
use serde_json::Value;

fn selfdual(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfdual")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_code(path: &Path) -> selfdual::LinearCode {
    CodeFile::from_json(&fs::read_to_string(path).unwrap()).unwrap().to_code().unwrap()
}

#[test]
fn analyze_small_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("i2.json"), r#"{"name":"i2","n":2,"k":1,"rows":["11"]}"#).unwrap();
    let o = selfdual(&["analyze", "--code", "i2.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["min_weight"], 2);
    assert_eq!(v["shadow_distribution"], serde_json::json!([[1, 2]]));
    assert_eq!(v["parity_class"], "singly-even");
}

#[test]
fn analyze_builtin_extremal_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = selfdual(&["analyze", "--code", "C60_1", "--out", "a.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["min_weight"], 12);
    assert_eq!(v["family"]["family"], "W60_1");
    assert_eq!(v["family"]["beta"], 0);
    assert!(dir.path().join("a.json.manifest.json").exists());
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\n  \"name\": \"x\",\n  \"n\": }").unwrap();
    let o = selfdual(&["analyze", "--code", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = selfdual(&["analyze", "--code", "missing"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn subtract_is_deterministic_and_documented() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.json", "b.json"] {
        let o = selfdual(&["subtract", "--code", "D60_3", "--coords", "2,36", "--name", "C58_1", "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());
    let expected = Catalog::builtin().unwrap().code("C58_1").unwrap();
    assert_eq!(read_code(&dir.path().join("a.json")), expected);

    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "subtract");
    assert_eq!(m["output_digests"]["a.json"], hex_digest(&a));
    assert!(m["input_digests"]["builtin:D60_3"].is_string());
}

#[test]
fn neighbor_from_support() {
    let dir = tempfile::tempdir().unwrap();
    let o = selfdual(
        &["neighbor", "--code", "C58_3", "--supp", "1,4,6,7,8,39,40,41,42,43,47,52", "--out", "d.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let expected = Catalog::builtin().unwrap().code("D58_3").unwrap();
    assert_eq!(read_code(&dir.path().join("d.json")), expected);
    let o = selfdual(&["neighbor", "--code", "C58_3", "--supp", "1,2,3"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn block_two_search_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let o = selfdual(&["search", "--block", "2", "--dmin", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let found: BTreeSet<String> = stdout(&o).lines().map(str::to_string).collect();
    let mut expected = BTreeSet::new();
    for a in 0u128..4 {
        for b in [2u128, 3] {
            let p = CirculantPair::new(BitVector::from_bits(2, a), BitVector::from_bits(2, b)).unwrap();
            let c = build_four_circulant(&p);
            if c.is_self_dual() && min_weight(&c).unwrap() >= 2 {
                expected.insert(p.to_string());
            }
        }
    }
    assert!(!expected.is_empty());
    assert_eq!(found, expected);
}

#[test]
fn search_resumes_from_checkpoint_and_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["search", "--block", "7", "--dmin", "4", "--checkpoint", "ck.json", "--out", "p1.txt"];
    assert_eq!(selfdual(&args, dir.path()).status.code(), Some(0));
    let again = ["search", "--block", "7", "--dmin", "4", "--checkpoint", "ck.json", "--out", "p2.txt"];
    assert_eq!(selfdual(&again, dir.path()).status.code(), Some(0));
    let fresh = ["--threads", "2", "search", "--block", "7", "--dmin", "4", "--out", "p3.txt"];
    assert_eq!(selfdual(&fresh, dir.path()).status.code(), Some(0));
    let p1 = fs::read_to_string(dir.path().join("p1.txt")).unwrap();
    assert!(!p1.is_empty());
    assert_eq!(p1, fs::read_to_string(dir.path().join("p2.txt")).unwrap());
    assert_eq!(p1, fs::read_to_string(dir.path().join("p3.txt")).unwrap());
    let other = ["search", "--block", "7", "--dmin", "2", "--checkpoint", "ck.json"];
    assert_eq!(selfdual(&other, dir.path()).status.code(), Some(4));
}

#[test]
fn classify_single_file_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let codes = dir.path().join("codes");
    fs::create_dir(&codes).unwrap();
    fs::write(codes.join("e8.json"), CodeFile::from_code("e8", &selfdual::codes::small::e8()).to_json()).unwrap();
    let o = selfdual(&["classify", "--in", "codes"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);

    assert_eq!(selfdual(&["search", "--block", "5", "--dmin", "2", "--out", "p.txt"], dir.path()).status.code(), Some(0));
    let o = selfdual(&["classify", "--pairs", "p.txt", "--out", "classes.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("classes.json")).unwrap()).unwrap();
    let members: usize = v["classes"].as_array().unwrap().iter().map(|c| c["members"].as_array().unwrap().len()).sum();
    assert_eq!(members, fs::read_to_string(dir.path().join("p.txt")).unwrap().lines().count());
    let o = selfdual(&["classify", "--pairs", "p.txt", "--orbits"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let reduced: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reduced["classes"].as_array().unwrap().len(), v["classes"].as_array().unwrap().len());
    assert_eq!(selfdual(&["classify"], dir.path()).status.code(), Some(4));
}

#[test]
fn neighbor_survey_on_small_code() {
    let dir = tempfile::tempdir().unwrap();
    let base = selfdual::codes::small::b12().direct_sum(&selfdual::codes::small::i2()).unwrap();
    fs::write(dir.path().join("base.json"), CodeFile::from_code("base", &base).to_json()).unwrap();
    let o = selfdual(&["neighbors", "--code", "base.json", "--dmin", "4", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["functionals"], 63);
    let new = v["new_classes"].as_u64().unwrap() as usize;
    assert!(new >= 1);
    let lines = fs::read_to_string(dir.path().join("out/neighbors.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), new);
    for line in lines.lines() {
        let d: Value = serde_json::from_str(line).unwrap();
        assert_eq!(d["base"], "base");
        let name = d["name"].as_str().unwrap();
        let code = read_code(&dir.path().join("out").join(format!("{name}.json")));
        assert!(code.is_self_dual());
        assert!(min_weight(&code).unwrap() >= 4);
    }
    let o = selfdual(&["neighbors", "--code", "base.json", "--dmin", "4", "--known", "base.json", "--out", "out2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = selfdual(&["neighbors", "--code", "C60_1", "--dmin", "12", "--out", "big"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reproduce_and_balance() {
    let dir = tempfile::tempdir().unwrap();
    let o = selfdual(&["reproduce", "--table", "C7,Td10,T2", "--out", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("T2 7/7 rows pass"));
    let o = selfdual(&["reproduce", "--table", "P3"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let o = selfdual(&["reproduce", "--table", "T9"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let o = selfdual(&["solve-shadow-balance", "--a0", "165", "--a1", "-2", "--b0", "0", "--b1", "1"], dir.path());
    assert_eq!(stdout(&o).trim(), "55");
    let o = selfdual(&["solve-shadow-balance", "--a0", "1", "--a1", "1", "--b0", "2", "--b1", "1"], dir.path());
    assert_eq!(stdout(&o).trim(), "no solution");
}
