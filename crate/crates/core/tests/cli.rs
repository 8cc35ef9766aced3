use std::fs;
use std::path::Path;

use lowrank_hankel::cli::{run, PencilFile, ResultFile};
use lowrank_hankel::exact::rat;
use lowrank_hankel::build_pencil;

fn lrh(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("lrh").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_toy(dir: &Path) -> String {
    let p = build_pencil(2, 1, vec![vec![rat(0), rat(1), rat(0)], vec![rat(1), rat(0), rat(1)]]).unwrap();
    let path = dir.join("toy.json");
    fs::write(&path, serde_json::to_string(&PencilFile::from_pencil(&p)).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let result = dir.path().join("res.json");
    let result = result.to_str().unwrap();
    let (code, _, err) = lrh(&["solve", "--input", &input, "--rank", "1", "--seed", "3", "--output", result]);
    assert_eq!(code, 0, "{err}");
    let file: ResultFile = serde_json::from_str(&fs::read_to_string(result).unwrap()).unwrap();
    assert_eq!(file.total_degree, 2);
    assert_eq!(file.boxes.len(), 2);

    let (code, out, _) = lrh(&["verify", "--input", &input, "--rank", "1", "--result", result]);
    assert_eq!(code, 0);
    assert!(out.contains("1 parametrizations verified"), "{out}");
}

#[test]
fn tampered_result_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let result = dir.path().join("res.json");
    let result = result.to_str().unwrap();
    assert_eq!(lrh(&["solve", "--input", &input, "--rank", "1", "--output", result]).0, 0);

    let mut json: serde_json::Value = serde_json::from_str(&fs::read_to_string(result).unwrap()).unwrap();
    // x = t over t^2 = 2 is off the locus x^2 = 1.
    json["params"][0]["q"] = serde_json::json!(["-2", "0", "1"]);
    json["params"][0]["q0"] = serde_json::json!(["1"]);
    json["params"][0]["coords"] = serde_json::json!([["0", "1"]]);
    fs::write(result, json.to_string()).unwrap();
    let (code, out, _) = lrh(&["verify", "--input", &input, "--rank", "1", "--result", result]);
    assert_eq!(code, 4, "{out}");
    assert!(out.contains("FAILED"));
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    let a = lrh(&["solve", "--input", &input, "--rank", "1", "--seed", "42"]);
    let b = lrh(&["solve", "--input", &input, "--rank", "1", "--seed", "42"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn malformed_inputs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_toy(dir.path());
    assert_eq!(lrh(&["solve", "--input", &input, "--rank", "2"]).0, 1);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"m": 2, "n": 1, "matrices": [["0", "1"], ["1", "0", "1"]]}"#).unwrap();
    assert_eq!(lrh(&["solve", "--input", bad.to_str().unwrap(), "--rank", "1"]).0, 1);
    fs::write(&bad, "not json").unwrap();
    assert_eq!(lrh(&["solve", "--input", bad.to_str().unwrap(), "--rank", "1"]).0, 1);
    assert_eq!(lrh(&["solve", "--input", "/nonexistent/pencil.json", "--rank", "1"]).0, 1);
    assert_eq!(lrh(&["bounds", "--m", "3", "--n", "2", "--rank", "3"]).0, 1);
    assert_eq!(lrh(&["plant", "--m", "2", "--n", "1", "--rank", "2", "--point", "0"]).0, 1);
}

#[test]
fn bounds_output() {
    let (code, out, _) = lrh(&["bounds", "--m", "3", "--n", "2", "--rank", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total"], 12);
    assert_eq!(v["baseDegree"], 3);
    let (_, text, _) = lrh(&["bounds", "--m", "3", "--n", "2", "--rank", "2"]);
    assert!(text.contains("total"));
}

#[test]
fn plant_writes_a_pencil_of_the_requested_rank() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let (code, out, _) = lrh(&["plant", "--m", "3", "--n", "2", "--rank", "2", "--point", "1/2,-3", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("planted point (1/2, -3) with rank 2"), "{out}");
    let file: PencilFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let pencil = file.to_pencil().unwrap();
    assert_eq!(pencil.rank_at(&[lowrank_hankel::exact::frac(1, 2), rat(-3)]).unwrap(), 2);
}

#[test]
fn table_on_a_small_row_file() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.json");
    fs::write(&rows, r#"[{"m": 2, "r": 1, "n": 1, "totalDeg": 2, "maxDeg": 2}, {"m": 9, "r": 8, "n": 1, "totalDeg": null, "maxDeg": null}]"#).unwrap();
    let (code, out, err) = lrh(&["table", "--rows", rows.to_str().unwrap(), "--max-m", "2"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("(2,1,1)"), "{out}");
}
