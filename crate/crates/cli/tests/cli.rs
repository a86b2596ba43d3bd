use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const PERP: &str = r#"{"m":2,"rows":[["1","0"],["2","3"],["3","2"],["0","1"],["3","-2"],["2","-3"]]}"#;
const ALT: &str = r#"{"m":2,"rows":[["1","0"],["1","1"],["2","1"],["0","1"],["1","-1"],["1","-2"]]}"#;

fn arrcensus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrcensus"))
        .args(args)
        .env_remove("ARRCENSUS_THREADS")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = arrcensus(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generated(dir: &TempDir, n: usize, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("ns{n}_{seed}.json"));
    let (n, seed) = (n.to_string(), seed.to_string());
    report(&["gen", "--n", &n, "--m", "2", "--seed", &seed, "--out", s(&path)]);
    path
}

#[test]
fn census_table_is_golden() {
    let r = report(&["census", "--n", "3,4,5,6", "--m", "2"]);
    assert_eq!(r["command"], "census");
    let rows = serde_json::to_string(&r["result"]).unwrap();
    assert_eq!(
        rows,
        r#"{"rows":[{"classes":1,"coefficients":[1,-1,0,0],"cones":2,"m":2,"mode":"concurrency-free","n":3,"polynomial":"x^3 - x^2"},{"classes":4,"coefficients":[1,-4,3,0,0],"cones":8,"m":2,"mode":"concurrency-free","n":4,"polynomial":"x^4 - 4x^3 + 3x^2"},{"classes":31,"coefficients":[1,-10,30,-21,0,0],"cones":62,"m":2,"mode":"concurrency-free","n":5,"polynomial":"x^5 - 10x^4 + 30x^3 - 21x^2"},{"classes":446,"coefficients":[1,-20,145,-426,300,0,0],"cones":892,"m":2,"mode":"concurrency-free","n":6,"polynomial":"x^6 - 20x^5 + 145x^4 - 426x^3 + 300x^2"}]}"#
    );
}

#[test]
fn census_of_special_systems() {
    let dir = TempDir::new().unwrap();
    let perp = write(&dir, "perp.json", PERP);
    let alt = write(&dir, "alt.json", ALT);
    let r = report(&["census", "--mode", "ns-file", "--ns", s(&perp)]);
    assert_eq!(r["result"]["rows"][0]["cones"], 884);
    let r = report(&["count", "--ns", s(&alt)]);
    assert_eq!(r["result"]["cones"], 888);
    assert_eq!(r["result"]["classes"], 444);
}

#[test]
fn polynomial_methods_agree() {
    let dir = TempDir::new().unwrap();
    let ns = generated(&dir, 5, 3);
    let results: Vec<Value> = ["whitney", "poset", "combinatorial"]
        .iter()
        .map(|m| report(&["charpoly", "--ns", s(&ns), "--method", m])["result"]["coefficients"].clone())
        .collect();
    assert_eq!(results[0], results[1]);
    assert_eq!(results[1], results[2]);
}

#[test]
fn perpendicular_pairs_text_output() {
    let dir = TempDir::new().unwrap();
    let perp = write(&dir, "perp.json", PERP);
    let out = arrcensus(&["charpoly", "--ns", s(&perp), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x^6 - 20x^5 + 145x^4 - 422x^3 + 296x^2"), "{text}");
    let r = report(&["check-cf", "--ns", s(&perp), "--witness"]);
    assert_eq!(r["result"]["free"], false);
    let w = &r["result"]["witness"];
    assert_eq!(w["collection"]["members"], serde_json::json!([[1, 2, 3], [1, 5, 6], [2, 4, 6]]));
    assert_eq!(w["forced"]["members"], serde_json::json!([[3, 4, 5]]));
}

#[test]
fn generation_is_deterministic() {
    let a = report(&["gen", "--n", "6", "--m", "3", "--seed", "42"]);
    let b = report(&["gen", "--n", "6", "--m", "3", "--seed", "42"]);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["seed"], 42);
    let c = report(&["gen", "--n", "6", "--m", "3", "--seed", "43"]);
    assert_ne!(a["result"]["system"], c["result"]["system"]);
}

#[test]
fn output_does_not_depend_on_threads() {
    let dir = TempDir::new().unwrap();
    let ns = generated(&dir, 5, 7);
    let one = report(&["chambers", "--ns", s(&ns), "--threads", "1"]);
    let four = report(&["chambers", "--ns", s(&ns), "--threads", "4"]);
    assert_eq!(one["result"], four["result"]);
    assert_eq!(one["result"]["chambers"], 62);
    assert_eq!(one["inputs"], four["inputs"]);

    let env = Command::new(env!("CARGO_BIN_EXE_arrcensus"))
        .args(["chambers", "--ns", s(&ns)])
        .env("ARRCENSUS_THREADS", "2")
        .output()
        .unwrap();
    let env: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(env["result"], one["result"]);
}

#[test]
fn catalog_file_round_trips_through_classify() {
    let dir = TempDir::new().unwrap();
    let ns = generated(&dir, 4, 1);
    let catalog = dir.path().join("catalog.json");
    let r = report(&["chambers", "--ns", s(&ns), "--out", s(&catalog)]);
    assert_eq!(r["result"]["chambers"], 8);
    assert!(r["result"].get("catalog").is_none());
    let file: Value = serde_json::from_str(&fs::read_to_string(&catalog).unwrap()).unwrap();
    let first = &file["chambers"][0];
    assert_eq!(first["class"], 0);
    let witness: Vec<String> = first["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let b = witness.join(",");
    let r = report(&["classify", "--ns", s(&ns), "--catalog", s(&catalog), "--b", &b]);
    assert_eq!(r["result"]["kind"], "chamber");
    assert_eq!(r["result"]["signs"], first["signs"]);
    assert!(r["inputs"]["catalog"].is_string());
}

#[test]
fn classify_reports_walls() {
    let dir = TempDir::new().unwrap();
    let ns = generated(&dir, 4, 2);
    let r = report(&["classify", "--ns", s(&ns), "--b", "0,0,0,0"]);
    assert_eq!(r["result"]["kind"], "on_wall");
    assert_eq!(r["result"]["subsets"].as_array().unwrap().len(), 4);
}

#[test]
fn disc_writes_the_arrangement() {
    let dir = TempDir::new().unwrap();
    let perp = write(&dir, "perp.json", PERP);
    let out = dir.path().join("disc.json");
    let r = report(&["disc", "--ns", s(&perp), "--out", s(&out)]);
    assert_eq!(r["result"]["hyperplanes"], 20);
    let file: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["hyperplanes"][0]["subset"], serde_json::json!([1, 2, 3]));
    assert_eq!(file["hyperplanes"][0]["normal"], serde_json::json!(["-5", "-2", "3", "0", "0", "0"]));
    assert_eq!(file["hyperplanes"][19]["normal"], serde_json::json!(["0", "0", "0", "-5", "2", "-3"]));
}

#[test]
fn closure_of_a_collection() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"n":6,"m":2,"members":[[1,2,6],[1,3,5],[2,3,4],[4,5,6]]}"#);
    let r = report(&["closure", "--collection", s(&c)]);
    assert_eq!(r["result"]["closed"], false);
    assert_eq!(r["result"]["combinatorial_rank"], 4);
    assert_eq!(r["result"]["closure"]["members"].as_array().unwrap().len(), 20);
}

#[test]
fn planar_geometry_commands() {
    let dir = TempDir::new().unwrap();
    let ns = generated(&dir, 4, 5);
    let catalog = report(&["chambers", "--ns", s(&ns)]);
    let witness = |k: usize| -> String {
        catalog["result"]["catalog"]["chambers"][k]["witness"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect::<Vec<_>>()
            .join(",")
    };
    let r = report(&["regions", "--ns", s(&ns), "--b", &witness(0)]);
    assert_eq!(r["result"]["census"], r["result"]["generic_census"]);
    assert_eq!(r["result"]["census"]["total"], 11);
    let r = report(&["signature", "--ns", s(&ns), "--b", &witness(0)]);
    assert_eq!(r["result"]["triangles"].as_array().unwrap().len(), 2);
    assert_eq!(r["result"]["special_point"].as_array().unwrap().len(), 2);

    // Chamber k and its antipode describe isomorphic arrangements.
    let negated: String = witness(0)
        .split(',')
        .map(|v| if v == "0" { "0".to_string() } else if let Some(p) = v.strip_prefix('-') { p.to_string() } else { format!("-{v}") })
        .collect::<Vec<_>>()
        .join(",");
    let r = report(&["iso", "--ns", s(&ns), "--b1", &witness(0), "--b2", &negated]);
    assert_eq!(r["result"]["isomorphic"], true);
}

#[test]
fn catalog_verification_passes() {
    let dir = TempDir::new().unwrap();
    let ns = generated(&dir, 5, 11);
    let r = report(&["catalog-verify", "--ns", s(&ns)]);
    assert_eq!(r["result"]["passed"], true);
    assert_eq!(r["result"]["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn csv_output_has_a_header() {
    let out = arrcensus(&["census", "--n", "4,5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,m,mode,polynomial,cones,classes");
    assert_eq!(lines[2], "5,2,concurrency-free,x^5 - 10x^4 + 30x^3 - 21x^2,62,31");
}

fn domain_error(args: &[&str]) -> Value {
    let out = arrcensus(args);
    assert_eq!(out.status.code(), Some(1), "{args:?}");
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(domain_error(&["count", "--ns", s(&missing)])["error"]["kind"], "io");

    let dependent = write(&dir, "dep.json", r#"{"m":2,"rows":[["1","0"],["2","0"],["0","1"]]}"#);
    assert_eq!(domain_error(&["count", "--ns", s(&dependent)])["error"]["kind"], "invalid_input");

    let perp = write(&dir, "perp.json", PERP);
    let e = domain_error(&["charpoly", "--ns", s(&perp), "--method", "whitney", "--max-subsets", "1000"]);
    assert_eq!(e["error"]["kind"], "too_large");
    let e = domain_error(&["chambers", "--ns", s(&perp), "--max-chambers", "10"]);
    assert_eq!(e["error"]["kind"], "too_large");

    let ns = generated(&dir, 5, 1);
    let e = domain_error(&["signature", "--ns", s(&ns), "--b", "0,0,0,0,0"]);
    assert_eq!(e["error"]["kind"], "not_generic");
    let e = domain_error(&["regions", "--ns", s(&ns), "--b", "1,2"]);
    assert_eq!(e["error"]["kind"], "length_mismatch");

    for args in [
        &["count"][..],
        &["frobnicate"],
        &["classify", "--ns", s(&ns), "--b", "1,x"],
        &["chambers", "--ns", s(&ns), "--threads", "0"],
        &["charpoly", "--ns", s(&ns), "--method", "guess"],
    ] {
        assert_eq!(arrcensus(args).status.code(), Some(2), "{args:?}");
    }
}
