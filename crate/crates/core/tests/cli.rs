use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};
use ssk::cli::json::{operator_to_json, series_to_json};
use ssk::cli::{run, JobConfig};
use ssk::coeffs::{Idx, PowerSeries, Scalar, INF};
use ssk::opcore::{mul, Kind, Operator, Precision};
use ssk::schur_sym::wallenberg_pair;

fn dm(n: usize, k: &[i64]) -> Operator {
    Operator::d_mono(n, Idx::from_slice(k).unwrap(), Scalar::one())
}

fn ok(cmd: &str, input: Value, cfg: &JobConfig) -> Value {
    let (r, code) = run(cmd, &input, cfg);
    assert_eq!(code, 0, "{cmd}: {r:#}");
    assert_eq!(r["schema"], "ssk/1");
    assert_eq!(r["status"], "ok");
    let checks = r["verified"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    r
}

fn wallenberg_file() -> Value {
    let s = |terms: &[(i64, &str)]| json!({"n": 1, "terms": terms.iter().map(|(e, c)| json!({"x": [e], "c": c})).collect::<Vec<_>>()});
    let sq = s(&[(0, "1"), (1, "2"), (2, "1")]);
    let cube = s(&[(0, "1"), (1, "3"), (2, "3"), (3, "1")]);
    let l = json!({"n": 1, "kind": "DSym", "prec": {"x_deg": 12}, "terms": [{"x": [0], "d": [2], "c": "1"}],
        "rational": [{"d": [0], "num": s(&[(0, "-2")]), "den": sq}]});
    let p = json!({"n": 1, "kind": "DSym", "prec": {"x_deg": 12}, "terms": [{"x": [0], "d": [3], "c": "4"}],
        "rational": [{"d": [1], "num": s(&[(0, "-12")]), "den": sq}, {"d": [0], "num": s(&[(0, "12")]), "den": cube}]});
    json!({"q": p, "constraints": [[1, 2]], "conjugate": {"op": l, "axis": 1, "k": 2}})
}

#[test]
fn invert_catalan() {
    let f = json!({"n": 1, "terms": [{"x": [1], "c": "1"}, {"x": [2], "c": "-1"}]});
    let r = ok("invert", json!({"map": [f], "out_deg": 8}), &JobConfig::default());
    let cs: Vec<&str> = r["result"]["inverse"][0]["terms"].as_array().unwrap().iter().map(|t| t["c"].as_str().unwrap()).collect();
    assert_eq!(cs, ["1", "1", "2", "5", "14", "42", "132", "429"]);
}

#[test]
fn transport_recovers_u() {
    let f = PowerSeries::from_terms(1, INF, [(Idx::unit(0), Scalar::one()), (Idx::from_slice(&[2]).unwrap(), Scalar::from_i64(-1))]);
    let uf = PowerSeries::one(1).add(&f).unwrap();
    let r = ok("transport", json!({"uf": series_to_json(&uf), "map": [series_to_json(&f)], "out_deg": 8}), &JobConfig::default());
    let want = series_to_json(&PowerSeries::one(1).add(&PowerSeries::var(1, 0)).unwrap().with_prec(8));
    assert_eq!(r["result"]["u"]["terms"], want["terms"]);
}

#[test]
fn wallenberg_decomposition() {
    let cfg = JobConfig { prec_x: Some(8), ..JobConfig::default() };
    let r = ok("centralizer-decompose", wallenberg_file(), &cfg);
    let got: Vec<(Value, Value, Value)> = r["result"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let ts = t["c"]["terms"].as_array().unwrap();
            assert_eq!(ts.len(), 1);
            (t["j"].clone(), t["a"].clone(), ts[0]["c"].clone())
        })
        .collect();
    let want = [(0, -1, "2"), (0, 3, "4"), (1, -1, "2"), (1, 0, "-4"), (1, 1, "4")];
    assert_eq!(got.len(), want.len());
    for ((j, a, c), (wj, wa, wc)) in got.iter().zip(want) {
        assert_eq!((j, a, c), (&json!([wj]), &json!([wa]), &json!(wc)));
    }
}

#[test]
fn sato_of_free_point() {
    let basis: Vec<Value> = (0..=3).map(|k| json!({"k": [k], "op": operator_to_json(&dm(1, &[k]))})).collect();
    let r = ok("sato", json!({"w": {"mu": 0, "cutoff": 3, "basis": basis}}), &JobConfig::default());
    let s = &r["result"]["s"]["terms"];
    assert_eq!(s, &json!([{"x": [0], "d": [0], "c": "1"}]));
}

#[test]
fn root_normalize_dress_centralize() {
    let cfg = JobConfig::default();
    let l0 = dm(1, &[1]).add(&Operator::x(1, 0)).unwrap();
    let p = mul(&l0, &l0).unwrap().truncate(Precision::x_only(16));
    ok("root", json!({"op": operator_to_json(&p), "l": 2}), &cfg);
    let q = dm(1, &[2]).add(&dm(1, &[1]).scale(&Scalar::from_i64(6))).unwrap().with_kind(Kind::DHat).unwrap().truncate(Precision::x_only(16));
    let r = ok("normalize", json!({"ops": [operator_to_json(&q)]}), &cfg);
    assert_eq!(r["result"]["ls"], json!([2]));
    let l = dm(1, &[1]).add(&mul(&Operator::x(1, 0), &dm(1, &[-1])).unwrap()).unwrap().truncate(Precision::boxed(16, 16));
    ok("dress", json!({"ops": [operator_to_json(&l)]}), &cfg);
    let ps = [dm(2, &[1, 1]), dm(2, &[0, 2])];
    ok("centralize", json!({"q": operator_to_json(&dm(2, &[2, 0])), "ops": ps.iter().map(operator_to_json).collect::<Vec<_>>()}), &cfg);
}

#[test]
fn pair_ring_rank_round_trip() {
    let cfg = JobConfig { guard: 0, ..JobConfig::default() };
    let ring: Vec<Value> = [dm(2, &[1, 1]), dm(2, &[0, 2])].iter().map(|p| operator_to_json(&p.with_kind(Kind::DSym).unwrap())).collect();
    let r = ok("pair-from-ring", json!({"ops": ring, "cutoff": 4}), &cfg);
    let pair = r["result"]["pair"].clone();
    let back = ok("ring-from-pair", json!({"pair": pair}), &cfg);
    assert_eq!(back["result"]["ops"].as_array().unwrap().len(), 2);
    let rk = ok("rank", json!({"pair": pair, "budget": 3}), &cfg);
    assert!(rk["result"]["rank"].as_u64().unwrap() >= 1);
}

#[test]
fn spectral_of_second_derivative() {
    let q = operator_to_json(&dm(1, &[2]).with_kind(Kind::DSym).unwrap());
    let r = ok("spectral", json!({"ops": [q], "chi": ["4"], "out_deg": 14}), &JobConfig::default());
    assert_eq!(r["result"]["dimension"], 2);
}

#[test]
fn conjugations() {
    let cfg = JobConfig { prec_x: Some(8), ..JobConfig::default() };
    let (l, _) = wallenberg_pair(12).unwrap();
    ok("conjugate", json!({"op": operator_to_json(&l), "axis": 1, "k": 2}), &cfg);
    ok("joint-conjugate", json!({"ops": [operator_to_json(&l)], "ks": [2]}), &cfg);
}

#[test]
fn precondition_and_precision_codes() {
    let cfg = JobConfig::default();
    // j(F) = 1 - 2x is not 1
    let f = json!({"n": 1, "terms": [{"x": [1], "c": "1"}, {"x": [2], "c": "-1"}]});
    let (r, code) = run("invert", &json!({"map": [f], "mode": "strict"}), &cfg);
    assert_eq!((code, r["error"]["kind"].as_str()), (2, Some("JacobianNotOne")));
    // x-degree 2 cannot support a conjugation certified through degree 8
    let (l, _) = wallenberg_pair(2).unwrap();
    let (r, code) = run("conjugate", &json!({"op": operator_to_json(&l), "axis": 1, "k": 2}), &JobConfig { prec_x: Some(8), ..cfg.clone() });
    assert_eq!(code, 3, "{r:#}");
    let (_, code) = run("invert", &json!({"map": "nope"}), &cfg);
    assert_eq!(code, 4);
    let (_, code) = run("root", &json!({"op": {"n": 1, "kind": "Weird", "terms": []}, "l": 2}), &cfg);
    assert_eq!(code, 4);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ssk"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ssk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn binary_reports_are_deterministic_and_verifiable() {
    let input = scratch("wallenberg.json");
    std::fs::write(&input, wallenberg_file().to_string()).unwrap();
    let out1 = bin().args(["--prec-x", "8", "centralizer-decompose"]).arg(&input).output().unwrap();
    let out2 = bin().args(["--prec-x", "8", "centralizer-decompose"]).arg(&input).output().unwrap();
    assert_eq!(out1.status.code(), Some(0), "{}", String::from_utf8_lossy(&out1.stdout));
    assert_eq!(out1.stdout, out2.stdout);
    let report = scratch("report.json");
    let st = bin().args(["--prec-x", "8", "--out"]).arg(&report).arg("centralizer-decompose").arg(&input).status().unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(std::fs::read(&report).unwrap(), out1.stdout);
    let v = bin().arg("verify").arg(&report).output().unwrap();
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stdout));
    // a tampered result no longer verifies
    let mut r: Value = serde_json::from_slice(&out1.stdout).unwrap();
    r["result"]["terms"][0]["c"]["terms"][0]["c"] = json!("3");
    let bad = scratch("tampered.json");
    std::fs::write(&bad, r.to_string()).unwrap();
    let v = bin().arg("verify").arg(&bad).output().unwrap();
    assert_eq!(v.status.code(), Some(2));
}

#[test]
fn binary_exit_codes_and_guard() {
    let junk = scratch("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(bin().arg("invert").arg(&junk).status().unwrap().code(), Some(4));
    assert_eq!(bin().arg("invert").arg(scratch("missing.json")).status().unwrap().code(), Some(4));
    assert_eq!(bin().args(["--field", "cyc:x", "invert"]).arg(&junk).status().unwrap().code(), Some(4));
    let f = scratch("f.json");
    std::fs::write(&f, json!({"map": [{"n": 1, "terms": [{"x": [1], "c": "1"}, {"x": [2], "c": "-1"}]}]}).to_string()).unwrap();
    let out = bin().arg("invert").arg(&f).env("SSK_GUARD", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["config"]["guard"], 3);
    let out = bin().args(["--field", "cyc:3", "invert"]).arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
