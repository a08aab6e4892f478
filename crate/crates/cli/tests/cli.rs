use std::process::{Command, Output};

use chiral_calc::{parse_state, parse_potential};
use chiral_core::conformal::{AlgebraContext, Profile};

fn calc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chiral-calc"))
        .args(args)
        .env("CHIRAL_CALC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn twist_cubic_has_rank_one_third() {
    let o = calc(&["twist", "-D", "1", "-w", "1", "-f", "x1^3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank d = 1/3"));
    let o = calc(&["twist", "-D", "1", "-w", "1", "-f", "x1^3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["rank"], "1/3");
    assert_eq!(v["passed"], true);
}

#[test]
fn quadratic_cohomology_is_one_class() {
    let o = calc(&["cohomology", "-D", "1", "-w", "1", "-f", "x1^2", "--nmax", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let classes: Vec<_> = v["result"]["slices"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| !s["dims"].as_object().unwrap().is_empty())
        .collect();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0]["n"], 0);
    assert_eq!(classes[0]["m"], 0);
    assert_eq!(classes[0]["dims"]["0"], 1);
}

#[test]
fn corrupted_current_is_named() {
    let o = calc(&["verify-top", "-D", "2", "--override", "J=2 :phi1 psi1:"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] c:J-J"));
    let clean = calc(&["verify-top", "-D", "2"]);
    assert_eq!(clean.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        vec!["cohomology", "-f", "x1^2 + x1"],
        vec!["twist", "-f", "x1 + * x2"],
        vec!["twist", "-D", "1", "-f", "x1^3", "-w", "1,2"],
        vec!["verify-top", "--override", "K=x1"],
        vec!["brst-suite"],
        vec!["eval", "-D", "1", ":x2:", "x1"],
    ] {
        let o = calc(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
    let o = calc(&["twist", "-f", "x1 + * x2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 5"));
}

#[test]
fn output_is_deterministic() {
    let args = ["cohomology", "-f", "x1^3", "--nmax", "2", "--json"];
    let a = calc(&args);
    let b = calc(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = calc(&["character", "-f", "x1^3", "-N", "3", "--json"]);
    let d = calc(&["character", "-f", "x1^3", "-N", "3", "--json"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn character_json_schema() {
    let o = calc(&["character", "-f", "x1^3", "-N", "3", "--compare", "--fixed", ":1", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let direct = &v["result"]["direct"];
    assert_eq!(direct["a"], 3);
    assert_eq!(direct["N"], 3);
    let first = &direct["terms"][0];
    assert_eq!(first["q"], 0);
    for t in first["coeff"].as_array().unwrap() {
        assert!(t["u"].is_i64() && t["t"].is_i64() && t["c"].is_string());
    }
    assert_eq!(v["result"]["convention"]["fibre"], 1);
    assert!(v["result"]["pre_substitution"]["terms"].is_array());
}

#[test]
fn theta_pole_is_an_input_error() {
    let o = calc(&["character", "-f", "x1^3", "-N", "2", "--fixed", ":0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pole"));
}

#[test]
fn eval_and_show_currents() {
    let o = calc(&["eval", "-D", "1", "y1", "x1", "-n", "0"]);
    assert_eq!(stdout(&o), "A_(0)B = 1\n");
    let o = calc(&["show-currents", "-D", "1", "--profile", "polyvector"]);
    assert!(stdout(&o).contains("G = "));
    let o = calc(&["show-currents", "-f", "x1^3"]);
    assert!(stdout(&o).contains("rank: 1/3"));
}

#[test]
fn bv_and_brst_suites_pass() {
    let o = calc(&["brst-suite", "-f", "x1^3 + x2^3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = calc(&["bv", "-f", "x1^2", "--nmax", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn state_round_trip_corpus() {
    let corpus = [
        (1, Profile::Polyvector, ":d x1 y1:"),
        (1, Profile::Polyvector, "2 :x1 psi1:"),
        (2, Profile::Polyvector, "1 - 3/2 :y1 dx2: + d^2x1 + :phi1 psi2 x1:"),
        (2, Profile::DeRham, ":dphi1 psi2: - 1/3 :y2 y1 x1 x1:"),
        (3, Profile::DeRham, "-:psi3 phi2: + 5 d^3y3"),
    ];
    for (dim, profile, text) in corpus {
        let ctx = AlgebraContext::new(dim, profile).unwrap();
        let (s, _) = parse_state(text, ctx).unwrap();
        let (back, _) = parse_state(&s.render(), ctx).unwrap();
        assert_eq!(back, s, "{text}");
    }
    let p = parse_potential("x1^4 + x2^2", None, Some(&[1, 2])).unwrap();
    assert_eq!(p.a(), 4);
}
