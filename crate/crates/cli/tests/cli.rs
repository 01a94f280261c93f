use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn liequant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liequant"))
        .args(args)
        .env_remove("LIEQUANT_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn wien_prints_root_and_residual() {
    let out = liequant(&["wien"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let x = v["x"].as_f64().unwrap();
    assert!((x - 2.821_439_372_122_078_9).abs() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() < 1e-14);
    // Independent check of the transcendental equation.
    assert!((3.0 - x - 3.0 * (-x).exp()).abs() < 1e-14);
}

#[test]
fn cover_check_passes_for_seed_7() {
    let out = liequant(&["cover-check", "--samples", "1000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert!(v["report"]["homomorphism_defect"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["report"]["kernel_violations"], 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |seed: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_liequant"));
        c.args(args).env_remove("LIEQUANT_SEED");
        if let Some(s) = seed {
            c.env("LIEQUANT_SEED", s);
        }
        c.output().unwrap()
    };
    let from_env = run(Some("7"), &["cover-check", "--samples", "50"]);
    let from_flag = run(None, &["cover-check", "--samples", "50", "--seed", "7"]);
    assert_eq!(from_env.stdout, from_flag.stdout);
    assert_eq!(json(&from_env)["seed"], 7);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    for args in [
        &["cover-check", "--samples", "200", "--seed", "11"][..],
        &["rigidbody", "--steps", "100", "--inertia", "1,2,3", "--j", "0.3,-1,0.2"],
        &["cg", "--k", "1", "--l", "3/2"],
        &["blackbody", "--temperature", "300", "--points", "50"],
    ] {
        let a = liequant(args);
        let b = liequant(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["cg", "--k", "1"],
        &["rotate", "--vector", "1,2"],
        &[],
    ] {
        let out = liequant(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_1_with_token() {
    let cases: [(&[&str], &str); 6] = [
        (&["irrep", "--j", "1/3"], "bad_spin"),
        (&["algebra-verify", "--name", "e8"], "unknown_algebra"),
        (&["fock-spectrum", "--levels", "1"], "too_small"),
        (&["euler", "--matrix", "1,0,0,0,1,0,0,0,2"], "invalid"),
        (
            &["highest-weight", "--u", "-1", "--v", "1", "--alpha", "0.2"],
            "no_unitary_rep",
        ),
        (&["rydberg", "--kmax", "1"], "too_few"),
    ];
    for (args, token) in cases {
        let out = liequant(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(
            stderr(&out).contains(&format!("error: {token}:")),
            "{args:?}: {}",
            stderr(&out)
        );
    }
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn assign_recovers_levels_from_lines() {
    let dir = tempfile::tempdir().unwrap();
    let truth = [0.0, 1.0, 2.5, 4.5];
    let mut csv = String::from("omega,weight\n");
    for j in 1..truth.len() {
        for k in 0..j {
            csv.push_str(&format!("{},1\n", truth[j] - truth[k]));
        }
    }
    let data = write(dir.path(), "lines.csv", &csv);
    let levels = write(dir.path(), "init.json", "{\"levels\": [0.0, 1.1, 2.4, 4.6]}");
    let out = liequant(&["assign", "--data", &data, "--levels", &levels]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let got: Vec<f64> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (g, t) in got.iter().zip(truth) {
        assert!((g - t).abs() < 1e-9, "{got:?}");
    }
    assert!(v["objective"].as_f64().unwrap() < 1e-16);
    assert_eq!(v["assignments"].as_array().unwrap().len(), 6);
    assert_eq!(v["assignments"][0], serde_json::json!({ "upper": 2, "lower": 1 }));
    assert!(v["stop"] == "assignments_repeated" || v["stop"] == "max_iters");

    let bare = write(dir.path(), "bare.json", "[0.0, 1.1, 2.4, 4.6]");
    let again = liequant(&["assign", "--data", &data, "--levels", &bare]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lines.csv");
    let out = liequant(&["rydberg", "--kmax", "3", "--natural", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "k,l,wavenumber");
    assert_eq!(rows.len(), 4);
    let first: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(first, 0.75);
}

#[test]
fn constant_overrides_apply() {
    let v = json(&liequant(&["stefan", "--natural"]));
    assert!((v["sigma"].as_f64().unwrap() - std::f64::consts::PI.powi(2) / 60.0).abs() < 1e-15);
    let v = json(&liequant(&["stefan", "--natural", "--kbar", "2"]));
    assert!((v["sigma"].as_f64().unwrap() - 16.0 * std::f64::consts::PI.powi(2) / 60.0).abs() < 1e-14);
    let out = liequant(&["stefan", "--c", "-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cg_reports_clebsch_gordan_series() {
    let v = json(&liequant(&["cg", "--k", "1", "--l", "1/2"]));
    assert_eq!(
        v["components"],
        serde_json::json!([{ "j": "3/2", "multiplicity": 1 }, { "j": "1/2", "multiplicity": 1 }])
    );
    assert!(v["unitarity_defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "rotate",
        "euler",
        "lift",
        "cover-check",
        "algebra-verify",
        "rigidbody",
        "fock-spectrum",
        "coherent",
        "highest-weight",
        "fermion-check",
        "irrep",
        "cg",
        "gibbs",
        "blackbody",
        "wien",
        "stefan",
        "rydberg",
        "assign",
    ] {
        let out = liequant(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        let text = String::from_utf8(out.stdout).unwrap();
        let about = text.lines().next().unwrap();
        assert!(about.len() > 20, "{sub}: {about}");
    }
}
