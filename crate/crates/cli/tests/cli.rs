use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn schwarzian(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwarzian"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn column(dir: &Path, file: &str, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(dir.join(file)).unwrap();
    let j = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records()
        .map(|rec| rec.unwrap()[j].parse().unwrap())
        .collect()
}

fn max_dev(xs: &[f64], target: f64) -> f64 {
    xs.iter().map(|x| (x - target).abs()).fold(0.0, f64::max)
}

#[test]
fn tan_seed_schwarzian_column() {
    let dir = TempDir::new().unwrap();
    let out = schwarzian(
        dir.path(),
        &[
            "simulate", "--mode", "schwarz", "--lambda", "2", "--out", "tan.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let s = column(dir.path(), "tan.csv", "S_of_rho");
    assert_eq!(s.len(), 1001);
    assert!(max_dev(&s, 2.0) <= 1e-6, "{}", max_dev(&s, 2.0));
}

#[test]
fn lagrange_energy_is_constant() {
    let dir = TempDir::new().unwrap();
    for (lambda, nu) in [(2.0, 0.5), (-2.0, 1.0), (0.0, -1.5)] {
        let out = schwarzian(
            dir.path(),
            &[
                "simulate",
                "--mode",
                "lagrange",
                &format!("--lambda={lambda}"),
                &format!("--nu={nu}"),
                "--out",
                "l.csv",
            ],
        );
        assert_eq!(out.status.code(), Some(0));
        let h = column(dir.path(), "l.csv", "H");
        assert!(
            max_dev(&h, 0.5 * lambda + nu * nu) <= 1e-8,
            "λ={lambda} ν={nu}"
        );
    }
}

#[test]
fn config_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        r#"
schema_version = 1
mode = "hamilton"
lambda = -2.0
nu = 0.5

[seed]
kind = "closed_form"
mobius = [1.0, 1.0, 0.0, 2.0]

[integrator]
method = "rk45"
step = 0.01
t_end = 0.5

[output]
csv = "h.csv"
"#,
    )
    .unwrap();
    let out = schwarzian(dir.path(), &["simulate", "--config", "run.toml"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let h = column(dir.path(), "h.csv", "H2d");
    assert_eq!(h.len(), 51);
    assert!(max_dev(&h, -1.0 + 0.25) <= 1e-10);
    assert_eq!(json(&out)["config"]["integrator"]["method"], "rk45");

    let out = schwarzian(
        dir.path(),
        &[
            "simulate", "--config", "run.toml", "--t-end", "1", "--out", "h2.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(column(dir.path(), "h2.csv", "t").len(), 101);
}

#[test]
fn usage_errors_exit_2_without_output() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &[
            "simulate", "--mode", "schwartz", "--lambda", "2", "--out", "x.csv",
        ],
        &[
            "simulate", "--mode", "lagrange", "--lambda", "2", "--out", "x.csv",
        ],
        &["simulate", "--mode", "schwarz", "--out", "x.csv"],
        &[
            "simulate", "--mode", "schwarz", "--lambda", "2", "--step", "0", "--out", "x.csv",
        ],
        &[
            "simulate",
            "--mode",
            "schwarz",
            "--lambda",
            "2",
            "--seed",
            "state:1,2",
            "--out",
            "x.csv",
        ],
        &[
            "simulate",
            "--mode",
            "schwarz",
            "--lambda",
            "2",
            "--seed",
            "closed-form:1,2,2,4",
            "--out",
            "x.csv",
        ],
        &["simulate", "--mode", "schwarz", "--lambda", "2"],
        &["simulate", "--config", "missing.toml", "--out", "x.csv"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = schwarzian(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!dir.path().join("x.csv").exists(), "{args:?}");
    }
    std::fs::write(
        dir.path().join("bad.toml"),
        "schema_version = 1\nmode = \"quantum\"\n",
    )
    .unwrap();
    let out = schwarzian(
        dir.path(),
        &["simulate", "--config", "bad.toml", "--out", "x.csv"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn blow_up_keeps_partial_csv() {
    let dir = TempDir::new().unwrap();
    let out = schwarzian(
        dir.path(),
        &[
            "simulate", "--mode", "schwarz", "--lambda", "2", "--t-end", "3", "--out", "b.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["completed"], false);
    assert_eq!(report["failure"]["kind"], "BlowUp");
    let t = column(dir.path(), "b.csv", "t");
    assert_eq!(report["rows"].as_u64().unwrap() as usize, t.len());
    assert!(*t.last().unwrap() > 1.5 && *t.last().unwrap() < std::f64::consts::FRAC_PI_2 + 5e-3);
}

#[test]
fn singular_seed_is_a_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let out = schwarzian(
        dir.path(),
        &[
            "simulate",
            "--mode",
            "schwarz",
            "--lambda",
            "1",
            "--seed",
            "state:0,0,1",
            "--out",
            "z.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["failure"]["kind"], "VelocityVanishesAt");
    assert_eq!(
        std::fs::read_to_string(dir.path().join("z.csv"))
            .unwrap()
            .lines()
            .count(),
        1
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = schwarzian(
            dir.path(),
            &[
                "simulate", "--mode", "geodesic", "--lambda", "2", "--nu", "1", "--out", name,
            ],
        );
        assert_eq!(out.status.code(), Some(0));
        (out.stdout, std::fs::read(dir.path().join(name)).unwrap())
    };
    let (a_out, a_csv) = run("a.csv");
    let (b_out, b_csv) = run("a.csv");
    assert_eq!(a_csv, b_csv);
    assert_eq!(a_out, b_out);
    let v1 = schwarzian(dir.path(), &["verify", "--suite", "invariance"]);
    let v2 = schwarzian(dir.path(), &["verify", "--suite", "invariance"]);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn charges_round_trip_every_schema() {
    let dir = TempDir::new().unwrap();
    for (mode, extra) in [
        ("schwarz", vec!["--lambda", "2"]),
        ("lagrange", vec!["--lambda", "-2", "--nu", "1"]),
        ("hamilton", vec!["--lambda", "2", "--nu", "0.5"]),
        ("geodesic", vec!["--lambda", "0", "--nu", "-1"]),
    ] {
        let csv = format!("{mode}.csv");
        let mut args = vec!["simulate", "--mode", mode, "--out", &csv];
        args.extend(&extra);
        let sim = schwarzian(dir.path(), &args);
        assert_eq!(sim.status.code(), Some(0), "{mode}");
        let mut args = vec!["charges", csv.as_str()];
        args.extend(&extra);
        let ch = schwarzian(dir.path(), &args);
        assert_eq!(ch.status.code(), Some(0), "{mode}");
        let (a, b) = (&json(&sim)["charges"], &json(&ch)["summary"]);
        let (qa, qb) = (
            a["charges"].as_array().unwrap(),
            b["charges"].as_array().unwrap(),
        );
        assert_eq!(qa.len(), qb.len());
        for (x, y) in qa.iter().zip(qb) {
            assert_eq!(x["name"], y["name"]);
            let d = (x["max_drift"].as_f64().unwrap() - y["max_drift"].as_f64().unwrap()).abs();
            assert!(d <= 1e-12, "{mode} {}: {d}", x["name"]);
        }
        let d = (a["casimir"]["max_abs"].as_f64().unwrap()
            - b["casimir"]["max_abs"].as_f64().unwrap())
        .abs();
        assert!(d <= 1e-12);
    }
}

#[test]
fn schwarz_drifts_within_tolerance() {
    let dir = TempDir::new().unwrap();
    schwarzian(
        dir.path(),
        &[
            "simulate", "--mode", "schwarz", "--lambda", "2", "--out", "s.csv",
        ],
    );
    // λ inferred from the S_of_rho column
    let out = schwarzian(dir.path(), &["charges", "s.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = &json(&out)["summary"];
    assert!((summary["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    for c in summary["charges"].as_array().unwrap() {
        assert!(c["max_drift"].as_f64().unwrap() <= 1e-8, "{c}");
    }
}

const HEADER: &str = "t,rho,rho_dot,rho_ddot,S_of_rho,P,D,K,casimir_residual\n";

#[test]
fn straight_line_file_has_zero_drift() {
    let dir = TempDir::new().unwrap();
    let mut text = HEADER.to_string();
    for i in 0..20 {
        let t = i as f64 * 0.05;
        text.push_str(&format!("{t},{},3,0,0,0,0,3,0\n", -1.0 + 3.0 * t));
    }
    std::fs::write(dir.path().join("line.csv"), text).unwrap();
    let out = schwarzian(dir.path(), &["charges", "line.csv", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = &json(&out)["summary"];
    for c in summary["charges"].as_array().unwrap() {
        assert_eq!(c["max_drift"].as_f64(), Some(0.0), "{c}");
    }
    assert_eq!(summary["casimir"]["max_abs"].as_f64(), Some(0.0));
}

#[test]
fn corrupted_row_is_located() {
    let dir = TempDir::new().unwrap();
    schwarzian(
        dir.path(),
        &[
            "simulate", "--mode", "schwarz", "--lambda", "2", "--out", "s.csv",
        ],
    );
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // data row 417 is line 418; bump its ρ̈
    let mut fields: Vec<String> = lines[418].split(',').map(String::from).collect();
    fields[3] = format!("{:.16e}", fields[3].parse::<f64>().unwrap() + 1e-3);
    lines[418] = fields.join(",");
    std::fs::write(dir.path().join("bad.csv"), lines.join("\n") + "\n").unwrap();
    let out = schwarzian(dir.path(), &["charges", "bad.csv", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = &json(&out)["summary"];
    for c in summary["charges"].as_array().unwrap() {
        assert_eq!(c["row"], 417, "{c}");
        assert!(c["max_drift"].as_f64().unwrap() > 1e-5);
    }
    // the third-order Casimir is an identity in (ρ, ρ̇, ρ̈), so a bad row leaves it at roundoff
    assert!(summary["casimir"]["max_abs"].as_f64().unwrap() < 1e-12);
}

#[test]
fn charges_rejects_unknown_schema() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("odd.csv"), "t,rho,velocity\n0,1,2\n").unwrap();
    assert_eq!(
        schwarzian(dir.path(), &["charges", "odd.csv"])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(dir.path().join("short.csv"), HEADER.to_string() + "0,1,2\n").unwrap();
    assert_eq!(
        schwarzian(dir.path(), &["charges", "short.csv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        schwarzian(dir.path(), &["charges", "absent.csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_suites() {
    let dir = TempDir::new().unwrap();
    let out = schwarzian(dir.path(), &["verify", "--suite", "algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["pass"], true);
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["max_residual"].as_f64() == Some(0.0)));

    let out = schwarzian(dir.path(), &["verify", "--suite", "geometry", "--nu", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["config"]["geometry_nu"],
        serde_json::json!([1.0])
    );
}

#[test]
fn corrupted_metric_fails_and_still_reports() {
    let dir = TempDir::new().unwrap();
    let out = schwarzian(
        dir.path(),
        &[
            "verify",
            "--suite",
            "all",
            "--perturb-metric",
            "0.05",
            "--out",
            "report.json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["pass"], false);
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(written, report);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .any(|c| c["name"].as_str().unwrap().ends_with("einstein") && c["pass"] == false));
    assert!(checks.iter().all(|c| (c["pass"] == true)
        == (c["max_residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap())));
}
