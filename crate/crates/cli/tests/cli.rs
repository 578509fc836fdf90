use std::process::{Command, Output};

use cphi_core::operator_matrix::build_matrix;
use cphi_core::symbol::DirichletSymbol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn cphi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cphi"))
        .args(args)
        .env_remove("CPHI_MAX_ENTRIES")
        .output()
        .expect("cphi runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn bounds_boundary_example() {
    let o = cphi(&["bounds", "--c1-re", "1", "--c2-abs", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let d = json(&o);
    assert_eq!(d["symbol_class"], "boundary");
    assert!((d["lower_sq"]["value"].as_f64().unwrap() - 1.644_934_066_848).abs() < 1e-11);
    assert!((d["upper_sq"]["value"].as_f64().unwrap() - 2.612_375_348_685).abs() < 1e-11);
    assert_eq!(d["approx_numbers"], Value::Null);
}

#[test]
fn bounds_constant_example() {
    let d = json(&cphi(&["bounds", "--c1-re", "2", "--c2-abs", "0"]));
    assert_eq!(d["symbol_class"], "constant");
    assert_eq!(d["lower_sq"], d["upper_sq"]);
    assert!(
        (d["lower_sq"]["value"].as_f64().unwrap() - std::f64::consts::PI.powi(4) / 90.0).abs()
            < 1e-11
    );
}

#[test]
fn invalid_symbol_exits_2() {
    let o = cphi(&["bounds", "--c1-re", "0.6", "--c2-abs", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("symbol violates Re c1 ≥ 1/2 + |c2|"));
    assert!(stdout(&o).is_empty());
    assert_eq!(cphi(&["bounds", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(cphi(&["bounds", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(cphi(&["bounds", "--tol", "0"]).status.code(), Some(2));
}

#[test]
fn documents_carry_version_and_config() {
    let d = json(&cphi(&[
        "bounds", "--c1-re", "3", "--c1-im", "-1.5", "--q", "5",
    ]));
    assert_eq!(d["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(d["command"], "bounds");
    assert_eq!(d["config"]["c1_re"], 3.0);
    assert_eq!(d["config"]["c1_im"], -1.5);
    assert_eq!(d["config"]["q"], 5);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["figure"][..],
        &["bounds", "--c2-arg", "1.1"],
        &["matrix-norm", "--rows", "20", "--cols", "300"],
        &["approx-numbers", "--format", "json"],
    ] {
        assert_eq!(cphi(args).stdout, cphi(args).stdout, "{args:?}");
    }
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# symbol\nc1_re = 3\nc2_abs = 0.1\nformat = csv\n").unwrap();
    let p = path.to_str().unwrap();
    let csv = stdout(&cphi(&["bounds", "--config", p]));
    assert!(csv.starts_with("quantity,value\n"));
    let d = json(&cphi(&[
        "bounds", "--config", p, "--c1-re", "4", "--format", "json",
    ]));
    assert_eq!(d["config"]["c1_re"], 4.0);
    assert_eq!(d["config"]["c2_abs"], 0.1);

    std::fs::write(&path, "colour = blue\n").unwrap();
    let o = cphi(&["bounds", "--config", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let o = cphi(&[
        "figure",
        "--points",
        "7",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 7 + 1);
    assert!(!text.contains('\r'));
}

#[test]
fn matrix_norm_trivial_truncation() {
    let d = json(&cphi(&["matrix-norm", "--rows", "0", "--cols", "1"]));
    assert_eq!(d["lower"], 1.0);
    assert_eq!(d["within_analytic_bracket"], true);
}

#[test]
fn matrix_norm_default_example() {
    let o = cphi(&["matrix-norm"]);
    assert_eq!(o.status.code(), Some(0));
    let d = json(&o);
    assert_eq!(
        (d["rows"].as_u64(), d["cols"].as_u64()),
        (Some(60), Some(5000))
    );
    assert_eq!(d["within_analytic_bracket"], true);
    assert_eq!(d["upper_certified"], true);
}

#[test]
fn resource_limit_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_cphi"))
        .args(["matrix-norm", "--rows", "99", "--cols", "1000"])
        .env("CPHI_MAX_ENTRIES", "50000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("exceeds the cap"));
}

#[test]
fn matrix_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    let o = cphi(&[
        "matrix-norm",
        "--c1-re",
        "1.7",
        "--c1-im",
        "0.4",
        "--c2-abs",
        "0.6",
        "--c2-arg",
        "-2",
        "--rows",
        "3",
        "--cols",
        "5",
        "--dump-matrix",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("3 5"));
    let sym =
        DirichletSymbol::from_polar(cphi_core::Complex64::new(1.7, 0.4), 0.6, -2.0, 2).unwrap();
    let m = build_matrix(&sym, 3, 5).unwrap();
    let values: Vec<(f64, f64)> = lines
        .map(|l| {
            let (re, im) = l.split_once(' ').unwrap();
            (re.parse().unwrap(), im.parse().unwrap())
        })
        .collect();
    assert_eq!(values.len(), 4 * 5);
    for i in 0..4 {
        for j in 1..=5 {
            let z = m.entry(i, j);
            assert_eq!(values[i * 5 + j - 1], (z.re, z.im));
        }
    }
}

#[test]
fn approx_numbers_examples() {
    let o = cphi(&["approx-numbers", "--n-max", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,sigma_n_plus_1,bound,pass");
    assert_eq!(rows.len(), 11);
    for (n, line) in rows[1..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let bound: f64 = cells[2].parse().unwrap();
        let expected = 1.5f64.sqrt() * 3f64.powi(-(n as i32 + 1));
        assert!((bound - expected).abs() <= 1e-11 * expected);
        assert_eq!(cells[3], "true");
    }

    let empty = cphi(&["approx-numbers", "--n-max", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty), "n,sigma_n_plus_1,bound,pass\n");

    let boundary = cphi(&["approx-numbers", "--c1-re", "1", "--c2-abs", "0.5"]);
    assert_eq!(boundary.status.code(), Some(2));
    assert!(stderr(&boundary).contains("not compact"));

    let too_many = cphi(&["approx-numbers", "--rows", "5", "--n-max", "6"]);
    assert_eq!(too_many.status.code(), Some(2));
}

#[test]
fn verify_lemmas_modes() {
    let d = json(&cphi(&["verify-lemmas"]));
    assert_eq!(d["all_passed"], true);
    assert!((d["s2"].as_f64().unwrap() - 6.2102).abs() < 5e-4);

    let narrow = cphi(&["verify-lemmas", "--s-min", "1.001", "--s-max", "2"]);
    assert_eq!(narrow.status.code(), Some(0));

    let fault = cphi(&["verify-lemmas", "--inject-fault", "--points", "10"]);
    assert_eq!(fault.status.code(), Some(1));
    assert!(stderr(&fault).contains("zeta_bracket failed at"));

    assert_eq!(
        cphi(&["verify-lemmas", "--s-min", "0.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn figure_layout() {
    let text = stdout(&cphi(&["figure", "--points", "100"]));
    let mut lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,inv_x_plus_f,inv_x_plus_g,zeta_x_plus_1");
    let footer = lines.pop().unwrap();
    assert!(footer.starts_with("# s2,6.210"));
    assert_eq!(lines.len(), 101);
    let at_two: Vec<f64> = lines
        .iter()
        .find(|l| l.starts_with("2,"))
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let root_2_over_pi = (2.0 / std::f64::consts::PI).sqrt();
    assert!((at_two[1] - (0.5 + root_2_over_pi / 3.0)).abs() < 1e-11);
    assert!((at_two[2] - (0.5 + 2.0 / 3.0)).abs() < 1e-11);
    assert!((at_two[3] - 1.202_056_903_16).abs() < 1e-11);
    assert!(at_two[1] < at_two[2] && at_two[2] < at_two[3]);
    let at_eight: Vec<f64> = lines
        .iter()
        .find(|l| l.starts_with("8,"))
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(at_eight[2] <= at_eight[1]);
}

#[test]
fn random_valid_symbols_succeed() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..8 {
        let c = rng.random_range(0.0..1.5);
        let s1 = 0.5 + c + rng.random_range(0.05..1.0);
        let args = [
            "matrix-norm".to_string(),
            format!("--c1-re={s1}"),
            format!("--c1-im={}", rng.random_range(-5.0..5.0)),
            format!("--c2-abs={c}"),
            format!("--c2-arg={}", rng.random_range(-3.0..3.0)),
            "--rows=30".into(),
            "--cols=500".into(),
        ];
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = cphi(&refs);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert_eq!(json(&o)["within_analytic_bracket"], true);
    }
}
