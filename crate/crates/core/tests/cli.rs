use std::fs;
use std::path::Path;

use fdelab::cli::{parse_config, run, Scenario, ScenarioConfig};
use proptest::prelude::*;

fn config(dir: &Path, scenario: Scenario, t_end: f64) -> ScenarioConfig {
    ScenarioConfig { scenario, t_end, out: dir.to_path_buf(), ..ScenarioConfig::default() }
}

fn data_rows(text: &str) -> Vec<Vec<&str>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect()
}

fn assert_full_precision(text: &str) {
    for row in data_rows(text) {
        for cell in row {
            if cell.is_empty() || !cell.contains('.') {
                continue;
            }
            let v: f64 = cell.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), cell);
        }
    }
}

#[test]
fn compare_writes_three_files_with_zero_past_difference() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&config(dir.path(), Scenario::Compare, 20.0)).unwrap();
    assert_eq!(summary.files.len(), 3);
    let diff = fs::read_to_string(dir.path().join("difference.csv")).unwrap();
    assert!(diff.starts_with('#'));
    assert_eq!(diff.lines().nth(1), Some("t,dx,dy,dz,dnorm"));
    let rows = data_rows(&diff);
    assert_eq!(rows.len(), 801);
    for r in &rows {
        let t: f64 = r[0].parse().unwrap();
        if t <= 0.0 {
            assert!(r[1..].iter().all(|c| c.parse::<f64>().unwrap() == 0.0), "t = {t}");
        }
    }
    for name in ["trajectory_fde.csv", "trajectory_coulomb.csv"] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        assert_eq!(text.lines().nth(1), Some("t,x1,y1,z1,x2,y2,z2,vx1,vy1,vz1,vx2,vy2,vz2"));
        assert_full_precision(&text);
    }
    assert_full_precision(&diff);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(&config(a.path(), Scenario::Compare, 10.0)).unwrap();
    run(&config(b.path(), Scenario::Compare, 10.0)).unwrap();
    for name in ["trajectory_fde.csv", "trajectory_coulomb.csv", "difference.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn spectrum_table() {
    let dir = tempfile::tempdir().unwrap();
    run(&ScenarioConfig { k_max: 10, ..config(dir.path(), Scenario::Spectrum, 1.0) }).unwrap();
    let text = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 10);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (i + 1).to_string());
        assert!(r[3].parse::<f64>().unwrap() <= 1e-10);
    }
    assert_full_precision(&text);
}

#[test]
fn balance_report() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&config(dir.path(), Scenario::Balance, 1.0)).unwrap();
    assert!(summary.notes.iter().any(|n| n.starts_with("omega_balance")));
    assert!(summary.notes.iter().any(|n| n.starts_with("r_simultaneous")));
    let text = fs::read_to_string(dir.path().join("balance.csv")).unwrap();
    assert!(text.contains("omega_balance") && text.contains("r_simultaneous"));
    let row = &data_rows(&text)[0];
    assert!((row[2].parse::<f64>().unwrap() - 1.614).abs() < 1e-3);
}

#[test]
fn torque_and_convergence_outputs() {
    let dir = tempfile::tempdir().unwrap();
    run(&config(dir.path(), Scenario::Torque, 20.0)).unwrap();
    let text = fs::read_to_string(dir.path().join("torque.csv")).unwrap();
    assert_eq!(text.lines().nth(1), Some("t,f_tangential,torque_z"));
    assert_full_precision(&text);
    run(&config(dir.path(), Scenario::Convergence, 10.0)).unwrap();
    let text = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    for r in &rows[2..] {
        // fifth order: halving h divides the error by about 32
        let ratio: f64 = r[2].parse().unwrap();
        assert!((19.2..=48.0).contains(&ratio), "{ratio}");
    }
}

#[test]
fn numerical_failure_maps_to_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig { rtol: 1e-300, atol: 1e-300, ..config(dir.path(), Scenario::HydrogenFde, 1.0) };
    let err = run(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert_eq!(err.name(), "StepSizeUnderflow");
    let bad = ScenarioConfig { t_end: -1.0, ..cfg };
    assert_eq!(run(&bad).unwrap_err().exit_code(), 2);
}

fn any_config() -> impl Strategy<Value = ScenarioConfig> {
    (
        prop::sample::select(Scenario::ALL.to_vec()),
        (1e-3f64..1.0, 0.1f64..2.0, 1.0f64..100.0, -1.0f64..-1e-3),
        (1e-3f64..500.0, 0.1f64..50.0, 1e-14f64..1e-2, 1e-16f64..1e-2, 1e-3f64..1.0),
        ("[a-z][a-z0-9_/. -]{0,20}[a-z0-9]", 1usize..50, 1e-6f64..0.5, 0.01f64..3.0),
    )
        .prop_map(|(scenario, (mu, r0, c, kappa), (t_end, t_past, rtol, atol, dt), (out, k, eps, r_e))| {
            let mut cfg = ScenarioConfig { scenario, t_end, t_past, rtol, atol, sample_dt: dt, k_max: k, epsilon: eps, r_e, ..Default::default() };
            cfg.params.mu = mu;
            cfg.params.r0 = r0;
            cfg.params.c = c.max(2.0);
            cfg.params.kappa = kappa;
            cfg.params.omega0 = fdelab::electrodynamics::PhysicalParams::circular_omega(kappa, mu, r0);
            cfg.out = out.into();
            cfg
        })
}

proptest! {
    #[test]
    fn render_parse_roundtrip(cfg in any_config()) {
        prop_assume!(cfg.validate().is_ok());
        prop_assert_eq!(parse_config(cfg.render().as_bytes()).unwrap(), cfg);
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_config(&bytes);
    }

    #[test]
    fn parser_reports_lines_within_input(lines in prop::collection::vec("[a-z_ =.0-9#]{0,20}", 0..10)) {
        let text = lines.join("\n");
        if let Err(e) = parse_config(text.as_bytes()) {
            if let Some(n) = e.line {
                prop_assert!(n >= 1 && n <= lines.len().max(1));
            }
        }
    }
}
