use std::fs;
use std::path::Path;

use fss_compensation::cli::{run_with, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK};
use fss_compensation::experiments::{GATING_HEADER, SWEEP_HEADER};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fss-comp").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn value_of(stdout: &str, key: &str) -> f64 {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` in\n{stdout}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn simulate_uncompensated_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "base.toml",
        "fss_uev = 3\nseed = 42\nmax_samples = 1000000\n[ramp]\n",
    );
    let out = run(&["simulate", &cfg]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!((value_of(&out.stdout, "fidelity_phi_plus") - 0.523).abs() < 0.005);
    assert!((value_of(&out.stdout, "concurrence") - 0.214).abs() < 0.005);
    assert!(out.stdout.contains("n_samples           1000000") || out.stdout.contains("converged           true"));
}

#[test]
fn simulate_perfect_compensation_prints_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ideal.toml", "fss_uev = 3\nd_omega1 = 0\nd_omega2 = 0\n");
    let out = run(&["simulate", "--config", &cfg]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("fidelity_phi_plus   1.000"), "{}", out.stdout);
    assert!(out.stdout.contains("concurrence         1.000"), "{}", out.stdout);
    assert!(out.stdout.contains("converged           true"));

    let analytic = run(&["simulate", &cfg, "--method", "analytic"]);
    assert_eq!(analytic.code, EXIT_OK);
    assert!(analytic.stdout.contains("method              analytic"));
    assert!(analytic.stdout.contains("concurrence         1.000"));
}

#[test]
fn dumped_matrix_validates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "fss_uev = 3\nd_omega1 = 1.5\nmax_samples = 100000\n");
    let rho = dir.path().join("rho.txt");
    let out = run(&["simulate", &cfg, "--dump-rho", rho.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = fs::read_to_string(&rho).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.split_whitespace().count() == 4));

    let check = run(&["validate", rho.to_str().unwrap()]);
    assert_eq!(check.code, EXIT_OK, "{}{}", check.stdout, check.stderr);
    assert!(check.stdout.starts_with("valid"));
}

#[test]
fn validate_rejects_unphysical_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    let row = |d: &str, k: usize| {
        (0..4).map(|j| if j == k { format!("{d}+0j") } else { "0+0j".to_string() }).collect::<Vec<_>>().join(" ")
    };
    fs::write(&bad, format!("{}\n{}\n{}\n{}\n", row("0.5", 0), row("0.6", 1), row("0", 2), row("-0.1", 3))).unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).code, EXIT_NUMERIC);

    let garbage = dir.path().join("garbage.txt");
    fs::write(&garbage, "not a matrix\n").unwrap();
    assert_eq!(run(&["validate", garbage.to_str().unwrap()]).code, EXIT_CONFIG);
}

#[test]
fn strict_non_convergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.toml", "fss_uev = 3\nbatch_size = 100\nmax_samples = 1000\nrel_tol = 1e-12\n[ramp]\n");
    let lax = run(&["simulate", &cfg]);
    assert_eq!(lax.code, EXIT_OK);
    assert!(lax.stderr.contains("did not converge"));
    assert_eq!(run(&["simulate", &cfg, "--strict"]).code, EXIT_NUMERIC);
}

#[test]
fn design_ramp_prints_slope() {
    let out = run(&["design-ramp", "--vpi-v", "3", "--vpi-h", "9", "--fss", "1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("dv_dt_v_per_ns  2.176"), "{}", out.stdout);
    assert!(out.stdout.contains("delta_k_rad_ns  1.519"), "{}", out.stdout);

    let degenerate = run(&["design-ramp", "--vpi-v", "3", "--vpi-h", "3", "--fss", "1"]);
    assert_eq!(degenerate.code, EXIT_CONFIG);
    assert!(degenerate.stderr.contains("half-wave"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let neg = write_config(dir.path(), "neg.toml", "fss_uev = 3\ntau_x_ns = -1\n");
    let out = run(&["simulate", &neg]);
    assert_eq!(out.code, EXIT_CONFIG);
    assert!(out.stderr.contains("tau_x_ns"), "{}", out.stderr);

    let both = write_config(dir.path(), "both.toml", "fss_uev = 3\nd_omega2 = 1\n[ramp]\nk_vx = 1\n");
    let out = run(&["simulate", &both]);
    assert_eq!(out.code, EXIT_CONFIG);
    assert!(out.stderr.contains("d_omega2"));

    let unknown = write_config(dir.path(), "unk.toml", "fss_uev = 3\nlifetime = 2\n");
    let out = run(&["simulate", &unknown]);
    assert_eq!(out.code, EXIT_CONFIG);
    assert!(out.stderr.contains("lifetime"), "{}", out.stderr);

    assert_eq!(run(&["simulate", "/nonexistent/cfg.toml"]).code, EXIT_CONFIG);
    assert_eq!(run(&["simulate"]).code, EXIT_CONFIG);
    assert_eq!(run(&["no-such-command"]).code, EXIT_CONFIG);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn sweeps_write_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "mc.toml", "fss_uev = 3\nseed = 5\nmax_samples = 20000\nmethod = \"monte_carlo\"\n");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "sweep-mismatch", &cfg, "-o", path.to_str().unwrap(),
            "--d1-steps", "3", "--d2-steps", "4", "--d1-min", "-1", "--d1-max", "1",
        ]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 1 + 12);
    assert!(lines[1..].iter().all(|l| l.ends_with(",monte_carlo") && l.split(',').count() == 9));
}

#[test]
fn delay_and_gate_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "d.toml", "fss_uev = 3\n");
    let out = run(&["sweep-delay", &cfg, "--steps", "5"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with(SWEEP_HEADER));
    assert_eq!(out.stdout.lines().count(), 6);
    assert!(out.stdout.lines().nth(1).unwrap().starts_with("0,0,0,1,"));

    let out = run(&["gate-tradeoff", &cfg, "--steps", "10", "--gate-min", "0.1", "--gate-max", "10"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], GATING_HEADER);
    assert_eq!(lines.len(), 11);

    let bad = run(&["sweep-delay", &cfg, "--steps", "0"]);
    assert_eq!(bad.code, EXIT_CONFIG);
}
