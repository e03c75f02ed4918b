use std::path::PathBuf;
use std::process::{Command, Output};

use frictionkit::cli::{OutputRecord, CSV_HEADER, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_OK};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frictionkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Vec<OutputRecord> {
    serde_json::from_slice(&o.stdout).expect("valid JSON records")
}

const FS: [&str; 10] = [
    "--sector", "free-space", "--z", "1", "--t1", "0.5", "--t2", "0.2", "--rel-tol", "1e-9",
];

fn with<'a>(head: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(tail).copied().collect()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(EXIT_OK));
    assert_eq!(run(&["--version"]).status.code(), Some(EXIT_OK));
}

#[test]
fn configuration_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["force", "--beta", "1.0", "--z", "1", "--t1", "0.5", "--t2", "0.2"],
        &["force", "--beta", "0.5", "--z", "-1", "--t1", "0.5", "--t2", "0.2"],
        &["force", "--beta", "0.5", "--z", "1", "--t1", "0.5"],
        &["force", "--beta", "0.5", "--z", "1", "--t1", "0.5", "--t2", "0.2", "--formulation", "xx"],
        &["force", "--beta", "0.5", "--z", "1", "--t1", "0.5", "--t2", "0.2",
          "--formulation", "ph", "--sector", "vp-stress"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(EXIT_CONFIG), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn force_csv_row() {
    let out = run(&with(&["force", "--beta", "0.2", "--formulation", "ph"], &FS));
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, [CSV_HEADER, lines[1]]);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 15);
    assert_eq!(&fields[..2], ["2.0000000000000001e-1", "1.0000000000000000e0"]);
    assert_eq!(&fields[9..11], ["ph", "free-space"]);
    assert_eq!(fields[14], "ok");
    // 17 significant digits in the value column.
    let mantissa = fields[11].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
    assert!(fields[11].parse::<f64>().unwrap() != 0.0);
}

#[test]
fn equilibrium_force_is_null() {
    let out = run(&[
        "force", "--beta", "0", "--z", "1", "--t1", "0.4", "--t2", "0.4", "--output", "json",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let recs = json(&out);
    assert_eq!(recs.len(), 1);
    assert!(recs[0].value.abs() <= 1e-14);
    assert_eq!(recs[0].status, "ok");
}

#[test]
fn sweep_is_ordered_and_deterministic() {
    let args = with(
        &["sweep", "--axis", "beta", "--start", "0.1", "--stop", "0.5", "--count", "5",
          "--formulation", "dk", "--output", "json", "--jobs", "2"],
        &FS,
    );
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    let recs = json(&a);
    let betas: Vec<f64> = recs.iter().map(|r| r.beta).collect();
    assert_eq!(betas.len(), 5);
    assert_eq!(betas[0], 0.1);
    assert_eq!(betas[4], 0.5);
    assert!(betas.windows(2).all(|w| w[1] > w[0]));
    assert!(recs.iter().all(|r| r.formulation == "dk" && r.status == "ok"));

    let single = run(&with(&["sweep", "--axis", "beta", "--start", "0.1", "--stop", "0.5",
        "--count", "5", "--formulation", "dk", "--output", "json", "--jobs", "1"], &FS));
    assert_eq!(single.stdout, a.stdout);
}

#[test]
fn json_round_trips_through_records() {
    let out = run(&with(
        &["compare", "--beta", "0.3", "--formulation", "dk", "--output", "json"],
        &FS,
    ));
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let recs = json(&out);
    assert_eq!(recs.len(), 3);
    assert_eq!(recs[2].formulation, "dk/ph");
    assert_eq!(recs[2].status, "pass");
    assert!((recs[2].value - 4.0 * std::f64::consts::PI).abs() < 1e-6);
    let again = serde_json::to_string_pretty(&recs).unwrap() + "\n";
    assert_eq!(again, stdout(&out));
}

#[test]
fn indeterminate_ratio_round_trips() {
    let out = run(&[
        "compare", "--beta", "0", "--z", "1", "--t1", "0.4", "--t2", "0.4",
        "--formulation", "dk", "--sector", "free-space", "--output", "json",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let recs = json(&out);
    assert_eq!(recs[2].status, "indeterminate");
    assert!(recs[2].value.is_nan());
}

#[test]
fn flags_override_config_file() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("cli_override.conf");
    std::fs::write(
        &path,
        "# scenario\nbeta = 0.4\nz=1\nt1=0.5\nt2=0.2\nsector=free-space\nomega_p = 2\noutput=json\n",
    )
    .unwrap();
    let conf = path.to_str().unwrap();

    let from_file = json(&run(&["force", "--config", conf]));
    assert_eq!(from_file[0].beta, 0.4);
    assert_eq!(from_file[0].omega_p, 2.0);
    assert_eq!(from_file[0].sector, "free-space");

    let overridden = json(&run(&["force", "--config", conf, "--beta", "0.2", "--omega-p", "1.5"]));
    assert_eq!(overridden[0].beta, 0.2);
    assert_eq!(overridden[0].omega_p, 1.5);
    assert_eq!(overridden[0].t1, 0.5);

    let bad = dir.join("cli_bad.conf");
    std::fs::write(&bad, "beta=0.4\nwarp=9\n").unwrap();
    assert_eq!(
        run(&["force", "--config", bad.to_str().unwrap()]).status.code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(
        run(&["force", "--config", "/nonexistent/frictionkit.conf"]).status.code(),
        Some(EXIT_CONFIG)
    );
}

#[test]
fn exhausted_budget_exits_three() {
    let out = run(&with(&["force", "--beta", "0.5", "--max-evals", "1000"], &FS));
    assert_eq!(out.status.code(), Some(EXIT_CONVERGENCE));
    assert!(stdout(&out).lines().nth(1).unwrap().ends_with(",nonconverged"));
}

#[test]
fn symmetry_check_passes() {
    let out = run(&[
        "check-symmetry", "--beta", "0.7", "--z", "0.5", "--t1", "1", "--t2", "0.1",
        "--count", "2000", "--seed", "7", "--output", "json",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let recs = json(&out);
    assert_eq!(recs[0].formulation, "ph-symmetry");
    assert!(recs[0].value <= 1e-12);
}
