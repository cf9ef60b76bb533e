use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const CIRCUIT: &str = "[circuit]\nc1 = 2.0\nc2 = 3.0\nc12 = 4.0\nl1 = 5.0\nl2 = 6.0\ntau = 1.0\nbeta = 1.0\n";

fn run(config: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dichotomy"))
        .arg("--config")
        .arg(config)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        &format!("command = \"sweep\"\n{CIRCUIT}\n[beta_grid]\nmin = 0.0\nmax = 3.0\ncount = 61\n"),
    );
    let a = run(&cfg, &[]);
    let b = run(&cfg, &[]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn circuit_output_reparses_and_matches_direct_analysis() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.toml", CIRCUIT);
    let out = dir.path().join("m.toml");
    let o = run(&cfg, &["--command", "circuit", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("command = \"analyze\""));
    assert!(text.contains("[derived]"));

    let via_matrices = run(&out, &[]);
    let direct = run(&cfg, &["--command", "analyze"]);
    assert!(via_matrices.status.success(), "{}", stderr(&via_matrices));
    let rows = |o: &Output| -> Vec<(String, f64)> {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .skip(1)
            .filter(|l| !l.starts_with("circuit,"))
            .map(|l| {
                let (k, v) = l.rsplit_once(',').unwrap();
                (k.to_string(), v.parse().unwrap())
            })
            .collect()
    };
    let (a, b) = (rows(&via_matrices), rows(&direct));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.0, y.0);
        assert!((x.1 - y.1).abs() <= 1e-12 * x.1.abs().max(1.0), "{x:?} vs {y:?}");
    }
}

#[test]
fn full_rank_loss_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        "command = \"analyze\"\n[system]\nomega = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]\nb = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]\n",
    );
    let o = run(&cfg, &[]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("LossFractionViolated"), "{e}");
    assert_eq!(e.trim_end().lines().count(), 1);
}

#[test]
fn zero_force_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        &format!(
            "command = \"respond\"\n{CIRCUIT}\n[beta_grid]\nmin = 1.0\nmax = 10.0\ncount = 3\n[response]\nomega = 1.0\nf = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]\n"
        ),
    );
    assert_eq!(run(&cfg, &[]).status.code(), Some(2));
}

#[test]
fn resonant_forcing_exits_with_code_3() {
    let dir = TempDir::new().unwrap();
    // the circuit has a lossless limit frequency at 0
    let cfg = write(
        &dir,
        "c.toml",
        &format!(
            "command = \"respond\"\n{CIRCUIT}\n[beta_grid]\nmin = 1.0\nmax = 10.0\ncount = 3\n[response]\nomega = 0.0\nf = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]\n"
        ),
    );
    let o = run(&cfg, &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn missing_circuit_field_is_named() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        "command = \"analyze\"\n[circuit]\nc1 = 2.0\nc2 = 3.0\nc12 = 4.0\nl2 = 6.0\ntau = 1.0\nbeta = 1.0\n",
    );
    let o = run(&cfg, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("l1"), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.toml", &format!("command = \"analyze\"\nverbose = true\n{CIRCUIT}"));
    assert_eq!(run(&cfg, &[]).status.code(), Some(2));
}

#[test]
fn dense_circuit_sweep_has_one_row_per_branch_and_point() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        &format!("command = \"sweep\"\n{CIRCUIT}\n[beta_grid]\nmin = 0.0\nmax = 5.0\ncount = 1001\n"),
    );
    let o = run(&cfg, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "beta,branch_id,class,re_zeta,im_zeta,q_factor,overdamped");
    let data: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 4004);
    assert!(text.contains("# critical_point,beta0=0.59451"));
    assert!(!text.contains('\r'));
}

#[test]
fn two_point_diagonal_sweep() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        "command = \"sweep\"\n[system]\nomega = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]\nb = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]\n[beta_grid]\nmin = 0.0\nmax = 1.0\ncount = 2\n",
    );
    let o = run(&cfg, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 4);
    // branch 0 is the lossy coordinate: zeta = 1 - i beta
    let last = rows.iter().find(|r| r[0] == "1" && r[1] == "0").unwrap();
    assert_eq!(last[2], "high-loss");
    assert_eq!(last[3].parse::<f64>().unwrap(), 1.0);
    assert!((last[4].parse::<f64>().unwrap() + 1.0).abs() < 1e-12);
    let lossless = rows.iter().find(|r| r[0] == "1" && r[1] == "1").unwrap();
    assert_eq!(lossless[5], "inf");
}

#[test]
fn structured_respond_output() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.toml",
        &format!(
            "command = \"respond\"\n{CIRCUIT}\n[beta_grid]\nmin = 10.0\nmax = 1000.0\ncount = 3\nspacing = \"log\"\n[response]\nomega = 1.0\nf = [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]\n[output]\nformat = \"structured\"\n"
        ),
    );
    let o = run(&cfg, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: toml::Table = String::from_utf8(o.stdout).unwrap().parse().unwrap();
    let rows = v["row"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["beta"].as_float().unwrap(), 100.0);
    assert_eq!(rows[0]["regime_class"].as_str().unwrap(), "inside-loss-subspace");
}
