//! The four commands. Each returns the full output text; writing is left to `main`.

use std::fmt::Write as _;

use dichotomy::circuit::{build_phi, canonical_system, closed_form_low_loss, CircuitSpec};
use dichotomy::{
    classify, critical_points_from_sweep, degeneracy_report, detect_overdamping,
    eigenvalue_quality, high_loss_coefficients, low_loss_coefficients, modal_eigenpairs,
    orbit_subspace, respond as respond_at, response_asymptote, small_beta_coefficients, Matrix,
    Quality, System,
};
use serde::Serialize;

use crate::config::{
    matrix_from_rows, rows_from_matrix, vector_from_pairs, Derived, Format, MatrixInput,
    RunConfig,
};
use crate::CliError;

/// Shortest decimal that round-trips, with `inf`/`-inf`/`nan` spelled out.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn structured<T: Serialize>(value: &T) -> Result<String, CliError> {
    toml::to_string(value).map_err(|e| CliError::Other(format!("serialization failed: {e}")))
}

struct Loaded {
    system: System,
    circuit: Option<CircuitSpec<f64>>,
}

fn load(cfg: &RunConfig) -> Result<Loaded, CliError> {
    match (&cfg.system, &cfg.circuit) {
        (Some(m), None) => {
            let omega = matrix_from_rows("system.omega", &m.omega)?;
            let b = matrix_from_rows("system.b", &m.b)?;
            Ok(Loaded {
                system: System::new(omega, b)?,
                circuit: None,
            })
        }
        (None, Some(c)) => {
            let spec = c.to_spec()?;
            let (system, _) = canonical_system(&spec)?;
            Ok(Loaded {
                system,
                circuit: Some(spec),
            })
        }
        (Some(_), Some(_)) => Err(CliError::Validation(
            "give either [system] or [circuit], not both".into(),
        )),
        (None, None) => Err(CliError::Validation("missing [system] or [circuit] input".into())),
    }
}

fn spectral_norm(m: &Matrix) -> f64 {
    m.clone().singular_values().iter().fold(0.0f64, |a, s| a.max(*s))
}

/// A loss value large enough for the large-beta asymptotes to dominate.
fn asymptotic_beta(system: &System, zr_min: f64, factor: f64) -> f64 {
    factor * (spectral_norm(system.omega()) / zr_min).max(1.0)
}

#[derive(Serialize)]
struct AnalyzeReport {
    summary: SummaryRow,
    high_loss: Vec<HighRow>,
    low_loss: Vec<LowRow>,
    small_beta: Vec<SmallRow>,
    oracle: OracleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    circuit: Option<CircuitRow>,
}

#[derive(Serialize)]
struct SummaryRow {
    n: usize,
    n_b: usize,
    loss_fraction: f64,
    orbit_dimension: usize,
}

#[derive(Serialize)]
struct HighRow {
    index: usize,
    zeta_ring: f64,
    rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    degenerate_group: Option<usize>,
}

#[derive(Serialize)]
struct LowRow {
    index: usize,
    rho: f64,
    d: f64,
    in_eigenspace: bool,
    in_kernel: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    degenerate_group: Option<usize>,
}

#[derive(Serialize)]
struct SmallRow {
    index: usize,
    omega: f64,
    sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    degenerate_group: Option<usize>,
}

/// Eigensolver values at a large loss: real parts, and the damping slope
/// (`-Im zeta / beta` for high-loss modes, `-beta Im zeta` for low-loss modes).
#[derive(Serialize)]
struct OracleReport {
    beta: f64,
    modes: Vec<OracleRow>,
}

#[derive(Serialize)]
struct OracleRow {
    index: usize,
    class: String,
    re_zeta: f64,
    damping_coefficient: f64,
}

#[derive(Serialize)]
struct CircuitRow {
    beta: f64,
    r2: f64,
    phi11: f64,
    phi12: f64,
    phi22: f64,
    rho_pm_closed_form: f64,
    d_rho_zero_closed_form: f64,
    d_rho_pm_closed_form: f64,
}

pub fn analyze(cfg: &RunConfig, format: Format) -> Result<String, CliError> {
    let loaded = load(cfg)?;
    let s = &loaded.system;
    let decomp = s.decompose()?;
    let high = high_loss_coefficients(&decomp);
    let low = low_loss_coefficients(&decomp);
    let diag = degeneracy_report(&decomp, &low)?;
    let small = small_beta_coefficients(s);
    let (orbit_dim, _) = orbit_subspace(s);
    let n_b = high.len();

    let zr_min = high.iter().fold(f64::INFINITY, |a, m| a.min(m.zeta_ring));
    let beta_or = asymptotic_beta(s, zr_min, 1e5);
    let pairs = modal_eigenpairs(s, &high, &low, beta_or)?;
    let oracle_rows = pairs
        .iter()
        .enumerate()
        .map(|(j, (z, _))| {
            let is_high = j < n_b;
            OracleRow {
                index: j + 1,
                class: if is_high { "high-loss" } else { "low-loss" }.into(),
                re_zeta: z.re,
                damping_coefficient: if is_high { -z.im / beta_or } else { -z.im * beta_or },
            }
        })
        .collect();

    let circuit = match &loaded.circuit {
        Some(spec) => {
            let (_, phi) = build_phi(spec)?;
            let cf = closed_form_low_loss(&phi, spec.tau);
            Some(CircuitRow {
                beta: spec.beta(),
                r2: spec.r2(),
                phi11: phi[(0, 0)].re,
                phi12: phi[(0, 1)].re,
                phi22: phi[(1, 1)].re,
                rho_pm_closed_form: cf.rho_pm,
                d_rho_zero_closed_form: cf.rho_zero_d,
                d_rho_pm_closed_form: cf.rho_pm_d,
            })
        }
        None => None,
    };

    let report = AnalyzeReport {
        summary: SummaryRow {
            n: s.n(),
            n_b,
            loss_fraction: s.loss_fraction(),
            orbit_dimension: orbit_dim,
        },
        high_loss: high
            .iter()
            .enumerate()
            .map(|(j, m)| HighRow {
                index: j + 1,
                zeta_ring: m.zeta_ring,
                rho: m.rho,
                degenerate_group: m.degenerate_group,
            })
            .collect(),
        low_loss: low
            .iter()
            .zip(&diag)
            .enumerate()
            .map(|(j, (m, d))| LowRow {
                index: n_b + j + 1,
                rho: m.rho,
                d: m.d,
                in_eigenspace: d.in_eigenspace,
                in_kernel: d.in_kernel,
                degenerate_group: m.degenerate_group,
            })
            .collect(),
        small_beta: small
            .iter()
            .enumerate()
            .map(|(j, m)| SmallRow {
                index: j + 1,
                omega: m.omega_j,
                sigma: m.sigma_j,
                degenerate_group: m.degenerate_group,
            })
            .collect(),
        oracle: OracleReport {
            beta: beta_or,
            modes: oracle_rows,
        },
        circuit,
    };

    match format {
        Format::Structured => structured(&report),
        Format::Csv => Ok(analyze_csv(&report)),
    }
}

fn analyze_csv(r: &AnalyzeReport) -> String {
    let mut out = String::from("section,index,quantity,value\n");
    let mut row = |section: &str, index: usize, q: &str, v: String| {
        let _ = writeln!(out, "{section},{index},{q},{v}");
    };
    row("summary", 0, "n", r.summary.n.to_string());
    row("summary", 0, "n_b", r.summary.n_b.to_string());
    row("summary", 0, "loss_fraction", num(r.summary.loss_fraction));
    row("summary", 0, "orbit_dimension", r.summary.orbit_dimension.to_string());
    for h in &r.high_loss {
        row("high_loss", h.index, "zeta_ring", num(h.zeta_ring));
        row("high_loss", h.index, "rho", num(h.rho));
    }
    for l in &r.low_loss {
        row("low_loss", l.index, "rho", num(l.rho));
        row("low_loss", l.index, "d", num(l.d));
        row("low_loss", l.index, "in_eigenspace", (l.in_eigenspace as u8).to_string());
        row("low_loss", l.index, "in_kernel", (l.in_kernel as u8).to_string());
    }
    for m in &r.small_beta {
        row("small_beta", m.index, "omega", num(m.omega));
        row("small_beta", m.index, "sigma", num(m.sigma));
    }
    row("oracle", 0, "beta", num(r.oracle.beta));
    for o in &r.oracle.modes {
        row("oracle", o.index, "re_zeta", num(o.re_zeta));
        row("oracle", o.index, "damping_coefficient", num(o.damping_coefficient));
    }
    if let Some(c) = &r.circuit {
        for (q, v) in [
            ("beta", c.beta),
            ("r2", c.r2),
            ("phi11", c.phi11),
            ("phi12", c.phi12),
            ("phi22", c.phi22),
            ("rho_pm_closed_form", c.rho_pm_closed_form),
            ("d_rho_zero_closed_form", c.d_rho_zero_closed_form),
            ("d_rho_pm_closed_form", c.d_rho_pm_closed_form),
        ] {
            row("circuit", 0, q, num(v));
        }
    }
    out
}

#[derive(Serialize)]
struct SweepRow {
    beta: f64,
    branch_id: usize,
    class: String,
    re_zeta: f64,
    im_zeta: f64,
    q_factor: f64,
    overdamped: u8,
}

#[derive(Serialize)]
struct CriticalRow {
    beta0: f64,
    re_zeta0: f64,
    im_zeta0: f64,
    branch_a: usize,
    branch_b: usize,
}

#[derive(Serialize)]
struct OnsetRow {
    branch_id: usize,
    beta: f64,
}

#[derive(Serialize)]
struct SweepReport {
    unresolved_steps: usize,
    critical_point: Vec<CriticalRow>,
    overdamped_from: Vec<OnsetRow>,
    row: Vec<SweepRow>,
}

pub fn sweep(cfg: &RunConfig, format: Format) -> Result<String, CliError> {
    let loaded = load(cfg)?;
    let s = &loaded.system;
    let grid = cfg
        .beta_grid
        .as_ref()
        .ok_or_else(|| CliError::Validation("sweep needs a [beta_grid]".into()))?
        .points()?;
    let decomp = s.decompose()?;
    let high = high_loss_coefficients(&decomp);
    let low = low_loss_coefficients(&decomp);

    // extend the tracked range until the asymptotes dominate, then drop the extension
    let zr_min = high.iter().fold(f64::INFINITY, |a, m| a.min(m.zeta_ring));
    let target = asymptotic_beta(s, zr_min, 100.0);
    let mut tracked = grid.clone();
    let mut b = *grid.last().expect("grid has points");
    while b < target {
        b = (b * 2.0).max(1.0).min(target);
        tracked.push(b);
    }
    let sw = dichotomy::sweep(s, &tracked)?;
    let mut branches = classify(sw.branches, &high, &low)?;
    for br in &mut branches {
        br.samples.truncate(grid.len());
    }
    detect_overdamping(&mut branches, dichotomy::tracker::OVERDAMPING_TOL);
    let critical = critical_points_from_sweep(s, &branches);
    let unresolved = sw
        .unresolved
        .iter()
        .filter(|(_, hi)| *hi <= grid[grid.len() - 1])
        .count();

    let mut rows = Vec::with_capacity(grid.len() * branches.len());
    for (k, &beta) in grid.iter().enumerate() {
        for br in &branches {
            let z = br.samples[k].1;
            let q = match eigenvalue_quality(z) {
                Quality::Finite(q) => q,
                Quality::Infinite => f64::INFINITY,
            };
            rows.push(SweepRow {
                beta,
                branch_id: br.branch_id,
                class: br.class.as_str().into(),
                re_zeta: z.re,
                im_zeta: z.im,
                q_factor: q,
                overdamped: br.overdamped_from.is_some_and(|o| beta >= o) as u8,
            });
        }
    }
    let report = SweepReport {
        unresolved_steps: unresolved,
        critical_point: critical
            .iter()
            .map(|c| {
                let (a, b) = c.merging_branches.unwrap_or((usize::MAX, usize::MAX));
                CriticalRow {
                    beta0: c.beta0,
                    re_zeta0: c.zeta0.re,
                    im_zeta0: c.zeta0.im,
                    branch_a: a,
                    branch_b: b,
                }
            })
            .collect(),
        overdamped_from: branches
            .iter()
            .filter_map(|b| b.overdamped_from.map(|o| OnsetRow { branch_id: b.branch_id, beta: o }))
            .collect(),
        row: rows,
    };
    match format {
        Format::Structured => structured(&report),
        Format::Csv => {
            let mut out = String::from("beta,branch_id,class,re_zeta,im_zeta,q_factor,overdamped\n");
            for r in &report.row {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    num(r.beta),
                    r.branch_id,
                    r.class,
                    num(r.re_zeta),
                    num(r.im_zeta),
                    num(r.q_factor),
                    r.overdamped
                );
            }
            for c in &report.critical_point {
                let _ = writeln!(
                    out,
                    "# critical_point,beta0={},re_zeta0={},im_zeta0={},branches={}-{}",
                    num(c.beta0),
                    num(c.re_zeta0),
                    num(c.im_zeta0),
                    c.branch_a,
                    c.branch_b
                );
            }
            for o in &report.overdamped_from {
                let _ = writeln!(out, "# overdamped_from,branch_id={},beta={}", o.branch_id, num(o.beta));
            }
            let _ = writeln!(out, "# unresolved_steps={}", report.unresolved_steps);
            Ok(out)
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct RespondRow {
    beta: f64,
    U: f64,
    W_dis: f64,
    Q: f64,
    regime_class: String,
    U_asym: f64,
    Wdis_asym: f64,
    Q_asym: f64,
}

#[derive(Serialize)]
struct RespondReport {
    omega: f64,
    row: Vec<RespondRow>,
}

pub fn respond(cfg: &RunConfig, format: Format) -> Result<String, CliError> {
    let loaded = load(cfg)?;
    let s = &loaded.system;
    let resp = cfg
        .response
        .as_ref()
        .ok_or_else(|| CliError::Validation("respond needs a [response] block".into()))?;
    let grid = cfg
        .beta_grid
        .as_ref()
        .ok_or_else(|| CliError::Validation("respond needs a [beta_grid]".into()))?
        .points()?;
    if grid[0] <= 0.0 {
        return Err(CliError::Validation("respond needs beta_grid.min > 0".into()));
    }
    let f = vector_from_pairs(&resp.f);
    let decomp = s.decompose()?;
    let asym = response_asymptote(&decomp, &f, resp.omega)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &beta in &grid {
        let r = respond_at(s, &f, resp.omega, beta)?;
        rows.push(RespondRow {
            beta,
            U: r.stored_energy,
            W_dis: r.dissipated_power,
            Q: r.quality_factor.to_f64(),
            regime_class: r.regime_class.as_str().into(),
            U_asym: asym.energy(beta),
            Wdis_asym: asym.dissipation(beta),
            Q_asym: asym.quality(beta).to_f64(),
        });
    }
    let report = RespondReport {
        omega: resp.omega,
        row: rows,
    };
    match format {
        Format::Structured => structured(&report),
        Format::Csv => {
            let mut out = String::from("beta,U,W_dis,Q,regime_class,U_asym,Wdis_asym,Q_asym\n");
            for r in &report.row {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    num(r.beta),
                    num(r.U),
                    num(r.W_dis),
                    num(r.Q),
                    r.regime_class,
                    num(r.U_asym),
                    num(r.Wdis_asym),
                    num(r.Q_asym)
                );
            }
            Ok(out)
        }
    }
}

/// Writes the canonical system of a circuit as a config that runs `analyze`
/// on the inline matrices.
pub fn circuit(cfg: &RunConfig) -> Result<String, CliError> {
    let c = cfg
        .circuit
        .as_ref()
        .ok_or_else(|| CliError::Validation("circuit command needs a [circuit] block".into()))?;
    if cfg.system.is_some() {
        return Err(CliError::Validation("give either [system] or [circuit], not both".into()));
    }
    let spec = c.to_spec()?;
    let (system, beta) = canonical_system(&spec)?;
    let (phi_squared, phi) = build_phi(&spec)?;
    let out = RunConfig {
        command: Some(crate::config::Command::Analyze),
        system: Some(MatrixInput {
            omega: rows_from_matrix(system.omega()),
            b: rows_from_matrix(system.b()),
        }),
        circuit: None,
        beta_grid: cfg.beta_grid.clone(),
        response: cfg.response.clone(),
        output: None,
        derived: Some(Derived {
            beta,
            r2: spec.r2(),
            phi: rows_from_matrix(&phi),
            phi_squared: rows_from_matrix(&phi_squared),
        }),
    };
    structured(&out)
}
