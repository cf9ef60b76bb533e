//! Run configuration read from a TOML file. Complex numbers are `[re, im]`
//! pairs and matrices are row-major nested arrays of them.

use clap::ValueEnum;
use dichotomy::circuit::{CircuitSpec, Loss};
use dichotomy::{Matrix, Vector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Sweep,
    Respond,
    Circuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Structured,
}

pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<MatrixInput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitInput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<BetaGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub response: Option<ResponseInput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    /// Informational values written by the `circuit` command.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<Derived>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixInput {
    pub omega: MatrixRows,
    pub b: MatrixRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitInput {
    pub c1: f64,
    pub c2: f64,
    pub c12: f64,
    pub l1: f64,
    pub l2: f64,
    pub tau: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseInput {
    pub omega: f64,
    pub f: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Derived {
    pub beta: f64,
    pub r2: f64,
    pub phi: MatrixRows,
    pub phi_squared: MatrixRows,
}

pub fn parse(text: &str) -> Result<RunConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Validation(single_line(&e.to_string())))
}

pub(crate) fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn matrix_from_rows(name: &str, rows: &MatrixRows) -> Result<Matrix, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::Validation(format!("{name} is empty")));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(CliError::Validation(format!(
                "{name} must be square: row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| Complex::new(rows[i][j][0], rows[i][j][1])))
}

pub fn rows_from_matrix(m: &Matrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn vector_from_pairs(pairs: &[[f64; 2]]) -> Vector {
    Vector::from_iterator(pairs.len(), pairs.iter().map(|p| Complex::new(p[0], p[1])))
}

impl CircuitInput {
    pub fn to_spec(&self) -> Result<CircuitSpec<f64>, CliError> {
        let loss = match (self.r2, self.beta) {
            (Some(r), None) => Loss::Resistance(r),
            (None, Some(b)) => Loss::Beta(b),
            _ => {
                return Err(CliError::Validation(
                    "circuit needs exactly one of r2 or beta".into(),
                ))
            }
        };
        Ok(CircuitSpec {
            c1: self.c1,
            c2: self.c2,
            c12: self.c12,
            l1: self.l1,
            l2: self.l2,
            tau: self.tau,
            loss,
        })
    }
}

impl BetaGrid {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let bad = |m: &str| Err(CliError::Validation(format!("beta_grid: {m}")));
        if self.count < 2 {
            return bad("count must be at least 2");
        }
        if !(self.min >= 0.0) || !self.min.is_finite() || !self.max.is_finite() {
            return bad("min must be nonnegative and both bounds finite");
        }
        if !(self.max > self.min) {
            return bad("max must exceed min");
        }
        let last = (self.count - 1) as f64;
        let pts: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..self.count)
                .map(|i| self.min + (self.max - self.min) * i as f64 / last)
                .collect(),
            Spacing::Log => {
                if !(self.min > 0.0) {
                    return bad("log spacing needs min > 0");
                }
                let (a, b) = (self.min.log10(), self.max.log10());
                (0..self.count)
                    .map(|i| 10f64.powf(a + (b - a) * i as f64 / last))
                    .collect()
            }
        };
        let mut pts = pts;
        pts[0] = self.min;
        let n = pts.len();
        pts[n - 1] = self.max;
        Ok(pts)
    }
}
