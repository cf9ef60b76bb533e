//! Eigenvalue branches of `A(beta)` over a grid of loss values: continuity
//! tracking, high/low-loss labelling, overdamping onsets, critical damping,
//! and the mirror symmetry `sigma(A) = -conj sigma(A)`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::assignment::{min_cost_assignment, second_best_cost};
use crate::error::{Error, Result};
use crate::large_beta::{HighLossMode, LargeBetaAsymptote, LowLossMode};
use crate::linalg::{eigenvalues, general_eig};
use crate::scalar::{modulus, ComplexVector, Real};
use crate::system::DissipativeSystem;

/// Cost gap between best and second-best matchings below which a step is ambiguous.
pub const MATCH_AMBIGUITY: f64 = 1e-12;
/// Maximum bisection depth when refining a grid step.
pub const MAX_REFINE_DEPTH: usize = 20;
/// Steps moving an eigenvalue more than this fraction of the local spectral diameter are refined.
pub const MOVE_FRACTION: f64 = 0.1;
/// Midpoints inserted per original grid step at most.
const REFINE_BUDGET: usize = 256;
/// Default relative tolerance on `|Re zeta|` for overdamping.
pub const OVERDAMPING_TOL: f64 = 1e-9;
/// Bisection stops once the bracket is this narrow.
pub const CRITICAL_BRACKET_WIDTH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchClass {
    HighLoss,
    LowLoss,
    Unresolved,
}

impl BranchClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BranchClass::HighLoss => "high-loss",
            BranchClass::LowLoss => "low-loss",
            BranchClass::Unresolved => "unresolved",
        }
    }
}

/// Index into the high-loss or low-loss coefficient list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeRef {
    High(usize),
    Low(usize),
}

#[derive(Debug, Clone)]
pub struct SpectralBranch<T: Real> {
    pub branch_id: usize,
    pub class: BranchClass,
    /// `(beta, zeta)` in increasing `beta`.
    pub samples: Vec<(T, Complex<T>)>,
    pub matched_mode: Option<ModeRef>,
    pub overdamped_from: Option<T>,
}

impl<T: Real> SpectralBranch<T> {
    pub fn last(&self) -> (T, Complex<T>) {
        self.samples[self.samples.len() - 1]
    }

    /// Value at an exact grid point.
    pub fn at(&self, beta: T) -> Option<Complex<T>> {
        self.samples.iter().find(|s| s.0 == beta).map(|s| s.1)
    }
}

#[derive(Debug, Clone)]
pub struct Sweep<T: Real> {
    pub branches: Vec<SpectralBranch<T>>,
    /// Grid steps `(beta_a, beta_b)` whose matching stayed ambiguous after refinement.
    pub unresolved: Vec<(T, T)>,
}

fn spectrum<T: Real>(system: &DissipativeSystem<T>, beta: T) -> Result<Vec<Complex<T>>> {
    eigenvalues(&system.assemble(beta)?)
}

fn diameter<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let mut d = T::zero();
    for x in a.iter().chain(b.iter()) {
        for y in a.iter().chain(b.iter()) {
            d = d.max(modulus(*x - *y));
        }
    }
    d
}

struct Step<T> {
    matched: Vec<Complex<T>>,
    ambiguous: bool,
}

/// Matches branch values `prev` (at `beta_a`) to the unordered spectrum `next`
/// (at `beta_b`), refining the step where needed.
fn track_step<T: Real>(
    system: &DissipativeSystem<T>,
    beta_a: T,
    prev: &[Complex<T>],
    beta_b: T,
    next: &[Complex<T>],
    depth: usize,
    budget: &mut usize,
) -> Result<Step<T>> {
    let n = prev.len();
    let cost: Vec<Vec<f64>> = prev
        .iter()
        .map(|p| next.iter().map(|q| modulus(*p - *q).as_f64()).collect())
        .collect();
    let (assign, best) = min_cost_assignment(&cost);
    let second = second_best_cost(&cost, &assign);
    let ambiguous = second - best < MATCH_AMBIGUITY;
    let moved = (0..n).map(|i| cost[i][assign[i]]).fold(0.0f64, f64::max);
    let diam = diameter(prev, next).as_f64();
    let too_far = moved > MOVE_FRACTION * diam && moved > 0.0;

    if (ambiguous || too_far) && depth < MAX_REFINE_DEPTH && *budget > 0 {
        *budget -= 1;
        let mid = (beta_a + beta_b) * T::lit(0.5);
        if mid > beta_a && mid < beta_b {
            let mid_vals = spectrum(system, mid)?;
            let left = track_step(system, beta_a, prev, mid, &mid_vals, depth + 1, budget)?;
            let right = track_step(system, mid, &left.matched, beta_b, next, depth + 1, budget)?;
            return Ok(Step {
                matched: right.matched,
                ambiguous: left.ambiguous || right.ambiguous,
            });
        }
    }
    Ok(Step {
        matched: assign.iter().map(|&j| next[j]).collect(),
        ambiguous,
    })
}

/// Tracks the `N` eigenvalue branches of `A(beta)` across an increasing grid.
/// Branch ids follow the lexicographic order of the spectrum at the first grid point;
/// returned samples are the grid points only.
pub fn sweep<T: Real>(system: &DissipativeSystem<T>, grid: &[T]) -> Result<Sweep<T>> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument("beta grid needs at least 2 points".into()));
    }
    if grid.iter().any(|b| !(*b >= T::zero()) || !b.is_finite()) {
        return Err(Error::InvalidArgument("beta grid must be finite and nonnegative".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("beta grid must be strictly increasing".into()));
    }
    let spectra: Vec<Vec<Complex<T>>> = grid
        .par_iter()
        .map(|&b| spectrum(system, b))
        .collect::<Result<_>>()?;

    let n = system.n();
    let mut branches: Vec<SpectralBranch<T>> = (0..n)
        .map(|j| SpectralBranch {
            branch_id: j,
            class: BranchClass::Unresolved,
            samples: vec![(grid[0], spectra[0][j])],
            matched_mode: None,
            overdamped_from: None,
        })
        .collect();
    let mut unresolved = Vec::new();
    let mut current = spectra[0].clone();
    for k in 1..grid.len() {
        let mut budget = REFINE_BUDGET;
        let step = track_step(system, grid[k - 1], &current, grid[k], &spectra[k], 0, &mut budget)?;
        if step.ambiguous {
            unresolved.push((grid[k - 1], grid[k]));
        }
        for (j, z) in step.matched.iter().enumerate() {
            branches[j].samples.push((grid[k], *z));
        }
        current = step.matched;
    }
    Ok(Sweep { branches, unresolved })
}

/// Labels each branch by the closest asymptote at the largest sampled `beta`
/// (optimal one-to-one assignment), then reorders branches into mode order:
/// high-loss modes first, then low-loss modes, with `branch_id` set to the position.
pub fn classify<T: Real>(
    mut branches: Vec<SpectralBranch<T>>,
    high: &[HighLossMode<T>],
    low: &[LowLossMode<T>],
) -> Result<Vec<SpectralBranch<T>>> {
    let n = branches.len();
    if high.len() + low.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} branches but {} asymptotic modes",
            n,
            high.len() + low.len()
        )));
    }
    let asym = |m: usize, beta: T| -> Complex<T> {
        if m < high.len() {
            high[m].eigenvalue(beta)
        } else {
            low[m - high.len()].eigenvalue(beta)
        }
    };
    let cost: Vec<Vec<f64>> = branches
        .iter()
        .map(|b| {
            let (beta, z) = b.last();
            (0..n).map(|m| modulus(z - asym(m, beta)).as_f64()).collect()
        })
        .collect();
    let (assign, _) = min_cost_assignment(&cost);
    for (i, b) in branches.iter().enumerate() {
        let z = b.last().1;
        let limit = 0.5 * modulus(z).as_f64() + 1.0;
        let residual = cost[i][assign[i]];
        if residual > limit {
            return Err(Error::ClassificationFailed { residual, limit });
        }
    }
    let mut slots: Vec<Option<SpectralBranch<T>>> = (0..n).map(|_| None).collect();
    for (i, mut b) in branches.drain(..).enumerate() {
        let m = assign[i];
        if m < high.len() {
            b.class = BranchClass::HighLoss;
            b.matched_mode = Some(ModeRef::High(m));
        } else {
            b.class = BranchClass::LowLoss;
            b.matched_mode = Some(ModeRef::Low(m - high.len()));
        }
        b.branch_id = m;
        slots[m] = Some(b);
    }
    Ok(slots.into_iter().map(|b| b.expect("assignment is a bijection")).collect())
}

/// For each branch, the smallest sampled `beta` from which every later sample
/// satisfies `|Re zeta| <= tol_re * max(1, |Im zeta|)`. Also stores it on the branch.
pub fn detect_overdamping<T: Real>(branches: &mut [SpectralBranch<T>], tol_re: T) -> Vec<Option<T>> {
    branches
        .iter_mut()
        .map(|b| {
            let mut onset = None;
            for &(beta, z) in b.samples.iter().rev() {
                if z.re.abs() <= tol_re * z.im.abs().max(T::one()) {
                    onset = Some(beta);
                } else {
                    break;
                }
            }
            b.overdamped_from = onset;
            onset
        })
        .collect()
}

/// A loss value where two eigenvalues meet on the imaginary axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint<T: Real> {
    pub beta0: T,
    pub zeta0: Complex<T>,
    pub merging_branches: Option<(usize, usize)>,
    /// Distance between the two merging eigenvalues at `beta0`.
    pub refinement_residual: T,
}

/// Closest pair of eigenvalues and the real part of their squared difference.
/// Before a merge onto the imaginary axis the pair differs by a real amount
/// (positive indicator), after it by an imaginary one (negative indicator).
fn merge_indicator<T: Real>(vals: &[Complex<T>]) -> Option<(T, usize, usize)> {
    let mut best: Option<(T, usize, usize)> = None;
    for i in 0..vals.len() {
        for j in (i + 1)..vals.len() {
            let g = modulus(vals[i] - vals[j]);
            if best.is_none_or(|(bg, _, _)| g < bg) {
                best = Some((g, i, j));
            }
        }
    }
    best.map(|(_, i, j)| {
        let d = vals[i] - vals[j];
        ((d * d).re, i, j)
    })
}

/// Bisects for the loss value inside `bracket` where the closest pair of
/// eigenvalues coalesces and moves onto the imaginary axis.
pub fn locate_critical_point<T: Real>(
    system: &DissipativeSystem<T>,
    bracket: (T, T),
) -> Result<CriticalPoint<T>> {
    let (mut lo, mut hi) = bracket;
    let no_merge = || Error::NoMergeInBracket {
        lo: bracket.0.as_f64(),
        hi: bracket.1.as_f64(),
    };
    if !(lo >= T::zero()) || !(hi > lo) {
        return Err(Error::InvalidArgument("critical-point bracket must satisfy 0 <= lo < hi".into()));
    }
    let sign_at = |beta: T| -> Result<T> {
        let vals = spectrum(system, beta)?;
        Ok(merge_indicator(&vals).map(|x| x.0).unwrap_or(T::zero()))
    };
    if !(sign_at(lo)? > T::zero() && sign_at(hi)? < T::zero()) {
        return Err(no_merge());
    }
    let width = T::lit(CRITICAL_BRACKET_WIDTH);
    while hi - lo > width {
        let mid = (lo + hi) * T::lit(0.5);
        if !(mid > lo && mid < hi) {
            break;
        }
        if sign_at(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta0 = (lo + hi) * T::lit(0.5);
    let vals = spectrum(system, beta0)?;
    let (_, i, j) = merge_indicator(&vals).ok_or_else(no_merge)?;
    Ok(CriticalPoint {
        beta0,
        zeta0: (vals[i] + vals[j]) * T::lit(0.5),
        merging_branches: None,
        refinement_residual: modulus(vals[i] - vals[j]),
    })
}

/// Critical points implied by a sweep: pairs of branches whose overdamping starts
/// at the same grid point are refined between that point and its predecessor.
pub fn critical_points_from_sweep<T: Real>(
    system: &DissipativeSystem<T>,
    branches: &[SpectralBranch<T>],
) -> Vec<CriticalPoint<T>> {
    let mut out = Vec::new();
    let mut taken = vec![false; branches.len()];
    for a in 0..branches.len() {
        if taken[a] {
            continue;
        }
        let Some(onset) = branches[a].overdamped_from else { continue };
        let Some(pos) = branches[a].samples.iter().position(|s| s.0 == onset) else { continue };
        if pos == 0 {
            continue;
        }
        let before = branches[a].samples[pos - 1].0;
        for b in (a + 1)..branches.len() {
            if taken[b] || branches[b].overdamped_from != Some(onset) {
                continue;
            }
            if let Ok(mut cp) = locate_critical_point(system, (before, onset)) {
                cp.merging_branches = Some((branches[a].branch_id, branches[b].branch_id));
                out.push(cp);
                taken[a] = true;
                taken[b] = true;
                break;
            }
        }
    }
    out
}

/// Hausdorff distance between the spectrum and its mirror image `-conj(spectrum)`,
/// maximized over the sampled loss values.
pub fn check_spectral_symmetry<T: Real>(system: &DissipativeSystem<T>, betas: &[T]) -> Result<T> {
    let mut worst = T::zero();
    for &beta in betas {
        let vals = spectrum(system, beta)?;
        let mirror: Vec<Complex<T>> = vals.iter().map(|z| -z.conj()).collect();
        worst = worst.max(hausdorff(&vals, &mirror));
    }
    Ok(worst)
}

pub(crate) fn hausdorff<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let directed = |x: &[Complex<T>], y: &[Complex<T>]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| modulus(*p - *q))
                    .fold(T::lit(f64::INFINITY), |m, d| m.min(d))
            })
            .fold(T::zero(), |m, d| m.max(d))
    };
    directed(a, b).max(directed(b, a))
}

/// Eigenpairs of `A(beta)` assigned one-to-one to the large-beta asymptotes,
/// returned in mode order (high-loss first).
pub fn modal_eigenpairs<T: Real>(
    system: &DissipativeSystem<T>,
    high: &[HighLossMode<T>],
    low: &[LowLossMode<T>],
    beta: T,
) -> Result<Vec<(Complex<T>, ComplexVector<T>)>> {
    let eig = general_eig(&system.assemble(beta)?)?;
    let n = eig.len();
    let asym: Vec<Complex<T>> = high
        .iter()
        .map(|m| m.eigenvalue(beta))
        .chain(low.iter().map(|m| m.eigenvalue(beta)))
        .collect();
    if asym.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} eigenvalues but {} asymptotic modes",
            n,
            asym.len()
        )));
    }
    let cost: Vec<Vec<f64>> = asym
        .iter()
        .map(|a| eig.eigenvalues.iter().map(|z| modulus(*z - *a).as_f64()).collect())
        .collect();
    let (assign, _) = min_cost_assignment(&cost);
    Ok(assign
        .iter()
        .map(|&j| (eig.eigenvalues[j], eig.eigenvectors.column(j).into_owned()))
        .collect())
}
