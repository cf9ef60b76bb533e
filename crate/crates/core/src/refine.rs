//! Eigenpairs of a Hermitian operator, with repeated eigenvalues split by a
//! second Hermitian operator compressed to each eigenspace.

use crate::linalg::{hermitian_part, sym_eig};
use crate::scalar::{inner, ComplexMatrix, ComplexVector, Real};

pub(crate) struct RefinedPair<T: Real> {
    pub value: T,
    /// `(v, K v)` for the secondary operator `K`.
    pub secondary: T,
    pub vector: ComplexVector<T>,
    /// Position of the eigenvalue cluster among clusters of size > 1.
    pub group: Option<usize>,
}

/// Relative gap below which two eigenvalues are treated as one cluster.
pub(crate) const DEGENERACY_TOL: f64 = 1e-9;

/// Eigenpairs of `primary` in ascending order; inside each cluster of
/// numerically equal eigenvalues the vectors diagonalize `secondary`.
pub(crate) fn refined_eigenpairs<T: Real>(
    primary: &ComplexMatrix<T>,
    secondary: &ComplexMatrix<T>,
) -> Vec<RefinedPair<T>> {
    let n = primary.nrows();
    let (vals, vecs) = sym_eig(primary);
    let scale = vals.iter().fold(T::one(), |a, v| a.max(v.abs()));
    let gap = T::tol(DEGENERACY_TOL) * scale;

    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    let mut group_id = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end] - vals[end - 1] <= gap {
            end += 1;
        }
        let size = end - start;
        let block = vecs.columns(start, size).into_owned();
        if size == 1 {
            let v = block.column(0).into_owned();
            out.push(RefinedPair {
                value: vals[start],
                secondary: inner(&v, &(secondary * &v)).re,
                vector: v,
                group: None,
            });
        } else {
            let compressed = hermitian_part(&(block.adjoint() * secondary * &block));
            let (svals, svecs) = sym_eig(&compressed);
            let rotated = &block * svecs;
            let mean = vals[start..end].iter().fold(T::zero(), |a, v| a + *v) / T::lit(size as f64);
            for (j, &sv) in svals.iter().enumerate() {
                out.push(RefinedPair {
                    value: mean,
                    secondary: sv,
                    vector: rotated.column(j).into_owned(),
                    group: Some(group_id),
                });
            }
            group_id += 1;
        }
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::diag;

    #[test]
    fn degenerate_cluster_is_split_by_secondary() {
        let p = diag(&[1.0, 1.0, 2.0]);
        let mut k = diag(&[0.0, 0.0, 5.0]);
        k[(0, 1)] = crate::scalar::real(1.0);
        k[(1, 0)] = crate::scalar::real(1.0);
        let pairs = refined_eigenpairs(&p, &k);
        assert_eq!(pairs[0].group, Some(0));
        assert_eq!(pairs[1].group, Some(0));
        assert_eq!(pairs[2].group, None);
        assert!((pairs[0].secondary + 1.0).abs() < 1e-14);
        assert!((pairs[1].secondary - 1.0).abs() < 1e-14);
        assert!((pairs[2].secondary - 5.0).abs() < 1e-14);
    }
}
