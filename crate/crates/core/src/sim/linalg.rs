//! Rank, span and orthogonal-complement helpers on dense real matrices.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Relative singular-value cutoff: σ counts toward rank when
/// `σ > RANK_EPS · σ_max · max(rows, cols)`.
pub const RANK_EPS: f64 = 1e-12;

/// Threshold on normalized inner products / residuals.
pub const ORTHO_TOL: f64 = 1e-9;

/// Stacks vectors of equal length as columns.
pub fn hstack(rows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols.len());
    for (k, c) in cols.iter().enumerate() {
        m.set_column(k, c);
    }
    m
}

fn rank_cutoff(m: &DMatrix<f64>, sigma_max: f64) -> f64 {
    RANK_EPS * sigma_max * m.nrows().max(m.ncols()) as f64
}

/// Orthonormal basis of the column space (as columns) and its dimension.
pub fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let sigma_max = svd.singular_values.max();
    let cutoff = rank_cutoff(m, sigma_max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| sigma_max > 0.0 && svd.singular_values[k] > cutoff)
        .collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let sigma_max = sv.max();
    if sigma_max == 0.0 {
        return 0;
    }
    let cutoff = rank_cutoff(m, sigma_max);
    sv.iter().filter(|&&s| s > cutoff).count()
}

fn project_out(v: &mut DVector<f64>, basis: &DMatrix<f64>) {
    if basis.ncols() > 0 {
        let coeffs = basis.tr_mul(v);
        *v -= basis * coeffs;
    }
}

/// `count` orthonormal vectors orthogonal to every column of `basis`, which
/// must itself be orthonormal. Candidates are random Gaussian directions, so
/// the result is generic within the complement.
pub fn complement_vectors<R: Rng>(basis: &DMatrix<f64>, count: usize, rng: &mut R) -> Result<DMatrix<f64>> {
    let dim = basis.nrows();
    let available = dim.saturating_sub(basis.ncols());
    if count > available {
        return Err(Error::InsufficientNullSpace {
            needed: count,
            available,
        });
    }
    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(count);
    let mut attempts = 0;
    while accepted.len() < count {
        attempts += 1;
        if attempts > 4 * count + 16 {
            return Err(Error::InsufficientNullSpace {
                needed: count,
                available: accepted.len(),
            });
        }
        let mut v = DVector::from_fn(dim, |_, _| StandardNormal.sample(rng));
        let start = v.norm();
        // Two Gram-Schmidt passes keep the residual at roundoff level.
        for _ in 0..2 {
            project_out(&mut v, basis);
            for a in &accepted {
                let c = a.dot(&v);
                v.axpy(-c, a, 1.0);
            }
        }
        let n = v.norm();
        if n > 1e-8 * start {
            accepted.push(v / n);
        }
    }
    Ok(hstack(dim, &accepted))
}

/// Largest `|⟨a, b⟩| / (‖a‖ ‖b‖)` over columns `a` of `xs` and `b` of `ys`.
pub fn max_abs_cosine(xs: &DMatrix<f64>, ys: &DMatrix<f64>) -> f64 {
    if xs.ncols() == 0 || ys.ncols() == 0 {
        return 0.0;
    }
    let xn: Vec<f64> = xs.column_iter().map(|c| c.norm()).collect();
    let yn: Vec<f64> = ys.column_iter().map(|c| c.norm()).collect();
    let gram = xs.tr_mul(ys);
    let mut worst = 0.0f64;
    for r in 0..gram.nrows() {
        for c in 0..gram.ncols() {
            let denom = xn[r] * yn[c];
            if denom > 0.0 {
                worst = worst.max(gram[(r, c)].abs() / denom);
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::channels::beam_rng;

    #[test]
    fn rank_of_known_matrices() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(numerical_rank(&m), 2);
        assert_eq!(numerical_rank(&DMatrix::<f64>::identity(5, 5)), 5);
        assert_eq!(numerical_rank(&DMatrix::<f64>::zeros(4, 3)), 0);
        assert_eq!(numerical_rank(&DMatrix::<f64>::zeros(4, 0)), 0);
        assert_eq!(column_space(&m).ncols(), 2);
    }

    #[test]
    fn roundoff_does_not_add_rank() {
        let a = DVector::from_fn(40, |i, _| (i as f64 * 0.37).cos());
        let b = DVector::from_fn(40, |i, _| (i as f64 * 1.3).sin() + 2.0);
        let c = &a * 0.1 + &b * (1.0 / 3.0);
        assert_eq!(numerical_rank(&hstack(40, &[a, b, c])), 2);
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let mut rng = beam_rng(5);
        let cols: Vec<DVector<f64>> = (0..4).map(|k| DVector::from_fn(10, |i, _| ((i * (k + 1)) as f64).sin())).collect();
        let basis = column_space(&hstack(10, &cols));
        let v = complement_vectors(&basis, 10 - basis.ncols(), &mut rng).unwrap();
        assert!(max_abs_cosine(&v, &hstack(10, &cols)) < 1e-12);
        let gram = v.tr_mul(&v);
        assert!((gram - DMatrix::identity(v.ncols(), v.ncols())).norm() < 1e-12);
    }

    #[test]
    fn complement_too_small() {
        let mut rng = beam_rng(0);
        let basis = DMatrix::<f64>::identity(3, 2);
        assert_eq!(
            complement_vectors(&basis, 2, &mut rng),
            Err(Error::InsufficientNullSpace { needed: 2, available: 1 })
        );
        assert_eq!(complement_vectors(&basis, 0, &mut rng).unwrap().ncols(), 0);
    }
}
