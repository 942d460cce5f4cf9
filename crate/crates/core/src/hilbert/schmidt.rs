use super::Matrix;
use crate::error::{Error, Result};

/// Singular values, descending.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let svd = m.to_nalgebra().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Realignment `R[(i,i'),(j,j')] = U[(i,j),(i',j')]` of a bipartite operator.
/// `U = A ⊗ B` exactly when `R = vec(A) vec(B)^T` has rank one.
pub fn reshuffle(u: &Matrix, factor_dims: &[usize]) -> Result<Matrix> {
    let [da, db] = *factor_dims else {
        return Err(Error::NotBipartite(factor_dims.len()));
    };
    let d = da * db;
    if u.rows() != d || u.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: u.rows(),
        });
    }
    let mut r = Matrix::zeros(da * da, db * db);
    for i in 0..da {
        for ip in 0..da {
            for j in 0..db {
                for jp in 0..db {
                    r[(i * da + ip, j * db + jp)] = u[(i * db + j, ip * db + jp)];
                }
            }
        }
    }
    Ok(r)
}

/// Singular values of the realigned operator (operator Schmidt coefficients).
pub fn operator_schmidt_coefficients(u: &Matrix, factor_dims: &[usize]) -> Result<Vec<f64>> {
    Ok(singular_values(&reshuffle(u, factor_dims)?))
}

/// Number of operator Schmidt coefficients above `tol`. Rank 1 iff `u`
/// factorizes as `A ⊗ B`.
pub fn operator_schmidt_rank(u: &Matrix, factor_dims: &[usize], tol: f64) -> Result<usize> {
    Ok(operator_schmidt_coefficients(u, factor_dims)?
        .into_iter()
        .filter(|&s| s > tol)
        .count())
}

/// Operator Schmidt rank across the cut `left | rest` of a multipartite
/// operator. Factors are reordered so `left` comes first (in the listed
/// order) before realigning.
pub fn operator_schmidt_rank_across(
    u: &Matrix,
    factor_dims: &[usize],
    left: &[usize],
    tol: f64,
) -> Result<usize> {
    let n = factor_dims.len();
    let dim: usize = factor_dims.iter().product();
    if u.rows() != dim || u.cols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.rows(),
        });
    }
    if left.is_empty() || left.len() >= n || left.iter().any(|&s| s >= n) {
        return Err(Error::Invalid(format!(
            "cut {left:?} is not a proper subset of {n} factors"
        )));
    }
    let order: Vec<usize> = left
        .iter()
        .copied()
        .chain((0..n).filter(|s| !left.contains(s)))
        .collect();
    let new_dims: Vec<usize> = order.iter().map(|&s| factor_dims[s]).collect();
    // new index -> old index
    let map: Vec<usize> = (0..dim)
        .map(|new| {
            let d = super::tensor::digits(new, &new_dims);
            let mut old_digits = vec![0; n];
            for (pos, &slot) in order.iter().enumerate() {
                old_digits[slot] = d[pos];
            }
            old_digits
                .iter()
                .zip(factor_dims)
                .fold(0, |acc, (&dg, &r)| acc * r + dg)
        })
        .collect();
    let mut permuted = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            permuted[(i, j)] = u[(map[i], map[j])];
        }
    }
    let da: usize = left.iter().map(|&s| factor_dims[s]).product();
    operator_schmidt_rank(&permuted, &[da, dim / da], tol)
}

/// Schmidt coefficients of a bipartite pure state given as its
/// `d_a x d_b` amplitude matrix.
pub fn state_schmidt_coefficients(amplitudes: &Matrix) -> Vec<f64> {
    singular_values(amplitudes)
}
