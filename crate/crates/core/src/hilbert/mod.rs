//! Dense complex linear algebra over tensor-product Hilbert spaces.
//!
//! Basis convention everywhere: lexicographic tensor order, so for two
//! qubits the basis is `|00>, |01>, |10>, |11>` and a product index is
//! `i * d_b + j`.

mod matrix;
mod random;
mod schmidt;
mod state;
mod tensor;

pub use matrix::{Matrix, Observable, Unitary};
pub use random::{
    sample_random, sample_random_hermitian, sample_random_state, sample_random_unitary,
    RandomKind, RandomSample,
};
pub use schmidt::{
    operator_schmidt_coefficients, operator_schmidt_rank, operator_schmidt_rank_across,
    reshuffle, singular_values,
    state_schmidt_coefficients,
};
pub use state::StateVector;
pub use tensor::{embed, lift_complement, lift_local, partial_trace, purity, tensor, Tensor};

pub type C64 = num_complex::Complex64;

/// Default max-abs comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Hermiticity tolerance enforced by [`Observable::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// `U^dag U = I` tolerance enforced by [`Unitary::new`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Normalization tolerance enforced by [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-12;

/// A linear map that can be applied to a vector, together with its adjoint.
/// Dense matrices and matrix-free grid operators both implement it.
pub trait Operator {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[C64]) -> Vec<C64>;
    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64>;
}

impl<T: Operator + ?Sized> Operator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, v: &[C64]) -> Vec<C64> {
        (**self).apply(v)
    }
    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        (**self).apply_adjoint(v)
    }
}

/// Max-abs difference of two vectors.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Max-abs difference after removing the relative global phase, estimated
/// from the overlap `<a|b>`.
pub fn max_abs_diff_up_to_phase(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let overlap: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    if overlap.norm() == 0.0 {
        return max_abs_diff(a, b);
    }
    let phase = overlap / overlap.norm();
    a.iter()
        .zip(b)
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram-Schmidt with one reorthogonalization pass over the columns
/// of a full-rank square matrix. The implied triangular factor has a real
/// positive diagonal, so the output is determined by the input alone.
pub fn orthonormalize_columns(m: &Matrix) -> Matrix {
    let n = m.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let proj: C64 = q.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, qk) in rest[0].iter_mut().zip(q) {
                    *x -= proj * qk;
                }
            }
        }
        let nrm = norm(&cols[j]);
        for x in &mut cols[j] {
            *x /= nrm;
        }
    }
    let mut out = Matrix::zeros(m.rows(), n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    out
}

/// Pauli and two-qubit gate constants.
pub mod pauli {
    use super::{Matrix, C64};

    pub fn sigma1() -> Matrix {
        Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn sigma2() -> Matrix {
        let z = C64::new(0.0, 0.0);
        Matrix::from_rows(vec![vec![z, C64::new(0.0, -1.0)], vec![C64::new(0.0, 1.0), z]])
            .unwrap()
    }

    pub fn sigma3() -> Matrix {
        Matrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    /// Control on the first qubit, target on the second.
    pub fn cnot() -> Matrix {
        Matrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap()
    }
}
