//! Tensor products over the lexicographic basis `|i_0 i_1 ... i_{k-1}>`,
//! global index `((i_0 * d_1 + i_1) * d_2 + i_2) ...`.

use super::{Matrix, StateVector, C64};
use crate::error::{Error, Result};

pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for Matrix {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let amps: Vec<C64> = self
            .amplitudes()
            .iter()
            .flat_map(|a| other.amplitudes().iter().map(move |b| a * b))
            .collect();
        let mut dims = self.factor_dims().map_or(vec![self.dim()], <[usize]>::to_vec);
        dims.extend(other.factor_dims().map_or(vec![other.dim()], <[usize]>::to_vec));
        // product of unit vectors is a unit vector up to rounding
        StateVector::normalized(amps)
            .and_then(|s| s.with_factor_dims(dims))
            .expect("tensor product of normalized states")
    }
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

fn check_dims(factor_dims: &[usize]) -> Result<usize> {
    if factor_dims.is_empty() || factor_dims.contains(&0) {
        return Err(Error::FactorDims {
            factors: factor_dims.to_vec(),
            dim: 0,
        });
    }
    Ok(factor_dims.iter().product())
}

/// Digits of a global index in the mixed radix given by `factor_dims`.
pub(crate) fn digits(mut index: usize, factor_dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; factor_dims.len()];
    for (k, &d) in factor_dims.iter().enumerate().rev() {
        out[k] = index % d;
        index /= d;
    }
    out
}

fn compose(digits: impl Iterator<Item = (usize, usize)>) -> usize {
    digits.fold(0, |acc, (digit, radix)| acc * radix + digit)
}

/// `I ⊗ ... ⊗ op ⊗ ... ⊗ I` with `op` in position `slot`.
pub fn lift_local(op: &Matrix, slot: usize, factor_dims: &[usize]) -> Result<Matrix> {
    check_dims(factor_dims)?;
    if slot >= factor_dims.len() {
        return Err(Error::SlotOutOfRange {
            slot,
            n_factors: factor_dims.len(),
        });
    }
    if !op.is_square() {
        return Err(Error::NotSquare {
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    if op.rows() != factor_dims[slot] {
        return Err(Error::DimensionMismatch {
            expected: factor_dims[slot],
            found: op.rows(),
        });
    }
    let before: usize = factor_dims[..slot].iter().product();
    let after: usize = factor_dims[slot + 1..].iter().product();
    Ok(Matrix::identity(before)
        .kron(op)
        .kron(&Matrix::identity(after)))
}

/// Embeds `op`, acting on the listed `slots` (in the given order), into the
/// full space; identity on every other slot.
pub fn embed(op: &Matrix, slots: &[usize], factor_dims: &[usize]) -> Result<Matrix> {
    let dim = check_dims(factor_dims)?;
    for (i, &s) in slots.iter().enumerate() {
        if s >= factor_dims.len() {
            return Err(Error::SlotOutOfRange {
                slot: s,
                n_factors: factor_dims.len(),
            });
        }
        if slots[..i].contains(&s) {
            return Err(Error::Invalid(format!("slot {s} listed twice")));
        }
    }
    let sub_dims: Vec<usize> = slots.iter().map(|&s| factor_dims[s]).collect();
    let sub_dim: usize = sub_dims.iter().product();
    if !op.is_square() || op.rows() != sub_dim {
        return Err(Error::DimensionMismatch {
            expected: sub_dim,
            found: op.rows(),
        });
    }
    let others: Vec<usize> = (0..factor_dims.len()).filter(|s| !slots.contains(s)).collect();
    let split = |i: usize| {
        let d = digits(i, factor_dims);
        let inner = compose(slots.iter().map(|&s| (d[s], factor_dims[s])));
        let outer = compose(others.iter().map(|&s| (d[s], factor_dims[s])));
        (inner, outer)
    };
    let parts: Vec<(usize, usize)> = (0..dim).map(split).collect();
    let mut out = Matrix::zeros(dim, dim);
    for (i, &(ia, io)) in parts.iter().enumerate() {
        for (j, &(ja, jo)) in parts.iter().enumerate() {
            if io == jo {
                out[(i, j)] = op[(ia, ja)];
            }
        }
    }
    Ok(out)
}

/// Lifts `op` acting on every slot except `slot` (remaining slots in order).
pub fn lift_complement(op: &Matrix, slot: usize, factor_dims: &[usize]) -> Result<Matrix> {
    if slot >= factor_dims.len() {
        return Err(Error::SlotOutOfRange {
            slot,
            n_factors: factor_dims.len(),
        });
    }
    let others: Vec<usize> = (0..factor_dims.len()).filter(|&s| s != slot).collect();
    embed(op, &others, factor_dims)
}

/// Reduced matrix on `keep_slot`, tracing out all other factors.
pub fn partial_trace(rho: &Matrix, keep_slot: usize, factor_dims: &[usize]) -> Result<Matrix> {
    let dim = check_dims(factor_dims)?;
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::Shape(format!(
            "{}x{} matrix on a space of dimension {dim}",
            rho.rows(),
            rho.cols()
        )));
    }
    if keep_slot >= factor_dims.len() {
        return Err(Error::SlotOutOfRange {
            slot: keep_slot,
            n_factors: factor_dims.len(),
        });
    }
    let dk = factor_dims[keep_slot];
    let before: usize = factor_dims[..keep_slot].iter().product();
    let after: usize = factor_dims[keep_slot + 1..].iter().product();
    let idx = |b: usize, k: usize, a: usize| (b * dk + k) * after + a;
    let mut out = Matrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..before {
                for a in 0..after {
                    acc += rho[(idx(b, i, a), idx(b, j, a))];
                }
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// `tr(rho^2)`.
pub fn purity(rho: &Matrix) -> f64 {
    (rho * rho).trace().re
}
