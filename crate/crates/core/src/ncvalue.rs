//! Noncommutative values `[B]_phi = { f ; V_0, ..., V_{D-1} }`.
//!
//! For a normalized state `|phi> = sum_n z_n |n>` the expectation function is
//! `f = sum_{m,n} conj(z_m) B_{mn} z_n` and its holomorphic coordinate
//! derivatives are
//!
//! ```text
//! V_n = -f conj(z_n) + sum_m conj(z_m) B_{mn} = -f conj(z_n) + conj((B^dag z)_n)
//! ```
//!
//! The barred derivative `V_{n̄}` is `conj(V_n)` and is never stored. Scalar
//! parts multiply through the star product
//! `f_{BC} = f_B f_C + sum_n V_{B,n} conj(V_{C,n})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{self, Matrix, Operator, StateVector, Unitary, C64, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NCValue {
    pub f: C64,
    pub v: Vec<C64>,
}

impl NCValue {
    pub fn new(f: C64, v: Vec<C64>) -> Self {
        Self { f, v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `alpha * self`.
    pub fn scale(&self, alpha: f64) -> NCValue {
        NCValue {
            f: self.f * alpha,
            v: self.v.iter().map(|z| z * alpha).collect(),
        }
    }

    /// Componentwise `sum_k alpha_k [B_k]`. Panics on mismatched dims.
    pub fn linear_combination(terms: &[(f64, &NCValue)]) -> NCValue {
        let dim = terms.first().map_or(0, |(_, a)| a.dim());
        let mut f = C64::new(0.0, 0.0);
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for (alpha, a) in terms {
            assert_eq!(a.dim(), dim, "NC values of different dimension");
            f += a.f * alpha;
            for (acc, z) in v.iter_mut().zip(&a.v) {
                *acc += z * alpha;
            }
        }
        NCValue { f, v }
    }

    /// Max-abs difference over `f` and every `V_n`.
    pub fn max_abs_diff(&self, other: &NCValue) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (self.f - other.f).norm().max(hilbert::max_abs_diff(&self.v, &other.v))
    }

    /// As [`max_abs_diff`](Self::max_abs_diff) but with the overall phase of
    /// the `V` components (inherited from the state's phase) removed.
    pub fn max_abs_diff_up_to_phase(&self, other: &NCValue) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (self.f - other.f)
            .norm()
            .max(hilbert::max_abs_diff_up_to_phase(&self.v, &other.v))
    }

    /// True when every `V_n` vanishes, i.e. the state is an eigenstate and
    /// the value multiplies like a number.
    pub fn is_commutative(&self, tol: f64) -> bool {
        self.v.iter().all(|z| z.norm() <= tol)
    }

    /// `|sum_n V_n z_n|`, which vanishes for the defining state.
    pub fn orthogonality_residual(&self, phi: &StateVector) -> f64 {
        self.v
            .iter()
            .zip(phi.amplitudes())
            .map(|(v, z)| v * z)
            .sum::<C64>()
            .norm()
    }

    pub fn v_norm(&self) -> f64 {
        hilbert::norm(&self.v)
    }
}

fn check_dim(op_dim: usize, phi: &StateVector) -> Result<()> {
    if op_dim != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: op_dim,
            found: phi.dim(),
        });
    }
    Ok(())
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `<phi|B|phi>`; the state is normalized so there is no denominator.
pub fn expectation_fn(b: &impl Operator, phi: &StateVector) -> Result<C64> {
    check_dim(b.dim(), phi)?;
    Ok(inner(phi.amplitudes(), &b.apply(phi.amplitudes())))
}

fn v_from(f: C64, b_dag_z: &[C64], phi: &StateVector) -> Vec<C64> {
    b_dag_z
        .iter()
        .zip(phi.amplitudes())
        .map(|(w, z)| w.conj() - f * z.conj())
        .collect()
}

/// `V_n = -f conj(z_n) + sum_m conj(z_m) <m|B|n>`.
pub fn v_components(b: &impl Operator, phi: &StateVector) -> Result<Vec<C64>> {
    Ok(nc_value(b, phi)?.v)
}

pub fn nc_value(b: &impl Operator, phi: &StateVector) -> Result<NCValue> {
    let f = expectation_fn(b, phi)?;
    let b_dag_z = b.apply_adjoint(phi.amplitudes());
    Ok(NCValue {
        f,
        v: v_from(f, &b_dag_z, phi),
    })
}

/// Scalar part of `[B] ⋆ [C]` from the tuples alone:
/// `f_B f_C + sum_n V_{B,n} conj(V_{C,n})`.
pub fn star_scalar(a: &NCValue, b: &NCValue) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let cross: C64 = a.v.iter().zip(&b.v).map(|(x, y)| x * y.conj()).sum();
    Ok(a.f * b.f + cross)
}

/// Full value of the (generally non-Hermitian) product `BC`:
/// `V_{BC,n} = -f_{BC} conj(z_n) + sum_{m,l} conj(z_m) <m|B|l><l|C|n>`.
pub fn nc_value_of_product(
    b: &impl Operator,
    c: &impl Operator,
    phi: &StateVector,
) -> Result<NCValue> {
    check_dim(b.dim(), phi)?;
    check_dim(c.dim(), phi)?;
    let z = phi.amplitudes();
    let f = inner(z, &b.apply(&c.apply(z)));
    // (BC)^dag z = C^dag (B^dag z)
    let w = c.apply_adjoint(&b.apply_adjoint(z));
    Ok(NCValue {
        f,
        v: v_from(f, &w, phi),
    })
}

/// `sum_n |V_n|^2`, equal to `<B^2> - <B>^2` for Hermitian `B`.
pub fn uncertainty(a: &NCValue) -> f64 {
    a.v.iter().map(|z| z.norm_sqr()).sum()
}

/// Value of `B` at `W phi` for a process `W` that commutes with `B`.
///
/// The expectation function is invariant, so only the coordinate
/// representation changes: `f' = f` and `V' = conj(W) V` entrywise. The
/// result is built from `a` and `W` alone; recomputing `nc_value(B, W phi)`
/// agrees to rounding.
pub fn transport_under_local_process(
    a: &NCValue,
    b: &Matrix,
    w: &Unitary,
    phi: &StateVector,
) -> Result<NCValue> {
    check_dim(b.rows(), phi)?;
    check_dim(w.dim(), phi)?;
    if a.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: a.dim(),
        });
    }
    let residual = w.matrix().commutator(b)?.max_abs();
    if residual > DEFAULT_TOL {
        return Err(Error::NotCommuting { residual });
    }
    Ok(NCValue {
        f: a.f,
        v: w.matrix().conj().mul_vec(&a.v)?,
    })
}
