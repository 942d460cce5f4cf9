//! Deutsch-Hayden matrix values `[B]^DH_phi = U_phi^dag B U_phi` for a
//! unitary `U_phi` whose reference column is the state `phi`.
//!
//! Only that one column is fixed by the state. Any `U_phi (1 ⊕ U_{-1})`
//! with `U_{-1}` unitary on the complement of the reference vector works
//! equally well, and the completion-independent content of a value is its
//! reference diagonal entry `<phi|B|phi>`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    lift_complement, lift_local, orthonormalize_columns, pauli, sample_random_unitary,
    Matrix, StateVector, Unitary, C64,
};
use crate::ncvalue::expectation_fn;

pub const GRAM_SCHMIDT_ID: &str = "gram-schmidt";

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryCompletion {
    u: Unitary,
    reference_state_index: usize,
    id: String,
}

impl UnitaryCompletion {
    /// Wraps an explicit unitary; its column `reference_state_index` is the
    /// state it completes.
    pub fn from_unitary(
        u: Unitary,
        reference_state_index: usize,
        id: impl Into<String>,
    ) -> Result<Self> {
        if reference_state_index >= u.dim() {
            return Err(Error::SlotOutOfRange {
                slot: reference_state_index,
                n_factors: u.dim(),
            });
        }
        Ok(Self {
            u,
            reference_state_index,
            id: id.into(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            u: Unitary::identity(dim),
            reference_state_index: 0,
            id: "identity".into(),
        }
    }

    pub fn unitary(&self) -> &Unitary {
        &self.u
    }

    pub fn reference_state_index(&self) -> usize {
        self.reference_state_index
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// The completed state, i.e. the reference column.
    pub fn state(&self) -> Vec<C64> {
        self.u.matrix().column(self.reference_state_index)
    }
}

/// Completion with `phi` as column 0 (the `|0...0>` reference state).
pub fn complete_unitary(phi: &StateVector, seed: Option<u64>) -> UnitaryCompletion {
    complete_unitary_at(phi, 0, seed).expect("index 0 is always valid")
}

/// Deterministic completion: `phi` goes in column `reference_index`; the
/// other columns come from Gram-Schmidt on the standard basis with the basis
/// vector of largest `|<e_k|phi>|` dropped (lowest `k` on ties). With a seed,
/// the complement block is rotated by a seeded random unitary.
pub fn complete_unitary_at(
    phi: &StateVector,
    reference_index: usize,
    seed: Option<u64>,
) -> Result<UnitaryCompletion> {
    let d = phi.dim();
    if reference_index >= d {
        return Err(Error::SlotOutOfRange {
            slot: reference_index,
            n_factors: d,
        });
    }
    let amps = phi.amplitudes();
    let skip = amps
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (k, z)| {
            if z.norm() > best.1 {
                (k, z.norm())
            } else {
                best
            }
        })
        .0;

    let mut seed_cols = Matrix::zeros(d, d);
    for (i, &z) in amps.iter().enumerate() {
        seed_cols[(i, 0)] = z;
    }
    for (col, k) in (1..d).zip((0..d).filter(|&k| k != skip)) {
        seed_cols[(k, col)] = C64::new(1.0, 0.0);
    }
    let q = orthonormalize_columns(&seed_cols);

    // move phi to the reference column, keep the rest in order
    let order: Vec<usize> = (0..d)
        .map(|target| match target.cmp(&reference_index) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => target + 1,
            std::cmp::Ordering::Greater => target,
        })
        .collect();
    let mut u = Matrix::zeros(d, d);
    for (target, &src) in order.iter().enumerate() {
        for i in 0..d {
            u[(i, target)] = if src == 0 { amps[i] } else { q[(i, src)] };
        }
    }

    let mut id = GRAM_SCHMIDT_ID.to_string();
    if let Some(seed) = seed {
        if d > 1 {
            let rest = sample_random_unitary(d - 1, seed);
            let mut block = Matrix::zeros(d, d);
            block[(0, 0)] = C64::new(1.0, 0.0);
            for i in 1..d {
                for j in 1..d {
                    block[(i, j)] = rest.matrix()[(i - 1, j - 1)];
                }
            }
            // `block` is 1 ⊕ U_{-1} with the fixed index first; move that
            // index to the reference position
            let perm = reference_permutation(d, reference_index);
            let rot = &(&perm.adjoint() * &block) * &perm;
            u = &u * &rot;
        }
        id = format!("{GRAM_SCHMIDT_ID}+seed:{seed}");
    }
    let u = Unitary::new(u)?;
    UnitaryCompletion::from_unitary(u, reference_index, id)
}

/// Permutation sending basis index `r` to 0 and shifting `0..r` up by one.
fn reference_permutation(d: usize, r: usize) -> Matrix {
    let mut p = Matrix::zeros(d, d);
    for k in 0..d {
        let img = match k.cmp(&r) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => k + 1,
            std::cmp::Ordering::Greater => k,
        };
        p[(img, k)] = C64::new(1.0, 0.0);
    }
    p
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DHMatrixValue {
    pub matrix: Matrix,
    pub completion_id: String,
}

impl DHMatrixValue {
    /// Entry at the reference index, equal to `<phi|B|phi>`.
    pub fn reference_entry(&self, reference_index: usize) -> C64 {
        self.matrix[(reference_index, reference_index)]
    }
}

pub fn dh_value(b: &Matrix, comp: &UnitaryCompletion) -> Result<DHMatrixValue> {
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    if b.rows() != comp.dim() {
        return Err(Error::DimensionMismatch {
            expected: comp.dim(),
            found: b.rows(),
        });
    }
    let u = comp.u.matrix();
    Ok(DHMatrixValue {
        matrix: &(&u.adjoint() * b) * u,
        completion_id: comp.id.clone(),
    })
}

/// Values of the lifted `σ1` and `σ3` of one qubit.
pub fn dh_descriptor(
    qubit_slot: usize,
    comp: &UnitaryCompletion,
    factor_dims: &[usize],
) -> Result<(DHMatrixValue, DHMatrixValue)> {
    match factor_dims.get(qubit_slot) {
        None => {
            return Err(Error::SlotOutOfRange {
                slot: qubit_slot,
                n_factors: factor_dims.len(),
            })
        }
        Some(&2) => {}
        Some(&d) => {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: d,
            })
        }
    }
    let s1 = lift_local(&pauli::sigma1(), qubit_slot, factor_dims)?;
    let s3 = lift_local(&pauli::sigma3(), qubit_slot, factor_dims)?;
    Ok((dh_value(&s1, comp)?, dh_value(&s3, comp)?))
}

/// `max |[BC]^DH - [B]^DH [C]^DH|`.
pub fn verify_dh_homomorphism(b: &Matrix, c: &Matrix, comp: &UnitaryCompletion) -> Result<f64> {
    let bc = b.matmul(c)?;
    let lhs = dh_value(&bc, comp)?;
    let rhs = &dh_value(b, comp)?.matrix * &dh_value(c, comp)?.matrix;
    Ok(lhs.matrix.max_abs_diff(&rhs))
}

/// `max |[W^dag B̃ W]^DH - [B̃]^DH|` with `B̃` the lift of `b_local` into
/// `slot` and `W` the lift of `u_other` onto every other slot.
pub fn verify_strong_locality(
    b_local: &Matrix,
    slot: usize,
    u_other: &Unitary,
    comp: &UnitaryCompletion,
    factor_dims: &[usize],
) -> Result<f64> {
    let b = lift_local(b_local, slot, factor_dims)?;
    let w = lift_complement(u_other.matrix(), slot, factor_dims)?;
    let moved = &(&w.adjoint() * &b) * &w;
    Ok(dh_value(&moved, comp)?
        .matrix
        .max_abs_diff(&dh_value(&b, comp)?.matrix))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionReport {
    pub completion_ids: Vec<String>,
    pub expectation: C64,
    /// Reference entry of the value for each completion.
    pub reference_entries: Vec<C64>,
    /// Max deviation of any reference entry from `<phi|B|phi>`.
    pub max_reference_deviation: f64,
    /// Max over pairs of `|M e_0 - e_0|` and `|e_0^T M - e_0^T|`,
    /// `M = U_1^dag U_2`.
    pub max_reference_leak: f64,
    /// Max over pairs of `|[B]_2 - M^dag [B]_1 M|`.
    pub max_conjugation_residual: f64,
    /// Max over completions of the `[B B] = [B][B]` residual.
    pub max_homomorphism_residual: f64,
}

impl CompletionReport {
    pub fn max_residual(&self) -> f64 {
        self.max_reference_deviation
            .max(self.max_reference_leak)
            .max(self.max_conjugation_residual)
            .max(self.max_homomorphism_residual)
    }
}

/// Compares the values of `B` under seeded completions of `phi`.
pub fn completion_independence_report(
    b: &Matrix,
    phi: &StateVector,
    seeds: &[u64],
) -> Result<CompletionReport> {
    if seeds.len() < 2 {
        return Err(Error::Invalid(
            "completion independence needs at least two seeds".into(),
        ));
    }
    let expectation = expectation_fn(b, phi)?;
    let comps: Vec<UnitaryCompletion> = seeds
        .iter()
        .map(|&s| complete_unitary(phi, Some(s)))
        .collect();
    let values = comps
        .iter()
        .map(|c| dh_value(b, c))
        .collect::<Result<Vec<_>>>()?;

    let reference_entries: Vec<C64> = values.iter().map(|v| v.reference_entry(0)).collect();
    let max_reference_deviation = reference_entries
        .iter()
        .map(|e| (e - expectation).norm())
        .fold(0.0, f64::max);

    let d = phi.dim();
    let e0 = {
        let mut m = Matrix::zeros(d, 1);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m
    };
    let mut max_reference_leak = 0.0_f64;
    let mut max_conjugation_residual = 0.0_f64;
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let m = &comps[i].u.matrix().adjoint() * comps[j].u.matrix();
            let col = &m * &e0;
            let row = &e0.adjoint() * &m;
            max_reference_leak = max_reference_leak
                .max(col.max_abs_diff(&e0))
                .max(row.max_abs_diff(&e0.adjoint()));
            let conj = &(&m.adjoint() * &values[i].matrix) * &m;
            max_conjugation_residual =
                max_conjugation_residual.max(conj.max_abs_diff(&values[j].matrix));
        }
    }
    let max_homomorphism_residual = comps
        .iter()
        .map(|c| verify_dh_homomorphism(b, b, c))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    Ok(CompletionReport {
        completion_ids: comps.iter().map(|c| c.id.clone()).collect(),
        expectation,
        reference_entries,
        max_reference_deviation,
        max_reference_leak,
        max_conjugation_residual,
        max_homomorphism_residual,
    })
}
