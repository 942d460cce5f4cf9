//! Two-qubit state family, its canonical unitary, closed-form values of the
//! local Pauli observables, and the CNOT pointer model.
//!
//! A generic two-qubit state is written with six real parameters:
//! `r` sets the entanglement (`sqrt(1 - r^2)`), `zeta` a relative phase, and
//! `(theta, psi)` per qubit a local rotation. With `q± = sqrt((1 ± r)/2)`,
//! `c = cos(theta/2) e^{-i psi/2}` and `s = sin(theta/2) e^{i psi/2}`:
//!
//! ```text
//! z00 = e^{-iζ/2} q+ cA cB + e^{iζ/2} q- s̄A s̄B
//! z01 = e^{-iζ/2} q+ cA sB - e^{iζ/2} q- s̄A c̄B
//! z10 = e^{-iζ/2} q+ sA cB - e^{iζ/2} q- c̄A s̄B
//! z11 = e^{-iζ/2} q+ sA sB + e^{iζ/2} q- c̄A c̄B
//! ```

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::dhvalue::{dh_value, UnitaryCompletion};
use crate::error::{Error, Result};
use crate::hilbert::{
    lift_local, operator_schmidt_rank, operator_schmidt_rank_across, partial_trace, pauli,
    Matrix, StateVector, Unitary, C64, DEFAULT_TOL,
};
use crate::ncvalue::{nc_value, NCValue};

/// Names of the four local basic observables, in fixture order.
pub const OBSERVABLE_NAMES: [&str; 4] = ["sigma1A", "sigma1B", "sigma3A", "sigma3B"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitParams {
    pub r: f64,
    pub zeta: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    pub psi_a: f64,
    pub psi_b: f64,
}

impl TwoQubitParams {
    pub fn new(r: f64, zeta: f64, theta_a: f64, theta_b: f64, psi_a: f64, psi_b: f64) -> Result<Self> {
        let p = Self {
            r,
            zeta,
            theta_a,
            theta_b,
            psi_a,
            psi_b,
        };
        p.validate()?;
        Ok(p)
    }

    /// Local rotations switched off; only `r` and `zeta` remain.
    pub fn canonical(r: f64, zeta: f64) -> Result<Self> {
        Self::new(r, zeta, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_r(self.r)?;
        for (name, value) in [("zeta", self.zeta), ("psi_a", self.psi_a), ("psi_b", self.psi_b)] {
            if !(0.0..TAU).contains(&value) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    expected: "[0, 2π)",
                });
            }
        }
        for (name, value) in [("theta_a", self.theta_a), ("theta_b", self.theta_b)] {
            if !(0.0..=PI).contains(&value) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    expected: "[0, π]",
                });
            }
        }
        Ok(())
    }

    pub fn q_plus(&self) -> f64 {
        ((1.0 + self.r) / 2.0).sqrt()
    }

    pub fn q_minus(&self) -> f64 {
        ((1.0 - self.r) / 2.0).sqrt()
    }

    /// `(c, s)` for qubit A.
    pub fn rotation_a(&self) -> (C64, C64) {
        rotation(self.theta_a, self.psi_a)
    }

    /// `(c, s)` for qubit B.
    pub fn rotation_b(&self) -> (C64, C64) {
        rotation(self.theta_b, self.psi_b)
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            expected: "[0, 1]",
        });
    }
    Ok(())
}

fn rotation(theta: f64, psi: f64) -> (C64, C64) {
    (
        C64::from_polar((theta / 2.0).cos(), -psi / 2.0),
        C64::from_polar((theta / 2.0).sin(), psi / 2.0),
    )
}

/// `(e^{-iζ/2} q+, e^{iζ/2} q-)`: the two nonzero amplitudes of the
/// canonical state, at `|00>` and `|11>`.
fn corner_amplitudes(r: f64, zeta: f64) -> (C64, C64) {
    let qp = ((1.0 + r) / 2.0).sqrt();
    let qm = ((1.0 - r) / 2.0).sqrt();
    (C64::from_polar(qp, -zeta / 2.0), C64::from_polar(qm, zeta / 2.0))
}

/// The state with amplitudes `z00, z01, z10, z11`, tagged as two qubits.
pub fn state_from_params(p: &TwoQubitParams) -> Result<StateVector> {
    p.validate()?;
    let (ca, sa) = p.rotation_a();
    let (cb, sb) = p.rotation_b();
    let a = C64::from_polar(p.q_plus(), -p.zeta / 2.0);
    let b = C64::from_polar(p.q_minus(), p.zeta / 2.0);
    let amps = vec![
        a * ca * cb + b * sa.conj() * sb.conj(),
        a * ca * sb - b * sa.conj() * cb.conj(),
        a * sa * cb - b * ca.conj() * sb.conj(),
        a * sa * sb + b * ca.conj() * cb.conj(),
    ];
    StateVector::new(amps)?.with_factor_dims(vec![2, 2])
}

/// `e^{-iζ/2} q+ |00> + e^{iζ/2} q- |11>`.
pub fn canonical_state(r: f64, zeta: f64) -> Result<StateVector> {
    check_r(r)?;
    let (z00, z11) = corner_amplitudes(r, zeta);
    let zero = C64::new(0.0, 0.0);
    StateVector::new(vec![z00, zero, zero, z11])?.with_factor_dims(vec![2, 2])
}

/// `sqrt(1 - r^2)`.
pub fn entanglement(p: &TwoQubitParams) -> f64 {
    (1.0 - p.r * p.r).max(0.0).sqrt()
}

/// The canonical unitary whose first column is [`canonical_state`]: a
/// rotation in the `|00>, |11>` plane with identity on `|01>, |10>`.
pub fn u_q(r: f64, zeta: f64) -> Result<Unitary> {
    check_r(r)?;
    let qp = ((1.0 + r) / 2.0).sqrt();
    let qm = ((1.0 - r) / 2.0).sqrt();
    let lo = C64::from_polar(1.0, -zeta / 2.0);
    let hi = C64::from_polar(1.0, zeta / 2.0);
    let mut m = Matrix::identity(4);
    m[(0, 0)] = lo * qp;
    m[(0, 3)] = -lo * qm;
    m[(3, 0)] = hi * qm;
    m[(3, 3)] = hi * qp;
    Unitary::new(m)
}

/// Single-qubit rotation `[[c, -s̄], [s, c̄]]`.
pub fn local_rotation(c: C64, s: C64) -> Unitary {
    let m = Matrix::from_rows(vec![vec![c, -s.conj()], vec![s, c.conj()]]).expect("2x2");
    Unitary::new(m).expect("|c|^2 + |s|^2 = 1")
}

/// `(U_A ⊗ U_B) U_q`. Its first column is [`state_from_params`].
pub fn u_psi(p: &TwoQubitParams) -> Result<Unitary> {
    p.validate()?;
    let (ca, sa) = p.rotation_a();
    let (cb, sb) = p.rotation_b();
    let local = local_rotation(ca, sa).kron(&local_rotation(cb, sb));
    local.compose(&u_q(p.r, p.zeta)?)
}

/// `σ1 ⊗ I`, `I ⊗ σ1`, `σ3 ⊗ I`, `I ⊗ σ3`, keyed by [`OBSERVABLE_NAMES`].
pub fn local_observables() -> BTreeMap<&'static str, Matrix> {
    let dims = [2, 2];
    let lift = |m: Matrix, slot| lift_local(&m, slot, &dims).expect("valid slot");
    BTreeMap::from([
        ("sigma1A", lift(pauli::sigma1(), 0)),
        ("sigma1B", lift(pauli::sigma1(), 1)),
        ("sigma3A", lift(pauli::sigma3(), 0)),
        ("sigma3B", lift(pauli::sigma3(), 1)),
    ])
}

fn build(rows: [[C64; 4]; 4]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("4x4")
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Closed-form DH values `U_q^dag B U_q` of the local observables.
pub fn paper_fixture_dh(r: f64, zeta: f64) -> Result<BTreeMap<String, Matrix>> {
    check_r(r)?;
    let (z00, z11) = corner_amplitudes(r, zeta);
    let o = re(0.0);
    let w = (1.0 - r * r).max(0.0).sqrt();
    let s1a = build([
        [o, z11.conj(), z00.conj(), o],
        [z11, o, o, z00.conj()],
        [z00, o, o, -z11.conj()],
        [o, z00, -z11, o],
    ]);
    let s1b = build([
        [o, z00.conj(), z11.conj(), o],
        [z00, o, o, -z11.conj()],
        [z11, o, o, z00.conj()],
        [o, -z11, z00, o],
    ]);
    let corners = |mid: f64| {
        build([
            [re(r), o, o, re(-w)],
            [o, re(mid), o, o],
            [o, o, re(-mid), o],
            [re(-w), o, o, re(-r)],
        ])
    };
    Ok(BTreeMap::from([
        ("sigma1A".to_string(), s1a),
        ("sigma1B".to_string(), s1b),
        ("sigma3A".to_string(), corners(1.0)),
        ("sigma3B".to_string(), corners(-1.0)),
    ]))
}

/// The DH matrices exactly as typeset in the reference tables, including
/// two entries that disagree with `U_q^dag B U_q`: the `(2,3)`/`(3,2)`
/// entries of `sigma1B` carry `z00` and its conjugate swapped, and
/// `sigma3B` is listed as identical to `sigma3A` (its middle block should
/// read `diag(-1, 1)`). Kept so the discrepancy stays measurable.
pub fn paper_fixture_dh_as_printed(r: f64, zeta: f64) -> Result<BTreeMap<String, Matrix>> {
    let mut m = paper_fixture_dh(r, zeta)?;
    let (z00, _) = corner_amplitudes(r, zeta);
    let s1b = m.get_mut("sigma1B").expect("present");
    s1b[(2, 3)] = z00;
    s1b[(3, 2)] = z00.conj();
    let s3a = m["sigma3A"].clone();
    m.insert("sigma3B".to_string(), s3a);
    Ok(m)
}

/// Closed-form NC values of the local observables at [`canonical_state`].
pub fn paper_fixture_nc(r: f64, zeta: f64) -> Result<BTreeMap<String, NCValue>> {
    check_r(r)?;
    let (z00, z11) = corner_amplitudes(r, zeta);
    let o = re(0.0);
    let s3 = NCValue::new(
        re(r),
        vec![z00.conj() * (1.0 - r), o, o, -z11.conj() * (1.0 + r)],
    );
    Ok(BTreeMap::from([
        (
            "sigma1A".to_string(),
            NCValue::new(o, vec![o, z11.conj(), z00.conj(), o]),
        ),
        (
            "sigma1B".to_string(),
            NCValue::new(o, vec![o, z00.conj(), z11.conj(), o]),
        ),
        ("sigma3A".to_string(), s3.clone()),
        ("sigma3B".to_string(), s3),
    ]))
}

/// Engine DH values of the local observables with completion `U_q`.
pub fn engine_dh(r: f64, zeta: f64) -> Result<BTreeMap<String, Matrix>> {
    let comp = UnitaryCompletion::from_unitary(u_q(r, zeta)?, 0, "u_q")?;
    local_observables()
        .into_iter()
        .map(|(name, b)| Ok((name.to_string(), dh_value(&b, &comp)?.matrix)))
        .collect()
}

/// Engine NC values of the local observables at [`canonical_state`].
pub fn engine_nc(r: f64, zeta: f64) -> Result<BTreeMap<String, NCValue>> {
    let phi = canonical_state(r, zeta)?;
    local_observables()
        .into_iter()
        .map(|(name, b)| Ok((name.to_string(), nc_value(&b, &phi)?)))
        .collect()
}

/// Reduced density matrix of qubit `slot` (0 = A, 1 = B).
pub fn reduced_density(state: &StateVector, slot: usize) -> Result<Matrix> {
    partial_trace(&state.density_matrix(), slot, &[2, 2])
}

/// `(I_A ⊗ CNOT_BC)(|state> ⊗ |0>_C)`, with B as control and a fresh pointer
/// qubit C as target. Output index is `4a + 2b + c`.
pub fn cnot_pointer(state_ab: &StateVector) -> Result<StateVector> {
    if state_ab.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state_ab.dim(),
        });
    }
    let mut out = vec![C64::new(0.0, 0.0); 8];
    for (ab, &z) in state_ab.amplitudes().iter().enumerate() {
        let b = ab & 1;
        out[2 * ab + b] = z;
    }
    StateVector::new(out)?.with_factor_dims(vec![2, 2, 2])
}

/// `I_A ⊗ CNOT_BC` on three qubits.
pub fn pointer_unitary() -> Matrix {
    Matrix::identity(2).kron(&pauli::cnot())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseReport {
    pub r: f64,
    pub zeta: f64,
    /// `max |U_q^{-1} ψ - e0|`.
    pub collapse_residual: f64,
    /// Operator Schmidt coefficients of `U_q^{-1}` across A|B.
    pub inverse_schmidt_coefficients: Vec<f64>,
    pub inverse_rank_ab: usize,
    /// Operator Schmidt ranks of `I_A ⊗ CNOT_BC` across each cut of ABC.
    pub pointer_rank_a_bc: usize,
    pub pointer_rank_b_ac: usize,
    pub pointer_rank_c_ab: usize,
    /// Rank of the bare two-qubit CNOT across B|C.
    pub cnot_rank_b_c: usize,
    /// Largest deviation of the pointer output from
    /// `e^{-iζ/2} q+ |000> + e^{iζ/2} q- |111>`.
    pub pointer_residual: f64,
}

/// Checks that `U_q^{-1}` maps the canonical state back to `|00>` and
/// measures how nonlocal the maps involved are.
pub fn collapse_analysis(r: f64, zeta: f64) -> Result<CollapseReport> {
    check_r(r)?;
    if r == 1.0 {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            expected: "[0, 1) (r = 1 is already a product state)",
        });
    }
    let psi = canonical_state(r, zeta)?;
    let inv = u_q(r, zeta)?.adjoint();
    let back = inv.matrix().mul_vec(psi.amplitudes())?;
    let e0 = StateVector::basis(4, 0)?;
    let collapse_residual = crate::hilbert::max_abs_diff(&back, e0.amplitudes());

    let inverse_schmidt_coefficients =
        crate::hilbert::operator_schmidt_coefficients(inv.matrix(), &[2, 2])?;
    let inverse_rank_ab = operator_schmidt_rank(inv.matrix(), &[2, 2], DEFAULT_TOL)?;

    let w = pointer_unitary();
    let dims = [2, 2, 2];
    let rank = |left: &[usize]| operator_schmidt_rank_across(&w, &dims, left, DEFAULT_TOL);

    let pointer = cnot_pointer(&psi)?;
    let (z00, z11) = corner_amplitudes(r, zeta);
    let mut expected = vec![C64::new(0.0, 0.0); 8];
    expected[0] = z00;
    expected[7] = z11;

    Ok(CollapseReport {
        r,
        zeta,
        collapse_residual,
        inverse_schmidt_coefficients,
        inverse_rank_ab,
        pointer_rank_a_bc: rank(&[0])?,
        pointer_rank_b_ac: rank(&[1])?,
        pointer_rank_c_ab: rank(&[2])?,
        cnot_rank_b_c: operator_schmidt_rank(&pauli::cnot(), &[2, 2], DEFAULT_TOL)?,
        pointer_residual: crate::hilbert::max_abs_diff(pointer.amplitudes(), &expected),
    })
}

/// Fixture grid: `r ∈ {0, 0.3, 0.6, 1}` × `zeta ∈ {0, π/2, π, 3π/2}`.
pub fn fixture_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for r in [0.0, 0.3, 0.6, 1.0] {
        for k in 0..4 {
            out.push((r, k as f64 * FRAC_PI_2));
        }
    }
    out
}

/// e.g. `r0.30_zeta1.50pi.json` for `r = 0.3`, `zeta = 3π/2`.
pub fn fixture_file_name(r: f64, zeta: f64) -> String {
    format!("r{:.2}_zeta{:.2}pi.json", r, zeta / PI)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureDocument {
    pub r: f64,
    pub zeta: f64,
    pub state: Vec<C64>,
    pub entanglement: f64,
    pub dh: BTreeMap<String, Matrix>,
    pub nc: BTreeMap<String, NCValue>,
}

pub fn fixture_document(r: f64, zeta: f64) -> Result<FixtureDocument> {
    let state = canonical_state(r, zeta)?.amplitudes().to_vec();
    Ok(FixtureDocument {
        r,
        zeta,
        state,
        entanglement: (1.0 - r * r).max(0.0).sqrt(),
        dh: paper_fixture_dh(r, zeta)?,
        nc: paper_fixture_nc(r, zeta)?,
    })
}

/// Pretty JSON with a trailing newline; byte-stable for a given input.
pub fn fixture_json(r: f64, zeta: f64) -> Result<String> {
    let doc = fixture_document(r, zeta)?;
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{max_abs_diff, purity};

    const TOL: f64 = 1e-12;

    fn grid() -> Vec<(f64, f64)> {
        fixture_grid()
    }

    #[test]
    fn product_limit_is_00() {
        let s = state_from_params(&TwoQubitParams::canonical(1.0, 0.0).unwrap()).unwrap();
        assert!(max_abs_diff(s.amplitudes(), StateVector::basis(4, 0).unwrap().amplitudes()) < TOL);
    }

    #[test]
    fn r0_is_bell() {
        let s = state_from_params(&TwoQubitParams::canonical(0.0, 0.0).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        assert!(max_abs_diff(s.amplitudes(), &[re(h), z, z, re(h)]) < TOL);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(TwoQubitParams::new(1.1, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(TwoQubitParams::new(0.5, TAU, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(TwoQubitParams::new(0.5, 0.0, 3.2, 0.0, 0.0, 0.0).is_err());
        assert!(TwoQubitParams::new(0.5, 0.0, 0.0, 0.0, -0.1, 0.0).is_err());
        assert!(u_q(-0.1, 0.0).is_err());
    }

    #[test]
    fn entanglement_values() {
        let e = |r| entanglement(&TwoQubitParams::canonical(r, 0.0).unwrap());
        assert_eq!(e(1.0), 0.0);
        assert_eq!(e(0.0), 1.0);
        assert!((e(0.6) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn u_q_first_column_and_rank() {
        for (r, zeta) in grid() {
            let u = u_q(r, zeta).unwrap();
            assert!(u.matrix().unitarity_deviation() < TOL);
            let psi = canonical_state(r, zeta).unwrap();
            assert!(max_abs_diff(&u.matrix().column(0), psi.amplitudes()) < TOL);
            let rank = operator_schmidt_rank(u.matrix(), &[2, 2], DEFAULT_TOL).unwrap();
            if r == 1.0 {
                assert_eq!(rank, 1);
            } else {
                assert!(rank > 1);
            }
        }
        let d = u_q(1.0, 0.8).unwrap();
        let expect = Matrix::diagonal(&[
            C64::from_polar(1.0, -0.4),
            re(1.0),
            re(1.0),
            C64::from_polar(1.0, 0.4),
        ]);
        assert!(d.matrix().approx_eq(&expect, TOL));
    }

    #[test]
    fn u_psi_first_column_is_state() {
        let p = TwoQubitParams::new(0.37, 4.1, 1.2, 2.9, 0.4, 5.5).unwrap();
        let u = u_psi(&p).unwrap();
        let s = state_from_params(&p).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < TOL);
        assert!(max_abs_diff(&u.matrix().column(0), s.amplitudes()) < TOL);

        let flat = TwoQubitParams::canonical(0.37, 4.1).unwrap();
        assert!(u_psi(&flat).unwrap().matrix().approx_eq(u_q(0.37, 4.1).unwrap().matrix(), TOL));

        let prod = TwoQubitParams::new(1.0, 2.0, 1.2, 2.9, 0.4, 5.5).unwrap();
        let rank = operator_schmidt_rank(u_psi(&prod).unwrap().matrix(), &[2, 2], DEFAULT_TOL);
        assert_eq!(rank.unwrap(), 1);
    }

    #[test]
    fn dh_fixture_matches_engine() {
        for (r, zeta) in grid() {
            let fixture = paper_fixture_dh(r, zeta).unwrap();
            let engine = engine_dh(r, zeta).unwrap();
            for name in OBSERVABLE_NAMES {
                let d = fixture[name].max_abs_diff(&engine[name]);
                assert!(d < TOL, "{name} at r={r} zeta={zeta}: {d}");
            }
        }
    }

    #[test]
    fn dh_fixture_spot_values() {
        let (r, zeta) = (0.3, 1.1);
        let m = paper_fixture_dh(r, zeta).unwrap();
        let w = (1.0 - r * r).sqrt();
        let s3 = &m["sigma3A"];
        assert!((s3[(0, 0)] - r).norm() < TOL && (s3[(0, 3)] + w).norm() < TOL);
        assert!((s3[(3, 0)] + w).norm() < TOL && (s3[(3, 3)] + r).norm() < TOL);
        let expect = C64::from_polar(((1.0 - r) / 2.0).sqrt(), -zeta / 2.0);
        assert!((m["sigma1A"][(0, 1)] - expect).norm() < TOL);

        let prod = paper_fixture_dh(1.0, 0.0).unwrap();
        let s3_i = pauli::sigma3().kron(&Matrix::identity(2));
        assert!(prod["sigma3A"].approx_eq(&s3_i, TOL));
    }

    #[test]
    fn printed_dh_differs_only_where_expected() {
        let (r, zeta) = (0.6, FRAC_PI_2);
        let printed = paper_fixture_dh_as_printed(r, zeta).unwrap();
        let engine = engine_dh(r, zeta).unwrap();
        assert!(printed["sigma1A"].max_abs_diff(&engine["sigma1A"]) < TOL);
        assert!(printed["sigma3A"].max_abs_diff(&engine["sigma3A"]) < TOL);
        assert!(printed["sigma1B"].max_abs_diff(&engine["sigma1B"]) > 0.1);
        assert!((printed["sigma3B"].max_abs_diff(&engine["sigma3B"]) - 2.0).abs() < TOL);
        // at zeta = 0 z00 is real, so the sigma1B swap is invisible
        let p0 = paper_fixture_dh_as_printed(r, 0.0).unwrap();
        assert!(p0["sigma1B"].max_abs_diff(&engine_dh(r, 0.0).unwrap()["sigma1B"]) < TOL);
    }

    #[test]
    fn nc_fixture_matches_engine() {
        for (r, zeta) in grid() {
            let fixture = paper_fixture_nc(r, zeta).unwrap();
            let engine = engine_nc(r, zeta).unwrap();
            for name in OBSERVABLE_NAMES {
                let d = fixture[name].max_abs_diff(&engine[name]);
                assert!(d < TOL, "{name} at r={r} zeta={zeta}: {d}");
            }
        }
    }

    #[test]
    fn nc_product_limits() {
        let nc = engine_nc(1.0, 0.7).unwrap();
        let one = NCValue::new(re(1.0), vec![re(0.0); 4]);
        assert!(nc["sigma3A"].max_abs_diff(&one) < TOL);
        assert!(nc["sigma3B"].max_abs_diff(&one) < TOL);
        assert!(nc["sigma3A"].is_commutative(TOL));
        let s1a = NCValue::new(re(0.0), vec![re(0.0), re(0.0), re(1.0), re(0.0)]);
        let s1b = NCValue::new(re(0.0), vec![re(0.0), re(1.0), re(0.0), re(0.0)]);
        assert!(nc["sigma1A"].max_abs_diff_up_to_phase(&s1a) < TOL);
        assert!(nc["sigma1B"].max_abs_diff_up_to_phase(&s1b) < TOL);
    }

    #[test]
    fn reduced_density_is_zeta_free() {
        for r in [0.0, 0.3, 0.6, 1.0] {
            let expect = Matrix::diagonal(&[re((1.0 + r) / 2.0), re((1.0 - r) / 2.0)]);
            for k in 0..8 {
                let zeta = k as f64 * TAU / 8.0;
                let psi = canonical_state(r, zeta).unwrap();
                for slot in 0..2 {
                    let rho = reduced_density(&psi, slot).unwrap();
                    assert!(rho.max_abs_diff(&expect) < TOL);
                    assert!((purity(&rho) - (1.0 + r * r) / 2.0).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn pointer_basis_cases() {
        let out = cnot_pointer(&StateVector::basis(4, 0).unwrap()).unwrap();
        assert_eq!(out.amplitudes()[0], re(1.0));
        let out = cnot_pointer(&StateVector::basis(4, 3).unwrap()).unwrap();
        assert_eq!(out.amplitudes()[7], re(1.0));
        assert!(cnot_pointer(&StateVector::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn pointer_matches_dense_gate() {
        let psi = state_from_params(&TwoQubitParams::new(0.2, 1.0, 0.5, 2.0, 3.0, 1.0).unwrap())
            .unwrap();
        let mut with_c = vec![C64::new(0.0, 0.0); 8];
        for (i, &z) in psi.amplitudes().iter().enumerate() {
            with_c[2 * i] = z;
        }
        let dense = pointer_unitary().mul_vec(&with_c).unwrap();
        let fast = cnot_pointer(&psi).unwrap();
        assert!(max_abs_diff(&dense, fast.amplitudes()) < TOL);
    }

    #[test]
    fn collapse_report() {
        for r in [0.0, 0.3, 0.6] {
            let rep = collapse_analysis(r, 1.3).unwrap();
            assert!(rep.collapse_residual < TOL);
            assert!(rep.pointer_residual < TOL);
            // diagonal block [[a, 1], [1, d]] with ad = (1+r)/2 != 1 plus the
            // two corner terms: full rank for every r < 1
            assert_eq!(rep.inverse_rank_ab, 4);
            assert_eq!(rep.pointer_rank_a_bc, 1);
            assert_eq!(rep.pointer_rank_b_ac, 2);
            assert_eq!(rep.pointer_rank_c_ab, 2);
            assert_eq!(rep.cnot_rank_b_c, 2);
        }
        // numpy oracle at r = 0: 1 ± 1/sqrt2 and the corner weights 1/sqrt2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = collapse_analysis(0.0, 0.0).unwrap().inverse_schmidt_coefficients;
        for (got, want) in s.iter().zip([1.0 + h, h, h, 1.0 - h]) {
            assert!((got - want).abs() < TOL);
        }
        assert!(collapse_analysis(1.0, 0.0).is_err());
    }

    #[test]
    fn fixture_names_and_json() {
        assert_eq!(fixture_file_name(0.3, 3.0 * FRAC_PI_2), "r0.30_zeta1.50pi.json");
        assert_eq!(fixture_grid().len(), 16);
        let a = fixture_json(0.6, PI).unwrap();
        assert_eq!(a, fixture_json(0.6, PI).unwrap());
        let back: FixtureDocument = serde_json::from_str(&a).unwrap();
        assert_eq!(back, fixture_document(0.6, PI).unwrap());
    }
}
