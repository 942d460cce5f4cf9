//! Seeded randomized runs of the algebraic identities.
//!
//! Every trial draws its state, observables and unitaries from its own
//! seed, derived from the run seed and the trial number, so a run is fully
//! reproducible and trials are independent of one another.

use serde::Serialize;

use crate::dhvalue::{
    complete_unitary, completion_independence_report, verify_dh_homomorphism,
    verify_strong_locality,
};
use crate::error::{Error, Result};
use crate::hilbert::{
    lift_complement, lift_local, sample_random_hermitian, sample_random_state,
    sample_random_unitary, StateVector,
};
use crate::ncvalue::{
    expectation_fn, nc_value, nc_value_of_product, star_scalar, transport_under_local_process,
    uncertainty,
};

/// Seed for draw `k` of trial `t` (splitmix64 of the packed triple).
pub fn trial_seed(run_seed: u64, trial: usize, k: u64) -> u64 {
    let mut z = run_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((trial as u64) << 8)
        .wrapping_add(k);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomomorphismSweep {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    /// `max |[BC]^DH - [B]^DH [C]^DH|`.
    pub dh_product: f64,
    /// `max |f_B f_C + sum V_B conj(V_C) - <BC>|`.
    pub nc_star_scalar: f64,
    /// `max |value of BC from B and C - value of the matrix BC|`.
    pub nc_product: f64,
    /// `max |sum |V|^2 - (<B^2> - <B>^2)|`.
    pub uncertainty_identity: f64,
}

impl HomomorphismSweep {
    pub fn max_residual(&self) -> f64 {
        self.dh_product
            .max(self.nc_star_scalar)
            .max(self.nc_product)
            .max(self.uncertainty_identity)
    }
}

/// Random states and Hermitian pairs, cycling through `dims`.
pub fn homomorphism_sweep(dims: &[usize], trials: usize, seed: u64) -> Result<HomomorphismSweep> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Invalid(format!("bad dimension list {dims:?}")));
    }
    let mut out = HomomorphismSweep {
        trials,
        dims: dims.to_vec(),
        seed,
        dh_product: 0.0,
        nc_star_scalar: 0.0,
        nc_product: 0.0,
        uncertainty_identity: 0.0,
    };
    for t in 0..trials {
        let d = dims[t % dims.len()];
        let phi = sample_random_state(d, trial_seed(seed, t, 0));
        let b = sample_random_hermitian(d, trial_seed(seed, t, 1)).into_matrix();
        let c = sample_random_hermitian(d, trial_seed(seed, t, 2)).into_matrix();
        let comp = complete_unitary(&phi, Some(trial_seed(seed, t, 3)));
        out.dh_product = out.dh_product.max(verify_dh_homomorphism(&b, &c, &comp)?);

        let bc = b.matmul(&c)?;
        let (vb, vc) = (nc_value(&b, &phi)?, nc_value(&c, &phi)?);
        let direct = nc_value(&bc, &phi)?;
        let star = star_scalar(&vb, &vc)?;
        out.nc_star_scalar = out.nc_star_scalar.max((star - direct.f).norm());
        let prod = nc_value_of_product(&b, &c, &phi)?;
        out.nc_product = out.nc_product.max(prod.max_abs_diff(&direct));

        let mean = expectation_fn(&b, &phi)?.re;
        let second = expectation_fn(&b.matmul(&b)?, &phi)?.re;
        let gap = (uncertainty(&vb) - (second - mean * mean)).abs();
        out.uncertainty_identity = out.uncertainty_identity.max(gap);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalitySweep {
    pub trials: usize,
    pub factor_dims: Vec<usize>,
    pub seed: u64,
    /// `max |[W^dag B W]^DH - [B]^DH|` for `W` off the observable's slot.
    pub dh_invariance: f64,
    /// `max |f(B, W phi) - f(B, phi)|`.
    pub nc_f_invariance: f64,
    /// `max |conj(W) V - V(B, W phi)|`.
    pub nc_transport: f64,
}

impl LocalitySweep {
    pub fn max_residual(&self) -> f64 {
        self.dh_invariance
            .max(self.nc_f_invariance)
            .max(self.nc_transport)
    }
}

/// Local observable on slot `t mod n`, random unitary on all other slots.
pub fn locality_sweep(factor_dims: &[usize], trials: usize, seed: u64) -> Result<LocalitySweep> {
    if factor_dims.len() < 2 || factor_dims.contains(&0) {
        return Err(Error::FactorDims {
            factors: factor_dims.to_vec(),
            dim: factor_dims.iter().product(),
        });
    }
    let dim: usize = factor_dims.iter().product();
    let mut out = LocalitySweep {
        trials,
        factor_dims: factor_dims.to_vec(),
        seed,
        dh_invariance: 0.0,
        nc_f_invariance: 0.0,
        nc_transport: 0.0,
    };
    for t in 0..trials {
        let slot = t % factor_dims.len();
        let d_local = factor_dims[slot];
        let phi = sample_random_state(dim, trial_seed(seed, t, 0))
            .with_factor_dims(factor_dims.to_vec())?;
        let b_local = sample_random_hermitian(d_local, trial_seed(seed, t, 1)).into_matrix();
        let u_other = sample_random_unitary(dim / d_local, trial_seed(seed, t, 2));
        let comp = complete_unitary(&phi, Some(trial_seed(seed, t, 3)));
        let r = verify_strong_locality(&b_local, slot, &u_other, &comp, factor_dims)?;
        out.dh_invariance = out.dh_invariance.max(r);

        let b = lift_local(&b_local, slot, factor_dims)?;
        let w = crate::hilbert::Unitary::new(lift_complement(u_other.matrix(), slot, factor_dims)?)?;
        let moved = StateVector::new(w.matrix().mul_vec(phi.amplitudes())?)?;
        let before = nc_value(&b, &phi)?;
        let after = nc_value(&b, &moved)?;
        out.nc_f_invariance = out.nc_f_invariance.max((after.f - before.f).norm());
        let carried = transport_under_local_process(&before, &b, &w, &phi)?;
        out.nc_transport = out
            .nc_transport
            .max(crate::hilbert::max_abs_diff(&carried.v, &after.v));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionSweep {
    pub observables: usize,
    pub completion_seeds: Vec<u64>,
    pub dim: usize,
    pub seed: u64,
    pub max_reference_deviation: f64,
    pub max_reference_leak: f64,
    pub max_conjugation_residual: f64,
}

impl CompletionSweep {
    pub fn max_residual(&self) -> f64 {
        self.max_reference_deviation
            .max(self.max_reference_leak)
            .max(self.max_conjugation_residual)
    }
}

/// Compares DH values under several seeded completions of one random
/// state, for `observables` random Hermitian matrices.
pub fn completion_sweep(
    dim: usize,
    observables: usize,
    completion_seeds: &[u64],
    seed: u64,
) -> Result<CompletionSweep> {
    let phi = sample_random_state(dim, trial_seed(seed, 0, 0));
    let mut out = CompletionSweep {
        observables,
        completion_seeds: completion_seeds.to_vec(),
        dim,
        seed,
        max_reference_deviation: 0.0,
        max_reference_leak: 0.0,
        max_conjugation_residual: 0.0,
    };
    for t in 0..observables {
        let b = sample_random_hermitian(dim, trial_seed(seed, t, 1)).into_matrix();
        let rep = completion_independence_report(&b, &phi, completion_seeds)?;
        out.max_reference_deviation = out.max_reference_deviation.max(rep.max_reference_deviation);
        out.max_reference_leak = out.max_reference_leak.max(rep.max_reference_leak);
        out.max_conjugation_residual = out
            .max_conjugation_residual
            .max(rep.max_conjugation_residual);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_spread() {
        let a = trial_seed(0, 0, 0);
        assert_ne!(a, trial_seed(0, 0, 1));
        assert_ne!(a, trial_seed(0, 1, 0));
        assert_ne!(a, trial_seed(1, 0, 0));
        assert_eq!(a, trial_seed(0, 0, 0));
    }

    #[test]
    fn small_runs_pass() {
        let h = homomorphism_sweep(&[2, 4], 20, 3).unwrap();
        assert!(h.max_residual() < 1e-10, "{h:?}");
        let l = locality_sweep(&[2, 2, 2], 9, 3).unwrap();
        assert!(l.max_residual() < 1e-10, "{l:?}");
        let c = completion_sweep(4, 5, &[0, 1, 2], 3).unwrap();
        assert!(c.max_residual() < 1e-10, "{c:?}");
    }

    #[test]
    fn rejects_bad_dims() {
        assert!(homomorphism_sweep(&[], 1, 0).is_err());
        assert!(locality_sweep(&[4], 1, 0).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            homomorphism_sweep(&[3], 5, 9).unwrap(),
            homomorphism_sweep(&[3], 5, 9).unwrap()
        );
    }
}
