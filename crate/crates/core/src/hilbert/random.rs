use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{orthonormalize_columns, Matrix, Observable, StateVector, Unitary, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    State,
    Unitary,
    Hermitian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RandomSample {
    State(StateVector),
    Unitary(Unitary),
    Hermitian(Observable),
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex standard normal, `E|z|^2 = 1`.
pub(crate) fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn gaussian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let data = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    Matrix::from_vec(dim, dim, data).expect("square shape")
}

/// Seeded random state, unitary (orthonormalized Gaussian, positive `R`
/// diagonal) or Hermitian matrix `(G + G^dag)/2`.
///
/// # Panics
/// If `dim == 0`.
pub fn sample_random(kind: RandomKind, dim: usize, seed: u64) -> RandomSample {
    match kind {
        RandomKind::State => RandomSample::State(sample_random_state(dim, seed)),
        RandomKind::Unitary => RandomSample::Unitary(sample_random_unitary(dim, seed)),
        RandomKind::Hermitian => RandomSample::Hermitian(sample_random_hermitian(dim, seed)),
    }
}

pub fn sample_random_state(dim: usize, seed: u64) -> StateVector {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = rng(seed);
    let amps = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
    StateVector::normalized(amps).expect("Gaussian vector is nonzero")
}

pub fn sample_random_unitary(dim: usize, seed: u64) -> Unitary {
    assert!(dim >= 1, "dimension must be positive");
    let g = gaussian_matrix(dim, &mut rng(seed));
    Unitary::new(orthonormalize_columns(&g)).expect("Gram-Schmidt output is unitary")
}

pub fn sample_random_hermitian(dim: usize, seed: u64) -> Observable {
    assert!(dim >= 1, "dimension must be positive");
    let g = gaussian_matrix(dim, &mut rng(seed));
    let h = (&g + &g.adjoint()).scale(C64::new(0.5, 0.0));
    Observable::new(h).expect("(G + G^dag)/2 is Hermitian")
}
