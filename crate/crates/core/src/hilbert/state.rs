use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{C64, NORM_TOL};
use crate::error::{Error, Result};

/// Normalized pure state `sum_n z_n |n>` over the global lexicographic basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    factor_dims: Option<Vec<usize>>,
}

impl StateVector {
    /// Takes amplitudes that are already normalized to 1e-12.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Shape("empty state".into()));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            amplitudes,
            factor_dims: None,
        })
    }

    /// Rescales to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Shape("empty state".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self {
            amplitudes,
            factor_dims: None,
        })
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::SlotOutOfRange {
                slot: index,
                n_factors: dim,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn with_factor_dims(mut self, factor_dims: Vec<usize>) -> Result<Self> {
        let product: usize = factor_dims.iter().product();
        if product != self.dim() || factor_dims.contains(&0) {
            return Err(Error::FactorDims {
                factors: factor_dims,
                dim: self.dim(),
            });
        }
        self.factor_dims = Some(factor_dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn factor_dims(&self) -> Option<&[usize]> {
        self.factor_dims.as_deref()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiply by a global phase `e^{i alpha}`.
    pub fn with_phase(&self, alpha: f64) -> StateVector {
        let ph = C64::from_polar(1.0, alpha);
        StateVector {
            amplitudes: self.amplitudes.iter().map(|z| z * ph).collect(),
            factor_dims: self.factor_dims.clone(),
        }
    }

    /// `|phi><phi|`.
    pub fn density_matrix(&self) -> super::Matrix {
        let d = self.dim();
        let mut m = super::Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Comparison modulo a global phase: aligns on the largest amplitude of
    /// `self` before taking the max-abs difference.
    pub fn max_abs_diff_up_to_phase(&self, other: &StateVector) -> f64 {
        super::max_abs_diff_up_to_phase(&self.amplitudes, &other.amplitudes)
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.amplitudes.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let amps = Vec::<C64>::deserialize(d)?;
        StateVector::new(amps).map_err(D::Error::custom)
    }
}
