//! Two particles on a periodic 1D grid.
//!
//! Each particle lives on `N` points `x_j = -L/2 + j L/N`; the joint basis
//! index is `i1 * N + i2`. Positions act diagonally, momenta spectrally
//! (`k = 2π m / L`, `m ∈ [-N/2, N/2)`), so no `N^2 x N^2` matrix is ever
//! built unless asked for with [`GridObservable::to_dense`].

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{self, singular_values, Matrix, Observable, Operator, StateVector, C64};
use crate::ncvalue::{expectation_fn, nc_value, uncertainty, NCValue};

/// Uniform periodic grid shared by both particles.
#[derive(Clone)]
pub struct GridSystem {
    n: usize,
    box_length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
}

impl fmt::Debug for GridSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSystem")
            .field("n", &self.n)
            .field("box_length", &self.box_length)
            .finish()
    }
}

impl PartialEq for GridSystem {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.box_length == other.box_length
    }
}

impl GridSystem {
    /// `n` points per particle (even, at least 8) on a box of length `box_length`.
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::OutOfRange {
                name: "n",
                value: n as f64,
                expected: "even and >= 8",
            });
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(Error::OutOfRange {
                name: "box_length",
                value: box_length,
                expected: "> 0",
            });
        }
        let mut planner = FftPlanner::new();
        let wavenumbers = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                TAU * m / box_length
            })
            .collect();
        Ok(Self {
            n,
            box_length,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            wavenumbers,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Total dimension `N^2`.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn position(&self, j: usize) -> f64 {
        -self.box_length / 2.0 + j as f64 * self.spacing()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.position(j)).collect()
    }

    /// Spectral wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// `(x1, x2)` of a joint basis index.
    pub fn coordinates(&self, index: usize) -> (f64, f64) {
        (self.position(index / self.n), self.position(index % self.n))
    }

    /// Smallest momentum quantum for which `e^{i p x / 2}` is periodic.
    pub fn total_momentum_quantum(&self) -> f64 {
        2.0 * TAU / self.box_length
    }

    /// Nearest total momentum `p` with `p/2` on the reciprocal lattice.
    pub fn snap_momentum(&self, p: f64) -> f64 {
        let q = self.total_momentum_quantum();
        q * (p / q).round()
    }

    /// `d` mapped into `[-L/2, L/2]`.
    pub fn wrap(&self, d: f64) -> f64 {
        d - self.box_length * (d / self.box_length).round()
    }

    fn spectral_line(&self, line: &mut [C64]) {
        self.forward.process(line);
        let scale = 1.0 / self.n as f64;
        for (z, k) in line.iter_mut().zip(&self.wavenumbers) {
            *z *= k * scale;
        }
        self.inverse.process(line);
    }

    fn momentum(&self, v: &[C64], particle: Particle) -> Vec<C64> {
        let n = self.n;
        let mut out = v.to_vec();
        match particle {
            Particle::Second => {
                for row in out.chunks_mut(n) {
                    self.spectral_line(row);
                }
            }
            Particle::First => {
                let mut line = vec![C64::new(0.0, 0.0); n];
                for col in 0..n {
                    for (i, z) in line.iter_mut().enumerate() {
                        *z = v[i * n + col];
                    }
                    self.spectral_line(&mut line);
                    for (i, z) in line.iter().enumerate() {
                        out[i * n + col] = *z;
                    }
                }
            }
        }
        out
    }

    fn position_times(&self, v: &[C64], particle: Particle) -> Vec<C64> {
        v.iter()
            .enumerate()
            .map(|(idx, z)| {
                let (x1, x2) = self.coordinates(idx);
                match particle {
                    Particle::First => z * x1,
                    Particle::Second => z * x2,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Particle {
    First,
    Second,
}

/// Real combination `a X1 + b X2 + c P1 + d P2`, applied matrix-free.
/// Real coefficients keep it Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct GridObservable {
    grid: GridSystem,
    coefficients: [f64; 4],
}

impl GridObservable {
    pub fn new(grid: &GridSystem, x1: f64, x2: f64, p1: f64, p2: f64) -> Self {
        Self {
            grid: grid.clone(),
            coefficients: [x1, x2, p1, p2],
        }
    }

    /// Coefficients of `(X1, X2, P1, P2)`.
    pub fn coefficients(&self) -> [f64; 4] {
        self.coefficients
    }

    pub fn grid(&self) -> &GridSystem {
        &self.grid
    }

    /// `a self + b other`.
    pub fn combine(&self, a: f64, other: &GridObservable, b: f64) -> Result<GridObservable> {
        if self.grid != other.grid {
            return Err(Error::Invalid("observables live on different grids".into()));
        }
        let mut c = [0.0; 4];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = a * self.coefficients[k] + b * other.coefficients[k];
        }
        Ok(Self {
            grid: self.grid.clone(),
            coefficients: c,
        })
    }

    /// Dense matrix, built column by column. Limited to `N <= 32`.
    pub fn to_dense(&self) -> Result<Observable> {
        if self.grid.n > 32 {
            return Err(Error::Invalid(format!(
                "refusing to densify a {0}x{0} grid operator",
                self.grid.dim()
            )));
        }
        let d = self.grid.dim();
        let mut m = Matrix::zeros(d, d);
        let mut e = vec![C64::new(0.0, 0.0); d];
        for j in 0..d {
            e[j] = C64::new(1.0, 0.0);
            for (i, z) in self.apply(&e).into_iter().enumerate() {
                m[(i, j)] = z;
            }
            e[j] = C64::new(0.0, 0.0);
        }
        // FFT round-off leaves ~1e-15 asymmetry
        let sym = (&m + &m.adjoint()).scale(C64::new(0.5, 0.0));
        if m.max_abs_diff(&sym) > 1e-10 {
            return Err(Error::NotHermitian {
                deviation: m.max_abs_diff(&sym),
            });
        }
        Observable::new(sym)
    }
}

impl Operator for GridObservable {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.grid.dim(), "vector length");
        let [a, b, c, d] = self.coefficients;
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        let mut add = |coef: f64, part: Vec<C64>| {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p * coef;
            }
        };
        if a != 0.0 {
            add(a, self.grid.position_times(v, Particle::First));
        }
        if b != 0.0 {
            add(b, self.grid.position_times(v, Particle::Second));
        }
        if c != 0.0 {
            add(c, self.grid.momentum(v, Particle::First));
        }
        if d != 0.0 {
            add(d, self.grid.momentum(v, Particle::Second));
        }
        out
    }

    fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        self.apply(v)
    }
}

/// Keys of [`canonical_observables`].
pub const OBSERVABLE_NAMES: [&str; 8] = ["X1", "X2", "P1", "P2", "X", "P", "R", "Q"];

/// Single-particle operators and the center-of-mass / relative
/// combinations `X = (X1+X2)/2`, `P = P1+P2`, `R = X1-X2`, `Q = (P1-P2)/2`.
pub fn canonical_observables(g: &GridSystem) -> BTreeMap<&'static str, GridObservable> {
    let o = |a, b, c, d| GridObservable::new(g, a, b, c, d);
    BTreeMap::from([
        ("X1", o(1.0, 0.0, 0.0, 0.0)),
        ("X2", o(0.0, 1.0, 0.0, 0.0)),
        ("P1", o(0.0, 0.0, 1.0, 0.0)),
        ("P2", o(0.0, 0.0, 0.0, 1.0)),
        ("X", o(0.5, 0.5, 0.0, 0.0)),
        ("P", o(0.0, 0.0, 1.0, 1.0)),
        ("R", o(1.0, -1.0, 0.0, 0.0)),
        ("Q", o(0.0, 0.0, 0.5, -0.5)),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EPRParams {
    /// Total momentum `p`.
    pub p_total: f64,
    /// Separation `x1 - x2`.
    pub r_o: f64,
    /// Width of the Gaussian standing in for `δ(x1 - x2 - r_o)`.
    pub width: f64,
}

impl EPRParams {
    pub fn validate(&self, g: &GridSystem) -> Result<()> {
        let q = g.total_momentum_quantum();
        let m = self.p_total / q;
        if !self.p_total.is_finite() || (m - m.round()).abs() > 1e-9 {
            return Err(Error::Incommensurate {
                p: self.p_total,
                box_length: g.box_length,
            });
        }
        let (lo, hi) = (3.0 * g.spacing(), g.box_length / 10.0);
        if !(lo..=hi).contains(&self.width) {
            return Err(Error::OutOfRange {
                name: "width",
                value: self.width,
                expected: "[3 * spacing, L / 10]",
            });
        }
        if !self.r_o.is_finite() {
            return Err(Error::OutOfRange {
                name: "r_o",
                value: self.r_o,
                expected: "finite",
            });
        }
        Ok(())
    }
}

/// `G(x1 - x2 - r_o) e^{i p (x1 + x2) / 2}` with `G` a periodic Gaussian,
/// `|G(d)|^2 ∝ exp(-d^2 / width^2)`, normalized on the grid.
pub fn epr_state(g: &GridSystem, p: &EPRParams) -> Result<StateVector> {
    p.validate(g)?;
    let two_s2 = 2.0 * p.width * p.width;
    let amps = (0..g.dim())
        .map(|idx| {
            let (x1, x2) = g.coordinates(idx);
            let d = g.wrap(x1 - x2 - p.r_o);
            let envelope: f64 = (-3..=3)
                .map(|k| {
                    let s = d + k as f64 * g.box_length;
                    (-s * s / two_s2).exp()
                })
                .sum();
            C64::from_polar(envelope, p.p_total * (x1 + x2) / 2.0)
        })
        .collect();
    StateVector::normalized(amps)?.with_factor_dims(vec![g.n, g.n])
}

/// Same as [`nc_value`]; pair with [`labeled_components`] for output.
pub fn grid_nc_value(b: &GridObservable, phi: &StateVector) -> Result<NCValue> {
    nc_value(b, phi)
}

/// `(x1, x2, V)` for every grid point.
pub fn labeled_components(g: &GridSystem, value: &NCValue) -> Vec<(f64, f64, C64)> {
    value
        .v
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let (x1, x2) = g.coordinates(idx);
            (x1, x2, v)
        })
        .collect()
}

/// `<B^2> - <B>^2`.
pub fn variance(b: &impl Operator, phi: &StateVector) -> Result<f64> {
    let f = expectation_fn(b, phi)?;
    let bz = b.apply(phi.amplitudes());
    let second: f64 = bz.iter().map(|z| z.norm_sqr()).sum();
    Ok(second - f.re * f.re)
}

/// Amplitudes as an `N x N` matrix indexed by `(i1, i2)`.
pub fn amplitude_matrix(g: &GridSystem, phi: &StateVector) -> Result<Matrix> {
    Matrix::from_vec(g.n, g.n, phi.amplitudes().to_vec())
}

/// Amplitudes re-indexed by `(i2, (i1 - i2) mod N)`, i.e. by the second
/// particle and the relative coordinate. A state that depends on `x1 - x2`
/// times a plane wave in `x1 + x2` has rank one in this layout.
pub fn sheared_amplitude_matrix(g: &GridSystem, phi: &StateVector) -> Result<Matrix> {
    let n = g.n;
    if phi.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: phi.dim(),
        });
    }
    let mut m = Matrix::zeros(n, n);
    for i1 in 0..n {
        for i2 in 0..n {
            m[(i2, (i1 + n - i2) % n)] = phi.amplitudes()[i1 * n + i2];
        }
    }
    Ok(m)
}

fn rank_above(m: &Matrix, tol: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > tol).count()
}

/// Singular-value threshold for the particle-cut ranks.
pub const SCHMIDT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectations {
    pub x1: f64,
    pub x2: f64,
    pub p1: f64,
    pub p2: f64,
    pub x: f64,
    pub p: f64,
    pub r: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub n_points: usize,
    pub box_length: f64,
    pub spacing: f64,
    pub params: EPRParams,
    /// Max-abs residual of each linear identity between values.
    pub linearity: BTreeMap<String, f64>,
    pub v_p_norm: f64,
    pub v_r_norm_sqr: f64,
    /// `width^2 / 2`, the relative-coordinate variance of the regularizer.
    pub v_r_target: f64,
    pub expectations: Expectations,
    /// `|uncertainty(value) - (<B^2> - <B>^2)|` per observable.
    pub uncertainty_identity: BTreeMap<String, f64>,
    /// Max-abs deviation of `V_X1` from `(x1 - <X1>) conj(phi)`.
    pub x1_profile_residual: f64,
    /// Mean and variance of `r_o + wrap(x1 - x2 - r_o)`.
    pub min_image_mean: f64,
    pub min_image_variance: f64,
    pub particle_schmidt_rank: usize,
    pub sheared_schmidt_rank: usize,
}

fn values(
    obs: &BTreeMap<&'static str, GridObservable>,
    phi: &StateVector,
) -> Result<BTreeMap<&'static str, NCValue>> {
    obs.iter()
        .map(|(&k, b)| Ok((k, grid_nc_value(b, phi)?)))
        .collect()
}

fn v_diff(a: &NCValue, b: &NCValue) -> f64 {
    hilbert::max_abs_diff(&a.v, &b.v)
}

/// NC values of the canonical observables at the EPR state, the linear
/// identities between them, and the eigenstate cancellation checks.
pub fn verify_epr(g: &GridSystem, p: &EPRParams) -> Result<GridReport> {
    let phi = epr_state(g, p)?;
    let obs = canonical_observables(g);
    let val = values(&obs, &phi)?;
    let lc = |terms: &[(f64, &str)]| {
        let parts: Vec<(f64, &NCValue)> = terms.iter().map(|&(c, k)| (c, &val[k])).collect();
        NCValue::linear_combination(&parts)
    };
    let x_lc = lc(&[(0.5, "X1"), (0.5, "X2")]);
    let p_lc = lc(&[(1.0, "P1"), (1.0, "P2")]);
    let r_lc = lc(&[(1.0, "X1"), (-1.0, "X2")]);
    let q_lc = lc(&[(0.5, "P1"), (-0.5, "P2")]);
    let linearity = BTreeMap::from([
        ("X = (X1+X2)/2".to_string(), val["X"].max_abs_diff(&x_lc)),
        ("P = P1+P2".to_string(), val["P"].max_abs_diff(&p_lc)),
        ("R = X1-X2".to_string(), val["R"].max_abs_diff(&r_lc)),
        ("Q = (P1-P2)/2".to_string(), val["Q"].max_abs_diff(&q_lc)),
        ("V_R = V_X1-V_X2".to_string(), v_diff(&val["R"], &r_lc)),
        ("V_P = V_P1+V_P2".to_string(), v_diff(&val["P"], &p_lc)),
    ]);

    let e = |k: &str| val[k].f.re;
    let expectations = Expectations {
        x1: e("X1"),
        x2: e("X2"),
        p1: e("P1"),
        p2: e("P2"),
        x: e("X"),
        p: e("P"),
        r: e("R"),
        q: e("Q"),
    };

    let mut uncertainty_identity = BTreeMap::new();
    for k in ["X1", "P1", "R", "Q"] {
        let var = variance(&obs[k], &phi)?;
        uncertainty_identity.insert(k.to_string(), (uncertainty(&val[k]) - var).abs());
    }

    let x1_bar = expectations.x1;
    let x1_profile_residual = val["X1"]
        .v
        .iter()
        .zip(phi.amplitudes())
        .enumerate()
        .map(|(idx, (v, z))| {
            let (x1, _) = g.coordinates(idx);
            (v - z.conj() * (x1 - x1_bar)).norm()
        })
        .fold(0.0, f64::max);

    let (mut mean, mut second) = (0.0, 0.0);
    for (idx, z) in phi.amplitudes().iter().enumerate() {
        let (x1, x2) = g.coordinates(idx);
        let rel = p.r_o + g.wrap(x1 - x2 - p.r_o);
        mean += z.norm_sqr() * rel;
        second += z.norm_sqr() * rel * rel;
    }

    Ok(GridReport {
        n_points: g.n,
        box_length: g.box_length,
        spacing: g.spacing(),
        params: *p,
        linearity,
        v_p_norm: val["P"].v_norm(),
        v_r_norm_sqr: uncertainty(&val["R"]),
        v_r_target: p.width * p.width / 2.0,
        expectations,
        uncertainty_identity,
        x1_profile_residual,
        min_image_mean: mean,
        min_image_variance: second - mean * mean,
        particle_schmidt_rank: rank_above(&amplitude_matrix(g, &phi)?, SCHMIDT_TOL),
        sheared_schmidt_rank: rank_above(&sheared_amplitude_matrix(g, &phi)?, SCHMIDT_TOL),
    })
}

/// `‖V_R‖^2` at each width, other parameters fixed.
pub fn width_sweep(g: &GridSystem, p_total: f64, r_o: f64, widths: &[f64]) -> Result<Vec<(f64, f64)>> {
    let r = GridObservable::new(g, 1.0, -1.0, 0.0, 0.0);
    widths
        .iter()
        .map(|&width| {
            let phi = epr_state(g, &EPRParams { p_total, r_o, width })?;
            Ok((width, uncertainty(&grid_nc_value(&r, &phi)?)))
        })
        .collect()
}

/// `[A, B] v = A(Bv) - B(Av)`.
pub fn commutator_action(a: &impl Operator, b: &impl Operator, v: &[C64]) -> Vec<C64> {
    let ab = a.apply(&b.apply(v));
    let ba = b.apply(&a.apply(v));
    ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
}

/// Centered product Gaussian `exp(-(x1^2 + x2^2) / (4 s^2))`, normalized.
pub fn gaussian_test_state(g: &GridSystem, s: f64) -> Result<StateVector> {
    let amps = (0..g.dim())
        .map(|idx| {
            let (x1, x2) = g.coordinates(idx);
            C64::new((-(x1 * x1 + x2 * x2) / (4.0 * s * s)).exp(), 0.0)
        })
        .collect();
    StateVector::normalized(amps)
}
