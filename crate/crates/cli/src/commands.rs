use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qvalues::continuum::{self, EPRParams, GridSystem};
use qvalues::dhvalue::{complete_unitary, dh_value, verify_dh_homomorphism, UnitaryCompletion};
use qvalues::hilbert::{partial_trace, purity};
use qvalues::ncvalue::{expectation_fn, nc_value, uncertainty};
use qvalues::trials;
use qvalues::twoqubit::{self, TwoQubitParams};
use qvalues::{Error, Matrix, Observable, StateVector, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Item, Outcome};

/// Problems with the invocation itself (exit status 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<Outcome, UsageError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Common {
    pub tolerance: f64,
    pub seed: u64,
}

fn params(common: Common, args: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(args).expect("flags serialize");
    if let Value::Object(map) = &mut v {
        map.insert("tolerance".into(), json!(common.tolerance));
        map.insert("seed".into(), json!(common.seed));
    }
    v
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QubitPairArgs {
    /// Entanglement parameter, 0 <= r <= 1.
    #[arg(long, default_value_t = 0.6)]
    pub r: f64,
    /// Relative phase, radians in [0, 2π).
    #[arg(long, default_value_t = 0.0)]
    pub zeta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta_a: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta_b: f64,
    #[arg(long, default_value_t = 0.0)]
    pub psi_a: f64,
    #[arg(long, default_value_t = 0.0)]
    pub psi_b: f64,
}

impl QubitPairArgs {
    fn params(&self) -> Result<TwoQubitParams, Error> {
        TwoQubitParams::new(
            self.r,
            self.zeta,
            self.theta_a,
            self.theta_b,
            self.psi_a,
            self.psi_b,
        )
    }

    fn has_rotations(&self) -> bool {
        [self.theta_a, self.theta_b, self.psi_a, self.psi_b]
            .iter()
            .any(|&x| x != 0.0)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValueArgs {
    /// `sigma1A`, `sigma1B`, `sigma3A`, `sigma3B`, or a path to a JSON matrix
    /// (rows of `[re, im]` pairs).
    #[arg(long, default_value = "sigma3A")]
    pub observable: String,
    /// JSON array of `[re, im]` amplitudes; overrides the qubit-pair flags.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: QubitPairArgs,
}

impl ValueArgs {
    fn state(&self) -> Result<StateVector, UsageError> {
        match &self.state {
            Some(path) => {
                let text = read(path)?;
                serde_json::from_str(&text)
                    .map_err(|e| UsageError(format!("{}: {e}", path.display())))
            }
            None => Ok(twoqubit::state_from_params(&self.pair.params()?)?),
        }
    }

    fn observable(&self) -> Result<Observable, UsageError> {
        if let Some(m) = twoqubit::local_observables().remove(self.observable.as_str()) {
            return Ok(Observable::new(m)?);
        }
        let path = Path::new(&self.observable);
        if !path.exists() {
            return Err(UsageError(format!(
                "unknown observable `{}` (expected one of {:?} or a JSON file)",
                self.observable,
                twoqubit::OBSERVABLE_NAMES
            )));
        }
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
    }
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn check_dims(b: &Observable, phi: &StateVector) -> Result<(), UsageError> {
    if b.dim() != phi.dim() {
        return Err(UsageError(format!(
            "observable has dimension {} but the state has dimension {}",
            b.dim(),
            phi.dim()
        )));
    }
    Ok(())
}

pub fn nc_value_cmd(common: Common, args: &ValueArgs) -> Run {
    let phi = args.state()?;
    let b = args.observable()?;
    check_dims(&b, &phi)?;
    let value = nc_value(&b, &phi)?;
    let mean = value.f.re;
    let second = expectation_fn(&b.matrix().matmul(b.matrix())?, &phi)?.re;
    let variance = second - mean * mean;

    let mut out = Outcome::new("nc-value", params(common, args));
    out.add("state", Item::Vector(phi.amplitudes().to_vec()));
    out.add("value", Item::Value(value.clone()));
    out.add("uncertainty", Item::Real(uncertainty(&value)));
    out.add("variance", Item::Real(variance));
    out.check("uncertainty_identity", (uncertainty(&value) - variance).abs(), common.tolerance);
    out.check("orthogonality", value.orthogonality_residual(&phi), common.tolerance);
    out.check("expectation_imaginary_part", value.f.im.abs(), common.tolerance);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionKind {
    /// `(U_A ⊗ U_B) U_q` from the qubit-pair parameters.
    UPsi,
    /// Deterministic Gram-Schmidt completion of the state.
    GramSchmidt,
    /// Gram-Schmidt completion rotated by a random unitary fixing the
    /// reference vector, drawn from `--seed`.
    Seeded,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DhArgs {
    #[arg(long, value_enum, default_value_t = CompletionKind::UPsi)]
    pub completion: CompletionKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub value: ValueArgs,
}

pub fn dh_value_cmd(common: Common, args: &DhArgs) -> Run {
    let phi = args.value.state()?;
    let b = args.value.observable()?;
    check_dims(&b, &phi)?;
    let comp = match args.completion {
        CompletionKind::UPsi => {
            if args.value.state.is_some() {
                return Err(UsageError(
                    "--completion u-psi needs the qubit-pair flags, not --state".into(),
                ));
            }
            UnitaryCompletion::from_unitary(twoqubit::u_psi(&args.value.pair.params()?)?, 0, "u-psi")?
        }
        CompletionKind::GramSchmidt => complete_unitary(&phi, None),
        CompletionKind::Seeded => complete_unitary(&phi, Some(common.seed)),
    };
    let value = dh_value(b.matrix(), &comp)?;
    let f = expectation_fn(&b, &phi)?;
    let column_residual = qvalues::hilbert::max_abs_diff(&comp.state(), phi.amplitudes());
    let spectrum = Observable::with_tolerance(value.matrix.clone(), 1e-10)?.eigenvalues();
    let spectrum_residual = spectrum
        .iter()
        .zip(b.eigenvalues())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let mut out = Outcome::new("dh-value", params(common, args));
    out.add("completion", Item::Text(comp.id().to_string()));
    out.add("value", Item::Matrix(value.matrix.clone()));
    out.add("reference_entry", Item::Complex(value.reference_entry(0)));
    out.add("expectation", Item::Complex(f));
    out.add("eigenvalues", Item::Reals(spectrum));
    out.check("completion_first_column", column_residual, common.tolerance);
    out.check("reference_entry", (value.reference_entry(0) - f).norm(), common.tolerance);
    out.check(
        "homomorphism_square",
        verify_dh_homomorphism(b.matrix(), b.matrix(), &comp)?,
        common.tolerance,
    );
    out.check("spectrum", spectrum_residual, 1e-8);
    Ok(out)
}

fn parse_dims(s: &str) -> Result<Vec<usize>, UsageError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| UsageError(format!("bad dimension `{t}` in `{s}`")))
        })
        .collect()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StarArgs {
    /// Comma-separated Hilbert space dimensions, cycled over the trials.
    #[arg(long, default_value = "2,4,8,16")]
    pub dims: String,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
}

pub fn star_check_cmd(common: Common, args: &StarArgs) -> Run {
    let dims = parse_dims(&args.dims)?;
    let sweep = trials::homomorphism_sweep(&dims, args.trials, common.seed)?;
    let mut out = Outcome::new("star-check", params(common, args));
    out.add("trials", Item::Count(sweep.trials));
    out.check("dh_product", sweep.dh_product, common.tolerance);
    out.check("nc_star_scalar", sweep.nc_star_scalar, common.tolerance);
    out.check("nc_product", sweep.nc_product, common.tolerance);
    out.check("uncertainty_identity", sweep.uncertainty_identity, common.tolerance);
    Ok(out)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LocalityArgs {
    /// Comma-separated factor dimensions of the composite system.
    #[arg(long, default_value = "2,2")]
    pub dims: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

pub fn locality_check_cmd(common: Common, args: &LocalityArgs) -> Run {
    let dims = parse_dims(&args.dims)?;
    let sweep = trials::locality_sweep(&dims, args.trials, common.seed)?;
    let mut out = Outcome::new("locality-check", params(common, args));
    out.add("trials", Item::Count(sweep.trials));
    out.add("max_residual", Item::Real(sweep.max_residual()));
    out.check("dh_invariance", sweep.dh_invariance, common.tolerance);
    out.check("nc_f_invariance", sweep.nc_f_invariance, common.tolerance);
    out.check("nc_transport", sweep.nc_transport, common.tolerance);
    Ok(out)
}

pub fn two_qubit_cmd(common: Common, args: &QubitPairArgs) -> Run {
    let p = args.params()?;
    let tol = common.tolerance;
    let phi = twoqubit::state_from_params(&p)?;
    let u = twoqubit::u_psi(&p)?;
    let comp = UnitaryCompletion::from_unitary(u.clone(), 0, "u-psi")?;

    let mut out = Outcome::new("two-qubit", params(common, args));
    out.add("state", Item::Vector(phi.amplitudes().to_vec()));
    out.add("entanglement", Item::Real(twoqubit::entanglement(&p)));

    let observables = twoqubit::local_observables();
    let mut dh = Vec::new();
    let mut nc = Vec::new();
    for name in twoqubit::OBSERVABLE_NAMES {
        dh.push((name, dh_value(&observables[name], &comp)?.matrix));
        nc.push((name, nc_value(&observables[name], &phi)?));
    }
    for (name, m) in &dh {
        out.add(format!("dh.{name}"), Item::Matrix(m.clone()));
    }
    let sigma3_shared = nc[2].1.max_abs_diff(&nc[3].1) <= tol;
    for (name, v) in &nc {
        if sigma3_shared && *name == "sigma3B" {
            continue;
        }
        let label = if sigma3_shared && *name == "sigma3A" {
            "nc.sigma3A=sigma3B".to_string()
        } else {
            format!("nc.{name}")
        };
        out.add(label, Item::Value(v.clone()));
    }

    let rho_a = partial_trace(&phi.density_matrix(), 0, &[2, 2])?;
    let rho_b = partial_trace(&phi.density_matrix(), 1, &[2, 2])?;
    out.add("reduced_density.A", Item::Matrix(rho_a.clone()));
    out.add("reduced_density.B", Item::Matrix(rho_b.clone()));
    out.add("purity", Item::Real(purity(&rho_a)));

    out.check(
        "u_psi_first_column",
        qvalues::hilbert::max_abs_diff(&u.matrix().column(0), phi.amplitudes()),
        tol,
    );
    let target_purity = (1.0 + p.r * p.r) / 2.0;
    out.check("purity_A", (purity(&rho_a) - target_purity).abs(), tol);
    out.check("purity_B", (purity(&rho_b) - target_purity).abs(), tol);

    if !args.has_rotations() {
        let fixture_dh = twoqubit::paper_fixture_dh(p.r, p.zeta)?;
        let fixture_nc = twoqubit::paper_fixture_nc(p.r, p.zeta)?;
        let printed = twoqubit::paper_fixture_dh_as_printed(p.r, p.zeta)?;
        for ((name, m), (_, v)) in dh.iter().zip(&nc) {
            out.check(format!("dh_closed_form.{name}"), m.max_abs_diff(&fixture_dh[*name]), tol);
            out.check(format!("nc_closed_form.{name}"), v.max_abs_diff(&fixture_nc[*name]), tol);
            out.add(
                format!("printed_table_deviation.{name}"),
                Item::Real(m.max_abs_diff(&printed[*name])),
            );
        }
        let diag = Matrix::diagonal(&[
            C64::new((1.0 + p.r) / 2.0, 0.0),
            C64::new((1.0 - p.r) / 2.0, 0.0),
        ]);
        out.check("reduced_density_A", rho_a.max_abs_diff(&diag), tol);
        out.check("reduced_density_B", rho_b.max_abs_diff(&diag), tol);

        if p.r < 1.0 {
            let c = twoqubit::collapse_analysis(p.r, p.zeta)?;
            out.add("collapse.inverse_schmidt_coefficients", Item::Reals(c.inverse_schmidt_coefficients.clone()));
            out.add("collapse.inverse_rank_A|B", Item::Count(c.inverse_rank_ab));
            out.add("collapse.pointer_rank_A|BC", Item::Count(c.pointer_rank_a_bc));
            out.add("collapse.pointer_rank_B|AC", Item::Count(c.pointer_rank_b_ac));
            out.add("collapse.pointer_rank_C|AB", Item::Count(c.pointer_rank_c_ab));
            out.add("collapse.cnot_rank_B|C", Item::Count(c.cnot_rank_b_c));
            out.check("collapse_to_e0", c.collapse_residual, tol);
            out.check("cnot_pointer_state", c.pointer_residual, tol);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EprArgs {
    /// Grid points per particle (even, >= 8).
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// Box length L.
    #[arg(long = "box", default_value_t = 64.0)]
    #[serde(rename = "box")]
    pub box_length: f64,
    /// Total momentum; snapped to the nearest multiple of 4π/L.
    #[arg(long, default_value_t = 0.9817477)]
    pub p: f64,
    /// Separation x1 - x2.
    #[arg(long, default_value_t = 8.0)]
    pub ro: f64,
    /// Width of the Gaussian regularizing the separation.
    #[arg(long, default_value_t = 2.0)]
    pub width: f64,
}

pub fn epr_grid_cmd(common: Common, args: &EprArgs) -> Run {
    let g = GridSystem::new(args.n, args.box_length)?;
    let p_total = g.snap_momentum(args.p);
    let ep = EPRParams {
        p_total,
        r_o: args.ro,
        width: args.width,
    };
    let rep = continuum::verify_epr(&g, &ep)?;
    let e = rep.expectations;

    let mut params = params(common, args);
    params["p_snapped"] = json!(p_total);
    let mut out = Outcome::new("epr-grid", params);
    out.add("spacing", Item::Real(rep.spacing));
    for (k, v) in [
        ("x1", e.x1),
        ("x2", e.x2),
        ("p1", e.p1),
        ("p2", e.p2),
        ("x", e.x),
        ("p", e.p),
        ("r", e.r),
        ("q", e.q),
    ] {
        out.add(format!("expectation.{k}"), Item::Real(v));
    }
    out.add("v_p_norm", Item::Real(rep.v_p_norm));
    out.add("v_r_norm_sqr", Item::Real(rep.v_r_norm_sqr));
    out.add("v_r_target", Item::Real(rep.v_r_target));
    out.add("min_image.mean", Item::Real(rep.min_image_mean));
    out.add("min_image.variance", Item::Real(rep.min_image_variance));
    out.add("schmidt_rank.particles", Item::Count(rep.particle_schmidt_rank));
    out.add("schmidt_rank.sheared", Item::Count(rep.sheared_schmidt_rank));

    for (k, v) in &rep.linearity {
        out.check(format!("linearity: {k}"), *v, 1e-12);
    }
    for (k, v) in &rep.uncertainty_identity {
        out.check(format!("uncertainty_identity.{k}"), *v, 1e-9);
    }
    out.check("v_p_norm", rep.v_p_norm, 1e-8);
    out.check(
        "v_r_norm_sqr_relative",
        (rep.v_r_norm_sqr - rep.v_r_target).abs() / rep.v_r_target,
        0.02,
    );
    out.check("x1_minus_x2_minus_ro", (e.x1 - e.x2 - ep.r_o).abs(), 1e-6);
    out.check("p1_plus_p2_minus_p", (e.p1 + e.p2 - p_total).abs(), 1e-6);
    out.check("p1_minus_p2_minus_2q", (e.p1 - e.p2 - 2.0 * e.q).abs(), 1e-6);
    out.check("x1_profile", rep.x1_profile_residual, 1e-10);
    out.check(
        "sheared_rank_minus_1",
        rep.sheared_schmidt_rank.abs_diff(1) as f64,
        0.0,
    );
    Ok(out)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FixtureArgs {
    /// Rewrite the fixture files instead of comparing against them.
    #[arg(long)]
    pub regen: bool,
    #[arg(long, default_value = "fixtures")]
    pub dir: PathBuf,
}

pub fn fixtures_cmd(common: Common, args: &FixtureArgs) -> Run {
    let mut out = Outcome::new("fixtures", params(common, args));
    if args.regen {
        fs::create_dir_all(&args.dir)
            .map_err(|e| UsageError(format!("{}: {e}", args.dir.display())))?;
    }
    let mut mismatched = 0usize;
    for (r, zeta) in twoqubit::fixture_grid() {
        let name = twoqubit::fixture_file_name(r, zeta);
        let path = args.dir.join(&name);
        let fresh = twoqubit::fixture_json(r, zeta)?;
        let status = if args.regen {
            fs::write(&path, &fresh).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            "written"
        } else {
            match fs::read_to_string(&path) {
                Ok(old) if old == fresh => "match",
                Ok(_) => {
                    mismatched += 1;
                    "differs"
                }
                Err(_) => {
                    mismatched += 1;
                    "missing"
                }
            }
        };
        out.add(name, Item::Text(status.into()));
    }
    out.check("mismatched_files", mismatched as f64, 0.0);
    Ok(out)
}
