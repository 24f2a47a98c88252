//! The learning iteration `U_{k+1} = U_k + K·(Y_d − G·U_k)` as an equation
//! solver, together with the closed-form description of everything it can
//! converge to.

use crate::error::{Error, Result};
use crate::gain::{verify_gain, GainSpec};
use crate::linalg::{invert_with, orthonormal_complement};
use crate::matrix::{Matrix, Tolerance};
use crate::subspace::{is_trackable, project_trackable, SubspaceDecomposition};

pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `Y_d ∈ span G`; the limit solves `G·U = Y_d` exactly.
    Solvable,
    /// `Y_d ∉ span G`; the limit minimizes `‖G·U − Y_d‖₂`.
    LeastSquares,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ToleranceMet,
    MaxIterations,
}

/// Per-iteration record of a learning run.
///
/// `errors[k]` is the stopping-test error `target − Y_k`: the target is `Y_d`
/// for solvable problems and `H₁F₁ᵀY_d` otherwise. The input update always
/// uses `Y_d − Y_k`; the two differ by the constant uncontrollable part,
/// which `K = K̂F₁ᵀ` maps to zero.
#[derive(Debug, Clone)]
pub struct IlcTrace {
    pub inputs: Vec<Matrix>,
    pub outputs: Vec<Matrix>,
    pub errors: Vec<Matrix>,
    /// Number of input updates performed.
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
}

impl IlcTrace {
    pub fn error_history(&self) -> Vec<f64> {
        self.errors.iter().map(Matrix::max_abs).collect()
    }

    pub fn last_input(&self) -> &Matrix {
        self.inputs.last().expect("trace holds the initial input")
    }
}

/// Every input the iteration can converge to, for one reference.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub classification: Classification,
    /// The limit reached from this run's initial input.
    pub particular: Matrix,
    /// `U_∞ = P·U₀ + c` over all initial inputs.
    pub affine_p: Matrix,
    pub affine_c: Matrix,
    /// Orthonormal basis of `null(G)`.
    pub null_basis: Matrix,
    /// `‖Y_d − G·particular‖₂`.
    pub residual_norm: f64,
}

/// One update: `E_k = Y_d − G·U_k`, `U_{k+1} = U_k + K·E_k`.
pub fn iterate_once(g: &Matrix, yd: &Matrix, uk: &Matrix, k: &Matrix) -> Result<(Matrix, Matrix)> {
    let (p, q) = g.shape();
    yd.require_column(p, "reference")?;
    uk.require_column(q, "input")?;
    k.require_shape(q, p, "gain K")?;
    let e = yd - &(g * uk);
    let next = uk + &(k * &e);
    Ok((next, e))
}

/// `P = I − K̂(F₁ᵀGK̂)⁻¹F₁ᵀG` and `c = K̂(F₁ᵀGK̂)⁻¹F₁ᵀY_d`.
pub fn solution_affine_map(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    spec: &GainSpec,
    yd: &Matrix,
) -> Result<(Matrix, Matrix)> {
    let (p, q) = g.shape();
    if dec.dim() != p {
        return Err(Error::dims("decomposition does not match G"));
    }
    yd.require_column(p, "reference")?;
    spec.k_hat.require_shape(q, dec.rank, "K_hat")?;
    let f1t = dec.f1.transpose();
    let w = &f1t * g;
    let s = &w * &spec.k_hat;
    let s_inv = invert_with(&s, &Tolerance::default()).map_err(|_| Error::SingularGram)?;
    let left = &spec.k_hat * &s_inv;
    let proj = &left * &w;
    let affine_p = &Matrix::identity(q) - &proj;
    let affine_c = &left * &(&f1t * yd);
    Ok((affine_p, affine_c))
}

/// Limit of the iteration started from `u0`.
pub fn closed_form_limit(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    spec: &GainSpec,
    u0: &Matrix,
    yd: &Matrix,
) -> Result<Matrix> {
    u0.require_column(g.cols(), "initial input")?;
    let (p_map, c) = solution_affine_map(dec, g, spec, yd)?;
    Ok(&(&p_map * u0) + &c)
}

/// Orthonormal basis of `null(G)`, `q × (q − rank)`.
pub fn null_space_basis(g: &Matrix, tol: &Tolerance) -> Matrix {
    orthonormal_complement(&g.transpose(), tol)
}

/// Whether `GMG = G` and `GM` is symmetric, both to `1e-8` relative.
pub fn check_one_three_inverse(g: &Matrix, m: &Matrix, _tol: &Tolerance) -> Result<bool> {
    let (p, q) = g.shape();
    m.require_shape(q, p, "candidate inverse")?;
    let gm = g * m;
    let gmg = &gm * g;
    let scale_g = g.max_abs().max(1.0);
    let scale_gm = gm.max_abs().max(1.0);
    let reproduces = gmg.max_abs_diff(g).unwrap() <= 1e-8 * scale_g;
    let symmetric = gm.max_abs_diff(&gm.transpose()).unwrap() <= 1e-8 * scale_gm;
    Ok(reproduces && symmetric)
}

/// Runs the learning iteration until the stopping error drops below
/// `tol.conv_tol` (infinity norm) or `max_iter` updates have been applied.
///
/// Solvable references stop on `Y_d − Y_k`; the others stop on
/// `H₁F₁ᵀY_d − Y_k` and converge to a least-squares solution. Hitting
/// `max_iter` yields [`Error::NotConverged`] carrying the partial trace.
pub fn solve(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    yd: &Matrix,
    u0: &Matrix,
    spec: &GainSpec,
    tol: &Tolerance,
    max_iter: usize,
) -> Result<(SolutionSet, IlcTrace)> {
    let (p, q) = g.shape();
    if dec.dim() != p {
        return Err(Error::dims("decomposition does not match G"));
    }
    yd.require_column(p, "reference")?;
    u0.require_column(q, "initial input")?;
    spec.k.require_shape(q, p, "gain K")?;

    let check = verify_gain(dec, g, spec, tol)?;
    if !check.valid {
        return Err(Error::GainInvalid(format!(
            "closed-loop spectral radius {} is not below 1",
            check.rho
        )));
    }

    let classification = if is_trackable(dec, yd, tol)? {
        Classification::Solvable
    } else {
        if !dec.orthogonal {
            return Err(Error::GainInvalid(
                "least-squares limits need a decomposition with H1ᵀH2 = 0".into(),
            ));
        }
        let leak = &spec.k * &dec.h2;
        if leak.max_abs() > 1e-8 * spec.k.max_abs().max(1.0) {
            return Err(Error::GainInvalid(
                "gain does not annihilate the untrackable subspace; iterates would drift".into(),
            ));
        }
        Classification::LeastSquares
    };
    let target = match classification {
        Classification::Solvable => yd.clone(),
        Classification::LeastSquares => project_trackable(dec, yd)?,
    };

    let mut trace = IlcTrace {
        inputs: Vec::new(),
        outputs: Vec::new(),
        errors: Vec::new(),
        iterations: 0,
        converged: false,
        termination: Termination::MaxIterations,
    };
    let mut u = u0.clone();
    loop {
        let y = g * &u;
        let stop_error = &target - &y;
        let done = stop_error.max_abs() < tol.conv_tol;
        let update_error = yd - &y;
        trace.inputs.push(u.clone());
        trace.outputs.push(y);
        trace.errors.push(stop_error);
        if done {
            trace.converged = true;
            trace.termination = Termination::ToleranceMet;
            break;
        }
        if trace.iterations == max_iter {
            return Err(Error::NotConverged {
                trace: Box::new(trace),
            });
        }
        u = &u + &(&spec.k * &update_error);
        trace.iterations += 1;
    }

    let (affine_p, affine_c) = solution_affine_map(dec, g, spec, yd)?;
    let particular = trace.last_input().clone();
    let residual_norm = (yd - &(g * &particular)).norm_fro();
    let set = SolutionSet {
        classification,
        particular,
        affine_p,
        affine_c,
        null_basis: null_space_basis(g, tol),
        residual_norm,
    };
    Ok((set, trace))
}
