//! Finite-horizon state-space plants recast as a single static map.
//!
//! A plant `x(t+1) = A·x(t) + B·u(t)`, `y(t) = C·x(t)` with `x(0) = 0` and
//! relative degree `r` maps the stacked inputs `u(0..N−1)` to the stacked
//! outputs `y(r..N+r−1)` through a lower block-triangular Toeplitz matrix
//! built from the Markov parameters `G_i = C·A^{i+r−1}·B`.

use crate::error::{Error, Result};
use crate::gain::{closed_loop, contract_gain};
use crate::linalg::spectral_radius;
use crate::matrix::{Matrix, Tolerance};
use crate::solver::{IlcTrace, Termination};
use crate::subspace::SubspaceDecomposition;

#[derive(Debug, Clone)]
pub struct StateSpaceSystem {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub horizon: usize,
}

impl StateSpaceSystem {
    pub fn new(a: Matrix, b: Matrix, c: Matrix, horizon: usize) -> Result<Self> {
        let ns = a.rows();
        if !a.is_square() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if b.rows() != ns || c.cols() != ns {
            return Err(Error::dims(format!(
                "A is {ns}x{ns} but B is {}x{} and C is {}x{}",
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols()
            )));
        }
        if horizon == 0 || b.cols() == 0 || c.rows() == 0 || ns == 0 {
            return Err(Error::dims("horizon and all dimensions must be positive"));
        }
        Ok(Self { a, b, c, horizon })
    }

    pub fn states(&self) -> usize {
        self.a.rows()
    }

    pub fn inputs(&self) -> usize {
        self.b.cols()
    }

    pub fn outputs(&self) -> usize {
        self.c.rows()
    }
}

/// Smallest `r ≤ max_r` such that every row of `C·A^{r−1}·B` is nonzero and
/// all earlier Markov parameters vanish.
pub fn relative_degree(sys: &StateSpaceSystem, max_r: usize, tol: &Tolerance) -> Result<usize> {
    let c_norm = sys.c.norm_inf();
    let mut state = sys.b.clone(); // A^j·B
    let mut first_nonzero: Vec<Option<usize>> = vec![None; sys.outputs()];
    for j in 0..max_r {
        let markov = &sys.c * &state;
        let threshold = tol.rank_tol * c_norm * state.norm_inf();
        for (i, slot) in first_nonzero.iter_mut().enumerate() {
            if slot.is_none() && markov.row(i).iter().any(|v| v.abs() > threshold) {
                *slot = Some(j + 1);
            }
        }
        if first_nonzero.iter().any(Option::is_some) {
            let r = j + 1;
            if first_nonzero.iter().all(|s| *s == Some(r)) {
                return Ok(r);
            }
            let silent: Vec<usize> = first_nonzero
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_none())
                .map(|(i, _)| i)
                .collect();
            return Err(Error::NoUniformRelativeDegree(format!(
                "output channels {silent:?} are still zero when others respond at delay {r}"
            )));
        }
        state = &sys.a * &state;
    }
    Err(Error::NoUniformRelativeDegree(format!(
        "all Markov parameters up to delay {max_r} vanish"
    )))
}

#[derive(Debug, Clone)]
pub struct LiftedSystem {
    pub source: StateSpaceSystem,
    pub relative_degree: usize,
    /// `G_0 .. G_{N−1}`, each `n_o × n_i`.
    pub markov: Vec<Matrix>,
    /// `(N·n_o) × (N·n_i)` block Toeplitz map.
    pub g: Matrix,
}

pub fn build_lifted(sys: &StateSpaceSystem, tol: &Tolerance) -> Result<LiftedSystem> {
    let r = relative_degree(sys, sys.states().max(1), tol)?;
    let n = sys.horizon;
    let (no, ni) = (sys.outputs(), sys.inputs());

    let mut state = sys.b.clone();
    for _ in 1..r {
        state = &sys.a * &state;
    }
    let mut markov = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            state = &sys.a * &state;
        }
        markov.push(&sys.c * &state);
    }

    let mut g = Matrix::zeros(n * no, n * ni);
    for t in 0..n {
        for s in 0..=t {
            g.set_block(t * no, s * ni, &markov[t - s]);
        }
    }
    Ok(LiftedSystem {
        source: sys.clone(),
        relative_degree: r,
        markov,
        g,
    })
}

/// Stacks reference samples (row `t` holds `y_d(r+t)ᵀ`) into a column.
pub fn lift_reference(samples: &Matrix, horizon: usize) -> Result<Matrix> {
    if samples.rows() != horizon {
        return Err(Error::WrongSampleCount {
            expected: horizon,
            found: samples.rows(),
        });
    }
    Ok(Matrix::column_vector(samples.as_slice()))
}

/// Inverse of [`lift_reference`]: one row per time step.
pub fn unlift(lifted: &Matrix, width: usize) -> Result<Matrix> {
    if lifted.cols() != 1 || width == 0 || !lifted.rows().is_multiple_of(width) {
        return Err(Error::dims(format!(
            "cannot split a {}x{} vector into rows of {width}",
            lifted.rows(),
            lifted.cols()
        )));
    }
    Matrix::new(lifted.rows() / width, width, lifted.as_slice().to_vec())
}

/// `y_d(t) − C·Aᵗ·x₀` for the samples at `t = r .. N+r−1`, so that a
/// reference generated from a nonzero initial state can be tracked by the
/// zero-initial-state model.
pub fn shift_reference_for_initial_state(
    sys: &StateSpaceSystem,
    relative_degree: usize,
    samples: &Matrix,
    x0: &Matrix,
) -> Result<Matrix> {
    x0.require_column(sys.states(), "initial state")?;
    samples.require_shape(sys.horizon, sys.outputs(), "reference samples")?;
    let mut free = x0.clone();
    for _ in 0..relative_degree {
        free = &sys.a * &free;
    }
    let mut out = samples.clone();
    for t in 0..sys.horizon {
        let y = &sys.c * &free;
        for i in 0..sys.outputs() {
            out[(t, i)] -= y[(i, 0)];
        }
        free = &sys.a * &free;
    }
    Ok(out)
}

/// Simulates the plant from `x(0) = 0` and returns the lifted outputs at
/// `t = r .. N+r−1` for the lifted input `u`.
pub fn simulate(lifted: &LiftedSystem, u: &Matrix) -> Result<Matrix> {
    let sys = &lifted.source;
    let (n, ni, no) = (sys.horizon, sys.inputs(), sys.outputs());
    u.require_column(n * ni, "lifted input")?;
    let r = lifted.relative_degree;
    let mut x = Matrix::zeros(sys.states(), 1);
    let mut y = Matrix::zeros(n * no, 1);
    for t in 0..n + r {
        if t >= r {
            let yt = &sys.c * &x;
            for i in 0..no {
                y[((t - r) * no + i, 0)] = yt[(i, 0)];
            }
        }
        if t + 1 == n + r {
            break;
        }
        let mut next = &sys.a * &x;
        if t < n {
            let ut = u.block(t * ni, 0, ni, 1);
            next = &next + &(&sys.b * &ut);
        }
        x = next;
    }
    Ok(y)
}

/// The time-domain learning law: simulate each trial, then update every
/// input sample from the whole error record,
/// `u_{k+1}(t) = u_k(t) + Σ_i K_{t+1,i+1}·e_k(i+r)`.
///
/// `gain` is the lifted `(N·n_i) × (N·n_o)` matrix of blocks `K_{t+1,i+1}`.
/// It must satisfy `ρ(I − F₁ᵀG·K·H₁) < 1` for the supplied decomposition of
/// the lifted map. Stops early once `‖E_k‖∞ < tol.conv_tol`.
pub fn run_tracking(
    lifted: &LiftedSystem,
    dec: &SubspaceDecomposition,
    samples: &Matrix,
    gain: &Matrix,
    u0: &Matrix,
    iterations: usize,
    tol: &Tolerance,
) -> Result<IlcTrace> {
    let sys = &lifted.source;
    let (n, ni, no) = (sys.horizon, sys.inputs(), sys.outputs());
    samples.require_shape(n, no, "reference samples")?;
    gain.require_shape(n * ni, n * no, "lifted gain")?;
    u0.require_column(n * ni, "lifted initial input")?;
    if dec.dim() != n * no {
        return Err(Error::dims(
            "decomposition does not match the lifted system",
        ));
    }
    let k_hat = contract_gain(gain, dec)?;
    let rho = spectral_radius(&closed_loop(dec, &lifted.g, &k_hat)?, tol)?;
    if rho >= 1.0 {
        return Err(Error::GainInvalid(format!(
            "closed-loop spectral radius {rho} is not below 1"
        )));
    }

    let yd = lift_reference(samples, n)?;
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
        let y = simulate(lifted, &u)?;
        let mismatch = y.max_abs_diff(&(&lifted.g * &u)).unwrap();
        if mismatch > 1e-8 * (1.0 + y.max_abs()) {
            return Err(Error::LiftingMismatch(mismatch));
        }
        let e = &yd - &y;
        let done = e.max_abs() < tol.conv_tol;
        trace.inputs.push(u.clone());
        trace.outputs.push(y);
        trace.errors.push(e.clone());
        if done {
            trace.converged = true;
            trace.termination = Termination::ToleranceMet;
            break;
        }
        if trace.iterations == iterations {
            break;
        }
        let mut next = u.clone();
        for t in 0..n {
            for i in 0..n {
                for a in 0..ni {
                    let row = t * ni + a;
                    let mut acc = 0.0;
                    for b in 0..no {
                        acc += gain[(row, i * no + b)] * e[(i * no + b, 0)];
                    }
                    next[(row, 0)] += acc;
                }
            }
        }
        u = next;
        trace.iterations += 1;
    }
    Ok(trace)
}
