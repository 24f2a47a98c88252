use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ilc_lae::io::{
    self as docs, classification_label, emit_partial, emit_result, read_matrix_file, read_problem,
    termination_label, write_history, GainChoice, ProblemFile, ProblemKind, ReportWriter,
    EXIT_NOT_CONVERGED, EXIT_SOLVABLE, EXIT_USAGE,
};
use ilc_lae::lifted::{shift_reference_for_initial_state, LiftedSystem};
use ilc_lae::{
    build_decomposition, build_lifted, classify_system, custom_full_gain, design_deadbeat,
    design_exponential, is_trackable, least_squares_oracle, null_space_basis, project_trackable,
    run_tracking, solve, uncontrollable_component, verify_gain, Classification, Error, GainSpec,
    Matrix, StateSpaceSystem, SubspaceDecomposition, Tolerance,
};

#[derive(Parser)]
#[command(
    name = "ilc-lae",
    version,
    about = "Solve linear equations Y = G·U by iterative learning control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, trackability flags and subspace decomposition of a problem
    Analyze(CommonArgs),
    /// Solve G·U = Yd (least squares when inconsistent)
    Solve(SolveArgs),
    /// Emit the relative degree, Markov parameters and lifted matrix
    Lift(CommonArgs),
    /// Run finite-horizon tracking on a state-space problem
    Track(TrackArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Problem document
    problem: PathBuf,
    /// Relative rank threshold
    #[arg(long)]
    rank_tol: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IterationArgs {
    #[arg(long, value_parser = ["exponential", "deadbeat"])]
    gain: Option<String>,
    /// Closed-loop rate for exponential gains, in [0, 1)
    #[arg(long)]
    alpha: Option<f64>,
    /// Stopping threshold on the infinity norm of the error
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rank_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Initial input (CSV column or document with a `U0` block)
    #[arg(long)]
    initial_input: Option<PathBuf>,
    /// CSV of `iteration,error_inf_norm`
    #[arg(long)]
    history: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Problem document (omit when using --matrix/--rhs)
    problem: Option<PathBuf>,
    /// G as CSV
    #[arg(long, requires = "rhs", conflicts_with = "problem")]
    matrix: Option<PathBuf>,
    /// Yd as a CSV column
    #[arg(long, requires = "matrix")]
    rhs: Option<PathBuf>,
    /// Cross-check against the SVD reference solution
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    iter: IterationArgs,
}

#[derive(Args)]
struct TrackArgs {
    problem: PathBuf,
    #[command(flatten)]
    iter: IterationArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => analyze(&args),
        Command::Solve(args) => solve_cmd(&args),
        Command::Lift(args) => lift_cmd(&args),
        Command::Track(args) => track_cmd(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

type CmdResult = Result<i32, Error>;

fn usage(msg: &str) -> Error {
    Error::Usage(msg.to_string())
}

fn with_path<T>(path: &Path, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| match e {
        Error::Io(io) => Error::Usage(format!("{}: {io}", path.display())),
        other => other,
    })
}

fn load(path: &Path) -> Result<ProblemFile, Error> {
    with_path(path, read_problem(path))
}

fn load_matrix(path: &Path, key: &str) -> Result<Matrix, Error> {
    with_path(path, read_matrix_file(path, key))
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn tolerance(
    file: &ProblemFile,
    rank_tol: Option<f64>,
    conv_tol: Option<f64>,
) -> Result<Tolerance, Error> {
    Tolerance::new(
        rank_tol
            .or(file.options.rank_tol)
            .unwrap_or(Tolerance::DEFAULT_RANK_TOL),
        conv_tol
            .or(file.options.conv_tol)
            .unwrap_or(Tolerance::DEFAULT_CONV_TOL),
    )
}

fn state_space(file: &ProblemFile) -> Result<StateSpaceSystem, Error> {
    match &file.kind {
        ProblemKind::Lifted {
            a, b, c, horizon, ..
        } => StateSpaceSystem::new(a.clone(), b.clone(), c.clone(), *horizon),
        ProblemKind::Static { .. } => Err(usage(
            "this command needs a state-space problem (A, B, C, N)",
        )),
    }
}

fn decomposition(
    file: &ProblemFile,
    g: &Matrix,
    tol: &Tolerance,
) -> Result<SubspaceDecomposition, Error> {
    let n = match &file.kind {
        ProblemKind::Lifted { horizon, .. } => *horizon,
        ProblemKind::Static { .. } => 1,
    };
    let opts = &file.options;
    let h1 = match (&opts.h1, &opts.h1_selector) {
        (Some(h), _) => Some(h.clone()),
        (None, Some(z)) => Some(g.checked_mul(&Matrix::identity(n).kron(z))?),
        _ => None,
    };
    let h2 = match (&opts.h2, &opts.h2_block) {
        (Some(h), _) => Some(h.clone()),
        (None, Some(b)) => Some(Matrix::identity(n).kron(b)),
        _ => None,
    };
    match (h1, h2) {
        (Some(h1), Some(h2)) => SubspaceDecomposition::from_bases(g, h1, h2, tol),
        (None, None) => build_decomposition(g, tol),
        _ => Err(usage("H1 and H2 must be injected together")),
    }
}

fn gain_choice(args: &IterationArgs, file: &ProblemFile) -> GainChoice {
    args.gain
        .as_deref()
        .and_then(|g| g.parse().ok())
        .or(file.options.gain)
        .unwrap_or(GainChoice::Deadbeat)
}

fn design(
    args: &IterationArgs,
    file: &ProblemFile,
    dec: &SubspaceDecomposition,
    g: &Matrix,
    tol: &Tolerance,
) -> Result<GainSpec, Error> {
    match gain_choice(args, file) {
        GainChoice::Exponential => {
            let alpha = args.alpha.or(file.options.alpha).unwrap_or(0.5);
            design_exponential(dec, g, alpha, tol)
        }
        GainChoice::Deadbeat => design_deadbeat(dec, g, file.options.k_tilde.as_ref(), tol),
    }
}

fn initial_input(args: &IterationArgs, file: &ProblemFile, len: usize) -> Result<Matrix, Error> {
    let u0 = match &args.initial_input {
        Some(path) => load_matrix(path, "U0")?,
        None => file.u0.clone().unwrap_or_else(|| Matrix::zeros(len, 1)),
    };
    u0.require_len(len)?;
    Ok(u0)
}

trait RequireLen {
    fn require_len(&self, len: usize) -> Result<(), Error>;
}

impl RequireLen for Matrix {
    fn require_len(&self, len: usize) -> Result<(), Error> {
        if self.shape() != (len, 1) {
            return Err(Error::DimensionMismatch(format!(
                "initial input must be {len}x1, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }
}

fn analyze(args: &CommonArgs) -> CmdResult {
    let file = load(&args.problem)?;
    let tol = tolerance(&file, args.rank_tol, None)?;
    let (g, yd) = match &file.kind {
        ProblemKind::Static { g, yd } => (g.clone(), yd.clone()),
        ProblemKind::Lifted {
            reference, horizon, ..
        } => {
            let lifted = build_lifted(&state_space(&file)?, &tol)?;
            let yd = reference
                .as_ref()
                .map(|r| ilc_lae::lift_reference(r, *horizon))
                .transpose()?;
            (lifted.g, yd)
        }
    };
    let class = classify_system(&g, &tol);
    let mut w = ReportWriter::new();
    w.scalar("command", "analyze");
    w.scalar("rows", g.rows());
    w.scalar("cols", g.cols());
    w.scalar("rank", class.rank);
    w.scalar("trackability", class.trackability);
    w.scalar("realizability", class.realizability);
    w.scalar(
        "realizable_subspace_trivial",
        class.realizable_subspace_trivial,
    );
    if class.rank == 0 {
        w.comment("rank 0: completely uncontrollable, no decomposition");
    } else {
        let dec = decomposition(&file, &g, &tol)?;
        w.scalar("orthogonal_decomposition", dec.orthogonal);
        if let Some(yd) = &yd {
            w.scalar("trackable", is_trackable(&dec, yd, &tol)?);
            let proj = project_trackable(&dec, yd)?;
            w.number("projection_residual_norm", (yd - &proj).norm_fro());
            w.matrix("projected_reference", &proj);
            w.matrix(
                "uncontrollable_component",
                &uncontrollable_component(&dec, yd)?,
            );
        }
        w.matrix("H1", &dec.h1);
        w.matrix("F1", &dec.f1);
        w.matrix("H2", &dec.h2);
        w.matrix("F2", &dec.f2);
    }
    w.matrix("null_basis", &null_space_basis(&g, &tol));
    open_output(args.output.as_deref())?.write_all(w.finish().as_bytes())?;
    Ok(EXIT_SOLVABLE)
}

fn solve_cmd(args: &SolveArgs) -> CmdResult {
    let file = match (&args.problem, &args.matrix, &args.rhs) {
        (Some(p), _, _) => load(p)?,
        (None, Some(gp), Some(yp)) => ProblemFile {
            kind: ProblemKind::Static {
                g: load_matrix(gp, "G")?,
                yd: Some(load_matrix(yp, "Yd")?),
            },
            u0: None,
            options: Default::default(),
        },
        _ => return Err(usage("give a problem document or --matrix with --rhs")),
    };
    let (g, yd) = match &file.kind {
        ProblemKind::Static { g, yd: Some(yd) } => (g.clone(), yd.clone()),
        ProblemKind::Static { yd: None, .. } => return Err(usage("problem has no `Yd`")),
        ProblemKind::Lifted { .. } => return Err(usage("use `track` for state-space problems")),
    };
    if yd.shape() != (g.rows(), 1) {
        return Err(Error::DimensionMismatch(format!(
            "Yd must be {}x1, got {}x{}",
            g.rows(),
            yd.rows(),
            yd.cols()
        )));
    }
    let it = &args.iter;
    let tol = tolerance(&file, it.rank_tol, it.tol)?;
    let dec = decomposition(&file, &g, &tol)?;
    let spec = design(it, &file, &dec, &g, &tol)?;
    let check = verify_gain(&dec, &g, &spec, &tol)?;
    let u0 = initial_input(it, &file, g.cols())?;
    let max_iter = it
        .max_iter
        .or(file.options.max_iter)
        .unwrap_or(ilc_lae::solver::DEFAULT_MAX_ITER);

    let mut out = open_output(it.output.as_deref())?;
    match solve(&dec, &g, &yd, &u0, &spec, &tol, max_iter) {
        Ok((set, trace)) => {
            let mut extra = Vec::new();
            if args.verify {
                let oracle = least_squares_oracle(&g, &yd, &tol)?;
                let class_ok = oracle.solvable == (set.classification == Classification::Solvable);
                let res_ok = (oracle.residual_norm - set.residual_norm).abs()
                    <= 1e-8 * oracle.residual_norm.max(1.0);
                let diff = &set.particular - &oracle.min_norm_solution;
                let null_gap = (&g * &diff).max_abs();
                let null_ok =
                    null_gap <= 1e-8 * g.max_abs().max(1.0) * (1.0 + set.particular.max_abs());
                extra.push(("oracle_solvable".into(), oracle.solvable.to_string()));
                extra.push((
                    "oracle_residual_norm".into(),
                    docs::format_number(oracle.residual_norm),
                ));
                extra.push(("oracle_null_gap".into(), docs::format_number(null_gap)));
                let agree = class_ok && res_ok && null_ok;
                extra.push(("verify_agree".into(), agree.to_string()));
                if !agree {
                    eprintln!("warning: result disagrees with the SVD reference solution");
                }
            }
            if let Some(path) = &it.history {
                write_history(&trace, &mut File::create(path)?)?;
            }
            Ok(emit_result(
                &set,
                &trace,
                &check,
                &spec.certificate,
                &extra,
                &mut out,
            )?)
        }
        Err(Error::NotConverged { trace }) => {
            if let Some(path) = &it.history {
                write_history(&trace, &mut File::create(path)?)?;
            }
            let class = if is_trackable(&dec, &yd, &tol)? {
                Classification::Solvable
            } else {
                Classification::LeastSquares
            };
            eprintln!(
                "warning: stopped after {} iterations without convergence",
                trace.iterations
            );
            Ok(emit_partial(&trace, &check, Some(class), &mut out)?)
        }
        Err(e) => Err(e),
    }
}

fn lift_cmd(args: &CommonArgs) -> CmdResult {
    let file = load(&args.problem)?;
    let tol = tolerance(&file, args.rank_tol, None)?;
    let lifted = build_lifted(&state_space(&file)?, &tol)?;
    let mut w = ReportWriter::new();
    w.scalar("command", "lift");
    w.scalar("relative_degree", lifted.relative_degree);
    w.scalar("horizon", lifted.source.horizon);
    for (i, m) in lifted.markov.iter().enumerate() {
        w.matrix(&format!("markov_{i}"), m);
    }
    w.matrix("G", &lifted.g);
    if let ProblemKind::Lifted {
        reference: Some(r),
        horizon,
        ..
    } = &file.kind
    {
        w.matrix("Yd", &ilc_lae::lift_reference(r, *horizon)?);
    }
    open_output(args.output.as_deref())?.write_all(w.finish().as_bytes())?;
    Ok(EXIT_SOLVABLE)
}

fn tracking_gain(
    args: &IterationArgs,
    file: &ProblemFile,
    lifted: &LiftedSystem,
    dec: &SubspaceDecomposition,
    tol: &Tolerance,
) -> Result<GainSpec, Error> {
    let n = lifted.source.horizon;
    match (&file.options.k, &file.options.k0) {
        (Some(k), _) => custom_full_gain(dec, &lifted.g, k.clone(), tol),
        (None, Some(k0)) => custom_full_gain(dec, &lifted.g, Matrix::identity(n).kron(k0), tol),
        (None, None) => design(args, file, dec, &lifted.g, tol),
    }
}

fn track_cmd(args: &TrackArgs) -> CmdResult {
    let file = load(&args.problem)?;
    let it = &args.iter;
    let tol = tolerance(&file, it.rank_tol, it.tol)?;
    let sys = state_space(&file)?;
    let lifted = build_lifted(&sys, &tol)?;
    let mut samples = match &file.kind {
        ProblemKind::Lifted {
            reference: Some(r), ..
        } => r.clone(),
        _ => return Err(usage("tracking needs a `reference` block")),
    };
    if let Some(x0) = &file.options.x0 {
        samples = shift_reference_for_initial_state(&sys, lifted.relative_degree, &samples, x0)?;
    }
    let dec = decomposition(&file, &lifted.g, &tol)?;
    let spec = tracking_gain(it, &file, &lifted, &dec, &tol)?;
    let check = verify_gain(&dec, &lifted.g, &spec, &tol)?;
    let u0 = initial_input(it, &file, sys.horizon * sys.inputs())?;
    let iterations = it.max_iter.or(file.options.max_iter).unwrap_or(1000);
    let yd = ilc_lae::lift_reference(&samples, sys.horizon)?;
    let trackable = is_trackable(&dec, &yd, &tol)?;

    let trace = run_tracking(&lifted, &dec, &samples, &spec.k, &u0, iterations, &tol)?;
    if let Some(path) = &it.history {
        write_history(&trace, &mut File::create(path)?)?;
    }
    let mut w = ReportWriter::new();
    w.scalar("command", "track");
    w.scalar("relative_degree", lifted.relative_degree);
    w.scalar("rank", dec.rank);
    w.scalar(
        "classification",
        classification_label(if trackable {
            Classification::Solvable
        } else {
            Classification::LeastSquares
        }),
    );
    w.number("rho", check.rho);
    if let Some(nu) = check.nu {
        w.scalar("nu", nu);
    }
    w.scalar("termination", termination_label(trace.termination));
    w.scalar("converged", trace.converged);
    w.scalar("iterations", trace.iterations);
    w.number(
        "final_error_inf_norm",
        trace.errors.last().map_or(0.0, Matrix::max_abs),
    );
    w.matrix(
        "input",
        &ilc_lae::lifted::unlift(trace.last_input(), sys.inputs())?,
    );
    w.comment("columns: iteration, error_inf_norm");
    let h = trace.error_history();
    w.matrix(
        "error_history",
        &Matrix::from_fn(h.len(), 2, |i, j| if j == 0 { i as f64 } else { h[i] }),
    );
    open_output(it.output.as_deref())?.write_all(w.finish().as_bytes())?;
    Ok(if trace.converged {
        EXIT_SOLVABLE
    } else {
        EXIT_NOT_CONVERGED
    })
}
