//! Problem and result documents.
//!
//! Both directions use the same line-oriented text format:
//!
//! ```text
//! format: 1
//! # comment
//! gain: deadbeat
//! G: matrix 5 3
//!   1 0 1
//!   0 3 -3
//!   ...
//! Yd: vector 5
//!   1 3 4 2 2
//! ```
//!
//! A `matrix R C` block is followed by `R` rows of `C` numbers; a `vector N`
//! block by `N` numbers spread over any number of lines. Numbers are written
//! with 17 significant digits so that every `f64` survives a round trip.
//! Bare matrices may also be read from CSV.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gain::{Certificate, GainCheck};
use crate::matrix::Matrix;
use crate::solver::{Classification, IlcTrace, SolutionSet, Termination};

pub const FORMAT_VERSION: u32 = 1;

pub const EXIT_SOLVABLE: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_LEAST_SQUARES: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(String),
    Matrix(Matrix),
}

/// A parsed document: keyed scalars and matrices, with the line each key
/// appeared on.
#[derive(Debug, Clone, Default)]
pub struct Document {
    entries: HashMap<String, (usize, Value)>,
    order: Vec<String>,
}

impl Document {
    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |(l, _)| *l)
    }

    pub fn matrix(&self, key: &str) -> Result<Option<&Matrix>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((_, Value::Matrix(m))) => Ok(Some(m)),
            Some((line, Value::Scalar(_))) => Err(Error::parse(
                *line,
                format!("`{key}` must be a matrix or vector block"),
            )),
        }
    }

    pub fn scalar(&self, key: &str) -> Result<Option<&str>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((_, Value::Scalar(s))) => Ok(Some(s)),
            Some((line, Value::Matrix(_))) => Err(Error::parse(
                *line,
                format!("`{key}` must be a scalar value"),
            )),
        }
    }

    pub fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.scalar(key)? {
            None => Ok(None),
            Some(s) => s.parse::<T>().map(Some).map_err(|_| {
                Error::parse(self.line_of(key), format!("`{key}`: cannot parse `{s}`"))
            }),
        }
    }

    fn insert(&mut self, key: String, line: usize, value: Value) -> Result<()> {
        if self.entries.contains_key(&key) {
            return Err(Error::parse(line, format!("duplicate key `{key}`")));
        }
        self.order.push(key.clone());
        self.entries.insert(key, (line, value));
        Ok(())
    }
}

fn parse_numbers(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: f64 = t
                .parse()
                .map_err(|_| Error::parse(line, format!("`{t}` is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::parse(line, format!("`{t}` is not finite")))
            }
        })
        .collect()
}

fn parse_dim(tok: Option<&str>, line: usize) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, "missing block dimension"))?
        .parse()
        .map_err(|_| Error::parse(line, "block dimension must be a non-negative integer"))
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((n, l)) => {
            let version = l
                .strip_prefix("format:")
                .map(str::trim)
                .ok_or_else(|| Error::parse(n, "document must start with `format: 1`"))?;
            if version != FORMAT_VERSION.to_string() {
                return Err(Error::parse(
                    n,
                    format!("unsupported format version `{version}`"),
                ));
            }
        }
        None => return Err(Error::parse(0, "empty document")),
    }

    let mut doc = Document::default();
    while let Some((n, l)) = lines.next() {
        let (key, rest) = l
            .split_once(':')
            .ok_or_else(|| Error::parse(n, format!("expected `key: value`, got `{l}`")))?;
        let key = key.trim().to_string();
        let rest = rest.trim();
        let mut toks = rest.split_whitespace();
        let value = match toks.next() {
            Some("matrix") => {
                let r = parse_dim(toks.next(), n)?;
                let c = parse_dim(toks.next(), n)?;
                let mut data = Vec::with_capacity(r * c);
                for _ in 0..r {
                    let (rn, rl) = lines
                        .next()
                        .ok_or_else(|| Error::parse(n, format!("`{key}`: expected {r} rows")))?;
                    let row = parse_numbers(rl, rn)?;
                    if row.len() != c {
                        return Err(Error::parse(
                            rn,
                            format!("`{key}`: expected {c} entries, found {}", row.len()),
                        ));
                    }
                    data.extend(row);
                }
                Value::Matrix(Matrix::new(r, c, data)?)
            }
            Some("vector") => {
                let len = parse_dim(toks.next(), n)?;
                let mut data = Vec::with_capacity(len);
                while data.len() < len {
                    let (rn, rl) = lines.next().ok_or_else(|| {
                        Error::parse(n, format!("`{key}`: expected {len} entries"))
                    })?;
                    data.extend(parse_numbers(rl, rn)?);
                }
                if data.len() != len {
                    return Err(Error::parse(n, format!("`{key}`: expected {len} entries")));
                }
                Value::Matrix(Matrix::new(len, 1, data)?)
            }
            _ => Value::Scalar(rest.to_string()),
        };
        doc.insert(key, n, value)?;
    }
    Ok(doc)
}

/// Comma-separated rows; blank lines and `#` comments are skipped.
pub fn parse_csv_matrix(text: &str) -> Result<Matrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let row = parse_numbers(l, i + 1)?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(Error::parse(
                    i + 1,
                    format!("expected {c} columns, found {}", row.len()),
                ))
            }
            _ => {}
        }
        data.extend(row);
        rows += 1;
    }
    Matrix::new(rows, cols.unwrap_or(0), data)
}

/// Loads a matrix from a CSV file, or from the single matrix in a document.
pub fn read_matrix_file(path: &Path, key: &str) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        return parse_csv_matrix(&text);
    }
    let doc = parse_document(&text)?;
    doc.matrix(key)?
        .cloned()
        .ok_or_else(|| Error::parse(0, format!("`{path:?}` has no `{key}` block")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainChoice {
    Exponential,
    Deadbeat,
}

impl std::str::FromStr for GainChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exponential" => Ok(GainChoice::Exponential),
            "deadbeat" => Ok(GainChoice::Deadbeat),
            other => Err(format!("unknown gain mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ProblemOptions {
    pub gain: Option<GainChoice>,
    pub alpha: Option<f64>,
    pub rank_tol: Option<f64>,
    pub conv_tol: Option<f64>,
    pub max_iter: Option<usize>,
    /// Nilpotent closed loop for deadbeat designs.
    pub k_tilde: Option<Matrix>,
    pub h1: Option<Matrix>,
    pub h2: Option<Matrix>,
    /// Lifted problems: per-step gain block, `K = I ⊗ K0`.
    pub k0: Option<Matrix>,
    /// Lifted problems: full lifted gain.
    pub k: Option<Matrix>,
    /// Lifted problems: `H₁ = G·(I ⊗ Z0)`.
    pub h1_selector: Option<Matrix>,
    /// Lifted problems: `H₂ = I ⊗ B2`.
    pub h2_block: Option<Matrix>,
    /// Lifted problems: nonzero initial state of the reference trajectory.
    pub x0: Option<Matrix>,
}

#[derive(Debug, Clone)]
pub enum ProblemKind {
    Static {
        g: Matrix,
        yd: Option<Matrix>,
    },
    Lifted {
        a: Matrix,
        b: Matrix,
        c: Matrix,
        horizon: usize,
        /// Row `t` is `y_d(r+t)ᵀ`.
        reference: Option<Matrix>,
    },
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub kind: ProblemKind,
    pub u0: Option<Matrix>,
    pub options: ProblemOptions,
}

const STATIC_KEYS: &[&str] = &["G", "Yd"];
const LIFTED_KEYS: &[&str] = &[
    "A",
    "B",
    "C",
    "N",
    "reference",
    "K0",
    "K",
    "h1_selector",
    "h2_block",
    "x0",
];
const COMMON_KEYS: &[&str] = &[
    "U0", "gain", "alpha", "rank_tol", "conv_tol", "max_iter", "K_tilde", "H1", "H2",
];

fn expect_shape(doc: &Document, key: &str, m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::DimensionMismatch(format!(
            "line {}: `{key}` must be {rows}x{cols}, got {}x{}",
            doc.line_of(key),
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let doc = parse_document(text)?;
    for key in doc.keys() {
        if !(STATIC_KEYS.contains(&key) || LIFTED_KEYS.contains(&key) || COMMON_KEYS.contains(&key))
        {
            return Err(Error::parse(
                doc.line_of(key),
                format!("unknown key `{key}`"),
            ));
        }
    }
    let has_static = doc.contains("G");
    let has_lifted = ["A", "B", "C"].iter().any(|k| doc.contains(k));
    if has_static && has_lifted {
        return Err(Error::parse(
            doc.line_of("G").max(doc.line_of("A")),
            "ambiguous problem: both G and A/B/C are present",
        ));
    }

    let mut options = ProblemOptions {
        gain: match doc.scalar("gain")? {
            None => None,
            Some(s) => Some(
                s.parse()
                    .map_err(|e: String| Error::parse(doc.line_of("gain"), e))?,
            ),
        },
        alpha: doc.number("alpha")?,
        rank_tol: doc.number("rank_tol")?,
        conv_tol: doc.number("conv_tol")?,
        max_iter: doc.number("max_iter")?,
        k_tilde: doc.matrix("K_tilde")?.cloned(),
        h1: doc.matrix("H1")?.cloned(),
        h2: doc.matrix("H2")?.cloned(),
        ..Default::default()
    };
    if let Some(kt) = &options.k_tilde {
        if !kt.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "line {}: `K_tilde` must be square",
                doc.line_of("K_tilde")
            )));
        }
    }
    let u0 = doc.matrix("U0")?.cloned();

    let kind = if has_static {
        for key in LIFTED_KEYS {
            if doc.contains(key) {
                return Err(Error::parse(
                    doc.line_of(key),
                    format!("`{key}` only applies to lifted problems"),
                ));
            }
        }
        let g = doc.matrix("G")?.cloned().expect("checked above");
        let (p, q) = g.shape();
        if p == 0 || q == 0 {
            return Err(Error::parse(doc.line_of("G"), "`G` must be non-empty"));
        }
        let yd = doc.matrix("Yd")?.cloned();
        if let Some(y) = &yd {
            expect_shape(&doc, "Yd", y, p, 1)?;
        }
        if let Some(u) = &u0 {
            expect_shape(&doc, "U0", u, q, 1)?;
        }
        for key in ["H1", "H2"] {
            if let Some(h) = doc.matrix(key)? {
                if h.rows() != p {
                    return Err(Error::DimensionMismatch(format!(
                        "line {}: `{key}` must have {p} rows",
                        doc.line_of(key)
                    )));
                }
            }
        }
        ProblemKind::Static { g, yd }
    } else if has_lifted {
        for key in STATIC_KEYS {
            if doc.contains(key) {
                return Err(Error::parse(
                    doc.line_of(key),
                    format!("`{key}` only applies to static problems"),
                ));
            }
        }
        let get = |k: &str| -> Result<Matrix> {
            doc.matrix(k)?
                .cloned()
                .ok_or_else(|| Error::parse(0, format!("lifted problem is missing `{k}`")))
        };
        let (a, b, c) = (get("A")?, get("B")?, get("C")?);
        let horizon: usize = doc
            .number("N")?
            .ok_or_else(|| Error::parse(0, "lifted problem is missing `N`"))?;
        let ns = a.rows();
        expect_shape(&doc, "A", &a, ns, ns)?;
        expect_shape(&doc, "B", &b, ns, b.cols())?;
        expect_shape(&doc, "C", &c, c.rows(), ns)?;
        let (ni, no) = (b.cols(), c.rows());
        if horizon == 0 || ns == 0 || ni == 0 || no == 0 {
            return Err(Error::parse(
                doc.line_of("N"),
                "lifted dimensions must be positive",
            ));
        }
        let reference = doc.matrix("reference")?.cloned();
        if let Some(r) = &reference {
            expect_shape(&doc, "reference", r, horizon, no)?;
        }
        if let Some(u) = &u0 {
            expect_shape(&doc, "U0", u, horizon * ni, 1)?;
        }
        options.k0 = doc.matrix("K0")?.cloned();
        if let Some(k0) = &options.k0 {
            expect_shape(&doc, "K0", k0, ni, no)?;
        }
        options.k = doc.matrix("K")?.cloned();
        if let Some(k) = &options.k {
            expect_shape(&doc, "K", k, horizon * ni, horizon * no)?;
        }
        options.h1_selector = doc.matrix("h1_selector")?.cloned();
        if let Some(z) = &options.h1_selector {
            expect_shape(&doc, "h1_selector", z, ni, z.cols())?;
        }
        options.h2_block = doc.matrix("h2_block")?.cloned();
        if let Some(h) = &options.h2_block {
            expect_shape(&doc, "h2_block", h, no, h.cols())?;
        }
        options.x0 = doc.matrix("x0")?.cloned();
        if let Some(x) = &options.x0 {
            expect_shape(&doc, "x0", x, ns, 1)?;
        }
        ProblemKind::Lifted {
            a,
            b,
            c,
            horizon,
            reference,
        }
    } else {
        return Err(Error::parse(
            0,
            "problem needs either `G` or `A`, `B`, `C`, `N`",
        ));
    };

    Ok(ProblemFile { kind, u0, options })
}

pub fn read_problem(path: &Path) -> Result<ProblemFile> {
    parse_problem(&std::fs::read_to_string(path)?)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        // Keeps the sign of negative zero.
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return format!("{v:.0}");
    }
    format!("{v:.16e}")
}

/// Builder for result documents.
#[derive(Debug, Default)]
pub struct ReportWriter {
    buf: String,
}

impl ReportWriter {
    pub fn new() -> Self {
        let mut w = Self::default();
        w.scalar("format", FORMAT_VERSION);
        w
    }

    pub fn scalar(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.buf, "{key}: {value}");
        self
    }

    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        let v = format_number(value);
        self.scalar(key, v)
    }

    pub fn matrix(&mut self, key: &str, m: &Matrix) -> &mut Self {
        let _ = writeln!(self.buf, "{key}: matrix {} {}", m.rows(), m.cols());
        for i in 0..m.rows() {
            let row: Vec<String> = m.row(i).iter().map(|&v| format_number(v)).collect();
            let _ = writeln!(self.buf, "  {}", row.join(" "));
        }
        self
    }

    pub fn comment(&mut self, text: &str) -> &mut Self {
        let _ = writeln!(self.buf, "# {text}");
        self
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub fn classification_label(c: Classification) -> &'static str {
    match c {
        Classification::Solvable => "solvable",
        Classification::LeastSquares => "least-squares",
    }
}

pub fn termination_label(t: Termination) -> &'static str {
    match t {
        Termination::ToleranceMet => "tolerance-met",
        Termination::MaxIterations => "max-iterations",
    }
}

/// Process exit status for a finished (or abandoned) run.
pub fn exit_status(classification: Option<Classification>, termination: Termination) -> i32 {
    match (termination, classification) {
        (Termination::MaxIterations, _) => EXIT_NOT_CONVERGED,
        (Termination::ToleranceMet, Some(Classification::LeastSquares)) => EXIT_LEAST_SQUARES,
        (Termination::ToleranceMet, _) => EXIT_SOLVABLE,
    }
}

fn history_matrix(trace: &IlcTrace) -> Matrix {
    let h = trace.error_history();
    Matrix::from_fn(h.len(), 2, |i, j| if j == 0 { i as f64 } else { h[i] })
}

fn certificate_lines(w: &mut ReportWriter, check: &GainCheck, certificate: Option<&Certificate>) {
    match certificate {
        Some(Certificate::Deadbeat { nu }) => {
            w.scalar("certificate", "deadbeat");
            w.scalar("nu", nu);
        }
        _ => {
            w.scalar("certificate", "rate");
        }
    }
    w.number("rho", check.rho);
}

/// Writes the report for a converged solve.
pub fn emit_result(
    solution: &SolutionSet,
    trace: &IlcTrace,
    check: &GainCheck,
    certificate: &Certificate,
    extra: &[(String, String)],
    out: &mut dyn Write,
) -> std::io::Result<i32> {
    let mut w = ReportWriter::new();
    w.scalar("command", "solve");
    w.scalar(
        "classification",
        classification_label(solution.classification),
    );
    w.scalar("termination", termination_label(trace.termination));
    w.scalar("converged", trace.converged);
    w.scalar("iterations", trace.iterations);
    certificate_lines(&mut w, check, Some(certificate));
    w.number("residual_norm", solution.residual_norm);
    for (k, v) in extra {
        w.scalar(k, v);
    }
    w.matrix("particular", &solution.particular);
    w.matrix("affine_P", &solution.affine_p);
    w.matrix("affine_c", &solution.affine_c);
    w.matrix("null_basis", &solution.null_basis);
    w.comment("columns: iteration, error_inf_norm");
    w.matrix("error_history", &history_matrix(trace));
    out.write_all(w.finish().as_bytes())?;
    Ok(exit_status(
        Some(solution.classification),
        trace.termination,
    ))
}

/// Writes the report for a run abandoned at the iteration cap.
pub fn emit_partial(
    trace: &IlcTrace,
    check: &GainCheck,
    classification: Option<Classification>,
    out: &mut dyn Write,
) -> std::io::Result<i32> {
    let mut w = ReportWriter::new();
    w.scalar("command", "solve");
    if let Some(c) = classification {
        w.scalar("classification", classification_label(c));
    }
    w.scalar("termination", termination_label(trace.termination));
    w.scalar("converged", trace.converged);
    w.scalar("iterations", trace.iterations);
    certificate_lines(&mut w, check, None);
    w.matrix("last_input", trace.last_input());
    w.comment("columns: iteration, error_inf_norm");
    w.matrix("error_history", &history_matrix(trace));
    out.write_all(w.finish().as_bytes())?;
    Ok(EXIT_NOT_CONVERGED)
}

/// `iteration,error_inf_norm` CSV of a trace.
pub fn write_history(trace: &IlcTrace, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "iteration,error_inf_norm")?;
    for (k, e) in trace.error_history().iter().enumerate() {
        writeln!(out, "{k},{}", format_number(*e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE1: &str = "format: 1
# Example with a rank-deficient 5x3 system
gain: deadbeat
G: matrix 5 3
  1 0 1
  0 3 -3
  0 4 -4
  2 0 2
  2 0 2
Yd: vector 5
  1 3 4 2 2
U0: vector 3
  1 0 0
";

    #[test]
    fn parses_static_problem() {
        let p = parse_problem(EXAMPLE1).unwrap();
        match &p.kind {
            ProblemKind::Static { g, yd } => {
                assert_eq!(g.shape(), (5, 3));
                assert_eq!(yd.as_ref().unwrap().shape(), (5, 1));
                assert_eq!(g[(2, 2)], -4.0);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(p.options.gain, Some(GainChoice::Deadbeat));
        assert_eq!(p.u0.unwrap()[(0, 0)], 1.0);
    }

    #[test]
    fn rejects_mismatched_reference() {
        let text = "format: 1\nG: matrix 2 2\n1 0\n0 1\nYd: vector 3\n1 2 3\n";
        assert!(matches!(
            parse_problem(text),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rejects_ambiguous_problem() {
        let text = "format: 1\nG: matrix 1 1\n1\nA: matrix 1 1\n1\nB: matrix 1 1\n1\nC: matrix 1 1\n1\nN: 3\n";
        assert!(matches!(parse_problem(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "format: 1\nG: matrix 2 2\n1 0\n0 x\n";
        match parse_problem(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains('x'));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_problem("G: matrix 1 1\n1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_problem("format: 1\nG: matrix 1 1\n1\nG: matrix 1 1\n2\n"),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn parses_lifted_problem() {
        let text = "format: 1
A: matrix 1 1
  1
B: matrix 1 1
  1
C: matrix 1 1
  1
N: 3
reference: matrix 3 1
  1
  2
  3
K0: matrix 1 1
  0.5
";
        let p = parse_problem(text).unwrap();
        match p.kind {
            ProblemKind::Lifted {
                horizon, reference, ..
            } => {
                assert_eq!(horizon, 3);
                assert_eq!(reference.unwrap().shape(), (3, 1));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(p.options.k0.unwrap()[(0, 0)], 0.5);
    }

    #[test]
    fn csv_matrices() {
        let m = parse_csv_matrix("# G\n1,2,3\n4, 5, 6\n\n").unwrap();
        assert_eq!(m, Matrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]));
        assert!(parse_csv_matrix("1,2\n3\n").is_err());
    }

    #[test]
    fn exit_status_table() {
        use Classification::*;
        use Termination::*;
        assert_eq!(exit_status(Some(Solvable), ToleranceMet), 0);
        assert_eq!(exit_status(Some(LeastSquares), ToleranceMet), 2);
        assert_eq!(exit_status(Some(Solvable), MaxIterations), 3);
        assert_eq!(exit_status(Some(LeastSquares), MaxIterations), 3);
        assert_eq!(exit_status(None, MaxIterations), 3);
    }

    #[test]
    fn number_formatting_round_trips() {
        for v in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
            -0.0,
            0.0,
            7.0,
            -123456789.0,
            4.5e15,
        ] {
            let s = format_number(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }
}
