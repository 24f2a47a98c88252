//! Column-space / complement decomposition of the system matrix and the
//! trackability tests built on it.
//!
//! With `H = [H₁ H₂]` nonsingular, `span H₁ = span G`, and `F = [F₁ F₂]`
//! chosen so that `Fᵀ = H⁻¹`, the error `E` of the iteration splits into a
//! controllable part `F₁ᵀE` and an uncontrollable part `F₂ᵀE` that no input
//! can change.

use crate::error::{Error, Result};
use crate::linalg::{dual_basis, invert_with, orthonormal_complement, rank_of, PivotedQr};
use crate::matrix::{Matrix, Tolerance};

/// Relative slack applied to `rank_tol` when deciding span membership.
const MEMBERSHIP_SLACK: f64 = 100.0;

#[derive(Debug, Clone)]
pub struct SubspaceDecomposition {
    pub h1: Matrix,
    pub h2: Matrix,
    pub f1: Matrix,
    pub f2: Matrix,
    /// Rank of G, the column count of `h1`.
    pub rank: usize,
    /// True when `H₁ᵀH₂ = 0`, which least-squares optimality requires.
    pub orthogonal: bool,
}

impl SubspaceDecomposition {
    pub fn dim(&self) -> usize {
        self.h1.rows()
    }

    /// `H₁F₁ᵀ`, the projector onto `span G` along `span H₂`.
    pub fn trackable_projector(&self) -> Matrix {
        &self.h1 * &self.f1.transpose()
    }

    /// `H₂F₂ᵀ`, the complementary projector.
    pub fn untrackable_projector(&self) -> Matrix {
        &self.h2 * &self.f2.transpose()
    }

    /// Builds the decomposition from caller-chosen bases.
    ///
    /// `h1` must span the column space of `g` with full column rank and
    /// `[h1 h2]` must be nonsingular. `F` is taken from `[H₁ H₂]⁻¹`.
    pub fn from_bases(g: &Matrix, h1: Matrix, h2: Matrix, tol: &Tolerance) -> Result<Self> {
        let p = g.rows();
        let m = rank_of(g, tol);
        if m == 0 {
            return Err(Error::ZeroMatrix);
        }
        h1.require_shape(p, m, "H1")?;
        h2.require_shape(p, p - m, "H2")?;
        if rank_of(&g.hstack(&h1)?, tol) != m {
            return Err(Error::dims("span(H1) differs from span(G)"));
        }
        let h = h1.hstack(&h2)?;
        let f_t = invert_with(&h, tol)?;
        let f1 = f_t.rows_range(0, m).transpose();
        let f2 = f_t.rows_range(m, p).transpose();
        let cross = &h1.transpose() * &h2;
        let orthogonal = cross.max_abs() <= 1e-10 * h1.max_abs().max(1.0) * h2.max_abs().max(1.0);
        Ok(Self {
            h1,
            h2,
            f1,
            f2,
            rank: m,
            orthogonal,
        })
    }
}

/// Leading independent columns of `g`, scanning left to right.
///
/// A column is kept when its component orthogonal to the columns already
/// kept exceeds `rank_tol` times the largest column norm.
fn leading_independent_columns(g: &Matrix, tol: &Tolerance) -> Vec<usize> {
    let threshold = tol.rank_tol * g.column_norms().into_iter().fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut picked = Vec::new();
    for j in 0..g.cols() {
        let v = residual(&basis, g.column(j));
        let norm = norm2(&v);
        if norm > threshold && norm > 0.0 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
            picked.push(j);
        }
    }
    picked
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Part of `v` orthogonal to the orthonormal `basis`. Two passes of modified
/// Gram-Schmidt keep the result orthogonal.
fn residual(basis: &[Vec<f64>], mut v: Vec<f64>) -> Vec<f64> {
    for _ in 0..2 {
        for q in basis {
            let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(x, qi)| *x -= d * qi);
        }
    }
    v
}

/// Smallest fraction of a column's norm that is independent of the columns
/// before it; 1 for mutually orthogonal columns.
fn independence(g: &Matrix, cols: &[usize]) -> f64 {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut worst = 1.0f64;
    for &j in cols {
        let col = g.column(j);
        let full = norm2(&col);
        let v = residual(&basis, col);
        let norm = norm2(&v);
        if full == 0.0 || norm == 0.0 {
            return 0.0;
        }
        worst = worst.min(norm / full);
        basis.push(v.into_iter().map(|x| x / norm).collect());
    }
    worst
}

/// Below this independence the leading columns give a badly conditioned
/// `F₁` and the pivoted-QR choice is preferred when it does better.
const MIN_INDEPENDENCE: f64 = 0.1;

/// Columns spanning `span(G)`: the leading independent ones, unless those
/// are nearly dependent, in which case the pivoted QR selection.
fn basis_columns(g: &Matrix, m: usize, tol: &Tolerance) -> Vec<usize> {
    let leading = leading_independent_columns(g, tol);
    let lead_quality = if leading.len() == m {
        independence(g, &leading)
    } else {
        0.0
    };
    if lead_quality >= MIN_INDEPENDENCE {
        return leading;
    }
    let mut pivoted = PivotedQr::new(g).permutation()[..m].to_vec();
    pivoted.sort_unstable();
    if independence(g, &pivoted) > lead_quality {
        pivoted
    } else {
        leading
    }
}

/// `H₁` = independent columns of `G` in original order (see
/// `basis_columns`), `F₁ = H₁(H₁ᵀH₁)⁻¹`,
/// and `H₂ = F₂` an orthonormal basis of `span(G)^⊥`.
pub fn build_decomposition(g: &Matrix, tol: &Tolerance) -> Result<SubspaceDecomposition> {
    let m = rank_of(g, tol);
    if m == 0 {
        return Err(Error::ZeroMatrix);
    }
    let h1 = g.select_columns(&basis_columns(g, m, tol));
    let f1 = dual_basis(&h1, tol)?;
    let h2 = orthonormal_complement(&h1, tol);
    if h2.cols() != g.rows() - m {
        return Err(Error::SingularMatrix);
    }
    let f2 = h2.clone();
    Ok(SubspaceDecomposition {
        h1,
        h2,
        f1,
        f2,
        rank: m,
        orthogonal: true,
    })
}

/// `H₁F₁ᵀY_d = Y_d`, relative to `‖Y_d‖∞`.
pub fn is_trackable(dec: &SubspaceDecomposition, yd: &Matrix, tol: &Tolerance) -> Result<bool> {
    let projected = project_trackable(dec, yd)?;
    let scale = yd.max_abs();
    let gap = projected.max_abs_diff(yd).unwrap_or(f64::INFINITY);
    Ok(gap <= MEMBERSHIP_SLACK * tol.rank_tol.max(f64::EPSILON) * scale)
}

/// Trackability and realizability flags of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemClassification {
    pub rank: usize,
    /// Every reference is trackable: `rank G = p`.
    pub trackability: bool,
    /// Every reference is realizable: `rank G = p = q`.
    pub realizability: bool,
    /// Only the zero reference has a unique input: `rank G < q`.
    pub realizable_subspace_trivial: bool,
}

pub fn classify_system(g: &Matrix, tol: &Tolerance) -> SystemClassification {
    let rank = rank_of(g, tol);
    let (p, q) = g.shape();
    SystemClassification {
        rank,
        trackability: rank == p,
        realizability: rank == p && rank == q,
        realizable_subspace_trivial: rank < q,
    }
}

/// `F₂ᵀE`, the part of the error no input update can reach.
pub fn uncontrollable_component(dec: &SubspaceDecomposition, e: &Matrix) -> Result<Matrix> {
    e.require_column(dec.dim(), "error vector")?;
    Ok(&dec.f2.transpose() * e)
}

/// `H₁F₁ᵀY_d`: the reachable reference closest in the decomposition's metric
/// (the least-squares target when the decomposition is orthogonal).
pub fn project_trackable(dec: &SubspaceDecomposition, yd: &Matrix) -> Result<Matrix> {
    yd.require_column(dec.dim(), "reference")?;
    Ok(&dec.h1 * &(&dec.f1.transpose() * yd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Matrix {
        Matrix::from_rows(&[
            [1.0, 0.0, 1.0],
            [0.0, 3.0, -3.0],
            [0.0, 4.0, -4.0],
            [2.0, 0.0, 2.0],
            [2.0, 0.0, 2.0],
        ])
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn assert_close(a: &Matrix, b: &Matrix, eps: f64) {
        let d = a.max_abs_diff(b).expect("same shape");
        assert!(d <= eps, "diff {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn example_one_bases() {
        let dec = build_decomposition(&g1(), &tol()).unwrap();
        assert_eq!(dec.rank, 2);
        let h1 = Matrix::from_rows(&[[1.0, 0.0], [0.0, 3.0], [0.0, 4.0], [2.0, 0.0], [2.0, 0.0]]);
        assert_close(&dec.h1, &h1, 0.0);
        let f1 = Matrix::from_rows(&[
            [1.0 / 9.0, 0.0],
            [0.0, 3.0 / 25.0],
            [0.0, 4.0 / 25.0],
            [2.0 / 9.0, 0.0],
            [2.0 / 9.0, 0.0],
        ]);
        assert_close(&dec.f1, &f1, 1e-15);
        assert_eq!(dec.h2.shape(), (5, 3));
        assert!(dec.orthogonal);
    }

    #[test]
    fn identity_has_empty_complement() {
        let dec = build_decomposition(&Matrix::identity(3), &tol()).unwrap();
        assert_close(&dec.h1, &Matrix::identity(3), 0.0);
        assert_close(&dec.f1, &Matrix::identity(3), 1e-15);
        assert_eq!(dec.h2.shape(), (3, 0));
        assert_eq!(dec.f2.shape(), (3, 0));
        assert_close(&dec.trackable_projector(), &Matrix::identity(3), 1e-15);
    }

    #[test]
    fn one_dimensional_complement() {
        let g = Matrix::column_vector(&[1.0, 1.0]);
        let dec = build_decomposition(&g, &tol()).unwrap();
        assert_close(&dec.f1, &Matrix::column_vector(&[0.5, 0.5]), 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // Sign of a complement basis vector is arbitrary.
        let h2 = if dec.h2[(0, 0)] > 0.0 {
            dec.h2.clone()
        } else {
            dec.h2.scale(-1.0)
        };
        assert_close(&h2, &Matrix::column_vector(&[s, -s]), 1e-15);
    }

    #[test]
    fn zero_matrix_is_refused() {
        assert!(matches!(
            build_decomposition(&Matrix::zeros(3, 2), &tol()),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn trackability_examples() {
        let dec = build_decomposition(&g1(), &tol()).unwrap();
        let c1 = Matrix::column_vector(&[1.0, 3.0, 4.0, 2.0, 2.0]);
        let c2 = Matrix::column_vector(&[1.0, 2.0, 1.0, 1.0, 2.0]);
        assert!(is_trackable(&dec, &c1, &tol()).unwrap());
        assert!(!is_trackable(&dec, &c2, &tol()).unwrap());
        assert!(is_trackable(&dec, &Matrix::zeros(5, 1), &tol()).unwrap());
        assert!(is_trackable(&dec, &Matrix::zeros(4, 1), &tol()).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = classify_system(&g1(), &tol());
        assert_eq!(
            (
                c.rank,
                c.trackability,
                c.realizability,
                c.realizable_subspace_trivial
            ),
            (2, false, false, true)
        );
        let c = classify_system(&Matrix::identity(3), &tol());
        assert_eq!(
            (
                c.trackability,
                c.realizability,
                c.realizable_subspace_trivial
            ),
            (true, true, false)
        );
        let tall = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]);
        let c = classify_system(&tall, &tol());
        assert_eq!(
            (
                c.trackability,
                c.realizability,
                c.realizable_subspace_trivial
            ),
            (false, false, false)
        );
    }

    #[test]
    fn uncontrollable_component_examples() {
        let dec = build_decomposition(&g1(), &tol()).unwrap();
        let c1 = Matrix::column_vector(&[1.0, 3.0, 4.0, 2.0, 2.0]);
        let nc = uncontrollable_component(&dec, &c1).unwrap();
        assert_eq!(nc.shape(), (3, 1));
        assert!(nc.max_abs() < 1e-14);
        let c2 = Matrix::column_vector(&[1.0, 2.0, 1.0, 1.0, 2.0]);
        assert!(uncontrollable_component(&dec, &c2).unwrap().max_abs() > 0.1);
        assert_eq!(
            uncontrollable_component(&dec, &Matrix::zeros(5, 1))
                .unwrap()
                .max_abs(),
            0.0
        );
    }

    #[test]
    fn projection_examples() {
        let dec = build_decomposition(&g1(), &tol()).unwrap();
        let c2 = Matrix::column_vector(&[1.0, 2.0, 1.0, 1.0, 2.0]);
        let y = project_trackable(&dec, &c2).unwrap();
        let expected =
            Matrix::column_vector(&[7.0 / 9.0, 6.0 / 5.0, 8.0 / 5.0, 14.0 / 9.0, 14.0 / 9.0]);
        assert_close(&y, &expected, 1e-15);
        let residual = (&c2 - &y).norm_fro();
        assert!((residual - 14f64.sqrt() / 3.0).abs() < 1e-14);

        let c1 = Matrix::column_vector(&[1.0, 3.0, 4.0, 2.0, 2.0]);
        assert_close(&project_trackable(&dec, &c1).unwrap(), &c1, 1e-14);
        assert_eq!(
            project_trackable(&dec, &Matrix::zeros(5, 1))
                .unwrap()
                .max_abs(),
            0.0
        );
    }

    #[test]
    fn injected_bases_compute_inverse_blocks() {
        let g = Matrix::column_vector(&[1.0, 1.0]);
        let h2 = Matrix::column_vector(&[0.0, 1.0]);
        let dec = SubspaceDecomposition::from_bases(&g, g.clone(), h2, &tol()).unwrap();
        assert!(!dec.orthogonal);
        // H = [[1,0],[1,1]], H⁻¹ = [[1,0],[-1,1]].
        assert_close(&dec.f1, &Matrix::column_vector(&[1.0, 0.0]), 1e-15);
        assert_close(&dec.f2, &Matrix::column_vector(&[-1.0, 1.0]), 1e-15);
        let bad = SubspaceDecomposition::from_bases(
            &g,
            Matrix::column_vector(&[1.0, 0.0]),
            Matrix::column_vector(&[0.0, 1.0]),
            &tol(),
        );
        assert!(bad.is_err());
    }
}
