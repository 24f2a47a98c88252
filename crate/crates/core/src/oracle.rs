//! Reference answers computed from a singular value decomposition, sharing
//! nothing with the learning path. Used by tests and `--verify`.

use ndarray::{Array1, Array2};
use ndarray_linalg::SVD;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Tolerance};

#[derive(Debug, Clone)]
pub struct OracleVerdict {
    pub solvable: bool,
    pub min_norm_solution: Matrix,
    pub residual_norm: f64,
}

fn to_array(m: &Matrix) -> Array2<f64> {
    Array2::from_shape_fn((m.rows(), m.cols()), |(i, j)| m[(i, j)])
}

fn check_dims(g: &Matrix, yd: &Matrix) -> Result<()> {
    if yd.cols() != 1 || yd.rows() != g.rows() {
        return Err(Error::dims(format!(
            "reference must be {}x1, got {}x{}",
            g.rows(),
            yd.rows(),
            yd.cols()
        )));
    }
    Ok(())
}

fn lapack_failure(e: ndarray_linalg::error::LinalgError) -> Error {
    Error::dims(format!("SVD failed: {e}"))
}

fn singular_values(m: &Array2<f64>) -> Result<Array1<f64>> {
    if m.is_empty() {
        return Ok(Array1::zeros(0));
    }
    let (_, s, _) = m.svd(false, false).map_err(lapack_failure)?;
    Ok(s)
}

fn svd_rank(s: &Array1<f64>, rank_tol: f64) -> usize {
    let top = s.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rank_tol * top).count()
}

/// `rank([G | Y_d]) = rank(G)`, with `Y_d` rescaled to the spectral norm of
/// `G` so that its magnitude does not move the relative threshold.
pub fn solvability_oracle(g: &Matrix, yd: &Matrix, tol: &Tolerance) -> Result<bool> {
    check_dims(g, yd)?;
    let y_norm = yd.norm_fro();
    if y_norm == 0.0 {
        return Ok(true);
    }
    let gs = singular_values(&to_array(g))?;
    let g_norm = gs.iter().cloned().fold(0.0, f64::max);
    if g_norm == 0.0 {
        return Ok(false);
    }
    let (p, q) = g.shape();
    let aug = Array2::from_shape_fn((p, q + 1), |(i, j)| {
        if j < q {
            g[(i, j)]
        } else {
            yd[(i, 0)] * g_norm / y_norm
        }
    });
    Ok(svd_rank(&singular_values(&aug)?, tol.rank_tol) == svd_rank(&gs, tol.rank_tol))
}

/// Minimum-norm least-squares solution via the truncated pseudo-inverse.
pub fn least_squares_oracle(g: &Matrix, yd: &Matrix, tol: &Tolerance) -> Result<OracleVerdict> {
    check_dims(g, yd)?;
    let (p, q) = g.shape();
    let ga = to_array(g);
    let y = Array1::from_iter((0..p).map(|i| yd[(i, 0)]));
    let mut x = Array1::<f64>::zeros(q);
    if p > 0 && q > 0 {
        let (u, s, vt) = ga.svd(true, true).map_err(lapack_failure)?;
        let (u, vt) = (u.unwrap(), vt.unwrap());
        let r = svd_rank(&s, tol.rank_tol);
        for k in 0..r {
            let coef = u.column(k).dot(&y) / s[k];
            x.scaled_add(coef, &vt.row(k));
        }
    }
    let residual_norm = (&ga.dot(&x) - &y).iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(OracleVerdict {
        solvable: solvability_oracle(g, yd, tol)?,
        min_norm_solution: Matrix::from_fn(q, 1, |i, _| x[i]),
        residual_norm,
    })
}
