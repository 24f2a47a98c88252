//! Learning-gain design and certification.
//!
//! Gains are designed in the reduced form `K̂ ∈ ℝ^{q×m}` and expanded to the
//! update gain `K = K̂F₁ᵀ`. The closed loop that governs convergence of the
//! controllable error is `I − F₁ᵀGK̂`.

use crate::error::{Error, Result};
use crate::linalg::{dual_basis, nilpotency_index, rank_of, spectral_radius};
use crate::matrix::{Matrix, Tolerance};
use crate::subspace::SubspaceDecomposition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainMode {
    /// Closed loop `α·I`; the controllable error shrinks by `α` per update.
    Exponential {
        alpha: f64,
    },
    /// Nilpotent closed loop; exact convergence after `ν ≤ m` updates.
    Deadbeat,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    Rate { rho: f64 },
    Deadbeat { nu: usize },
}

impl Certificate {
    pub fn rho(&self) -> f64 {
        match *self {
            Certificate::Rate { rho } => rho,
            Certificate::Deadbeat { .. } => 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GainSpec {
    pub mode: GainMode,
    pub k_hat: Matrix,
    pub k: Matrix,
    pub certificate: Certificate,
}

/// Result of re-checking a gain against a system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCheck {
    pub rho: f64,
    pub nu: Option<usize>,
    pub valid: bool,
}

/// `I − F₁ᵀGK̂`.
///
/// Entries within the rounding error of forming the difference are set to
/// exactly zero, so a designed `K̃ = 0` reads back as the zero matrix.
pub fn closed_loop(dec: &SubspaceDecomposition, g: &Matrix, k_hat: &Matrix) -> Result<Matrix> {
    check_dims(dec, g)?;
    k_hat.require_shape(g.cols(), dec.rank, "K_hat")?;
    let w = &dec.f1.transpose() * g;
    let cl = &Matrix::identity(dec.rank) - &(&w * k_hat);
    let noise =
        4.0 * (g.cols() + 1) as f64 * f64::EPSILON * (1.0 + w.norm_inf() * k_hat.norm_inf());
    Ok(Matrix::from_fn(cl.rows(), cl.cols(), |i, j| {
        let v = cl[(i, j)];
        if v.abs() <= noise {
            0.0
        } else {
            v
        }
    }))
}

fn check_dims(dec: &SubspaceDecomposition, g: &Matrix) -> Result<()> {
    if dec.dim() != g.rows() {
        return Err(Error::dims(format!(
            "decomposition is for {} outputs, G has {}",
            dec.dim(),
            g.rows()
        )));
    }
    Ok(())
}

/// `K̂ = GᵀF₁(F₁ᵀGGᵀF₁)⁻¹(I − target)`, which makes `I − F₁ᵀGK̂ = target`.
fn gain_for_closed_loop(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    target: &Matrix,
    tol: &Tolerance,
) -> Result<Matrix> {
    check_dims(dec, g)?;
    let m = dec.rank;
    let w = &dec.f1.transpose() * g;
    if rank_of(&w, tol) != m {
        return Err(Error::SingularGram);
    }
    // Wᵀ(WWᵀ)⁻¹ without forming WWᵀ.
    let w_dual = dual_basis(&w.transpose(), tol).map_err(|_| Error::SingularGram)?;
    let rhs = &Matrix::identity(m) - target;
    Ok(&w_dual * &rhs)
}

pub fn design_exponential(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    alpha: f64,
    tol: &Tolerance,
) -> Result<GainSpec> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidRate(alpha));
    }
    let target = Matrix::identity(dec.rank).scale(alpha);
    let k_hat = gain_for_closed_loop(dec, g, &target, tol)?;
    let rho = spectral_radius(&closed_loop(dec, g, &k_hat)?, tol)?;
    let k = expand_gain(&k_hat, dec)?;
    Ok(GainSpec {
        mode: GainMode::Exponential { alpha },
        k_hat,
        k,
        certificate: Certificate::Rate { rho },
    })
}

/// Ones on the first superdiagonal; nilpotent of index `m`.
pub fn shift_matrix(m: usize) -> Matrix {
    Matrix::from_fn(m, m, |i, j| if j == i + 1 { 1.0 } else { 0.0 })
}

pub fn design_deadbeat(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    k_tilde: Option<&Matrix>,
    tol: &Tolerance,
) -> Result<GainSpec> {
    let m = dec.rank;
    let default;
    let k_tilde = match k_tilde {
        Some(kt) => {
            kt.require_shape(m, m, "nilpotent closed loop")?;
            kt
        }
        None => {
            default = shift_matrix(m);
            &default
        }
    };
    let nu = nilpotency_index(k_tilde, m, tol)?.ok_or(Error::NotNilpotent)?;
    let k_hat = gain_for_closed_loop(dec, g, k_tilde, tol)?;
    let k = expand_gain(&k_hat, dec)?;
    Ok(GainSpec {
        mode: GainMode::Deadbeat,
        k_hat,
        k,
        certificate: Certificate::Deadbeat { nu },
    })
}

/// A user-supplied reduced gain, certified by its closed-loop radius.
pub fn custom_gain(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    k_hat: Matrix,
    tol: &Tolerance,
) -> Result<GainSpec> {
    let rho = spectral_radius(&closed_loop(dec, g, &k_hat)?, tol)?;
    let k = expand_gain(&k_hat, dec)?;
    Ok(GainSpec {
        mode: GainMode::Custom,
        k_hat,
        k,
        certificate: Certificate::Rate { rho },
    })
}

/// A user-supplied full update gain `K`, kept as given.
///
/// The reduced gain is `K̂ = KH₁`, so the certificate is
/// `ρ(I − F₁ᵀGKH₁)`. Unlike designed gains, `K` need not equal `K̂F₁ᵀ`.
pub fn custom_full_gain(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    k: Matrix,
    tol: &Tolerance,
) -> Result<GainSpec> {
    let k_hat = contract_gain(&k, dec)?;
    let rho = spectral_radius(&closed_loop(dec, g, &k_hat)?, tol)?;
    Ok(GainSpec {
        mode: GainMode::Custom,
        k_hat,
        k,
        certificate: Certificate::Rate { rho },
    })
}

/// `K = K̂F₁ᵀ`.
pub fn expand_gain(k_hat: &Matrix, dec: &SubspaceDecomposition) -> Result<Matrix> {
    if k_hat.cols() != dec.rank {
        return Err(Error::dims(format!(
            "K_hat has {} columns, decomposition rank is {}",
            k_hat.cols(),
            dec.rank
        )));
    }
    Ok(k_hat * &dec.f1.transpose())
}

/// `K̂ = KH₁`.
pub fn contract_gain(k: &Matrix, dec: &SubspaceDecomposition) -> Result<Matrix> {
    if k.cols() != dec.dim() {
        return Err(Error::dims(format!(
            "K has {} columns, system has {} outputs",
            k.cols(),
            dec.dim()
        )));
    }
    Ok(k * &dec.h1)
}

/// Recomputes the closed-loop radius (and nilpotency index when the radius
/// vanishes). Never fails on a bad gain; that is what `valid` reports.
pub fn verify_gain(
    dec: &SubspaceDecomposition,
    g: &Matrix,
    spec: &GainSpec,
    tol: &Tolerance,
) -> Result<GainCheck> {
    let cl = closed_loop(dec, g, &spec.k_hat)?;
    let rho = spectral_radius(&cl, tol)?;
    let nu = if rho == 0.0 {
        nilpotency_index(&cl, dec.rank, tol)?
    } else {
        None
    };
    Ok(GainCheck {
        rho,
        nu,
        valid: rho < 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::build_decomposition;

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

    #[test]
    fn example_one_deadbeat_gain() {
        let g = g1();
        let dec = build_decomposition(&g, &tol()).unwrap();
        let kt = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        let spec = design_deadbeat(&dec, &g, Some(&kt), &tol()).unwrap();
        let expected = Matrix::from_rows(&[
            [2.0 / 3.0, -1.0 / 3.0],
            [1.0 / 3.0, 1.0 / 3.0],
            [1.0 / 3.0, -2.0 / 3.0],
        ]);
        assert!(spec.k_hat.max_abs_diff(&expected).unwrap() < 1e-12);
        assert_eq!(spec.certificate, Certificate::Deadbeat { nu: 2 });

        let default = design_deadbeat(&dec, &g, None, &tol()).unwrap();
        assert!(default.k_hat.max_abs_diff(&spec.k_hat).unwrap() < 1e-15);

        let check = verify_gain(&dec, &g, &spec, &tol()).unwrap();
        assert_eq!(check.rho, 0.0);
        assert_eq!(check.nu, Some(2));
        assert!(check.valid);
    }

    #[test]
    fn exponential_rates() {
        let g = g1();
        let dec = build_decomposition(&g, &tol()).unwrap();
        let zero = design_exponential(&dec, &g, 0.0, &tol()).unwrap();
        assert_eq!(zero.certificate.rho(), 0.0);
        let half = design_exponential(&dec, &g, 0.5, &tol()).unwrap();
        assert!((half.certificate.rho() - 0.5).abs() < 1e-9);
        assert!(matches!(
            design_exponential(&dec, &g, 1.0, &tol()),
            Err(Error::InvalidRate(_))
        ));
    }

    #[test]
    fn identity_system_gain() {
        let g = Matrix::identity(3);
        let dec = build_decomposition(&g, &tol()).unwrap();
        let spec = design_exponential(&dec, &g, 0.25, &tol()).unwrap();
        let expected = Matrix::identity(3).scale(0.75);
        assert!(spec.k.max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(
            expand_gain(&spec.k_hat, &dec)
                .unwrap()
                .max_abs_diff(&expected)
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn rank_one_deadbeat_uses_zero_closed_loop() {
        let g = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        let dec = build_decomposition(&g, &tol()).unwrap();
        let spec = design_deadbeat(&dec, &g, None, &tol()).unwrap();
        assert_eq!(spec.certificate, Certificate::Deadbeat { nu: 1 });
        let w = &dec.f1.transpose() * &g;
        let manual =
            &w.transpose() * &crate::linalg::invert_with(&(&w * &w.transpose()), &tol()).unwrap();
        assert!(spec.k_hat.max_abs_diff(&manual).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_non_nilpotent_closed_loop() {
        let g = g1();
        let dec = build_decomposition(&g, &tol()).unwrap();
        let bad = Matrix::from_rows(&[[0.5, 1.0], [0.0, 0.0]]);
        assert!(matches!(
            design_deadbeat(&dec, &g, Some(&bad), &tol()),
            Err(Error::NotNilpotent)
        ));
    }

    #[test]
    fn expand_contract_round_trip() {
        let g = g1();
        let dec = build_decomposition(&g, &tol()).unwrap();
        let spec = design_deadbeat(&dec, &g, None, &tol()).unwrap();
        let back = contract_gain(&spec.k, &dec).unwrap();
        assert!(back.max_abs_diff(&spec.k_hat).unwrap() < 1e-14);
        assert_eq!(
            contract_gain(&Matrix::zeros(3, 5), &dec).unwrap().max_abs(),
            0.0
        );
        assert_eq!(
            expand_gain(&Matrix::zeros(3, 2), &dec).unwrap().max_abs(),
            0.0
        );
        assert!(contract_gain(&Matrix::zeros(3, 4), &dec).is_err());
    }

    #[test]
    fn zero_gain_is_invalid() {
        let g = g1();
        let dec = build_decomposition(&g, &tol()).unwrap();
        let spec = custom_gain(&dec, &g, Matrix::zeros(3, 2), &tol()).unwrap();
        let check = verify_gain(&dec, &g, &spec, &tol()).unwrap();
        assert!((check.rho - 1.0).abs() < 1e-14);
        assert!(!check.valid);
    }
}
