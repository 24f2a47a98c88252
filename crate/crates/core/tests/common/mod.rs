#![allow(dead_code)]

use ilc_lae::{Matrix, StateSpaceSystem, Tolerance};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn g1() -> Matrix {
    Matrix::from_rows(&[
        [1.0, 0.0, 1.0],
        [0.0, 3.0, -3.0],
        [0.0, 4.0, -4.0],
        [2.0, 0.0, 2.0],
        [2.0, 0.0, 2.0],
    ])
}

pub fn col(v: &[f64]) -> Matrix {
    Matrix::column_vector(v)
}

pub fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

/// A `p × q` matrix of rank `r` built as a product of random factors.
pub fn random_rank(rng: &mut ChaCha8Rng, p: usize, q: usize, r: usize) -> Matrix {
    if r == 0 {
        return Matrix::zeros(p, q);
    }
    &uniform(rng, p, r) * &uniform(rng, r, q)
}

/// Random nonzero vector orthogonal to `span(G)`; `G` must have rank below
/// its row count.
pub fn complement_vector(rng: &mut ChaCha8Rng, g: &Matrix) -> Matrix {
    let comp = ilc_lae::linalg::orthonormal_complement(g, &tol());
    assert!(comp.cols() > 0, "G has full row rank");
    &comp * &uniform(rng, comp.cols(), 1)
}

/// Random plant with a uniform relative degree: usually 1, and 2 when `C`
/// is drawn orthogonal to the columns of `B`.
pub fn random_plant(rng: &mut ChaCha8Rng) -> StateSpaceSystem {
    loop {
        let ns = rng.gen_range(1..=3);
        let ni = rng.gen_range(1..=3);
        let no = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=5);
        let a = uniform(rng, ns, ns);
        let b = if ni > 1 && rng.gen_bool(0.3) {
            // Rank-deficient input matrix.
            let b0 = uniform(rng, ns, 1);
            &b0 * &uniform(rng, 1, ni)
        } else {
            uniform(rng, ns, ni)
        };
        let c = if rng.gen_bool(0.3) {
            let comp = ilc_lae::linalg::orthonormal_complement(&b, &tol());
            if comp.cols() == 0 {
                continue;
            }
            &uniform(rng, no, comp.cols()) * &comp.transpose()
        } else {
            uniform(rng, no, ns)
        };
        let sys = StateSpaceSystem::new(a, b, c, n).unwrap();
        if ilc_lae::relative_degree(&sys, ns, &tol()).is_ok() {
            return sys;
        }
    }
}
