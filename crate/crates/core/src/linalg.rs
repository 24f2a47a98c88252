//! Numeric primitives: rank, inversion, orthogonal complements, spectral
//! radius and nilpotency.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Tolerance};

/// Householder QR with column pivoting, `A·P = Q·R`.
///
/// Reflectors are kept as explicit vectors so that a full `Q` can be formed
/// when an orthonormal complement is needed.
pub(crate) struct PivotedQr {
    rows: usize,
    r_diag: Vec<f64>,
    perm: Vec<usize>,
    reflectors: Vec<(Vec<f64>, f64)>,
    max_col_norm: f64,
    /// `R` in its upper triangle.
    r: Matrix,
}

impl PivotedQr {
    pub(crate) fn new(a: &Matrix) -> Self {
        let (m, n) = a.shape();
        let mut w = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let steps = m.min(n);
        let mut r_diag = Vec::with_capacity(steps);
        let mut reflectors = Vec::with_capacity(steps);
        let max_col_norm = a.column_norms().into_iter().fold(0.0, f64::max);

        for k in 0..steps {
            // Exact recomputation of the trailing column norms; the matrices
            // here are small enough that downdating is not worth its drift.
            let (mut best, mut best_norm) = (k, -1.0);
            for j in k..n {
                let s: f64 = (k..m).map(|i| w[(i, j)].powi(2)).sum();
                if s > best_norm {
                    best = j;
                    best_norm = s;
                }
            }
            w.swap_columns(k, best);
            perm.swap(k, best);

            let x: Vec<f64> = (k..m).map(|i| w[(i, k)]).collect();
            let (v, beta, alpha) = householder(&x);
            apply_reflector_left(&mut w, &v, beta, k, k);
            r_diag.push(alpha);
            reflectors.push((v, beta));
        }

        Self {
            rows: m,
            r_diag,
            perm,
            reflectors,
            max_col_norm,
            r: w,
        }
    }

    pub(crate) fn rank(&self, rank_tol: f64) -> usize {
        let threshold = rank_tol * self.max_col_norm;
        if self.max_col_norm == 0.0 {
            return 0;
        }
        self.r_diag
            .iter()
            .take_while(|d| d.abs() > threshold)
            .count()
    }

    /// Column indices of the input, in pivot order.
    pub(crate) fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Columns `start..rows` of the full orthogonal factor.
    pub(crate) fn q_columns(&self, start: usize) -> Matrix {
        let m = self.rows;
        let mut q = Matrix::from_fn(m, m - start, |i, j| if i == start + j { 1.0 } else { 0.0 });
        for (k, (v, beta)) in self.reflectors.iter().enumerate().rev() {
            apply_reflector_left(&mut q, v, *beta, k, 0);
        }
        q
    }
}

/// `A(AᵀA)⁻¹` for `A` of full column rank, from `A·P = Q·R` as
/// `Q₁R⁻ᵀPᵀ` so that the conditioning of `A` is not squared.
pub(crate) fn dual_basis(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let (m, n) = a.shape();
    let qr = PivotedQr::new(a);
    if n > m || qr.rank(tol.rank_tol) != n {
        return Err(Error::SingularMatrix);
    }
    let q = qr.q_columns(0);
    let mut out = Matrix::zeros(m, n);
    for i in 0..m {
        // Row i of Q₁R⁻ᵀ solves R·z = (row i of Q₁)ᵀ.
        let mut z = vec![0.0; n];
        for k in (0..n).rev() {
            let tail: f64 = (k + 1..n).map(|j| qr.r[(k, j)] * z[j]).sum();
            z[k] = (q[(i, k)] - tail) / qr.r[(k, k)];
        }
        for (k, &col) in qr.perm[..n].iter().enumerate() {
            out[(i, col)] = z[k];
        }
    }
    Ok(out)
}

/// Returns `(v, beta, alpha)` with `(I − beta·v·vᵀ)·x = alpha·e₁`.
fn householder(x: &[f64]) -> (Vec<f64>, f64, f64) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return (vec![0.0; x.len()], 0.0, 0.0);
    }
    let alpha = if x[0] >= 0.0 { -norm } else { norm };
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vtv: f64 = v.iter().map(|a| a * a).sum();
    let beta = if vtv == 0.0 { 0.0 } else { 2.0 / vtv };
    (v, beta, alpha)
}

/// Applies `I − beta·v·vᵀ` to rows `row0..row0+len(v)`, columns `col0..`.
fn apply_reflector_left(a: &mut Matrix, v: &[f64], beta: f64, row0: usize, col0: usize) {
    if beta == 0.0 {
        return;
    }
    for j in col0..a.cols() {
        let dot: f64 = v
            .iter()
            .enumerate()
            .map(|(i, vi)| vi * a[(row0 + i, j)])
            .sum();
        if dot == 0.0 {
            continue;
        }
        let s = beta * dot;
        for (i, vi) in v.iter().enumerate() {
            a[(row0 + i, j)] -= s * vi;
        }
    }
}

/// Applies `I − beta·v·vᵀ` from the right to columns `col0..col0+len(v)`.
fn apply_reflector_right(a: &mut Matrix, v: &[f64], beta: f64, col0: usize) {
    if beta == 0.0 {
        return;
    }
    for i in 0..a.rows() {
        let dot: f64 = v
            .iter()
            .enumerate()
            .map(|(j, vj)| vj * a[(i, col0 + j)])
            .sum();
        if dot == 0.0 {
            continue;
        }
        let s = beta * dot;
        for (j, vj) in v.iter().enumerate() {
            a[(i, col0 + j)] -= s * vj;
        }
    }
}

/// Numerical rank from a column-pivoted QR factorization: the number of
/// leading `|R_kk|` above `rank_tol` times the largest column norm.
pub fn rank_of(m: &Matrix, tol: &Tolerance) -> usize {
    if m.is_empty() {
        return 0;
    }
    PivotedQr::new(m).rank(tol.rank_tol)
}

/// Orthonormal basis of the orthogonal complement of `span(a)`.
///
/// Returns a `rows × (rows − rank)` matrix; zero columns when `a` spans the
/// whole space.
pub fn orthonormal_complement(a: &Matrix, tol: &Tolerance) -> Matrix {
    if a.cols() == 0 {
        return Matrix::identity(a.rows());
    }
    let qr = PivotedQr::new(a);
    qr.q_columns(qr.rank(tol.rank_tol))
}

/// Inverse of a square matrix, using the default rank tolerance for the
/// singularity decision.
pub fn invert(m: &Matrix) -> Result<Matrix> {
    invert_with(m, &Tolerance::default())
}

pub fn invert_with(m: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if rank_of(m, tol) < n {
        return Err(Error::SingularMatrix);
    }

    // Gauss-Jordan with partial pivoting on [M | I].
    let mut a = m.clone();
    let mut inv = Matrix::identity(n);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
            .unwrap_or(k);
        if a[(piv, k)] == 0.0 {
            return Err(Error::SingularMatrix);
        }
        a.swap_rows(k, piv);
        inv.swap_rows(k, piv);
        let d = a[(k, k)];
        for j in 0..n {
            a[(k, j)] /= d;
            inv[(k, j)] /= d;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[(i, k)];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[(i, j)] -= f * a[(k, j)];
                inv[(i, j)] -= f * inv[(k, j)];
            }
        }
    }
    Ok(inv)
}

fn require_square(m: &Matrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Smallest `ν ≤ max_power` with `Mᵛ ≈ 0`, by explicit powering.
///
/// `Mᵛ` counts as zero when every entry is at most `rank_tol · ‖M‖∞ᵛ`. A
/// power whose trace is clearly nonzero proves a nonzero eigenvalue, which
/// ends the search early.
pub fn nilpotency_index(m: &Matrix, max_power: usize, tol: &Tolerance) -> Result<Option<usize>> {
    require_square(m)?;
    let n = m.rows();
    let norm = m.norm_inf();
    let mut power = m.clone();
    let mut scale = 1.0;
    for nu in 1..=max_power {
        scale *= norm;
        if power.max_abs() <= tol.rank_tol * scale {
            return Ok(Some(nu));
        }
        if power.trace().abs() > 1e-6 * (n as f64) * scale {
            return Ok(None);
        }
        if nu < max_power {
            power = &power * m;
        }
    }
    Ok(None)
}

/// Largest eigenvalue modulus.
///
/// Nilpotent matrices (detected by [`nilpotency_index`] up to the dimension)
/// report exactly 0. Otherwise eigenvalues come from permutation isolation,
/// diagonal balancing, Householder reduction to Hessenberg form and the
/// shifted double-step QR iteration; each eigenvalue is accepted when its
/// subdiagonal falls below machine epsilon relative to the neighbouring
/// diagonal entries.
pub fn spectral_radius(m: &Matrix, tol: &Tolerance) -> Result<f64> {
    require_square(m)?;
    if m.rows() == 0 {
        return Ok(0.0);
    }
    if nilpotency_index(m, m.rows(), tol)?.is_some() {
        return Ok(0.0);
    }
    let eigs = eigenvalues(m)?;
    Ok(eigs
        .iter()
        .map(|&(re, im)| re.hypot(im))
        .fold(0.0, f64::max))
}

/// All eigenvalues of a real square matrix as `(re, im)` pairs.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<(f64, f64)>> {
    require_square(m)?;
    let n = m.rows();
    let mut a = m.clone();
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigs);
    }

    let negligible = f64::EPSILON * m.max_abs();
    let (lo, hi) = isolate(&mut a, negligible, &mut eigs);
    if lo <= hi {
        let mut core = a.block(lo, lo, hi - lo + 1, hi - lo + 1);
        balance(&mut core);
        hessenberg(&mut core);
        hqr(&mut core, &mut eigs)?;
    }
    Ok(eigs)
}

/// Symmetric permutations that split off eigenvalues sitting alone in a row
/// or column. Returns the remaining active window `lo..=hi` (empty when
/// `lo > hi`).
fn isolate(a: &mut Matrix, negligible: f64, eigs: &mut Vec<(f64, f64)>) -> (usize, usize) {
    let n = a.rows();
    let mut lo = 0usize;
    let mut hi = n as isize - 1;

    let swap = |a: &mut Matrix, i: usize, j: usize| {
        a.swap_rows(i, j);
        a.swap_columns(i, j);
    };

    // Rows whose off-diagonal part inside the window vanishes go to the bottom.
    while hi >= lo as isize {
        let h = hi as usize;
        let isolated = (lo..=h)
            .rev()
            .find(|&i| (lo..=h).all(|j| j == i || a[(i, j)].abs() <= negligible));
        let Some(i) = isolated else { break };
        swap(a, i, h);
        eigs.push((a[(h, h)], 0.0));
        hi -= 1;
    }
    // Columns whose off-diagonal part inside the window vanishes go to the top.
    while hi >= lo as isize {
        let h = hi as usize;
        let isolated =
            (lo..=h).find(|&j| (lo..=h).all(|i| i == j || a[(i, j)].abs() <= negligible));
        let Some(j) = isolated else { break };
        swap(a, j, lo);
        eigs.push((a[(lo, lo)], 0.0));
        lo += 1;
    }
    if hi < lo as isize {
        (1, 0)
    } else {
        (lo, hi as usize)
    }
}

/// Diagonal similarity scaling by powers of two so that row and column norms
/// are comparable.
fn balance(a: &mut Matrix) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let n = a.rows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

fn hessenberg(a: &mut Matrix) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let (v, beta, _) = householder(&x);
        apply_reflector_left(a, &v, beta, k + 1, k);
        apply_reflector_right(a, &v, beta, k + 1);
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
fn hqr(a: &mut Matrix, eigs: &mut Vec<(f64, f64)>) -> Result<()> {
    const MAX_ITS: usize = 60;
    let n = a.rows();
    let eps = f64::EPSILON;
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // Look for a single small subdiagonal element.
            let mut l = nu;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nu, nu)];
            if l == nu {
                eigs.push((x + t, 0.0));
                nn -= 1;
            } else {
                let mut y = a[(nu - 1, nu - 1)];
                let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
                if l + 1 == nu {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + z.copysign(p);
                        let first = x + z;
                        let second = if z != 0.0 { x - w / z } else { first };
                        eigs.push((first, 0.0));
                        eigs.push((second, 0.0));
                    } else {
                        eigs.push((x + p, z));
                        eigs.push((x + p, -z));
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITS {
                        return Err(Error::EigenvalueIteration);
                    }
                    if its % 10 == 0 && its > 0 {
                        // Exceptional shift.
                        t += x;
                        for i in 0..=nu {
                            a[(i, i)] -= x;
                        }
                        let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;

                    // Look for two consecutive small subdiagonal elements.
                    let mut m = nu - 2;
                    let mut z;
                    loop {
                        z = a[(m, m)];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                        q = a[(m + 1, m + 1)] - z - rr - ss;
                        r = a[(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v =
                            p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                        if u <= eps * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nu - 1 {
                        a[(i + 2, i)] = 0.0;
                        if i != m {
                            a[(i + 2, i - 1)] = 0.0;
                        }
                    }
                    // Double QR step on rows l..=nn and columns m..=nn.
                    for k in m..nu {
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = if k + 1 != nu { a[(k + 2, k - 1)] } else { 0.0 };
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = (p * p + q * q + r * r).sqrt().copysign(p);
                        if s == 0.0 {
                            continue;
                        }
                        if k == m {
                            if l != m {
                                a[(k, k - 1)] = -a[(k, k - 1)];
                            }
                        } else {
                            a[(k, k - 1)] = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for j in k..=nu {
                            let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                            if k + 1 != nu {
                                pp += r * a[(k + 2, j)];
                                a[(k + 2, j)] -= pp * z;
                            }
                            a[(k + 1, j)] -= pp * y;
                            a[(k, j)] -= pp * x;
                        }
                        let mmin = if nu < k + 3 { nu } else { k + 3 };
                        for i in l..=mmin {
                            let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                            if k + 1 != nu {
                                pp += z * a[(i, k + 2)];
                                a[(i, k + 2)] -= pp * r;
                            }
                            a[(i, k + 1)] -= pp * q;
                            a[(i, k)] -= pp;
                        }
                    }
                }
            }
            if nn < 0 || l + 1 >= nn as usize {
                break;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn example1_g() -> Matrix {
        Matrix::from_rows(&[
            [1.0, 0.0, 1.0],
            [0.0, 3.0, -3.0],
            [0.0, 4.0, -4.0],
            [2.0, 0.0, 2.0],
            [2.0, 0.0, 2.0],
        ])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&example1_g(), &tol()), 2);
        assert_eq!(rank_of(&Matrix::identity(3), &tol()), 3);
        assert_eq!(rank_of(&Matrix::zeros(4, 2), &tol()), 0);
    }

    #[test]
    fn invert_examples() {
        let inv = invert(&Matrix::from_diagonal(&[9.0, 25.0])).unwrap();
        assert!((inv[(0, 0)] - 1.0 / 9.0).abs() < 1e-15);
        assert!((inv[(1, 1)] - 1.0 / 25.0).abs() < 1e-15);
        assert_eq!(inv[(0, 1)], 0.0);
        assert_eq!(invert(&Matrix::identity(4)).unwrap(), Matrix::identity(4));
        assert!(matches!(
            invert(&Matrix::zeros(2, 2)),
            Err(Error::SingularMatrix)
        ));
        assert!(matches!(
            invert(&Matrix::zeros(2, 3)),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn spectral_radius_examples() {
        let shift = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(spectral_radius(&shift, &tol()).unwrap(), 0.0);
        for n in [1, 3, 7] {
            let r = spectral_radius(&Matrix::identity(n), &tol()).unwrap();
            assert!((r - 1.0).abs() < 1e-14);
        }
        assert!(spectral_radius(&Matrix::zeros(2, 3), &tol()).is_err());
    }

    #[test]
    fn rotation_has_complex_pair() {
        let (c, s) = (0.6, 0.8);
        let rot = Matrix::from_rows(&[
            [0.5 * c, -0.5 * s, 0.0],
            [0.5 * s, 0.5 * c, 0.0],
            [0.0, 1.0, 0.2],
        ]);
        let eigs = eigenvalues(&rot).unwrap();
        assert_eq!(eigs.len(), 3);
        let r = spectral_radius(&rot, &tol()).unwrap();
        assert!((r - 0.5).abs() < 1e-12, "{r}");
        assert_eq!(eigs.iter().filter(|e| e.1 != 0.0).count(), 2);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^4 - 10x^3 + 35x^2 - 50x + 24 = (x-1)(x-2)(x-3)(x-4)
        let comp = Matrix::from_rows(&[
            [10.0, -35.0, 50.0, -24.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        let mut re: Vec<f64> = eigenvalues(&comp).unwrap().iter().map(|e| e.0).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((got - want).abs() < 1e-9, "{re:?}");
        }
    }

    #[test]
    fn nilpotency_examples() {
        let shift = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(nilpotency_index(&shift, 2, &tol()).unwrap(), Some(2));
        assert_eq!(nilpotency_index(&shift, 1, &tol()).unwrap(), None);
        for n in [1, 2, 5] {
            assert_eq!(
                nilpotency_index(&Matrix::zeros(n, n), n, &tol()).unwrap(),
                Some(1)
            );
            assert_eq!(
                nilpotency_index(&Matrix::identity(n), n, &tol()).unwrap(),
                None
            );
        }
        let s4 = Matrix::from_fn(4, 4, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
        assert_eq!(nilpotency_index(&s4, 4, &tol()).unwrap(), Some(4));
    }

    #[test]
    fn triangular_toeplitz_radius_is_its_diagonal() {
        let n = 100;
        let m = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.96,
            std::cmp::Ordering::Greater => -0.04,
            std::cmp::Ordering::Less => 0.0,
        });
        let r = spectral_radius(&m, &tol()).unwrap();
        assert!((r - 0.96).abs() < 1e-12, "{r}");
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let h = Matrix::from_rows(&[[1.0], [1.0]]);
        let c = orthonormal_complement(&h, &tol());
        assert_eq!(c.shape(), (2, 1));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c[(0, 0)].abs() - s).abs() < 1e-15);
        assert!((c[(0, 0)] + c[(1, 0)]).abs() < 1e-15);
        let full = orthonormal_complement(&Matrix::identity(3), &tol());
        assert_eq!(full.shape(), (3, 0));
    }

    #[test]
    fn dual_basis_matches_normal_equations() {
        let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 3.0], [0.0, 4.0], [2.0, 0.0], [2.0, 0.0]]);
        let f = dual_basis(&a, &tol()).unwrap();
        let want = &a * &invert(&(&a.transpose() * &a)).unwrap();
        assert!(f.max_abs_diff(&want).unwrap() < 1e-15);
        assert!(
            (&f.transpose() * &a)
                .max_abs_diff(&Matrix::identity(2))
                .unwrap()
                < 1e-14
        );
        let dependent = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(
            dual_basis(&dependent, &tol()),
            Err(Error::SingularMatrix)
        ));
    }
}
