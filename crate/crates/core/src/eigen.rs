//! Dense nonsymmetric eigensolver and supporting decompositions.
//!
//! The eigenvalue path is the classical one: Parlett-Reinsch balancing
//! (radix-2 scaling, exact in floating point), Householder reduction to
//! upper Hessenberg form, then Francis double-shift QR with deflation.
//! Singular values come from one-sided Jacobi, which keeps small singular
//! values at high relative accuracy — that is what the rank decisions in
//! the Jordan-defect tests need. Symmetric tridiagonal spectra (used by
//! the spherically reduced tree operators) are computed by Sturm bisection.

use crate::dense::DMat;
use crate::error::{Error, Result};
use crate::EIGEN_DIM_CAP;
use num_complex::Complex64;

/// All eigenvalues of a dense real matrix.
pub fn eigenvalues(a: &DMat) -> Result<Vec<Complex64>> {
    assert!(a.is_square(), "eigenvalues: matrix must be square");
    if a.rows > EIGEN_DIM_CAP {
        return Err(Error::SizeLimit {
            what: "dense eigensolver",
            requested: a.rows as u128,
            cap: EIGEN_DIM_CAP as u128,
        });
    }
    if a.rows == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    francis_qr(&mut h)
}

/// Eigenvalues of a matrix that is symmetric up to roundoff; imaginary
/// parts are checked to be negligible and dropped.
pub fn symmetric_eigenvalues(a: &DMat) -> Result<Vec<f64>> {
    let scale = a.max_abs().max(1.0);
    let eig = eigenvalues(a)?;
    let mut out = Vec::with_capacity(eig.len());
    for z in eig {
        if z.im.abs() > 1e-7 * scale {
            return Err(Error::ContractViolation(format!(
                "symmetric_eigenvalues: nonreal eigenvalue {z} for a symmetric input"
            )));
        }
        out.push(z.re);
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(out)
}

/// Parlett-Reinsch balancing by radix-2 diagonal similarity (no permutation
/// phase; powers of two change no eigenvalue bits).
fn balance(a: &mut DMat) {
    const RADIX: f64 = 2.0;
    let n = a.rows;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut f = 1.0;
                let s = c + r;
                let mut c_scaled = c;
                let mut g = r / RADIX;
                while c_scaled < g {
                    f *= RADIX;
                    c_scaled *= sqrdx;
                }
                g = r * RADIX;
                while c_scaled > g {
                    f /= RADIX;
                    c_scaled /= sqrdx;
                }
                if (c_scaled + r) / f < 0.95 * s {
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
        if done {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place. Entries below
/// the first subdiagonal are zeroed afterwards.
fn hessenberg(a: &mut DMat) {
    let n = a.rows;
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0f64; n];
    let (low, high) = (0usize, n - 1);
    for m in (low + 1)..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += a[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..=high).rev() {
            ort[i] = a[(i, m - 1)] / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;
        // Similarity by the Householder reflector (I - u u^T / h).
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * a[(i, j)];
            }
            f /= h;
            for i in m..=high {
                a[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * a[(i, j)];
            }
            f /= h;
            for j in m..=high {
                a[(i, j)] -= f * ort[j];
            }
        }
        a[(m, m - 1)] = scale * g;
    }
    for i in 2..n {
        for j in 0..(i - 1) {
            a[(i, j)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns all
/// eigenvalues. Exceptional shifts kick in after every 10 stalled sweeps
/// on a block; a block that survives 50 sweeps aborts the computation.
fn francis_qr(hm: &mut DMat) -> Result<Vec<Complex64>> {
    let n = hm.rows;
    let eps = f64::EPSILON;
    let mut wr = vec![0.0f64; n];
    let mut wi = vec![0.0f64; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += hm[(i, j)].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }

    let mut t = 0.0f64;
    let mut en = n as isize - 1;
    let mut its;
    while en >= 0 {
        its = 0;
        loop {
            // Find the start of the active block.
            let mut l = en;
            while l > 0 {
                let s = hm[(l as usize - 1, l as usize - 1)].abs()
                    + hm[(l as usize, l as usize)].abs();
                let s = if s == 0.0 { anorm } else { s };
                if hm[(l as usize, l as usize - 1)].abs() <= eps * s {
                    break;
                }
                l -= 1;
            }
            let x = hm[(en as usize, en as usize)];
            if l == en {
                wr[en as usize] = x + t;
                wi[en as usize] = 0.0;
                en -= 1;
                break;
            }
            let y = hm[(en as usize - 1, en as usize - 1)];
            let w = hm[(en as usize, en as usize - 1)] * hm[(en as usize - 1, en as usize)];
            if l == en - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                let x_shifted = x + t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[en as usize - 1] = x_shifted + z;
                    wr[en as usize] = wr[en as usize - 1];
                    if z != 0.0 {
                        wr[en as usize] = x_shifted - w / z;
                    }
                    wi[en as usize - 1] = 0.0;
                    wi[en as usize] = 0.0;
                } else {
                    wr[en as usize - 1] = x_shifted + p;
                    wr[en as usize] = x_shifted + p;
                    wi[en as usize - 1] = -z;
                    wi[en as usize] = z;
                }
                en -= 2;
                break;
            }
            if its == 50 {
                return Err(Error::NonConvergence {
                    lo: l as usize,
                    hi: en as usize,
                });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 0..=en as usize {
                    hm[(i, i)] -= x;
                }
                let s = hm[(en as usize, en as usize - 1)].abs()
                    + hm[(en as usize - 1, en as usize - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // Search for two consecutive small subdiagonals.
            let mut m = en - 2;
            let (mut p, mut q, mut r);
            loop {
                let mu = m as usize;
                let z = hm[(mu, mu)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / hm[(mu + 1, mu)] + hm[(mu, mu + 1)];
                q = hm[(mu + 1, mu + 1)] - z - rr - ss;
                r = hm[(mu + 2, mu + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = hm[(mu, mu - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (hm[(mu - 1, mu - 1)].abs() + z.abs() + hm[(mu + 1, mu + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in (m as usize + 2)..=(en as usize) {
                hm[(i, i - 2)] = 0.0;
                if i > m as usize + 2 {
                    hm[(i, i - 3)] = 0.0;
                }
            }
            // Double QR sweep over rows l..=en, bulge starting at m.
            for k in (m as usize)..(en as usize) {
                let notlast = k != en as usize - 1;
                if k != m as usize {
                    p = hm[(k, k - 1)];
                    q = hm[(k + 1, k - 1)];
                    r = if notlast { hm[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m as usize {
                    if l != m {
                        hm[(k, k - 1)] = -hm[(k, k - 1)];
                    }
                } else {
                    hm[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=(en as usize) {
                    let mut pp = hm[(k, j)] + q * hm[(k + 1, j)];
                    if notlast {
                        pp += r * hm[(k + 2, j)];
                        hm[(k + 2, j)] -= pp * z;
                    }
                    hm[(k + 1, j)] -= pp * y;
                    hm[(k, j)] -= pp * x;
                }
                let upper = if k + 3 < en as usize {
                    k + 3
                } else {
                    en as usize
                };
                for i in (l as usize)..=upper {
                    let mut pp = x * hm[(i, k)] + y * hm[(i, k + 1)];
                    if notlast {
                        pp += z * hm[(i, k + 2)];
                        hm[(i, k + 2)] -= pp * r;
                    }
                    hm[(i, k + 1)] -= pp * q;
                    hm[(i, k)] -= pp;
                }
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Singular values of a dense real matrix via one-sided Jacobi, sorted
/// in decreasing order.
pub fn singular_values(a: &DMat) -> Vec<f64> {
    // Work on a tall copy so that sweeps run over at most min(r,c) columns.
    let mut u = if a.rows >= a.cols {
        a.clone()
    } else {
        a.transpose()
    };
    let (m, n) = (u.rows, u.cols);
    if n == 0 {
        return Vec::new();
    }
    let eps = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Number of singular values strictly above `threshold`.
pub fn numerical_rank(a: &DMat, threshold: f64) -> usize {
    singular_values(a)
        .into_iter()
        .filter(|s| *s > threshold)
        .count()
}

/// Rank of A - λI for complex λ through the real 2n x 2n embedding
/// (each complex singular value appears twice there). Returns the rank
/// and the singular values (one copy each).
pub fn shifted_rank_complex(a: &DMat, lambda: Complex64, threshold: f64) -> (usize, Vec<f64>) {
    let n = a.rows;
    if lambda.im == 0.0 {
        let mut s = a.clone();
        for i in 0..n {
            s[(i, i)] -= lambda.re;
        }
        let sv = singular_values(&s);
        let rank = sv.iter().filter(|s| **s > threshold).count();
        return (rank, sv);
    }
    let mut e = DMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let re = a[(i, j)] - if i == j { lambda.re } else { 0.0 };
            e[(i, j)] = re;
            e[(n + i, n + j)] = re;
        }
        e[(i, n + i)] = lambda.im;
        e[(n + i, i)] = -lambda.im;
    }
    let sv = singular_values(&e);
    let rank2 = sv.iter().filter(|s| **s > threshold).count();
    let collapsed = sv.iter().step_by(2).copied().collect();
    (rank2 / 2, collapsed)
}

/// Eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence
/// bisection, ascending. `off[i]` couples rows i and i+1.
pub fn sym_tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n == 0 || off.len() == n - 1);
    if n == 0 {
        return Vec::new();
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        if i > 0 {
            radius += off[i - 1].abs();
        }
        if i + 1 < n {
            radius += off[i].abs();
        }
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let span = (hi - lo).max(1e-300);
    // Sturm count: number of eigenvalues below x. A vanishing pivot is
    // clamped to a tiny negative value, the standard bisection convention.
    let pivmin = 1e-290;
    let count_below = |x: f64| -> usize {
        let mut count = 0usize;
        let mut d = 1.0f64;
        for i in 0..n {
            let e2 = if i == 0 {
                0.0
            } else {
                off[i - 1] * off[i - 1]
            };
            d = diag[i] - x - e2 / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut a = lo - 1e-12 * span;
        let mut b = hi + 1e-12 * span;
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if count_below(mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= 1e-15 * span {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Largest absolute eigenvalue of a symmetric operator given only its
/// action, by power iteration from a deterministic start vector.
pub fn sym_operator_norm<F>(dim: usize, mut apply: F) -> f64
where
    F: FnMut(&[f64], &mut [f64]),
{
    if dim == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..dim)
        .map(|i| {
            let x = ((i as u64)
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407)
                >> 33) as f64;
            x / (1u64 << 31) as f64 - 1.0
        })
        .collect();
    let mut w = vec![0.0f64; dim];
    let mut est = 0.0f64;
    for _ in 0..500 {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        apply(&v, &mut w);
        let new_est = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        std::mem::swap(&mut v, &mut w);
        if (new_est - est).abs() <= 1e-12 * new_est.max(1.0) {
            return new_est;
        }
        est = new_est;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DMat;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn sorted_by_re_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|x, y| {
            x.re.partial_cmp(&y.re)
                .unwrap()
                .then(x.im.partial_cmp(&y.im).unwrap())
        });
        v
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = eigenvalues(&DMat::identity(5)).unwrap();
        assert_eq!(eig.len(), 5);
        for z in eig {
            assert!(close(z.re, 1.0, 1e-12) && close(z.im, 0.0, 1e-12));
        }
    }

    #[test]
    fn rotation_eigenvalues() {
        let a = DMat::from_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let eig = sorted_by_re_im(eigenvalues(&a).unwrap());
        assert!(close(eig[0].im, -1.0, 1e-12));
        assert!(close(eig[1].im, 1.0, 1e-12));
    }

    #[test]
    fn nilpotent_eigenvalues() {
        let a = DMat::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        for z in eigenvalues(&a).unwrap() {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn cycle_permutation_roots_of_unity() {
        let n = 6;
        let mut a = DMat::zeros(n, n);
        for i in 0..n {
            a[((i + 1) % n, i)] = 1.0;
        }
        let eig = eigenvalues(&a).unwrap();
        assert_eq!(eig.len(), 6);
        for z in &eig {
            assert!(close(z.norm(), 1.0, 1e-10));
            let z6 = z.powu(6);
            assert!(close(z6.re, 1.0, 1e-9) && close(z6.im, 0.0, 1e-9));
        }
    }

    #[test]
    fn known_spectrum_under_similarity() {
        // diag(1, 2, 3, -4) conjugated by a fixed invertible matrix.
        let d = [1.0, 2.0, 3.0, -4.0];
        let p = DMat::from_rows(&[
            &[1.0, 0.5, 0.0, 0.0],
            &[0.0, 1.0, 0.25, 0.0],
            &[0.0, 0.0, 1.0, -0.5],
            &[0.5, 0.0, 0.0, 1.0],
        ]);
        let p_inv = invert4(&p);
        let mut dm = DMat::zeros(4, 4);
        for i in 0..4 {
            dm[(i, i)] = d[i];
        }
        let a = p.mul(&dm).mul(&p_inv);
        let mut eig: Vec<f64> = eigenvalues(&a).unwrap().iter().map(|z| z.re).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut expect = d;
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (got, want) in eig.iter().zip(expect.iter()) {
            assert!(close(*got, *want, 1e-10), "{got} vs {want}");
        }
    }

    fn invert4(p: &DMat) -> DMat {
        let n = 4;
        let mut aug = DMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = p[(i, j)];
            }
            aug[(i, n + i)] = 1.0;
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| aug[(i, col)].abs().partial_cmp(&aug[(j, col)].abs()).unwrap())
                .unwrap();
            for j in 0..2 * n {
                let t = aug[(col, j)];
                aug[(col, j)] = aug[(piv, j)];
                aug[(piv, j)] = t;
            }
            let d = aug[(col, col)];
            for j in 0..2 * n {
                aug[(col, j)] /= d;
            }
            for i in 0..n {
                if i != col {
                    let f = aug[(i, col)];
                    for j in 0..2 * n {
                        aug[(i, j)] -= f * aug[(col, j)];
                    }
                }
            }
        }
        let mut inv = DMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        inv
    }

    #[test]
    fn singular_values_diag() {
        let a = DMat::from_rows(&[&[3.0, 0.0, 0.0], &[0.0, -5.0, 0.0], &[0.0, 0.0, 1e-11]]);
        let sv = singular_values(&a);
        assert!(close(sv[0], 5.0, 1e-12));
        assert!(close(sv[1], 3.0, 1e-12));
        assert!(close(sv[2], 1e-11, 1e-20));
        assert_eq!(numerical_rank(&a, 1e-9), 2);
    }

    #[test]
    fn singular_values_keep_small_values() {
        let a = DMat::from_rows(&[&[1.0, 1.0, 0.0], &[0.0, 1e-6, 0.0], &[0.0, 0.0, 1e-12]]);
        let sv = singular_values(&a);
        assert!(sv[2] > 1e-13 && sv[2] < 1e-11, "sv = {sv:?}");
    }

    #[test]
    fn shifted_rank_complex_consistency() {
        // Rotation by 90 degrees has eigenvalues ±i, so A - iI is singular.
        let a = DMat::from_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let (rank, _) = shifted_rank_complex(&a, Complex64::new(0.0, 1.0), 1e-9);
        assert_eq!(rank, 1);
        let (rank_off, _) = shifted_rank_complex(&a, Complex64::new(0.3, 0.4), 1e-9);
        assert_eq!(rank_off, 2);
    }

    #[test]
    fn tridiag_bisection_matches_dense() {
        let diag = [0.5, -1.0, 2.0, 0.0, 1.5];
        let off = [1.0, 0.5, 2.0, 0.25];
        let n = diag.len();
        let mut a = DMat::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = diag[i];
            if i + 1 < n {
                a[(i, i + 1)] = off[i];
                a[(i + 1, i)] = off[i];
            }
        }
        let dense = symmetric_eigenvalues(&a).unwrap();
        let bisect = sym_tridiag_eigenvalues(&diag, &off);
        for (x, y) in dense.iter().zip(bisect.iter()) {
            assert!(close(*x, *y, 1e-9), "{x} vs {y}");
        }
    }

    #[test]
    fn power_norm_matches_dense() {
        let a = DMat::from_rows(&[&[2.0, 1.0, 0.0], &[1.0, -3.0, 0.5], &[0.0, 0.5, 1.0]]);
        let dense_norm = symmetric_eigenvalues(&a)
            .unwrap()
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        let power = sym_operator_norm(3, |v, w| {
            let out = a.mul_vec(v);
            w.copy_from_slice(&out);
        });
        assert!(close(dense_norm, power, 1e-8), "{dense_norm} vs {power}");
    }
}
