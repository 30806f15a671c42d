//! Exact characteristic polynomials and a polynomial root finder.
//!
//! This is the reference path used to cross-check the QR eigensolver:
//! Faddeev-LeVerrier in exact rational arithmetic produces the integer
//! coefficients of det(xI - A), and an Aberth-Ehrlich iteration locates
//! all complex roots. Nothing here shares code with [`crate::eigen`].

use crate::dense::IMat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficients of det(xI - A) for an integer matrix, constant term first,
/// leading coefficient 1.
pub fn char_poly_exact(a: &IMat) -> Vec<BigInt> {
    assert!(a.is_square());
    let n = a.rows;
    let to_rat = |v: i64| BigRational::from_integer(BigInt::from(v));
    // M_0 = I; c_{n-k} = -tr(A M_{k-1}) / k; M_k = A M_{k-1} + c_{n-k} I.
    let mut m: Vec<BigRational> = vec![BigRational::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = BigRational::one();
    }
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    for k in 1..=n {
        let mut am = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let a_il = a[(i, l)];
                if a_il == 0 {
                    continue;
                }
                let a_il = to_rat(a_il);
                for j in 0..n {
                    let t = &a_il * &m[l * n + j];
                    am[i * n + j] += t;
                }
            }
        }
        let mut trace = BigRational::zero();
        for i in 0..n {
            trace += &am[i * n + i];
        }
        let c = -trace / BigRational::from_integer(BigInt::from(k as i64));
        coeffs[n - k] = c.clone();
        for i in 0..n {
            am[i * n + i] += &c;
        }
        m = am;
    }
    coeffs
        .into_iter()
        .map(|c| {
            assert!(c.denom().is_one(), "characteristic polynomial is integral");
            c.numer().clone()
        })
        .collect()
}

/// All complex roots of a polynomial with real coefficients (constant term
/// first) by the Aberth-Ehrlich simultaneous iteration.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg] == 0.0 {
        deg -= 1;
    }
    // Factor out roots at zero first.
    let mut low = 0;
    while low < deg && coeffs[low] == 0.0 {
        low += 1;
    }
    let work: Vec<f64> = coeffs[low..=deg].to_vec();
    let n = work.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    if n == 0 {
        return roots;
    }
    let lead = work[n];
    let radius = 1.0
        + work[..n]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(radius * 0.7, angle)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(work[n], 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            dp = dp * x + p;
            p = p * x + work[k];
        }
        (p, dp)
    };
    for _iter in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulse += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() < 1e-300 {
                newton
            } else {
                newton / denom
            };
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-14 {
            break;
        }
    }
    // Real-coefficient polynomials have conjugation-closed root sets; snap
    // imaginary debris on roots that are genuinely real.
    for zi in z.iter_mut() {
        if zi.im != 0.0 && zi.im.abs() < 1e-12 * zi.re.abs().max(1.0) {
            let (p_re, _) = eval(Complex64::new(zi.re, 0.0));
            let (p_z, _) = eval(*zi);
            if p_re.norm() <= p_z.norm() * 4.0 {
                zi.im = 0.0;
            }
        }
    }
    roots.extend(z);
    roots
}

/// Eigenvalues of an integer matrix through the exact characteristic
/// polynomial.
pub fn eigen_oracle(a: &IMat) -> Vec<Complex64> {
    let coeffs: Vec<f64> = char_poly_exact(a)
        .iter()
        .map(|c| c.to_f64().expect("coefficient fits in f64"))
        .collect();
    poly_roots(&coeffs)
}

/// Greedy multiset match between two complex spectra; returns the largest
/// pairing distance, or None when the lengths differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.sort_by(|&i, &j| a[j].norm().partial_cmp(&a[i].norm()).unwrap());
    for &i in &idx {
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (j, u) in used.iter().enumerate() {
            if !*u {
                let d = (a[i] - b[j]).norm();
                if d < best_d {
                    best_d = d;
                    best = Some(j);
                }
            }
        }
        let j = best?;
        used[j] = true;
        worst = worst.max(best_d);
    }
    Some(worst)
}
