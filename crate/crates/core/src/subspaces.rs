//! Exact decomposition of the parity-even space into the joint kernel 𝒦,
//! joint range ℛ and non-commuting remainder 𝒩 of the projections Y±,
//! with the J-refinements, plus the two spectral consistency checks that
//! ride on the decomposition (the TJB multiset identity and the 2x2-block
//! eigenvalue correspondence on 𝒩⁺).
//!
//! All rank and membership decisions are exact rational eliminations; only
//! eigenvalue extraction at the very end uses floating point.

use crate::error::{Error, Result};
use crate::operators::{
    build_b, build_generator, build_t, build_y_minus, build_y_plus, even_block, odd_block,
    Generator, ScaledIntegerOperator,
};
use crate::rational::RatMat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

/// Bases (columns, exact integers) of the 𝒦/ℛ/𝒩 pieces of the even space
/// and of the J-refined eigenspaces. Coordinates are over the parity-even
/// orbit basis of (Z/nZ)^2.
pub struct SubspaceDecomposition {
    pub n: u32,
    pub dim_even: usize,
    pub kernel_both: RatMat,
    pub range_both: RatMat,
    pub non_commuting: RatMat,
    pub k_plus: RatMat,
    pub k_minus: RatMat,
    pub r_plus: RatMat,
    pub r_minus: RatMat,
    /// Odd-side joint kernel (for the T|𝒦⁻ = 0 statement).
    pub kernel_both_odd: RatMat,
    /// Diagonal Gram entries of the even basis (1 or 2).
    pub even_gram: Vec<i64>,
}

fn rat_from_op(op: &ScaledIntegerOperator) -> RatMat {
    RatMat::from_scaled_imat(&op.numer, op.denom)
}

fn shift_diag(m: &RatMat, s: i64) -> RatMat {
    let mut out = m.clone();
    let sr = BigRational::from_integer(BigInt::from(s));
    for i in 0..m.rows.min(m.cols) {
        out[(i, i)] -= &sr;
    }
    out
}

/// Basis of ker(a - s) ∩ ker(b - s).
fn joint_eigenspace(a: &RatMat, b: &RatMat, s: i64) -> RatMat {
    shift_diag(a, s).vcat(&shift_diag(b, s)).kernel_basis()
}

/// Within the column span of `space`, the subspace where `op` acts as
/// `scale` times the identity; returned in ambient coordinates.
fn eigen_sub(space: &RatMat, op: &RatMat, scale: i64) -> RatMat {
    if space.cols == 0 {
        return RatMat::zeros(space.rows, 0);
    }
    let image = op.mul(space);
    let shifted = image.sub(&space.scale(&BigRational::from_integer(BigInt::from(scale))));
    let coeffs = shifted.kernel_basis();
    space.mul(&coeffs)
}

pub fn knr_decomposition(n: u32) -> Result<SubspaceDecomposition> {
    let yp = even_block(&build_y_plus(n))?;
    let ym = even_block(&build_y_minus(n))?;
    let t = even_block(&build_t(n))?;
    let j = even_block(&build_generator(n, Generator::J))?;
    let dim_even = yp.dim();
    let even_gram: Vec<i64> = yp.basis.iter().map(|l| l.gram()).collect();

    let yp_r = rat_from_op(&yp);
    let ym_r = rat_from_op(&ym);
    let t_r = rat_from_op(&t);
    let j_r = rat_from_op(&j);

    let kernel_both = joint_eigenspace(&yp_r, &ym_r, 0);
    let range_both = joint_eigenspace(&yp_r, &ym_r, 1);

    // 𝒩 = G-orthogonal complement of 𝒦 ⊕ ℛ inside the even space.
    let span = kernel_both.hcat(&range_both);
    let mut weighted = span.transpose();
    for col in 0..dim_even {
        let g = BigRational::from_integer(BigInt::from(even_gram[col]));
        for row in 0..weighted.rows {
            let v = &weighted[(row, col)] * &g;
            weighted[(row, col)] = v;
        }
    }
    let non_commuting = weighted.kernel_basis();
    if kernel_both.cols + range_both.cols + non_commuting.cols != dim_even {
        return Err(Error::ContractViolation(format!(
            "KNR pieces do not fill the even space at n={n}"
        )));
    }

    let k_plus = eigen_sub(&kernel_both, &j_r, 1);
    let k_minus = eigen_sub(&kernel_both, &j_r, -1);
    let r_plus = eigen_sub(&range_both, &j_r, 1);
    let r_minus = eigen_sub(&range_both, &j_r, -1);
    if k_plus.cols + k_minus.cols != kernel_both.cols
        || r_plus.cols + r_minus.cols != range_both.cols
    {
        return Err(Error::ContractViolation(format!(
            "J does not split 𝒦/ℛ at n={n}"
        )));
    }

    // T⁺ acts as ∓1/2 on 𝒦^{+,±} and ±1 on ℛ^{+,±}, checked exactly.
    let check_action = |space: &RatMat, num: i64, den: i64, what: &str| -> Result<()> {
        if space.cols == 0 {
            return Ok(());
        }
        let image = t_r.mul(space);
        let scaled = space.scale(&BigRational::new(BigInt::from(num), BigInt::from(den)));
        if !image.sub(&scaled).is_zero() {
            return Err(Error::ContractViolation(format!(
                "T⁺ does not act as {num}/{den} on {what} at n={n}"
            )));
        }
        Ok(())
    };
    check_action(&k_plus, -1, 2, "K^{+,+}")?;
    check_action(&k_minus, 1, 2, "K^{+,-}")?;
    check_action(&r_plus, 1, 1, "R^{+,+}")?;
    check_action(&r_minus, -1, 1, "R^{+,-}")?;

    // Odd side: T and T* vanish on the joint kernel 𝒦⁻.
    let yp_o = odd_block(&build_y_plus(n))?;
    let ym_o = odd_block(&build_y_minus(n))?;
    let t_o = odd_block(&build_t(n))?;
    let t_o_adj = odd_block(&build_t(n).adjoint_full())?;
    let kernel_both_odd = joint_eigenspace(&rat_from_op(&yp_o), &rat_from_op(&ym_o), 0);
    if kernel_both_odd.cols > 0 {
        let img = rat_from_op(&t_o).mul(&kernel_both_odd);
        let img_adj = rat_from_op(&t_o_adj).mul(&kernel_both_odd);
        if !img.is_zero() || !img_adj.is_zero() {
            return Err(Error::ContractViolation(format!(
                "T does not vanish on 𝒦⁻ at n={n}"
            )));
        }
    }

    Ok(SubspaceDecomposition {
        n,
        dim_even,
        kernel_both,
        range_both,
        non_commuting,
        k_plus,
        k_minus,
        r_plus,
        r_minus,
        kernel_both_odd,
        even_gram,
    })
}

/// Restriction of an even-block operator to the column span of `basis`,
/// computed exactly. Errors when the span is not invariant.
pub fn restrict_exact(op: &ScaledIntegerOperator, basis: &RatMat) -> Result<RatMat> {
    let a = rat_from_op(op);
    let image = a.mul(basis);
    basis.solve_exact(&image).ok_or_else(|| {
        Error::ContractViolation("subspace is not invariant under the operator".into())
    })
}

/// Report of the multiset identity spec(2T⁺ + (T⁺)⁻¹) = spec(-3 J⁺B⁺).
#[derive(Clone, Debug)]
pub struct TjbReport {
    pub n: u32,
    pub dim: usize,
    pub worst_distance: f64,
}

/// Verifies that {2λ + 1/λ : λ ∈ spec(T⁺)} = {-3μ : μ ∈ spec(J⁺B⁺)} as
/// multisets within `tol`; a mismatch surfaces as an error carrying the
/// worst pairing distance.
pub fn tjb_consistency(n: u32, tol: f64) -> Result<TjbReport> {
    let t = even_block(&build_t(n))?;
    let j = even_block(&build_generator(n, Generator::J))?;
    let b = even_block(&build_b(n))?;
    let t_eig = t.eigenvalues()?;
    let lhs: Vec<Complex64> = t_eig
        .iter()
        .map(|&z| 2.0 * z + Complex64::new(1.0, 0.0) / z)
        .collect();
    let jb = j.mul(&b);
    let rhs: Vec<Complex64> = jb.eigenvalues()?.into_iter().map(|z| -3.0 * z).collect();
    let worst = crate::spectrum::assert_multisets_match(&lhs, &rhs, tol)?;
    Ok(TjbReport {
        n,
        dim: t.dim(),
        worst_distance: worst,
    })
}

/// Report of the 2x2-block eigenvalue correspondence on 𝒩⁺.
#[derive(Clone, Debug)]
pub struct AbtReport {
    pub n: u32,
    pub dim_n_plus: usize,
    pub b_values: Vec<f64>,
    pub worst_distance: f64,
}

/// Computes the joint spectrum of (B⁺, J⁺) on 𝒩⁺ and checks that mapping
/// each eigenvalue b of B⁺ restricted to the J = +1 part through
/// λ = (-3b ± √(9b² - 8)) / 4 reproduces spec(T⁺|𝒩⁺) within `tol`.
pub fn abt_prediction(n: u32, tol: f64) -> Result<AbtReport> {
    let knr = knr_decomposition(n)?;
    let nspace = &knr.non_commuting;
    if nspace.cols == 0 {
        return Ok(AbtReport {
            n,
            dim_n_plus: 0,
            b_values: Vec::new(),
            worst_distance: 0.0,
        });
    }
    let t = even_block(&build_t(n))?;
    let j = even_block(&build_generator(n, Generator::J))?;
    let b = even_block(&build_b(n))?;

    let t_restricted = restrict_exact(&t, nspace)?;
    let actual = crate::eigen::eigenvalues(&t_restricted.to_dmat())?;

    // The J = +1 part of 𝒩⁺; its B-eigenvalues drive the 2x2 blocks.
    let n_plus_plus = eigen_sub(nspace, &rat_from_op(&j), 1);
    if 2 * n_plus_plus.cols != nspace.cols {
        return Err(Error::ContractViolation(format!(
            "J = ±1 parts of 𝒩⁺ are not of equal dimension at n={n}"
        )));
    }
    let b_restricted = restrict_exact(&b, &n_plus_plus)?;
    let b_eig = crate::eigen::eigenvalues(&b_restricted.to_dmat())?;
    let mut b_values = Vec::with_capacity(b_eig.len());
    for z in &b_eig {
        if z.im.abs() > 1e-7 {
            return Err(Error::ContractViolation(format!(
                "nonreal eigenvalue {z} of the self-adjoint B⁺ block at n={n}"
            )));
        }
        b_values.push(z.re);
    }
    b_values.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut predicted = Vec::with_capacity(2 * b_values.len());
    for &bv in &b_values {
        let disc = 9.0 * bv * bv - 8.0;
        if disc >= 0.0 {
            let s = disc.sqrt();
            predicted.push(Complex64::new((-3.0 * bv + s) / 4.0, 0.0));
            predicted.push(Complex64::new((-3.0 * bv - s) / 4.0, 0.0));
        } else {
            let s = (-disc).sqrt();
            predicted.push(Complex64::new(-3.0 * bv / 4.0, s / 4.0));
            predicted.push(Complex64::new(-3.0 * bv / 4.0, -s / 4.0));
        }
    }
    let worst = crate::spectrum::assert_multisets_match(&predicted, &actual, tol)?;
    Ok(AbtReport {
        n,
        dim_n_plus: nspace.cols,
        b_values,
        worst_distance: worst,
    })
}

/// Orthogonality of two column families w.r.t. the diagonal Gram weights.
pub fn gram_orthogonal(a: &RatMat, b: &RatMat, gram: &[i64]) -> bool {
    for i in 0..a.cols {
        for j in 0..b.cols {
            let mut acc = BigRational::zero();
            for row in 0..a.rows {
                let w = BigRational::from_integer(BigInt::from(gram[row]));
                acc += &a[(row, i)] * &b[(row, j)] * w;
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}
