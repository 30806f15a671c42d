//! Exact matrices of the unitaries L, R, J, I and of the derived operators
//! T, Y±, A, B on (Z/nZ)^2 and on Λ(n), plus the parity and J splittings.
//!
//! Every operator is held as an integer matrix over a labeled basis with a
//! single global denominator, so all algebraic identities can be verified
//! with no tolerance at all. The representation convention is the pullback
//! one, O f = f ∘ O⁻¹: column x of a permutation operator carries a single
//! 1 in row O(x).

use crate::dense::{CMat, DMat, IMat};
use crate::error::{Error, Result};
use crate::residues::{enumerate_lambda, LatticePoint};
use num_complex::Complex64;

/// The six generator maps on (Z/nZ)^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// (l, r) -> (l + r, r)
    L,
    /// (l, r) -> (l, l + r)
    R,
    LInv,
    RInv,
    /// (l, r) -> (r, -l)
    J,
    /// (l, r) -> (-l, -r)
    I,
}

impl Generator {
    pub fn apply(self, x: LatticePoint, n: u32) -> LatticePoint {
        let (a, b) = (x.a as i64, x.b as i64);
        match self {
            Generator::L => LatticePoint::new(a + b, b, n),
            Generator::R => LatticePoint::new(a, a + b, n),
            Generator::LInv => LatticePoint::new(a - b, b, n),
            Generator::RInv => LatticePoint::new(a, b - a, n),
            Generator::J => LatticePoint::new(b, -a, n),
            Generator::I => LatticePoint::new(-a, -b, n),
        }
    }
}

/// Applies a word of generators, rightmost factor first (matrix order):
/// `word_apply(&[RInv, L], x)` computes R⁻¹(L(x)).
pub fn word_apply(word: &[Generator], x: LatticePoint, n: u32) -> LatticePoint {
    let mut y = x;
    for g in word.iter().rev() {
        y = g.apply(y, n);
    }
    y
}

/// Basis vector labels for [`ScaledIntegerOperator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    /// Delta function at a point.
    Point(LatticePoint),
    /// Unnormalized even combination 1_x + 1_{-x} (x is the smaller index).
    EvenPair(LatticePoint),
    /// Delta at a 2-torsion point (its own negative).
    FixedPoint(LatticePoint),
    /// Unnormalized odd combination 1_x - 1_{-x}.
    OddPair(LatticePoint),
}

impl BasisLabel {
    pub fn point(&self) -> LatticePoint {
        match self {
            BasisLabel::Point(x)
            | BasisLabel::EvenPair(x)
            | BasisLabel::FixedPoint(x)
            | BasisLabel::OddPair(x) => *x,
        }
    }

    /// Squared length of the (unnormalized) basis vector.
    pub fn gram(&self) -> i64 {
        match self {
            BasisLabel::Point(_) | BasisLabel::FixedPoint(_) => 1,
            BasisLabel::EvenPair(_) | BasisLabel::OddPair(_) => 2,
        }
    }

    pub fn label_string(&self) -> String {
        let x = self.point();
        match self {
            BasisLabel::Point(_) => format!("({},{})", x.a, x.b),
            BasisLabel::EvenPair(_) => format!("even({},{})", x.a, x.b),
            BasisLabel::FixedPoint(_) => format!("fix({},{})", x.a, x.b),
            BasisLabel::OddPair(_) => format!("odd({},{})", x.a, x.b),
        }
    }
}

/// An exact operator: integer matrix over a labeled basis divided by a
/// positive integer denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledIntegerOperator {
    pub modulus: u32,
    pub denom: i64,
    pub numer: IMat,
    pub basis: Vec<BasisLabel>,
}

impl ScaledIntegerOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn identity_like(&self) -> IMat {
        IMat::identity(self.dim())
    }

    /// Transpose of the full matrix. On a `Point` basis (orthonormal) this
    /// is the true adjoint.
    pub fn adjoint_full(&self) -> ScaledIntegerOperator {
        ScaledIntegerOperator {
            modulus: self.modulus,
            denom: self.denom,
            numer: self.numer.transpose(),
            basis: self.basis.clone(),
        }
    }

    pub fn is_point_basis(&self) -> bool {
        self.basis
            .iter()
            .all(|l| matches!(l, BasisLabel::Point(_)))
    }

    /// Operator product (denominators multiply).
    pub fn mul(&self, other: &ScaledIntegerOperator) -> ScaledIntegerOperator {
        assert_eq!(self.dim(), other.dim());
        ScaledIntegerOperator {
            modulus: self.modulus,
            denom: self.denom * other.denom,
            numer: self.numer.mul(&other.numer),
            basis: self.basis.clone(),
        }
    }

    /// Matrix in the orthonormalized basis (pair vectors divided by √2).
    pub fn to_orthonormal_dmat(&self) -> DMat {
        let n = self.dim();
        let mut out = DMat::zeros(n, n);
        let scale: Vec<f64> = self.basis.iter().map(|l| (l.gram() as f64).sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.numer[(i, j)] as f64 * scale[i] / (scale[j] * self.denom as f64);
            }
        }
        out
    }

    /// Eigenvalues in the underlying (orthonormalized) basis.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        crate::eigen::eigenvalues(&self.to_orthonormal_dmat())
    }
}

fn point_index_map(points: &[LatticePoint], n: u32) -> Vec<Option<usize>> {
    let mut map = vec![None; (n as usize) * (n as usize)];
    for (i, p) in points.iter().enumerate() {
        map[p.index(n)] = Some(i);
    }
    map
}

fn perm_operator(n: u32, map: impl Fn(LatticePoint) -> LatticePoint) -> ScaledIntegerOperator {
    let size = (n as usize) * (n as usize);
    let mut numer = IMat::zeros(size, size);
    let mut basis = Vec::with_capacity(size);
    for idx in 0..size {
        let x = LatticePoint::from_index(idx, n);
        basis.push(BasisLabel::Point(x));
        let y = map(x);
        numer[(y.index(n), idx)] = 1;
    }
    ScaledIntegerOperator {
        modulus: n,
        denom: 1,
        numer,
        basis,
    }
}

/// Permutation operator of a single generator on the full lattice.
pub fn build_generator(n: u32, which: Generator) -> ScaledIntegerOperator {
    perm_operator(n, |x| which.apply(x, n))
}

/// Permutation operator of a word of generators (rightmost first).
pub fn build_word(n: u32, word: &[Generator]) -> ScaledIntegerOperator {
    perm_operator(n, |x| word_apply(word, x, n))
}

/// T = (L + R) / 2.
pub fn build_t(n: u32) -> ScaledIntegerOperator {
    let l = build_generator(n, Generator::L);
    let r = build_generator(n, Generator::R);
    ScaledIntegerOperator {
        modulus: n,
        denom: 2,
        numer: l.numer.add(&r.numer),
        basis: l.basis,
    }
}

/// Y₊ = (3·1 - I + 2 R⁻¹L + 2 L⁻¹R) / 6.
pub fn build_y_plus(n: u32) -> ScaledIntegerOperator {
    let id = IMat::identity((n as usize) * (n as usize));
    let i = build_generator(n, Generator::I);
    let rl = build_word(n, &[Generator::RInv, Generator::L]);
    let lr = build_word(n, &[Generator::LInv, Generator::R]);
    ScaledIntegerOperator {
        modulus: n,
        denom: 6,
        numer: id
            .scale(3)
            .sub(&i.numer)
            .add(&rl.numer.scale(2))
            .add(&lr.numer.scale(2)),
        basis: i.basis,
    }
}

/// Y₋ = J* Y₊ J.
pub fn build_y_minus(n: u32) -> ScaledIntegerOperator {
    let y = build_y_plus(n);
    let j = build_generator(n, Generator::J);
    ScaledIntegerOperator {
        modulus: n,
        denom: 6,
        numer: j.numer.transpose().mul(&y.numer).mul(&j.numer),
        basis: y.basis,
    }
}

/// A = Y₊ - Y₋.
pub fn build_a(n: u32) -> ScaledIntegerOperator {
    let yp = build_y_plus(n);
    let ym = build_y_minus(n);
    ScaledIntegerOperator {
        modulus: n,
        denom: 6,
        numer: yp.numer.sub(&ym.numer),
        basis: yp.basis,
    }
}

/// B = 1 - Y₊ - Y₋.
pub fn build_b(n: u32) -> ScaledIntegerOperator {
    let yp = build_y_plus(n);
    let ym = build_y_minus(n);
    let id = IMat::identity(yp.dim());
    ScaledIntegerOperator {
        modulus: n,
        denom: 6,
        numer: id.scale(6).sub(&yp.numer).sub(&ym.numer),
        basis: yp.basis,
    }
}

/// Restriction of a full-lattice operator to the Λ(n) block, after checking
/// that no matrix mass connects Λ(n) with its complement.
pub fn restrict_to_lambda(op: &ScaledIntegerOperator) -> Result<ScaledIntegerOperator> {
    let n = op.modulus;
    if !op.is_point_basis() || op.dim() != (n as usize) * (n as usize) {
        return Err(Error::ContractViolation(
            "restrict_to_lambda requires a full-lattice point basis".into(),
        ));
    }
    let lambda = enumerate_lambda(n)?;
    let in_lambda: Vec<bool> = (0..op.dim())
        .map(|idx| LatticePoint::from_index(idx, n).gcd_stratum(n) == 1)
        .collect();
    for (row_i, &row_in) in in_lambda.iter().enumerate() {
        for (col_j, &col_in) in in_lambda.iter().enumerate() {
            if row_in != col_in && op.numer[(row_i, col_j)] != 0 {
                return Err(Error::ContractViolation(format!(
                    "operator does not leave Λ({n}) invariant at entry ({row_i},{col_j})"
                )));
            }
        }
    }
    let keep: Vec<usize> = lambda.iter().map(|p| p.index(n)).collect();
    let dim = keep.len();
    let mut numer = IMat::zeros(dim, dim);
    for (i, &ri) in keep.iter().enumerate() {
        for (j, &cj) in keep.iter().enumerate() {
            numer[(i, j)] = op.numer[(ri, cj)];
        }
    }
    Ok(ScaledIntegerOperator {
        modulus: n,
        denom: op.denom,
        numer,
        basis: lambda.into_iter().map(BasisLabel::Point).collect(),
    })
}

/// Negation-orbit bases of the even and odd subspaces over a set of points.
pub struct ParityDecomposition {
    pub n: u32,
    pub even: Vec<BasisLabel>,
    pub odd: Vec<BasisLabel>,
}

pub fn parity_basis(points: &[LatticePoint], n: u32) -> ParityDecomposition {
    let index_of = point_index_map(points, n);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (i, &x) in points.iter().enumerate() {
        let neg = x.neg(n);
        if neg == x {
            even.push(BasisLabel::FixedPoint(x));
        } else {
            let j = index_of[neg.index(n)].expect("basis closed under negation");
            if i < j {
                even.push(BasisLabel::EvenPair(x));
                odd.push(BasisLabel::OddPair(x));
            }
        }
    }
    ParityDecomposition { n, even, odd }
}

fn op_points(op: &ScaledIntegerOperator) -> Result<Vec<LatticePoint>> {
    if !op.is_point_basis() {
        return Err(Error::ContractViolation(
            "operation requires a point basis".into(),
        ));
    }
    Ok(op.basis.iter().map(|l| l.point()).collect())
}

fn parity_block(
    op: &ScaledIntegerOperator,
    labels: &[BasisLabel],
    odd_signs: bool,
) -> ScaledIntegerOperator {
    let n = op.modulus;
    let points: Vec<LatticePoint> = op.basis.iter().map(|l| l.point()).collect();
    let index_of = point_index_map(&points, n);
    let dim = labels.len();
    let mut numer = IMat::zeros(dim, dim);
    for (j, lab) in labels.iter().enumerate() {
        let x = lab.point();
        let xi = index_of[x.index(n)].unwrap();
        // Image of the (unnormalized) basis vector under the numerator.
        let mut image = vec![0i64; points.len()];
        for (row, val) in image.iter_mut().enumerate() {
            *val = op.numer[(row, xi)];
        }
        match lab {
            BasisLabel::FixedPoint(_) => {}
            _ => {
                let ni = index_of[x.neg(n).index(n)].unwrap();
                let sign = if odd_signs { -1 } else { 1 };
                for (row, val) in image.iter_mut().enumerate() {
                    *val += sign * op.numer[(row, ni)];
                }
            }
        }
        for (i, lab_i) in labels.iter().enumerate() {
            let ri = index_of[lab_i.point().index(n)].unwrap();
            numer[(i, j)] = image[ri];
        }
    }
    ScaledIntegerOperator {
        modulus: n,
        denom: op.denom,
        numer,
        basis: labels.to_vec(),
    }
}

/// Splits a point-basis operator into its even and odd parity blocks.
/// The operator must commute with the negation permutation, exactly.
pub fn parity_split(
    op: &ScaledIntegerOperator,
) -> Result<(ScaledIntegerOperator, ScaledIntegerOperator)> {
    Ok((even_block(op)?, odd_block(op)?))
}

pub fn even_block(op: &ScaledIntegerOperator) -> Result<ScaledIntegerOperator> {
    check_negation_commutes(op)?;
    let points = op_points(op)?;
    let par = parity_basis(&points, op.modulus);
    Ok(parity_block(op, &par.even, false))
}

pub fn odd_block(op: &ScaledIntegerOperator) -> Result<ScaledIntegerOperator> {
    check_negation_commutes(op)?;
    let points = op_points(op)?;
    let par = parity_basis(&points, op.modulus);
    Ok(parity_block(op, &par.odd, true))
}

fn check_negation_commutes(op: &ScaledIntegerOperator) -> Result<()> {
    let n = op.modulus;
    let points = op_points(op)?;
    let index_of = point_index_map(&points, n);
    for (i, x) in points.iter().enumerate() {
        let Some(ni) = index_of[x.neg(n).index(n)] else {
            return Err(Error::ContractViolation(
                "basis not closed under negation".into(),
            ));
        };
        for (j, y) in points.iter().enumerate() {
            let nj = index_of[y.neg(n).index(n)].unwrap();
            if op.numer[(i, j)] != op.numer[(ni, nj)] {
                return Err(Error::ContractViolation(
                    "operator does not commute with the inversion I".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Result of splitting an even-block operator along the J = ±1 eigenspaces.
pub enum JSplit {
    /// The operator commutes with J: two blocks.
    Commuting {
        plus: ScaledIntegerOperator,
        minus: ScaledIntegerOperator,
    },
    /// Non-commuting case (T⁺): the operator rewritten over the concatenated
    /// (J=+1, J=-1) basis, exposing the 2x2 block structure.
    Paired {
        transformed: ScaledIntegerOperator,
        dim_plus: usize,
    },
}

/// Signed-permutation orbit basis of the J = ±1 eigenspaces on an even
/// (or odd) parity basis. Returns (plus, minus) integer column bases.
fn j_eigenbasis(j_even: &ScaledIntegerOperator) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let dim = j_even.dim();
    if j_even.denom != 1 {
        return Err(Error::ContractViolation(
            "J block must be a signed permutation".into(),
        ));
    }
    // j e_i = sign(i) e_{target(i)}
    let mut target = vec![usize::MAX; dim];
    let mut sign = vec![0i64; dim];
    for col in 0..dim {
        let mut found = 0;
        for row in 0..dim {
            let v = j_even.numer[(row, col)];
            if v != 0 {
                if v.abs() != 1 {
                    return Err(Error::ContractViolation(
                        "J block entries must be ±1".into(),
                    ));
                }
                target[col] = row;
                sign[col] = v;
                found += 1;
            }
        }
        if found != 1 {
            return Err(Error::ContractViolation(
                "J block must have one entry per column".into(),
            ));
        }
    }
    // Involution check: j² = 1.
    if !j_even.numer.mul(&j_even.numer).eq(&IMat::identity(dim)) {
        return Err(Error::ContractViolation("J block is not an involution".into()));
    }
    let mut plus: Vec<Vec<i64>> = Vec::new();
    let mut minus: Vec<Vec<i64>> = Vec::new();
    for i in 0..dim {
        let k = target[i];
        if k == i {
            let mut v = vec![0i64; dim];
            v[i] = 1;
            if sign[i] == 1 {
                plus.push(v);
            } else {
                minus.push(v);
            }
        } else if i < k {
            let s = sign[i];
            let mut vp = vec![0i64; dim];
            vp[i] = 1;
            vp[k] = s;
            plus.push(vp);
            let mut vm = vec![0i64; dim];
            vm[i] = 1;
            vm[k] = -s;
            minus.push(vm);
        }
    }
    Ok((plus, minus))
}

/// Splits an even-block operator along J = ±1 when it commutes with J;
/// otherwise returns the paired 2x2-block form.
pub fn j_split_even(
    op_even: &ScaledIntegerOperator,
    j_even: &ScaledIntegerOperator,
) -> Result<JSplit> {
    let commutes = op_even
        .numer
        .mul(&j_even.numer)
        .eq(&j_even.numer.mul(&op_even.numer));
    let (plus, minus) = j_eigenbasis(j_even)?;
    if commutes {
        let restrict = |vecs: &[Vec<i64>]| -> ScaledIntegerOperator {
            // Representative-coordinate extraction: each basis vector has a
            // leading +1 coordinate that no other vector of the family uses.
            let reps: Vec<usize> = vecs
                .iter()
                .map(|v| v.iter().position(|&x| x != 0).unwrap())
                .collect();
            let dim = vecs.len();
            let mut numer = IMat::zeros(dim, dim);
            for (jcol, v) in vecs.iter().enumerate() {
                let image = op_even.numer.mul_vec(v);
                for (irow, &rep) in reps.iter().enumerate() {
                    numer[(irow, jcol)] = image[rep];
                }
            }
            ScaledIntegerOperator {
                modulus: op_even.modulus,
                denom: op_even.denom,
                numer,
                basis: reps
                    .iter()
                    .map(|&r| op_even.basis[r])
                    .collect(),
            }
        };
        Ok(JSplit::Commuting {
            plus: restrict(&plus),
            minus: restrict(&minus),
        })
    } else {
        // Transform into the concatenated (plus, minus) basis:
        // M = (CᵀC)⁻¹ Cᵀ N C / denom, with CᵀC diagonal with entries 1 or 2.
        let dim = op_even.dim();
        let cols: Vec<&Vec<i64>> = plus.iter().chain(minus.iter()).collect();
        assert_eq!(cols.len(), dim);
        let mut c = IMat::zeros(dim, dim);
        for (j, v) in cols.iter().enumerate() {
            for i in 0..dim {
                c[(i, j)] = v[i];
            }
        }
        let ct = c.transpose();
        let ctnc = ct.mul(&op_even.numer).mul(&c);
        let grams: Vec<i64> = cols
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum::<i64>())
            .collect();
        let mut numer = IMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let scaled = 2 * ctnc[(i, j)];
                assert_eq!(scaled % grams[i], 0);
                numer[(i, j)] = scaled / grams[i];
            }
        }
        Ok(JSplit::Paired {
            transformed: ScaledIntegerOperator {
                modulus: op_even.modulus,
                denom: 2 * op_even.denom,
                numer,
                basis: op_even.basis.clone(),
            },
            dim_plus: plus.len(),
        })
    }
}

/// Requests the commuting J-split and errors when the operator does not
/// commute with J.
pub fn j_split_commuting(
    op_even: &ScaledIntegerOperator,
    j_even: &ScaledIntegerOperator,
) -> Result<(ScaledIntegerOperator, ScaledIntegerOperator)> {
    match j_split_even(op_even, j_even)? {
        JSplit::Commuting { plus, minus } => Ok((plus, minus)),
        JSplit::Paired { .. } => Err(Error::ContractViolation(
            "commuting J-split requested for a non-commuting operator".into(),
        )),
    }
}

/// The full zero-tolerance identity suite at one modulus: hexagon and
/// order-three relations for the permutations, the multiplication rules
/// 8T*T = 1 + I + 6Y₊ and (T⁻)*T⁻ = (3/4)Y₊⁻, idempotency of Y±, the
/// supersymmetry pair A² + B² = 1 / AB + BA = 0, invertibility of T⁺ with
/// (T⁺)⁻¹ = 2(T⁺)* - J⁺, and both orderings of 2T⁺ + (T⁺)⁻¹ = -3J⁺B⁺.
/// Everything is checked over the integers after clearing denominators.
pub fn exact_identity_suite(n: u32) -> Result<()> {
    let fail = |what: &str| -> Result<()> {
        Err(Error::ContractViolation(format!("{what} fails at n={n}")))
    };
    let j = build_generator(n, Generator::J);
    let i = build_generator(n, Generator::I);
    if build_word(n, &[Generator::L, Generator::RInv, Generator::L]).numer != j.numer {
        return fail("J = L R⁻¹ L");
    }
    if build_word(n, &[Generator::RInv, Generator::L, Generator::RInv]).numer != j.numer {
        return fail("J = R⁻¹ L R⁻¹");
    }
    if build_word(
        n,
        &[Generator::I, Generator::LInv, Generator::R, Generator::LInv],
    )
    .numer
        != j.numer
    {
        return fail("J = I L⁻¹ R L⁻¹");
    }
    let rl = build_word(n, &[Generator::RInv, Generator::L]);
    let lr = build_word(n, &[Generator::LInv, Generator::R]);
    if rl.numer.mul(&rl.numer).mul(&rl.numer) != i.numer {
        return fail("(R⁻¹L)³ = I");
    }
    if lr.numer.mul(&lr.numer).mul(&lr.numer) != i.numer {
        return fail("(L⁻¹R)³ = I");
    }
    let t = build_t(n);
    let y_plus = build_y_plus(n);
    let y_minus = build_y_minus(n);
    if t.numer.transpose().mul(&t.numer).scale(2)
        != IMat::identity(t.dim()).add(&i.numer).add(&y_plus.numer)
    {
        return fail("8T*T = 1 + I + 6Y₊");
    }
    if y_plus.numer.mul(&y_plus.numer) != y_plus.numer.scale(6) {
        return fail("Y₊² = Y₊");
    }
    if y_minus.numer.mul(&y_minus.numer) != y_minus.numer.scale(6) {
        return fail("Y₋² = Y₋");
    }
    let a = build_a(n);
    let b = build_b(n);
    if a.numer.mul(&a.numer).add(&b.numer.mul(&b.numer)) != IMat::identity(a.dim()).scale(36) {
        return fail("A² + B² = 1");
    }
    if !a.numer.mul(&b.numer).add(&b.numer.mul(&a.numer)).is_zero() {
        return fail("AB + BA = 0");
    }
    let t_even = even_block(&t)?;
    let t_adj_even = even_block(&t.adjoint_full())?;
    let j_even = even_block(&j)?;
    let b_even = even_block(&b)?;
    let dim = t_even.dim();
    let two = IMat::identity(dim).scale(2);
    if t_even.numer.mul(&t_adj_even.numer.sub(&j_even.numer)) != two {
        return fail("T⁺ (2(T⁺)* - J⁺) = 1");
    }
    if t_adj_even.numer.sub(&j_even.numer).mul(&t_even.numer) != two {
        return fail("(2(T⁺)* - J⁺) T⁺ = 1");
    }
    // With (T⁺)⁻¹ = 2(T⁺)* - J⁺ established, the remaining identity clears
    // to 2(Nt⁺ + Nt*⁺ - Nj⁺) = -Nj⁺Nb⁺ = -Nb⁺Nj⁺.
    let tjb = t_even
        .numer
        .add(&t_adj_even.numer)
        .sub(&j_even.numer)
        .scale(2);
    if tjb != j_even.numer.mul(&b_even.numer).scale(-1) {
        return fail("2T⁺ + (T⁺)⁻¹ = -3J⁺B⁺");
    }
    if tjb != b_even.numer.mul(&j_even.numer).scale(-1) {
        return fail("2T⁺ + (T⁺)⁻¹ = -3B⁺J⁺");
    }
    let t_odd = odd_block(&t)?;
    let t_adj_odd = odd_block(&t.adjoint_full())?;
    let y_odd = odd_block(&y_plus)?;
    if t_adj_odd.numer.mul(&t_odd.numer).scale(2) != y_odd.numer {
        return fail("(T⁻)*T⁻ = (3/4) Y₊⁻");
    }
    Ok(())
}

/// Unitary Fourier transform on (Z/nZ)^2 in the lexicographic point basis:
/// entries n⁻¹ exp(-2πi <k,l> / n).
pub fn build_fourier(n: u32) -> CMat {
    let size = (n as usize) * (n as usize);
    let mut f = CMat::zeros(size, size);
    let scale = 1.0 / n as f64;
    for li in 0..size {
        let l = LatticePoint::from_index(li, n);
        for ki in 0..size {
            let k = LatticePoint::from_index(ki, n);
            let phase = -2.0 * std::f64::consts::PI
                * ((k.a as u64 * l.a as u64 + k.b as u64 * l.b as u64) % n as u64) as f64
                / n as f64;
            f[(li, ki)] = Complex64::from_polar(scale, phase);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residues::LatticePoint;

    fn pt(a: u32, b: u32) -> LatticePoint {
        LatticePoint { a, b }
    }

    #[test]
    fn generator_point_maps() {
        // n=2: L maps (1,1) to (0,1).
        assert_eq!(Generator::L.apply(pt(1, 1), 2), pt(0, 1));
        // n=3: J maps (1,0) to (0,2).
        assert_eq!(Generator::J.apply(pt(1, 0), 3), pt(0, 2));
        // I fixes the origin for any n.
        assert_eq!(Generator::I.apply(pt(0, 0), 7), pt(0, 0));
    }

    #[test]
    fn t2_matches_reference_matrix() {
        let t = build_t(2);
        let expect = [[2, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 1, 1, 0]];
        assert_eq!(t.denom, 2);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(t.numer[(i, j)], expect[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn t3_matches_reference_matrix() {
        let t = build_t(3);
        let expect = [
            [2, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0, 0, 1, 0],
            [0, 0, 1, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 1, 0, 0, 0],
            [0, 1, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 1, 0, 0, 0, 1],
            [0, 0, 1, 0, 0, 0, 1, 0, 0],
        ];
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(t.numer[(i, j)], expect[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn doubled_t_row_and_column_sums() {
        for n in [2u32, 3, 5, 6] {
            let t = build_t(n);
            for i in 0..t.dim() {
                let row: i64 = (0..t.dim()).map(|j| t.numer[(i, j)]).sum();
                let col: i64 = (0..t.dim()).map(|j| t.numer[(j, i)]).sum();
                assert_eq!(row, 2);
                assert_eq!(col, 2);
            }
        }
    }

    #[test]
    fn hexagon_identities() {
        for n in 1..=12u32 {
            let j = build_generator(n, Generator::J);
            let lhs1 = build_word(n, &[Generator::L, Generator::RInv, Generator::L]);
            let lhs2 = build_word(n, &[Generator::RInv, Generator::L, Generator::RInv]);
            assert_eq!(j.numer, lhs1.numer, "J = L R⁻¹ L at n={n}");
            assert_eq!(j.numer, lhs2.numer, "J = R⁻¹ L R⁻¹ at n={n}");
            let lhs3 = build_word(
                n,
                &[Generator::I, Generator::LInv, Generator::R, Generator::LInv],
            );
            assert_eq!(j.numer, lhs3.numer, "J = I L⁻¹ R L⁻¹ at n={n}");
        }
    }

    #[test]
    fn order_three_rotations() {
        for n in 1..=12u32 {
            let rl = build_word(n, &[Generator::RInv, Generator::L]);
            let lr = build_word(n, &[Generator::LInv, Generator::R]);
            let i = build_generator(n, Generator::I);
            assert_eq!(rl.numer.mul(&rl.numer).mul(&rl.numer), i.numer);
            assert_eq!(lr.numer.mul(&lr.numer).mul(&lr.numer), i.numer);
        }
    }

    #[test]
    fn y_plus_is_projection_and_tt_identity() {
        for n in 1..=8u32 {
            let y = build_y_plus(n);
            // Y² = Y as 36 Y² = 6 · (6 Y).
            assert_eq!(y.numer.mul(&y.numer), y.numer.scale(6), "Y₊²=Y₊ n={n}");
            let ym = build_y_minus(n);
            assert_eq!(ym.numer.mul(&ym.numer), ym.numer.scale(6), "Y₋²=Y₋ n={n}");
            // 8 T*T = 1 + I + 6 Y₊  ⟺  2 NtᵀNt = 1 + P_I + Ny.
            let t = build_t(n);
            let i = build_generator(n, Generator::I);
            let lhs = t.numer.transpose().mul(&t.numer).scale(2);
            let rhs = IMat::identity(t.dim()).add(&i.numer).add(&y.numer);
            assert_eq!(lhs, rhs, "8T*T identity n={n}");
        }
    }

    #[test]
    fn a_b_supersymmetry() {
        for n in 1..=8u32 {
            let a = build_a(n);
            let b = build_b(n);
            let id36 = IMat::identity(a.dim()).scale(36);
            assert_eq!(
                a.numer.mul(&a.numer).add(&b.numer.mul(&b.numer)),
                id36,
                "A²+B²=1 n={n}"
            );
            assert!(
                a.numer.mul(&b.numer).add(&b.numer.mul(&a.numer)).is_zero(),
                "AB+BA=0 n={n}"
            );
        }
    }

    #[test]
    fn lambda_restriction() {
        let t1 = restrict_to_lambda(&build_t(1)).unwrap();
        assert_eq!(t1.dim(), 1);
        assert_eq!(t1.numer[(0, 0)], 2);
        assert_eq!(t1.denom, 2);

        let t3 = restrict_to_lambda(&build_t(3)).unwrap();
        assert_eq!(t3.dim(), 8);
        // Equals the 9x9 matrix with row/column 0 deleted.
        let full = build_t(3);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(t3.numer[(i, j)], full.numer[(i + 1, j + 1)]);
            }
        }

        let t2 = restrict_to_lambda(&build_t(2)).unwrap();
        assert_eq!(t2.dim(), 3);
        for i in 0..3 {
            let row: i64 = (0..3).map(|j| t2.numer[(i, j)]).sum();
            assert_eq!(row, 2, "t̃(2) chain row sums");
        }
    }

    #[test]
    fn parity_dimensions() {
        let (even2, odd2) = parity_split(&build_t(2)).unwrap();
        assert_eq!(even2.dim(), 4);
        assert_eq!(odd2.dim(), 0);
        let (even3, odd3) = parity_split(&build_t(3)).unwrap();
        assert_eq!(even3.dim(), 5);
        assert_eq!(odd3.dim(), 4);
        for n in 2..=10u32 {
            let (e, o) = parity_split(&build_t(n)).unwrap();
            let f = if n % 2 == 0 { 4 } else { 1 };
            assert_eq!(e.dim(), ((n * n + f) / 2) as usize);
            assert_eq!(o.dim(), ((n * n - f) / 2) as usize);
        }
    }

    #[test]
    fn parity_split_is_spectrum_partition() {
        let t = build_t(3);
        let (e, o) = parity_split(&t).unwrap();
        let mut all = e.eigenvalues().unwrap();
        all.extend(o.eigenvalues().unwrap());
        let full = t.eigenvalues().unwrap();
        let d = crate::charpoly::multiset_distance(&all, &full).unwrap();
        assert!(d < 1e-8, "parity spectra must partition: {d}");
    }

    #[test]
    fn j_commutes_with_b_not_with_t() {
        for n in [3u32, 4, 6] {
            let j_even = even_block(&build_generator(n, Generator::J)).unwrap();
            let b_even = even_block(&build_b(n)).unwrap();
            match j_split_even(&b_even, &j_even).unwrap() {
                JSplit::Commuting { plus, minus } => {
                    assert_eq!(plus.dim() + minus.dim(), b_even.dim());
                }
                _ => panic!("[B⁺, J⁺] = 0 expected at n={n}"),
            }
        }
        let j_even = even_block(&build_generator(3, Generator::J)).unwrap();
        let t_even = even_block(&build_t(3)).unwrap();
        match j_split_even(&t_even, &j_even).unwrap() {
            JSplit::Paired { transformed, .. } => {
                assert_eq!(transformed.dim(), t_even.dim());
                assert_eq!(transformed.denom, 2 * t_even.denom);
            }
            _ => panic!("[T⁺, J⁺] ≠ 0 expected at n=3"),
        }
    }

    #[test]
    fn even_block_identities() {
        for n in 1..=8u32 {
            let t_even = even_block(&build_t(n)).unwrap();
            let t_adj_even = even_block(&build_t(n).adjoint_full()).unwrap();
            let j_even = even_block(&build_generator(n, Generator::J)).unwrap();
            let b_even = even_block(&build_b(n)).unwrap();
            let dim = t_even.dim();
            // T⁺ (2(T⁺)* - J⁺) = 1  ⟺  Nt⁺ (Nt*⁺ - Nj⁺) = 2.
            let lhs = t_even.numer.mul(&t_adj_even.numer.sub(&j_even.numer));
            assert_eq!(lhs, IMat::identity(dim).scale(2), "invertibility n={n}");
            let lhs_left = t_adj_even.numer.sub(&j_even.numer).mul(&t_even.numer);
            assert_eq!(lhs_left, IMat::identity(dim).scale(2));
            // 2T⁺ + (T⁺)⁻¹ = -3 J⁺B⁺ = -3 B⁺J⁺, with (T⁺)⁻¹ = 2(T⁺)* - J⁺:
            // 2(Nt⁺ + Nt*⁺ - Nj⁺) = -Nj⁺ Nb⁺ = -Nb⁺ Nj⁺.
            let tjb = t_even
                .numer
                .add(&t_adj_even.numer)
                .sub(&j_even.numer)
                .scale(2);
            assert_eq!(
                tjb,
                j_even.numer.mul(&b_even.numer).scale(-1),
                "TJB identity n={n}"
            );
            assert_eq!(tjb, b_even.numer.mul(&j_even.numer).scale(-1));
            // T⁺ = ½ (3Y₋⁺ - 1) J⁺ = ½ J⁺ (3Y₊⁺ - 1):
            // with Y = Ny/6 this clears to 2 Nt⁺ = (Ny₋⁺ - 2) Nj⁺ = Nj⁺ (Ny₊⁺ - 2).
            let yp_even = even_block(&build_y_plus(n)).unwrap();
            let ym_even = even_block(&build_y_minus(n)).unwrap();
            let id2 = IMat::identity(dim).scale(2);
            assert_eq!(
                t_even.numer.scale(2),
                ym_even.numer.sub(&id2).mul(&j_even.numer),
                "T⁺ from Y₋⁺ n={n}"
            );
            assert_eq!(
                t_even.numer.scale(2),
                j_even.numer.mul(&yp_even.numer.sub(&id2)),
                "T⁺ from Y₊⁺ n={n}"
            );
        }
    }

    #[test]
    fn odd_block_tt_identity() {
        for n in 2..=8u32 {
            let t_odd = odd_block(&build_t(n)).unwrap();
            let t_adj_odd = odd_block(&build_t(n).adjoint_full()).unwrap();
            let y_odd = odd_block(&build_y_plus(n)).unwrap();
            // (T⁻)* T⁻ = ¾ Y₊⁻  ⟺  2 Nt*⁻ Nt⁻ = Ny⁻.
            assert_eq!(
                t_adj_odd.numer.mul(&t_odd.numer).scale(2),
                y_odd.numer,
                "odd multiplication rule n={n}"
            );
        }
    }

    #[test]
    fn fourier_unitary_and_commutators() {
        let f1 = build_fourier(1);
        assert!((f1[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for n in [2u32, 3, 6] {
            let f = build_fourier(n);
            let id = CMat::identity(f.rows);
            let err = f.adjoint().mul(&f).sub(&id).max_abs();
            assert!(err < 1e-12, "unitarity n={n}: {err}");
            let j = CMat::from_dmat(&build_generator(n, Generator::J).to_orthonormal_dmat());
            let comm = f.mul(&j).sub(&j.mul(&f)).max_abs();
            assert!(comm < 1e-12, "[F,j]=0 n={n}: {comm}");
            let t = CMat::from_dmat(&build_t(n).to_orthonormal_dmat());
            let jf = j.mul(&f);
            let comm_t = jf.mul(&t).sub(&t.mul(&jf)).max_abs();
            assert!(comm_t < 1e-12, "[jF,t]=0 n={n}: {comm_t}");
        }
    }
}
