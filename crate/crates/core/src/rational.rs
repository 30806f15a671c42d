//! Exact rational dense matrices and Gaussian elimination.
//!
//! Rank and kernel decisions for the subspace decompositions are made here,
//! in exact arithmetic, so no tolerance ever enters those code paths.

use crate::dense::{DMat, IMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigRational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    /// numer / denom as an exact rational matrix.
    pub fn from_scaled_imat(numer: &IMat, denom: i64) -> Self {
        let d = BigInt::from(denom);
        RatMat {
            rows: numer.rows,
            cols: numer.cols,
            data: numer
                .data
                .iter()
                .map(|&v| BigRational::new(BigInt::from(v), d.clone()))
                .collect(),
        }
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> RatMat {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= s;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.rows, other.rows);
        let mut out = RatMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Vertical concatenation [self; other].
    pub fn vcat(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.cols);
        let mut out = RatMat::zeros(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out[(self.rows + i, j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_dmat(&self) -> DMat {
        DMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| x.to_f64().expect("rational fits in f64"))
                .collect(),
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // Pick the largest-magnitude entry for mild coefficient control.
            let mut piv = None;
            let mut best: Option<BigRational> = None;
            for r in row..self.rows {
                let v = self[(r, col)].abs();
                if !v.is_zero() && best.as_ref().map_or(true, |b| v > *b) {
                    best = Some(v);
                    piv = Some(r);
                }
            }
            let Some(piv) = piv else { continue };
            self.data.swap_rows(self.cols, row, piv);
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                let t = &self[(row, j)] * &inv;
                self[(row, j)] = t;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    for j in col..self.cols {
                        let t = &self[(row, j)] * &f;
                        self[(r, j)] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Columns spanning the kernel of self, with denominators cleared so
    /// every basis vector is integral.
    pub fn kernel_basis(&self) -> RatMat {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = RatMat::zeros(self.cols, free.len());
        for (bi, &fc) in free.iter().enumerate() {
            basis[(fc, bi)] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                let v = -m[(ri, fc)].clone();
                basis[(pc, bi)] = v;
            }
            // Clear denominators column-wise.
            let mut lcm = BigInt::one();
            for i in 0..self.cols {
                let d = basis[(i, bi)].denom().clone();
                lcm = num_integer::lcm(lcm, d);
            }
            if !lcm.is_one() {
                let s = BigRational::from_integer(lcm);
                for i in 0..self.cols {
                    let t = &basis[(i, bi)] * &s;
                    basis[(i, bi)] = t;
                }
            }
        }
        basis
    }

    /// Exact solution X of self * X = rhs, requiring full column rank and
    /// consistency. Returns None when the system is inconsistent.
    pub fn solve_exact(&self, rhs: &RatMat) -> Option<RatMat> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hcat(rhs);
        let pivots = aug.rref();
        // Any pivot inside the rhs block signals inconsistency.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        if pivots.len() != self.cols {
            return None; // rank-deficient: solution not unique
        }
        let mut x = RatMat::zeros(self.cols, rhs.cols);
        for (ri, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = aug[(ri, self.cols + j)].clone();
            }
        }
        Some(x)
    }
}

trait SwapRows {
    fn swap_rows(&mut self, cols: usize, a: usize, b: usize);
}

impl SwapRows for Vec<BigRational> {
    fn swap_rows(&mut self, cols: usize, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..cols {
            self.swap(a * cols + j, b * cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rref_and_rank() {
        let mut m = RatMat::zeros(3, 3);
        m[(0, 0)] = rat(1, 1);
        m[(0, 1)] = rat(2, 1);
        m[(1, 0)] = rat(2, 1);
        m[(1, 1)] = rat(4, 1);
        m[(2, 2)] = rat(5, 1);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_of_projection() {
        // P = [[1,0],[0,0]]: kernel spanned by e2.
        let mut p = RatMat::zeros(2, 2);
        p[(0, 0)] = rat(1, 1);
        let k = p.kernel_basis();
        assert_eq!(k.cols, 1);
        assert!(p.mul(&k).is_zero());
        assert!(!k.column(0)[1].is_zero());
    }

    #[test]
    fn solve_exact_works() {
        let mut a = RatMat::zeros(2, 2);
        a[(0, 0)] = rat(2, 1);
        a[(0, 1)] = rat(1, 1);
        a[(1, 1)] = rat(3, 1);
        let mut b = RatMat::zeros(2, 1);
        b[(0, 0)] = rat(5, 1);
        b[(1, 0)] = rat(6, 1);
        let x = a.solve_exact(&b).unwrap();
        assert_eq!(x[(0, 0)], rat(3, 2));
        assert_eq!(x[(1, 0)], rat(2, 1));
        assert!(a.mul(&x).sub(&b).is_zero());
    }

    #[test]
    fn kernel_of_singular_system() {
        // Kernel of [[1,1,1]]: two dimensional.
        let mut a = RatMat::zeros(1, 3);
        for j in 0..3 {
            a[(0, j)] = rat(1, 1);
        }
        let k = a.kernel_basis();
        assert_eq!(k.cols, 2);
        assert!(a.mul(&k).is_zero());
    }
}
