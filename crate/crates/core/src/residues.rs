//! Residue arithmetic mod n, enumeration of the coprime set Λ(n) and of
//! SL(2,Z/nZ), and multiplicative-function sieves used throughout.

use crate::error::{Error, Result};
use crate::SL2_CAP;

/// A point of (Z/nZ)^2, stored as least non-negative residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub a: u32,
    pub b: u32,
}

impl LatticePoint {
    pub fn new(a: i64, b: i64, n: u32) -> Self {
        let m = n as i64;
        LatticePoint {
            a: (a.rem_euclid(m)) as u32,
            b: (b.rem_euclid(m)) as u32,
        }
    }

    /// Position in the lexicographic listing of (Z/nZ)^2 (a*n + b).
    pub fn index(&self, n: u32) -> usize {
        (self.a as usize) * (n as usize) + self.b as usize
    }

    pub fn from_index(idx: usize, n: u32) -> Self {
        let n = n as usize;
        LatticePoint {
            a: (idx / n) as u32,
            b: (idx % n) as u32,
        }
    }

    pub fn neg(&self, n: u32) -> Self {
        LatticePoint::new(-(self.a as i64), -(self.b as i64), n)
    }

    pub fn is_two_torsion(&self, n: u32) -> bool {
        (2 * self.a) % n == 0 && (2 * self.b) % n == 0
    }

    /// gcd(a, b, n); equals n exactly at the origin.
    pub fn gcd_stratum(&self, n: u32) -> u32 {
        gcd(gcd(self.a as u64, self.b as u64), n as u64) as u32
    }

    /// The point of Λ(n/d) obtained by dividing out d = gcd(a, b, n).
    pub fn stratum_quotient(&self, n: u32) -> (u32, LatticePoint) {
        let d = self.gcd_stratum(n);
        (
            d,
            LatticePoint {
                a: self.a / d,
                b: self.b / d,
            },
        )
    }
}

/// An element of SL(2,Z/nZ) with rows (a b) and (c d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64, n: u32) -> Self {
        let m = n as i64;
        GroupElement {
            a: a.rem_euclid(m) as u32,
            b: b.rem_euclid(m) as u32,
            c: c.rem_euclid(m) as u32,
            d: d.rem_euclid(m) as u32,
        }
    }

    pub fn identity() -> Self {
        GroupElement {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn det(&self, n: u32) -> u32 {
        let m = n as i64;
        ((self.a as i64 * self.d as i64 - self.b as i64 * self.c as i64).rem_euclid(m)) as u32
    }

    pub fn mul(&self, other: &GroupElement, n: u32) -> GroupElement {
        let m = n as u64;
        let a = (self.a as u64 * other.a as u64 + self.b as u64 * other.c as u64) % m;
        let b = (self.a as u64 * other.b as u64 + self.b as u64 * other.d as u64) % m;
        let c = (self.c as u64 * other.a as u64 + self.d as u64 * other.c as u64) % m;
        let d = (self.c as u64 * other.b as u64 + self.d as u64 * other.d as u64) % m;
        GroupElement {
            a: a as u32,
            b: b as u32,
            c: c as u32,
            d: d as u32,
        }
    }

    /// Inverse of a determinant-1 element: (d -b; -c a).
    pub fn inv(&self, n: u32) -> GroupElement {
        GroupElement::new(
            self.d as i64,
            -(self.b as i64),
            -(self.c as i64),
            self.a as i64,
            n,
        )
    }

    pub fn apply(&self, x: &LatticePoint, n: u32) -> LatticePoint {
        let m = n as u64;
        LatticePoint {
            a: ((self.a as u64 * x.a as u64 + self.b as u64 * x.b as u64) % m) as u32,
            b: ((self.c as u64 * x.a as u64 + self.d as u64 * x.b as u64) % m) as u32,
        }
    }

    /// Compact index in [0, n^4) used as a hash-free key.
    pub fn key(&self, n: u32) -> u64 {
        let n = n as u64;
        ((self.a as u64 * n + self.b as u64) * n + self.c as u64) * n + self.d as u64
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g = gcd(|a|, |b|), g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, x, y) = ext_gcd(b, a % b);
    (g, y, x - (a / b) * y)
}

/// Per-integer values of the classical multiplicative functions up to a bound.
///
/// All columns are filled from the definitional product formulas over the
/// factorization read off a smallest-prime-factor table.
pub struct SieveTables {
    pub limit: usize,
    spf: Vec<u32>,
    pub phi: Vec<u64>,
    pub liouville: Vec<i8>,
    pub jordan2: Vec<u64>,
    pub psi: Vec<u64>,
    pub divisor_count: Vec<u32>,
}

impl SieveTables {
    pub fn phi(&self, m: usize) -> u64 {
        self.phi[m]
    }
    pub fn liouville(&self, m: usize) -> i8 {
        self.liouville[m]
    }
    pub fn jordan2(&self, m: usize) -> u64 {
        self.jordan2[m]
    }
    pub fn psi(&self, m: usize) -> u64 {
        self.psi[m]
    }
    pub fn divisor_count(&self, m: usize) -> u32 {
        self.divisor_count[m]
    }

    pub fn smallest_prime_factor(&self, m: usize) -> u32 {
        self.spf[m]
    }

    /// Distinct prime factors of m <= limit.
    pub fn prime_factors(&self, mut m: usize) -> Vec<u32> {
        let mut ps = Vec::new();
        while m > 1 {
            let p = self.spf[m];
            ps.push(p);
            while m % p as usize == 0 {
                m /= p as usize;
            }
        }
        ps
    }
}

/// Builds the sieve tables for 1..=limit.
pub fn sieve_tables(limit: usize) -> Result<SieveTables> {
    if limit == 0 {
        return Err(Error::InvalidInput("sieve limit must be >= 1".into()));
    }
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut phi = vec![0u64; limit + 1];
    let mut liouville = vec![0i8; limit + 1];
    let mut jordan2 = vec![0u64; limit + 1];
    let mut psi = vec![0u64; limit + 1];
    let mut divisor_count = vec![0u32; limit + 1];
    phi[1] = 1;
    liouville[1] = 1;
    jordan2[1] = 1;
    psi[1] = 1;
    divisor_count[1] = 1;
    for m in 2..=limit {
        let mut rest = m;
        let mut f_phi = 1u64;
        let mut f_j2 = 1u64;
        let mut f_psi = 1u64;
        let mut f_d = 1u32;
        let mut omega_total = 0u32;
        while rest > 1 {
            let p = spf[rest] as u64;
            let mut e = 0u32;
            while rest % p as usize == 0 {
                rest /= p as usize;
                e += 1;
            }
            omega_total += e;
            let pe1 = p.pow(e - 1);
            f_phi *= pe1 * (p - 1);
            f_j2 *= p.pow(2 * e - 2) * (p * p - 1);
            f_psi *= pe1 * (p + 1);
            f_d *= e + 1;
        }
        phi[m] = f_phi;
        liouville[m] = if omega_total % 2 == 0 { 1 } else { -1 };
        jordan2[m] = f_j2;
        psi[m] = f_psi;
        divisor_count[m] = f_d;
    }
    Ok(SieveTables {
        limit,
        spf,
        phi,
        liouville,
        jordan2,
        psi,
        divisor_count,
    })
}

/// Jordan totient J_2(n) = n^2 prod_{p|n} (1 - p^-2), directly for a single n.
pub fn jordan2_of(n: u32) -> u64 {
    let mut rest = n as u64;
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out *= p.pow(2 * e - 2) * (p * p - 1);
        }
        p += 1;
    }
    if rest > 1 {
        out *= rest * rest - 1;
    }
    out
}

/// |SL(2,Z/nZ)| = prod p^(3k-2) (p^2 - 1) over the factorization of n.
pub fn sl2_order(n: u32) -> u128 {
    let mut rest = n as u128;
    let mut out = 1u128;
    let mut p = 2u128;
    while p * p <= rest {
        if rest % p == 0 {
            let mut k = 0u32;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            out *= p.pow(3 * k - 2) * (p * p - 1);
        }
        p += 1;
    }
    if rest > 1 {
        out *= rest * (rest * rest - 1);
    }
    out
}

/// All points of Λ(n) = {(a,b) : gcd(a,b,n) = 1} in lexicographic order.
pub fn enumerate_lambda(n: u32) -> Result<Vec<LatticePoint>> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(jordan2_of(n) as usize);
    for a in 0..n {
        for b in 0..n {
            let x = LatticePoint { a, b };
            if x.gcd_stratum(n) == 1 {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// All elements of SL(2,Z/nZ).
///
/// Enumeration is by first row (a,b) in Λ(n) plus the n completions
/// (c,d) = (c0 + t*a, d0 + t*b) of one particular solution of ad - bc = 1.
pub fn enumerate_sl2(n: u32) -> Result<Vec<GroupElement>> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be >= 1".into()));
    }
    if n > SL2_CAP {
        return Err(Error::SizeLimit {
            what: "SL(2,Z/nZ) enumeration",
            requested: sl2_order(n),
            cap: sl2_order(SL2_CAP),
        });
    }
    if n == 1 {
        return Ok(vec![GroupElement::identity()]);
    }
    let m = n as i64;
    let mut out = Vec::with_capacity(sl2_order(n) as usize);
    for row in enumerate_lambda(n)? {
        let (a, b) = (row.a as i64, row.b as i64);
        // One (c0, d0) with a*d0 - b*c0 = 1 mod n via extended gcd.
        let (g, x, y) = ext_gcd(a, b);
        let g_inv = mod_inverse(g.rem_euclid(m), m).expect("gcd(a,b) invertible mod n");
        let d0 = (x.rem_euclid(m) * g_inv).rem_euclid(m);
        let c0 = ((-y).rem_euclid(m) * g_inv).rem_euclid(m);
        for t in 0..m {
            let c = (c0 + t * a).rem_euclid(m);
            let d = (d0 + t * b).rem_euclid(m);
            out.push(GroupElement {
                a: a as u32,
                b: b as u32,
                c: c as u32,
                d: d as u32,
            });
        }
    }
    Ok(out)
}

/// Inverse of a mod m, when gcd(a, m) = 1.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a, m);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m))
}

/// Sorted list of the divisors of n.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            out.push(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small_values() {
        let s = sieve_tables(200).unwrap();
        assert_eq!(s.liouville(1), 1);
        assert_eq!(s.phi(12), 4);
        assert_eq!(s.liouville(12), -1); // 12 = 2^2 * 3, Omega = 3
        assert_eq!(s.psi(3), 4);
        assert_eq!(s.jordan2(6), 24);
        assert_eq!(s.divisor_count(12), 6);
        assert!(sieve_tables(0).is_err());
    }

    #[test]
    fn sieve_matches_definitions() {
        let s = sieve_tables(120).unwrap();
        for m in 1..=120usize {
            let phi_direct = (1..=m).filter(|k| gcd(*k as u64, m as u64) == 1).count() as u64;
            assert_eq!(s.phi(m), phi_direct, "phi({m})");
            let d_direct = (1..=m).filter(|k| m % k == 0).count() as u32;
            assert_eq!(s.divisor_count(m), d_direct, "sigma0({m})");
            // Omega by trial division.
            let mut rest = m;
            let mut omega = 0;
            let mut p = 2;
            while p * p <= rest {
                while rest % p == 0 {
                    rest /= p;
                    omega += 1;
                }
                p += 1;
            }
            if rest > 1 {
                omega += 1;
            }
            let expect = if omega % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.liouville(m) as i32, expect, "liouville({m})");
        }
    }

    #[test]
    fn liouville_completely_multiplicative() {
        let s = sieve_tables(200 * 200).unwrap();
        for m in 1..=200usize {
            for n in 1..=200usize {
                assert_eq!(s.liouville(m * n), s.liouville(m) * s.liouville(n));
            }
        }
    }

    #[test]
    fn lambda_enumeration() {
        assert_eq!(
            enumerate_lambda(1).unwrap(),
            vec![LatticePoint { a: 0, b: 0 }]
        );
        let l3 = enumerate_lambda(3).unwrap();
        assert_eq!(l3.len(), 8);
        assert!(l3.contains(&LatticePoint { a: 1, b: 2 }));
        assert!(l3.contains(&LatticePoint { a: 2, b: 1 }));
        assert_eq!(enumerate_lambda(6).unwrap().len(), 24);
        let s = sieve_tables(60).unwrap();
        for n in 1..=60u32 {
            assert_eq!(
                enumerate_lambda(n).unwrap().len() as u64,
                s.jordan2(n as usize),
                "|Lambda({n})| = J2({n})"
            );
        }
    }

    #[test]
    fn sl2_enumeration_small() {
        // n = 2 by full brute force over the 16 candidate matrices.
        let mut brute = Vec::new();
        for a in 0..2i64 {
            for b in 0..2i64 {
                for c in 0..2i64 {
                    for d in 0..2i64 {
                        if (a * d - b * c).rem_euclid(2) == 1 {
                            brute.push(GroupElement::new(a, b, c, d, 2));
                        }
                    }
                }
            }
        }
        assert_eq!(brute.len(), 6);
        let mut got = enumerate_sl2(2).unwrap();
        got.sort();
        brute.sort();
        assert_eq!(got, brute);

        assert_eq!(enumerate_sl2(4).unwrap().len(), 48);
        assert_eq!(enumerate_sl2(5).unwrap().len(), 120);
    }

    #[test]
    fn sl2_order_formula_and_multiplicativity() {
        for n in 1..=24u32 {
            let elems = enumerate_sl2(n).unwrap();
            assert_eq!(elems.len() as u128, sl2_order(n), "order({n})");
            for g in elems.iter().take(50) {
                assert_eq!(g.det(n), 1 % n);
            }
        }
        for m in 1..=24u32 {
            for n in 1..=24u32 {
                if gcd(m as u64, n as u64) == 1 && m * n <= 24 {
                    assert_eq!(sl2_order(m) * sl2_order(n), sl2_order(m * n));
                }
            }
        }
    }

    #[test]
    fn sl2_cap_error_names_cardinality() {
        match enumerate_sl2(61) {
            Err(Error::SizeLimit { requested, .. }) => {
                assert_eq!(requested, sl2_order(61));
            }
            other => panic!("expected size-limit error, got {other:?}"),
        }
    }

    #[test]
    fn gcd_stratum_partition() {
        assert_eq!(LatticePoint { a: 0, b: 0 }.gcd_stratum(6), 6);
        assert_eq!(LatticePoint { a: 2, b: 4 }.gcd_stratum(6), 2);
        // Partition of (Z/12Z)^2 into strata of sizes J2(12/d).
        let n = 12u32;
        let s = sieve_tables(12).unwrap();
        let mut total = 0usize;
        for d in divisors(n) {
            let count = (0..n * n)
                .map(|i| LatticePoint::from_index(i as usize, n))
                .filter(|x| x.gcd_stratum(n) == d)
                .count();
            assert_eq!(count as u64, s.jordan2((n / d) as usize));
            total += count;
        }
        assert_eq!(total, 144);
    }

    #[test]
    fn stratum_quotient_lands_in_lambda() {
        let n = 12u32;
        for i in 0..(n * n) as usize {
            let x = LatticePoint::from_index(i, n);
            let (d, y) = x.stratum_quotient(n);
            assert_eq!(y.gcd_stratum(n / d), 1);
            assert_eq!((y.a * d) % n, x.a);
            assert_eq!((y.b * d) % n, x.b);
        }
    }

    #[test]
    fn group_element_ops() {
        let n = 7u32;
        let g = GroupElement::new(1, 1, 0, 1, n);
        let h = GroupElement::new(1, 0, 1, 1, n);
        let gh = g.mul(&h, n);
        assert_eq!(gh, GroupElement::new(2, 1, 1, 1, n));
        assert_eq!(g.mul(&g.inv(n), n), GroupElement::identity());
        let x = LatticePoint { a: 3, b: 5 };
        let y = g.apply(&x, n);
        assert_eq!(y, LatticePoint { a: 1, b: 5 });
    }
}
