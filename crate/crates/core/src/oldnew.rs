//! gcd stratification of (Z/nZ)^2 — the exact block-diagonalization of
//! t(n) into the new-part operators t̃(n/d) — and the block-diagonal
//! assembly 𝔱±(n) = ⊕_{k≤n} t̃±(k) whose aggregate spectra scan the
//! adelic picture level by level.

use crate::error::{Error, Result};
use crate::operators::{build_t, even_block, odd_block, restrict_to_lambda, ScaledIntegerOperator};
use crate::residues::{divisors, enumerate_lambda, LatticePoint};
use crate::spectrum::Spectrum;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stratum {
    pub divisor: u32,
    /// Points d·y of the stratum inside (Z/nZ)^2, ordered like `quotient`.
    pub points: Vec<LatticePoint>,
    /// The corresponding points y of Λ(n/d).
    pub quotient: Vec<LatticePoint>,
}

#[derive(Clone, Debug)]
pub struct StratifiedBasis {
    pub n: u32,
    pub strata: Vec<Stratum>,
    /// Basis reordering: position in the stratified listing -> index in the
    /// lexicographic listing of (Z/nZ)^2.
    pub permutation: Vec<usize>,
}

/// Stratifies (Z/nZ)^2 by d = gcd(a, b, n) and verifies, in exact integer
/// arithmetic, that conjugating t(n) by the stratum permutation is block
/// diagonal with block d equal to t̃(n/d).
pub fn stratify(n: u32) -> Result<StratifiedBasis> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be >= 1".into()));
    }
    let t_full = build_t(n);
    let mut strata = Vec::new();
    let mut permutation = Vec::with_capacity((n as usize) * (n as usize));
    for d in divisors(n) {
        let quotient = enumerate_lambda(n / d)?;
        let points: Vec<LatticePoint> = quotient
            .iter()
            .map(|y| LatticePoint::new((y.a * d) as i64, (y.b * d) as i64, n))
            .collect();
        permutation.extend(points.iter().map(|p| p.index(n)));
        strata.push(Stratum {
            divisor: d,
            points,
            quotient,
        });
    }
    if permutation.len() != (n as usize) * (n as usize) {
        return Err(Error::ContractViolation(format!(
            "strata do not partition (Z/{n}Z)^2"
        )));
    }
    // Exact conjugation check: cross-stratum entries vanish and the d-block
    // of 2t(n) equals the matrix of 2t̃(n/d).
    let mut offset = 0usize;
    for s in &strata {
        let m = n / s.divisor;
        let t_new = restrict_to_lambda(&build_t(m))?;
        for (i, pi) in s.points.iter().enumerate() {
            for (j, pj) in s.points.iter().enumerate() {
                if t_full.numer[(pi.index(n), pj.index(n))] != t_new.numer[(i, j)] {
                    return Err(Error::ContractViolation(format!(
                        "stratum block d={} of t({n}) differs from t̃({m})",
                        s.divisor
                    )));
                }
            }
        }
        // Off-block mass in the stratified ordering.
        for (i, pi) in s.points.iter().enumerate() {
            for (other_pos, &full_idx) in permutation.iter().enumerate() {
                let inside = other_pos >= offset && other_pos < offset + s.points.len();
                if !inside {
                    let row = t_full.numer[(pi.index(n), full_idx)];
                    let col = t_full.numer[(full_idx, pi.index(n))];
                    if row != 0 || col != 0 {
                        return Err(Error::ContractViolation(format!(
                            "t({n}) mixes stratum d={} with the rest at row {i}",
                            s.divisor
                        )));
                    }
                }
            }
        }
        offset += s.points.len();
    }
    Ok(StratifiedBasis {
        n,
        strata,
        permutation,
    })
}

/// The block family t̃±(k), k = 1..=n_max. Blocks are built on demand;
/// only spectra are ever aggregated, never one big matrix.
pub struct AdelicBlocks {
    pub n_max: u32,
    pub parity: Parity,
}

pub fn assemble_frak_t(n_max: u32, parity: Parity) -> Result<AdelicBlocks> {
    if n_max == 0 || n_max > crate::SL2_CAP {
        return Err(Error::SizeLimit {
            what: "adelic block assembly",
            requested: n_max as u128,
            cap: crate::SL2_CAP as u128,
        });
    }
    Ok(AdelicBlocks { n_max, parity })
}

impl AdelicBlocks {
    /// The parity block of t̃(k).
    pub fn block(&self, k: u32) -> Result<ScaledIntegerOperator> {
        let t_new = restrict_to_lambda(&build_t(k))?;
        match self.parity {
            Parity::Even => even_block(&t_new),
            Parity::Odd => odd_block(&t_new),
        }
    }

    pub fn block_dims(&self) -> Result<Vec<(u32, usize)>> {
        (1..=self.n_max)
            .map(|k| Ok((k, self.block(k)?.dim())))
            .collect()
    }

    /// Eigenvalues of every block, keyed by k, computed in parallel.
    pub fn block_spectra(&self, jobs: usize) -> Result<Vec<(u32, Vec<Complex64>)>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
        let mut out: Vec<(u32, Vec<Complex64>)> = pool.install(|| {
            (1..=self.n_max)
                .into_par_iter()
                .map(|k| {
                    let block = self.block(k)?;
                    let eig = block.eigenvalues()?;
                    Ok((k, eig))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        out.sort_by_key(|(k, _)| *k);
        Ok(out)
    }

    /// Union spectrum of all blocks, in deterministic (k, parity) order.
    pub fn aggregate_spectrum(&self, jobs: usize) -> Result<Spectrum> {
        let per_block = self.block_spectra(jobs)?;
        let mut raw = Vec::new();
        for (_, eig) in per_block {
            raw.extend(eig);
        }
        Ok(Spectrum::from_eigenvalues(
            raw,
            format!("frak_t_{}({})", self.parity.as_str(), self.n_max),
            1.0,
        ))
    }
}

/// Exact partial product ∏_{p ≤ cutoff} (1 - p⁻²) together with its float
/// value; the products decrease monotonically towards 6/π².
pub fn lambda_p_mass(cutoff: u32) -> (BigRational, f64) {
    let mut mass = BigRational::one();
    let mut is_prime = vec![true; cutoff as usize + 1];
    if cutoff >= 1 {
        for p in 2..=cutoff as usize {
            if is_prime[p] {
                let mut q = p * p;
                while q <= cutoff as usize {
                    is_prime[q] = false;
                    q += p;
                }
                let p2 = BigInt::from((p * p) as i64);
                mass *= BigRational::new(&p2 - BigInt::one(), p2.clone());
            }
        }
    }
    let value = mass.to_f64().unwrap_or(f64::NAN);
    (mass, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residues::sieve_tables;

    #[test]
    fn stratify_6_block_sizes() {
        let s = stratify(6).unwrap();
        let sizes: Vec<(u32, usize)> = s
            .strata
            .iter()
            .map(|st| (st.divisor, st.points.len()))
            .collect();
        assert_eq!(sizes, vec![(1, 24), (2, 8), (3, 3), (6, 1)]);
        let total: usize = s.strata.iter().map(|st| st.points.len()).sum();
        assert_eq!(total, 36);
    }

    #[test]
    fn stratify_prime_two_strata() {
        let s = stratify(7).unwrap();
        assert_eq!(s.strata.len(), 2);
        assert_eq!(s.strata[0].points.len(), 48);
        assert_eq!(s.strata[1].points.len(), 1);
    }

    #[test]
    fn stratification_block_sum_rule() {
        let sieve = sieve_tables(60).unwrap();
        for n in 1..=60u32 {
            let total: u64 = divisors(n)
                .iter()
                .map(|&d| sieve.jordan2((n / d) as usize))
                .sum();
            assert_eq!(total, (n as u64) * (n as u64), "sum rule at n={n}");
        }
    }

    #[test]
    fn spectrum_of_t6_is_union_of_new_parts() {
        let full = build_t(6).eigenvalues().unwrap();
        let mut union = Vec::new();
        for d in divisors(6) {
            let block = restrict_to_lambda(&build_t(6 / d)).unwrap();
            union.extend(block.eigenvalues().unwrap());
        }
        let dist = crate::charpoly::multiset_distance(&full, &union).unwrap();
        assert!(dist < 1e-8, "distance {dist}");
    }

    #[test]
    fn adelic_block_dims() {
        let even = assemble_frak_t(2, Parity::Even).unwrap();
        assert_eq!(even.block_dims().unwrap(), vec![(1, 1), (2, 3)]);
        let odd = assemble_frak_t(2, Parity::Odd).unwrap();
        assert_eq!(odd.block_dims().unwrap(), vec![(1, 0), (2, 0)]);
        assert!(assemble_frak_t(0, Parity::Even).is_err());
        assert!(assemble_frak_t(61, Parity::Even).is_err());
    }

    #[test]
    fn aggregate_spectrum_is_prefix_monotone() {
        // Multiset inclusion spec(𝔱(n)) ⊆ spec(𝔱(n+1)) by block prefixing.
        let small = assemble_frak_t(3, Parity::Even)
            .unwrap()
            .block_spectra(2)
            .unwrap();
        let large = assemble_frak_t(4, Parity::Even)
            .unwrap()
            .block_spectra(2)
            .unwrap();
        assert_eq!(small.len() + 1, large.len());
        for ((k1, e1), (k2, e2)) in small.iter().zip(large.iter()) {
            assert_eq!(k1, k2);
            assert_eq!(e1.len(), e2.len());
        }
    }

    #[test]
    fn mass_of_coprime_set() {
        let (exact2, _) = lambda_p_mass(2);
        assert_eq!(exact2, BigRational::new(BigInt::from(3), BigInt::from(4)));
        let (exact3, _) = lambda_p_mass(3);
        assert_eq!(exact3, BigRational::new(BigInt::from(2), BigInt::from(3)));
        let (_, v97) = lambda_p_mass(97);
        let target = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
        assert!((v97 - target).abs() < 2e-3, "{v97} vs {target}");
        let (_, v5) = lambda_p_mass(5);
        assert!(v5 < lambda_p_mass(3).1, "monotone decreasing");
    }
}
