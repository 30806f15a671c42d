//! Spectra: clustering into multiplicities, classification against the
//! expected landmarks (circle of radius 1/√2, gap interval, special
//! points), inversion pairing, and Jordan-defect detection.

use crate::dense::DMat;
use crate::error::Result;
use num_complex::Complex64;

pub const CIRCLE_RADIUS: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Classification of a single eigenvalue cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    One,
    MinusOne,
    PlusHalf,
    MinusHalf,
    Zero,
    OnCircle,
    GapReal,
    Other,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::One => "one",
            Tag::MinusOne => "minus_one",
            Tag::PlusHalf => "plus_half",
            Tag::MinusHalf => "minus_half",
            Tag::Zero => "zero",
            Tag::OnCircle => "circle",
            Tag::GapReal => "gap_real",
            Tag::Other => "other",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cluster {
    pub value: Complex64,
    pub multiplicity: usize,
    pub tag: Option<Tag>,
    /// Distance to the landmark used when tagging.
    pub landmark_dist: f64,
}

/// A computed spectrum: raw eigenvalues plus clusters with multiplicities.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub raw: Vec<Complex64>,
    pub clusters: Vec<Cluster>,
    /// Descriptor of the solved operator (modulus, parity, subspace).
    pub source: String,
    /// Scale used for the relative clustering radius.
    pub scale: f64,
}

impl Spectrum {
    /// Clusters eigenvalues with a single-linkage radius of
    /// `1e-6 * max(1, scale)`.
    pub fn from_eigenvalues(raw: Vec<Complex64>, source: impl Into<String>, scale: f64) -> Self {
        let radius = 1e-6 * scale.max(1.0);
        let clusters = cluster(&raw, radius);
        Spectrum {
            raw,
            clusters,
            source: source.into(),
            scale,
        }
    }

    pub fn dim(&self) -> usize {
        self.raw.len()
    }

    /// Tags every cluster. `tol_circle` is used for the circle test and
    /// `tol_point` for the special points.
    pub fn classify(&mut self, tol_circle: f64, tol_point: f64) {
        for c in self.clusters.iter_mut() {
            let (tag, dist) = classify_value(c.value, tol_circle, tol_point);
            c.tag = Some(tag);
            c.landmark_dist = dist;
        }
    }

    pub fn count_tag(&self, tag: Tag) -> usize {
        self.clusters
            .iter()
            .filter(|c| c.tag == Some(tag))
            .map(|c| c.multiplicity)
            .sum()
    }

    /// Total multiplicity of clusters within `tol` of `value`.
    pub fn multiplicity_near(&self, value: Complex64, tol: f64) -> usize {
        self.clusters
            .iter()
            .filter(|c| (c.value - value).norm() <= tol)
            .map(|c| c.multiplicity)
            .sum()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.raw.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Checks closure under complex conjugation within `tol`.
    pub fn is_conjugation_closed(&self, tol: f64) -> bool {
        let mut used = vec![false; self.raw.len()];
        for (i, z) in self.raw.iter().enumerate() {
            if used[i] || z.im.abs() <= tol {
                continue;
            }
            let want = z.conj();
            let mut found = false;
            for (j, w) in self.raw.iter().enumerate() {
                if j != i && !used[j] && (w - want).norm() <= tol {
                    used[i] = true;
                    used[j] = true;
                    found = true;
                    break;
                }
            }
            if !found {
                return false;
            }
        }
        true
    }
}

fn cluster(raw: &[Complex64], radius: f64) -> Vec<Cluster> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (raw[i] - raw[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Cluster> = groups
        .values()
        .map(|members| {
            let sum: Complex64 = members.iter().map(|&i| raw[i]).sum();
            Cluster {
                value: sum / members.len() as f64,
                multiplicity: members.len(),
                tag: None,
                landmark_dist: f64::NAN,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    out
}

fn classify_value(z: Complex64, tol_circle: f64, tol_point: f64) -> (Tag, f64) {
    let landmarks = [
        (Complex64::new(1.0, 0.0), Tag::One),
        (Complex64::new(-1.0, 0.0), Tag::MinusOne),
        (Complex64::new(0.5, 0.0), Tag::PlusHalf),
        (Complex64::new(-0.5, 0.0), Tag::MinusHalf),
        (Complex64::new(0.0, 0.0), Tag::Zero),
    ];
    for (point, tag) in landmarks {
        let d = (z - point).norm();
        if d <= tol_point {
            return (tag, d);
        }
    }
    let circle_dist = (z.norm() - CIRCLE_RADIUS).abs();
    if circle_dist <= tol_circle {
        return (Tag::OnCircle, circle_dist);
    }
    if z.im.abs() <= tol_point {
        let m = z.re.abs();
        if m > 0.5 + tol_point && m < 1.0 - tol_point {
            return (Tag::GapReal, circle_dist);
        }
    }
    (Tag::Other, circle_dist)
}

/// Pairs of gap-real eigenvalues that are mutual images under inversion at
/// the circle, λ·λ' = 1/2, plus the unpaired leftovers.
pub fn circle_inversion_pairs(spec: &Spectrum, tol: f64) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut gap: Vec<f64> = spec
        .clusters
        .iter()
        .filter(|c| c.tag == Some(Tag::GapReal))
        .flat_map(|c| std::iter::repeat(c.value.re).take(c.multiplicity))
        .collect();
    gap.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut used = vec![false; gap.len()];
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    for i in 0..gap.len() {
        if used[i] {
            continue;
        }
        let mut matched = None;
        for j in (i + 1)..gap.len() {
            if !used[j] && (gap[i] * gap[j] - 0.5).abs() <= tol {
                matched = Some(j);
                break;
            }
        }
        match matched {
            Some(j) => {
                used[i] = true;
                used[j] = true;
                pairs.push((gap[i], gap[j]));
            }
            None => {
                used[i] = true;
                unpaired.push(gap[i]);
            }
        }
    }
    (pairs, unpaired)
}

/// Jordan structure report at a single eigenvalue.
#[derive(Clone, Debug)]
pub struct JordanReport {
    pub eigenvalue: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
    pub defective: bool,
    /// dim ker (A-λ)² - dim ker (A-λ), from the cross-check.
    pub second_power_kernel_growth: usize,
    /// Set when a singular value falls within a factor 10 of the threshold.
    pub rank_warning: bool,
}

/// Detects a Jordan defect at λ: geometric multiplicity from the numerical
/// rank of A - λI (threshold `tol_rank · σ_max(A)`), cross-checked against
/// the rank of (A - λI)².
pub fn jordan_defect(a: &DMat, lambda: Complex64, algebraic: usize, tol_rank: f64) -> JordanReport {
    let n = a.rows;
    let scale = crate::eigen::singular_values(a)
        .first()
        .copied()
        .unwrap_or(1.0)
        .max(1e-300);
    let threshold = tol_rank * scale;
    let (rank1, sv) = crate::eigen::shifted_rank_complex(a, lambda, threshold);
    let rank_warning = sv
        .iter()
        .any(|s| *s > threshold / 10.0 && *s < threshold * 10.0);
    let geometric = n - rank1;
    let shifted_square = |lam: Complex64| -> DMat {
        if lam.im == 0.0 {
            let mut s = a.clone();
            for i in 0..n {
                s[(i, i)] -= lam.re;
            }
            s.mul(&s)
        } else {
            let mut e = DMat::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    let re = a[(i, j)] - if i == j { lam.re } else { 0.0 };
                    e[(i, j)] = re;
                    e[(n + i, n + j)] = re;
                }
                e[(i, n + i)] = lam.im;
                e[(n + i, i)] = -lam.im;
            }
            e.mul(&e)
        }
    };
    let sq = shifted_square(lambda);
    let sq_scale = crate::eigen::singular_values(&sq)
        .first()
        .copied()
        .unwrap_or(1.0)
        .max(1e-300);
    let rank2_raw = crate::eigen::numerical_rank(&sq, tol_rank * sq_scale);
    let rank2 = if lambda.im == 0.0 {
        rank2_raw
    } else {
        rank2_raw / 2
    };
    let kernel2 = n - rank2;
    JordanReport {
        eigenvalue: lambda,
        algebraic,
        geometric,
        defective: geometric < algebraic,
        second_power_kernel_growth: kernel2.saturating_sub(geometric),
        rank_warning,
    }
}

/// Multiset comparison for spectra computed along two routes; returns the
/// worst pairing distance when it is within `tol`.
pub fn assert_multisets_match(a: &[Complex64], b: &[Complex64], tol: f64) -> Result<f64> {
    match crate::charpoly::multiset_distance(a, b) {
        Some(d) if d <= tol => Ok(d),
        Some(d) => Err(crate::error::Error::ContractViolation(format!(
            "spectra differ: worst pairing distance {d:.3e} > {tol:.3e}"
        ))),
        None => Err(crate::error::Error::ContractViolation(format!(
            "spectra differ in size: {} vs {}",
            a.len(),
            b.len()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn clustering_counts_multiplicity() {
        let raw = vec![c(0.5, 0.0), c(0.5 + 1e-9, 0.0), c(1.0, 0.0)];
        let spec = Spectrum::from_eigenvalues(raw, "test", 1.0);
        assert_eq!(spec.clusters.len(), 2);
        assert_eq!(spec.multiplicity_near(c(0.5, 0.0), 1e-6), 2);
    }

    #[test]
    fn classification_of_landmarks() {
        let (tag, _) = classify_value(c(1.0, 0.0), 1e-6, 1e-6);
        assert_eq!(tag, Tag::One);
        // (-1 + i√7)/4 has modulus exactly 1/√2.
        let z = c(-0.25, 7.0f64.sqrt() / 4.0);
        let (tag, dist) = classify_value(z, 1e-6, 1e-6);
        assert_eq!(tag, Tag::OnCircle);
        assert!(dist < 1e-12);
        let (tag, _) = classify_value(c(0.819427, 0.0), 1e-6, 1e-6);
        assert_eq!(tag, Tag::GapReal);
        // Real ±1/√2 is also tagged as on the circle.
        let (tag, _) = classify_value(c(CIRCLE_RADIUS, 0.0), 1e-6, 1e-6);
        assert_eq!(tag, Tag::OnCircle);
        let (tag, _) = classify_value(c(0.3, 0.2), 1e-6, 1e-6);
        assert_eq!(tag, Tag::Other);
    }

    #[test]
    fn inversion_pairing() {
        let raw = vec![c(0.819427, 0.0), c(0.5 / 0.819427, 0.0), c(0.9, 0.0)];
        let mut spec = Spectrum::from_eigenvalues(raw, "test", 1.0);
        spec.classify(1e-6, 1e-6);
        let (pairs, unpaired) = circle_inversion_pairs(&spec, 1e-6);
        assert_eq!(pairs.len(), 1);
        assert_eq!(unpaired, vec![0.9]);
        let mut empty = Spectrum::from_eigenvalues(vec![c(1.0, 0.0)], "test", 1.0);
        empty.classify(1e-6, 1e-6);
        let (p, u) = circle_inversion_pairs(&empty, 1e-6);
        assert!(p.is_empty() && u.is_empty());
    }

    #[test]
    fn jordan_defect_on_nilpotent_block() {
        let a = DMat::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let rep = jordan_defect(&a, c(0.0, 0.0), 2, 1e-9);
        assert_eq!(rep.algebraic, 2);
        assert_eq!(rep.geometric, 1);
        assert!(rep.defective);
        assert_eq!(rep.second_power_kernel_growth, 1);
        let diag = DMat::zeros(2, 2);
        let rep = jordan_defect(&diag, c(0.0, 0.0), 2, 1e-9);
        assert_eq!(rep.geometric, 2);
        assert!(!rep.defective);
    }

    #[test]
    fn conjugation_closure() {
        let spec = Spectrum::from_eigenvalues(vec![c(0.1, 0.5), c(0.1, -0.5)], "t", 1.0);
        assert!(spec.is_conjugation_closed(1e-9));
        let bad = Spectrum::from_eigenvalues(vec![c(0.1, 0.5)], "t", 1.0);
        assert!(!bad.is_conjugation_closed(1e-9));
    }
}
