//! Finite truncations of the 3-regular tree: adjacency spectra through a
//! spherical-symmetry reduction, distance operators D(k) with interior
//! norm checks, the geometric resolvent series, partial-sum norms, the
//! harmonic edge functions, and the ceiling-function bound brute force
//! over SL(2,Z) matrices.
//!
//! All operator checks are restricted to interior balls that truncation
//! cannot leak into; boundary effects are excluded by construction.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub const TREE_DEPTH_CAP: u32 = 16;

/// Rooted truncation of the 3-regular tree: the root has three children,
/// every interior vertex two, out to the given depth. Vertices in BFS order.
pub struct TruncatedTree {
    pub depth: u32,
    pub parent: Vec<usize>,
    pub depth_of: Vec<u32>,
    pub children: Vec<Vec<usize>>,
}

impl TruncatedTree {
    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let parent = if v == 0 { None } else { Some(self.parent[v]) };
        parent.into_iter().chain(self.children[v].iter().copied())
    }

    /// Number of vertices with depth <= radius.
    pub fn ball_size(&self, radius: u32) -> usize {
        self.depth_of.iter().filter(|&&d| d <= radius).count()
    }
}

pub fn build_tree(depth: u32) -> Result<TruncatedTree> {
    if depth == 0 || depth > TREE_DEPTH_CAP {
        return Err(Error::SizeLimit {
            what: "tree depth",
            requested: depth as u128,
            cap: TREE_DEPTH_CAP as u128,
        });
    }
    let total = 1 + 3 * ((1usize << depth) - 1);
    let mut parent = Vec::with_capacity(total);
    let mut depth_of = Vec::with_capacity(total);
    let mut children: Vec<Vec<usize>> = Vec::with_capacity(total);
    parent.push(0);
    depth_of.push(0);
    children.push(Vec::new());
    let mut frontier = vec![0usize];
    for d in 1..=depth {
        let mut next = Vec::new();
        for &v in &frontier {
            let fanout = if v == 0 { 3 } else { 2 };
            for _ in 0..fanout {
                let id = parent.len();
                parent.push(v);
                depth_of.push(d);
                children.push(Vec::new());
                children[v].push(id);
                next.push(id);
            }
        }
        frontier = next;
    }
    debug_assert_eq!(parent.len(), total);
    Ok(TruncatedTree {
        depth,
        parent,
        depth_of,
        children,
    })
}

/// Full adjacency spectrum of the truncated tree through the spherical
/// symmetry reduction: one radial tridiagonal sector rooted at the root,
/// plus difference sectors below the root and below every interior vertex.
/// Returned sorted ascending, with multiplicity.
pub fn adjacency_spectrum(depth: u32) -> Result<Vec<f64>> {
    if depth == 0 || depth > TREE_DEPTH_CAP {
        return Err(Error::SizeLimit {
            what: "tree depth",
            requested: depth as u128,
            cap: TREE_DEPTH_CAP as u128,
        });
    }
    let d = depth as usize;
    let mut eigs: Vec<f64> = Vec::with_capacity(1 + 3 * ((1usize << depth) - 1));
    // Radial sector: shells 0..=D, couplings √3 then √2.
    {
        let diag = vec![0.0; d + 1];
        let mut off = vec![2f64.sqrt(); d];
        off[0] = 3f64.sqrt();
        eigs.extend(crate::eigen::sym_tridiag_eigenvalues(&diag, &off));
    }
    // Branch-difference sectors: all couplings √2. Eigenvalues of the size-m
    // sector are shared by every vertex whose subtree has depth m.
    for m in 1..=d {
        let diag = vec![0.0; m];
        let off = vec![2f64.sqrt(); m.saturating_sub(1)];
        let sector = crate::eigen::sym_tridiag_eigenvalues(&diag, &off);
        // Multiplicity: 2 sectors at the root for m = D, and one per vertex
        // at depth j = D - m for 1 <= j <= D - 1 (3·2^(j-1) vertices).
        let mut mult = 0usize;
        if m == d {
            mult += 2;
        }
        let j = d - m;
        if (1..d).contains(&j) {
            mult += 3 * (1usize << (j - 1));
        }
        for _ in 0..mult {
            eigs.extend_from_slice(&sector);
        }
    }
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let expected = 1 + 3 * ((1usize << depth) - 1);
    if eigs.len() != expected {
        return Err(Error::ContractViolation(format!(
            "spherical reduction produced {} eigenvalues, expected {expected}",
            eigs.len()
        )));
    }
    Ok(eigs)
}

/// Dense adjacency spectrum, for cross-checking the reduction at small depth.
pub fn adjacency_spectrum_dense(tree: &TruncatedTree) -> Result<Vec<f64>> {
    let n = tree.vertex_count();
    let mut a = crate::dense::DMat::zeros(n, n);
    for v in 0..n {
        for w in tree.neighbors(v) {
            a[(v, w)] = 1.0;
        }
    }
    crate::eigen::symmetric_eigenvalues(&a)
}

/// Vertices at distance exactly k from v, staying inside the tree.
fn shell_from(tree: &TruncatedTree, v: usize, k: u32) -> Vec<usize> {
    if k == 0 {
        return vec![v];
    }
    let mut dist = std::collections::HashMap::new();
    dist.insert(v, 0u32);
    let mut frontier = vec![v];
    for step in 1..=k {
        let mut next = Vec::new();
        for &u in &frontier {
            for w in tree.neighbors(u) {
                if !dist.contains_key(&w) {
                    dist.insert(w, step);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    frontier
}

/// Report on the distance operator D(k) restricted to the interior ball of
/// radius depth - k.
#[derive(Clone, Debug)]
pub struct DistanceOperatorReport {
    pub k: u32,
    pub interior_radius: u32,
    pub interior_dim: usize,
    pub interior_norm: f64,
    pub norm_bound: f64,
    pub root_shell_size: usize,
}

/// Builds D(k) (as pair lists) on the interior ball and estimates its norm
/// by power iteration. D(0) is the identity and D(1) the adjacency matrix.
pub fn distance_operator_report(tree: &TruncatedTree, k: u32) -> Result<DistanceOperatorReport> {
    if k > tree.depth {
        return Err(Error::InvalidInput(format!(
            "distance {k} exceeds tree depth {}",
            tree.depth
        )));
    }
    let radius = tree.depth - k;
    let ball: Vec<usize> = (0..tree.vertex_count())
        .filter(|&v| tree.depth_of[v] <= radius)
        .collect();
    let mut slot = vec![usize::MAX; tree.vertex_count()];
    for (i, &v) in ball.iter().enumerate() {
        slot[v] = i;
    }
    let root_shell_size = shell_from(tree, 0, k).len();
    if k == 0 {
        return Ok(DistanceOperatorReport {
            k,
            interior_radius: radius,
            interior_dim: ball.len(),
            interior_norm: 1.0,
            norm_bound: 1.0,
            root_shell_size,
        });
    }
    // Ordered pairs (v, w) with dist = k and both endpoints in the ball.
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for &v in &ball {
        for w in shell_from(tree, v, k) {
            if slot[w] != usize::MAX {
                pairs.push((slot[v] as u32, slot[w] as u32));
            }
        }
    }
    let dim = ball.len();
    let norm = crate::eigen::sym_operator_norm(dim, |x, y| {
        y.iter_mut().for_each(|t| *t = 0.0);
        for &(a, b) in &pairs {
            y[a as usize] += x[b as usize];
        }
    });
    let bound = 3.0 * k as f64 * 2f64.powf(k as f64 / 2.0);
    Ok(DistanceOperatorReport {
        k,
        interior_radius: radius,
        interior_dim: dim,
        interior_norm: norm,
        norm_bound: bound,
        root_shell_size,
    })
}

/// λ(c) = 2^(1-c) + 2^c.
pub fn lambda_of_c(c: Complex64) -> Complex64 {
    let ln2 = std::f64::consts::LN_2;
    ((1.0 - c) * ln2).exp() + (c * ln2).exp()
}

/// Norm of (d·1 + Σ_{k=1..K} D(k) 2^(-ck)) δ_root on the truncated tree,
/// computed directly shell by shell and against the closed form.
#[derive(Clone, Debug)]
pub struct PartialSumCheck {
    pub c: f64,
    pub k_max: u32,
    pub d_coefficient: f64,
    pub direct: f64,
    pub formula: f64,
}

pub fn partial_sum_norm(c: f64, k_max: u32, tree: &TruncatedTree) -> Result<PartialSumCheck> {
    if tree.depth < k_max + 1 {
        return Err(Error::InvalidInput(format!(
            "tree depth {} too shallow for K = {k_max}",
            tree.depth
        )));
    }
    let lambda = lambda_of_c(Complex64::new(c, 0.0)).re;
    let d_coeff = (3.0 * 2f64.powf(-c) - 1.0) / lambda;
    // Direct: walk the vertices, value 2^(-c·depth) out to depth K.
    let mut sum_sq = 0.0f64;
    for v in 0..tree.vertex_count() {
        let depth = tree.depth_of[v];
        if depth == 0 {
            sum_sq += d_coeff * d_coeff;
        } else if depth <= k_max {
            let value = 2f64.powf(-c * depth as f64);
            sum_sq += value * value;
        }
    }
    let direct = sum_sq.sqrt();
    // Closed form: d² + 3 (2^((1-2c)K) - 1) / (2 - 4^c), with the limit
    // value (3/2)K at the removable singularity c = 1/2.
    let series = if (2.0 - 4f64.powf(c)).abs() < 1e-12 {
        1.5 * k_max as f64
    } else {
        3.0 * (2f64.powf((1.0 - 2.0 * c) * k_max as f64) - 1.0) / (2.0 - 4f64.powf(c))
    };
    let formula = (d_coeff * d_coeff + series).sqrt();
    Ok(PartialSumCheck {
        c,
        k_max,
        d_coefficient: d_coeff,
        direct,
        formula,
    })
}

/// Residual norms of the truncated resolvent series for Ad at λ.
///
/// The series is the distance-operator expansion with exponent c(λ) solving
/// 2^(1-c) + 2^c = λ. The exact telescoping on the infinite tree is
///
///   (Ad - λ)(1 + Σ_{k≥1} D(k) 2^(-ck)) = (2^(-c) - 2^c)·1,
///
/// so the correctly normalized truncation is
/// D_K(c) = (2^(-c) - 2^c)⁻¹ (1 + Σ_{k=1..K} D(k) 2^(-ck)).
#[derive(Clone, Debug)]
pub struct ResolventReport {
    pub lambda: Complex64,
    pub c: Complex64,
    /// ‖((Ad - λ) D_K(c) - 1) δ_root‖ on the interior ball of radius
    /// depth - K - 1, for K = 0..=k_max.
    pub residual_norms: Vec<f64>,
    /// Re(c) <= 1/2: the series cannot converge.
    pub diverges: bool,
    /// Re(c) < 0.55: poorly conditioned, too close to the spectrum band.
    pub conditioning_warning: bool,
}

pub fn resolvent_check(
    lambda: Complex64,
    tree: &TruncatedTree,
    k_max: u32,
) -> Result<ResolventReport> {
    if k_max + 2 > tree.depth {
        return Err(Error::InvalidInput(format!(
            "resolvent check needs K <= depth - 2, got K={k_max}, depth={}",
            tree.depth
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let s = (lambda * lambda - 8.0).sqrt();
    let c_plus = ((lambda + s) / 2.0).ln() / ln2;
    let c_minus = ((lambda - s) / 2.0).ln() / ln2;
    let c = if c_plus.re >= c_minus.re { c_plus } else { c_minus };
    // Sanity: 2^(1-c) + 2^c = λ.
    if (lambda_of_c(c) - lambda).norm() > 1e-10 * (1.0 + lambda.norm()) {
        return Err(Error::ContractViolation(format!(
            "resolvent exponent does not reproduce λ = {lambda}"
        )));
    }
    let diverges = c.re <= 0.5 + 1e-12;
    let conditioning_warning = c.re < 0.55;
    let gamma = (-c * ln2).exp() - (c * ln2).exp();
    let scale = if gamma.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        1.0 / gamma
    };
    let nv = tree.vertex_count();
    let mut residual_norms = Vec::with_capacity(k_max as usize + 1);
    for k_cut in 0..=k_max {
        // w = D_K(c) δ_root.
        let mut w = vec![Complex64::new(0.0, 0.0); nv];
        for v in 0..nv {
            let depth = tree.depth_of[v];
            if depth == 0 {
                w[v] = scale;
            } else if depth <= k_cut {
                w[v] = scale * (-c * ln2 * depth as f64).exp();
            }
        }
        // r = (Ad - λ) w - δ_root, restricted to the interior ball.
        let interior = tree.depth - k_cut - 1;
        let mut norm_sq = 0.0f64;
        for v in 0..nv {
            if tree.depth_of[v] > interior {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for u in tree.neighbors(v) {
                acc += w[u];
            }
            acc -= lambda * w[v];
            if v == 0 {
                acc -= 1.0;
            }
            norm_sq += acc.norm_sqr();
        }
        residual_norms.push(norm_sq.sqrt());
    }
    Ok(ResolventReport {
        lambda,
        c,
        residual_norms,
        diverges,
        conditioning_warning,
    })
}

/// Edge structure around a central edge of the 3-regular tree, truncated at
/// edge-distance `depth`, and the decay function on it.
#[derive(Clone, Debug)]
pub struct HarmonicEdgeReport {
    pub depth: u32,
    pub norm_sq: f64,
    pub expected_norm_sq: f64,
    /// Max |Σ incident values| over interior vertices (exact zero expected).
    pub max_interior_vertex_sum: f64,
    /// Max |edge-Laplacian value| over interior edges.
    pub max_interior_laplacian: f64,
    pub interior_vertex_count: usize,
    pub interior_edge_count: usize,
}

/// Builds the double-rooted edge neighborhood of a central edge g, puts the
/// function v_g(h) = (-2)^(-dist_E(g,h)) on it, and verifies harmonicity.
pub fn harmonic_vg(depth: u32) -> Result<HarmonicEdgeReport> {
    if depth == 0 || depth > 26 {
        return Err(Error::SizeLimit {
            what: "edge-tree depth",
            requested: depth as u128,
            cap: 26,
        });
    }
    // Underlying vertex tree: two roots joined by the central edge, both of
    // degree 3 (two extra children each), grown to vertex-depth `depth`.
    #[derive(Clone)]
    struct Edge {
        u: usize,
        v: usize,
        dist: u32,
    }
    let mut vertex_depth: Vec<u32> = vec![0, 0];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    let mut edges: Vec<Edge> = vec![Edge { u: 0, v: 1, dist: 0 }];
    incident[0].push(0);
    incident[1].push(0);
    // frontier carries (vertex, distance of the edge leading to it).
    let mut frontier: Vec<(usize, u32)> = vec![(0, 0), (1, 0)];
    for _level in 0..depth {
        let mut next = Vec::new();
        for &(v, edge_dist) in &frontier {
            for _ in 0..2 {
                let id = vertex_depth.len();
                vertex_depth.push(vertex_depth[v] + 1);
                incident.push(Vec::new());
                let e_id = edges.len();
                edges.push(Edge {
                    u: v,
                    v: id,
                    dist: edge_dist + 1,
                });
                incident[v].push(e_id);
                incident[id].push(e_id);
                next.push((id, edge_dist + 1));
            }
        }
        frontier = next;
    }
    let expected_edges = 1 + ((1usize << (depth + 2)) - 4);
    if edges.len() != expected_edges {
        return Err(Error::ContractViolation(format!(
            "edge tree has {} edges, expected {expected_edges}",
            edges.len()
        )));
    }
    // Values (-2)^(-dist); exact dyadic in f64 for depth <= 26.
    let value: Vec<f64> = edges
        .iter()
        .map(|e| {
            let mag = 2f64.powi(-(e.dist as i32));
            if e.dist % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let norm_sq: f64 = value.iter().map(|v| v * v).sum();
    let expected_norm_sq = 3.0 - 2f64.powi(1 - depth as i32);
    // Interior vertices: all three incident edges present.
    let mut max_vertex_sum = 0.0f64;
    let mut interior_vertex_count = 0usize;
    let mut vertex_interior = vec![false; vertex_depth.len()];
    for (v, inc) in incident.iter().enumerate() {
        if inc.len() == 3 {
            vertex_interior[v] = true;
            interior_vertex_count += 1;
            let sum: f64 = inc.iter().map(|&e| value[e]).sum();
            max_vertex_sum = max_vertex_sum.max(sum.abs());
        }
    }
    // Interior edges: both endpoints interior. Edge Laplacian:
    // 2 f(e) + Σ over the four adjacent edges.
    let mut max_lap = 0.0f64;
    let mut interior_edge_count = 0usize;
    for (ei, e) in edges.iter().enumerate() {
        if vertex_interior[e.u] && vertex_interior[e.v] {
            interior_edge_count += 1;
            let mut acc = 2.0 * value[ei];
            for &w in [e.u, e.v].iter() {
                for &other in &incident[w] {
                    if other != ei {
                        acc += value[other];
                    }
                }
            }
            max_lap = max_lap.max(acc.abs());
        }
    }
    Ok(HarmonicEdgeReport {
        depth,
        norm_sq,
        expected_norm_sq,
        max_interior_vertex_sum: max_vertex_sum,
        max_interior_laplacian: max_lap,
        interior_vertex_count,
        interior_edge_count,
    })
}

/// A 2x2 integer matrix (a b; c d).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn neg(&self) -> IntMatrix2 {
        IntMatrix2 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

fn ceil_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    num.div_euclid(den) + if num.rem_euclid(den) != 0 { 1 } else { 0 }
}

/// F(A) = ⌈(ab + cd) / (a² + c²)⌉ for A in SL(2,Z); exact integer ceiling.
pub fn f_function(m: &IntMatrix2) -> Result<i64> {
    if m.det() != 1 {
        return Err(Error::InvalidInput(format!(
            "determinant must be 1, got {}",
            m.det()
        )));
    }
    let num = m.a as i128 * m.b as i128 + m.c as i128 * m.d as i128;
    let den = m.a as i128 * m.a as i128 + m.c as i128 * m.c as i128;
    if den == 0 {
        return Err(Error::InvalidInput("first column must be nonzero".into()));
    }
    Ok(ceil_div(num, den) as i64)
}

/// The eight elliptic comparison matrices ±(-R⁻¹L), ±(-L⁻¹R), ±(-RL⁻¹),
/// ±(-LR⁻¹).
pub fn comparison_matrices() -> [IntMatrix2; 8] {
    let base = [
        IntMatrix2 { a: -1, b: -1, c: 1, d: 0 },
        IntMatrix2 { a: 0, b: 1, c: -1, d: -1 },
        IntMatrix2 { a: -1, b: 1, c: -1, d: 0 },
        IntMatrix2 { a: 0, b: -1, c: 1, d: -1 },
    ];
    [
        base[0], base[1], base[2], base[3],
        base[0].neg(), base[1].neg(), base[2].neg(), base[3].neg(),
    ]
}

#[derive(Clone, Debug)]
pub struct FBoundViolation {
    pub matrix: IntMatrix2,
    pub multiplier: IntMatrix2,
    pub f_value: i64,
    pub f_moved: i64,
}

/// Checks |F(MA) - F(A)| <= 1 for every A in SL(2,Z) with entries bounded
/// by `h_bound` and each of the eight comparison matrices M. Complete
/// enumeration: coprime first columns (a, c), one particular (b, d) from
/// the extended gcd, then all shifts (b + ta, d + tc) within the bound.
pub fn lemma_f_bruteforce(h_bound: i64) -> Result<Vec<FBoundViolation>> {
    if !(1..=60).contains(&h_bound) {
        return Err(Error::SizeLimit {
            what: "entry bound",
            requested: h_bound.max(0) as u128,
            cap: 60,
        });
    }
    let ms = comparison_matrices();
    let mut violations = Vec::new();
    for a in -h_bound..=h_bound {
        for c in -h_bound..=h_bound {
            if a == 0 && c == 0 {
                continue;
            }
            let (g, x, y) = crate::residues::ext_gcd(a, c);
            if g != 1 {
                continue;
            }
            // a·x + c·y = 1, so (b, d) = (-y, x) satisfies ad - bc = 1.
            let b0 = -y;
            let d0 = x;
            // Shift range: |b0 + t a| <= H and |d0 + t c| <= H.
            let mut t_lo = i64::MIN;
            let mut t_hi = i64::MAX;
            let mut clamp = |coef: i64, base: i64| {
                if coef == 0 {
                    return base.abs() <= h_bound;
                }
                let lo = (-h_bound - base) as f64 / coef as f64;
                let hi = (h_bound - base) as f64 / coef as f64;
                let (lo, hi) = if coef > 0 { (lo, hi) } else { (hi, lo) };
                t_lo = t_lo.max(lo.ceil() as i64);
                t_hi = t_hi.min(hi.floor() as i64);
                true
            };
            if !clamp(a, b0) || !clamp(c, d0) {
                continue;
            }
            for t in t_lo..=t_hi {
                let mat = IntMatrix2 {
                    a,
                    b: b0 + t * a,
                    c,
                    d: d0 + t * c,
                };
                if mat.b.abs() > h_bound || mat.d.abs() > h_bound {
                    continue;
                }
                let f_a = f_function(&mat)?;
                for m in &ms {
                    let moved = m.mul(&mat);
                    let f_m = f_function(&moved)?;
                    if (f_m - f_a).abs() > 1 {
                        violations.push(FBoundViolation {
                            matrix: mat,
                            multiplier: *m,
                            f_value: f_a,
                            f_moved: f_m,
                        });
                    }
                }
            }
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sizes() {
        assert_eq!(build_tree(1).unwrap().vertex_count(), 4);
        assert_eq!(build_tree(2).unwrap().vertex_count(), 10);
        assert_eq!(build_tree(12).unwrap().vertex_count(), 12286);
        assert!(build_tree(0).is_err());
        assert!(build_tree(17).is_err());
    }

    #[test]
    fn star_spectrum() {
        let eig = adjacency_spectrum(1).unwrap();
        let want = [-(3f64.sqrt()), 0.0, 0.0, 3f64.sqrt()];
        for (g, w) in eig.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn reduction_matches_dense() {
        for depth in 1..=6u32 {
            let reduced = adjacency_spectrum(depth).unwrap();
            let dense = adjacency_spectrum_dense(&build_tree(depth).unwrap()).unwrap();
            assert_eq!(reduced.len(), dense.len());
            for (r, d) in reduced.iter().zip(dense.iter()) {
                assert!((r - d).abs() < 1e-8, "depth {depth}: {r} vs {d}");
            }
        }
    }

    #[test]
    fn spectrum_inside_band_and_symmetric() {
        let bound = 8f64.sqrt() + 1e-9;
        for depth in [2u32, 8, 12] {
            let eig = adjacency_spectrum(depth).unwrap();
            assert!(eig.iter().all(|l| l.abs() <= bound), "depth {depth}");
            // Bipartite: spectrum symmetric about zero.
            let n = eig.len();
            for i in 0..n / 2 {
                assert!((eig[i] + eig[n - 1 - i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn distance_operator_basics() {
        let tree = build_tree(8).unwrap();
        let d0 = distance_operator_report(&tree, 0).unwrap();
        assert_eq!(d0.interior_norm, 1.0);
        let d2 = distance_operator_report(&tree, 2).unwrap();
        assert_eq!(d2.root_shell_size, 6); // ‖D(2)δ_root‖² = 6
        for k in 1..=5u32 {
            let rep = distance_operator_report(&tree, k).unwrap();
            assert!(
                rep.interior_norm <= rep.norm_bound + 1e-8,
                "k={k}: {} > {}",
                rep.interior_norm,
                rep.norm_bound
            );
        }
    }

    #[test]
    fn partial_sums_match_formula() {
        let tree = build_tree(8).unwrap();
        let check = partial_sum_norm(0.8, 5, &tree).unwrap();
        assert!(
            (check.direct - check.formula).abs() < 1e-9,
            "{} vs {}",
            check.direct,
            check.formula
        );
        // K = 0 gives |d|.
        let k0 = partial_sum_norm(0.8, 0, &tree).unwrap();
        assert!((k0.direct - k0.d_coefficient.abs()).abs() < 1e-12);
        // Sub-critical exponent: norms grow with K.
        let low4 = partial_sum_norm(0.3, 4, &tree).unwrap();
        let low6 = partial_sum_norm(0.3, 6, &tree).unwrap();
        assert!(low6.direct > low4.direct);
        // Removable singularity at c = 1/2.
        let half = partial_sum_norm(0.5, 5, &tree).unwrap();
        assert!(
            (half.direct - half.formula).abs() < 1e-9,
            "{} vs {}",
            half.direct,
            half.formula
        );
    }

    #[test]
    fn resolvent_at_lambda_3() {
        let tree = build_tree(12).unwrap();
        let rep = resolvent_check(Complex64::new(3.0, 0.0), &tree, 10).unwrap();
        assert!((rep.c - Complex64::new(1.0, 0.0)).norm() < 1e-12, "c₊(3) = 1");
        assert!(!rep.diverges);
        // Geometric decay with ratio about 2^(1/2 - Re c) = 2^(-1/2).
        let ratio_cap = 2f64.powf(0.5 - rep.c.re) + 0.05;
        for w in rep.residual_norms.windows(2) {
            if w[0] > 1e-13 && w[1] > 1e-13 {
                assert!(w[1] / w[0] <= ratio_cap, "ratio {} > {ratio_cap}", w[1] / w[0]);
            }
        }
        // Mirror value.
        let neg = resolvent_check(Complex64::new(-3.0, 0.0), &tree, 10).unwrap();
        for (a, b) in rep.residual_norms.iter().zip(neg.residual_norms.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
        // λ = 0 sits on the band: Re c = 1/2 exactly.
        let zero = resolvent_check(Complex64::new(0.0, 0.0), &tree, 3).unwrap();
        assert!(zero.diverges);
        assert!(zero.conditioning_warning);
    }

    #[test]
    fn harmonic_function_checks() {
        let rep = harmonic_vg(10).unwrap();
        assert_eq!(rep.norm_sq, 2.998046875); // 3 - 2^(1-10), exact dyadic
        assert_eq!(rep.norm_sq, rep.expected_norm_sq);
        assert_eq!(rep.max_interior_vertex_sum, 0.0);
        assert!(rep.max_interior_laplacian <= 1e-12);
        assert!(rep.interior_vertex_count > 0 && rep.interior_edge_count > 0);
        // Norm² approaches 3 within 2·2^(-D).
        assert!((3.0 - rep.norm_sq) <= 2.0 * 2f64.powi(-10));
    }

    #[test]
    fn f_function_values() {
        let id = IntMatrix2 { a: 1, b: 0, c: 0, d: 1 };
        assert_eq!(f_function(&id).unwrap(), 0);
        let l = IntMatrix2 { a: 1, b: 1, c: 0, d: 1 };
        assert_eq!(f_function(&l).unwrap(), 1);
        let j = IntMatrix2 { a: 0, b: 1, c: -1, d: 0 };
        assert_eq!(f_function(&j).unwrap(), 0);
        let bad = IntMatrix2 { a: 1, b: 0, c: 0, d: 2 };
        assert!(f_function(&bad).is_err());
    }

    #[test]
    fn f_bound_example_and_small_sweep() {
        let m = IntMatrix2 { a: -1, b: -1, c: 1, d: 0 };
        assert_eq!(f_function(&m).unwrap(), 1);
        for h in [1i64, 6, 12] {
            let v = lemma_f_bruteforce(h).unwrap();
            assert!(v.is_empty(), "violations at H={h}: {v:?}");
        }
        assert!(lemma_f_bruteforce(0).is_err());
        assert!(lemma_f_bruteforce(61).is_err());
    }

    #[test]
    fn comparison_matrices_are_elliptic_of_order_three() {
        for m in comparison_matrices() {
            assert_eq!(m.det(), 1);
            let m3 = m.mul(&m).mul(&m);
            let pm_id = m3 == IntMatrix2 { a: 1, b: 0, c: 0, d: 1 }
                || m3 == IntMatrix2 { a: -1, b: 0, c: 0, d: -1 };
            assert!(pm_id, "M³ = ±1 for {m:?}");
        }
    }
}
