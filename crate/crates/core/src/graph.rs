//! The bipartite 3-regular orbit graph of SL(2,Z/nZ): vertices are the
//! left-multiplication orbits of the two order-three elements -R⁻¹L and
//! -LR⁻¹, edges are the group elements. Includes components, girth,
//! adjacency / Laplacian spectra with the Ramanujan test, the exact
//! edge-Laplacian identity on the regular representation, and the induced
//! principal-series decomposition of the coprime module at primes.

use crate::dense::{DMat, IMat};
use crate::error::{Error, Result};
use crate::residues::{enumerate_sl2, GroupElement};
use num_complex::Complex64;

/// -R⁻¹L mod n.
fn gen_plus(n: u32) -> GroupElement {
    GroupElement::new(-1, -1, 1, 0, n)
}

/// -LR⁻¹ mod n.
fn gen_minus(n: u32) -> GroupElement {
    GroupElement::new(0, -1, 1, -1, n)
}

#[derive(Clone, Debug)]
pub struct CongruenceGraph {
    pub n: u32,
    /// Edges of the graph, one per group element.
    pub elements: Vec<GroupElement>,
    pub vertex_count: usize,
    /// Vertices 0..plus_count are the plus orbits; the rest are minus orbits.
    pub plus_count: usize,
    /// Per edge: (plus vertex, minus vertex).
    pub edge_endpoints: Vec<(usize, usize)>,
    /// Incident edge lists per vertex (each of length 3 for n >= 3).
    pub vertex_edges: Vec<Vec<usize>>,
}

impl CongruenceGraph {
    pub fn edge_count(&self) -> usize {
        self.elements.len()
    }

    fn other_endpoint(&self, edge: usize, v: usize) -> usize {
        let (a, b) = self.edge_endpoints[edge];
        if v == a {
            b
        } else {
            a
        }
    }
}

pub fn build_graph(n: u32) -> Result<CongruenceGraph> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "orbit graph needs n >= 3 (orbit sizes degenerate at n={n})"
        )));
    }
    let elements = enumerate_sl2(n)?;
    let mut index = std::collections::HashMap::with_capacity(elements.len());
    for (i, g) in elements.iter().enumerate() {
        index.insert(g.key(n), i);
    }
    let orbit_ids = |m: GroupElement| -> Result<(Vec<usize>, usize)> {
        let mut ids = vec![usize::MAX; elements.len()];
        let mut count = 0usize;
        for (i, g) in elements.iter().enumerate() {
            if ids[i] != usize::MAX {
                continue;
            }
            let g1 = m.mul(g, n);
            let g2 = m.mul(&g1, n);
            let i1 = index[&g1.key(n)];
            let i2 = index[&g2.key(n)];
            if i1 == i || i2 == i || i1 == i2 {
                return Err(Error::ContractViolation(format!(
                    "orbit of order-3 generator degenerates at n={n}"
                )));
            }
            ids[i] = count;
            ids[i1] = count;
            ids[i2] = count;
            count += 1;
        }
        Ok((ids, count))
    };
    let (plus_ids, plus_count) = orbit_ids(gen_plus(n))?;
    let (minus_ids, minus_count) = orbit_ids(gen_minus(n))?;
    let vertex_count = plus_count + minus_count;
    let mut edge_endpoints = Vec::with_capacity(elements.len());
    let mut vertex_edges = vec![Vec::with_capacity(3); vertex_count];
    for i in 0..elements.len() {
        let vp = plus_ids[i];
        let vm = plus_count + minus_ids[i];
        edge_endpoints.push((vp, vm));
        vertex_edges[vp].push(i);
        vertex_edges[vm].push(i);
    }
    for edges in &vertex_edges {
        if edges.len() != 3 {
            return Err(Error::ContractViolation(format!(
                "graph is not 3-regular at n={n}"
            )));
        }
    }
    if 3 * vertex_count != 2 * elements.len() {
        return Err(Error::ContractViolation(format!(
            "|V| != (2/3)|E| at n={n}"
        )));
    }
    Ok(CongruenceGraph {
        n,
        elements,
        vertex_count,
        plus_count,
        edge_endpoints,
        vertex_edges,
    })
}

/// Connected components: count and sizes (sorted).
pub fn components(g: &CongruenceGraph) -> (usize, Vec<usize>) {
    let mut seen = vec![false; g.vertex_count];
    let mut sizes = Vec::new();
    for start in 0..g.vertex_count {
        if seen[start] {
            continue;
        }
        let mut size = 0usize;
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &e in &g.vertex_edges[v] {
                let w = g.other_endpoint(e, v);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable();
    (sizes.len(), sizes)
}

/// Exact girth by per-root BFS with parent-edge tracking and early exit.
pub fn girth(g: &CongruenceGraph) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; g.vertex_count];
    let mut parent_edge = vec![usize::MAX; g.vertex_count];
    for root in 0..g.vertex_count {
        for d in dist.iter_mut() {
            *d = usize::MAX;
        }
        dist[root] = 0;
        parent_edge[root] = usize::MAX;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if let Some(b) = best {
                // No shorter cycle through this root can still appear.
                if 2 * dist[v] + 1 >= b {
                    break;
                }
            }
            for &e in &g.vertex_edges[v] {
                if e == parent_edge[v] {
                    continue;
                }
                let w = g.other_endpoint(e, v);
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent_edge[w] = e;
                    queue.push_back(w);
                } else {
                    let cycle = dist[v] + dist[w] + 1;
                    if best.map_or(true, |b| cycle < b) {
                        best = Some(cycle);
                    }
                }
            }
        }
    }
    best
}

/// Lower bound 2⌊acosh(√5 n / 4) / acsch(2)⌋ - 2 for the girth.
pub fn girth_lower_bound(n: u32) -> i64 {
    let x = 5f64.sqrt() * n as f64 / 4.0;
    if x < 1.0 {
        return 0;
    }
    let acsch2 = (0.5f64 + (1.25f64).sqrt() - 1.0).ln_1p(); // ln(1/2 + √(5)/2)
    let q = (x + (x * x - 1.0).sqrt()).ln() / acsch2;
    2 * (q.floor() as i64) - 2
}

#[derive(Clone, Debug)]
pub struct GraphSpectra {
    pub adjacency: Vec<f64>,
    pub vertex_laplacian: Vec<f64>,
    pub edge_laplacian: Vec<f64>,
    pub ramanujan: bool,
    pub component_count: usize,
    /// dim ker Δ_E and the Euler-count prediction |E| - |V| + c.
    pub edge_kernel_dim: usize,
    pub edge_kernel_expected: usize,
}

/// Adjacency, vertex-Laplacian and edge-Laplacian spectra, the supersymmetry
/// comparison of the two Laplacians, and the Ramanujan test.
pub fn graph_spectra(g: &CongruenceGraph) -> Result<GraphSpectra> {
    let nv = g.vertex_count;
    let mut ad = DMat::zeros(nv, nv);
    for &(a, b) in &g.edge_endpoints {
        ad[(a, b)] += 1.0;
        ad[(b, a)] += 1.0;
    }
    let adjacency = crate::eigen::symmetric_eigenvalues(&ad)?;
    let vertex_laplacian: Vec<f64> = adjacency.iter().rev().map(|l| 3.0 - l).collect();

    // Edge Laplacian on the unoriented edge space: 2 on the diagonal plus
    // the adjacency of edges sharing an endpoint.
    let ne = g.edge_count();
    let mut el = DMat::zeros(ne, ne);
    for e in 0..ne {
        el[(e, e)] = 2.0;
    }
    for edges in &g.vertex_edges {
        for (i, &e1) in edges.iter().enumerate() {
            for &e2 in edges.iter().skip(i + 1) {
                el[(e1, e2)] += 1.0;
                el[(e2, e1)] += 1.0;
            }
        }
    }
    let edge_laplacian = crate::eigen::symmetric_eigenvalues(&el)?;

    let (component_count, _) = components(g);
    let tol = 1e-8 * 6.0;
    let nonzero_v: Vec<f64> = vertex_laplacian
        .iter()
        .copied()
        .filter(|l| l.abs() > tol)
        .collect();
    let mut nonzero_e: Vec<f64> = edge_laplacian
        .iter()
        .copied()
        .filter(|l| l.abs() > tol)
        .collect();
    nonzero_e.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut sorted_v = nonzero_v.clone();
    sorted_v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if sorted_v.len() != nonzero_e.len() {
        return Err(Error::ContractViolation(format!(
            "nonzero Δ_V and Δ_E spectra differ in size at n={}: {} vs {}",
            g.n,
            sorted_v.len(),
            nonzero_e.len()
        )));
    }
    for (x, y) in sorted_v.iter().zip(nonzero_e.iter()) {
        if (x - y).abs() > 1e-8 * 6.0 {
            return Err(Error::ContractViolation(format!(
                "Δ_V and Δ_E spectra disagree at n={}: {x} vs {y}",
                g.n
            )));
        }
    }
    let edge_kernel_dim = ne - nonzero_e.len();
    let edge_kernel_expected = ne - nv + component_count;

    // Ramanujan: drop the ±3 trivial eigenvalues (one pair per bipartite
    // component), then require |λ| <= 2√2.
    let mut sorted_ad = adjacency.clone();
    sorted_ad.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut trivial_top = 0;
    let mut trivial_bottom = 0;
    for l in sorted_ad.iter().take(component_count) {
        if (l - 3.0).abs() < 1e-8 {
            trivial_top += 1;
        }
    }
    for l in sorted_ad.iter().rev().take(component_count) {
        if (l + 3.0).abs() < 1e-8 {
            trivial_bottom += 1;
        }
    }
    let bound = 2.0 * 2f64.sqrt() + 1e-9;
    let ramanujan = trivial_top == component_count
        && trivial_bottom == component_count
        && sorted_ad[component_count..sorted_ad.len() - component_count]
            .iter()
            .all(|l| l.abs() <= bound);

    Ok(GraphSpectra {
        adjacency,
        vertex_laplacian,
        edge_laplacian,
        ramanujan,
        component_count,
        edge_kernel_dim,
        edge_kernel_expected,
    })
}

/// Exact check that on the parity-even subspace of the regular
/// representation of SL(2,Z/nZ), the operator
/// 3·1 - I + R⁻¹L + L⁻¹R + LR⁻¹ + RL⁻¹ equals the combinatorial edge
/// Laplacian of the orbit graph under the edge ↔ group element bijection.
pub fn edge_laplacian_identity(n: u32) -> Result<()> {
    if n > 8 {
        return Err(Error::SizeLimit {
            what: "regular-representation edge Laplacian",
            requested: crate::residues::sl2_order(n),
            cap: crate::residues::sl2_order(8),
        });
    }
    let g = build_graph(n)?;
    let size = g.elements.len();
    let mut index = std::collections::HashMap::with_capacity(size);
    for (i, el) in g.elements.iter().enumerate() {
        index.insert(el.key(n), i);
    }
    // Left regular representation: (ô f)(x) = f(o⁻¹ x).
    let perm = |o: GroupElement| -> IMat {
        let o_inv = o.inv(n);
        let mut m = IMat::zeros(size, size);
        for (xi, x) in g.elements.iter().enumerate() {
            let y = o_inv.mul(x, n);
            m[(xi, index[&y.key(n)])] = 1;
        }
        m
    };
    let l = GroupElement::new(1, 1, 0, 1, n);
    let r = GroupElement::new(1, 0, 1, 1, n);
    let i_neg = GroupElement::new(-1, 0, 0, -1, n);
    let rl = r.inv(n).mul(&l, n);
    let lr = l.inv(n).mul(&r, n);
    let lrinv = l.mul(&r.inv(n), n);
    let rlinv = r.mul(&l.inv(n), n);
    let op_side = IMat::identity(size)
        .scale(3)
        .sub(&perm(i_neg))
        .add(&perm(rl))
        .add(&perm(lr))
        .add(&perm(lrinv))
        .add(&perm(rlinv));

    // Combinatorial side: 2 f(g) plus the values at the four edges adjacent
    // through the two endpoint orbits.
    let m1 = gen_plus(n);
    let m2 = gen_minus(n);
    let mut comb = IMat::zeros(size, size);
    for (gi, el) in g.elements.iter().enumerate() {
        comb[(gi, gi)] += 2;
        for m in [m1, m1.mul(&m1, n), m2, m2.mul(&m2, n)] {
            let h = m.mul(el, n);
            comb[(gi, index[&h.key(n)])] += 1;
        }
    }
    // Equality on the even subspace: the difference must annihilate the
    // columns of (1 + P_I), which span it.
    let even_span = IMat::identity(size).add(&perm(i_neg));
    let diff = op_side.sub(&comb).mul(&even_span);
    if !diff.is_zero() {
        return Err(Error::ContractViolation(format!(
            "edge-Laplacian identity fails on the even subspace at n={n}"
        )));
    }
    Ok(())
}

/// Report of the induced principal-series decomposition at a prime p.
#[derive(Clone, Debug)]
pub struct InducedReport {
    pub p: u32,
    pub generator: u32,
    pub space_count: usize,
    pub dim_each: usize,
    pub total_dim: usize,
    pub max_orthogonality_defect: f64,
    pub max_invariance_defect: f64,
    /// Gram matrix of each natural basis is this scalar times the identity.
    pub gram_scalar: f64,
}

/// Builds the induced character spaces of the Borel subgroup inside the
/// regular representation of SL(2,F_p) and verifies: dimension p+1 each,
/// mutual orthogonality, invariance under the left action, and that the
/// dimensions add up to p² - 1.
pub fn induced_decomposition_check(p: u32) -> Result<InducedReport> {
    if !(3..=7).contains(&p) || p % 2 == 0 || (p > 3 && p % 3 == 0) {
        return Err(Error::InvalidInput(format!(
            "induced decomposition implemented for odd primes p <= 7, got {p}"
        )));
    }
    let elements = enumerate_sl2(p)?;
    let size = elements.len();
    let mut index = std::collections::HashMap::with_capacity(size);
    for (i, g) in elements.iter().enumerate() {
        index.insert(g.key(p), i);
    }
    // Multiplicative generator of F_p^*, with retry over candidates.
    let generator = (2..p)
        .find(|&a| {
            let mut x = a as u64;
            let mut order = 1;
            while x != 1 {
                x = (x * a as u64) % p as u64;
                order += 1;
            }
            order == p - 1
        })
        .ok_or_else(|| Error::InvalidInput(format!("no generator mod {p}")))?;
    let mut dlog = vec![0u32; p as usize];
    {
        let mut x = 1u64;
        for k in 0..p - 1 {
            dlog[x as usize] = k;
            x = (x * generator as u64) % p as u64;
        }
    }
    // Borel subgroup: (a, b; 0, a⁻¹).
    let mut borel = Vec::new();
    for a in 1..p {
        let a_inv = crate::residues::mod_inverse(a as i64, p as i64).unwrap();
        for b in 0..p {
            borel.push((
                GroupElement::new(a as i64, b as i64, 0, a_inv, p),
                dlog[a as usize],
            ));
        }
    }
    // Coset representatives of G_p / B_p.
    let mut coset_of = vec![usize::MAX; size];
    let mut reps = Vec::new();
    for (i, g) in elements.iter().enumerate() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for (b, _) in &borel {
            let gb = g.mul(b, p);
            coset_of[index[&gb.key(p)]] = c;
        }
        coset_of[i] = c;
    }
    let dim_each = (p + 1) as usize;
    if reps.len() != dim_each {
        return Err(Error::ContractViolation(format!(
            "expected {dim_each} Borel cosets at p={p}, found {}",
            reps.len()
        )));
    }
    // Basis vectors of Ind_j: supported on one coset, f(rep·b) = ψ_j(a(b)).
    let tau = 2.0 * std::f64::consts::PI / (p - 1) as f64;
    let mut spaces: Vec<Vec<Vec<Complex64>>> = Vec::new();
    for j in 0..(p - 1) {
        let mut basis = Vec::with_capacity(dim_each);
        for &rep in &reps {
            let mut v = vec![Complex64::new(0.0, 0.0); size];
            let g_rep = elements[rep];
            for (b, logs) in &borel {
                let gb = g_rep.mul(b, p);
                let chi = Complex64::from_polar(1.0, tau * (j * logs) as f64);
                v[index[&gb.key(p)]] = chi;
            }
            basis.push(v);
        }
        spaces.push(basis);
    }
    let dot = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    };
    // Gram within each space must be |B_p| times the identity.
    let gram_scalar = borel.len() as f64;
    let mut max_orth: f64 = 0.0;
    for (js, s) in spaces.iter().enumerate() {
        for (iv, u) in s.iter().enumerate() {
            for (jv, v) in s.iter().enumerate() {
                let g = dot(u, v);
                let expect = if iv == jv { gram_scalar } else { 0.0 };
                max_orth = max_orth.max((g - expect).norm());
            }
        }
        for other in spaces.iter().skip(js + 1) {
            for u in s {
                for v in other {
                    max_orth = max_orth.max(dot(u, v).norm());
                }
            }
        }
    }
    // Invariance of each space under the left action of L and R.
    let left_action = |o: GroupElement, f: &[Complex64]| -> Vec<Complex64> {
        let o_inv = o.inv(p);
        elements
            .iter()
            .map(|x| f[index[&o_inv.mul(x, p).key(p)]])
            .collect()
    };
    let l = GroupElement::new(1, 1, 0, 1, p);
    let r = GroupElement::new(1, 0, 1, 1, p);
    let mut max_inv: f64 = 0.0;
    for s in &spaces {
        for o in [l, r] {
            for f in s {
                let lf = left_action(o, f);
                // Residual after projecting onto the space.
                let mut residual = lf.clone();
                for b in s {
                    let coeff = dot(b, &lf) / gram_scalar;
                    for (ri, bi) in residual.iter_mut().zip(b) {
                        *ri -= coeff * bi;
                    }
                }
                let norm = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                max_inv = max_inv.max(norm);
            }
        }
    }
    let total_dim = spaces.len() * dim_each;
    if total_dim != (p * p - 1) as usize {
        return Err(Error::ContractViolation(format!(
            "induced dimensions sum to {total_dim}, want {}",
            p * p - 1
        )));
    }
    if max_orth > 1e-9 || max_inv > 1e-9 {
        return Err(Error::ContractViolation(format!(
            "induced spaces defective at p={p}: orth {max_orth:.2e}, invariance {max_inv:.2e}"
        )));
    }
    Ok(InducedReport {
        p,
        generator,
        space_count: spaces.len(),
        dim_each,
        total_dim,
        max_orthogonality_defect: max_orth,
        max_invariance_defect: max_inv,
        gram_scalar,
    })
}

/// Informational rows (q, J2(q), 3q/16) for prime powers q <= max_n: the
/// dimension of the new block at level q against the lower bound reported
/// for new representations.
pub fn dimension_bound_report(max_n: u32) -> Vec<(u32, u64, f64)> {
    let smallest_factor = |q: u32| -> u32 {
        let mut p = 2;
        while p * p <= q {
            if q % p == 0 {
                return p;
            }
            p += 1;
        }
        q
    };
    let mut out = Vec::new();
    for q in 2..=max_n {
        let p = smallest_factor(q);
        let mut m = q;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            out.push((q, crate::residues::jordan2_of(q), 3.0 * q as f64 / 16.0));
        }
    }
    out
}
