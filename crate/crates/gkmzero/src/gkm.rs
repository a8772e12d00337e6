//! Moment-graph computations: graded dimensions of the edge-divisibility
//! cohomology ring, the multiplicative congruence test in K-theory, fixed
//! point localization of equivariant bundles (traces and exterior-power
//! classes), the Chern character compatibility check, formality series, and
//! transport of classes along labeled graph automorphisms.

use crate::error::{Error, Result};
use crate::laurent::{char_monomial, laurent_divisible, LaurentPoly, LaurentRing};
use crate::linalg::QMat;
use crate::poly::{rat, rat_frac, MultiPoly, PolyRing, Rat};
use crate::series::RationalSeries;
use itertools::Itertools;
use num::Zero;
use std::collections::BTreeMap;

/// A labeled graph of torus fixed points: one vertex per fixed point, one
/// edge per one-dimensional orbit, labeled by the character of the orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentGraph {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub character: Vec<i64>,
}

impl MomentGraph {
    pub fn new(
        rank: usize,
        vertices: Vec<String>,
        edges: Vec<(usize, usize, Vec<i64>)>,
    ) -> Result<MomentGraph> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::structural(format!("duplicate vertex label {v}")));
            }
        }
        let edges = edges
            .into_iter()
            .map(|(from, to, character)| {
                if from >= vertices.len() || to >= vertices.len() {
                    return Err(Error::structural("edge endpoint out of range"));
                }
                if from == to {
                    return Err(Error::structural("edge endpoints must differ"));
                }
                if character.len() != rank {
                    return Err(Error::structural("edge character has wrong length"));
                }
                if character.iter().all(|&a| a == 0) {
                    return Err(Error::structural("edge character must be nonzero"));
                }
                Ok(GraphEdge { from, to, character })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentGraph { rank, vertices, edges })
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::structural(format!("unknown vertex label {label}")))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for w in [e.from, e.to] {
                    if (e.from == v || e.to == v) && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Coordinate ring of the torus Lie algebra: x1..xr.
    pub fn polynomial_ring(&self) -> PolyRing {
        PolyRing::new((1..=self.rank).map(|i| format!("x{i}")).collect::<Vec<_>>())
    }

    /// Character ring of the torus: Laurent polynomials in x1..xr.
    pub fn laurent_ring(&self) -> LaurentRing {
        LaurentRing::new((1..=self.rank).map(|i| format!("x{i}")).collect::<Vec<_>>())
    }
}

/// A tuple of fixed-point localizations of a cohomology class: one
/// polynomial in the graph's rank-many variables per vertex.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub ring: PolyRing,
    pub values: Vec<MultiPoly>,
}

/// A tuple of fixed-point localizations of a K-theory class: one Laurent
/// polynomial per vertex.
#[derive(Clone, Debug)]
pub struct KTheoryClass {
    pub ring: LaurentRing,
    pub values: Vec<LaurentPoly>,
}

impl KTheoryClass {
    pub fn constant(g: &MomentGraph, c: i64) -> KTheoryClass {
        let ring = g.laurent_ring();
        let values = vec![ring.constant(rat(c)); g.vertices.len()];
        KTheoryClass { ring, values }
    }

    /// Vertex-wise sum.
    pub fn add(&self, other: &KTheoryClass) -> Result<KTheoryClass> {
        if self.values.len() != other.values.len() {
            return Err(Error::structural("class vertex counts differ"));
        }
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect();
        Ok(KTheoryClass { ring: self.ring.clone(), values })
    }

    /// Vertex-wise product.
    pub fn mul(&self, other: &KTheoryClass) -> Result<KTheoryClass> {
        if self.values.len() != other.values.len() {
            return Err(Error::structural("class vertex counts differ"));
        }
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect();
        Ok(KTheoryClass { ring: self.ring.clone(), values })
    }

    pub fn scale(&self, c: i64) -> KTheoryClass {
        let values = self.values.iter().map(|v| v.scale(&rat(c))).collect();
        KTheoryClass { ring: self.ring.clone(), values }
    }
}

/// Torus weights of an equivariant vector bundle at every fixed point: one
/// multiset of integer weight vectors per vertex, all of the same size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantBundleData {
    pub rank: usize,
    pub weights: Vec<Vec<Vec<i64>>>,
}

impl EquivariantBundleData {
    pub fn new(torus_rank: usize, weights: Vec<Vec<Vec<i64>>>) -> Result<EquivariantBundleData> {
        let bundle_rank = weights.first().map(Vec::len).unwrap_or(0);
        for per_vertex in &weights {
            if per_vertex.len() != bundle_rank {
                return Err(Error::structural(
                    "bundle data needs the same number of weights at every vertex",
                ));
            }
            for lam in per_vertex {
                if lam.len() != torus_rank {
                    return Err(Error::structural("weight vector has wrong length"));
                }
            }
        }
        Ok(EquivariantBundleData { rank: torus_rank, weights })
    }

    pub fn bundle_rank(&self) -> usize {
        self.weights.first().map(Vec::len).unwrap_or(0)
    }

    /// The direct-sum data: one multiset union per vertex.
    pub fn concat(&self, other: &EquivariantBundleData) -> Result<EquivariantBundleData> {
        if self.rank != other.rank || self.weights.len() != other.weights.len() {
            return Err(Error::structural("bundle data shapes differ"));
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        EquivariantBundleData::new(self.rank, weights)
    }
}

/// All exponent vectors of total degree k in n variables, in a fixed order.
pub fn monomials_of_total_degree(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(pos: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == current.len() {
            current[pos] = left;
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            rec(pos + 1, left - e, current, out);
        }
    }
    rec(0, k, &mut current, &mut out);
    out
}

/// A rational parametrization of the hyperplane where the integer linear
/// form vanishes: images of x1..xr in a ring of r-1 fresh variables.
fn hyperplane_parametrization(alpha: &[i64]) -> (PolyRing, Vec<MultiPoly>) {
    let r = alpha.len();
    let sub = PolyRing::new((1..r).map(|i| format!("u{i}")).collect::<Vec<_>>());
    let pivot = alpha.iter().position(|&a| a != 0).expect("nonzero edge character");
    let mut images = Vec::with_capacity(r);
    let mut pivot_image = sub.zero();
    let mut free = 0usize;
    for (q, &a) in alpha.iter().enumerate() {
        if q == pivot {
            images.push(sub.zero());
            continue;
        }
        if a != 0 {
            pivot_image = pivot_image.add(&sub.var(free).scale(&rat_frac(-a, alpha[pivot])));
        }
        images.push(sub.var(free));
        free += 1;
    }
    images[pivot] = pivot_image;
    (sub, images)
}

/// Whether the linear form with the given coefficients divides p; exact,
/// via vanishing on the form's kernel.
pub fn divisible_by_linear_form(p: &MultiPoly, alpha: &[i64]) -> Result<bool> {
    if p.num_vars() != alpha.len() {
        return Err(Error::structural("form length does not match the ring"));
    }
    if alpha.iter().all(|&a| a == 0) {
        return Err(Error::domain("zero linear form"));
    }
    let (sub, images) = hyperplane_parametrization(alpha);
    Ok(p.substitute(&images, &sub).is_zero())
}

/// Graded dimension of degree-d tuples of polynomials satisfying every
/// edge-divisibility condition, by exact linear algebra on monomial
/// coefficients.  Odd or negative d contribute nothing.
pub fn gkm_cohomology_dim(g: &MomentGraph, d: i64) -> Result<usize> {
    if d < 0 || d % 2 != 0 {
        return Ok(0);
    }
    let k = (d / 2) as u32;
    let ring = g.polynomial_ring();
    let mons = monomials_of_total_degree(g.rank, k);
    let cols = g.vertices.len() * mons.len();
    if cols == 0 {
        return Ok(0);
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for edge in &g.edges {
        let (sub, images) = hyperplane_parametrization(&edge.character);
        // Substituted image of every degree-k monomial on the edge kernel.
        let mut support: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        let mut restricted = Vec::with_capacity(mons.len());
        for e in &mons {
            let m = ring.monomial(e.clone(), rat(1));
            let img = m.substitute(&images, &sub);
            for (exp, _) in img.terms() {
                let next = support.len();
                support.entry(exp.clone()).or_insert(next);
            }
            restricted.push(img);
        }
        if support.is_empty() {
            continue;
        }
        let mut block = vec![vec![Rat::zero(); cols]; support.len()];
        for (m, img) in restricted.iter().enumerate() {
            for (exp, c) in img.terms() {
                let row = support[exp];
                let from_col = edge.from * mons.len() + m;
                let to_col = edge.to * mons.len() + m;
                block[row][from_col] = block[row][from_col].clone() + c.clone();
                block[row][to_col] = block[row][to_col].clone() - c.clone();
            }
        }
        rows.extend(block);
    }
    if rows.is_empty() {
        return Ok(cols);
    }
    Ok(cols - QMat::from_rows(rows).rank())
}

/// Per-edge congruence test for K-theory localizations: the difference over
/// each edge must be divisible by x^character - 1.  Returns the overall
/// verdict and the indices of the violated edges.
pub fn gkm_ktheory_check(c: &KTheoryClass, g: &MomentGraph) -> Result<(bool, Vec<usize>)> {
    if c.values.len() != g.vertices.len() {
        return Err(Error::structural("class vertex count does not match the graph"));
    }
    let ring = g.laurent_ring();
    let mut violated = Vec::new();
    for (idx, edge) in g.edges.iter().enumerate() {
        let diff = c.values[edge.from].sub(&c.values[edge.to]);
        let modulus = ring.char_minus_one(&edge.character);
        if laurent_divisible(&diff, &modulus)?.is_none() {
            violated.push(idx);
        }
    }
    Ok((violated.is_empty(), violated))
}

/// Per-edge divisibility test for cohomology localizations: the difference
/// over each edge must be divisible by the edge's linear form.
pub fn gkm_cohomology_check(c: &CohomologyClass, g: &MomentGraph) -> Result<(bool, Vec<usize>)> {
    if c.values.len() != g.vertices.len() {
        return Err(Error::structural("class vertex count does not match the graph"));
    }
    let mut violated = Vec::new();
    for (idx, edge) in g.edges.iter().enumerate() {
        let diff = c.values[edge.from].sub(&c.values[edge.to]);
        if !divisible_by_linear_form(&diff, &edge.character)? {
            violated.push(idx);
        }
    }
    Ok((violated.is_empty(), violated))
}

/// Localization of a bundle in K-theory: the trace of the torus action on
/// each fiber, i.e. the sum of the character monomials at each vertex.
pub fn localize_bundle_k(b: &EquivariantBundleData) -> KTheoryClass {
    let ring = LaurentRing::new((1..=b.rank).map(|i| format!("x{i}")).collect::<Vec<_>>());
    let values = b
        .weights
        .iter()
        .map(|per_vertex| {
            let mut sum = ring.zero();
            for lam in per_vertex {
                sum = sum.add(&char_monomial(&ring, lam, 1));
            }
            sum
        })
        .collect();
    KTheoryClass { ring, values }
}

/// Localization of the k-th exterior-power class: at each vertex, the k-th
/// elementary symmetric polynomial of the weight linear forms.
pub fn localize_chern(b: &EquivariantBundleData, k: usize) -> Result<CohomologyClass> {
    if k > b.bundle_rank() {
        return Err(Error::domain(format!(
            "exterior power {k} exceeds the bundle rank {}",
            b.bundle_rank()
        )));
    }
    let ring = PolyRing::new((1..=b.rank).map(|i| format!("x{i}")).collect::<Vec<_>>());
    let values = b
        .weights
        .iter()
        .map(|per_vertex| {
            let forms: Vec<MultiPoly> =
                per_vertex.iter().map(|lam| linear_form(&ring, lam)).collect();
            let mut e_k = ring.zero();
            for subset in (0..forms.len()).combinations(k) {
                let mut prod = ring.one();
                for i in subset {
                    prod = prod.mul(&forms[i]);
                }
                e_k = e_k.add(&prod);
            }
            e_k
        })
        .collect();
    Ok(CohomologyClass { ring, values })
}

fn linear_form(ring: &PolyRing, lam: &[i64]) -> MultiPoly {
    let mut f = ring.zero();
    for (q, &a) in lam.iter().enumerate() {
        if a != 0 {
            f = f.add(&ring.var(q).scale(&rat(a)));
        }
    }
    f
}

/// Sum over 0 <= j <= order of form^j / j!.
fn truncated_exponential(form: &MultiPoly, order: u32) -> MultiPoly {
    let ring = form.ring();
    let mut sum = ring.one();
    let mut power = ring.one();
    let mut factorial = rat(1);
    for j in 1..=order {
        power = power.mul(form);
        factorial *= rat(j as i64);
        sum = sum.add(&power.scale(&(rat(1) / factorial.clone())));
    }
    sum
}

fn drop_above_degree(p: &MultiPoly, order: u32) -> MultiPoly {
    let ring = p.ring();
    let mut out = ring.zero();
    for (e, c) in p.terms() {
        if e.iter().sum::<u32>() <= order {
            out = out.add(&ring.monomial(e.clone(), c.clone()));
        }
    }
    out
}

/// Verify that substituting formal exponentials for the character monomials
/// of the K-theory localization agrees, at every vertex and to total order
/// `order`, with the exponential series reconstructed from the
/// exterior-power classes through Newton's identities.
pub fn chern_character_check(b: &EquivariantBundleData, order: u32) -> Result<bool> {
    if order == 0 {
        return Err(Error::domain("truncation order must be at least 1"));
    }
    let rank = b.bundle_rank();
    let ring = PolyRing::new((1..=b.rank).map(|i| format!("x{i}")).collect::<Vec<_>>());
    let k_class = localize_bundle_k(b);
    let cherns: Vec<CohomologyClass> =
        (1..=rank).map(|k| localize_chern(b, k)).collect::<Result<Vec<_>>>()?;
    for v in 0..b.weights.len() {
        // Route one: x^lambda -> exp(<lambda, .>), term by term from the
        // K-theory localization.
        let mut from_k = ring.zero();
        for (exp, c) in k_class.values[v].terms() {
            let lam: Vec<i64> = exp.iter().map(|&e| i64::from(e)).collect();
            let form = linear_form(&ring, &lam);
            from_k = from_k.add(&truncated_exponential(&form, order).scale(c));
        }
        // Route two: power sums from the elementary symmetric values via
        // Newton's identities, then rank + sum p_k / k!.
        let e_at = |j: usize| -> MultiPoly {
            if j == 0 {
                ring.one()
            } else if j <= rank {
                cherns[j - 1].values[v].clone()
            } else {
                ring.zero()
            }
        };
        let mut p: Vec<MultiPoly> = Vec::new();
        for k in 1..=(order as usize) {
            // p_k = sum_{j=1}^{k-1} (-1)^{j-1} e_j p_{k-j} + (-1)^{k-1} k e_k
            let mut pk = ring.zero();
            for j in 1..k {
                let term = e_at(j).mul(&p[k - j - 1]);
                pk = if j % 2 == 1 { pk.add(&term) } else { pk.sub(&term) };
            }
            let tail = e_at(k).scale(&rat(k as i64));
            pk = if k % 2 == 1 { pk.add(&tail) } else { pk.sub(&tail) };
            p.push(pk);
        }
        let mut from_chern = ring.constant(rat(rank as i64));
        let mut factorial = rat(1);
        for k in 1..=(order as usize) {
            factorial *= rat(k as i64);
            from_chern = from_chern.add(&p[k - 1].scale(&(rat(1) / factorial.clone())));
        }
        if !drop_above_degree(&from_k, order).sub(&drop_above_degree(&from_chern, order)).is_zero()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The graded series of the edge-divisibility ring under formality: the
/// ordinary Betti numerator divided by (1 - t^2)^r.
pub fn formality_series(betti: &[i64], r: usize) -> Result<RationalSeries> {
    if betti.iter().any(|&b| b < 0) {
        return Err(Error::domain("negative Betti number"));
    }
    let num: Vec<Rat> = betti.iter().map(|&b| rat(b)).collect();
    let mut den = vec![rat(1)];
    for _ in 0..r {
        // multiply by 1 - t^2
        let mut next = vec![Rat::zero(); den.len() + 2];
        for (i, c) in den.iter().enumerate() {
            next[i] += c.clone();
            next[i + 2] -= c.clone();
        }
        den = next;
    }
    RationalSeries::new(num, den)
}

/// Transport a cohomology class along a labeled graph automorphism given by
/// a vertex permutation and an integer matrix on the torus Lie algebra, and
/// test whether the transported class still satisfies every edge condition.
/// The pair must genuinely be an automorphism of the labeled graph.
pub fn weyl_transport_check(
    c: &CohomologyClass,
    g: &MomentGraph,
    perm: &[usize],
    mat: &[Vec<i64>],
) -> Result<bool> {
    if c.values.len() != g.vertices.len() {
        return Err(Error::structural("class vertex count does not match the graph"));
    }
    if perm.len() != g.vertices.len() {
        return Err(Error::structural("permutation length does not match the graph"));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::structural("not a vertex permutation"));
        }
        seen[p] = true;
    }
    let r = g.rank;
    if mat.len() != r || mat.iter().any(|row| row.len() != r) {
        return Err(Error::structural("matrix shape does not match the torus rank"));
    }
    let det = integer_determinant(mat);
    if det != 1 && det != -1 {
        return Err(Error::structural("matrix is not a lattice automorphism"));
    }
    // Labeled automorphism: the image of every edge must be an edge whose
    // label pulls back proportionally to the original label.
    for edge in &g.edges {
        let (ia, ib) = (perm[edge.from], perm[edge.to]);
        let mut matched = false;
        for other in &g.edges {
            if (other.from, other.to) != (ia, ib) && (other.from, other.to) != (ib, ia) {
                continue;
            }
            // pulled-back label: mat^T * other.character
            let pulled: Vec<i64> = (0..r)
                .map(|q| (0..r).map(|p| mat[p][q] * other.character[p]).sum())
                .collect();
            if proportional(&pulled, &edge.character) {
                matched = true;
                break;
            }
        }
        if !matched {
            return Err(Error::structural(
                "the pair is not an automorphism of the labeled graph",
            ));
        }
    }
    // Transported class: vertex i picks up the value at perm(i) composed
    // with the matrix substitution x -> mat * x.
    let images: Vec<MultiPoly> = (0..r)
        .map(|p| linear_form(&c.ring, &mat[p]))
        .collect();
    let transported = CohomologyClass {
        ring: c.ring.clone(),
        values: (0..c.values.len())
            .map(|i| c.values[perm[i]].substitute(&images, &c.ring))
            .collect(),
    };
    Ok(gkm_cohomology_check(&transported, g)?.0)
}

fn integer_determinant(mat: &[Vec<i64>]) -> i64 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return mat[0][0];
    }
    let mut det = 0i64;
    for (j, &entry) in mat[0].iter().enumerate() {
        if entry == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(q, _)| q != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        det += sign * entry * integer_determinant(&minor);
    }
    det
}

fn proportional(a: &[i64], b: &[i64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    // a = (p/q) b for some nonzero rational p/q: cross-ratios must agree
    if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
        return false;
    }
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a[i] * b[j] != a[j] * b[i] {
                return false;
            }
        }
    }
    // same support pattern
    a.iter().zip(b).all(|(&x, &y)| (x == 0) == (y == 0))
}

// ---------------------------------------------------------------------------
// Standard graphs used across tests and bundled data.

/// Two fixed points joined by one edge with character (1).
pub fn projective_line_graph() -> MomentGraph {
    MomentGraph::new(1, vec!["0".into(), "inf".into()], vec![(0, 1, vec![1])])
        .expect("valid graph")
}

/// The four fixed points of a product of two lines, edges labeled by the
/// two coordinate characters.
pub fn product_of_lines_graph() -> MomentGraph {
    MomentGraph::new(
        2,
        vec!["00".into(), "10".into(), "01".into(), "11".into()],
        vec![
            (0, 1, vec![1, 0]),
            (2, 3, vec![1, 0]),
            (0, 2, vec![0, 1]),
            (1, 3, vec![0, 1]),
        ],
    )
    .expect("valid graph")
}

/// The hexagon of the six complete flags in a three-dimensional space:
/// vertices are permutation words, edges join words differing by a symbol
/// swap, labeled by the corresponding root.
pub fn flag_graph_gl3() -> MomentGraph {
    let words: Vec<String> = (1..=3u8)
        .permutations(3)
        .map(|p| p.iter().map(u8::to_string).collect::<String>())
        .collect();
    let mut edges = Vec::new();
    for (a, wa) in words.iter().enumerate() {
        for (b, wb) in words.iter().enumerate() {
            if a >= b {
                continue;
            }
            let diff: Vec<usize> =
                (0..3).filter(|&k| wa.as_bytes()[k] != wb.as_bytes()[k]).collect();
            // a symbol swap changes exactly two positions, exchanging values
            if diff.len() == 2
                && wa.as_bytes()[diff[0]] == wb.as_bytes()[diff[1]]
                && wa.as_bytes()[diff[1]] == wb.as_bytes()[diff[0]]
            {
                let i = (wa.as_bytes()[diff[0]] - b'1') as usize;
                let j = (wa.as_bytes()[diff[1]] - b'1') as usize;
                let mut character = vec![0i64; 3];
                character[i] = 1;
                character[j] = -1;
                edges.push((a, b, character));
            }
        }
    }
    MomentGraph::new(3, words, edges).expect("valid graph")
}

/// The six coordinate planes in four-dimensional space: vertices are
/// two-element subsets, edges join subsets sharing an element, labeled by
/// differences of the diagonal characters with the fourth expressed through
/// the first three.
pub fn grassmannian_2_4_graph() -> MomentGraph {
    let eps = |i: usize| -> Vec<i64> {
        match i {
            0 => vec![1, 0, 0],
            1 => vec![0, 1, 0],
            2 => vec![0, 0, 1],
            _ => vec![-1, -1, -1],
        }
    };
    let subsets: Vec<Vec<usize>> = (0..4).combinations(2).collect();
    let labels: Vec<String> = subsets
        .iter()
        .map(|s| s.iter().map(|i| (i + 1).to_string()).collect::<String>())
        .collect();
    let mut edges = Vec::new();
    for a in 0..subsets.len() {
        for b in (a + 1)..subsets.len() {
            let common: Vec<usize> =
                subsets[a].iter().copied().filter(|i| subsets[b].contains(i)).collect();
            if common.len() != 1 {
                continue;
            }
            let i = *subsets[a].iter().find(|i| !common.contains(i)).unwrap();
            let j = *subsets[b].iter().find(|j| !common.contains(j)).unwrap();
            let character: Vec<i64> =
                eps(i).iter().zip(eps(j)).map(|(&x, y)| x - y).collect();
            edges.push((a, b, character));
        }
    }
    MomentGraph::new(3, labels, edges).expect("valid graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn line_graph_dims_match_free_module_series() {
        let g = projective_line_graph();
        let dims: Vec<usize> =
            (0..=8).map(|d| gkm_cohomology_dim(&g, d).unwrap()).collect();
        assert_eq!(dims, vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
        // odd degrees vanish by convention
        assert_eq!(gkm_cohomology_dim(&g, 3).unwrap(), 0);
        assert_eq!(gkm_cohomology_dim(&g, -2).unwrap(), 0);
    }

    #[test]
    fn product_graph_degree_two() {
        let g = product_of_lines_graph();
        assert_eq!(gkm_cohomology_dim(&g, 0).unwrap(), 1);
        assert_eq!(gkm_cohomology_dim(&g, 2).unwrap(), 4);
    }

    #[test]
    fn single_vertex_is_a_free_polynomial_ring() {
        let g = MomentGraph::new(3, vec!["pt".into()], vec![]).unwrap();
        // binom(d/2 + 2, 2)
        assert_eq!(gkm_cohomology_dim(&g, 0).unwrap(), 1);
        assert_eq!(gkm_cohomology_dim(&g, 2).unwrap(), 3);
        assert_eq!(gkm_cohomology_dim(&g, 4).unwrap(), 6);
        assert_eq!(gkm_cohomology_dim(&g, 6).unwrap(), 10);
    }

    #[test]
    fn degree_zero_counts_connected_components() {
        let g = flag_graph_gl3();
        assert!(g.is_connected());
        assert_eq!(gkm_cohomology_dim(&g, 0).unwrap(), 1);
        let two = MomentGraph::new(
            1,
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![(0, 1, vec![1]), (2, 3, vec![1])],
        )
        .unwrap();
        assert!(!two.is_connected());
        assert_eq!(gkm_cohomology_dim(&two, 0).unwrap(), 2);
    }

    #[test]
    fn flag_and_grassmannian_graph_shapes() {
        let flag = flag_graph_gl3();
        assert_eq!(flag.vertices.len(), 6);
        assert_eq!(flag.edges.len(), 9);
        // every vertex has exactly three incident edges
        for v in 0..6 {
            let deg =
                flag.edges.iter().filter(|e| e.from == v || e.to == v).count();
            assert_eq!(deg, 3);
        }
        let gr = grassmannian_2_4_graph();
        assert_eq!(gr.vertices.len(), 6);
        assert_eq!(gr.edges.len(), 12);
        for v in 0..6 {
            let deg = gr.edges.iter().filter(|e| e.from == v || e.to == v).count();
            assert_eq!(deg, 4);
        }
        assert!(gr.is_connected());
    }

    #[test]
    fn ktheory_check_divisibility_examples() {
        let g = projective_line_graph();
        // constant tuples always pass
        let (ok, bad) = gkm_ktheory_check(&KTheoryClass::constant(&g, 5), &g).unwrap();
        assert!(ok && bad.is_empty());
        // (1, x): difference 1 - x is divisible by x - 1
        let ring = g.laurent_ring();
        let c = KTheoryClass {
            ring: ring.clone(),
            values: vec![ring.one(), ring.monomial(vec![1], rat(1))],
        };
        assert!(gkm_ktheory_check(&c, &g).unwrap().0);
        // (1, 2): constant difference -1 is not divisible
        let c = KTheoryClass {
            ring: ring.clone(),
            values: vec![ring.one(), ring.constant(rat(2))],
        };
        let (ok, bad) = gkm_ktheory_check(&c, &g).unwrap();
        assert!(!ok);
        assert_eq!(bad, vec![0]);
    }

    #[test]
    fn bundle_localization_examples() {
        let g = projective_line_graph();
        // trivial rank-2: constant 2
        let b = EquivariantBundleData::new(1, vec![vec![vec![0], vec![0]]; 2]).unwrap();
        let c = localize_bundle_k(&b);
        assert_eq!(format!("{}", c.values[0]), "2");
        assert!(gkm_ktheory_check(&c, &g).unwrap().0);
        // degree-one line bundle: (1, x)
        let b = EquivariantBundleData::new(1, vec![vec![vec![0]], vec![vec![1]]]).unwrap();
        let c = localize_bundle_k(&b);
        assert_eq!(format!("{}", c.values[1]), "x1");
        assert!(gkm_ktheory_check(&c, &g).unwrap().0);
        // tangent-type data passes on the label (1) ...
        let b = EquivariantBundleData::new(1, vec![vec![vec![1]], vec![vec![-1]]]).unwrap();
        assert!(gkm_ktheory_check(&localize_bundle_k(&b), &g).unwrap().0);
        // ... but fails when the edge label is famously incompatible
        let g3 = MomentGraph::new(
            1,
            vec!["0".into(), "inf".into()],
            vec![(0, 1, vec![3])],
        )
        .unwrap();
        let (ok, bad) = gkm_ktheory_check(&localize_bundle_k(&b), &g3).unwrap();
        assert!(!ok);
        assert_eq!(bad, vec![0]);
    }

    #[test]
    fn whitney_sum_is_additive() {
        let b1 = EquivariantBundleData::new(2, vec![vec![vec![1, 0]], vec![vec![0, 1]]]).unwrap();
        let b2 = EquivariantBundleData::new(2, vec![vec![vec![2, 0]], vec![vec![0, 2]]]).unwrap();
        let sum = b1.concat(&b2).unwrap();
        let lhs = localize_bundle_k(&sum);
        let rhs = localize_bundle_k(&b1).add(&localize_bundle_k(&b2)).unwrap();
        for (a, b) in lhs.values.iter().zip(&rhs.values) {
            assert!(a.sub(b).is_zero());
        }
    }

    #[test]
    fn chern_localization_examples() {
        // k = 0 is the constant 1
        let b = EquivariantBundleData::new(2, vec![vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let c0 = localize_chern(&b, 0).unwrap();
        assert_eq!(format!("{}", c0.values[0]), "1");
        // top class of weights (1,0),(0,1) is x1 x2
        let c2 = localize_chern(&b, 2).unwrap();
        assert_eq!(format!("{}", c2.values[0]), "x1*x2");
        // opposite weights cancel in the first class
        let b = EquivariantBundleData::new(2, vec![vec![vec![1, 2], vec![-1, -2]]]).unwrap();
        let c1 = localize_chern(&b, 1).unwrap();
        assert!(c1.values[0].is_zero());
        // out-of-range exterior power refused
        assert!(localize_chern(&b, 3).is_err());
    }

    #[test]
    fn chern_classes_of_consistent_bundles_satisfy_divisibility() {
        // first tautological piece on the line: weights 0 and 1
        let g = projective_line_graph();
        let b = EquivariantBundleData::new(1, vec![vec![vec![0]], vec![vec![1]]]).unwrap();
        let c1 = localize_chern(&b, 1).unwrap();
        assert!(gkm_cohomology_check(&c1, &g).unwrap().0);
        // a non-matching assignment is flagged
        let broken = CohomologyClass {
            ring: g.polynomial_ring(),
            values: vec![g.polynomial_ring().one(), g.polynomial_ring().zero()],
        };
        let (ok, bad) = gkm_cohomology_check(&broken, &g).unwrap();
        assert!(!ok);
        assert_eq!(bad, vec![0]);
    }

    #[test]
    fn chern_character_matches_newton_reconstruction() {
        // trivial data: both sides equal the rank
        let b = EquivariantBundleData::new(2, vec![vec![vec![0, 0], vec![0, 0]]]).unwrap();
        assert!(chern_character_check(&b, 4).unwrap());
        // a single weight: both sides are the truncated exponential
        let b = EquivariantBundleData::new(2, vec![vec![vec![2, -1]]]).unwrap();
        assert!(chern_character_check(&b, 3).unwrap());
        // a mixed rank-3 example
        let b = EquivariantBundleData::new(
            3,
            vec![vec![vec![1, 0, 0], vec![0, 1, -1], vec![2, 2, 2]]],
        )
        .unwrap();
        assert!(chern_character_check(&b, 4).unwrap());
        // order zero refused
        assert!(chern_character_check(&b, 0).is_err());
    }

    #[test]
    fn formality_series_examples() {
        // single cell
        let s = formality_series(&[1], 0).unwrap();
        assert_eq!(s.expand_integers(4).unwrap(), vec![1, 0, 0, 0, 0]);
        // the line: (1 + t^2)/(1 - t^2)
        let s = formality_series(&[1, 0, 1], 1).unwrap();
        assert_eq!(s.expand_integers(8).unwrap(), vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
        // three-space cells over rank 1
        let s = formality_series(&[1, 0, 1, 0, 1, 0, 1], 1).unwrap();
        assert_eq!(s.expand_integers(8).unwrap(), vec![1, 0, 2, 0, 3, 0, 4, 0, 4]);
        assert!(formality_series(&[1, -1], 1).is_err());
    }

    #[test]
    fn formality_matches_graph_dims_on_the_line() {
        let g = projective_line_graph();
        let coeffs = formality_series(&[1, 0, 1], 1).unwrap().expand_integers(10).unwrap();
        for (d, &c) in coeffs.iter().enumerate() {
            assert_eq!(gkm_cohomology_dim(&g, d as i64).unwrap() as i64, c, "degree {d}");
        }
    }

    #[test]
    fn weyl_transport_on_the_line() {
        let g = projective_line_graph();
        let ring = g.polynomial_ring();
        // identity pair accepts anything valid
        let c = CohomologyClass {
            ring: ring.clone(),
            values: vec![ring.zero(), ring.var(0)],
        };
        assert!(weyl_transport_check(&c, &g, &[0, 1], &[vec![1]]).unwrap());
        // the reflection pair: swap vertices, negate the torus
        assert!(weyl_transport_check(&c, &g, &[1, 0], &[vec![-1]]).unwrap());
        // swapping vertices without moving the torus is still an
        // automorphism of this graph, and transport stays valid
        assert!(weyl_transport_check(&c, &g, &[1, 0], &[vec![1]]).unwrap());
        // a non-automorphism is rejected structurally
        let two = MomentGraph::new(
            1,
            vec!["a".into(), "b".into(), "c".into()],
            vec![(0, 1, vec![1])],
        )
        .unwrap();
        let c3 = CohomologyClass {
            ring: ring.clone(),
            values: vec![ring.zero(), ring.zero(), ring.zero()],
        };
        assert!(weyl_transport_check(&c3, &two, &[0, 2, 1], &[vec![1]]).is_err());
        // a non-unimodular matrix is rejected
        assert!(weyl_transport_check(&c, &g, &[0, 1], &[vec![2]]).is_err());
    }

    #[test]
    fn weyl_transport_on_the_flag_hexagon() {
        let g = flag_graph_gl3();
        // class: first exterior-power localization of the first flag line
        let b = EquivariantBundleData::new(
            3,
            g.vertices
                .iter()
                .map(|w| {
                    let i = (w.as_bytes()[0] - b'1') as usize;
                    let mut lam = vec![0i64; 3];
                    lam[i] = 1;
                    vec![lam]
                })
                .collect(),
        )
        .unwrap();
        let c1 = localize_chern(&b, 1).unwrap();
        assert!(gkm_cohomology_check(&c1, &g).unwrap().0);
        // simple reflection swapping symbols 1 and 2: acts on words by the
        // swap, on the torus by exchanging the first two coordinates
        let perm: Vec<usize> = g
            .vertices
            .iter()
            .map(|w| {
                let image: String = w
                    .chars()
                    .map(|ch| match ch {
                        '1' => '2',
                        '2' => '1',
                        other => other,
                    })
                    .collect();
                g.vertex_index(&image).unwrap()
            })
            .collect();
        let mat = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]];
        assert!(weyl_transport_check(&c1, &g, &perm, &mat).unwrap());
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_total_degree(0, 0), vec![Vec::<u32>::new()]);
        assert!(monomials_of_total_degree(0, 2).is_empty());
        assert_eq!(monomials_of_total_degree(1, 5), vec![vec![5]]);
        assert_eq!(monomials_of_total_degree(3, 4).len(), 15);
    }

    #[test]
    fn linear_form_divisibility() {
        let ring = PolyRing::new(vec!["x1", "x2"]);
        let p = ring.parse("x1^2 - x2^2").unwrap();
        assert!(divisible_by_linear_form(&p, &[1, -1]).unwrap());
        assert!(divisible_by_linear_form(&p, &[1, 1]).unwrap());
        assert!(!divisible_by_linear_form(&p, &[1, 0]).unwrap());
        let q = ring.parse("2*x1 - 2*x2").unwrap();
        // scaling the form does not change divisibility over the rationals
        assert!(divisible_by_linear_form(&q, &[1, -1]).unwrap());
    }
}
