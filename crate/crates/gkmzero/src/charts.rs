//! Affine chart atlases for projective spaces, products of projective
//! spaces, and Grassmannians: exact rational transition maps between charts,
//! the vector fields induced by matrix actions, fixed-locus ideals of group
//! and algebra elements, and the chart-coordinate weights of diagonal
//! one-parameter scalings.

use crate::error::{Error, Result};
use crate::lie::{determinant, MatrixElt, SectionFamily};
use crate::poly::{MultiPoly, PolyRing};
use itertools::Itertools;
use std::collections::BTreeMap;

/// What a chart coordinate means geometrically; drives the weight formulas
/// for diagonal one-parameter scalings and torus characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordTag {
    /// x_pos / x_chart on a projective factor; both indices are global
    /// positions into the concatenated homogeneous coordinates.
    Proj { chart: usize, pos: usize },
    /// Entry (row, slot) of the normalized spanning matrix on a Grassmannian
    /// chart; `pivot` is the row that owns the slot's pivot.
    Grass { pivot: usize, row: usize },
    /// Supplied by an explicit atlas, which must carry its own weight data.
    Explicit,
}

/// One affine chart: a label, its coordinate ring, the geometric tag of each
/// coordinate, and the positions (homogeneous coordinates or matrix rows)
/// that the chart normalizes to 1.
#[derive(Clone, Debug)]
pub struct ChartData {
    pub label: String,
    pub ring: PolyRing,
    pub tags: Vec<CoordTag>,
    pub pivots: Vec<usize>,
}

/// The image of one source coordinate under a chart transition: a polynomial
/// numerator over the target chart divided by `h^hpow`.
#[derive(Clone, Debug)]
pub struct RationalImage {
    pub num: MultiPoly,
    pub hpow: u32,
}

/// A rational substitution map expressing one chart's coordinates inside
/// another chart, with all denominators powers of the single overlap
/// function `h`.
#[derive(Clone, Debug)]
pub struct Transition {
    pub source: PolyRing,
    pub target: PolyRing,
    /// The overlap function on the target chart; the transition is regular
    /// where h is invertible.
    pub h: MultiPoly,
    /// One image per source variable.
    pub images: Vec<RationalImage>,
}

impl Transition {
    /// Smallest n such that h^n * (g after substitution) is a polynomial,
    /// i.e. the largest total denominator power over the terms of g.
    pub fn required_clearing(&self, g: &MultiPoly) -> Result<u32> {
        if !g.ring().same(&self.source) {
            return Err(Error::structural(
                "transition applied to a polynomial from the wrong chart",
            ));
        }
        Ok(g.terms()
            .map(|(e, _)| {
                e.iter()
                    .zip(&self.images)
                    .map(|(&a, im)| a * im.hpow)
                    .sum()
            })
            .max()
            .unwrap_or(0))
    }

    /// h^power * (g after substitution), as a polynomial over the target
    /// chart.  Refuses when the clearing power is too small to absorb the
    /// denominators.
    pub fn substitute_cleared(&self, g: &MultiPoly, power: u32) -> Result<MultiPoly> {
        let need = self.required_clearing(g)?;
        if power < need {
            return Err(Error::refused(format!(
                "clearing power {power} is below the required {need}"
            )));
        }
        let mut out = self.target.zero();
        for (e, c) in g.terms() {
            let mut term = self.target.constant(c.clone());
            let mut spent = 0u32;
            for (m, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                term = term.mul(&self.images[m].num.pow(a));
                spent += a * self.images[m].hpow;
            }
            term = term.mul(&self.h.pow(power - spent));
            out = out.add(&term);
        }
        Ok(out)
    }

    /// The same substitution on rings that share leading parameter
    /// variables, mapped identically.
    pub fn extend_with_params(&self, params: &[String]) -> Transition {
        let source = PolyRing::new(
            params
                .iter()
                .cloned()
                .chain(self.source.vars().iter().cloned())
                .collect::<Vec<_>>(),
        );
        let target = PolyRing::new(
            params
                .iter()
                .cloned()
                .chain(self.target.vars().iter().cloned())
                .collect::<Vec<_>>(),
        );
        let mut images: Vec<RationalImage> = params
            .iter()
            .enumerate()
            .map(|(i, _)| RationalImage { num: target.var(i), hpow: 0 })
            .collect();
        for im in &self.images {
            images.push(RationalImage {
                num: im.num.map_vars(&target).expect("target extends the chart ring"),
                hpow: im.hpow,
            });
        }
        let h = self.h.map_vars(&target).expect("target extends the chart ring");
        Transition { source, target, h, images }
    }
}

/// The supported atlas shapes.
#[derive(Clone, Debug)]
pub enum SpaceKind {
    /// Projective space of the given dimension, covered by the standard
    /// affine charts {x_i = 1}.
    Projective(usize),
    /// A product of projective spaces, one entry per factor dimension;
    /// charts are tuples of factor charts.
    Product(Vec<usize>),
    /// The Grassmannian of k-dimensional subspaces of an n-dimensional
    /// space, covered by the column-echelon charts indexed by k-subsets of
    /// rows.
    Grassmannian { k: usize, n: usize },
    /// A user-supplied chart list with explicit transition data.
    Explicit,
}

/// An atlas of affine charts with pairwise transition maps.
#[derive(Clone, Debug)]
pub struct ChartedSpace {
    pub kind: SpaceKind,
    pub charts: Vec<ChartData>,
    transitions: BTreeMap<(usize, usize), Transition>,
}

impl ChartedSpace {
    /// Projective n-space with default coordinate names z{m} on each chart.
    pub fn projective(n: usize) -> ChartedSpace {
        let names: Vec<Vec<String>> = (0..=n)
            .map(|i| (0..=n).filter(|&m| m != i).map(|m| format!("z{m}")).collect())
            .collect();
        ChartedSpace::projective_named(n, &names).expect("canonical chart names are valid")
    }

    /// Projective n-space with caller-chosen coordinate names per chart
    /// (names[i][j] names x_m/x_i for the j-th position m != i, ascending).
    pub fn projective_named(n: usize, names: &[Vec<String>]) -> Result<ChartedSpace> {
        if n == 0 {
            return Err(Error::structural("projective space of dimension 0 has nothing to chart"));
        }
        if names.len() != n + 1 || names.iter().any(|c| c.len() != n) {
            return Err(Error::structural(format!(
                "projective {n}-space needs {} charts with {n} coordinate names each",
                n + 1
            )));
        }
        let mut charts = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let ring = PolyRing::new(names[i].clone());
            let tags = (0..=n)
                .filter(|&m| m != i)
                .map(|m| CoordTag::Proj { chart: i, pos: m })
                .collect();
            charts.push(ChartData {
                label: format!("U{i}"),
                ring,
                tags,
                pivots: vec![i],
            });
        }
        let mut transitions = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=n {
                if i == j {
                    continue;
                }
                transitions.insert((i, j), projective_transition(&charts, i, j));
            }
        }
        Ok(ChartedSpace { kind: SpaceKind::Projective(n), charts, transitions })
    }

    /// A product of projective spaces (one dimension per factor), covered by
    /// tuples of factor charts; coordinates are named z{factor}_{position}.
    pub fn product(dims: &[usize]) -> Result<ChartedSpace> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::structural("each product factor must have positive dimension"));
        }
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0usize, |acc, &n| {
                let here = *acc;
                *acc += n + 1;
                Some(here)
            })
            .collect();
        let tuples: Vec<Vec<usize>> = dims
            .iter()
            .map(|&n| (0..=n).collect::<Vec<_>>())
            .multi_cartesian_product()
            .collect();
        let mut charts = Vec::with_capacity(tuples.len());
        for tuple in &tuples {
            let mut names = Vec::new();
            let mut tags = Vec::new();
            let mut pivots = Vec::new();
            for (f, &cf) in tuple.iter().enumerate() {
                pivots.push(offsets[f] + cf);
                for m in 0..=dims[f] {
                    if m == cf {
                        continue;
                    }
                    names.push(format!("z{f}_{m}"));
                    tags.push(CoordTag::Proj {
                        chart: offsets[f] + cf,
                        pos: offsets[f] + m,
                    });
                }
            }
            charts.push(ChartData {
                label: format!("U{}", tuple.iter().map(|c| c.to_string()).join("_")),
                ring: PolyRing::new(names),
                tags,
                pivots,
            });
        }
        let mut transitions = BTreeMap::new();
        for i in 0..charts.len() {
            for j in 0..charts.len() {
                if i == j {
                    continue;
                }
                transitions.insert((i, j), product_transition(&charts, i, j));
            }
        }
        Ok(ChartedSpace { kind: SpaceKind::Product(dims.to_vec()), charts, transitions })
    }

    /// The Grassmannian of k-planes in n-space, one chart per k-subset of
    /// rows (the rows normalized to an identity block); coordinates
    /// z{row}_{slot} are the remaining matrix entries.
    pub fn grassmannian(k: usize, n: usize) -> Result<ChartedSpace> {
        if k == 0 || k >= n {
            return Err(Error::structural("grassmannian needs 0 < k < n"));
        }
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let mut charts = Vec::with_capacity(subsets.len());
        for subset in &subsets {
            let mut names = Vec::new();
            let mut tags = Vec::new();
            for row in 0..n {
                if subset.contains(&row) {
                    continue;
                }
                for (slot, &pivot) in subset.iter().enumerate() {
                    names.push(format!("z{row}_{slot}"));
                    tags.push(CoordTag::Grass { pivot, row });
                }
            }
            charts.push(ChartData {
                label: format!("U{}", subset.iter().map(|c| c.to_string()).join("")),
                ring: PolyRing::new(names),
                tags,
                pivots: subset.clone(),
            });
        }
        let mut transitions = BTreeMap::new();
        for i in 0..charts.len() {
            for j in 0..charts.len() {
                if i == j {
                    continue;
                }
                transitions.insert((i, j), grassmannian_transition(&charts, i, j, k, n)?);
            }
        }
        Ok(ChartedSpace { kind: SpaceKind::Grassmannian { k, n }, charts, transitions })
    }

    /// A hand-supplied atlas; transition data must cover every ordered pair
    /// and pass the involution and cocycle checks.
    pub fn explicit(
        charts: Vec<ChartData>,
        transitions: BTreeMap<(usize, usize), Transition>,
    ) -> Result<ChartedSpace> {
        for i in 0..charts.len() {
            for j in 0..charts.len() {
                if i == j {
                    continue;
                }
                let t = transitions
                    .get(&(i, j))
                    .ok_or_else(|| Error::structural(format!("missing transition ({i},{j})")))?;
                if !t.source.same(&charts[j].ring) || !t.target.same(&charts[i].ring) {
                    return Err(Error::structural(format!(
                        "transition ({i},{j}) does not connect the declared chart rings"
                    )));
                }
                if t.images.len() != charts[j].ring.num_vars() {
                    return Err(Error::structural(format!(
                        "transition ({i},{j}) must map every source coordinate"
                    )));
                }
            }
        }
        let space = ChartedSpace { kind: SpaceKind::Explicit, charts, transitions };
        space.verify_involutions()?;
        space.verify_cocycle_law()?;
        Ok(space)
    }

    pub fn num_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn chart_by_label(&self, label: &str) -> Option<usize> {
        self.charts.iter().position(|c| c.label == label)
    }

    /// The transition expressing chart j's coordinates inside chart i.
    pub fn transition(&self, i: usize, j: usize) -> Result<&Transition> {
        self.transitions
            .get(&(i, j))
            .ok_or_else(|| Error::domain(format!("no transition from chart {j} into chart {i}")))
    }

    /// Length of the exponent vectors (diagonal entries) a scaling action
    /// must supply for this atlas.
    pub fn expected_exponent_len(&self) -> Result<usize> {
        match &self.kind {
            SpaceKind::Projective(n) => Ok(n + 1),
            SpaceKind::Product(dims) => Ok(dims.iter().map(|&n| n + 1).sum()),
            SpaceKind::Grassmannian { n, .. } => Ok(*n),
            SpaceKind::Explicit => Err(Error::domain(
                "explicit atlases carry their own coordinate weights",
            )),
        }
    }

    /// Weights of the chart's coordinates under the diagonal action with the
    /// given exponents: a coordinate representing x_pos/x_chart (or a matrix
    /// entry at (row, pivot slot)) pulls back with weight d_chart - d_pos
    /// (resp. d_pivot - d_row).
    pub fn coordinate_weights(&self, chart: usize, exponents: &[i64]) -> Result<Vec<i64>> {
        if chart >= self.charts.len() {
            return Err(Error::domain("chart index out of range"));
        }
        if exponents.len() != self.expected_exponent_len()? {
            return Err(Error::structural(format!(
                "expected {} exponents for this atlas, got {}",
                self.expected_exponent_len()?,
                exponents.len()
            )));
        }
        self.charts[chart]
            .tags
            .iter()
            .map(|tag| match tag {
                CoordTag::Proj { chart, pos } => Ok(exponents[*chart] - exponents[*pos]),
                CoordTag::Grass { pivot, row } => Ok(exponents[*pivot] - exponents[*row]),
                CoordTag::Explicit => Err(Error::domain(
                    "explicit atlases carry their own coordinate weights",
                )),
            })
            .collect()
    }

    /// Check that composing a transition with its reverse returns every
    /// coordinate (a cross-multiplied polynomial identity).
    pub fn verify_involutions(&self) -> Result<()> {
        for i in 0..self.charts.len() {
            for j in 0..self.charts.len() {
                if i == j {
                    continue;
                }
                let fwd = self.transition(i, j)?;
                let rev = self.transition(j, i)?;
                let u = rev.required_clearing(&fwd.h)?;
                let h_back = rev.substitute_cleared(&fwd.h, u)?;
                for (m, im) in fwd.images.iter().enumerate() {
                    let s = rev.required_clearing(&im.num)?;
                    let num_back = rev.substitute_cleared(&im.num, s)?;
                    let z = self.charts[j].ring.var(m);
                    // z = num_back/h_ji^s / (h_back/h_ji^u)^hpow, cross-multiplied:
                    let lhs = z.mul(&h_back.pow(im.hpow)).mul(&rev.h.pow(s));
                    let rhs = num_back.mul(&rev.h.pow(u * im.hpow));
                    if lhs != rhs {
                        return Err(Error::structural(format!(
                            "transitions ({i},{j}) and ({j},{i}) fail to invert on {}",
                            self.charts[j].ring.vars()[m]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Check the overlap-function cocycle law: pushing h_{j,l} through the
    /// transition into chart i equals h_{i,l}/h_{i,j} (cross-multiplied).
    pub fn verify_cocycle_law(&self) -> Result<()> {
        let n = self.charts.len();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let t = self.transition(i, j)?;
                for l in 0..n {
                    if l == i || l == j {
                        continue;
                    }
                    let h_jl = &self.transition(j, l)?.h;
                    let s = t.required_clearing(h_jl)?;
                    let pushed = t.substitute_cleared(h_jl, s)?;
                    let h_il = &self.transition(i, l)?.h;
                    // pushed/h_ij^s = h_il/h_ij, cross-multiplied:
                    let lhs = pushed.mul(&t.h);
                    let rhs = h_il.mul(&t.h.pow(s));
                    if lhs != rhs {
                        return Err(Error::structural(format!(
                            "overlap functions fail the cocycle law on charts ({i},{j},{l})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Validate a matrix against the atlas shape: total size, and
    /// block-diagonality for products (a product atlas only carries actions
    /// of block-diagonal matrices, one block per factor).
    pub fn check_matrix_shape(&self, m: &MatrixElt) -> Result<()> {
        let size = self.expected_exponent_len()?;
        if m.n != size {
            return Err(Error::structural(format!(
                "matrix size {} does not match the atlas (need {size})",
                m.n
            )));
        }
        if let SpaceKind::Product(dims) = &self.kind {
            let mut bounds = Vec::new();
            let mut at = 0usize;
            for &n in dims {
                bounds.push((at, at + n + 1));
                at += n + 1;
            }
            for r in 0..m.n {
                for c in 0..m.n {
                    let same_block = bounds.iter().any(|&(lo, hi)| r >= lo && r < hi && c >= lo && c < hi);
                    if !same_block && !m.entries[r][c].is_zero() {
                        return Err(Error::structural(
                            "product atlases only carry block-diagonal matrix actions",
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The chart's normalized spanning data over `ring` (chart coordinates
    /// occupy the variables starting at `offset`): an n-by-k matrix with
    /// identity rows at the pivots, plus the pivot rows themselves.
    fn frame(&self, chart: usize, ring: &PolyRing, offset: usize) -> (Vec<Vec<MultiPoly>>, Vec<usize>) {
        let cd = &self.charts[chart];
        let pivots = cd.pivots.clone();
        let (rows, cols) = match &self.kind {
            SpaceKind::Projective(n) => (n + 1, 1),
            SpaceKind::Product(dims) => (dims.iter().map(|&n| n + 1).sum(), dims.len()),
            SpaceKind::Grassmannian { k, n } => (*n, *k),
            SpaceKind::Explicit => unreachable!("frames exist only for generated atlases"),
        };
        let mut taut = vec![vec![ring.zero(); cols]; rows];
        for (slot, &p) in pivots.iter().enumerate() {
            taut[p][slot] = ring.one();
        }
        for (ci, tag) in cd.tags.iter().enumerate() {
            match tag {
                CoordTag::Proj { chart: c, pos } => {
                    let slot = pivots.iter().position(|p| p == c).expect("pivot is listed");
                    taut[*pos][slot] = ring.var(offset + ci);
                }
                CoordTag::Grass { pivot, row } => {
                    let slot = pivots.iter().position(|p| p == pivot).expect("pivot is listed");
                    taut[*row][slot] = ring.var(offset + ci);
                }
                CoordTag::Explicit => unreachable!("frames exist only for generated atlases"),
            }
        }
        (taut, pivots)
    }
}

/// The transition expressing chart j of a projective atlas inside chart i:
/// x_m/x_j = (x_m/x_i)/(x_j/x_i), so every image is (coordinate or 1)
/// divided by h = the chart-i coordinate of position j.
fn projective_transition(charts: &[ChartData], i: usize, j: usize) -> Transition {
    let target = charts[i].ring.clone();
    let var_of = |pos: usize| -> usize {
        charts[i]
            .tags
            .iter()
            .position(|t| matches!(t, CoordTag::Proj { pos: p, .. } if *p == pos))
            .expect("every non-pivot position is a coordinate")
    };
    let h = target.var(var_of(j));
    let images = charts[j]
        .tags
        .iter()
        .map(|t| {
            let CoordTag::Proj { pos, .. } = t else {
                unreachable!("projective charts carry projective tags")
            };
            let num = if *pos == i { target.one() } else { target.var(var_of(*pos)) };
            RationalImage { num, hpow: 1 }
        })
        .collect();
    Transition { source: charts[j].ring.clone(), target, h, images }
}

/// Product transition: h is the product of the factor overlap functions, and
/// each factor image is padded with the other factors' overlap functions so
/// that every denominator is a power of the single h.
fn product_transition(charts: &[ChartData], i: usize, j: usize) -> Transition {
    let target = charts[i].ring.clone();
    let var_of = |chart_pos: usize, pos: usize| -> Option<usize> {
        charts[i].tags.iter().position(
            |t| matches!(t, CoordTag::Proj { chart, pos: p } if *chart == chart_pos && *p == pos),
        )
    };
    // Factor overlap functions h_f on chart i: the coordinate of chart j's
    // pivot, or 1 when the two charts agree on that factor.
    let factor_h: Vec<MultiPoly> = charts[i]
        .pivots
        .iter()
        .zip(&charts[j].pivots)
        .map(|(&pi, &pj)| {
            if pi == pj {
                target.one()
            } else {
                target.var(var_of(pi, pj).expect("pivot of the other chart is a coordinate here"))
            }
        })
        .collect();
    let mut h = target.one();
    for hf in &factor_h {
        h = h.mul(hf);
    }
    let images = charts[j]
        .tags
        .iter()
        .map(|t| {
            let CoordTag::Proj { chart, pos } = t else {
                unreachable!("product charts carry projective tags")
            };
            // Which factor this coordinate belongs to:
            let f = charts[j].pivots.iter().position(|p| p == chart).expect("tag names a pivot");
            let base = if *pos == charts[i].pivots[f] {
                target.one()
            } else {
                target.var(var_of(charts[i].pivots[f], *pos).expect("position is a coordinate here"))
            };
            let mut num = base;
            for (g, hg) in factor_h.iter().enumerate() {
                if g != f {
                    num = num.mul(hg);
                }
            }
            RationalImage { num, hpow: 1 }
        })
        .collect();
    Transition { source: charts[j].ring.clone(), target, h, images }
}

/// Grassmannian transition: with T the chart-i spanning matrix, the chart-j
/// matrix is T (T_J)^{-1}; h = det(T_J) and the images come from the
/// adjugate, so every denominator is a power of h.
fn grassmannian_transition(
    charts: &[ChartData],
    i: usize,
    j: usize,
    k: usize,
    n: usize,
) -> Result<Transition> {
    let target = charts[i].ring.clone();
    let space_like = ChartedSpace {
        kind: SpaceKind::Grassmannian { k, n },
        charts: charts.to_vec(),
        transitions: BTreeMap::new(),
    };
    let (taut, _) = space_like.frame(i, &target, 0);
    let pivots_j = &charts[j].pivots;
    // The k-by-k block of chart-i's matrix at chart-j's pivot rows.
    let mut block = MatrixElt::zero(&target, k);
    for (r, &row) in pivots_j.iter().enumerate() {
        for c in 0..k {
            block.entries[r][c] = taut[row][c].clone();
        }
    }
    let h = determinant(&block);
    let adj = adjugate(&block)?;
    // B = T * adj(block): rows at chart-j pivots become h * identity; the
    // remaining rows are the transition numerators.
    let mut b = vec![vec![target.zero(); k]; n];
    for r in 0..n {
        for c in 0..k {
            let mut acc = target.zero();
            for t in 0..k {
                acc = acc.add(&taut[r][t].mul(&adj.entries[t][c]));
            }
            b[r][c] = acc;
        }
    }
    let images = charts[j]
        .tags
        .iter()
        .map(|t| {
            let CoordTag::Grass { pivot, row } = t else {
                unreachable!("grassmannian charts carry grassmannian tags")
            };
            let slot = pivots_j.iter().position(|p| p == pivot).expect("pivot is listed");
            RationalImage { num: b[*row][slot].clone(), hpow: 1 }
        })
        .collect();
    Ok(Transition { source: charts[j].ring.clone(), target, h, images })
}

/// Adjugate of a square polynomial matrix (cofactor transpose), so that
/// M * adj(M) = det(M) * I.
fn adjugate(m: &MatrixElt) -> Result<MatrixElt> {
    let k = m.n;
    let ring = m.ring.clone();
    let mut adj = MatrixElt::zero(&ring, k);
    if k == 1 {
        adj.entries[0][0] = ring.one();
        return Ok(adj);
    }
    for r in 0..k {
        for c in 0..k {
            let mut minor = MatrixElt::zero(&ring, k - 1);
            for (ri, row) in (0..k).filter(|&x| x != c).enumerate() {
                for (ci, col) in (0..k).filter(|&x| x != r).enumerate() {
                    minor.entries[ri][ci] = m.entries[row][col].clone();
                }
            }
            let mut cof = determinant(&minor);
            if (r + c) % 2 == 1 {
                cof = cof.neg();
            }
            adj.entries[r][c] = cof;
        }
    }
    Ok(adj)
}

/// Components of the vector field induced on a chart by a matrix m (algebra
/// convention): with T the chart's normalized spanning matrix and I its
/// pivot rows, the components are the non-pivot entries of mT - T (mT)_I,
/// one per chart coordinate.  Matrix entries may live in a coefficient
/// ring; the result lives in that ring extended by the chart coordinates.
pub fn vector_field_chart(m: &MatrixElt, space: &ChartedSpace, chart: usize) -> Result<Vec<MultiPoly>> {
    if chart >= space.charts.len() {
        return Err(Error::domain("chart index out of range"));
    }
    space.check_matrix_shape(m)?;
    let cd = &space.charts[chart];
    let ext = m.ring.extend(cd.ring.vars().to_vec());
    let offset = m.ring.num_vars();
    let (taut, pivots) = space.frame(chart, &ext, offset);
    let rows = taut.len();
    let cols = taut[0].len();
    let me = m.map_ring(&ext)?;
    // mt = m * T
    let mut mt = vec![vec![ext.zero(); cols]; rows];
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = ext.zero();
            for t in 0..rows {
                if me.entries[r][t].is_zero() || taut[t][c].is_zero() {
                    continue;
                }
                acc = acc.add(&me.entries[r][t].mul(&taut[t][c]));
            }
            mt[r][c] = acc;
        }
    }
    // comp = mT - T (mT)_I, read off at the coordinate positions
    let comp_at = |row: usize, slot: usize| -> MultiPoly {
        let mut correction = ext.zero();
        for t in 0..cols {
            if taut[row][t].is_zero() {
                continue;
            }
            correction = correction.add(&taut[row][t].mul(&mt[pivots[t]][slot]));
        }
        mt[row][slot].sub(&correction)
    };
    Ok(cd
        .tags
        .iter()
        .map(|tag| match tag {
            CoordTag::Proj { pos, chart } => {
                let slot = pivots.iter().position(|p| p == chart).expect("pivot is listed");
                comp_at(*pos, slot)
            }
            CoordTag::Grass { pivot, row } => {
                let slot = pivots.iter().position(|p| p == pivot).expect("pivot is listed");
                comp_at(*row, slot)
            }
            CoordTag::Explicit => unreachable!("checked by check_matrix_shape"),
        })
        .collect())
}

/// A matrix acting either infinitesimally (Lie algebra element) or as a
/// group element.
pub enum ActorElement {
    Algebra(MatrixElt),
    Group(MatrixElt),
}

/// Generators of the fixed-locus ideal of the element on one chart: for an
/// algebra element these are the vector-field components; for a group
/// element g, the entries of gT - T (gT)_I (which cut out the points whose
/// span g preserves).
pub fn fixed_locus_ideal(
    elt: &ActorElement,
    space: &ChartedSpace,
    chart: usize,
) -> Result<Vec<MultiPoly>> {
    match elt {
        ActorElement::Algebra(m) => vector_field_chart(m, space, chart),
        ActorElement::Group(g) => {
            if determinant(g).is_zero() {
                return Err(Error::structural("group element must be invertible"));
            }
            vector_field_chart(g, space, chart)
        }
    }
}

/// A matrix action on a charted space: the vector fields of the section's
/// base and direction matrices on every chart, the scaling exponents that
/// grade the chart coordinates, and any extra commuting torus characters
/// (each contributing one more grading row).
#[derive(Clone, Debug)]
pub struct ChartedAction {
    pub space: ChartedSpace,
    /// The acting matrices: the section base first, then the directions.
    pub elements: Vec<MatrixElt>,
    /// fields[e][chart][coord]: components over the chart's coordinate ring.
    pub fields: Vec<Vec<Vec<MultiPoly>>>,
    pub subgroup_exponents: Vec<i64>,
    pub torus_characters: Vec<Vec<i64>>,
    /// coord_weights[chart][coord]: one weight per grading row (the scaling
    /// row first, then one row per torus character).
    pub coord_weights: Vec<Vec<Vec<i64>>>,
}

impl ChartedAction {
    /// Assemble the action of a section family on a generated atlas and
    /// verify that the produced vector fields agree across overlaps.
    pub fn from_section(
        space: ChartedSpace,
        section: &SectionFamily,
        torus_characters: Vec<Vec<i64>>,
    ) -> Result<ChartedAction> {
        let size = space.expected_exponent_len()?;
        if section.subgroup.exponents.len() != size {
            return Err(Error::structural(format!(
                "section subgroup has {} exponents, atlas needs {size}",
                section.subgroup.exponents.len()
            )));
        }
        for chi in &torus_characters {
            if chi.len() != size {
                return Err(Error::structural(format!(
                    "torus character has {} entries, atlas needs {size}",
                    chi.len()
                )));
            }
        }
        let mut elements = vec![section.base.clone()];
        elements.extend(section.directions.iter().cloned());
        // Extra characters must fix every acting matrix, otherwise the extra
        // grading rows would not be preserved by the field.
        for chi in &torus_characters {
            for m in &elements {
                for r in 0..m.n {
                    for c in 0..m.n {
                        if !m.entries[r][c].is_zero() && chi[r] != chi[c] {
                            return Err(Error::structural(
                                "torus character moves one of the acting matrices",
                            ));
                        }
                    }
                }
            }
        }
        let mut fields = Vec::with_capacity(elements.len());
        for m in &elements {
            let mut per_chart = Vec::with_capacity(space.num_charts());
            for chart in 0..space.num_charts() {
                let comps = vector_field_chart(m, &space, chart)?;
                // Constant matrices: the extended ring has exactly the chart
                // coordinates, so re-anchor on the chart ring.
                let ring = space.charts[chart].ring.clone();
                per_chart.push(
                    comps
                        .into_iter()
                        .map(|c| c.map_vars(&ring))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            fields.push(per_chart);
        }
        let mut coord_weights = Vec::with_capacity(space.num_charts());
        for chart in 0..space.num_charts() {
            let scaling = space.coordinate_weights(chart, &section.subgroup.exponents)?;
            let mut rows = vec![scaling];
            for chi in &torus_characters {
                rows.push(space.coordinate_weights(chart, chi)?);
            }
            let ncoords = space.charts[chart].ring.num_vars();
            coord_weights.push(
                (0..ncoords)
                    .map(|ci| rows.iter().map(|r| r[ci]).collect::<Vec<i64>>())
                    .collect(),
            );
        }
        let action = ChartedAction {
            space,
            elements,
            fields,
            subgroup_exponents: section.subgroup.exponents.clone(),
            torus_characters,
            coord_weights,
        };
        action.verify_overlaps()?;
        Ok(action)
    }

    /// Chain-rule check: pushing each field through each transition matches
    /// differentiating the transition along the field (cross-multiplied to
    /// clear denominators).  Catches any mismatch between the atlas's
    /// transition maps and the per-chart field formulas.
    pub fn verify_overlaps(&self) -> Result<()> {
        for (ei, fields) in self.fields.iter().enumerate() {
            for i in 0..self.space.num_charts() {
                for j in 0..self.space.num_charts() {
                    if i == j {
                        continue;
                    }
                    let t = self.space.transition(i, j)?;
                    let f_i = &fields[i];
                    let f_j = &fields[j];
                    for (m, im) in t.images.iter().enumerate() {
                        let s = t.required_clearing(&f_j[m])?;
                        let pushed = t.substitute_cleared(&f_j[m], s)?;
                        // d(num/h^p) along the chart-i field:
                        let p = im.hpow;
                        let mut rhs = t.target.zero();
                        for (l, fl) in f_i.iter().enumerate() {
                            if fl.is_zero() {
                                continue;
                            }
                            let dnum = im.num.derivative(l).mul(&t.h);
                            let dh = t.h.derivative(l).mul(&im.num).scale(&crate::poly::rat(p as i64));
                            rhs = rhs.add(&dnum.sub(&dh).mul(fl));
                        }
                        // pushed/h^s = rhs/h^{p+1}, cross-multiplied:
                        let lhs = pushed.mul(&t.h.pow(p + 1));
                        let rhs = rhs.mul(&t.h.pow(s));
                        if lhs != rhs {
                            return Err(Error::structural(format!(
                                "field of element {ei} disagrees across charts ({i},{j})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
