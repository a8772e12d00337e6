//! The zero scheme of the total vector field of a section family on a
//! charted space: per-chart ideals over parameters-plus-coordinates rings,
//! exact degree-sliced global sections, truncated Čech cohomology on the
//! chart cover, Poincaré series with closed-form detection, and dimension
//! counts for reduced component gluings.

use crate::charts::{ChartedAction, Transition};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, saturate, standard_monomials_of_degree, GroebnerBasis};
use crate::linalg::QMat;
use crate::order::MonomialOrder;
use crate::poly::{Grading, Homogeneity, MultiPoly, PolyRing, Rat};
use crate::series::{closed_form_string, detect_closed_form};
use itertools::Itertools;
use num::Zero;
use std::collections::BTreeMap;

/// One chart of the zero scheme: the model ring (section parameters followed
/// by chart coordinates), its grading, and the chart ideal.
#[derive(Clone, Debug)]
pub struct ModelChart {
    pub label: String,
    /// Index of the chart in the underlying atlas.
    pub orig: usize,
    pub ring: PolyRing,
    pub grading: Grading,
    pub basis: GroebnerBasis,
}

/// The zero scheme of the section family's total field, presented on the
/// charts where it has honest zeros (unit-ideal charts are dropped from the
/// cover).
#[derive(Debug)]
pub struct ZeroSchemeModel {
    pub action: ChartedAction,
    pub params: Vec<String>,
    pub param_weights: Vec<i64>,
    pub charts: Vec<ModelChart>,
    pub dropped: Vec<String>,
    /// Degree bound: slice queries beyond it are refused.
    pub truncation: i64,
    /// Inclusive search ranges for the extra grading rows (required when the
    /// action carries torus characters).
    pub char_box: Vec<(i64, i64)>,
    /// Transitions between surviving charts over the model rings.
    pair_trans: BTreeMap<(usize, usize), Transition>,
    /// Chart ideals saturated by the pairwise overlap functions.
    pair_saturated: BTreeMap<(usize, usize), GroebnerBasis>,
}

/// Number of grading rows of the model (scaling row plus torus characters).
fn grading_rows(action: &ChartedAction) -> usize {
    1 + action.torus_characters.len()
}

/// Build the zero scheme of the total field of `section` under `action`.
///
/// Chart ideals are generated by the field components of base + sum v_k
/// dir_k over the model ring; every generator must be homogeneous of weight
/// (coordinate weight) + 2 in the scaling row and (coordinate weight) in
/// each character row.  Charts where the ideal is the unit ideal are
/// dropped from the cover; overlap compatibility of the remaining ideals is
/// verified exactly through saturations.
pub fn build_zero_scheme(
    section: &crate::lie::SectionFamily,
    action: ChartedAction,
    truncation: i64,
) -> Result<ZeroSchemeModel> {
    if truncation <= 0 {
        return Err(Error::structural("truncation bound must be positive"));
    }
    if action.elements.first() != Some(&section.base)
        || action.elements.len() != 1 + section.directions.len()
        || action.elements[1..] != section.directions[..]
    {
        return Err(Error::structural(
            "action was not built from this section's matrices",
        ));
    }
    if action.subgroup_exponents != section.subgroup.exponents {
        return Err(Error::structural(
            "action and section disagree on the scaling subgroup",
        ));
    }
    let params = section.params.clone();
    let param_weights = section.parameter_weights();
    let rows = grading_rows(&action);
    let mut charts = Vec::new();
    let mut dropped = Vec::new();
    for (c, chart) in action.space.charts.iter().enumerate() {
        for name in chart.ring.vars() {
            if params.iter().any(|p| p == name) {
                return Err(Error::structural(format!(
                    "coordinate {name} collides with a section parameter"
                )));
            }
        }
        let ring = PolyRing::new(
            params
                .iter()
                .cloned()
                .chain(chart.ring.vars().iter().cloned())
                .collect::<Vec<String>>(),
        );
        let mut weights: Vec<Vec<i64>> = Vec::with_capacity(ring.num_vars());
        for &w in &param_weights {
            let mut row = vec![0i64; rows];
            row[0] = w;
            weights.push(row);
        }
        for cw in &action.coord_weights[c] {
            weights.push(cw.clone());
        }
        let grading = Grading::new(weights)?;
        // Total field components: base + sum v_k * direction_k.
        let mut gens = Vec::new();
        for (j, cw) in action.coord_weights[c].iter().enumerate() {
            let mut g = action.fields[0][c][j].map_vars(&ring)?;
            for k in 0..params.len() {
                let dir = action.fields[1 + k][c][j].map_vars(&ring)?;
                g = g.add(&dir.mul(&ring.var(k)));
            }
            if g.is_zero() {
                continue;
            }
            let mut expected = cw.clone();
            expected[0] += 2;
            match g.weighted_degree(&grading) {
                Homogeneity::Homogeneous(w) if w == expected => {}
                Homogeneity::Homogeneous(w) => {
                    return Err(Error::structural(format!(
                        "field component on chart {} has weight {w:?}, expected {expected:?}",
                        chart.label
                    )))
                }
                Homogeneity::Inhomogeneous => {
                    return Err(Error::structural(format!(
                        "field component on chart {} is inhomogeneous",
                        chart.label
                    )))
                }
            }
            gens.push(g);
        }
        let basis = buchberger(&ring, &gens, MonomialOrder::GrevLex)?;
        if basis.is_unit_ideal() {
            dropped.push(chart.label.clone());
            continue;
        }
        charts.push(ModelChart {
            label: chart.label.clone(),
            orig: c,
            ring,
            grading,
            basis,
        });
    }
    // Pairwise transition data over the model rings, and saturated ideals.
    let mut pair_trans = BTreeMap::new();
    let mut pair_saturated = BTreeMap::new();
    for i in 0..charts.len() {
        for j in 0..charts.len() {
            if i == j {
                continue;
            }
            let t = action
                .space
                .transition(charts[i].orig, charts[j].orig)?
                .extend_with_params(&params);
            if !t.target.same(&charts[i].ring) || !t.source.same(&charts[j].ring) {
                return Err(Error::structural("transition rings do not match the model rings"));
            }
            let sat = saturate(&charts[i].ring, &charts[i].basis.gens, &t.h, MonomialOrder::GrevLex)?;
            pair_trans.insert((i, j), t);
            pair_saturated.insert((i, j), sat);
        }
    }
    let model = ZeroSchemeModel {
        action,
        params,
        param_weights,
        charts,
        dropped,
        truncation,
        char_box: Vec::new(),
        pair_trans,
        pair_saturated,
    };
    model.verify_chart_compatibility()?;
    Ok(model)
}

impl ZeroSchemeModel {
    /// Declare inclusive search ranges for the extra grading rows.
    pub fn with_char_box(mut self, char_box: Vec<(i64, i64)>) -> Result<Self> {
        if char_box.len() != self.action.torus_characters.len() {
            return Err(Error::structural(
                "character box needs one range per torus character",
            ));
        }
        if char_box.iter().any(|&(lo, hi)| lo > hi) {
            return Err(Error::structural("character box range is empty"));
        }
        self.char_box = char_box;
        Ok(self)
    }

    pub fn num_charts(&self) -> usize {
        self.charts.len()
    }

    /// The saturation of chart i's ideal by the overlap denominator toward
    /// chart j (both indices into `charts`).
    pub fn pair_saturation(&self, i: usize, j: usize) -> Option<&GroebnerBasis> {
        self.pair_saturated.get(&(i, j))
    }

    /// Every chart ideal maps into the saturation of every other chart's
    /// ideal under the transition (exact overlap compatibility).
    pub fn verify_chart_compatibility(&self) -> Result<()> {
        for i in 0..self.charts.len() {
            for j in 0..self.charts.len() {
                if i == j {
                    continue;
                }
                let t = &self.pair_trans[&(i, j)];
                let sat = &self.pair_saturated[&(i, j)];
                for g in &self.charts[j].basis.gens {
                    let s = t.required_clearing(g)?;
                    let pushed = t.substitute_cleared(g, s)?;
                    if !sat.is_member(&pushed) {
                        return Err(Error::structural(format!(
                            "chart ideals of {} and {} disagree on their overlap",
                            self.charts[i].label, self.charts[j].label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Standard monomials of one chart's quotient in the given degree slice.
    pub fn chart_slice(&self, chart: usize, target: &[i64]) -> Result<Vec<Vec<u32>>> {
        let c = self
            .charts
            .get(chart)
            .ok_or_else(|| Error::domain("chart index out of range"))?;
        standard_monomials_of_degree(&c.basis, &c.grading, target)
    }

    /// All degree targets contributing to cohomological degree d: the single
    /// vector [d] for scalar gradings, otherwise [d] paired with every point
    /// of the declared character box.
    pub fn targets_for(&self, d: i64) -> Result<Vec<Vec<i64>>> {
        if d.abs() > self.truncation {
            return Err(Error::refused(format!(
                "degree {d} exceeds the truncation bound {}",
                self.truncation
            )));
        }
        let extra = self.action.torus_characters.len();
        if extra == 0 {
            return Ok(vec![vec![d]]);
        }
        if self.char_box.len() != extra {
            return Err(Error::refused(
                "multigraded model needs a character box to aggregate degrees",
            ));
        }
        Ok(self
            .char_box
            .iter()
            .map(|&(lo, hi)| lo..=hi)
            .multi_cartesian_product()
            .map(|chi| {
                let mut t = vec![d];
                t.extend(chi);
                t
            })
            .collect())
    }

    /// Dimension of the degree-slice of the global functions: tuples of
    /// chart classes whose differences vanish on every pairwise overlap.
    /// Exact (saturation-based), independent of any clearing bound.
    pub fn global_sections_slice_dim(&self, target: &[i64]) -> Result<usize> {
        let slices: Vec<Vec<Vec<u32>>> = (0..self.charts.len())
            .map(|i| self.chart_slice(i, target))
            .collect::<Result<Vec<_>>>()?;
        let counts: Vec<usize> = slices.iter().map(Vec::len).collect();
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Ok(0);
        }
        let offsets: Vec<usize> = counts
            .iter()
            .scan(0usize, |acc, &c| {
                let here = *acc;
                *acc += c;
                Some(here)
            })
            .collect();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for i in 0..self.charts.len() {
            for j in (i + 1)..self.charts.len() {
                if slices[i].is_empty() && slices[j].is_empty() {
                    continue;
                }
                let t = &self.pair_trans[&(i, j)];
                let sat = &self.pair_saturated[&(i, j)];
                let ring_j = &self.charts[j].ring;
                let mons_j: Vec<MultiPoly> = slices[j]
                    .iter()
                    .map(|e| ring_j.monomial(e.clone(), Rat::from_integer(1.into())))
                    .collect();
                let s = mons_j
                    .iter()
                    .map(|m| t.required_clearing(m))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .max()
                    .unwrap_or(0);
                let h_s = t.h.pow(s);
                // Reduced residues of both sides on the overlap.
                let mut residues: Vec<(usize, MultiPoly)> = Vec::new();
                for (m, e) in slices[i].iter().enumerate() {
                    let mon = self.charts[i]
                        .ring
                        .monomial(e.clone(), Rat::from_integer(1.into()));
                    residues.push((offsets[i] + m, sat.normal_form(&mon.mul(&h_s))));
                }
                for (l, mon) in mons_j.iter().enumerate() {
                    let pushed = t.substitute_cleared(mon, s)?;
                    residues.push((offsets[j] + l, sat.normal_form(&pushed).neg()));
                }
                // One constraint row per monomial in the union of supports.
                let mut support: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
                for (_, r) in &residues {
                    for (e, _) in r.terms() {
                        let next = support.len();
                        support.entry(e.clone()).or_insert(next);
                    }
                }
                if support.is_empty() {
                    continue;
                }
                let mut block = vec![vec![Rat::zero(); total]; support.len()];
                for (col, r) in &residues {
                    for (e, c) in r.terms() {
                        block[support[e]][*col] = c.clone();
                    }
                }
                rows.extend(block);
            }
        }
        if rows.is_empty() {
            return Ok(total);
        }
        let rank = QMat::from_rows(rows).rank();
        Ok(total - rank)
    }

    /// Degree-d dimension of the global functions, aggregating the character
    /// box when the grading has extra rows.
    pub fn global_sections_dim(&self, d: i64) -> Result<usize> {
        let mut total = 0usize;
        for target in self.targets_for(d)? {
            total += self.global_sections_slice_dim(&target)?;
        }
        Ok(total)
    }

    /// The truncated Čech complex of the chart cover with denominator
    /// exponent `n_power`, holding tuple rings for levels 0..=max_level.
    pub fn cech(&self, max_level: usize, n_power: u32) -> Result<CechComplex<'_>> {
        if n_power == 0 {
            return Err(Error::structural("denominator exponent must be positive"));
        }
        let mut levels = Vec::with_capacity(max_level + 1);
        for p in 0..=max_level {
            let mut tuples = Vec::new();
            for tuple in (0..self.charts.len()).combinations(p + 1) {
                let base = tuple[0];
                let ring = self.charts[base].ring.clone();
                let mut denom = ring.one();
                for &m in &tuple[1..] {
                    denom = denom.mul(&self.pair_trans[&(base, m)].h);
                }
                let denom_weight = match denom.weighted_degree(&self.charts[base].grading) {
                    Homogeneity::Homogeneous(w) => w,
                    Homogeneity::Inhomogeneous => {
                        return Err(Error::structural(
                            "overlap function is inhomogeneous for the model grading",
                        ))
                    }
                };
                let basis = if tuple.len() == 1 {
                    self.charts[base].basis.clone()
                } else {
                    saturate(&ring, &self.charts[base].basis.gens, &denom, MonomialOrder::GrevLex)?
                };
                tuples.push(TupleData { tuple, denom_weight, basis });
            }
            levels.push(tuples);
        }
        Ok(CechComplex { model: self, n_power, levels })
    }
}

/// One intersection of cover charts: functions are represented as classes
/// over the first chart divided by the product of overlap functions raised
/// to the complex's denominator exponent.
#[derive(Debug)]
pub struct TupleData {
    pub tuple: Vec<usize>,
    pub denom_weight: Vec<i64>,
    pub basis: GroebnerBasis,
}

/// A degree-truncated Čech complex on the zero scheme's chart cover.
pub struct CechComplex<'a> {
    pub model: &'a ZeroSchemeModel,
    pub n_power: u32,
    levels: Vec<Vec<TupleData>>,
}

impl CechComplex<'_> {
    fn level(&self, p: usize) -> Result<&[TupleData]> {
        self.levels
            .get(p)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::domain("level beyond the built complex"))
    }

    /// Slice monomial lists for one level at the given target degree: each
    /// tuple contributes the standard monomials of its saturated quotient at
    /// target + n_power * (denominator weight).
    fn slice_bases(&self, p: usize, target: &[i64]) -> Result<Vec<Vec<Vec<u32>>>> {
        self.level(p)?
            .iter()
            .map(|t| {
                let shifted: Vec<i64> = target
                    .iter()
                    .zip(&t.denom_weight)
                    .map(|(&a, &w)| a + i64::from(self.n_power) * w)
                    .collect();
                standard_monomials_of_degree(
                    &t.basis,
                    &self.model.charts[t.tuple[0]].grading,
                    &shifted,
                )
            })
            .collect()
    }

    /// Dimension of the level-p cochain slice.
    pub fn dim_slice(&self, p: usize, target: &[i64]) -> Result<usize> {
        Ok(self.slice_bases(p, target)?.iter().map(Vec::len).sum())
    }

    /// Matrix of the differential C^p -> C^{p+1} on the degree slice.
    fn differential(&self, p: usize, target: &[i64]) -> Result<QMat> {
        let src = self.level(p)?;
        let dst = self.level(p + 1)?;
        let src_bases = self.slice_bases(p, target)?;
        let dst_bases = self.slice_bases(p + 1, target)?;
        let src_offsets: Vec<usize> = src_bases
            .iter()
            .scan(0usize, |acc, b| {
                let here = *acc;
                *acc += b.len();
                Some(here)
            })
            .collect();
        let dst_offsets: Vec<usize> = dst_bases
            .iter()
            .scan(0usize, |acc, b| {
                let here = *acc;
                *acc += b.len();
                Some(here)
            })
            .collect();
        let cols: usize = src_bases.iter().map(Vec::len).sum();
        let rows: usize = dst_bases.iter().map(Vec::len).sum();
        let src_index: BTreeMap<&[usize], usize> =
            src.iter().enumerate().map(|(i, t)| (t.tuple.as_slice(), i)).collect();
        let mut mat = QMat::zeros(rows, cols);
        let n = self.n_power;
        for (ui, u) in dst.iter().enumerate() {
            if dst_bases[ui].is_empty() {
                continue;
            }
            let row_of: BTreeMap<&Vec<u32>, usize> = dst_bases[ui]
                .iter()
                .enumerate()
                .map(|(r, e)| (e, dst_offsets[ui] + r))
                .collect();
            let u_ring = &self.model.charts[u.tuple[0]].ring;
            for m in 0..u.tuple.len() {
                let sub: Vec<usize> = u
                    .tuple
                    .iter()
                    .enumerate()
                    .filter(|&(idx, _)| idx != m)
                    .map(|(_, &c)| c)
                    .collect();
                let &ti = src_index
                    .get(sub.as_slice())
                    .ok_or_else(|| Error::structural("missing sub-tuple in the complex"))?;
                if src_bases[ti].is_empty() {
                    continue;
                }
                let sign = if m % 2 == 0 { 1i64 } else { -1i64 };
                for (gi, e) in src_bases[ti].iter().enumerate() {
                    let g = self.model.charts[src[ti].tuple[0]]
                        .ring
                        .monomial(e.clone(), Rat::from_integer(sign.into()));
                    let num = if m == 0 {
                        // Transport from the sub-tuple's base chart u_1 into
                        // u_0, clearing through the overlap function.
                        let t = &self.model.pair_trans[&(u.tuple[0], u.tuple[1])];
                        let power = n * (sub.len() as u32);
                        t.substitute_cleared(&g, power).map_err(|_| {
                            Error::refused(format!(
                                "denominator exponent {n} too small to transport a \
                                 level-{p} cochain; raise the exponent"
                            ))
                        })?
                    } else {
                        // Same base chart: restriction multiplies by the new
                        // overlap function's power.
                        let h = &self.model.pair_trans[&(u.tuple[0], u.tuple[m])].h;
                        g.map_vars(u_ring)?.mul(&h.pow(n))
                    };
                    let reduced = u.basis.normal_form(&num);
                    for (exp, c) in reduced.terms() {
                        let &row = row_of.get(exp).ok_or_else(|| {
                            Error::structural("differential left the degree slice")
                        })?;
                        let col = src_offsets[ti] + gi;
                        let prev = mat.at(row, col).clone();
                        mat.set(row, col, prev + c.clone());
                    }
                }
            }
        }
        Ok(mat)
    }

    /// Degree-slice dimension of the p-th cohomology of the complex.
    pub fn cohomology_slice_dim(&self, p: usize, target: &[i64]) -> Result<usize> {
        if p >= self.model.charts.len() {
            // no (p+1)-fold intersections exist on this cover
            return Ok(0);
        }
        let dim = self.dim_slice(p, target)?;
        if dim == 0 {
            return Ok(0);
        }
        let rank_out = if p + 1 < self.levels.len() {
            self.differential(p, target)?.rank()
        } else if self.level(p)?.len() == self.model.charts.len().saturating_sub(p) {
            // No higher level exists in the cover itself (p is the top).
            0
        } else {
            return Err(Error::domain(
                "complex was not built deep enough for this level",
            ));
        };
        let rank_in = if p == 0 { 0 } else { self.differential(p - 1, target)?.rank() };
        Ok(dim - rank_out - rank_in)
    }

    /// Degree-d dimension of the p-th cohomology, aggregated over the
    /// character box for multigraded models.
    pub fn cohomology_dim(&self, p: usize, d: i64) -> Result<usize> {
        let mut total = 0usize;
        for target in self.model.targets_for(d)? {
            total += self.cohomology_slice_dim(p, &target)?;
        }
        Ok(total)
    }
}

/// Degree-d dimension of the i-th Čech cohomology of the zero scheme's
/// structure functions, with the default denominator exponent set to the
/// model's truncation bound.
pub fn cech_cohomology_dim(z: &ZeroSchemeModel, i: usize, d: i64) -> Result<usize> {
    let max_level = (i + 1).min(z.charts.len().saturating_sub(1));
    let complex = z.cech(max_level, z.truncation.max(1) as u32)?;
    if i > max_level {
        // Deeper than the cover: no tuples at all.
        return Ok(0);
    }
    complex.cohomology_dim(i, d)
}

/// Per-degree global-section dimensions plus a detected rational closed
/// form with denominator (1 - t^2)^r, r = number of section parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareReport {
    pub bound: i64,
    pub dims: Vec<usize>,
    pub closed_form: Option<String>,
}

pub fn poincare_series_report(z: &ZeroSchemeModel, bound: i64) -> Result<PoincareReport> {
    if bound < 0 || bound > z.truncation {
        return Err(Error::refused(format!(
            "series bound {bound} outside the truncation bound {}",
            z.truncation
        )));
    }
    let mut dims = Vec::with_capacity(bound as usize + 1);
    for d in 0..=bound {
        dims.push(z.global_sections_dim(d)?);
    }
    let coeffs: Vec<Rat> = dims.iter().map(|&n| Rat::from_integer((n as i64).into())).collect();
    let r = z.params.len();
    let closed_form = detect_closed_form(&coeffs, r).map(|num| closed_form_string(&num, r));
    Ok(PoincareReport { bound, dims, closed_form })
}

/// One irreducible component of a reduced zero scheme: either an affine
/// line with a weighted parameter, or a single point (constants only).
/// Chart parametrizations express the component inside model charts for
/// validation against the non-reduced model.
#[derive(Clone, Debug)]
pub struct ComponentCurve {
    pub name: String,
    /// None for a point component; Some(w) for a line whose parameter has
    /// weight w (in the scaling row).
    pub parameter_weight: Option<i64>,
    /// (chart index, value of every model-ring variable as a polynomial in
    /// the parameter ring ["u"], or constants for point components).
    pub parametrizations: Vec<(usize, Vec<MultiPoly>)>,
}

/// Two components passing through a common point: parameter values on each
/// side, and the chart where the common point is checked.
#[derive(Clone, Debug)]
pub struct ComponentIncidence {
    pub a: usize,
    pub b: usize,
    pub a_param: Rat,
    pub b_param: Rat,
    pub chart: usize,
    pub point: Vec<Rat>,
}

#[derive(Clone, Debug, Default)]
pub struct ComponentCurveSet {
    pub components: Vec<ComponentCurve>,
    pub incidences: Vec<ComponentIncidence>,
}

impl ComponentCurveSet {
    /// Check that every parametrization lands inside the model's zero locus
    /// and that every incidence point lies on both named components.
    pub fn validate_against(&self, z: &ZeroSchemeModel) -> Result<()> {
        for comp in &self.components {
            for (chart, images) in &comp.parametrizations {
                let mc = z
                    .charts
                    .get(*chart)
                    .ok_or_else(|| Error::structural("parametrization names a missing chart"))?;
                if images.len() != mc.ring.num_vars() {
                    return Err(Error::structural(format!(
                        "component {} parametrization has {} images, chart {} needs {}",
                        comp.name,
                        images.len(),
                        mc.label,
                        mc.ring.num_vars()
                    )));
                }
                let target = images
                    .first()
                    .map(MultiPoly::ring)
                    .unwrap_or_else(|| PolyRing::new(Vec::<String>::new()));
                for g in &mc.basis.gens {
                    if !g.substitute(images, &target).is_zero() {
                        return Err(Error::structural(format!(
                            "component {} does not lie in the zero locus on chart {}",
                            comp.name, mc.label
                        )));
                    }
                }
            }
        }
        for inc in &self.incidences {
            let point_of = |comp_idx: usize, value: &Rat| -> Result<Vec<Rat>> {
                let comp = self
                    .components
                    .get(comp_idx)
                    .ok_or_else(|| Error::structural("incidence names a missing component"))?;
                let (_, images) = comp
                    .parametrizations
                    .iter()
                    .find(|(c, _)| *c == inc.chart)
                    .ok_or_else(|| {
                        Error::structural(format!(
                            "component {} has no parametrization on the incidence chart",
                            comp.name
                        ))
                    })?;
                Ok(images.iter().map(|im| im.eval(std::slice::from_ref(value))).collect())
            };
            let pa = point_of(inc.a, &inc.a_param)?;
            let pb = point_of(inc.b, &inc.b_param)?;
            if pa != inc.point || pb != inc.point {
                return Err(Error::structural(
                    "incidence point does not lie on both components",
                ));
            }
        }
        Ok(())
    }
}

/// Degree-d dimension of tuples of one polynomial per component (in its
/// weighted parameter; constants for points) agreeing at every incidence.
pub fn reduced_ring_dims(c: &ComponentCurveSet, d: i64) -> Result<usize> {
    if d < 0 {
        return Ok(0);
    }
    // Each component contributes at most one monomial u^k in a fixed degree.
    let mut exps: Vec<Option<u32>> = Vec::with_capacity(c.components.len());
    for comp in &c.components {
        let e = match comp.parameter_weight {
            None => {
                if d == 0 {
                    Some(0)
                } else {
                    None
                }
            }
            Some(w) => {
                if w <= 0 {
                    return Err(Error::structural(format!(
                        "component {} needs a positive parameter weight",
                        comp.name
                    )));
                }
                if d % w == 0 {
                    Some((d / w) as u32)
                } else {
                    None
                }
            }
        };
        exps.push(e);
    }
    let unknowns: Vec<usize> = exps
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.map(|_| i))
        .collect();
    if unknowns.is_empty() {
        return Ok(0);
    }
    let col_of: BTreeMap<usize, usize> =
        unknowns.iter().enumerate().map(|(col, &i)| (i, col)).collect();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for inc in &c.incidences {
        if inc.a >= c.components.len() || inc.b >= c.components.len() {
            return Err(Error::structural("incidence names a missing component"));
        }
        let mut row = vec![Rat::zero(); unknowns.len()];
        let mut nontrivial = false;
        if let Some(k) = exps[inc.a] {
            let v = rat_pow(&inc.a_param, k);
            if !v.is_zero() {
                row[col_of[&inc.a]] = v;
                nontrivial = true;
            }
        }
        if let Some(k) = exps[inc.b] {
            let v = rat_pow(&inc.b_param, k);
            if !v.is_zero() {
                row[col_of[&inc.b]] = row[col_of[&inc.b]].clone() - v;
                nontrivial = true;
            }
        }
        if nontrivial {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(unknowns.len());
    }
    Ok(unknowns.len() - QMat::from_rows(rows).rank())
}

fn rat_pow(x: &Rat, k: u32) -> Rat {
    let mut out = Rat::from_integer(1.into());
    for _ in 0..k {
        out *= x.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::ChartedSpace;
    use crate::lie::{kostant_section, MatrixElt, OneParamSubgroup, SectionFamily, SectionKind};
    use crate::poly::rat;

    fn exthick_model(truncation: i64) -> ZeroSchemeModel {
        let ring = PolyRing::new(Vec::<String>::new());
        let e = MatrixElt::parse(
            &ring,
            &[
                vec!["0".into(), "1".into(), "0".into()],
                vec!["0".into(), "0".into(), "0".into()],
                vec!["0".into(), "0".into(), "0".into()],
            ],
        )
        .unwrap();
        let torus = MatrixElt::parse(
            &ring,
            &[
                vec!["1".into(), "0".into(), "0".into()],
                vec!["0".into(), "0".into(), "0".into()],
                vec!["0".into(), "0".into(), "-1".into()],
            ],
        )
        .unwrap();
        let section = kostant_section(SectionKind::Solvable {
            e,
            torus_basis: vec![torus],
            params: vec!["v".into()],
            subgroup: OneParamSubgroup { exponents: vec![2, 0, -2] },
        })
        .unwrap();
        let space = ChartedSpace::projective_named(
            2,
            &[
                vec!["a".into(), "b".into()],
                vec!["p".into(), "q".into()],
                vec!["c".into(), "d".into()],
            ],
        )
        .unwrap();
        let action = crate::charts::ChartedAction::from_section(space, &section, vec![]).unwrap();
        build_zero_scheme(&section, action, truncation).unwrap()
    }

    #[test]
    fn exthick_chart_ideals_match_known_generators() {
        let z = exthick_model(20);
        assert_eq!(z.num_charts(), 3);
        assert!(z.dropped.is_empty());
        let u0 = &z.charts[0];
        // the ideal <a^2 + v a, a b + 2 v b> in reduced basis form
        let (_, gens) = u0.basis.describe();
        assert_eq!(gens, vec!["v*b + 1/2*a*b", "v*a + a^2", "a^2*b"]);
        let u2 = &z.charts[2];
        let (_, gens) = u2.basis.describe();
        assert_eq!(gens, vec!["d^2", "v*d", "v*c + 1/2*d"]);
    }

    #[test]
    fn exthick_global_sections_match_plane_curve_ring() {
        let z = exthick_model(20);
        // 1,0,2,0,3,0,3,0,3 for d = 0..8
        let expect = [1usize, 0, 2, 0, 3, 0, 3, 0, 3];
        for (d, &want) in expect.iter().enumerate() {
            assert_eq!(z.global_sections_dim(d as i64).unwrap(), want, "degree {d}");
        }
    }

    #[test]
    fn exthick_saturation_witnesses_nonreducedness() {
        let z = exthick_model(20);
        // saturating the first chart's ideal by the coordinate b exposes the
        // embedded structure: <v^2, a + 2v> (after scaling)
        let sat = &z.pair_saturated[&(0, 2)];
        let (_, gens) = sat.describe();
        assert_eq!(gens, vec!["v + 1/2*a", "a^2"]);
    }

    #[test]
    fn exthick_cech_level_zero_matches_global_sections() {
        let z = exthick_model(12);
        let complex = z.cech(1, 12).unwrap();
        for d in 0..=10 {
            let h0 = complex.cohomology_dim(0, d).unwrap();
            assert_eq!(h0, z.global_sections_dim(d).unwrap(), "degree {d}");
        }
    }

    #[test]
    fn exthick_first_cohomology_vanishes() {
        let z = exthick_model(12);
        let complex = z.cech(2, 12).unwrap();
        for d in 0..=10 {
            assert_eq!(complex.cohomology_dim(1, d).unwrap(), 0, "degree {d}");
        }
    }

    #[test]
    fn exthick_poincare_series_closed_form() {
        let z = exthick_model(20);
        let report = poincare_series_report(&z, 14).unwrap();
        assert_eq!(&report.dims[..9], &[1, 0, 2, 0, 3, 0, 3, 0, 3]);
        assert_eq!(
            report.closed_form.as_deref(),
            Some("(t^4 + t^2 + 1)/(1 - t^2)")
        );
    }

    #[test]
    fn single_chart_model_equals_chart_hilbert_function() {
        // nilpotent field on the projective line: zeros only in one chart
        let ring = PolyRing::new(Vec::<String>::new());
        let e = MatrixElt::parse(
            &ring,
            &[vec!["0".into(), "1".into()], vec!["0".into(), "0".into()]],
        )
        .unwrap();
        let section = SectionFamily::new(
            e,
            vec![],
            vec![],
            OneParamSubgroup { exponents: vec![1, -1] },
        )
        .unwrap();
        let space = ChartedSpace::projective_named(1, &[vec!["a".into()], vec!["b".into()]]).unwrap();
        let action = crate::charts::ChartedAction::from_section(space, &section, vec![]).unwrap();
        let z = build_zero_scheme(&section, action, 10).unwrap();
        assert_eq!(z.num_charts(), 1);
        assert_eq!(z.dropped, vec!["U1".to_string()]);
        // the double point k[a]/a^2 with a of weight 2
        let dims: Vec<usize> = (0..=6)
            .map(|d| z.global_sections_dim(d).unwrap())
            .collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn torus_model_on_line_multigraded_dims() {
        // scaling-trivial torus action on the projective line
        let ring = PolyRing::new(Vec::<String>::new());
        let e = MatrixElt::zero(&ring, 2);
        let d1 = MatrixElt::parse(
            &ring,
            &[vec!["1".into(), "0".into()], vec!["0".into(), "0".into()]],
        )
        .unwrap();
        let section = kostant_section(SectionKind::Solvable {
            e,
            torus_basis: vec![d1],
            params: vec!["w".into()],
            subgroup: OneParamSubgroup { exponents: vec![0, 0] },
        })
        .unwrap();
        let space = ChartedSpace::projective_named(1, &[vec!["a".into()], vec!["b".into()]]).unwrap();
        let action =
            crate::charts::ChartedAction::from_section(space, &section, vec![vec![1, 0]]).unwrap();
        let z = build_zero_scheme(&section, action, 16)
            .unwrap()
            .with_char_box(vec![(-6, 6)])
            .unwrap();
        let dims: Vec<usize> = (0..=8)
            .map(|d| z.global_sections_dim(d).unwrap())
            .collect();
        // fixed-point ring of the line: 1, 2, 2, ... in even degrees
        assert_eq!(dims, vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
        // degree slices away from character zero are empty in the kernel
        assert_eq!(z.global_sections_slice_dim(&[2, 0]).unwrap(), 2);
        assert_eq!(z.global_sections_slice_dim(&[2, 1]).unwrap(), 0);
        // first cohomology of the affine-line gluing vanishes
        let complex = z.cech(1, 16).unwrap();
        for d in 0..=6 {
            assert_eq!(complex.cohomology_dim(1, d).unwrap(), 0, "degree {d}");
        }
    }

    #[test]
    fn multigraded_without_box_is_refused() {
        let ring = PolyRing::new(Vec::<String>::new());
        let e = MatrixElt::zero(&ring, 2);
        let d1 = MatrixElt::parse(
            &ring,
            &[vec!["1".into(), "0".into()], vec!["0".into(), "0".into()]],
        )
        .unwrap();
        let section = kostant_section(SectionKind::Solvable {
            e,
            torus_basis: vec![d1],
            params: vec!["w".into()],
            subgroup: OneParamSubgroup { exponents: vec![0, 0] },
        })
        .unwrap();
        let space = ChartedSpace::projective(1);
        let action =
            crate::charts::ChartedAction::from_section(space, &section, vec![vec![1, 0]]).unwrap();
        let z = build_zero_scheme(&section, action, 16).unwrap();
        assert!(z.global_sections_dim(2).is_err());
    }

    #[test]
    fn degree_beyond_truncation_is_refused() {
        let z = exthick_model(8);
        assert!(z.global_sections_dim(9).is_err());
        assert!(z.global_sections_dim(8).is_ok());
    }

    #[test]
    fn two_lines_meeting_at_a_point() {
        let c = ComponentCurveSet {
            components: vec![
                ComponentCurve {
                    name: "L1".into(),
                    parameter_weight: Some(2),
                    parametrizations: vec![],
                },
                ComponentCurve {
                    name: "L2".into(),
                    parameter_weight: Some(2),
                    parametrizations: vec![],
                },
            ],
            incidences: vec![ComponentIncidence {
                a: 0,
                b: 1,
                a_param: rat(0),
                b_param: rat(0),
                chart: 0,
                point: vec![],
            }],
        };
        assert_eq!(reduced_ring_dims(&c, 0).unwrap(), 1);
        assert_eq!(reduced_ring_dims(&c, 2).unwrap(), 2);
        assert_eq!(reduced_ring_dims(&c, 4).unwrap(), 2);
        assert_eq!(reduced_ring_dims(&c, 3).unwrap(), 0);
    }

    #[test]
    fn single_line_is_a_polynomial_ring() {
        let c = ComponentCurveSet {
            components: vec![ComponentCurve {
                name: "L".into(),
                parameter_weight: Some(2),
                parametrizations: vec![],
            }],
            incidences: vec![],
        };
        for d in [0i64, 2, 4, 6] {
            assert_eq!(reduced_ring_dims(&c, d).unwrap(), 1, "degree {d}");
        }
        assert_eq!(reduced_ring_dims(&c, 1).unwrap(), 0);
    }

    #[test]
    fn exthick_reduced_components_validate_and_count() {
        let z = exthick_model(20);
        let uring = PolyRing::new(vec!["u"]);
        let c0 = uring.zero();
        let u = uring.var(0);
        // three lines through the chart U0/U2 pictures plus the compact
        // component (the fiber line over the origin of the section)
        let comps = vec![
            // v arbitrary, point [1:0:0]: chart 0 with (v,a,b) = (u,0,0)
            ComponentCurve {
                name: "L0".into(),
                parameter_weight: Some(2),
                parametrizations: vec![(0, vec![u.clone(), c0.clone(), c0.clone()])],
            },
            // v arbitrary, point [1:-v:0]: chart 0 with (v,a,b) = (u,-u,0)
            ComponentCurve {
                name: "L1".into(),
                parameter_weight: Some(2),
                parametrizations: vec![(0, vec![u.clone(), u.neg(), c0.clone()])],
            },
            // v arbitrary, point [0:0:1]: chart 2 with (v,c,d) = (u,0,0)
            ComponentCurve {
                name: "L2".into(),
                parameter_weight: Some(2),
                parametrizations: vec![(2, vec![u.clone(), c0.clone(), c0.clone()])],
            },
            // the compact fiber over v=0 (constants only); it passes through
            // the incidence points below in charts 0 and 2
            ComponentCurve {
                name: "C".into(),
                parameter_weight: None,
                parametrizations: vec![
                    (0, vec![c0.clone(), c0.clone(), u.clone()]),
                    (2, vec![c0.clone(), u.clone(), c0.clone()]),
                ],
            },
        ];
        let set = ComponentCurveSet {
            components: comps,
            incidences: vec![
                ComponentIncidence {
                    a: 0,
                    b: 3,
                    a_param: rat(0),
                    b_param: rat(0),
                    chart: 0,
                    point: vec![rat(0), rat(0), rat(0)],
                },
                ComponentIncidence {
                    a: 1,
                    b: 3,
                    a_param: rat(0),
                    b_param: rat(0),
                    chart: 0,
                    point: vec![rat(0), rat(0), rat(0)],
                },
                ComponentIncidence {
                    a: 2,
                    b: 3,
                    a_param: rat(0),
                    b_param: rat(0),
                    chart: 2,
                    point: vec![rat(0), rat(0), rat(0)],
                },
            ],
        };
        set.validate_against(&z).unwrap();
        // tuple dimensions: the nilpotents of the model do not globalize,
        // so the counts agree with the model in degree 0 and from degree 4
        // on; in degree 2 the three concurrent branches are not seminormal
        // and the tuple model sees one extra dimension (3 vs 2).
        assert_eq!(reduced_ring_dims(&set, 0).unwrap(), 1);
        assert_eq!(z.global_sections_dim(0).unwrap(), 1);
        assert_eq!(reduced_ring_dims(&set, 2).unwrap(), 3);
        assert_eq!(z.global_sections_dim(2).unwrap(), 2);
        for d in [4i64, 6, 8] {
            assert_eq!(
                reduced_ring_dims(&set, d).unwrap(),
                z.global_sections_dim(d).unwrap(),
                "degree {d}"
            );
        }
    }

    #[test]
    fn broken_incidence_is_rejected() {
        let z = exthick_model(10);
        let uring = PolyRing::new(vec!["u"]);
        let set = ComponentCurveSet {
            components: vec![ComponentCurve {
                name: "L".into(),
                parameter_weight: Some(2),
                parametrizations: vec![(0, vec![uring.var(0), uring.one(), uring.zero()])],
            }],
            incidences: vec![],
        };
        // (v,a,b) = (u,1,0) does not satisfy a^2 + va = 1 + u != 0
        assert!(set.validate_against(&z).is_err());
    }
}
