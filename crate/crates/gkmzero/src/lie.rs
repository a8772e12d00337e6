//! Matrix Lie-algebra data: brackets, principal sl2 pairs in gl_n,
//! one-parameter diagonal subgroups, section families (nilpotent base plus a
//! parametrized complement), the scaling-action weights on section
//! parameters, and characteristic polynomials restricted to a section.

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::poly::{rat, Grading, MultiPoly, PolyRing, Rat};
use num::{One, Zero};

/// A square matrix whose entries are polynomials over a shared ring
/// (constant matrices simply use constant polynomials).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixElt {
    pub n: usize,
    pub ring: PolyRing,
    pub entries: Vec<Vec<MultiPoly>>,
}

impl MatrixElt {
    pub fn zero(ring: &PolyRing, n: usize) -> MatrixElt {
        MatrixElt {
            n,
            ring: ring.clone(),
            entries: vec![vec![ring.zero(); n]; n],
        }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> MatrixElt {
        let mut m = MatrixElt::zero(ring, n);
        for i in 0..n {
            m.entries[i][i] = ring.one();
        }
        m
    }

    pub fn from_rationals(ring: &PolyRing, data: &[Vec<Rat>]) -> MatrixElt {
        let n = data.len();
        assert!(data.iter().all(|r| r.len() == n), "square matrix required");
        MatrixElt {
            n,
            ring: ring.clone(),
            entries: data
                .iter()
                .map(|row| row.iter().map(|c| ring.constant(c.clone())).collect())
                .collect(),
        }
    }

    pub fn parse(ring: &PolyRing, data: &[Vec<String>]) -> Result<MatrixElt> {
        let n = data.len();
        if data.iter().any(|r| r.len() != n) {
            return Err(Error::structural("matrix rows of unequal length"));
        }
        let mut entries = Vec::with_capacity(n);
        for row in data {
            let mut out = Vec::with_capacity(n);
            for s in row {
                out.push(ring.parse(s)?);
            }
            entries.push(out);
        }
        Ok(MatrixElt { n, ring: ring.clone(), entries })
    }

    fn assert_same_shape(&self, other: &MatrixElt) -> Result<()> {
        if self.n != other.n {
            return Err(Error::structural("matrix size mismatch"));
        }
        if !self.ring.same(&other.ring) {
            return Err(Error::structural("matrix coefficient rings differ"));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixElt) -> Result<MatrixElt> {
        self.assert_same_shape(other)?;
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = self.entries[i][j].add(&other.entries[i][j]);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MatrixElt) -> Result<MatrixElt> {
        self.assert_same_shape(other)?;
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = self.entries[i][j].sub(&other.entries[i][j]);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MatrixElt) -> Result<MatrixElt> {
        self.assert_same_shape(other)?;
        let mut out = MatrixElt::zero(&self.ring, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = self.ring.zero();
                for k in 0..self.n {
                    if self.entries[i][k].is_zero() || other.entries[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.entries[i][k].mul(&other.entries[k][j]));
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn scale_poly(&self, c: &MultiPoly) -> MatrixElt {
        let mut out = self.clone();
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e = e.mul(c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(MultiPoly::is_zero))
    }

    /// Re-express all entries over another ring (matching variables by name).
    pub fn map_ring(&self, target: &PolyRing) -> Result<MatrixElt> {
        let mut out = MatrixElt::zero(target, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i][j] = self.entries[i][j].map_vars(target)?;
            }
        }
        Ok(out)
    }
}

/// Lie bracket ab - ba.
pub fn bracket(a: &MatrixElt, b: &MatrixElt) -> Result<MatrixElt> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// An sl2 pair (e, h) with the optional completing f: [h,e] = 2e,
/// [e,f] = h, [h,f] = -2f.
#[derive(Clone, Debug)]
pub struct Sl2Pair {
    pub e: MatrixElt,
    pub h: MatrixElt,
    pub f: Option<MatrixElt>,
}

impl Sl2Pair {
    pub fn validate(&self) -> Result<()> {
        let two_e = self.e.scale_poly(&self.e.ring.constant(rat(2)));
        if bracket(&self.h, &self.e)? != two_e {
            return Err(Error::structural("[h,e] != 2e"));
        }
        if let Some(f) = &self.f {
            if bracket(&self.e, f)? != self.h {
                return Err(Error::structural("[e,f] != h"));
            }
            let minus_two_f = f.scale_poly(&f.ring.constant(rat(-2)));
            if bracket(&self.h, f)? != minus_two_f {
                return Err(Error::structural("[h,f] != -2f"));
            }
        }
        Ok(())
    }
}

/// The principal sl2 pair in gl_n: e is the upper shift matrix, h the
/// diagonal (n-1, n-3, ..., -(n-1)), f the weighted lower shift.
pub fn principal_pair_gl(n: usize) -> Sl2Pair {
    let ring = PolyRing::new(Vec::<String>::new());
    let mut e = MatrixElt::zero(&ring, n);
    let mut h = MatrixElt::zero(&ring, n);
    let mut f = MatrixElt::zero(&ring, n);
    for i in 0..n {
        h.entries[i][i] = ring.constant(rat(n as i64 - 1 - 2 * i as i64));
        if i + 1 < n {
            e.entries[i][i + 1] = ring.one();
            let c = (i as i64 + 1) * (n as i64 - 1 - i as i64);
            f.entries[i + 1][i] = ring.constant(rat(c));
        }
    }
    Sl2Pair { e, h, f: Some(f) }
}

/// The diagonal one-parameter subgroup H^t = diag(t^{d_1}, ..., t^{d_n}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneParamSubgroup {
    pub exponents: Vec<i64>,
}

impl OneParamSubgroup {
    /// Read the exponents off a diagonal integer matrix (such as the h of an
    /// sl2 pair).
    pub fn from_h(h: &MatrixElt) -> Result<OneParamSubgroup> {
        let mut exponents = Vec::with_capacity(h.n);
        for i in 0..h.n {
            for j in 0..h.n {
                if i != j && !h.entries[i][j].is_zero() {
                    return Err(Error::structural("h is not diagonal"));
                }
            }
            let c = h.entries[i][i].constant_term();
            if !h.entries[i][i].is_constant() || !c.denom().is_one() {
                return Err(Error::structural("h has non-integer diagonal"));
            }
            exponents.push(
                c.numer()
                    .to_string()
                    .parse::<i64>()
                    .map_err(|_| Error::structural("h entry out of range"))?,
            );
        }
        Ok(OneParamSubgroup { exponents })
    }
}

/// An affine family e + sum v_i * dir_i inside gl_n, with the grading induced
/// by the scaling action t.(e+v) = t^{-2} Ad_{H^t}(e+v).
#[derive(Clone, Debug)]
pub struct SectionFamily {
    pub base: MatrixElt,           // constant entries
    pub directions: Vec<MatrixElt>, // constant entries
    pub params: Vec<String>,
    pub ring: PolyRing,            // the parameter ring
    pub grading: Grading,          // scalar weights of the parameters
    pub subgroup: OneParamSubgroup,
}

impl SectionFamily {
    /// Assemble and validate: computes the parameter weights via the scaling
    /// action and stores them as the grading.
    pub fn new(
        base: MatrixElt,
        directions: Vec<MatrixElt>,
        params: Vec<String>,
        subgroup: OneParamSubgroup,
    ) -> Result<SectionFamily> {
        if directions.len() != params.len() {
            return Err(Error::structural(
                "one parameter per direction matrix required",
            ));
        }
        let ring = PolyRing::new(params.clone());
        let weights = cstar_act(&base, &directions, &subgroup)?;
        Ok(SectionFamily {
            base,
            directions,
            params,
            ring,
            grading: Grading::scalar(weights),
            subgroup,
        })
    }

    /// The generic element e + sum v_i dir_i over the parameter ring.
    pub fn generic_element(&self) -> Result<MatrixElt> {
        let mut m = self.base.map_ring(&self.ring)?;
        for (i, dir) in self.directions.iter().enumerate() {
            let v = self.ring.var(i);
            m = m.add(&dir.map_ring(&self.ring)?.scale_poly(&v))?;
        }
        Ok(m)
    }

    pub fn parameter_weights(&self) -> Vec<i64> {
        self.grading.scalar_weights().expect("section gradings are scalar")
    }
}

/// Weights of the scaling action on section parameters.
///
/// Conjugation by H^t = diag(t^{d_i}) scales entry (i,j) by t^{d_i - d_j};
/// with the extra overall t^{-2}, entry (i,j) of the family scales by
/// t^{d_i - d_j - 2}.  The base must be fixed (exponent 0 on its support)
/// and each direction must scale uniformly (one exponent m on its support);
/// the pullback weight of its parameter is then 2 - m, so that the parameter
/// transforms as v -> t^{-(2-m)} v.  Errors when the action fails to
/// preserve the family.
pub fn cstar_act(
    base: &MatrixElt,
    directions: &[MatrixElt],
    subgroup: &OneParamSubgroup,
) -> Result<Vec<i64>> {
    let n = base.n;
    if subgroup.exponents.len() != n {
        return Err(Error::structural("subgroup size does not match matrices"));
    }
    let d = &subgroup.exponents;
    for i in 0..n {
        for j in 0..n {
            if !base.entries[i][j].is_zero() && d[i] - d[j] - 2 != 0 {
                return Err(Error::structural(format!(
                    "scaling action moves the base: entry ({i},{j}) scales by t^{}",
                    d[i] - d[j] - 2
                )));
            }
        }
    }
    let mut weights = Vec::with_capacity(directions.len());
    for (k, dir) in directions.iter().enumerate() {
        if dir.n != n {
            return Err(Error::structural("direction size mismatch"));
        }
        if dir.is_zero() {
            return Err(Error::structural("zero direction matrix"));
        }
        let mut exponent: Option<i64> = None;
        for i in 0..n {
            for j in 0..n {
                if dir.entries[i][j].is_zero() {
                    continue;
                }
                let m = d[i] - d[j];
                match exponent {
                    None => exponent = Some(m),
                    Some(prev) if prev == m => {}
                    Some(prev) => {
                        return Err(Error::structural(format!(
                            "direction {k} is not scaled uniformly: entries scale by t^{prev} and t^{m}"
                        )))
                    }
                }
            }
        }
        weights.push(2 - exponent.expect("nonzero direction has an exponent"));
    }
    Ok(weights)
}

/// Kinds of section constructions supported concretely.
pub enum SectionKind {
    /// Solvable case: explicit nilpotent base and a torus basis spanning the
    /// complement directions.
    Solvable {
        e: MatrixElt,
        torus_basis: Vec<MatrixElt>,
        params: Vec<String>,
        subgroup: OneParamSubgroup,
    },
    /// Reductive gl_n with its principal pair: directions span the
    /// centralizer of f, found by solving [f, X] = 0 and split into
    /// ad_h-homogeneous pieces.
    ReductiveGl { n: usize },
}

pub fn kostant_section(kind: SectionKind) -> Result<SectionFamily> {
    match kind {
        SectionKind::Solvable { e, torus_basis, params, subgroup } => {
            SectionFamily::new(e, torus_basis, params, subgroup)
        }
        SectionKind::ReductiveGl { n } => {
            if n < 1 {
                return Err(Error::structural("matrix size must be positive"));
            }
            let pair = principal_pair_gl(n);
            pair.validate()?;
            let subgroup = OneParamSubgroup::from_h(&pair.h)?;
            let f = pair.f.clone().expect("principal pair has f");
            let raw = centralizer_basis(&f)?;
            let directions = split_ad_h_homogeneous(&raw, &subgroup, n);
            if directions.len() != n {
                return Err(Error::structural(format!(
                    "centralizer of f has dimension {} != {}",
                    directions.len(),
                    n
                )));
            }
            let params: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
            SectionFamily::new(pair.e, directions, params, subgroup)
        }
    }
}

/// Rational basis of {X : [m, X] = 0} inside gl_n.
pub fn centralizer_basis(m: &MatrixElt) -> Result<Vec<MatrixElt>> {
    let n = m.n;
    for row in &m.entries {
        for e in row {
            if !e.is_constant() {
                return Err(Error::structural(
                    "centralizer computation needs a constant matrix",
                ));
            }
        }
    }
    let c = |i: usize, j: usize| m.entries[i][j].constant_term();
    // ad_m as an n^2 x n^2 matrix acting on X (row-major): [m,X]_{ij} =
    // sum_k m_{ik} X_{kj} - X_{ik} m_{kj}
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Rat::zero(); n * n];
            for k in 0..n {
                row[k * n + j] += c(i, k);
                row[i * n + k] -= c(k, j);
            }
            rows.push(row);
        }
    }
    let null = QMat::from_rows(rows).nullspace();
    let ring = m.ring.clone();
    Ok(null
        .into_iter()
        .map(|v| {
            let mut x = MatrixElt::zero(&ring, n);
            for i in 0..n {
                for j in 0..n {
                    x.entries[i][j] = ring.constant(v[i * n + j].clone());
                }
            }
            x
        })
        .collect())
}

/// Dimension of the centralizer of m in gl_n (regularity check: equals n for
/// regular elements).
pub fn centralizer_dimension(m: &MatrixElt) -> Result<usize> {
    Ok(centralizer_basis(m)?.len())
}

/// Split matrices into ad_h-weight-homogeneous components (entry (i,j) has
/// weight d_i - d_j) and return a deduplicated independent spanning set,
/// sorted by weight then entry order.
fn split_ad_h_homogeneous(
    mats: &[MatrixElt],
    subgroup: &OneParamSubgroup,
    n: usize,
) -> Vec<MatrixElt> {
    use std::collections::BTreeMap;
    let d = &subgroup.exponents;
    let mut by_weight: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
    for m in mats {
        let mut comps: BTreeMap<i64, Vec<Rat>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let c = m.entries[i][j].constant_term();
                if c.is_zero() {
                    continue;
                }
                let w = d[i] - d[j];
                comps.entry(w).or_insert_with(|| vec![Rat::zero(); n * n])[i * n + j] = c;
            }
        }
        for (w, v) in comps {
            by_weight.entry(w).or_default().push(v);
        }
    }
    let ring = mats.first().map(|m| m.ring.clone()).unwrap_or_else(|| PolyRing::new(Vec::<String>::new()));
    let mut out = Vec::new();
    // Descending ad_h weight, so the scaling-action weights (2 - w) of the
    // resulting directions come out ascending.
    for (_w, vecs) in by_weight.into_iter().rev() {
        // independent subset via incremental rank
        let mut kept: Vec<Vec<Rat>> = Vec::new();
        for v in vecs {
            let mut trial = kept.clone();
            trial.push(v.clone());
            if QMat::from_rows(trial.clone()).rank() > kept.len() {
                kept.push(v);
            }
        }
        for v in kept {
            let mut x = MatrixElt::zero(&ring, n);
            for i in 0..n {
                for j in 0..n {
                    x.entries[i][j] = ring.constant(v[i * n + j].clone());
                }
            }
            out.push(x);
        }
    }
    out
}

/// Coefficients c_1..c_n of det(lambda I - M) = lambda^n + c_1 lambda^{n-1}
/// + ... + c_n, as polynomials in M's coefficient ring.
pub fn char_poly_on_section(m: &MatrixElt) -> Result<Vec<MultiPoly>> {
    let n = m.n;
    let ext = m.ring.extend(vec!["lambda_cp"]);
    let lam_idx = ext.num_vars() - 1;
    let lam = ext.var(lam_idx);
    // lambda I - M over the extended ring
    let mut a = MatrixElt::zero(&ext, n);
    for i in 0..n {
        for j in 0..n {
            let mut e = m.entries[i][j].map_vars(&ext)?.neg();
            if i == j {
                e = e.add(&lam);
            }
            a.entries[i][j] = e;
        }
    }
    let det = determinant(&a);
    // collect by lambda exponent
    let mut coeffs = vec![m.ring.zero(); n + 1]; // index = power of lambda
    for (e, c) in det.terms() {
        let k = e[lam_idx] as usize;
        let mut rest = e.clone();
        rest[lam_idx] = 0;
        let mut mono = ext.monomial(rest, c.clone());
        mono = mono.map_vars(&m.ring)?;
        coeffs[k] = coeffs[k].add(&mono);
    }
    if coeffs[n] != m.ring.one() {
        return Err(Error::structural("characteristic polynomial is not monic"));
    }
    // return c_1..c_n with char = lambda^n + c_1 lambda^{n-1} + ... + c_n
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        out.push(coeffs[k].clone());
    }
    Ok(out)
}

/// Determinant by expansion along the first remaining row, with memoized
/// column masks (fine for desk-scale n <= 6).
pub fn determinant(m: &MatrixElt) -> MultiPoly {
    use std::collections::BTreeMap;
    let ring = m.ring.clone();
    fn minor(
        m: &MatrixElt,
        row: usize,
        mask: u32,
        memo: &mut BTreeMap<u32, MultiPoly>,
        ring: &PolyRing,
    ) -> MultiPoly {
        let n = m.n;
        if row == n {
            return ring.one();
        }
        if let Some(hit) = memo.get(&mask) {
            return hit.clone();
        }
        let mut acc = ring.zero();
        let mut sign = false;
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            if !m.entries[row][col].is_zero() {
                let sub = minor(m, row + 1, mask | (1 << col), memo, ring);
                let term = m.entries[row][col].mul(&sub);
                acc = if sign { acc.sub(&term) } else { acc.add(&term) };
            }
            sign = !sign;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let mut memo = BTreeMap::new();
    minor(m, 0, 0, &mut memo, &ring)
}

/// Determinant of the Jacobian matrix d(c_i)/d(v_j); the section exhibits a
/// coordinate isomorphism exactly when this is a nonzero constant.
pub fn char_poly_jacobian_det(section: &SectionFamily) -> Result<MultiPoly> {
    let m = section.generic_element()?;
    let coeffs = char_poly_on_section(&m)?;
    let n = coeffs.len();
    if n != section.params.len() {
        return Err(Error::structural(
            "Jacobian requires square data: one coefficient per parameter",
        ));
    }
    let ring = section.ring.clone();
    let mut jac = MatrixElt::zero(&ring, n);
    for (i, c) in coeffs.iter().enumerate() {
        for j in 0..n {
            jac.entries[i][j] = c.derivative(j);
        }
    }
    Ok(determinant(&jac))
}
