//! Laurent polynomials: finite rational combinations of monomials with
//! integer (possibly negative) exponents.
//!
//! These model localized equivariant K-theory classes on torus characters.
//! The key operation is the exact divisibility test `laurent_divisible`,
//! which decides whether `f = q * g` for some Laurent polynomial `q`.

use crate::error::{Error, Result};
use crate::poly::{fmt_terms, parse_terms, rat, Rat};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Shared variable list for Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentRing {
    vars: Arc<Vec<String>>,
}

impl LaurentRing {
    pub fn new<S: Into<String>>(vars: Vec<S>) -> LaurentRing {
        LaurentRing { vars: Arc::new(vars.into_iter().map(Into::into).collect()) }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> LaurentPoly {
        self.constant(Rat::one())
    }

    pub fn constant(&self, c: Rat) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0i32; self.vars.len()], c);
        }
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// The monomial `x^exp` for a character exponent vector.
    pub fn monomial(&self, exp: Vec<i32>, c: Rat) -> LaurentPoly {
        assert_eq!(exp.len(), self.vars.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// `x^alpha - 1`, the standard edge factor for a character `alpha`.
    pub fn char_minus_one(&self, alpha: &[i64]) -> LaurentPoly {
        let exp: Vec<i32> = alpha.iter().map(|&a| a as i32).collect();
        let mut p = self.monomial(exp, Rat::one());
        p.add_term(vec![0i32; self.vars.len()], -Rat::one());
        p
    }

    pub fn parse(&self, s: &str) -> Result<LaurentPoly> {
        let terms = parse_terms(s, true)?;
        let mut p = self.zero();
        for (varexps, coeff) in terms {
            let mut exp = vec![0i32; self.vars.len()];
            for (name, e) in varexps {
                let idx = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::parse(format!("unknown variable `{name}` in `{s}`")))?;
                exp[idx] += e as i32;
            }
            p.add_term(exp, coeff);
        }
        Ok(p)
    }
}

/// Laurent polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Vec<i32>, Rat>,
}

impl LaurentPoly {
    pub fn ring(&self) -> LaurentRing {
        LaurentRing { vars: self.vars.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exp: Vec<i32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_ring(&self, other: &LaurentPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "Laurent variable-list mismatch"
        );
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        self.assert_same_ring(other);
        let mut out = LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = self.ring().one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Per-variable minimum exponent over all terms (0 for the zero poly).
    fn min_exponents(&self) -> Vec<i32> {
        let n = self.vars.len();
        let mut mins = vec![0i32; n];
        let mut first = true;
        for e in self.terms.keys() {
            if first {
                mins.copy_from_slice(e);
                first = false;
            } else {
                for (m, &x) in mins.iter_mut().zip(e) {
                    if x < *m {
                        *m = x;
                    }
                }
            }
        }
        mins
    }

    /// Shift exponents so every variable has minimum exponent 0; returns the
    /// nonnegative-exponent form as term data.  Multiplying by a monomial is a
    /// unit in the Laurent ring, so this preserves divisibility relations.
    fn normalized_terms(&self) -> BTreeMap<Vec<u32>, Rat> {
        let mins = self.min_exponents();
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let shifted: Vec<u32> =
                e.iter().zip(&mins).map(|(&x, &m)| (x - m) as u32).collect();
            out.insert(shifted, c.clone());
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Vec<i32>, Rat)> =
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        fmt_terms(&self.vars, &mut terms, f)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Decides whether `g` divides `f` in the Laurent polynomial ring, returning
/// the exact quotient when it does.
///
/// Both inputs are shifted by monomial units so all exponents become
/// nonnegative; in the ordinary polynomial ring a single divisor is already a
/// Gröbner basis of the ideal it generates, so long division leaves remainder
/// zero exactly when `f` lies in `(g)`.  The quotient is shifted back.
pub fn laurent_divisible(f: &LaurentPoly, g: &LaurentPoly) -> Result<Option<LaurentPoly>> {
    f.assert_same_ring(g);
    if g.is_zero() {
        if f.is_zero() {
            return Ok(Some(f.ring().zero()));
        }
        return Err(Error::domain("division by the zero Laurent polynomial"));
    }
    if f.is_zero() {
        return Ok(Some(f.ring().zero()));
    }
    let f_min = f.min_exponents();
    let g_min = g.min_exponents();
    let fp = f.normalized_terms();
    let gp = g.normalized_terms();

    // Long division of fp by gp in the ordinary polynomial ring, using the
    // graded-reverse-lex order baked into exponent comparison below.
    let order = crate::order::MonomialOrder::GrevLex;
    let lead = |terms: &BTreeMap<Vec<u32>, Rat>| -> Option<(Vec<u32>, Rat)> {
        let mut best: Option<&Vec<u32>> = None;
        for e in terms.keys() {
            best = match best {
                None => Some(e),
                Some(b) => {
                    if order.cmp(e, b) == std::cmp::Ordering::Greater {
                        Some(e)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best.map(|e| (e.clone(), terms[e].clone()))
    };

    let (g_lead_exp, g_lead_c) = lead(&gp).expect("nonzero divisor");
    let mut rem = fp;
    let mut quot: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    while let Some((r_exp, r_c)) = lead(&rem) {
        // divisibility of the leading monomial
        if r_exp.iter().zip(&g_lead_exp).any(|(a, b)| a < b) {
            return Ok(None);
        }
        let q_exp: Vec<u32> = r_exp.iter().zip(&g_lead_exp).map(|(a, b)| a - b).collect();
        let q_c = r_c / g_lead_c.clone();
        quot.insert(q_exp.clone(), q_c.clone());
        // rem -= q * g
        for (e, c) in &gp {
            let ne: Vec<u32> = e.iter().zip(&q_exp).map(|(a, b)| a + b).collect();
            let delta = -(c.clone() * q_c.clone());
            match rem.entry(ne) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(delta);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get().clone() + delta;
                    if sum.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = sum;
                    }
                }
            }
        }
    }
    // Shift quotient back: quotient exponents were relative to
    // (f - f_min) / (g - g_min), so the true quotient shifts by f_min - g_min.
    let ring = f.ring();
    let mut out = ring.zero();
    for (e, c) in quot {
        let shifted: Vec<i32> = e
            .iter()
            .zip(f_min.iter().zip(&g_min))
            .map(|(&q, (&fm, &gm))| q as i32 + fm - gm)
            .collect();
        out.add_term(shifted, c);
    }
    Ok(Some(out))
}

/// `k`-th power sums to Chern-character truncation helpers live in `gkm`;
/// here we only expose evaluation of a Laurent polynomial at integer points,
/// used by randomized cross-checks.
pub fn eval_at_rationals(p: &LaurentPoly, point: &[Rat]) -> Result<Rat> {
    assert_eq!(point.len(), p.ring().num_vars());
    let mut acc = Rat::zero();
    for (e, c) in p.terms() {
        let mut t = c.clone();
        for (i, &k) in e.iter().enumerate() {
            if point[i].is_zero() && k < 0 {
                return Err(Error::domain("negative power of zero"));
            }
            if k >= 0 {
                for _ in 0..k {
                    t *= point[i].clone();
                }
            } else {
                for _ in 0..(-k) {
                    t /= point[i].clone();
                }
            }
        }
        acc += t;
    }
    Ok(acc)
}

/// Convenience: `c` times the character monomial `x^alpha`.
pub fn char_monomial(ring: &LaurentRing, alpha: &[i64], c: i64) -> LaurentPoly {
    ring.monomial(alpha.iter().map(|&a| a as i32).collect(), rat(c))
}
