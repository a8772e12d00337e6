//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Polynomials are maps from exponent vectors to nonzero `BigRational`
//! coefficients, keyed by a shared, ordered variable list.  All arithmetic is
//! exact; zero coefficients are never stored.  Gradings assign each variable
//! an integer weight vector (length 1 in the common, purely cohomological
//! case), and homogeneity is decided term by term.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub type Rat = BigRational;

/// Small integer convenience constructor.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact fraction constructor; panics on zero denominator (programmer error).
pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// An ordered list of variable names shared by all elements of one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Arc<Vec<String>>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(vars: Vec<S>) -> PolyRing {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        PolyRing { vars: Arc::new(vars) }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Whether two rings have the same variable list (by contents).
    pub fn same(&self, other: &PolyRing) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> MultiPoly {
        self.constant(Rat::one())
    }

    pub fn constant(&self, c: Rat) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; self.vars.len()], c);
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        assert!(i < self.vars.len(), "variable index out of range");
        let mut exp = vec![0u32; self.vars.len()];
        exp[i] = 1;
        self.monomial(exp, Rat::one())
    }

    pub fn monomial(&self, exp: Vec<u32>, c: Rat) -> MultiPoly {
        assert_eq!(exp.len(), self.vars.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Ring with `extra` appended after the existing variables.
    pub fn extend<S: Into<String>>(&self, extra: Vec<S>) -> PolyRing {
        let mut vars = (*self.vars).clone();
        for e in extra {
            vars.push(e.into());
        }
        PolyRing { vars: Arc::new(vars) }
    }

    /// Ring with exactly the variables at `keep` (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> PolyRing {
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        PolyRing { vars: Arc::new(vars) }
    }

    pub fn parse(&self, s: &str) -> Result<MultiPoly> {
        let terms = parse_terms(s, false)?;
        let mut p = self.zero();
        for (varexps, coeff) in terms {
            let mut exp = vec![0u32; self.vars.len()];
            for (name, e) in varexps {
                let idx = self.var_index(&name).ok_or_else(|| {
                    Error::parse(format!("unknown variable `{name}` in `{s}`"))
                })?;
                if e < 0 {
                    return Err(Error::parse(format!(
                        "negative exponent on `{name}` in ordinary polynomial `{s}`"
                    )));
                }
                exp[idx] += e as u32;
            }
            p.add_term(exp, coeff);
        }
        Ok(p)
    }
}

/// Multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn ring(&self) -> PolyRing {
        PolyRing { vars: self.vars.clone() }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Rat {
        let zero_exp = vec![0u32; self.vars.len()];
        self.terms.get(&zero_exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, exp: &[u32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds `c * x^exp`, removing the entry if it cancels.
    pub fn add_term(&mut self, exp: Vec<u32>, c: Rat) {
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

    fn assert_same_ring(&self, other: &MultiPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "variable-list mismatch: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(other);
        let mut out = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Multiply by a single term `c * x^exp`.
    pub fn mul_term(&self, exp: &[u32], c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        let mut terms = BTreeMap::new();
        for (e, v) in &self.terms {
            let ne: Vec<u32> = e.iter().zip(exp).map(|(x, y)| x + y).collect();
            terms.insert(ne, v.clone() * c.clone());
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let ring = self.ring();
        let mut base = self.clone();
        let mut acc = ring.one();
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

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(ne, c.clone() * rat(e[var] as i64));
        }
        out
    }

    /// Substitute each variable by `images[i]` (all in `target`'s ring).
    pub fn substitute(&self, images: &[MultiPoly], target: &PolyRing) -> MultiPoly {
        assert_eq!(images.len(), self.vars.len());
        let mut out = target.zero();
        // Memoized powers per variable, grown on demand.
        let mut pows: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![target.one(), p.clone()]).collect();
        for (e, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pows[i].len() <= k as usize {
                    let next = pows[i].last().unwrap().mul(&images[i]);
                    pows[i].push(next);
                }
                term = term.mul(&pows[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluate at rational points.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= point[i].clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-express in `target`, matching variables by name. Fails if a variable
    /// with a nonzero exponent is missing from `target`.
    pub fn map_vars(&self, target: &PolyRing) -> Result<MultiPoly> {
        let mapping: Vec<Option<usize>> =
            self.vars.iter().map(|v| target.var_index(v)).collect();
        let mut out = target.zero();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; target.num_vars()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match mapping[i] {
                    Some(j) => ne[j] = k,
                    None => {
                        return Err(Error::structural(format!(
                            "variable `{}` not present in target ring",
                            self.vars[i]
                        )))
                    }
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Weighted degree with respect to a (vector-valued) grading.
    pub fn weighted_degree(&self, grading: &Grading) -> Homogeneity {
        assert_eq!(grading.weights.len(), self.vars.len());
        let mut seen: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            let d = grading.degree_of_exp(e);
            match &seen {
                None => seen = Some(d),
                Some(prev) => {
                    if *prev != d {
                        return Homogeneity::Inhomogeneous;
                    }
                }
            }
        }
        Homogeneity::Homogeneous(seen.unwrap_or_else(|| vec![0; grading.dim()]))
    }

    /// Leading coefficient normalization: divide so the order-leading
    /// coefficient is 1. No-op on zero.
    pub fn make_monic(&self, order: &crate::order::MonomialOrder) -> MultiPoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Rat::one() / c)),
        }
    }

    pub fn leading_term(&self, order: &crate::order::MonomialOrder) -> Option<(Vec<u32>, Rat)> {
        let mut best: Option<&Vec<u32>> = None;
        for e in self.terms.keys() {
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
        best.map(|e| (e.clone(), self.terms[e].clone()))
    }
}

/// Result of a weighted-degree computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous(Vec<i64>),
    Inhomogeneous,
}

impl Homogeneity {
    pub fn degree(&self) -> Option<&Vec<i64>> {
        match self {
            Homogeneity::Homogeneous(d) => Some(d),
            Homogeneity::Inhomogeneous => None,
        }
    }
}

/// Integer weight vectors, one per ring variable.
///
/// The first component is the cohomological weight (doubled convention); any
/// further components refine the grading by auxiliary torus characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub weights: Vec<Vec<i64>>,
}

impl Grading {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Grading> {
        let dim = weights.first().map(|w| w.len()).unwrap_or(1);
        if weights.iter().any(|w| w.len() != dim) {
            return Err(Error::structural("grading weight vectors of unequal length"));
        }
        Ok(Grading { weights })
    }

    pub fn scalar(weights: Vec<i64>) -> Grading {
        Grading { weights: weights.into_iter().map(|w| vec![w]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.weights.first().map(|w| w.len()).unwrap_or(1)
    }

    pub fn degree_of_exp(&self, exp: &[u32]) -> Vec<i64> {
        let mut d = vec![0i64; self.dim()];
        for (i, &k) in exp.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for (j, w) in self.weights[i].iter().enumerate() {
                d[j] += w * k as i64;
            }
        }
        d
    }

    /// Scalar weights, available when the grading is one-dimensional.
    pub fn scalar_weights(&self) -> Option<Vec<i64>> {
        if self.dim() == 1 {
            Some(self.weights.iter().map(|w| w[0]).collect())
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical printing: terms sorted by graded-lex, descending; coefficients as
// `p/q`; factors in ring variable order.

fn fmt_coeff_abs(c: &Rat) -> String {
    let a = c.abs();
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub(crate) fn fmt_terms<E: TermExp>(
    vars: &[String],
    terms: &mut [(Vec<E>, Rat)],
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    // graded-lex descending
    terms.sort_by(|a, b| {
        let da: i64 = a.0.iter().map(|e| e.as_i64()).sum();
        let db: i64 = b.0.iter().map(|e| e.as_i64()).sum();
        db.cmp(&da).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0) {
                match y.as_i64().cmp(&x.as_i64()) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    for (idx, (exp, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let mut factors: Vec<String> = Vec::new();
        for (i, e) in exp.iter().enumerate() {
            let k = e.as_i64();
            if k == 0 {
                continue;
            }
            if k == 1 {
                factors.push(vars[i].clone());
            } else {
                factors.push(format!("{}^{}", vars[i], k));
            }
        }
        let cs = fmt_coeff_abs(c);
        if factors.is_empty() {
            write!(f, "{cs}")?;
        } else if cs == "1" {
            write!(f, "{}", factors.join("*"))?;
        } else {
            write!(f, "{}*{}", cs, factors.join("*"))?;
        }
    }
    Ok(())
}

pub(crate) trait TermExp: Copy {
    fn as_i64(self) -> i64;
}
impl TermExp for u32 {
    fn as_i64(self) -> i64 {
        self as i64
    }
}
impl TermExp for i32 {
    fn as_i64(self) -> i64 {
        self as i64
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Vec<u32>, Rat)> =
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        fmt_terms(&self.vars, &mut terms, f)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Shared term-level parser for ordinary and Laurent polynomials.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                toks.push(Tok::Num(lit.parse::<BigInt>().map_err(|e| Error::parse(e.to_string()))?));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::parse(format!("unexpected character `{other}` in `{s}`"))),
        }
    }
    Ok(toks)
}

/// A parsed term: variable exponents (by name, summed over repeats) and coefficient.
type RawTerm = (Vec<(String, i64)>, Rat);

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    allow_neg_exp: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => Err(Error::parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    // expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Vec<RawTerm>> {
        let mut out: Vec<RawTerm> = Vec::new();
        let mut sign = Rat::one();
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            sign = -sign;
        } else if matches!(self.peek(), Some(Tok::Plus)) {
            self.next();
        }
        loop {
            let ts = self.term()?;
            for (v, c) in ts {
                out.push((v, c * sign.clone()));
            }
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    sign = Rat::one();
                }
                Some(Tok::Minus) => {
                    self.next();
                    sign = -Rat::one();
                }
                _ => break,
            }
        }
        Ok(out)
    }

    // term := atom ('*' atom)*
    fn term(&mut self) -> Result<Vec<RawTerm>> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.next();
            let rhs = self.atom()?;
            acc = mul_raw(&acc, &rhs);
        }
        Ok(acc)
    }

    fn int_exponent(&mut self) -> Result<i64> {
        let mut neg = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            neg = true;
        }
        match self.next() {
            Some(Tok::Num(n)) => {
                let v: i64 = n
                    .to_string()
                    .parse()
                    .map_err(|_| Error::parse("exponent out of range".to_string()))?;
                Ok(if neg { -v } else { v })
            }
            other => Err(Error::parse(format!("expected exponent, found {other:?}"))),
        }
    }

    // atom := number ['/' number] | ident ['^' int] | '(' expr ')' ['^' uint]
    fn atom(&mut self) -> Result<Vec<RawTerm>> {
        match self.next() {
            Some(Tok::Num(n)) => {
                let mut c = Rat::from_integer(n);
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.next();
                    match self.next() {
                        Some(Tok::Num(d)) => {
                            if d.is_zero() {
                                return Err(Error::parse("zero denominator".to_string()));
                            }
                            c /= Rat::from_integer(d);
                        }
                        other => {
                            return Err(Error::parse(format!(
                                "expected denominator, found {other:?}"
                            )))
                        }
                    }
                }
                Ok(vec![(Vec::new(), c)])
            }
            Some(Tok::Ident(name)) => {
                let mut e = 1i64;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.next();
                    e = self.int_exponent()?;
                    if e < 0 && !self.allow_neg_exp {
                        return Err(Error::parse(format!(
                            "negative exponent on `{name}` not allowed here"
                        )));
                    }
                }
                Ok(vec![(vec![(name, e)], Rat::one())])
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                let mut k = 1i64;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.next();
                    k = self.int_exponent()?;
                    if k < 0 {
                        return Err(Error::parse(
                            "negative exponent on parenthesized expression".to_string(),
                        ));
                    }
                }
                let mut acc: Vec<RawTerm> = vec![(Vec::new(), Rat::one())];
                for _ in 0..k {
                    acc = mul_raw(&acc, &inner);
                }
                Ok(acc)
            }
            other => Err(Error::parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn mul_raw(a: &[RawTerm], b: &[RawTerm]) -> Vec<RawTerm> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (va, ca) in a {
        for (vb, cb) in b {
            let mut v = va.clone();
            v.extend(vb.iter().cloned());
            out.push((v, ca.clone() * cb.clone()));
        }
    }
    out
}

pub(crate) fn parse_terms(s: &str, allow_neg_exp: bool) -> Result<Vec<RawTerm>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::parse("empty polynomial text".to_string()));
    }
    let mut p = Parser { toks, pos: 0, allow_neg_exp };
    let terms = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(format!("trailing input in `{s}`")));
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(vec!["v", "a", "b"])
    }

    #[test]
    fn parse_and_print_roundtrip() {
        // canonical form: graded-lex descending terms, factors in ring order
        let r = PolyRing::new(vec!["a", "v"]);
        let p = r.parse("2*a*v^2 + a^3 + 3*a^2*v").unwrap();
        assert_eq!(p.to_string(), "a^3 + 3*a^2*v + 2*a*v^2");
        let q = r.parse(&p.to_string()).unwrap();
        assert_eq!(p, q);

        let r2 = ring();
        let s = r2.parse("a^2 + v*a - 1/3 + b^4").unwrap();
        assert_eq!(r2.parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn parse_rational_coeffs_and_parens() {
        let r = ring();
        let p = r.parse("1/2*(v + a)^2 - v*a").unwrap();
        let expected = r.parse("1/2*v^2 + 1/2*a^2").unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn one_plus_one_is_two() {
        let r = ring();
        let two = r.one().add(&r.one());
        assert_eq!(two, r.constant(rat(2)));
    }

    #[test]
    fn x_minus_x_is_zero_with_no_stored_term() {
        let r = ring();
        let x = r.var(0);
        let z = x.sub(&x);
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn product_of_binomials() {
        let r = PolyRing::new(vec!["x", "y"]);
        let p = r.parse("x + y").unwrap();
        let q = r.parse("x - y").unwrap();
        assert_eq!(p.mul(&q), r.parse("x^2 - y^2").unwrap());
    }

    #[test]
    fn weighted_degree_examples() {
        // weights (2,2): v*a has degree 4; v + a homogeneous of degree 2;
        // v + a^2 inhomogeneous; constants have degree 0.
        let r = PolyRing::new(vec!["v", "a"]);
        let g = Grading::scalar(vec![2, 2]);
        assert_eq!(
            r.parse("v*a").unwrap().weighted_degree(&g),
            Homogeneity::Homogeneous(vec![4])
        );
        assert_eq!(
            r.parse("v + a").unwrap().weighted_degree(&g),
            Homogeneity::Homogeneous(vec![2])
        );
        assert_eq!(
            r.parse("v + a^2").unwrap().weighted_degree(&g),
            Homogeneity::Inhomogeneous
        );
        assert_eq!(
            r.parse("1").unwrap().weighted_degree(&g),
            Homogeneity::Homogeneous(vec![0])
        );
        // zero polynomial counts as homogeneous (degree-0 marker)
        assert_eq!(r.zero().weighted_degree(&g), Homogeneity::Homogeneous(vec![0]));
    }

    #[test]
    fn derivative_basic() {
        let r = PolyRing::new(vec!["x", "y"]);
        let p = r.parse("x^3*y + 2*x").unwrap();
        assert_eq!(p.derivative(0), r.parse("3*x^2*y + 2").unwrap());
        assert_eq!(p.derivative(1), r.parse("x^3").unwrap());
    }

    #[test]
    fn substitution_composes() {
        let r = PolyRing::new(vec!["x", "y"]);
        let s = PolyRing::new(vec!["u"]);
        let p = r.parse("x^2 + y").unwrap();
        let images = vec![s.parse("u + 1").unwrap(), s.parse("u^2").unwrap()];
        let q = p.substitute(&images, &s);
        assert_eq!(q, s.parse("2*u^2 + 2*u + 1").unwrap());
    }

    #[test]
    fn map_vars_embed_and_restrict() {
        let r = PolyRing::new(vec!["x", "y"]);
        let big = r.extend(vec!["t"]);
        let p = r.parse("x*y + 1").unwrap();
        let q = p.map_vars(&big).unwrap();
        assert_eq!(q.to_string(), "x*y + 1");
        let back = q.map_vars(&r).unwrap();
        assert_eq!(back, p);
        // a polynomial using t cannot be restricted
        let t = big.parse("t*x").unwrap();
        assert!(t.map_vars(&r).is_err());
    }

    proptest::proptest! {
        #[test]
        fn ring_axioms(a_seed in 0u64..5000, b_seed in 0u64..5000, c_seed in 0u64..5000) {
            let r = PolyRing::new(vec!["x", "y"]);
            let gen = |seed: u64| {
                let mut p = r.zero();
                let mut s = seed;
                for _ in 0..4 {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let e0 = ((s >> 8) % 3) as u32;
                    let e1 = ((s >> 16) % 3) as u32;
                    let c = ((s >> 24) % 7) as i64 - 3;
                    p.add_term(vec![e0, e1], rat(c));
                }
                p
            };
            let (a, b, c) = (gen(a_seed), gen(b_seed), gen(c_seed));
            proptest::prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            proptest::prop_assert_eq!(a.mul(&b), b.mul(&a));
            proptest::prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            proptest::prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn weighted_degree_multiplicative(da in 0i64..4, db in 0i64..4) {
            // homogeneous pieces multiply additively in degree
            let r = PolyRing::new(vec!["x", "y"]);
            let g = Grading::scalar(vec![2, 2]);
            let hom = |d: i64| {
                let mut p = r.zero();
                for k in 0..=d {
                    p.add_term(vec![k as u32, (d - k) as u32], rat(k + 1));
                }
                p
            };
            let (p, q) = (hom(da), hom(db));
            let pq = p.mul(&q);
            if let Homogeneity::Homogeneous(d) = pq.weighted_degree(&g) {
                proptest::prop_assert_eq!(d, vec![2 * (da + db)]);
            } else {
                proptest::prop_assert!(false, "product of homogeneous pieces must be homogeneous");
            }
        }
    }
}
