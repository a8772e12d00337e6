//! Formal power-series expansion of rational functions in one variable `t`,
//! used for Poincaré-series bookkeeping and Molien-series cross-checks.

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, PolyRing, Rat};
use num::{One, Zero};
use std::fmt;

/// A rational function `numerator/denominator` in one variable with
/// `denominator(0) != 0`, expandable as a formal power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    num: Vec<Rat>,
    den: Vec<Rat>,
}

fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.len() > 1 && v.last().map(Zero::is_zero).unwrap_or(false) {
        v.pop();
    }
    v
}

impl RationalSeries {
    pub fn new(num: Vec<Rat>, den: Vec<Rat>) -> Result<RationalSeries> {
        let num = trim(num);
        let den = trim(den);
        if den.is_empty() || den[0].is_zero() {
            return Err(Error::domain(
                "series denominator has zero constant term".to_string(),
            ));
        }
        Ok(RationalSeries { num, den })
    }

    /// Build from univariate polynomials (any single-variable ring).
    pub fn from_polys(num: &MultiPoly, den: &MultiPoly) -> Result<RationalSeries> {
        RationalSeries::new(univariate_coeffs(num)?, univariate_coeffs(den)?)
    }

    /// Parse the numerator and denominator from polynomial text in `t`.
    pub fn parse(num: &str, den: &str) -> Result<RationalSeries> {
        let ring = PolyRing::new(vec!["t"]);
        RationalSeries::from_polys(&ring.parse(num)?, &ring.parse(den)?)
    }

    pub fn numerator(&self) -> &[Rat] {
        &self.num
    }

    pub fn denominator(&self) -> &[Rat] {
        &self.den
    }

    /// Exact coefficients `c_0..c_n` of the formal expansion, via the
    /// recurrence `c_k = (num_k - sum_{j<k} c_j den_{k-j}) / den_0`.
    pub fn expand(&self, n: usize) -> Vec<Rat> {
        let mut out: Vec<Rat> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.num.get(k).cloned().unwrap_or_else(Rat::zero);
            for (j, c) in out.iter().enumerate() {
                if let Some(d) = self.den.get(k - j) {
                    acc -= c.clone() * d.clone();
                }
            }
            out.push(acc / self.den[0].clone());
        }
        out
    }

    /// Integer coefficients, erroring if any coefficient is non-integral.
    pub fn expand_integers(&self, n: usize) -> Result<Vec<i64>> {
        self.expand(n)
            .into_iter()
            .map(|c| {
                if c.denom().is_one() {
                    c.numer()
                        .to_string()
                        .parse::<i64>()
                        .map_err(|_| Error::domain("series coefficient out of i64 range"))
                } else {
                    Err(Error::domain("series coefficient is not an integer"))
                }
            })
            .collect()
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = PolyRing::new(vec!["t"]);
        let poly = |coeffs: &[Rat]| {
            let mut p = ring.zero();
            for (i, c) in coeffs.iter().enumerate() {
                p.add_term(vec![i as u32], c.clone());
            }
            p
        };
        write!(f, "({})/({})", poly(&self.num), poly(&self.den))
    }
}

/// Coefficient vector of a univariate polynomial (errors if more than one
/// variable carries a nonzero exponent).
pub fn univariate_coeffs(p: &MultiPoly) -> Result<Vec<Rat>> {
    if p.num_vars() != 1 {
        // Permit multi-variable rings only when the polynomial actually uses
        // at most one variable.
        let mut used: Option<usize> = None;
        for (e, _) in p.terms() {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    match used {
                        None => used = Some(i),
                        Some(j) if j == i => {}
                        Some(_) => {
                            return Err(Error::structural(
                                "expected a univariate polynomial".to_string(),
                            ))
                        }
                    }
                }
            }
        }
        let var = used.unwrap_or(0);
        let deg = p.degree_in(var) as usize;
        let mut out = vec![Rat::zero(); deg + 1];
        for (e, c) in p.terms() {
            out[e[var] as usize] = c.clone();
        }
        return Ok(out);
    }
    let deg = p.degree_in(0) as usize;
    let mut out = vec![Rat::zero(); deg + 1];
    for (e, c) in p.terms() {
        out[e[0] as usize] = c.clone();
    }
    Ok(out)
}

/// Multiply the truncated series `coeffs` by `(1 - t^2)^r` and, if the
/// product is a polynomial comfortably inside the window (all coefficients
/// beyond its degree vanish up to the window end, with at least two spare
/// entries), return that numerator polynomial's coefficients.
pub fn detect_closed_form(coeffs: &[Rat], r: usize) -> Option<Vec<Rat>> {
    let n = coeffs.len();
    let mut prod: Vec<Rat> = coeffs.to_vec();
    for _ in 0..r {
        // multiply by (1 - t^2), truncated to the window
        let mut next = vec![Rat::zero(); n];
        for (i, c) in prod.iter().enumerate() {
            next[i] += c.clone();
            if i + 2 < n {
                next[i + 2] -= c.clone();
            }
        }
        prod = next;
    }
    let last_nonzero = prod.iter().rposition(|c| !c.is_zero());
    match last_nonzero {
        None => Some(vec![Rat::zero()]),
        Some(h) if h + 2 < n => Some(prod[..=h].to_vec()),
        _ => None,
    }
}

/// Render a closed form `p(t)/(1-t^2)^r` as canonical text.
pub fn closed_form_string(num: &[Rat], r: usize) -> String {
    let ring = PolyRing::new(vec!["t"]);
    let mut p = ring.zero();
    for (i, c) in num.iter().enumerate() {
        p.add_term(vec![i as u32], c.clone());
    }
    if r == 0 {
        format!("{p}")
    } else if r == 1 {
        format!("({p})/(1 - t^2)")
    } else {
        format!("({p})/(1 - t^2)^{r}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn geometric_series() {
        let s = RationalSeries::parse("1", "1 - t").unwrap();
        assert_eq!(s.expand_integers(3).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn quartic_denominator_expansions() {
        let s = RationalSeries::parse("(1 + t^2)^2", "1 - t^4").unwrap();
        assert_eq!(
            s.expand_integers(10).unwrap(),
            vec![1, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2]
        );
        let s2 = RationalSeries::parse("1 + t^2 + t^4 + t^6", "1 - t^4").unwrap();
        assert_eq!(
            s2.expand_integers(10).unwrap(),
            vec![1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 2]
        );
    }

    #[test]
    fn zero_constant_denominator_rejected() {
        assert!(RationalSeries::parse("1", "t").is_err());
    }

    #[test]
    fn closed_form_detection_round_trip() {
        // (1 + t^2 + t^4)/(1 - t^2) expanded, then re-detected
        let s = RationalSeries::parse("1 + t^2 + t^4", "1 - t^2").unwrap();
        let coeffs = s.expand(20);
        let num = detect_closed_form(&coeffs, 1).expect("closed form");
        assert_eq!(num, vec![rat(1), rat(0), rat(1), rat(0), rat(1)]);
        assert_eq!(closed_form_string(&num, 1), "(t^4 + t^2 + 1)/(1 - t^2)");
    }

    #[test]
    fn closed_form_detection_refuses_mismatched_rank() {
        // 1/(1-t^2)^2 cannot be written with a single (1-t^2) factor inside
        // a window of length 8 — the product keeps growing.
        let s = RationalSeries::parse("1", "(1 - t^2)^2").unwrap();
        let coeffs = s.expand(8);
        assert!(detect_closed_form(&coeffs, 1).is_none());
        assert!(detect_closed_form(&coeffs, 2).is_some());
    }

    proptest::proptest! {
        #[test]
        fn expansion_satisfies_recurrence(
            num in proptest::collection::vec(-5i64..6, 1..5),
            den in proptest::collection::vec(-5i64..6, 1..5),
            n in 1usize..12,
        ) {
            let mut den = den;
            if den[0] == 0 { den[0] = 1; }
            let s = RationalSeries::new(
                num.iter().map(|&c| rat(c)).collect(),
                den.iter().map(|&c| rat(c)).collect(),
            ).unwrap();
            let c = s.expand(n);
            // den * (sum c_i t^i) = num  (mod t^{n+1})
            for k in 0..=n {
                let mut acc = Rat::zero();
                for j in 0..=k {
                    let d = s.denominator().get(k - j).cloned().unwrap_or_else(Rat::zero);
                    acc += c[j].clone() * d;
                }
                let expected = s.numerator().get(k).cloned().unwrap_or_else(Rat::zero);
                proptest::prop_assert_eq!(acc, expected);
            }
        }
    }
}
