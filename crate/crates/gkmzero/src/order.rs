//! Monomial orders: total, multiplicative well-orders on exponent vectors.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A monomial order on exponent vectors of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Pure lexicographic.
    Lex,
    /// Total degree, ties by lexicographic.
    GrLex,
    /// Total degree, ties by reverse lexicographic (the last nonzero entry
    /// of the exponent difference is negative for the larger monomial).
    GrevLex,
    /// Weighted degree with strictly positive weights, ties by grevlex.
    WeightedGrevLex(Vec<i64>),
    /// Block order eliminating a variable subset: compare the eliminated
    /// block by grevlex first, then the remaining block by grevlex.
    Elim { eliminate: BTreeSet<usize> },
}

impl MonomialOrder {
    /// Weighted order constructor; weights must be strictly positive for the
    /// order to be a well-order.
    pub fn weighted(weights: Vec<i64>) -> Result<MonomialOrder> {
        if weights.iter().any(|&w| w <= 0) {
            return Err(Error::structural(
                "weighted monomial order requires strictly positive weights",
            ));
        }
        Ok(MonomialOrder::WeightedGrevLex(weights))
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::GrLex => total_deg(a).cmp(&total_deg(b)).then_with(|| lex(a, b)),
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::WeightedGrevLex(w) => {
                let da: i64 = a.iter().zip(w).map(|(&e, &wi)| e as i64 * wi).sum();
                let db: i64 = b.iter().zip(w).map(|(&e, &wi)| e as i64 * wi).sum();
                da.cmp(&db).then_with(|| grevlex(a, b))
            }
            MonomialOrder::Elim { eliminate } => {
                let proj =
                    |v: &[u32], keep: bool| -> Vec<u32> {
                        v.iter()
                            .enumerate()
                            .filter(|(i, _)| eliminate.contains(i) != keep)
                            .map(|(_, &e)| e)
                            .collect()
                    };
                let (ae, be) = (proj(a, false), proj(b, false));
                grevlex(&ae, &be).then_with(|| {
                    let (ak, bk) = (proj(a, true), proj(b, true));
                    grevlex(&ak, &bk)
                })
            }
        }
    }
}

fn total_deg(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    match total_deg(a).cmp(&total_deg(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    // a > b iff the last nonzero entry of a - b is negative
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::GrLex => write!(f, "grlex"),
            MonomialOrder::GrevLex => write!(f, "grevlex"),
            MonomialOrder::WeightedGrevLex(w) => {
                let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "wgrevlex[{}]", ws.join(","))
            }
            MonomialOrder::Elim { eliminate } => {
                let es: Vec<String> = eliminate.iter().map(|x| x.to_string()).collect();
                write!(f, "elim{{{}}}+grevlex", es.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_textbook_comparisons() {
        let o = MonomialOrder::GrevLex;
        // x > y > z for single variables (vars indexed 0,1,2)
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 1, 0], &[0, 0, 1]), Ordering::Greater);
        // classic: x*z vs y^2 under grevlex — y^2 > xz
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        // degree dominates
        assert_eq!(o.cmp(&[0, 0, 3], &[1, 1, 0]), Ordering::Greater);
    }

    #[test]
    fn lex_vs_grlex_disagree() {
        // x^3 vs x*y^2: lex says x^3 > x*y^2; grlex compares degree first (equal), then lex
        assert_eq!(MonomialOrder::Lex.cmp(&[3, 0], &[1, 2]), Ordering::Greater);
        assert_eq!(MonomialOrder::GrLex.cmp(&[3, 0], &[1, 2]), Ordering::Greater);
        // but 1 vs x: grlex puts x bigger
        assert_eq!(MonomialOrder::GrLex.cmp(&[0, 0], &[1, 0]), Ordering::Less);
    }

    #[test]
    fn elimination_order_prioritizes_block() {
        // eliminate variable 2 (say t) — any monomial with t beats any without
        let o = MonomialOrder::Elim { eliminate: [2usize].into_iter().collect() };
        assert_eq!(o.cmp(&[0, 0, 1], &[5, 5, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[3, 0, 1], &[0, 1, 2]), Ordering::Less);
        // within the non-eliminated block, grevlex
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 1, 1]), Ordering::Greater);
    }

    #[test]
    fn weighted_rejects_nonpositive() {
        assert!(MonomialOrder::weighted(vec![2, 0]).is_err());
        assert!(MonomialOrder::weighted(vec![2, 2]).is_ok());
    }

    fn random_exps(seed: u64, n: usize) -> Vec<u32> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 33) % 4) as u32
            })
            .collect()
    }

    proptest::proptest! {
        #[test]
        fn orders_are_total_multiplicative_well_orders(
            sa in 0u64..10_000, sb in 0u64..10_000, sc in 0u64..10_000,
        ) {
            let orders = vec![
                MonomialOrder::Lex,
                MonomialOrder::GrLex,
                MonomialOrder::GrevLex,
                MonomialOrder::weighted(vec![2, 4, 2]).unwrap(),
                MonomialOrder::Elim { eliminate: [1usize].into_iter().collect() },
            ];
            let a = random_exps(sa, 3);
            let b = random_exps(sb, 3);
            let c = random_exps(sc, 3);
            for o in &orders {
                // antisymmetry
                proptest::prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
                // multiplicativity: a < b implies a+c < b+c
                let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
                let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
                proptest::prop_assert_eq!(o.cmp(&a, &b), o.cmp(&ac, &bc));
                // 1 is minimal
                let one = vec![0u32; 3];
                proptest::prop_assert!(o.cmp(&a, &one) != Ordering::Less);
                // equality only for equal vectors
                if a != b {
                    proptest::prop_assert!(o.cmp(&a, &b) != Ordering::Equal);
                }
            }
        }
    }
}
