//! Finite matrix groups acting on polynomial rings by linear substitution:
//! Reynolds averaging, graded invariant dimensions by exact linear algebra,
//! and the trace-series cross-check.

use crate::error::{Error, Result};
use crate::gkm::monomials_of_total_degree;
use crate::linalg::QMat;
use crate::poly::{rat, rat_frac, MultiPoly, PolyRing, Rat};
use crate::series::{univariate_coeffs, RationalSeries};
use itertools::Itertools;
use num::Zero;
use std::collections::BTreeMap;

/// A finite group of integer matrices, closed under multiplication, with
/// optional paired vertex permutations for transport fixtures.
#[derive(Clone, Debug)]
pub struct FiniteActionGroup {
    pub rank: usize,
    pub elements: Vec<Vec<Vec<i64>>>,
    pub vertex_perms: Option<Vec<Vec<usize>>>,
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..n).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

impl FiniteActionGroup {
    /// Validate closure, the identity, and inverses exhaustively.
    pub fn new(
        elements: Vec<Vec<Vec<i64>>>,
        vertex_perms: Option<Vec<Vec<usize>>>,
    ) -> Result<FiniteActionGroup> {
        if elements.is_empty() {
            return Err(Error::structural("a group needs at least the identity"));
        }
        let rank = elements[0].len();
        for m in &elements {
            if m.len() != rank || m.iter().any(|row| row.len() != rank) {
                return Err(Error::structural("group matrices must be square, same size"));
            }
        }
        let mut distinct = std::collections::BTreeSet::new();
        for m in &elements {
            if !distinct.insert(m.clone()) {
                return Err(Error::structural("duplicate group element"));
            }
        }
        let id = identity_matrix(rank);
        if !distinct.contains(&id) {
            return Err(Error::structural("identity matrix missing"));
        }
        for a in &elements {
            let mut has_inverse = false;
            for b in &elements {
                let prod = mat_mul(a, b);
                if !distinct.contains(&prod) {
                    return Err(Error::structural("group is not closed under product"));
                }
                if prod == id {
                    has_inverse = true;
                }
            }
            if !has_inverse {
                return Err(Error::structural("element without inverse"));
            }
        }
        if let Some(perms) = &vertex_perms {
            if perms.len() != elements.len() {
                return Err(Error::structural(
                    "vertex permutations must pair one-to-one with elements",
                ));
            }
            for p in perms {
                let mut seen = vec![false; p.len()];
                for &i in p {
                    if i >= p.len() || seen[i] {
                        return Err(Error::structural("invalid vertex permutation"));
                    }
                    seen[i] = true;
                }
            }
        }
        Ok(FiniteActionGroup { rank, elements, vertex_perms })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The group of all permutation matrices on n letters.
    pub fn symmetric_group(n: usize) -> FiniteActionGroup {
        let elements = (0..n)
            .permutations(n)
            .map(|p| {
                (0..n)
                    .map(|i| (0..n).map(|j| i64::from(p[i] == j)).collect())
                    .collect()
            })
            .collect();
        FiniteActionGroup::new(elements, None).expect("permutation matrices form a group")
    }

    /// The trivial group in the given rank.
    pub fn trivial(rank: usize) -> FiniteActionGroup {
        FiniteActionGroup::new(vec![identity_matrix(rank)], None)
            .expect("the identity alone is a group")
    }

    /// Substitution images of the variables under one element: the i-th
    /// variable maps to the i-th entry of (matrix times variable vector).
    fn images(&self, ring: &PolyRing, m: &[Vec<i64>]) -> Vec<MultiPoly> {
        m.iter()
            .map(|row| {
                let mut f = ring.zero();
                for (q, &a) in row.iter().enumerate() {
                    if a != 0 {
                        f = f.add(&ring.var(q).scale(&rat(a)));
                    }
                }
                f
            })
            .collect()
    }
}

/// The average of p over all group elements acting by substitution; the
/// result is invariant.
pub fn reynolds(p: &MultiPoly, g: &FiniteActionGroup) -> Result<MultiPoly> {
    let ring = p.ring();
    if ring.num_vars() != g.rank {
        return Err(Error::structural("polynomial ring rank does not match the group"));
    }
    let mut sum = ring.zero();
    for m in &g.elements {
        let images = g.images(&ring, m);
        sum = sum.add(&p.substitute(&images, &ring));
    }
    Ok(sum.scale(&rat_frac(1, g.order() as i64)))
}

/// Dimension of the degree-d invariants, by the fixed space of the induced
/// action on the degree-d monomial basis: the averaging operator projects
/// onto the invariants, so their dimension is the nullity of
/// (average - identity).
pub fn invariant_dim(g: &FiniteActionGroup, d: u32) -> Result<usize> {
    let ring = PolyRing::new((1..=g.rank).map(|i| format!("x{i}")).collect::<Vec<_>>());
    let mons = monomials_of_total_degree(g.rank, d);
    if mons.is_empty() {
        // rank 0: only the constants in degree 0
        return Ok(usize::from(d == 0 && g.rank == 0));
    }
    let index: BTreeMap<&Vec<u32>, usize> =
        mons.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let scale = rat_frac(1, g.order() as i64);
    let mut avg = vec![vec![Rat::zero(); mons.len()]; mons.len()];
    for m in &g.elements {
        let images = g.images(&ring, m);
        for (col, e) in mons.iter().enumerate() {
            let acted = ring.monomial(e.clone(), rat(1)).substitute(&images, &ring);
            for (exp, c) in acted.terms() {
                let row = *index
                    .get(exp)
                    .ok_or_else(|| Error::structural("action does not preserve the degree"))?;
                avg[row][col] = avg[row][col].clone() + c.clone() * scale.clone();
            }
        }
    }
    for (i, row) in avg.iter_mut().enumerate() {
        row[i] = row[i].clone() - rat(1);
    }
    Ok(mons.len() - QMat::from_rows(avg).rank())
}

/// Per-degree invariant dimensions via the averaged trace series
/// 1/|G| sum_g 1/det(1 - t g) — the independent counting route.
pub fn molien_dims(g: &FiniteActionGroup, dmax: usize) -> Result<Vec<usize>> {
    let tring = PolyRing::new(vec!["t"]);
    let t = tring.var(0);
    let mut acc = vec![Rat::zero(); dmax + 1];
    for m in &g.elements {
        // det(I - t m) over the t-ring
        let mut a = crate::lie::MatrixElt::zero(&tring, g.rank);
        for i in 0..g.rank {
            for j in 0..g.rank {
                let mut e = t.scale(&rat(-m[i][j]));
                if i == j {
                    e = e.add(&tring.one());
                }
                a.entries[i][j] = e;
            }
        }
        let det = crate::lie::determinant(&a);
        let den = univariate_coeffs(&det)?;
        let series = RationalSeries::new(vec![rat(1)], den)?;
        for (k, c) in series.expand(dmax).into_iter().enumerate() {
            acc[k] += c;
        }
    }
    let order = rat(g.order() as i64);
    let mut out = Vec::with_capacity(dmax + 1);
    for c in acc {
        let avg = c / order.clone();
        if !avg.is_integer() || avg < Rat::zero() {
            return Err(Error::structural(
                "trace series averaged to a non-integer dimension",
            ));
        }
        let n: i64 = avg.to_integer().try_into().map_err(|_| {
            Error::structural("trace series coefficient out of range")
        })?;
        out.push(n as usize);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{char_poly_on_section, MatrixElt};

    fn s2() -> FiniteActionGroup {
        FiniteActionGroup::new(
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![1, 0]],
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn group_validation_rejects_broken_input() {
        // missing identity
        assert!(FiniteActionGroup::new(vec![vec![vec![0, 1], vec![1, 0]]], None).is_err());
        // not closed: a rotation of order four without its square
        assert!(FiniteActionGroup::new(
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, -1], vec![1, 0]],
            ],
            None,
        )
        .is_err());
        // the full rotation group of order four passes
        assert!(FiniteActionGroup::new(
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, -1], vec![1, 0]],
                vec![vec![-1, 0], vec![0, -1]],
                vec![vec![0, 1], vec![-1, 0]],
            ],
            None,
        )
        .is_ok());
    }

    #[test]
    fn reynolds_orbit_averages() {
        let g = s2();
        let ring = PolyRing::new(vec!["x1", "x2"]);
        let avg = reynolds(&ring.var(0), &g).unwrap();
        assert_eq!(format!("{avg}"), "1/2*x1 + 1/2*x2");
        // idempotence
        let again = reynolds(&avg, &g).unwrap();
        assert!(avg.sub(&again).is_zero());
        // invariants are fixed
        let sym = ring.parse("x1*x2").unwrap();
        assert!(reynolds(&sym, &g).unwrap().sub(&sym).is_zero());
        // S3 orbit sum of a square
        let g3 = FiniteActionGroup::symmetric_group(3);
        let ring3 = PolyRing::new(vec!["x1", "x2", "x3"]);
        let avg = reynolds(&ring3.parse("x1^2").unwrap(), &g3).unwrap();
        assert_eq!(format!("{avg}"), "1/3*x1^2 + 1/3*x2^2 + 1/3*x3^2");
    }

    #[test]
    fn reynolds_image_is_pointwise_fixed() {
        let g = FiniteActionGroup::symmetric_group(3);
        let ring = PolyRing::new(vec!["x1", "x2", "x3"]);
        let p = ring.parse("x1^3 + 2*x1*x2 - x3").unwrap();
        let avg = reynolds(&p, &g).unwrap();
        for m in &g.elements {
            let images = g.images(&ring, m);
            assert!(avg.substitute(&images, &ring).sub(&avg).is_zero());
        }
    }

    #[test]
    fn swap_invariants_by_degree() {
        let g = s2();
        let dims: Vec<usize> = (0..4).map(|d| invariant_dim(&g, d).unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 2, 2]);
    }

    #[test]
    fn trivial_group_counts_all_monomials() {
        let g = FiniteActionGroup::trivial(3);
        assert_eq!(invariant_dim(&g, 0).unwrap(), 1);
        assert_eq!(invariant_dim(&g, 2).unwrap(), 6);
        assert_eq!(invariant_dim(&g, 4).unwrap(), 15);
    }

    #[test]
    fn three_letter_invariants_degree_three() {
        let g = FiniteActionGroup::symmetric_group(3);
        assert_eq!(invariant_dim(&g, 3).unwrap(), 3);
    }

    #[test]
    fn fixed_space_route_matches_trace_series_route() {
        let groups = [
            FiniteActionGroup::symmetric_group(2),
            FiniteActionGroup::symmetric_group(3),
            // signed swaps: the symmetry group of a square lattice
            FiniteActionGroup::new(
                vec![
                    vec![vec![1, 0], vec![0, 1]],
                    vec![vec![0, 1], vec![1, 0]],
                    vec![vec![-1, 0], vec![0, 1]],
                    vec![vec![1, 0], vec![0, -1]],
                    vec![vec![-1, 0], vec![0, -1]],
                    vec![vec![0, -1], vec![1, 0]],
                    vec![vec![0, 1], vec![-1, 0]],
                    vec![vec![0, -1], vec![-1, 0]],
                ],
                None,
            )
            .unwrap(),
        ];
        for g in &groups {
            let molien = molien_dims(g, 10).unwrap();
            for (d, &want) in molien.iter().enumerate() {
                assert_eq!(invariant_dim(g, d as u32).unwrap(), want, "degree {d}");
            }
        }
    }

    #[test]
    fn molien_series_of_swap_group() {
        // 1/((1-t)(1-t^2)) = 1,1,2,2,3,3,...
        let dims = molien_dims(&s2(), 7).unwrap();
        assert_eq!(dims, vec![1, 1, 2, 2, 3, 3, 4, 4]);
    }

    #[test]
    fn characteristic_coefficients_are_symmetric_invariants() {
        // on the diagonal parametrization, the coefficients of the
        // characteristic polynomial are (up to sign) the elementary
        // symmetric polynomials, hence fixed by every permutation
        for n in 2..=4usize {
            let ring = PolyRing::new((1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>());
            let mut diag = MatrixElt::zero(&ring, n);
            for i in 0..n {
                diag.entries[i][i] = ring.var(i);
            }
            let coeffs = char_poly_on_section(&diag).unwrap();
            let g = FiniteActionGroup::symmetric_group(n);
            for (k, c) in coeffs.iter().enumerate() {
                // c_k = (-1)^k e_k
                let mut e_k = ring.zero();
                for subset in (0..n).combinations(k + 1) {
                    let mut prod = ring.one();
                    for i in subset {
                        prod = prod.mul(&ring.var(i));
                    }
                    e_k = e_k.add(&prod);
                }
                let signed = if (k + 1) % 2 == 1 { e_k.neg() } else { e_k };
                assert!(c.sub(&signed).is_zero(), "coefficient {k} of gl_{n}");
                assert!(reynolds(c, &g).unwrap().sub(c).is_zero());
            }
        }
    }
}
