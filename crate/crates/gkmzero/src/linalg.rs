//! Dense exact linear algebra over the rationals: reduced row echelon form,
//! rank, nullspace, and linear solves.  All pivoting is deterministic (first
//! nonzero entry), so downstream reports are reproducible byte-for-byte.

use crate::poly::Rat;
use num::Zero;

/// A dense rational matrix (rows of equal length).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Vec<Rat>>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> QMat {
        QMat { rows, cols, data: vec![vec![Rat::zero(); cols]; rows] }
    }

    pub fn from_rows(data: Vec<Vec<Rat>>) -> QMat {
        let rows = data.len();
        let cols = data.first().map(Vec::len).unwrap_or(0);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        QMat { rows, cols, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i]
    }

    pub fn push_row(&mut self, row: Vec<Rat>) {
        assert_eq!(row.len(), self.cols);
        self.data.push(row);
        self.rows += 1;
    }

    /// In-place Gauss–Jordan; returns the pivot column of each pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // first nonzero entry in column c at or below row r
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].clone();
            for j in c..self.cols {
                let v = std::mem::replace(&mut self.data[r][j], Rat::zero());
                self.data[r][j] = v / inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let factor = self.data[i][c].clone();
                    for j in c..self.cols {
                        let sub = factor.clone() * self.data[r][j].clone();
                        self.data[i][j] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace (solutions of M·x = 0), one vector per
    /// free column, in ascending free-column order.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::from_integer(1.into());
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -m.data[prow][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of M·x = b, if consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the constants column: inconsistent
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.data[prow][self.cols].clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = Rat::zero();
                for (a, b) in row.iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn m(rows: &[&[i64]]) -> QMat {
        QMat::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect(),
        )
    }

    #[test]
    fn rank_of_singular_matrix() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn nullspace_dimension_and_membership() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = a.solve(&[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[rat(0), rat(1)]).is_none());
        assert!(b.solve(&[rat(1), rat(2)]).is_some());
    }

    proptest::proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-4i64..5, 12)) {
            let rows: Vec<Vec<Rat>> = entries.chunks(4).map(|ch| ch.iter().map(|&v| rat(v)).collect()).collect();
            let a = QMat::from_rows(rows);
            let rank = a.rank();
            let nullity = a.nullspace().len();
            proptest::prop_assert_eq!(rank + nullity, a.cols);
            for v in a.nullspace() {
                proptest::prop_assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
            }
        }
    }
}
