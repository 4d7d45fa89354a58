//! Exact sparse Gaussian elimination over ℚ(√−1).

use std::collections::BTreeMap;

use crate::paramfield::GaussianRational;

type G = GaussianRational;

/// A sparse row: column index to nonzero entry.
pub type SparseRow = BTreeMap<usize, G>;

/// Incrementally maintained reduced row echelon form.
///
/// Every stored row has a pivot entry equal to 1 at its smallest column, and
/// no other stored row has a nonzero entry in that column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

fn axpy(target: &mut SparseRow, k: &G, src: &SparseRow) {
    for (c, v) in src {
        let slot = target.entry(*c).or_default();
        *slot += &(k * v);
        if slot.is_zero() {
            target.remove(c);
        }
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `row` against the stored pivots.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut r = row.clone();
        r.retain(|_, v| !v.is_zero());
        let mut cursor = 0usize;
        loop {
            let next = r.range(cursor..).find(|(c, _)| self.rows.contains_key(c)).map(|(c, v)| (*c, v.clone()));
            match next {
                None => break,
                Some((c, v)) => {
                    axpy(&mut r, &-v, &self.rows[&c]);
                    cursor = c + 1;
                }
            }
        }
        r
    }

    /// Insert a row; returns `true` when it increased the rank.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let r = self.reduce(row);
        let Some((&p, pv)) = r.iter().next() else {
            return false;
        };
        let inv = pv.inv().expect("nonzero pivot");
        let r: SparseRow = r.iter().map(|(c, v)| (*c, v * &inv)).collect();
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for k in keys {
            let f = self.rows[&k].get(&p).cloned();
            if let Some(f) = f {
                let row_k = self.rows.get_mut(&k).unwrap();
                axpy(row_k, &-f, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn pivots(&self) -> impl Iterator<Item = (&usize, &SparseRow)> {
        self.rows.iter()
    }

    /// Basis of the solution space of `row · x = 0` for all stored rows.
    pub fn nullspace(&self) -> Vec<Vec<G>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![G::zero(); self.ncols];
                v[f] = G::one();
                for (p, row) in &self.rows {
                    if let Some(x) = row.get(&f) {
                        v[*p] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank of a list of sparse rows.
pub fn rank(rows: &[SparseRow], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Null space basis of the matrix whose rows are given.
pub fn nullspace(rows: &[SparseRow], ncols: usize) -> Vec<Vec<G>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.nullspace()
}

/// Convert a dense vector to a sparse row.
pub fn sparse(v: &[G]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect()
}

/// Apply a sparse row to a dense vector.
pub fn dot(row: &SparseRow, v: &[G]) -> G {
    let mut acc = G::zero();
    for (c, x) in row {
        acc += &(x * &v[*c]);
    }
    acc
}

/// A nonzero solution of the homogeneous system, if one exists.
pub fn kernel_witness(rows: &[SparseRow], ncols: usize) -> Option<Vec<G>> {
    nullspace(rows, ncols).into_iter().next()
}

/// Determinant of a square dense matrix.
pub fn determinant(m: &[Vec<G>]) -> G {
    let n = m.len();
    let mut a: Vec<Vec<G>> = m.to_vec();
    let mut det = G::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return G::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        let inv = p.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= &d;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseRow {
        sparse(&v.iter().map(|&x| G::from_int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])];
        assert_eq!(rank(&rows, 3), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(dot(r, &ns[0]).is_zero());
        }
    }

    #[test]
    fn complex_entries() {
        let i = G::i();
        let mut r1 = SparseRow::new();
        r1.insert(0, G::one());
        r1.insert(1, i.clone());
        let mut r2 = SparseRow::new();
        r2.insert(0, i.clone());
        r2.insert(1, G::from_int(-1));
        // second row is i times the first
        assert_eq!(rank(&[r1, r2], 2), 1);
    }

    #[test]
    fn determinant_small() {
        let m: Vec<Vec<G>> = vec![vec![0, 2, 1], vec![1, 1, 0], vec![3, 0, 1]]
            .into_iter()
            .map(|r| r.into_iter().map(G::from_int).collect())
            .collect();
        assert_eq!(determinant(&m), G::from_int(-5));
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let rows = vec![row(&[1, 0]), row(&[1, 1])];
        assert!(nullspace(&rows, 2).is_empty());
        assert!(kernel_witness(&rows, 2).is_none());
    }
}
