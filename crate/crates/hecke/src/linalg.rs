//! Exact dense linear algebra over Q(v).
//!
//! Elimination uses the deterministic pivot rule "first nonzero by row-major
//! order" so kernels and echelon forms are reproducible across runs.

use crate::ratfun::{ExactFieldError, RationalFunction};

#[derive(Clone, Debug)]
pub struct FieldMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<RationalFunction>,
}

impl FieldMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![RationalFunction::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FieldMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = RationalFunction::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        FieldMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[RationalFunction] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-reduced echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, col)].inv().unwrap();
            for c in col..m.cols {
                m[(r, c)] = &m[(r, c)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, col)].is_zero() {
                    let f = m[(i, col)].clone();
                    for c in col..m.cols {
                        let t = &m[(r, c)] * &f;
                        m[(i, c)] = &m[(i, c)] - &t;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, in reduced echelon form: one vector per free
    /// column, with entry 1 at that column.
    pub fn kernel(&self) -> Vec<Vec<RationalFunction>> {
        let (m, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![RationalFunction::zero(); self.cols];
            vec[free] = RationalFunction::one();
            for (r, &pc) in pivots.iter().enumerate() {
                vec[pc] = -&m[(r, free)];
            }
            basis.push(vec);
        }
        basis
    }

    /// One exact solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[RationalFunction]) -> Option<Vec<RationalFunction>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FieldMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![RationalFunction::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn invert(&self) -> Result<FieldMatrix, ExactFieldError> {
        assert_eq!(self.rows, self.cols, "invert requires a square matrix");
        let n = self.rows;
        let mut aug = FieldMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = RationalFunction::one();
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(r, &c)| c != r) {
            return Err(ExactFieldError::SingularMatrix);
        }
        let mut out = FieldMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = m[(i, n + j)].clone();
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[RationalFunction]) -> Vec<RationalFunction> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = RationalFunction::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !x[j].is_zero() {
                        acc = &acc + &(&self[(i, j)] * &x[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, rhs: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = FieldMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if rhs[(k, j)].is_zero() {
                        continue;
                    }
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for FieldMatrix {
    type Output = RationalFunction;
    fn index(&self, (i, j): (usize, usize)) -> &RationalFunction {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FieldMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RationalFunction {
        &mut self.data[i * self.cols + j]
    }
}

/// Incremental row reduction for rank computations on large matrices whose
/// rank is far below the row count. Rows are offered once, in order.
pub struct RowReducer {
    cols: usize,
    /// (pivot column, row scaled to pivot 1), kept sorted by insertion order.
    pivots: Vec<(usize, Vec<RationalFunction>)>,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the stored pivots; if a nonzero remainder is left
    /// it becomes a new pivot and `true` is returned.
    pub fn offer(&mut self, mut row: Vec<RationalFunction>) -> bool {
        assert_eq!(row.len(), self.cols);
        for (pc, prow) in &self.pivots {
            if !row[*pc].is_zero() {
                let f = row[*pc].clone();
                for j in 0..self.cols {
                    if !prow[j].is_zero() {
                        let t = &prow[j] * &f;
                        row[j] = &row[j] - &t;
                    }
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pc].inv().unwrap();
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.pivots.push((pc, row));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, 'v').unwrap()
    }

    #[test]
    fn identity_kernel_empty() {
        assert!(FieldMatrix::identity(3).kernel().is_empty());
        assert_eq!(FieldMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn invert_identity() {
        let inv = FieldMatrix::identity(4).invert().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(inv[(i, j)].is_one(), i == j);
            }
        }
    }

    #[test]
    fn invert_two_by_two_matches_cofactor_oracle() {
        // [[1, -v], [-v, 1]]: cofactor inverse is 1/(1-v^2) * [[1, v], [v, 1]].
        let m = FieldMatrix::from_rows(vec![
            vec![rf("1"), rf("-v")],
            vec![rf("-v"), rf("1")],
        ]);
        let inv = m.invert().unwrap();
        let det_inv = rf("1/(1-v^2)");
        assert_eq!(inv[(0, 0)], det_inv);
        assert_eq!(inv[(0, 1)], &rf("v") * &det_inv);
        assert_eq!(inv[(1, 0)], &rf("v") * &det_inv);
        assert_eq!(inv[(1, 1)], det_inv);
        // exactness: inv * m = identity
        let prod = inv.matmul(&m);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(prod[(i, j)].is_one(), i == j);
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = FieldMatrix::from_rows(vec![
            vec![rf("1"), rf("v")],
            vec![rf("v"), rf("v^2")],
        ]);
        assert!(m.invert().is_err());
        assert_eq!(m.kernel().len(), 1);
    }

    #[test]
    fn inconsistent_solve_signals() {
        let m = FieldMatrix::from_rows(vec![vec![rf("1")], vec![rf("1")]]);
        assert!(m.solve(&[rf("1"), rf("2")]).is_none());
        assert!(m.solve(&[rf("1"), rf("1")]).is_some());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = FieldMatrix::from_rows(vec![
            vec![rf("1"), rf("v"), rf("v^2")],
            vec![rf("v"), rf("v^2"), rf("v^3")],
        ]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        assert_eq!(m.rank() + ker.len(), 3);
        for k in &ker {
            assert!(m.mul_vec(k).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn row_reducer_matches_rref_rank() {
        let rows = vec![
            vec![rf("1"), rf("v"), rf("1+v")],
            vec![rf("v"), rf("v^2"), rf("v+v^2")],
            vec![rf("1"), rf("0"), rf("1")],
        ];
        let m = FieldMatrix::from_rows(rows.clone());
        let mut rr = RowReducer::new(3);
        for r in rows {
            rr.offer(r);
        }
        assert_eq!(rr.rank(), m.rank());
    }
}
