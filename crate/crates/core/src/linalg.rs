//! Dense exact linear algebra: row reduction, rank and kernels over a field.

use crate::field::Field;

/// Row-major matrix over `F`.
#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    pub ring: F,
    pub cols: usize,
    pub rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> Matrix<F> {
    pub fn new(ring: &F, cols: usize) -> Self {
        Matrix { ring: ring.clone(), cols, rows: Vec::new() }
    }
    pub fn push_row(&mut self, row: Vec<F::Elem>) {
        assert_eq!(row.len(), self.cols);
        if row.iter().any(|x| !self.ring.is_zero(x)) {
            self.rows.push(row);
        }
    }
    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let r = &self.ring;
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..self.cols {
            let Some(k) = (top..self.rows.len()).find(|&k| !r.is_zero(&self.rows[k][col])) else {
                continue;
            };
            self.rows.swap(top, k);
            let inv = r.inv(&self.rows[top][col]).unwrap();
            for x in self.rows[top].iter_mut() {
                *x = r.mul(x, &inv);
            }
            let pivot_row = self.rows[top].clone();
            for (k, row) in self.rows.iter_mut().enumerate() {
                if k == top || r.is_zero(&row[col]) {
                    continue;
                }
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                    if !r.is_zero(y) {
                        *x = r.sub(x, &r.mul(&f, y));
                    }
                }
            }
            pivots.push(col);
            top += 1;
            if top == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(top);
        pivots
    }
    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
    /// A basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let r = &self.ring;
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![r.zero(); self.cols];
                v[f] = r.one();
                for (row, &pc) in m.rows.iter().zip(&pivots) {
                    v[pc] = r.neg(&row[f]);
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fq, Rationals, Ring};

    #[test]
    fn kernel_of_small_matrix() {
        let r = Fq::prime(7).unwrap();
        let mut m = Matrix::new(&r, 3);
        m.push_row(vec![r.from_i64(1), r.from_i64(2), r.from_i64(3)]);
        m.push_row(vec![r.from_i64(2), r.from_i64(4), r.from_i64(6)]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = (0..3).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(&m.rows[0][i], &v[i])));
            assert!(r.is_zero(&dot));
        }
    }

    #[test]
    fn rationals_full_rank() {
        let q = Rationals;
        let mut m = Matrix::new(&q, 2);
        m.push_row(vec![q.from_i64(1), q.from_i64(1)]);
        m.push_row(vec![q.from_i64(1), q.from_i64(-1)]);
        assert_eq!(m.rank(), 2);
        assert!(m.kernel().is_empty());
    }
}
