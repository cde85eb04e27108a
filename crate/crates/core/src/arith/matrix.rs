use std::fmt;

use super::{RingSpec, Scalar};

/// Dense matrix of exact scalars over a single ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_i64_rows(ring: RingSpec, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, Scalar::from_i64(ring, v));
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(ring: RingSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.ring(), self.ring);
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let idx = i * self.cols + j;
        self.data[idx] = self.data[idx].add(v);
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_slice(&self, start: usize, end: usize) -> ExactMatrix {
        let mut out = Self::zeros(self.ring, end - start, self.cols);
        for i in start..end {
            for j in 0..self.cols {
                out.set(i - start, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_slice(&self, start: usize, end: usize) -> ExactMatrix {
        let mut out = Self::zeros(self.ring, self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                out.set(i, j - start, self.get(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation `[self | o]`.
    pub fn hconcat(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, o.rows);
        let mut out = Self::zeros(self.ring, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return self.ring.one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = self.ring.one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return self.ring.zero();
                };
                a.swap_rows(k, r);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a
                        .get(i, j)
                        .mul(a.get(k, k))
                        .sub(&a.get(i, k).mul(a.get(k, j)));
                    a.set(i, j, exact_div(&num, &prev));
                }
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        if sign {
            d.neg()
        } else {
            d
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j).add(&c.mul(s));
                self.set(dst, j, v);
            }
        }
    }

    /// col[dst] += c * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst).add(&c.mul(s));
                self.set(i, dst, v);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(r, j).mul(c);
            self.set(r, j, v);
        }
    }

    pub(crate) fn scale_col(&mut self, col: usize, c: &Scalar) {
        for i in 0..self.rows {
            let v = self.get(i, col).mul(c);
            self.set(i, col, v);
        }
    }
}

fn exact_div(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x / y),
        _ => a.mul(&b.inverse().expect("nonzero divisor")),
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
