//! Dense row-major matrices over the integers, the rationals and the
//! symbolic scalars. Zero-row and zero-column shapes are first-class: a
//! `0 x n` matrix remembers its column count, which matters for kernels of
//! empty boundary maps.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExactError, KNumber, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ZMatrix = Mat<BigInt>;
pub type QMatrix = Mat<Rational>;
pub type KMatrix = Mat<KNumber>;

impl<T> Mat<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Mat { rows, cols, data }
    }

    /// Builds from a list of equal-length rows. `cols` disambiguates the
    /// width when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Mat {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Mat<T> {
    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Rows `range.0..range.1` as a new matrix.
    pub fn row_slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.rows);
        Mat {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn col_slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols);
        let mut data = Vec::with_capacity(self.rows * (end - start));
        for i in 0..self.rows {
            for j in start..end {
                data.push(self[(i, j)].clone());
            }
        }
        Mat {
            rows: self.rows,
            cols: end - start,
            data,
        }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack: column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        let mut data = Vec::with_capacity((self.cols + other.cols) * self.rows);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Mat {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

// ---------------------------------------------------------------------------
// Integer matrices
// ---------------------------------------------------------------------------

impl ZMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(cols: usize, rows: Vec<Vec<i64>>) -> Self {
        Mat::from_rows(
            cols,
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = ZMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// row_i -= q * row_j
    pub fn row_sub_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let sub = q * &self[(j, c)];
            self[(i, c)] -= sub;
        }
    }

    /// row_i += row_j
    pub fn row_add(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let add = self[(j, c)].clone();
            self[(i, c)] += add;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }

    /// col_j -= q * col_k
    pub fn col_sub_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let sub = q * &self[(r, k)];
            self[(r, j)] -= sub;
        }
    }

    pub fn to_q(&self) -> QMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }

    pub fn to_k(&self) -> KMatrix {
        self.map(|x| KNumber::from_rational(Rational::from_integer(x.clone())))
    }
}

// ---------------------------------------------------------------------------
// Rational matrices
// ---------------------------------------------------------------------------

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Rank over Q by Gaussian elimination; pivots are the first nonzero
    /// entry in each column scanning rows top-down.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for j in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, j)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let pivot = m[(r, j)].clone();
            for i in r + 1..m.rows {
                if m[(i, j)].is_zero() {
                    continue;
                }
                let factor = &m[(i, j)] / &pivot;
                for c in j..m.cols {
                    let sub = &factor * &m[(r, c)];
                    m[(i, c)] -= sub;
                }
            }
            r += 1;
        }
        r
    }

    /// Solves `self * x = rhs` exactly. Free variables are set to zero;
    /// returns `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &QMatrix) -> Option<QMatrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let mut a = self.hstack(rhs);
        let n = self.cols;
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut r = 0;
        for j in 0..n {
            if r >= a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, j)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let pivot = a[(r, j)].clone();
            for c in j..a.cols {
                let v = &a[(r, c)] / &pivot;
                a[(r, c)] = v;
            }
            for i in 0..a.rows {
                if i == r || a[(i, j)].is_zero() {
                    continue;
                }
                let factor = a[(i, j)].clone();
                for c in j..a.cols {
                    let sub = &factor * &a[(r, c)];
                    a[(i, c)] -= sub;
                }
            }
            pivot_cols.push(j);
            r += 1;
        }
        // rows past the rank must have zero right-hand side
        for i in r..a.rows {
            for c in n..a.cols {
                if !a[(i, c)].is_zero() {
                    return None;
                }
            }
        }
        let mut x = QMatrix::zero(n, rhs.cols);
        for (row, &col) in pivot_cols.iter().enumerate() {
            for c in 0..rhs.cols {
                x[(col, c)] = a[(row, n + c)].clone();
            }
        }
        Some(x)
    }

    pub fn to_k(&self) -> KMatrix {
        self.map(|q| KNumber::from_rational(q.clone()))
    }
}

// ---------------------------------------------------------------------------
// Symbolic matrices
// ---------------------------------------------------------------------------

impl KMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![KNumber::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = KNumber::from_integer(1);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &KMatrix) -> KMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "add: shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &KMatrix) -> KMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "sub: shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: &Rational) -> KMatrix {
        self.map(|k| k.scale(factor))
    }

    /// Matrix product; fails with [`ExactError::SymbolProduct`] when some
    /// entry product leaves the scalar span.
    pub fn try_mul(&self, other: &KMatrix) -> Result<KMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = KMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.try_mul(&other[(k, j)])?;
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        Ok(out)
    }

    /// `z * self` with an integer matrix on the left. Always defined.
    pub fn left_mul_z(&self, z: &ZMatrix) -> KMatrix {
        assert_eq!(z.cols(), self.rows, "left_mul_z: inner dimension mismatch");
        let mut out = KMatrix::zero(z.rows(), self.cols);
        for i in 0..z.rows() {
            for k in 0..z.cols() {
                let a = &z[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let f = Rational::from_integer(a.clone());
                for j in 0..self.cols {
                    let add = self[(k, j)].scale(&f);
                    out[(i, j)] = out[(i, j)].add(&add);
                }
            }
        }
        out
    }

    /// `self * q` with a rational matrix on the right. Always defined.
    pub fn mul_q(&self, q: &QMatrix) -> KMatrix {
        assert_eq!(self.cols, q.rows(), "mul_q: inner dimension mismatch");
        let mut out = KMatrix::zero(self.rows, q.cols());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..q.cols() {
                    let add = a.scale(&q[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&add);
                }
            }
        }
        out
    }

    /// Largest symbol index occurring anywhere, if any entry is nonzero.
    pub fn max_symbol_index(&self) -> Option<usize> {
        self.data.iter().filter_map(|k| k.max_symbol_index()).max()
    }

    /// Number of symbol slots needed to flatten this matrix (at least 1,
    /// for the constant).
    pub fn symbol_span(&self) -> usize {
        self.max_symbol_index().map_or(1, |m| m + 1)
    }

    /// Flattens each row of `K^cols` into `Q^(cols * span)`: column block
    /// `j` holds the `span` coefficients of entry `j`.
    pub fn flatten_q(&self, span: usize) -> QMatrix {
        assert!(span >= self.symbol_span(), "flatten_q: span too small");
        let mut out = QMatrix::zero(self.rows, self.cols * span);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (s, q) in self[(i, j)].iter() {
                    out[(i, j * span + s)] = q.clone();
                }
            }
        }
        out
    }
}
