//! Dense matrices over a coefficient ring given as a context object.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

/// Row-major dense matrix. Zero rows or columns are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from its columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<E>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("column length".into()));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<F: Clone>(&self, f: impl Fn(&E) -> Result<F>) -> Result<Matrix<F>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<F>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// The first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        Self::from_fn(self.rows, k, |i, j| self[(i, j)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

pub fn identity<R: Ring>(r: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { r.one() } else { r.zero() })
}

pub fn zeros<R: Ring>(r: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::filled(rows, cols, r.zero())
}

pub fn diagonal<R: Ring>(r: &R, entries: &[R::Elem]) -> Matrix<R::Elem> {
    let n = entries.len();
    Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { r.zero() })
}

pub fn mul<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = zeros(r, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = &a[(i, k)];
            if r.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let t = r.mul(x, &b[(k, j)]);
                out[(i, j)] = r.add(&out[(i, j)], &t);
            }
        }
    }
    Ok(out)
}

pub fn add<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Dimension("matrix sum".into()));
    }
    Ok(Matrix::from_fn(a.rows, a.cols, |i, j| r.add(&a[(i, j)], &b[(i, j)])))
}

pub fn scale<R: Ring>(r: &R, c: &R::Elem, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|x| r.mul(c, x))
}

/// `uᵀ·g·u`.
pub fn congruence<R: Ring>(r: &R, g: &Matrix<R::Elem>, u: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    mul(r, &mul(r, &u.transpose(), g)?, u)
}

/// `xᵀ·g·y` for column vectors given as slices.
pub fn bilinear<R: Ring>(r: &R, g: &Matrix<R::Elem>, x: &[R::Elem], y: &[R::Elem]) -> R::Elem {
    let mut acc = r.zero();
    for i in 0..g.rows {
        if r.is_zero(&x[i]) {
            continue;
        }
        let mut row = r.zero();
        for j in 0..g.cols {
            if !r.is_zero(&y[j]) {
                row = r.add(&row, &r.mul(&g[(i, j)], &y[j]));
            }
        }
        acc = r.add(&acc, &r.mul(&x[i], &row));
    }
    acc
}

/// Block-diagonal sum.
pub fn block_sum<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
        match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)].clone(),
            (false, false) => b[(i - a.rows, j - a.cols)].clone(),
            _ => r.zero(),
        }
    })
}

pub fn is_symmetric_up_to<R: Ring>(r: &R, g: &Matrix<R::Elem>, epsilon: i8) -> bool {
    g.is_square()
        && (0..g.rows).all(|i| {
            (0..g.cols).all(|j| {
                let t = &g[(j, i)];
                let want = if epsilon < 0 { r.neg(t) } else { t.clone() };
                g[(i, j)] == want
            })
        })
}

/// Row echelon reduction over a field; returns (reduced matrix, pivot columns).
pub fn row_reduce<F: Field>(f: &F, a: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&i| !f.is_zero(&m[(i, col)])) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = f.inv(&m[(row, col)]).expect("nonzero pivot");
        for j in 0..m.cols {
            m[(row, j)] = f.mul(&inv, &m[(row, j)]);
        }
        for i in 0..m.rows {
            if i != row && !f.is_zero(&m[(i, col)]) {
                let c = m[(i, col)].clone();
                for j in 0..m.cols {
                    let t = f.mul(&c, &m[(row, j)]);
                    m[(i, j)] = f.sub(&m[(i, j)], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::Elem>) -> usize {
    row_reduce(f, a).1.len()
}

pub fn determinant<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Result<F::Elem> {
    if !a.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let mut m = a.clone();
    let n = m.rows;
    let mut det = f.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !f.is_zero(&m[(i, col)])) else {
            return Ok(f.zero());
        };
        if p != col {
            m.swap_rows(p, col);
            det = f.neg(&det);
        }
        let piv = m[(col, col)].clone();
        det = f.mul(&det, &piv);
        let inv = f.inv(&piv).expect("nonzero pivot");
        for i in col + 1..n {
            if f.is_zero(&m[(i, col)]) {
                continue;
            }
            let c = f.mul(&m[(i, col)], &inv);
            for j in col..n {
                let t = f.mul(&c, &m[(col, j)]);
                m[(i, j)] = f.sub(&m[(i, j)], &t);
            }
        }
    }
    Ok(det)
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if !a.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = a.rows;
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            f.one()
        } else {
            f.zero()
        }
    });
    let (red, pivots) = row_reduce(f, &aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| red[(i, j + n)].clone()))
}

/// Basis of the right kernel `{x : a·x = 0}` as columns.
pub fn kernel<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (red, pivots) = row_reduce(f, a);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); a.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&red[(r, fc)]);
            }
            v
        })
        .collect()
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn int_determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

pub fn to_rational(a: &IntMatrix) -> RatMatrix {
    a.map(|x| BigRational::from_integer(x.clone()))
}

/// Converts a rational matrix with integer entries; errors otherwise.
pub fn to_integer(a: &RatMatrix) -> Result<IntMatrix> {
    a.try_map(|x| {
        if x.is_integer() {
            Ok(x.to_integer())
        } else {
            Err(Error::Coefficients(format!("{x} is not an integer")))
        }
    })
}

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
        .expect("rectangular literal")
}

pub fn rat_matrix(rows: &[&[i64]]) -> RatMatrix {
    to_rational(&int_matrix(rows))
}

/// Largest absolute value of an entry.
pub fn max_abs(a: &IntMatrix) -> BigInt {
    a.entries().map(|x| x.abs()).max().unwrap_or_default()
}
