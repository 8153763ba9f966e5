use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::{lcm_int, BigInt, BigRational, ExactScalar};
use crate::error::{Error, Result};

/// Dense matrix stored column-major, matching the convention that column
/// `j` holds the rates out of configuration `j`.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |r, c| rows[r][c].clone())
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: Vec<Vec<T>>) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        Self {
            rows,
            cols,
            data: columns.into_iter().flatten().collect(),
        }
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

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[c * self.rows + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[c * self.rows + r] = v;
    }

    pub fn column(&self, c: usize) -> &[T] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn column_mut(&mut self, c: usize) -> &mut [T] {
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.rows.max(1)).take(self.cols)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U: ExactScalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.map(|a| a.scale(q))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![T::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in self.column(c).iter().enumerate() {
                if !a.is_zero() {
                    out[r] = out[r].add(&a.mul(x));
                }
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions");
        let columns = rhs.columns().map(|col| self.mul_vec(col)).collect();
        let mut out = Self::from_columns(columns);
        out.rows = self.rows;
        out
    }

    /// The `h x w` block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Assembles a block matrix; all blocks in a block-row share a height
    /// and all blocks in a block-column share a width.
    pub fn from_blocks(grid: &[&[&Matrix<T>]]) -> Self {
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let (rows, cols) = (heights.iter().sum(), widths.iter().sum());
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (heights[bi], widths[bj]), "block shape");
                for c in 0..b.cols {
                    for r in 0..b.rows {
                        out.set(r0 + r, c0 + c, b.get(r, c).clone());
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        out
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn trace(&self) -> T {
        self.diagonal().iter().fold(T::zero(), |acc, d| acc.add(d))
    }

    pub fn column_sums(&self) -> Vec<T> {
        self.columns()
            .map(|col| col.iter().fold(T::zero(), |acc, a| acc.add(a)))
            .collect()
    }

    /// First entry `(row, col)` strictly above the diagonal that is nonzero.
    pub fn first_above_diagonal(&self) -> Option<(usize, usize)> {
        (0..self.cols).find_map(|c| (0..c.min(self.rows)).find(|&r| !self.get(r, c).is_zero()).map(|r| (r, c)))
    }

    pub fn first_below_diagonal(&self) -> Option<(usize, usize)> {
        (0..self.cols).find_map(|c| (c + 1..self.rows).find(|&r| !self.get(r, c).is_zero()).map(|r| (r, c)))
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.first_above_diagonal().is_none()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.first_below_diagonal().is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ExactScalar::is_zero)
    }

    /// First differing entry in row-major scan order.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Some((self.rows.min(other.rows), self.cols.min(other.cols)));
        }
        (0..self.rows).find_map(|r| {
            (0..self.cols)
                .find(|&c| self.get(r, c) != other.get(r, c))
                .map(|c| (r, c))
        })
    }

    /// `row,col,value` triplets of the nonzero entries in row-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,value\n");
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    let _ = writeln!(out, "{r},{c},{}", csv_field(&v.to_string()));
                }
            }
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Determinant by fraction-free (Bareiss) elimination. Every division is
/// exact in the entries' ring, so no fractions are introduced.
pub fn bareiss_det<T: ExactScalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return T::one();
    }
    let mut a: Vec<Vec<T>> = (0..n).map(|r| m.row(r)).collect();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t
                    .div_exact(&prev)
                    .expect("Bareiss division is exact in an integral domain");
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Bareiss elimination on an integer matrix given by rows.
pub fn bareiss_det_integer(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let t = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                row[j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a rational matrix: rows are scaled to integers and
/// the integer determinant is divided back.
pub fn det_rational(m: &Matrix<BigRational>) -> BigRational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, q| lcm_int(&acc, q.denom()));
            scale *= &l;
            row.iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect();
    BigRational::new(bareiss_det_integer(rows), scale)
}

/// Rank by Gaussian elimination over the rationals.
pub fn rank_rational(m: &Matrix<BigRational>) -> usize {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows()).map(|r| m.row(r)).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !Zero::is_zero(&a[r][c])) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].recip();
        let pivot: Vec<BigRational> = a[rank].iter().map(|x| x * &inv).collect();
        for row in a.iter_mut().skip(rank + 1) {
            if Zero::is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                row[j] -= &f * &pivot[j];
            }
        }
        a[rank] = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Dimension check shared by vector-valued operations.
pub(crate) fn expect_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio, Poly, Symbol};
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn small_determinants() {
        let m = Matrix::from_rows(vec![vec![ratio(5, 3)]]);
        assert_eq!(bareiss_det(&m), ratio(5, 3));
        assert_eq!(det_rational(&m), ratio(5, 3));
        // M_1 at a = 1, b = 2 is singular
        let m1 = q(&[&[-1, 3], &[1, -3]]);
        assert_eq!(det_rational(&m1), rat(0));
        // det(I - M_1) = (1+1)(1+3) - (-3)(-1) = 5 by cofactor expansion
        let shifted = Matrix::identity(2).sub(&m1);
        assert_eq!(det_rational(&shifted), rat(5));
        assert_eq!(bareiss_det(&shifted), rat(5));
    }

    #[test]
    fn pivoting_and_sign() {
        let m = q(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(det_rational(&m), rat(-1));
        assert_eq!(bareiss_det(&m), rat(-1));
    }

    #[test]
    fn symbolic_markov_matrix_is_singular() {
        let a = Poly::var(Symbol::Alpha);
        let b = Poly::var(Symbol::Beta);
        let m = Matrix::from_rows(vec![
            vec![-&a, &a + &b],
            vec![a.clone(), -&(&a + &b)],
        ]);
        assert!(bareiss_det(&m).is_zero());
    }

    #[test]
    fn rank_and_blocks() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank_rational(&m), 2);
        let b = m.block(1, 1, 2, 2);
        assert_eq!(b, q(&[&[4, 6], &[1, 1]]));
        let id = Matrix::<BigRational>::identity(2);
        let z = Matrix::zeros(2, 2);
        let big = Matrix::from_blocks(&[&[&id, &b], &[&z, &id]]);
        assert_eq!(big.rows(), 4);
        assert_eq!(*big.get(0, 2), rat(4));
        assert!(big.is_upper_triangular());
        assert!(!big.is_lower_triangular());
        assert_eq!(big.first_above_diagonal(), Some((0, 2)));
    }

    #[test]
    fn products_and_csv() {
        let a = q(&[&[1, 2], &[3, 4]]);
        let b = q(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), q(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), q(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.column_sums(), vec![rat(4), rat(6)]);
        assert_eq!(b.to_csv(), "row,col,value\n0,1,1\n1,0,1\n");
    }
}
