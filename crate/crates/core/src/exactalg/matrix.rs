use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraError, Poly, Rational};

/// Exact commutative integral domain with exact division, enough for
/// fraction-free elimination.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / rhs`, where the caller guarantees the division is exact.
    fn div_exact(&self, rhs: &Self) -> Self;
    /// Whether `det` should use memoized cofactor expansion for a matrix of size `n`.
    fn prefers_cofactor(_n: usize) -> bool {
        false
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Cofactor expansion is memoized over column subsets, so it is only chosen
/// while `2^n` stays small.
const COFACTOR_LIMIT: usize = 12;

impl Ring for Poly {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        Poly::div_exact(self, rhs)
    }
    fn prefers_cofactor(n: usize) -> bool {
        n <= COFACTOR_LIMIT
    }
}

/// Dense row-major matrix over an exact ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not chain");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// Sum of every entry.
    pub fn entry_sum(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc.add(x))
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let n = self.rows;
        Self::from_fn(n - 1, n - 1, |i, j| {
            let si = if i < skip_row { i } else { i + 1 };
            let sj = if j < skip_col { j } else { j + 1 };
            self[(si, sj)].clone()
        })
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant; the 0×0 determinant is 1.
///
/// Small polynomial matrices use cofactor expansion memoized on column
/// subsets. Everything else uses Bareiss fraction-free elimination.
pub fn det<T: Ring>(m: &Matrix<T>) -> Result<T, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if T::prefers_cofactor(m.rows) {
        Ok(det_cofactor(m))
    } else {
        Ok(det_bareiss(m))
    }
}

/// Bareiss elimination with row pivoting. Every division is exact.
pub fn det_bareiss<T: Ring>(m: &Matrix<T>) -> T {
    let n = m.rows;
    let mut a = m.clone();
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return T::zero();
            };
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[(k, k)].mul(&a[(i, j)]).sub(&a[(i, k)].mul(&a[(k, j)]));
                a[(i, j)] = v.div_exact(&prev);
            }
            a[(i, k)] = T::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = if n == 0 {
        T::one()
    } else {
        a[(n - 1, n - 1)].clone()
    };
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Laplace expansion along successive rows, memoized by the set of columns
/// already consumed. Panics for `n > 63`.
pub fn det_cofactor<T: Ring>(m: &Matrix<T>) -> T {
    assert!(m.rows < 64, "cofactor expansion limited to 63 columns");
    fn go<T: Ring>(m: &Matrix<T>, used: u64, memo: &mut HashMap<u64, T>) -> T {
        let n = m.rows;
        let row = used.count_ones() as usize;
        if row == n {
            return T::one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = T::zero();
        let mut free_before = 0;
        for j in 0..n {
            if used & (1 << j) != 0 {
                continue;
            }
            let entry = &m[(row, j)];
            if !entry.is_zero() {
                let term = entry.mul(&go(m, used | (1 << j), memo));
                acc = if free_before % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            free_before += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }
    go(m, 0, &mut HashMap::new())
}

/// Classical adjoint: `adj(M)[j][i] = (-1)^(i+j) det(minor(i, j))`.
pub fn adjugate<T: Ring>(m: &Matrix<T>) -> Result<Matrix<T>, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Err(AlgebraError::Empty);
    }
    if n == 1 {
        return Ok(Matrix::identity(1));
    }
    let mut adj = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = det(&m.minor(i, j))?;
            adj[(j, i)] = if (i + j) % 2 == 0 { c } else { c.neg() };
        }
    }
    debug_assert_eq!(m.mul(&adj), Matrix::identity(n).scale(&det(m)?));
    Ok(adj)
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(a: &mut Matrix<Rational>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !Zero::is_zero(&a[(i, c)])) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in 0..a.cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..a.rows {
            if i == r || Zero::is_zero(&a[(i, c)]) {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in 0..a.cols {
                let v = &a[(i, j)] - &factor * &a[(r, j)];
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over ℚ.
pub fn rank(m: &Matrix<Rational>) -> usize {
    let mut a = m.clone();
    rref(&mut a, m.cols).len()
}

/// Exact inverse over ℚ, or `None` when the matrix is singular.
pub fn inverse(m: &Matrix<Rational>) -> Result<Option<Matrix<Rational>>, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            <Rational as One>::one()
        } else {
            <Rational as Zero>::zero()
        }
    });
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return Ok(None);
    }
    Ok(Some(Matrix::from_fn(n, n, |i, j| aug[(i, n + j)].clone())))
}

/// One exact solution of `A x = b`, free variables set to zero, or `None`
/// when the system is inconsistent.
pub fn solve(a: &Matrix<Rational>, b: &[Rational]) -> Result<Option<Vec<Rational>>, AlgebraError> {
    if a.rows != b.len() {
        return Err(AlgebraError::ShapeMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let n = a.cols;
    let mut aug = Matrix::from_fn(a.rows, n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = rref(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![<Rational as Zero>::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, n)].clone();
    }
    Ok(Some(x))
}

impl fmt::Display for Matrix<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn pm(rows: &[&[&[i64]]]) -> Matrix<Poly> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::from_ints(c)).collect())
                .collect(),
        )
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Matrix::<Rational>::identity(3)).unwrap(), q(1, 1));
        assert_eq!(det(&Matrix::<Rational>::zeros(0, 0)).unwrap(), q(1, 1));
        assert_eq!(det(&pm(&[&[&[1, -1]]])).unwrap(), Poly::from_ints(&[1, -1]));
        let m = pm(&[&[&[1], &[0, -1]], &[&[0, -1], &[1]]]);
        assert_eq!(det(&m).unwrap(), Poly::from_ints(&[1, 0, -1]));
        assert_eq!(det_bareiss(&m), Poly::from_ints(&[1, 0, -1]));
        assert!(matches!(
            det(&qm(&[&[1, 2]])),
            Err(AlgebraError::NotSquare { rows: 1, cols: 2 })
        ));
    }

    #[test]
    fn bareiss_needs_pivoting() {
        let m = qm(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(det_bareiss(&m), q(-2, 1));
        assert_eq!(det_cofactor(&m), q(-2, 1));
    }

    #[test]
    fn adjugate_examples() {
        let m = qm(&[&[1, 2], &[3, 4]]);
        assert_eq!(adjugate(&m).unwrap(), qm(&[&[4, -2], &[-3, 1]]));
        assert_eq!(
            adjugate(&pm(&[&[&[1, -1]]])).unwrap(),
            Matrix::<Poly>::identity(1)
        );
        let m = pm(&[&[&[1], &[0, -1]], &[&[0, -1], &[1]]]);
        assert_eq!(
            adjugate(&m).unwrap(),
            pm(&[&[&[1], &[0, 1]], &[&[0, 1], &[1]]])
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            inverse(&qm(&[&[1, 1], &[0, 1]])).unwrap(),
            Some(qm(&[&[1, -1], &[0, 1]]))
        );
        assert_eq!(
            inverse(&qm(&[&[2]])).unwrap(),
            Some(Matrix::from_rows(vec![vec![q(1, 2)]]))
        );
        assert_eq!(inverse(&qm(&[&[1, 1], &[1, 1]])).unwrap(), None);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve(&qm(&[&[2]]), &[q(1, 1)]).unwrap(),
            Some(vec![q(1, 2)])
        );
        assert_eq!(
            solve(&qm(&[&[1, 1], &[0, 1]]), &[q(1, 1), q(1, 1)]).unwrap(),
            Some(vec![q(0, 1), q(1, 1)])
        );
        assert_eq!(solve(&qm(&[&[0]]), &[q(1, 1)]).unwrap(), None);
        // singular but consistent: free variable zeroed
        assert_eq!(
            solve(&qm(&[&[1, 1], &[1, 1]]), &[q(1, 1), q(1, 1)]).unwrap(),
            Some(vec![q(1, 1), q(0, 1)])
        );
    }

    #[test]
    fn rank_counts_independent_rows() {
        assert_eq!(rank(&qm(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&qm(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&Matrix::<Rational>::identity(4)), 4);
    }
}
