//! Small dense matrices over an exact ring scalar.

use std::fmt;

/// Minimal scalar interface for exact matrix algebra.
pub trait RingScalar: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
    fn abs_value(&self) -> f64;
}

impl RingScalar for crate::qscalar::QScalar {
    fn zero_like(&self) -> Self {
        Self::zero(self.params())
    }
    fn one_like(&self) -> Self {
        Self::one(self.params())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        QScalarConj::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        self.try_inv()
    }
    fn abs_value(&self) -> f64 {
        self.eval().norm()
    }
}

// disambiguation shim: the inherent method is what we want
struct QScalarConj;
impl QScalarConj {
    fn conj(s: &crate::qscalar::QScalar) -> crate::qscalar::QScalar {
        s.conj()
    }
}

impl RingScalar for crate::qscalar::quad::QuadGauss {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.conj()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        self.try_inv()
    }
    fn abs_value(&self) -> f64 {
        self.eval().norm()
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: RingScalar> Matrix<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize, like: &S) -> Self {
        Self::from_fn(rows, cols, |_, _| like.zero_like())
    }

    pub fn identity(n: usize, like: &S) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { like.one_like() } else { like.zero_like() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut S {
        &mut self.data[r * self.cols + c]
    }

    pub fn sample(&self) -> &S {
        &self.data[0]
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let like = self.sample();
        Self::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = like.zero_like();
            for k in 0..self.cols {
                let term = self.at(r, k).mul(o.at(k, c));
                acc = acc.add(&term);
            }
            acc
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).add(o.at(r, c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).sub(o.at(r, c)))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c).mul(s))
    }

    pub fn conj_t(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    /// Outer product col * row.
    pub fn outer(col: &[S], row: &[S]) -> Self {
        Self::from_fn(col.len(), row.len(), |r, c| col[r].mul(&row[c]))
    }

    pub fn col(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<S> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|s| s.abs_value()).fold(0.0, f64::max)
    }

    /// Gauss-Jordan inverse; None when singular.
    pub fn try_inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let like = self.sample();
        let mut a = self.clone();
        let mut inv = Self::identity(n, like);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot_row != col {
                for c in 0..n {
                    a.data.swap(col * n + c, pivot_row * n + c);
                    inv.data.swap(col * n + c, pivot_row * n + c);
                }
            }
            let pinv = a.at(col, col).try_inv()?;
            for c in 0..n {
                *a.at_mut(col, c) = a.at(col, c).mul(&pinv);
                *inv.at_mut(col, c) = inv.at(col, c).mul(&pinv);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for c in 0..n {
                    let t = factor.mul(a.at(col, c));
                    *a.at_mut(r, c) = a.at(r, c).sub(&t);
                    let t = factor.mul(inv.at(col, c));
                    *inv.at_mut(r, c) = inv.at(r, c).sub(&t);
                }
            }
        }
        Some(inv)
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |r, c| {
            let (r1, r2) = (r / o.rows, r % o.rows);
            let (c1, c2) = (c / o.cols, c % o.cols);
            self.at(r1, c1).mul(o.at(r2, c2))
        })
    }
}

impl<S: RingScalar + fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[ ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Solve A x = b by exact Gaussian elimination.  Returns None when the
/// system is inconsistent; free variables are set to zero.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear<S: RingScalar>(a: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    assert_eq!(a.rows(), b.len());
    let like = if !b.is_empty() { b[0].zero_like() } else { a.sample().zero_like() };
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut rhs: Vec<S> = b.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m.at(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..cols {
                let tmp = m.at(row, c).clone();
                *m.at_mut(row, c) = m.at(p, c).clone();
                *m.at_mut(p, c) = tmp;
            }
            rhs.swap(row, p);
        }
        let pinv = m.at(row, col).try_inv()?;
        for c in 0..cols {
            *m.at_mut(row, c) = m.at(row, c).mul(&pinv);
        }
        rhs[row] = rhs[row].mul(&pinv);
        for r in 0..rows {
            if r == row || m.at(r, col).is_zero() {
                continue;
            }
            let f = m.at(r, col).clone();
            for c in 0..cols {
                let t = f.mul(m.at(row, c));
                *m.at_mut(r, c) = m.at(r, c).sub(&t);
            }
            let t = f.mul(&rhs[row]);
            rhs[r] = rhs[r].sub(&t);
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == rows {
            break;
        }
    }
    // inconsistency: a zero row with non-zero rhs
    if rhs.iter().skip(row).any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![like; cols];
    for (c, p) in pivot_of_col.iter().enumerate() {
        if let Some(r) = p {
            x[c] = rhs[*r].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalar::{DeformParams, QScalar};

    #[test]
    fn inverse_of_unit_triangular() {
        let p = DeformParams::new(2);
        let one = QScalar::one(p);
        let m = Matrix::from_fn(3, 3, |r, c| {
            if r == c {
                one.clone()
            } else if r < c {
                QScalar::from_ratio(p, (r + c) as i64, 2)
            } else {
                QScalar::zero(p)
            }
        });
        let inv = m.try_inverse().expect("unit triangular is invertible");
        assert_eq!(m.matmul(&inv), Matrix::identity(3, &one));
        assert_eq!(inv.matmul(&m), Matrix::identity(3, &one));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let p = DeformParams::new(1);
        let zero = QScalar::zero(p);
        let m = Matrix::zero(2, 2, &zero);
        assert!(m.try_inverse().is_none());
    }

    #[test]
    fn linear_solve_consistency() {
        let p = DeformParams::new(2);
        let one = QScalar::one(p);
        let a = Matrix::from_fn(2, 2, |r, c| {
            if r == 0 && c == 0 {
                one.clone()
            } else if r == 1 && c == 1 {
                p.q()
            } else {
                QScalar::zero(p)
            }
        });
        let b = vec![QScalar::from_int(p, 3), p.q()];
        let x = solve_linear(&a, &b).expect("solvable");
        assert_eq!(x[0], QScalar::from_int(p, 3));
        assert_eq!(x[1], QScalar::one(p));
        // inconsistent: duplicate row, contradictory rhs
        let a2 = Matrix::from_fn(2, 1, |_, _| one.clone());
        let b2 = vec![one.clone(), p.q()];
        assert!(solve_linear(&a2, &b2).is_none());
    }
}
