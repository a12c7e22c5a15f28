//! Small dense matrices over exact rationals.
//!
//! Sizes here are tiny (at most `(n+2) x (n+2)` with `n <= 6`), so a dense
//! row-major `Vec` is the right representation; all the sparsity lives one
//! level up, in the multivector layer.

use crate::rat::{q, Q};
use num::{One, Signed, Zero};
use std::fmt;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Q>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| crate::rat::fmt_short(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            a: vec![Q::zero(); rows * cols],
        }
    }

    pub fn eye(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Matrix with a single nonzero entry `m[r][c] = v`.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize, v: Q) -> Mat {
        let mut m = Mat::zero(rows, cols);
        m.set(r, c, v);
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.a[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// `self += other`, skipping zero entries of `other`.
    pub fn add_assign(&mut self, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (x, y) in self.a.iter_mut().zip(other.a.iter()) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }

    /// `self += c * other`, skipping zero entries of `other`.
    pub fn add_scaled_assign(&mut self, c: &Q, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (x, y) in self.a.iter_mut().zip(other.a.iter()) {
            if !y.is_zero() {
                *x += c * y;
            }
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(other.a.iter()) {
            if !y.is_zero() {
                *x -= y;
            }
        }
        out
    }

    pub fn neg(&self) -> Mat {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            if !x.is_zero() {
                *x = -x.clone();
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Mat {
        if c.is_zero() {
            return Mat::zero(self.rows, self.cols);
        }
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            if !x.is_zero() {
                *x *= c;
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let v = self.get(r, k);
                if v.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let w = other.get(k, c);
                    if w.is_zero() {
                        continue;
                    }
                    let cell = &mut out.a[r * other.cols + c];
                    *cell += v * w;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.set(c, r, v.clone());
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let mut t = Q::zero();
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    /// First nonzero entry in row-major order, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Q)> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    return Some((r, c, v));
                }
            }
        }
        None
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Q] {
        &self.a
    }

    /// Largest absolute value of any entry (useful for sanity checks only).
    pub fn max_abs(&self) -> Q {
        let mut m = Q::zero();
        for x in &self.a {
            let ax = x.abs();
            if ax > m {
                m = ax;
            }
        }
        m
    }

    /// Build from closure.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Integer-valued convenience constructor, row major.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Mat {
        assert_eq!(data.len(), rows * cols);
        let mut m = Mat::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, q(data[r * cols + c]));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qr;

    #[test]
    fn basic_algebra() {
        let a = Mat::from_i64(2, 2, &[1, 2, 3, 4]);
        let b = Mat::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(a.add(&b), Mat::from_i64(2, 2, &[1, 3, 4, 4]));
        assert_eq!(a.mul(&b), Mat::from_i64(2, 2, &[2, 1, 4, 3]));
        assert_eq!(b.mul(&a), Mat::from_i64(2, 2, &[3, 4, 1, 2]));
        assert_eq!(a.commutator(&b), Mat::from_i64(2, 2, &[-1, -3, 3, 1]));
        assert_eq!(a.trace(), q(5));
        assert_eq!(a.transpose(), Mat::from_i64(2, 2, &[1, 3, 2, 4]));
        assert_eq!(a.scale(&qr(1, 2)), Mat::from_fn(2, 2, |r, c| qr((r * 2 + c + 1) as i64, 2)));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn unit_and_first_nonzero() {
        let u = Mat::unit(3, 3, 1, 2, q(5));
        assert_eq!(u.first_nonzero(), Some((1, 2, &q(5))));
        assert!(Mat::zero(2, 2).first_nonzero().is_none());
    }
}
