//! Dense exact integer matrices.
//!
//! Every certification in this crate reduces to identities between small
//! integer matrices (incidence matrices, adjacency matrices and their
//! products). Entries stay far below `i64::MAX` at the sizes the catalog
//! produces, so arithmetic is plain checked-free `i64`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// All-ones matrix, the J of the usual design identities.
    pub fn ones(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![1; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Naive product; the second factor is walked row-wise so the inner loop
    /// stays on contiguous slices.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let lrow = self.row(i);
            for (k, &lik) in lrow.iter().enumerate() {
                if lik == 0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &r) in orow.iter_mut().zip(rrow.iter()) {
                    *o += lik * r;
                }
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.cols];
        for r in 0..self.rows {
            for (s, &v) in sums.iter_mut().zip(self.row(r)) {
                *s += v;
            }
        }
        sums
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// First entry where `self` and `rhs` differ, if any.
    pub fn first_difference(&self, rhs: &IntMatrix) -> Option<(usize, usize, i64, i64)> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for r in 0..self.rows {
            for c in 0..self.cols {
                let (a, b) = (self.get(r, c), rhs.get(r, c));
                if a != b {
                    return Some((r, c, a, b));
                }
            }
        }
        None
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_against_hand_values() {
        let mut a = IntMatrix::zeros(2, 3);
        for (i, v) in [1, 2, 3, 4, 5, 6].iter().enumerate() {
            a.set(i / 3, i % 3, *v);
        }
        let b = a.transpose();
        let p = a.mul(&b);
        assert_eq!(p.get(0, 0), 14);
        assert_eq!(p.get(0, 1), 32);
        assert_eq!(p.get(1, 0), 32);
        assert_eq!(p.get(1, 1), 77);
    }

    #[test]
    fn identity_and_ones() {
        let i = IntMatrix::identity(3);
        let j = IntMatrix::ones(3, 3);
        assert_eq!(i.mul(&j), j);
        assert_eq!(j.row_sums(), vec![3, 3, 3]);
        assert!(i.is_symmetric());
    }
}
