//! Dense exact matrices and fraction-free Gaussian elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{common_denominator, Rat, RatVector};
use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Solution set of `M·x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(RatVector),
    /// `particular + span(kernel)`.
    Underdetermined { particular: RatVector, kernel: Vec<RatVector> },
}

impl Solution {
    /// The unique solution, or the particular solution with all free variables zero.
    pub fn point(&self) -> &RatVector {
        match self {
            Solution::Unique(x) => x,
            Solution::Underdetermined { particular, .. } => particular,
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds from row vectors, which must all have length `cols`.
    pub fn from_rows(rows: &[RatVector], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(cols: &[RatVector], rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions");
        (0..self.rows).map(|i| super::rat::dot(self.row(i), v)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| *self.get(i, j) == if i == j { Rat::one() } else { Rat::zero() }))
    }

    pub fn rank(&self) -> usize {
        integer_echelon(&self.row_vecs(), self.cols).pivots.len()
    }

    /// Basis of `{x : M·x = 0}`.
    pub fn kernel(&self) -> Vec<RatVector> {
        let rref = Rref::of(&self.row_vecs(), self.cols);
        rref.kernel_basis(self.cols)
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug: Vec<RatVector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        let rref = Rref::of(&aug, 2 * n);
        if rref.pivots.len() < n || rref.pivots[n - 1] >= n {
            return None;
        }
        let data = rref.rows[..n].iter().flat_map(|r| r[n..].iter().cloned()).collect();
        Some(RatMatrix::new(n, n, data))
    }
}

/// Solve `M·x = b` exactly.
pub fn solve_rational(m: &RatMatrix, b: &[Rat]) -> Result<Solution, Error> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: b.len() });
    }
    let n = m.cols();
    let aug: Vec<RatVector> = (0..m.rows())
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let rref = Rref::of(&aug, n + 1);
    if rref.pivots.last() == Some(&n) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![Rat::zero(); n];
    for (k, &c) in rref.pivots.iter().enumerate() {
        x[c] = rref.rows[k][n].clone();
    }
    let kernel = rref.kernel_basis(n);
    if kernel.is_empty() {
        Ok(Solution::Unique(x))
    } else {
        Ok(Solution::Underdetermined { particular: x, kernel })
    }
}

/// Integer row-echelon form produced by Bareiss elimination.
pub(crate) struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

/// Fraction-free forward elimination. Rows are first scaled to integers; the
/// pivot in each column is the entry of largest magnitude. Every division by
/// the previous pivot is exact (Sylvester's identity).
pub(crate) fn integer_echelon(rows: &[RatVector], cols: usize) -> Echelon {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = common_denominator(r);
            r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .max_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()).then(j.cmp(&i)))
        else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let num = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: a, pivots }
}

/// Reduced row-echelon form over the rationals.
pub(crate) struct Rref {
    pub rows: Vec<RatVector>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn of(rows: &[RatVector], cols: usize) -> Self {
        let ech = integer_echelon(rows, cols);
        let rank = ech.pivots.len();
        let mut out: Vec<RatVector> = ech.rows[..rank]
            .iter()
            .zip(&ech.pivots)
            .map(|(r, &c)| {
                let p = Rat::from_integer(r[c].clone());
                r.iter().map(|x| Rat::from_integer(x.clone()) / &p).collect()
            })
            .collect();
        for k in (0..rank).rev() {
            let c = ech.pivots[k];
            let pivot_row = out[k].clone();
            for row in out.iter_mut().take(k) {
                let f = row[c].clone();
                if f.is_zero() {
                    continue;
                }
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * y;
                }
            }
        }
        Rref { rows: out, pivots: ech.pivots }
    }

    /// Kernel basis over the first `n` columns (pivots at or beyond `n` are ignored).
    pub fn kernel_basis(&self, n: usize) -> Vec<RatVector> {
        let pivot_cols: Vec<usize> = self.pivots.iter().copied().filter(|&c| c < n).collect();
        (0..n)
            .filter(|c| !pivot_cols.contains(c))
            .map(|f| {
                let mut v = vec![Rat::zero(); n];
                v[f] = Rat::one();
                for (k, &c) in pivot_cols.iter().enumerate() {
                    v[c] = -self.rows[k][f].clone();
                }
                v
            })
            .collect()
    }
}
