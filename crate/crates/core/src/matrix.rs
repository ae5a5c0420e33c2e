//! Dense exact-rational matrices and the elimination routines built on them.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    #[serde(with = "rational::serde_q::matrix")]
    data: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows. `cols` is needed to describe a matrix with no rows.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| rational::int(v)).collect())
            .collect();
        Self::from_rows(data, cols).expect("ragged literal matrix")
    }

    /// Parses the whitespace-separated matrix file format: one row per line,
    /// entries as integers, decimals or `p/q`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(rational::parse_rational)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Syntax {
                    line: ln + 1,
                    column: 1,
                    message: e.to_string(),
                })?;
            rows.push(row);
        }
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols).map(|j| self.column(j)).collect();
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let data = self
            .data
            .iter()
            .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
            .collect();
        Self {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            rows: rows.len(),
            cols: self.cols,
            data: rows.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "mul_vec dimension");
        self.data.iter().map(|r| rational::dot(r, v)).collect()
    }

    /// `a M` for a row vector `a`.
    pub fn left_mul(&self, a: &[Rational]) -> Vec<Rational> {
        assert_eq!(a.len(), self.rows, "left_mul dimension");
        let mut out = vec![Rational::zero(); self.cols];
        for (coef, row) in a.iter().zip(&self.data) {
            if coef.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += coef * x;
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension");
        let data = self.data.iter().map(|r| other.left_mul(r)).collect();
        Self {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.data.iter().all(|r| rational::all_nonneg(r))
    }

    /// Reduced row echelon form and the pivot column of each non-zero row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        (
            Self {
                rows: r,
                cols: self.cols,
                data: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, each with a unit
    /// entry in its free column. Entries are scaled to coprime integers.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_of = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            pivot_of[c] = Some(i);
        }
        for free in (0..self.cols).filter(|&c| pivot_of[c].is_none()) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -r.data[i][free].clone();
            }
            basis.push(primitive(&v));
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Vec::with_capacity(n);
        for (i, row) in self.data.iter().enumerate() {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            aug.push(r);
        }
        let (red, pivots) = Self::from_rows(aug, 2 * n).ok()?.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = red.data.iter().map(|r| r[n..].to_vec()).collect();
        Some(Self {
            rows: n,
            cols: n,
            data,
        })
    }
}

/// Scales a non-zero vector by a positive factor so its entries are coprime integers.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let den = rational::common_denominator(v);
    let ints: Vec<_> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

/// Canonical basis of the row space spanned by `vectors` (reduced echelon form, rows scaled to
/// coprime integers with a positive leading entry).
pub fn canonical_basis(vectors: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let m = RationalMatrix::from_rows(vectors.to_vec(), dim).expect("uniform vector length");
    m.rref().0.into_rows().iter().map(|r| primitive(r)).collect()
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(rational::render).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn is_positive(v: &[Rational]) -> bool {
    v.iter().all(Signed::is_positive)
}
