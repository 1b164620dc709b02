//! Exact rational arithmetic and sparse linear algebra over Q.
//!
//! Matrices are stored row-major with each row a sorted list of
//! `(column, value)` pairs holding no explicit zeros.

use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Sparse row: sorted by column, no zero entries.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` as a rational.
pub fn sign_rat(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Parses `"p"` or `"p/q"`. Decimal and exponent notation are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    let parse_int = |x: &str| -> Result<BigInt, ExactError> {
        let x = x.trim();
        let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ExactError::Parse(s.to_string()));
        }
        x.parse::<BigInt>()
            .map_err(|_| ExactError::Parse(s.to_string()))
    };
    match t.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(t)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(ExactError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Formats as `"p"` or `"p/q"`, the inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn pow(r: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// `row += c * other`, both sorted sparse rows.
pub fn axpy_row(row: &SparseRow, c: &Rational, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            out.push((other[j].0, c * &other[j].1));
            j += 1;
        } else {
            let v = &row[i].1 + c * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|c| format_rational(&self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", line.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<HashMap<usize, Rational>> = vec![HashMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "triplet out of range");
            if v.is_zero() {
                continue;
            }
            *acc[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|m| {
                let mut row: SparseRow = m.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                row.sort_by_key(|e| e.0);
                row
            })
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[Vec<Rational>]) -> Self {
        let entries = columns.iter().enumerate().flat_map(|(c, col)| {
            assert_eq!(col.len(), nrows, "column length mismatch");
            col.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(r, v)| (r, c, v.clone()))
        });
        Matrix::from_triplets(nrows, columns.len(), entries)
    }

    pub fn from_sparse_rows(cols: usize, data: Vec<SparseRow>) -> Self {
        Matrix {
            rows: data.len(),
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

    pub fn row(&self, r: usize) -> &SparseRow {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let entries = self
            .data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (*c, r, v.clone())));
        Matrix::from_triplets(self.cols, self.rows, entries)
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, v * c)).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| axpy_row(a, &Rational::one(), b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: SparseRow = Vec::new();
                for (k, v) in row {
                    acc = axpy_row(&acc, v, &other.data[*k]);
                }
                acc
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !x[*c].is_zero())
                    .fold(Rational::zero(), |acc, (c, v)| acc + v * &x[*c])
            })
            .collect()
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                row
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        echelon(self.data.clone()).len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let rref = reduced_echelon(self.data.clone());
        let pivot_cols: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !is_pivot[*c]) {
            let mut x = vec![Rational::zero(); self.cols];
            x[free] = Rational::one();
            for row in &rref {
                if let Ok(i) = row.binary_search_by_key(&free, |e| e.0) {
                    x[row[0].0] = -row[i].1.clone();
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Some `x` with `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let aug: Vec<SparseRow> = self
            .data
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r = row.clone();
                if !bi.is_zero() {
                    r.push((self.cols, bi.clone()));
                }
                r
            })
            .collect();
        let rref = reduced_echelon(aug);
        let mut x = vec![Rational::zero(); self.cols];
        for row in &rref {
            let lead = row[0].0;
            if lead == self.cols {
                return None;
            }
            if let Some((c, v)) = row.last() {
                if *c == self.cols {
                    x[lead] = v.clone();
                }
            }
        }
        Some(x)
    }
}

/// Echelon form: returned rows have distinct leading columns and leading
/// coefficient one. Sparse rows are eliminated first to limit fill-in.
pub fn echelon(mut rows: Vec<SparseRow>) -> Vec<SparseRow> {
    rows.retain(|r| !r.is_empty());
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    for mut row in rows {
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => row = axpy_row(&row, &-coeff, p),
                None => {
                    let inv = coeff.recip();
                    for e in row.iter_mut() {
                        e.1 *= &inv;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    let mut out: Vec<SparseRow> = pivots.into_values().collect();
    out.sort_by_key(|r| r[0].0);
    out
}

/// Reduced row echelon form, rows ordered by leading column.
pub fn reduced_echelon(rows: Vec<SparseRow>) -> Vec<SparseRow> {
    let mut ech = echelon(rows);
    let index: HashMap<usize, usize> = ech.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
    for i in (0..ech.len()).rev() {
        let mut row = std::mem::take(&mut ech[i]);
        let mut pos = 1;
        while pos < row.len() {
            let (c, v) = row[pos].clone();
            match index.get(&c) {
                Some(&j) if j != i => {
                    row = axpy_row(&row, &-v, &ech[j]);
                }
                _ => pos += 1,
            }
        }
        ech[i] = row;
    }
    ech
}

/// Incrementally built echelon basis of a subspace of `Q^n`.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    pivots: HashMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` modulo the span by leading-term elimination.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut start = 0;
        while start < row.len() {
            let (lead, coeff) = row[start].clone();
            match self.pivots.get(&lead) {
                Some(p) => row = axpy_row(&row, &-coeff, p),
                None => start += 1,
            }
        }
        row
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds `row` to the span; returns `false` if it was already contained.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        let Some((lead, coeff)) = row.first().cloned() else {
            return false;
        };
        let inv = coeff.recip();
        for e in row.iter_mut() {
            e.1 *= &inv;
        }
        self.pivots.insert(lead, row);
        true
    }

    pub fn insert_dense(&mut self, v: &[Rational]) -> bool {
        self.insert(dense_to_sparse(v))
    }

    pub fn contains_dense(&self, v: &[Rational]) -> bool {
        self.contains(dense_to_sparse(v))
    }
}

/// Rank of the span of a family of dense vectors.
pub fn span_rank(vectors: &[Vec<Rational>]) -> usize {
    let rows = vectors.iter().map(|v| dense_to_sparse(v)).collect();
    echelon(rows).len()
}

pub fn dense_to_sparse(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Absolute value of the largest numerator or denominator; a cheap size proxy.
pub fn height(v: &[Rational]) -> BigInt {
    v.iter()
        .flat_map(|x| [x.numer().abs(), x.denom().abs()])
        .max()
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|x| int(*x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn parse_and_format_roundtrip() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational(" 2/-4 ").unwrap(), rat(-1, 2));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(matches!(
            parse_rational("1/0"),
            Err(ExactError::ZeroDenominator(_))
        ));
        assert_eq!(format_rational(&rat(-3, 9)), "-1/3");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).rank(), 2);
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(Matrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 4 - a.rank());
        for v in &k {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
        assert_eq!(span_rank(&k), k.len());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let b = vec![int(3), int(1), int(4)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.solve(&[int(3), int(1), int(5)]).is_none());
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[3, 0], &[1, 1]]);
        assert_eq!(a.mul(&b), m(&[&[5, 2], &[1, 1]]));
        assert_eq!(a.transpose(), m(&[&[1, 0], &[2, 1]]));
        assert_eq!(a.hstack(&b).cols(), 4);
        assert_eq!(a.vstack(&b).rank(), 2);
    }
}
