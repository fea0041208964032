//! Complete assignments of a matrix model, permutations acting on them, and
//! the plain-text matrix format.
//!
//! Indices are 0-based everywhere in code and in files. The text format is a
//! header line `n m` followed by `n` lines of `m` space-separated integers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A complete `n_rows x n_cols` integer assignment stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    cells: Vec<i32>,
}

impl Matrix {
    pub fn new(n_rows: usize, n_cols: usize, cells: Vec<i32>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::invalid(format!("matrix dimensions must be positive, got {n_rows}x{n_cols}")));
        }
        if cells.len() != n_rows * n_cols {
            return Err(Error::invalid(format!(
                "{n_rows}x{n_cols} matrix needs {} cells, got {}",
                n_rows * n_cols,
                cells.len()
            )));
        }
        Ok(Matrix { n_rows, n_cols, cells })
    }

    /// Builds a matrix from nested rows. Panics on ragged or empty input, so
    /// it is meant for literals in code and tests.
    pub fn from_rows<R: AsRef<[i32]>>(rows: &[R]) -> Self {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == n_cols), "ragged rows");
        let cells = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Matrix::new(rows.len(), n_cols, cells).expect("non-empty rectangular rows")
    }

    pub fn filled(n_rows: usize, n_cols: usize, value: i32) -> Result<Self> {
        Matrix::new(n_rows, n_cols, vec![value; n_rows * n_cols])
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Cell `(i, j)`; out-of-range indices panic.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        assert!(i < self.n_rows && j < self.n_cols, "cell ({i},{j}) outside {}x{}", self.n_rows, self.n_cols);
        self.cells[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i32) {
        assert!(i < self.n_rows && j < self.n_cols, "cell ({i},{j}) outside {}x{}", self.n_rows, self.n_cols);
        self.cells[i * self.n_cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i32] {
        &self.cells[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn col(&self, j: usize) -> Vec<i32> {
        (0..self.n_rows).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i32]> {
        self.cells.chunks(self.n_cols)
    }

    /// Row-major cell storage.
    #[inline]
    pub fn cells(&self) -> &[i32] {
        &self.cells
    }

    pub fn transpose(&self) -> Matrix {
        let cells = (0..self.n_cols)
            .flat_map(|j| (0..self.n_rows).map(move |i| (i, j)))
            .map(|(i, j)| self.cells[i * self.n_cols + j])
            .collect();
        Matrix { n_rows: self.n_cols, n_cols: self.n_rows, cells }
    }

    /// `result(i, j) = self(rows(i), cols(j))`.
    pub fn permute(&self, rows: &Permutation, cols: &Permutation) -> Result<Matrix> {
        if rows.len() != self.n_rows || cols.len() != self.n_cols {
            return Err(Error::invalid(format!(
                "permutations of size {}x{} do not fit a {}x{} matrix",
                rows.len(),
                cols.len(),
                self.n_rows,
                self.n_cols
            )));
        }
        let cells = (0..self.n_rows)
            .flat_map(|i| (0..self.n_cols).map(move |j| (i, j)))
            .map(|(i, j)| self.cells[rows.apply(i) * self.n_cols + cols.apply(j)])
            .collect();
        Ok(Matrix { n_rows: self.n_rows, n_cols: self.n_cols, cells })
    }

    /// Applies `theta` to every cell. Every occurring value must be mapped.
    pub fn map_values(&self, theta: &BTreeMap<i32, i32>) -> Result<Matrix> {
        let cells = self
            .cells
            .iter()
            .map(|v| theta.get(v).copied().ok_or_else(|| Error::invalid(format!("value {v} is not mapped"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { n_rows: self.n_rows, n_cols: self.n_cols, cells })
    }

    /// Sorted distinct values occurring in the matrix.
    pub fn values(&self) -> Vec<i32> {
        let mut v = self.cells.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[")?;
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = r.iter().map(i32::to_string).collect();
            write!(f, "{}", s.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Writes the text format; `parse` of this output reproduces the matrix.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n_rows, self.n_cols)?;
        for r in self.rows() {
            let s: Vec<String> = r.iter().map(i32::to_string).collect();
            writeln!(f, "{}", s.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix(s)
    }
}

/// Parses the text format. Blank trailing lines are ignored; anything else
/// that deviates from the header or row shape is an error.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::parse("empty input"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = dims.as_slice() else {
        return Err(Error::parse(format!("header must be `n m`, got {header:?}")));
    };
    let n: usize = n.parse().map_err(|_| Error::parse(format!("bad row count {n:?}")))?;
    let m: usize = m.parse().map_err(|_| Error::parse(format!("bad column count {m:?}")))?;
    if n == 0 || m == 0 {
        return Err(Error::parse(format!("dimensions must be positive, got {n} {m}")));
    }

    let mut cells = Vec::new();
    let mut rows_read = 0usize;
    for (lineno, line) in lines {
        if rows_read == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(format!("line {}: more than {n} rows", lineno + 1)));
        }
        let before = cells.len();
        for tok in line.split_whitespace() {
            let v: i32 = tok.parse().map_err(|_| Error::parse(format!("line {}: bad integer {tok:?}", lineno + 1)))?;
            cells.push(v);
            if cells.len() - before > m {
                break;
            }
        }
        if cells.len() - before != m {
            return Err(Error::parse(format!("line {}: expected {m} values", lineno + 1)));
        }
        rows_read += 1;
    }
    if rows_read != n {
        return Err(Error::parse(format!("expected {n} rows, found {rows_read}")));
    }
    Matrix::new(n, m, cells)
}

/// A permutation of `0..len`, stored as its image vector.
///
/// Composition follows `(a ∘ b)(i) = a(b(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation((0..len).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() {
                return Err(Error::invalid(format!("index {x} out of range for permutation of {}", images.len())));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::invalid(format!("index {x} repeated in permutation")));
            }
        }
        Ok(Permutation(images))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// Every permutation of `0..len` in lexicographic order.
    pub fn all(len: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..len).collect();
        loop {
            out.push(Permutation(cur.clone()));
            if !next_permutation(&mut cur) {
                return out;
            }
        }
    }
}

/// Advances `v` to its lexicographic successor; returns false after the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `result(i, j) = m(sigma(i), pi(j))`.
pub fn apply_row_col_perm(m: &Matrix, sigma: &Permutation, pi: &Permutation) -> Result<Matrix> {
    m.permute(sigma, pi)
}

pub fn apply_value_map(m: &Matrix, theta: &BTreeMap<i32, i32>) -> Result<Matrix> {
    m.map_values(theta)
}

pub fn matrix_transpose(m: &Matrix) -> Matrix {
    m.transpose()
}
