//! Dense matrices over a finite field.
//!
//! Vectors are rows and act on matrices from the left (`x·A`), so a codeword
//! is `m·G` for a message row `m` and generator `G`. Elimination picks the
//! first nonzero entry in each column as pivot.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::galois::{Field, Gf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("right-hand side is outside the row space")]
    NoSolution,
    #[error("index {index} out of range for universe of size {universe}")]
    IndexOutOfRange { index: usize, universe: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// A sorted, duplicate-free subset of `[0, universe)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    universe: usize,
    items: Vec<usize>,
}

impl IndexSet {
    /// Sorts `items`; rejects duplicates and out-of-range members.
    pub fn new(universe: usize, mut items: Vec<usize>) -> Result<Self, MatrixError> {
        items.sort_unstable();
        if let Some(&index) = items.iter().find(|&&i| i >= universe) {
            return Err(MatrixError::IndexOutOfRange { index, universe });
        }
        if let Some((a, _)) = items.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(MatrixError::DuplicateIndex(*a));
        }
        Ok(IndexSet { universe, items })
    }

    pub fn empty(universe: usize) -> Self {
        IndexSet {
            universe,
            items: Vec::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        IndexSet {
            universe,
            items: (0..universe).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.items.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.items.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        IndexSet {
            universe: self.universe,
            items: (0..self.universe).filter(|&i| !self.contains(i)).collect(),
        }
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.items.iter().all(|&i| other.contains(i))
    }

    pub fn union(&self, other: &IndexSet) -> Self {
        let items = self.items.iter().merge(other.items.iter()).dedup().copied().collect();
        IndexSet {
            universe: self.universe.max(other.universe),
            items,
        }
    }

    /// All subsets of the given size, in lexicographic order.
    pub fn combinations(universe: usize, size: usize) -> impl Iterator<Item = IndexSet> {
        (0..universe)
            .combinations(size)
            .map(move |items| IndexSet { universe, items })
    }

    /// All `2^universe` subsets, ordered by size then lexicographically.
    pub fn all_subsets(universe: usize) -> impl Iterator<Item = IndexSet> {
        (0..=universe).flat_map(move |size| Self::combinations(universe, size))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.items.iter().join(","))
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        f.write_str(&self.to_hex())
    }
}

/// Result of [`Matrix::rref`].
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: IndexSet,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// The full solution set of `x·A = b`: `particular + span(kernel)`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub particular: Vec<Gf>,
    pub kernel: Vec<Vec<Gf>>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Gf::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, Gf::ONE);
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Gf,
    ) -> Self {
        let data = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from rows of equal length. With no rows the width is
    /// taken from `cols`.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Gf>]) -> Result<Self, MatrixError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(MatrixError::ShapeMismatch {
                expected: format!("rows of length {cols}"),
                got: format!("row of length {}", bad.len()),
            });
        }
        if rows.iter().flatten().any(|&a| !field.contains(a)) {
            return Err(MatrixError::FieldMismatch);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Gf {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gf) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Gf] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Gf>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Columns `j` in order. Panics if any index is `>= cols`.
    pub fn select_columns(&self, j: &IndexSet) -> Matrix {
        let idx = j.as_slice();
        assert!(
            idx.last().is_none_or(|&c| c < self.cols),
            "column index out of range"
        );
        Matrix::from_fn(&self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), self.cols, |r, c| self.get(rows[r], c))
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch {
                expected: format!("{} columns", self.cols),
                got: format!("{} columns", other.cols),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, x: &[Gf]) -> Result<Vec<Gf>, MatrixError> {
        if x.len() != self.rows {
            return Err(MatrixError::ShapeMismatch {
                expected: format!("vector of length {}", self.rows),
                got: format!("length {}", x.len()),
            });
        }
        let f = &self.field;
        let mut out = vec![Gf::ZERO; self.cols];
        for (r, &coef) in x.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (slot, &a) in out.iter_mut().zip(self.row(r)) {
                *slot = f.add(*slot, f.mul(coef, a));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            data.extend(other.left_mul(self.row(r))?);
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.eliminate(self.cols);
        Rref {
            matrix: m,
            pivots: IndexSet {
                universe: self.cols,
                items: pivots,
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(self.cols).len()
    }

    /// In-place Gauss-Jordan elimination restricted to pivots in the first
    /// `pivot_cols` columns. Returns the pivot columns.
    fn eliminate(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(src) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if src != row {
                for c in 0..cols {
                    self.data.swap(src * cols + c, row * cols + c);
                }
            }
            let scale = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..cols {
                let v = self.get(row, c);
                self.set(row, c, f.mul(v, scale));
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == row || factor.is_zero() {
                    continue;
                }
                for c in col..cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// One row per line, each element as fixed-width lowercase hex.
    pub fn to_hex(&self) -> String {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&a| self.field.format_elem(a)).join(""))
            .join("\n")
    }

    pub fn from_hex(field: &Field, cols: usize, text: &str) -> Result<Matrix, MatrixError> {
        let width = field.hex_width();
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line.len() != width * cols || !line.is_ascii() {
                return Err(MatrixError::Parse(format!(
                    "expected {cols} symbols of width {width}, got `{line}`"
                )));
            }
            let row = (0..cols)
                .map(|c| {
                    field
                        .parse_elem(&line[c * width..(c + 1) * width])
                        .map_err(|e| MatrixError::Parse(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Matrix::from_rows(field, cols, &rows)
    }
}

/// Reusable solver for `x·A = b` with a fixed `A`.
///
/// Reduces `[Aᵀ | I]` once; each right-hand side then costs one
/// matrix-vector product.
#[derive(Debug, Clone)]
pub struct LeftSolver {
    field: Field,
    unknowns: usize,
    /// Row-reduced `[Aᵀ | T]`: the first `unknowns` columns hold the rref of
    /// `Aᵀ`, the rest the transform `T` with `T·Aᵀ = rref(Aᵀ)`.
    reduced: Matrix,
    pivots: Vec<usize>,
    kernel: Vec<Vec<Gf>>,
}

impl LeftSolver {
    pub fn new(a: &Matrix) -> Self {
        let unknowns = a.rows;
        let eqs = a.cols;
        let field = a.field.clone();
        let mut aug = Matrix::from_fn(&field, eqs, unknowns + eqs, |r, c| {
            if c < unknowns {
                a.get(c, r)
            } else if c - unknowns == r {
                Gf::ONE
            } else {
                Gf::ZERO
            }
        });
        let pivots = aug.eliminate(unknowns);
        let kernel = (0..unknowns)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Gf::ZERO; unknowns];
                v[free] = Gf::ONE;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = field.neg(aug.get(i, free));
                }
                v
            })
            .collect();
        LeftSolver {
            field,
            unknowns,
            reduced: aug,
            pivots,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{x : x·A = 0}`.
    pub fn kernel(&self) -> &[Vec<Gf>] {
        &self.kernel
    }

    /// A particular solution with free variables set to zero.
    pub fn particular(&self, b: &[Gf]) -> Result<Vec<Gf>, MatrixError> {
        let eqs = self.reduced.rows;
        if b.len() != eqs {
            return Err(MatrixError::ShapeMismatch {
                expected: format!("vector of length {eqs}"),
                got: format!("length {}", b.len()),
            });
        }
        let f = &self.field;
        let transformed = |row: usize| {
            self.reduced.row(row)[self.unknowns..]
                .iter()
                .zip(b)
                .fold(Gf::ZERO, |acc, (&t, &y)| f.add(acc, f.mul(t, y)))
        };
        if (self.rank()..eqs).any(|r| !transformed(r).is_zero()) {
            return Err(MatrixError::NoSolution);
        }
        let mut x = vec![Gf::ZERO; self.unknowns];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = transformed(i);
        }
        Ok(x)
    }

    pub fn solve(&self, b: &[Gf]) -> Result<Solution, MatrixError> {
        Ok(Solution {
            particular: self.particular(b)?,
            kernel: self.kernel.clone(),
        })
    }
}

/// All solutions of `x·a = b`.
pub fn solve_all(a: &Matrix, b: &[Gf]) -> Result<Solution, MatrixError> {
    if b.iter().any(|&v| !a.field.contains(v)) {
        return Err(MatrixError::FieldMismatch);
    }
    LeftSolver::new(a).solve(b)
}
