//! Linear block codes.
//!
//! A code is stored as a full-rank `k × n` generator matrix. Besides the
//! Reed-Solomon constructions this module answers the two questions the
//! secrecy analysis needs:
//!
//! - `shortened_dim(J)`: the dimension of the subcode of codewords that
//!   vanish on every position of `J`, i.e. `k - rank(G_J)`.
//! - `dlp(i)`: the dimension/length profile, the largest dimension of a
//!   subcode supported inside some `i` positions.

use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use thiserror::Error;

use crate::galois::{Field, Gf};
use crate::matrix::{binomial, IndexSet, Matrix};
use crate::rng;

/// Largest length for which the DLP is computed exhaustively.
pub const DLP_EXHAUSTIVE_MAX_N: usize = 24;
/// Largest number of column subsets `is_mds` will enumerate.
pub const MDS_SUBSET_LIMIT: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("evaluation points are not distinct")]
    DuplicatePoints,
    #[error("evaluation point 0 cannot be used with a degree shift")]
    ZeroPointWithShift,
    #[error("invalid dimension {k} for length {n}")]
    InvalidDimension { k: usize, n: usize },
    #[error("exhaustive enumeration of {0} subsets is too large")]
    ExhaustiveTooLarge(String),
    #[error("codes belong to different fields")]
    FieldMismatch,
    #[error("codes have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("index {index} out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },
}

/// A polynomial over a field, lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Gf>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]", self.to_hex())
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn one(field: &Field) -> Self {
        Poly::new(field, vec![Gf::ONE])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::new(f, Vec::new());
        }
        let mut out = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Monic polynomial `∏ (x - r)` over the given roots.
    pub fn from_roots(field: &Field, roots: &[Gf]) -> Poly {
        roots.iter().fold(Poly::one(field), |acc, &r| {
            acc.mul(&Poly::new(field, vec![field.neg(r), Gf::ONE]))
        })
    }

    /// Quotient and remainder. Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Gf::ZERO; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let shift = rem.len() - 1 - dd;
            let factor = f.mul(*rem.last().unwrap(), lead_inv);
            quot[shift] = factor;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(factor, c));
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    pub fn eval(&self, x: Gf) -> Gf {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Gf::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Coefficients low degree first, fixed-width hex, space separated.
    pub fn to_hex(&self) -> String {
        self.coeffs.iter().map(|&c| self.field.format_elem(c)).join(" ")
    }

    pub fn from_hex(field: &Field, text: &str) -> Result<Poly, crate::galois::GaloisError> {
        let coeffs = text
            .split_whitespace()
            .map(|t| field.parse_elem(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(field, coeffs))
    }
}

/// An `(n, k)` linear code given by a full-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    pub fn new(generator: Matrix) -> Result<Self, CodeError> {
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(CodeError::RankDeficient {
                rank,
                rows: generator.rows(),
            });
        }
        Ok(LinearCode { generator })
    }

    /// The `(n, 0)` code.
    pub fn zero(field: &Field, n: usize) -> Self {
        LinearCode {
            generator: Matrix::zeros(field, 0, n),
        }
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn encode(&self, message: &[Gf]) -> Vec<Gf> {
        self.generator
            .left_mul(message)
            .expect("message length equals code dimension")
    }

    pub fn contains(&self, word: &[Gf]) -> bool {
        if word.len() != self.len() {
            return false;
        }
        let row = Matrix::from_rows(self.field(), self.len(), &[word.to_vec()]);
        match row {
            Ok(row) => self.generator.vstack(&row).map(|m| m.rank()) == Ok(self.dim()),
            Err(_) => false,
        }
    }

    /// Dimension of `{c ∈ C : c_j = 0 for all j ∈ J}`.
    pub fn shortened_dim(&self, j: &IndexSet) -> usize {
        self.dim() - self.generator.select_columns(j).rank()
    }

    /// Largest dimension of a subcode whose support lies inside some `i`
    /// positions, by enumeration of all `C(n, i)` supports.
    pub fn dlp(&self, i: usize) -> Result<usize, CodeError> {
        let n = self.len();
        if i > n {
            return Err(CodeError::IndexOutOfRange { index: i, n });
        }
        if n > DLP_EXHAUSTIVE_MAX_N {
            return Err(CodeError::ExhaustiveTooLarge(format!(
                "C({n}, {i}) (exhaustive profile needs n <= {DLP_EXHAUSTIVE_MAX_N})"
            )));
        }
        Ok(IndexSet::combinations(n, i)
            .map(|support| self.shortened_dim(&support.complement()))
            .max()
            .unwrap_or(0))
    }

    /// The full profile `k_0, ..., k_n`.
    pub fn dlp_profile(&self) -> Result<Vec<usize>, CodeError> {
        (0..=self.len()).map(|i| self.dlp(i)).collect()
    }

    /// Lower bound on `dlp(i)` from `trials` uniformly sampled supports.
    pub fn dlp_sampled(&self, i: usize, seed: u64, trials: usize) -> Result<usize, CodeError> {
        let n = self.len();
        if i > n {
            return Err(CodeError::IndexOutOfRange { index: i, n });
        }
        let mut rng = rng::seeded(seed, rng::stream::SAMPLING);
        Ok((0..trials)
            .map(|_| {
                let support = IndexSet::new(n, sample(&mut rng, n, i).into_vec())
                    .expect("sampled indices are distinct and in range");
                self.shortened_dim(&support.complement())
            })
            .max()
            .unwrap_or(0))
    }

    /// True iff every `k` columns of the generator are independent.
    pub fn is_mds(&self) -> Result<bool, CodeError> {
        let (n, k) = (self.len(), self.dim());
        let subsets = binomial(n, k);
        if subsets > MDS_SUBSET_LIMIT {
            return Err(CodeError::ExhaustiveTooLarge(format!("C({n}, {k})")));
        }
        Ok(IndexSet::combinations(n, k).all(|cols| self.generator.select_columns(&cols).rank() == k))
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<(), CodeError> {
        if self.field() != other.field() {
            return Err(CodeError::FieldMismatch);
        }
        if self.len() != other.len() {
            return Err(CodeError::LengthMismatch(self.len(), other.len()));
        }
        Ok(())
    }

    /// True iff every codeword of `self` lies in `outer`.
    pub fn is_subcode_of(&self, outer: &LinearCode) -> Result<bool, CodeError> {
        self.check_compatible(outer)?;
        let stacked = outer.generator.vstack(&self.generator).expect("compatible");
        Ok(stacked.rank() == outer.dim())
    }

    /// True iff the two codes share only the zero codeword.
    pub fn trivial_intersection(&self, other: &LinearCode) -> Result<bool, CodeError> {
        self.check_compatible(other)?;
        let stacked = self.generator.vstack(&other.generator).expect("compatible");
        Ok(stacked.rank() == self.dim() + other.dim())
    }

    /// `self + other` with the generators stacked, `self` on top. Requires a
    /// trivial intersection so the stacked matrix stays full rank.
    pub fn direct_sum(&self, other: &LinearCode) -> Result<LinearCode, CodeError> {
        self.check_compatible(other)?;
        LinearCode::new(self.generator.vstack(&other.generator).expect("compatible"))
    }
}

/// Generalized Reed-Solomon code in evaluation form: row `i` of the generator
/// is `(x_j^(first_degree + i))_j` for `i < k`.
pub fn rs_eval_code(
    field: &Field,
    points: &[Gf],
    first_degree: usize,
    k: usize,
) -> Result<LinearCode, CodeError> {
    let n = points.len();
    if points.iter().any(|&p| !field.contains(p)) {
        return Err(CodeError::FieldMismatch);
    }
    if !points.iter().all_unique() {
        return Err(CodeError::DuplicatePoints);
    }
    if first_degree > 0 && points.iter().any(|p| p.is_zero()) {
        return Err(CodeError::ZeroPointWithShift);
    }
    if k > n {
        return Err(CodeError::InvalidDimension { k, n });
    }
    let g = Matrix::from_fn(field, k, n, |r, c| {
        field.pow(points[c], (first_degree + r) as u64)
    });
    LinearCode::new(g)
}

/// `α^0, α^1, ..., α^(n-1)` for the field's primitive element `α`.
pub fn default_points(field: &Field, n: usize) -> Result<Vec<Gf>, CodeError> {
    let max = field.size() as usize - 1;
    if n > max {
        return Err(CodeError::InvalidDimension { k: n, n: max });
    }
    Ok((0..n).map(|i| field.alpha_pow(i as u64)).collect())
}

/// Generator matrix whose row `i` is the coefficient vector of `x^i·g(x)`,
/// `i < k`, in length `n`.
fn shifted_rows(field: &Field, g: &Poly, k: usize, n: usize) -> Matrix {
    let mut m = Matrix::zeros(field, k, n);
    for r in 0..k {
        for (d, &c) in g.coeffs().iter().enumerate() {
            m.set(r, r + d, c);
        }
    }
    m
}

/// Cyclic Reed-Solomon code of length `q - 1` and dimension `k`, with
/// generator polynomial `(x - α)(x - α²)···(x - α^(n-k))`.
pub fn rs_cyclic_code(field: &Field, k: usize) -> Result<(LinearCode, Poly), CodeError> {
    let n = field.size() as usize - 1;
    if k == 0 || k > n {
        return Err(CodeError::InvalidDimension { k, n });
    }
    let roots: Vec<Gf> = (1..=(n - k) as u64).map(|i| field.alpha_pow(i)).collect();
    let g = Poly::from_roots(field, &roots);
    let code = LinearCode::new(shifted_rows(field, &g, k, n))?;
    Ok((code, g))
}

/// The polynomial multiples `m(x)·g(x)` with `deg m < k`, in length `n`.
/// Used for the message code `C = {m·g_D}` of the cyclic nested pair.
pub fn poly_multiple_code(field: &Field, g: &Poly, k: usize, n: usize) -> Result<LinearCode, CodeError> {
    let deg = g.degree().unwrap_or(0);
    if g.is_zero() || k + deg > n {
        return Err(CodeError::InvalidDimension { k, n });
    }
    LinearCode::new(shifted_rows(field, g, k, n))
}
