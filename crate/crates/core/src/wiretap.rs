//! The nested coset coding scheme.
//!
//! A secret `S ∈ F^k` and randomizer `E ∈ F^k*` are sent as
//! `X = S·G + E·G*`. The message `S` labels the coset `S·G + C*`, and the
//! randomizer picks a uniformly random member of that coset. When
//! `k* = n - k` this is Ozarow-Wyner coset coding with a perfect main
//! channel.
//!
//! Decoding from an observation `(J, X_J)` solves `(S, E)·[G; G*]_J = X_J`.
//! The `S` part of the solution is unique exactly when
//! `dim D_{I∖J} = dim C*_{I∖J}`; otherwise the decoder reports the gap.

use std::fmt;

use itertools::Itertools;
use rand::RngCore;
use thiserror::Error;

use crate::codes::{self, CodeError, LinearCode, Poly};
use crate::galois::{Field, Gf};
use crate::matrix::{IndexSet, LeftSolver, Matrix, MatrixError};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("secret dimension k = {k} exceeds nu - mu = {limit}")]
    CapacityViolation { k: usize, limit: usize },
    #[error("message and randomizer codes intersect nontrivially")]
    IntersectionNotTrivial,
    #[error("codes belong to different fields")]
    FieldMismatch,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {0} is not an element of the scheme field")]
    SymbolOutOfRange(Gf),
    #[error("observation is not a restriction of any codeword")]
    Inconsistent,
    #[error("observation leaves {gap} secret dimension(s) undetermined")]
    AmbiguousSecret { gap: usize },
    #[error("malformed text: {0}")]
    Parse(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Index(#[from] MatrixError),
}

/// An exact rate `num/den`, kept unreduced so `(ν - μ)/n` prints as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Value equality across different representations.
    pub fn same_value(self, other: Rate) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Secrecy capacity `(ν - μ)/n` of the erasure-erasure wiretap channel.
pub fn capacity(n: usize, nu: usize, mu: usize) -> Result<Rate, SchemeError> {
    if mu > nu {
        return Err(SchemeError::InvalidParams(format!("mu = {mu} > nu = {nu}")));
    }
    if nu > n || n == 0 {
        return Err(SchemeError::InvalidParams(format!("need 0 < nu = {nu} <= n = {n}")));
    }
    Ok(Rate {
        num: (nu - mu) as u64,
        den: n as u64,
    })
}

/// How the code pair was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// Evaluation-form Reed-Solomon: `C` spans degrees `0..k`, `C*` spans
    /// degrees `k..k+k*` on the given points.
    Eval { points: Vec<Gf> },
    /// Cyclic Reed-Solomon of length `q - 1`: `C* = ⟨g_randomizer⟩`,
    /// `D = ⟨g_sum⟩`, `C = {m·g_sum : deg m < k}`. `g_randomizer` is absent
    /// when `k* = 0`.
    Cyclic {
        g_sum: Poly,
        g_randomizer: Option<Poly>,
    },
    /// Ozarow-Wyner: `ν = n`, `C` spanned by unit vectors.
    OzarowWyner,
    Custom,
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::Eval { .. } => "eval",
            Construction::Cyclic { .. } => "cyclic",
            Construction::OzarowWyner => "ozarow-wyner",
            Construction::Custom => "custom",
        }
    }
}

/// A validated nested code pair `(C, C*)` for given channel parameters.
#[derive(Debug, Clone)]
pub struct NestedScheme {
    n: usize,
    nu: usize,
    mu: usize,
    message_code: LinearCode,
    randomizer_code: LinearCode,
    sum_code: LinearCode,
    construction: Construction,
}

impl NestedScheme {
    pub fn new(
        n: usize,
        nu: usize,
        mu: usize,
        message_code: LinearCode,
        randomizer_code: LinearCode,
    ) -> Result<Self, SchemeError> {
        if message_code.field() != randomizer_code.field() {
            return Err(SchemeError::FieldMismatch);
        }
        for code in [&message_code, &randomizer_code] {
            if code.len() != n {
                return Err(SchemeError::BadDimensions(format!(
                    "code length {} differs from n = {n}",
                    code.len()
                )));
            }
        }
        if mu > nu {
            return Err(SchemeError::InvalidParams(format!("mu = {mu} > nu = {nu}")));
        }
        if nu > n {
            return Err(SchemeError::InvalidParams(format!("nu = {nu} > n = {n}")));
        }
        let (k, k_star) = (message_code.dim(), randomizer_code.dim());
        if k + k_star > n {
            return Err(SchemeError::BadDimensions(format!(
                "k + k* = {} exceeds n = {n}",
                k + k_star
            )));
        }
        if k > nu - mu {
            return Err(SchemeError::CapacityViolation { k, limit: nu - mu });
        }
        if !message_code.trivial_intersection(&randomizer_code)? {
            return Err(SchemeError::IntersectionNotTrivial);
        }
        let sum_code = message_code.direct_sum(&randomizer_code)?;
        Ok(NestedScheme {
            n,
            nu,
            mu,
            message_code,
            randomizer_code,
            sum_code,
            construction: Construction::Custom,
        })
    }

    /// Evaluation-form Reed-Solomon pair on `α^0..α^(n-1)` with `k*` = `μ`
    /// and `k` defaulting to `ν - μ`.
    pub fn eval(field: &Field, n: usize, nu: usize, mu: usize, k: Option<usize>) -> Result<Self, SchemeError> {
        if mu > nu {
            return Err(SchemeError::InvalidParams(format!("mu = {mu} > nu = {nu}")));
        }
        let points = codes::default_points(field, n)?;
        Self::eval_on_points(field, &points, nu, mu, k.unwrap_or(nu - mu))
    }

    pub fn eval_on_points(
        field: &Field,
        points: &[Gf],
        nu: usize,
        mu: usize,
        k: usize,
    ) -> Result<Self, SchemeError> {
        let message = codes::rs_eval_code(field, points, 0, k)?;
        let randomizer = codes::rs_eval_code(field, points, k, mu)?;
        let mut scheme = Self::new(points.len(), nu, mu, message, randomizer)?;
        scheme.construction = Construction::Eval {
            points: points.to_vec(),
        };
        Ok(scheme)
    }

    /// Cyclic Reed-Solomon pair of length `q - 1` with `k* = μ` and `k`
    /// defaulting to `ν - μ`.
    pub fn cyclic(field: &Field, nu: usize, mu: usize, k: Option<usize>) -> Result<Self, SchemeError> {
        if mu > nu {
            return Err(SchemeError::InvalidParams(format!("mu = {mu} > nu = {nu}")));
        }
        let n = field.size() as usize - 1;
        let k = k.unwrap_or(nu - mu);
        let (_, g_sum) = codes::rs_cyclic_code(field, k + mu)?;
        let (randomizer, g_randomizer) = if mu == 0 {
            (LinearCode::zero(field, n), None)
        } else {
            let (code, g) = codes::rs_cyclic_code(field, mu)?;
            (code, Some(g))
        };
        let message = codes::poly_multiple_code(field, &g_sum, k, n)?;
        let mut scheme = Self::new(n, nu, mu, message, randomizer)?;
        scheme.construction = Construction::Cyclic { g_sum, g_randomizer };
        Ok(scheme)
    }

    /// Ozarow-Wyner coset coding for `C*` of dimension `n - k`: `ν = n`, and
    /// `C` is spanned by the unit vectors at the non-pivot columns of
    /// `rref(G*)`.
    pub fn ozarow_wyner(randomizer_code: LinearCode, mu: usize) -> Result<Self, SchemeError> {
        let field = randomizer_code.field().clone();
        let n = randomizer_code.len();
        let pivots = randomizer_code.generator().rref().pivots;
        let free = pivots.complement();
        let g = Matrix::from_fn(&field, free.len(), n, |r, c| {
            if free.as_slice()[r] == c {
                Gf::ONE
            } else {
                Gf::ZERO
            }
        });
        let message = LinearCode::new(g)?;
        let mut scheme = Self::new(n, n, mu, message, randomizer_code)?;
        scheme.construction = Construction::OzarowWyner;
        Ok(scheme)
    }

    pub fn with_construction(mut self, construction: Construction) -> Self {
        self.construction = construction;
        self
    }

    pub fn field(&self) -> &Field {
        self.message_code.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Secret length `k`.
    pub fn k(&self) -> usize {
        self.message_code.dim()
    }

    /// Randomizer length `k*`.
    pub fn k_star(&self) -> usize {
        self.randomizer_code.dim()
    }

    pub fn message_code(&self) -> &LinearCode {
        &self.message_code
    }

    pub fn randomizer_code(&self) -> &LinearCode {
        &self.randomizer_code
    }

    /// `D = C + C*`, generator `[G; G*]`.
    pub fn sum_code(&self) -> &LinearCode {
        &self.sum_code
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn capacity(&self) -> Rate {
        capacity(self.n, self.nu, self.mu).expect("validated at construction")
    }

    /// Secret rate `k/n` achieved by this scheme.
    pub fn rate(&self) -> Rate {
        Rate {
            num: self.k() as u64,
            den: self.n as u64,
        }
    }

    fn check_vector(&self, v: &[Gf], expected: usize) -> Result<(), SchemeError> {
        if v.len() != expected {
            return Err(SchemeError::LengthMismatch {
                expected,
                got: v.len(),
            });
        }
        match v.iter().find(|&&a| !self.field().contains(a)) {
            Some(&bad) => Err(SchemeError::SymbolOutOfRange(bad)),
            None => Ok(()),
        }
    }

    /// `X = S·G + E·G*`.
    pub fn encode(&self, secret: &[Gf], randomizer: &[Gf]) -> Result<Vec<Gf>, SchemeError> {
        self.check_vector(secret, self.k())?;
        self.check_vector(randomizer, self.k_star())?;
        let x = [secret, randomizer].concat();
        Ok(self.sum_code.encode(&x))
    }

    /// Encodes with `E` drawn from the randomizer stream of `seed`.
    pub fn encode_random(&self, secret: &[Gf], seed: u64) -> Result<(Vec<Gf>, Vec<Gf>), SchemeError> {
        let mut rng = rng::seeded(seed, rng::stream::RANDOMIZER);
        self.encode_with_rng(secret, &mut rng)
    }

    pub fn encode_with_rng<R: RngCore + ?Sized>(
        &self,
        secret: &[Gf],
        rng: &mut R,
    ) -> Result<(Vec<Gf>, Vec<Gf>), SchemeError> {
        let e = self.random_vector(self.k_star(), rng);
        let x = self.encode(secret, &e)?;
        Ok((x, e))
    }

    pub fn random_vector<R: RngCore + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Gf> {
        (0..len).map(|_| self.field().random(rng)).collect()
    }

    /// Prepares a decoder for a fixed revealed set.
    pub fn decoder(&self, j: &IndexSet) -> Result<Decoder, SchemeError> {
        if j.universe() != self.n || j.as_slice().last().is_some_and(|&i| i >= self.n) {
            return Err(SchemeError::LengthMismatch {
                expected: self.n,
                got: j.universe(),
            });
        }
        let restricted = self.sum_code.generator().select_columns(j);
        let solver = LeftSolver::new(&restricted);
        let k = self.k();
        let projections: Vec<Vec<Gf>> = solver.kernel().iter().map(|v| v[..k].to_vec()).collect();
        let gap = Matrix::from_rows(self.field(), k, &projections)
            .expect("kernel vectors are well formed")
            .rank();
        Ok(Decoder {
            j: j.clone(),
            k,
            solver,
            gap,
        })
    }

    pub fn decode(&self, obs: &Observation) -> Result<Vec<Gf>, SchemeError> {
        self.decoder(&obs.j)?.decode(&obs.symbols)
    }
}

/// Decoder for one revealed set. Reusable across many blocks observed on the
/// same positions.
#[derive(Debug, Clone)]
pub struct Decoder {
    j: IndexSet,
    k: usize,
    solver: LeftSolver,
    gap: usize,
}

impl Decoder {
    pub fn revealed(&self) -> &IndexSet {
        &self.j
    }

    /// Number of secret dimensions the revealed set leaves undetermined.
    pub fn gap(&self) -> usize {
        self.gap
    }

    pub fn decode(&self, symbols: &[Gf]) -> Result<Vec<Gf>, SchemeError> {
        if symbols.len() != self.j.len() {
            return Err(SchemeError::LengthMismatch {
                expected: self.j.len(),
                got: symbols.len(),
            });
        }
        let particular = match self.solver.particular(symbols) {
            Ok(x) => x,
            Err(MatrixError::NoSolution) => return Err(SchemeError::Inconsistent),
            Err(e) => return Err(e.into()),
        };
        if self.gap > 0 {
            return Err(SchemeError::AmbiguousSecret { gap: self.gap });
        }
        Ok(particular[..self.k].to_vec())
    }
}

/// Revealed positions `J` together with the symbols `X_J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub j: IndexSet,
    pub symbols: Vec<Gf>,
}

impl Observation {
    pub fn new(j: IndexSet, symbols: Vec<Gf>) -> Result<Self, SchemeError> {
        if j.len() != symbols.len() {
            return Err(SchemeError::LengthMismatch {
                expected: j.len(),
                got: symbols.len(),
            });
        }
        Ok(Observation { j, symbols })
    }

    /// `(J, X_J)` for a full codeword.
    pub fn restrict(codeword: &[Gf], j: &IndexSet) -> Result<Self, SchemeError> {
        if j.universe() != codeword.len() {
            return Err(SchemeError::LengthMismatch {
                expected: j.universe(),
                got: codeword.len(),
            });
        }
        Ok(Observation {
            j: j.clone(),
            symbols: j.iter().map(|i| codeword[i]).collect(),
        })
    }

    /// `index:value` lines sorted by index.
    pub fn to_text(&self, field: &Field) -> String {
        self.j
            .iter()
            .zip(&self.symbols)
            .map(|(i, &v)| format!("{i}:{}\n", field.format_elem(v)))
            .collect()
    }

    /// Parses `index:value` lines in any order. Blank lines and `#` comments
    /// are skipped.
    pub fn parse(text: &str, n: usize, field: &Field) -> Result<Self, SchemeError> {
        let mut pairs = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (idx, val) = line
                .split_once(':')
                .ok_or_else(|| SchemeError::Parse(format!("expected index:value, got `{line}`")))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| SchemeError::Parse(format!("bad index `{idx}`")))?;
            let val = field
                .parse_elem(val)
                .map_err(|e| SchemeError::Parse(e.to_string()))?;
            pairs.push((idx, val));
        }
        pairs.sort_by_key(|&(i, _)| i);
        let j = IndexSet::new(n, pairs.iter().map(|&(i, _)| i).collect())?;
        Observation::new(j, pairs.into_iter().map(|(_, v)| v).collect())
    }
}

/// Fixed-width hex symbols separated by single spaces.
pub fn format_symbols(field: &Field, symbols: &[Gf]) -> String {
    symbols.iter().map(|&s| field.format_elem(s)).join(" ")
}

pub fn parse_symbols(field: &Field, text: &str) -> Result<Vec<Gf>, SchemeError> {
    text.split_whitespace()
        .map(|t| field.parse_elem(t).map_err(|e| SchemeError::Parse(e.to_string())))
        .collect()
}
