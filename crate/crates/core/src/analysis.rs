//! Exact secrecy analysis.
//!
//! All entropies are in base-`q` units and, for linear schemes, are whole
//! numbers: `H(S | X_J) = dim D_{I∖J} - dim C*_{I∖J}`. The brute-force
//! oracle reaches the same number without any rank computation, by
//! enumerating every `(S, E)` pair, binning codewords by their restriction
//! to `J`, and counting the messages left in each bin.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::sample_subset;
use crate::codes::LinearCode;
use crate::galois::Gf;
use crate::matrix::{binomial, IndexSet};
use crate::rng;
use crate::wiretap::{NestedScheme, Observation};

/// Largest `q^(k+k*)` the brute-force oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 24;
/// Largest number of index sets an exhaustive sweep will visit per size.
pub const EXHAUSTIVE_SUBSET_LIMIT: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("q^(k+k*) = {0} exceeds the enumeration bound 2^24")]
    TooLargeToEnumerate(String),
    #[error("posterior is not uniform for observation {0}")]
    NonUniformPosterior(String),
    #[error("C({n}, {size}) index sets exceed the exhaustive limit; use sampled mode")]
    ExhaustiveTooLarge { n: usize, size: usize },
    #[error("index set universe {got} does not match code length {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Conditional entropy of the secret in base-`q` units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equivocation {
    /// `log_q` of the number of equally likely messages, rounded down when
    /// not exact.
    pub dims: usize,
    pub exact: bool,
    /// Number of equiprobable candidate messages, when counted.
    pub raw_count: Option<u64>,
}

impl Equivocation {
    pub fn exact(dims: usize) -> Self {
        Equivocation {
            dims,
            exact: true,
            raw_count: None,
        }
    }
}

impl fmt::Display for Equivocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dims)?;
        if !self.exact {
            write!(f, " (inexact)")?;
        }
        if let Some(c) = self.raw_count {
            write!(f, " [{c} candidates]")?;
        }
        Ok(())
    }
}

fn check_universe(n: usize, j: &IndexSet) -> Result<(), AnalysisError> {
    if j.universe() != n {
        return Err(AnalysisError::LengthMismatch {
            expected: n,
            got: j.universe(),
        });
    }
    Ok(())
}

/// `dim D_{I∖J} - dim C*_{I∖J}`.
pub fn equivocation_formula(scheme: &NestedScheme, j: &IndexSet) -> Result<Equivocation, AnalysisError> {
    check_universe(scheme.n(), j)?;
    let d = scheme.sum_code().shortened_dim(j);
    let c = scheme.randomizer_code().shortened_dim(j);
    Ok(Equivocation::exact(d - c))
}

/// Ozarow-Wyner equivocation `n - |W| - dim C*_{I∖W}`.
pub fn ozarow_equivocation(randomizer: &LinearCode, w: &IndexSet) -> Result<Equivocation, AnalysisError> {
    check_universe(randomizer.len(), w)?;
    Ok(Equivocation::exact(
        randomizer.len() - w.len() - randomizer.shortened_dim(w),
    ))
}

/// Enumerates every `(S, E)` pair of a scheme.
///
/// Codewords are produced with an odometer over the message digits: when a
/// digit moves from `a` to `b`, the restricted codeword gains `(b - a)` times
/// the corresponding generator row. No rank or elimination is involved.
pub struct BruteForceOracle<'a> {
    scheme: &'a NestedScheme,
    rows: Vec<Vec<Gf>>,
    pairs: u64,
}

impl<'a> BruteForceOracle<'a> {
    pub fn new(scheme: &'a NestedScheme) -> Result<Self, AnalysisError> {
        let q = scheme.field().size() as u64;
        let digits = (scheme.k() + scheme.k_star()) as u32;
        let pairs = q
            .checked_pow(digits)
            .filter(|&p| p <= BRUTE_FORCE_LIMIT)
            .ok_or_else(|| AnalysisError::TooLargeToEnumerate(format!("{q}^{digits}")))?;
        let rows = scheme
            .message_code()
            .generator()
            .row_vecs()
            .into_iter()
            .chain(scheme.randomizer_code().generator().row_vecs())
            .collect();
        Ok(BruteForceOracle { scheme, rows, pairs })
    }

    pub fn equivocation(&self, j: &IndexSet) -> Result<Equivocation, AnalysisError> {
        check_universe(self.scheme.n(), j)?;
        let f = self.scheme.field();
        let q = f.size() as u64;
        let k = self.scheme.k();
        let cols = j.as_slice();
        let restricted: Vec<Vec<Gf>> = self
            .rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c]).collect())
            .collect();

        // bins[x][s] = number of randomizers E with (S=s, E) producing X_J = x
        let mut bins: HashMap<Vec<u16>, HashMap<Vec<u16>, u64>> = HashMap::new();
        let mut digits = vec![0u32; self.rows.len()];
        let mut word = vec![Gf::ZERO; cols.len()];
        for _ in 0..self.pairs {
            let key: Vec<u16> = word.iter().map(|g| g.value()).collect();
            let secret: Vec<u16> = digits[..k].iter().map(|&d| d as u16).collect();
            *bins.entry(key).or_default().entry(secret).or_default() += 1;

            // advance the odometer, least significant digit last
            for pos in (0..digits.len()).rev() {
                let old = Gf::from_raw(digits[pos] as u16);
                digits[pos] = (digits[pos] + 1) % q as u32;
                let delta = f.sub(Gf::from_raw(digits[pos] as u16), old);
                for (w, &g) in word.iter_mut().zip(&restricted[pos]) {
                    *w = f.add(*w, f.mul(delta, g));
                }
                if digits[pos] != 0 {
                    break;
                }
            }
        }

        let mut support: Option<u64> = None;
        for (x, posterior) in &bins {
            let mut counts = posterior.values();
            let first = *counts.next().expect("every bin holds at least one message");
            let size = posterior.len() as u64;
            if counts.any(|&c| c != first) || support.is_some_and(|s| s != size) {
                return Err(AnalysisError::NonUniformPosterior(format!("{x:?} on {j}")));
            }
            support = Some(size);
        }
        let support = support.unwrap_or(1);
        let mut dims = 0usize;
        let mut power = 1u64;
        while power * q <= support {
            power *= q;
            dims += 1;
        }
        Ok(Equivocation {
            dims,
            exact: power == support,
            raw_count: Some(support),
        })
    }
}

pub fn equivocation_bruteforce(scheme: &NestedScheme, j: &IndexSet) -> Result<Equivocation, AnalysisError> {
    BruteForceOracle::new(scheme)?.equivocation(j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, trials: usize },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Sampled { trials, .. } => write!(f, "sampled:{trials}"),
        }
    }
}

/// Index sets of one size visited by a sweep, and whether they are all of
/// them. Sampled mode enumerates outright when `C(n, size) <= trials`.
fn index_sets(n: usize, size: usize, mode: Mode) -> Result<(Vec<IndexSet>, bool), AnalysisError> {
    let total = binomial(n, size);
    match mode {
        Mode::Exhaustive => {
            if total > EXHAUSTIVE_SUBSET_LIMIT {
                return Err(AnalysisError::ExhaustiveTooLarge { n, size });
            }
            Ok((IndexSet::combinations(n, size).collect(), true))
        }
        Mode::Sampled { trials, .. } if total <= trials as u128 => {
            Ok((IndexSet::combinations(n, size).collect(), true))
        }
        Mode::Sampled { seed, trials } => {
            let mut rng = rng::seeded(seed, rng::stream::SAMPLING);
            let mut sets: Vec<IndexSet> = (0..trials).map(|_| sample_subset(&mut rng, n, size)).collect();
            sets.sort();
            sets.dedup();
            Ok((sets, false))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Security,
    Reliability,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Security => "security",
            Property::Reliability => "reliability",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub set: IndexSet,
    pub equivocation: usize,
    /// Decoder failure, when the violation is a failed round trip.
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub property: Property,
    pub reveal_count: usize,
    pub expected_equivocation: usize,
    pub mode: Mode,
    /// True when every index set of the size was checked.
    pub exhaustive: bool,
    pub checked: usize,
    /// Sorted by index set.
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// First line is `PASS` or `FAIL`; the rest is `key: value` lines followed
/// by one `violation` line per failing index set.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })?;
        writeln!(f, "property: {}", self.property)?;
        writeln!(f, "reveal_count: {}", self.reveal_count)?;
        writeln!(f, "expected_equivocation: {}", self.expected_equivocation)?;
        writeln!(f, "mode: {}", self.mode)?;
        if let Mode::Sampled { seed, trials } = self.mode {
            writeln!(f, "seed: {seed}")?;
            writeln!(f, "trials: {trials}")?;
        }
        writeln!(f, "exhaustive: {}", self.exhaustive)?;
        writeln!(f, "sets_checked: {}", self.checked)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            write!(f, "violation: {} equivocation={}", v.set, v.equivocation)?;
            if let Some(d) = &v.detail {
                write!(f, " decode={d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Checks `H(S | X_W) = k` for every (or every sampled) `W` with `|W| = μ`.
pub fn verify_security(scheme: &NestedScheme, mode: Mode) -> Result<VerificationReport, AnalysisError> {
    let (sets, exhaustive) = index_sets(scheme.n(), scheme.mu(), mode)?;
    let k = scheme.k();
    let violations: Vec<Violation> = sets
        .par_iter()
        .filter_map(|w| {
            let e = equivocation_formula(scheme, w).expect("universe matches").dims;
            (e != k).then(|| Violation {
                set: w.clone(),
                equivocation: e,
                detail: None,
            })
        })
        .collect();
    Ok(VerificationReport {
        property: Property::Security,
        reveal_count: scheme.mu(),
        expected_equivocation: k,
        mode,
        exhaustive,
        checked: sets.len(),
        violations,
    })
}

/// Checks `H(S | X_M) = 0` for every (or every sampled) `M` with `|M| = ν`,
/// and that a random `(S, E)` drawn from `payload_seed` decodes back to `S`
/// from `X_M`.
pub fn verify_reliability(
    scheme: &NestedScheme,
    mode: Mode,
    payload_seed: u64,
) -> Result<VerificationReport, AnalysisError> {
    let (sets, exhaustive) = index_sets(scheme.n(), scheme.nu(), mode)?;
    let mut rng = rng::seeded(payload_seed, rng::stream::PAYLOAD);
    let payloads: Vec<(Vec<Gf>, Vec<Gf>)> = sets
        .iter()
        .map(|_| {
            let s = scheme.random_vector(scheme.k(), &mut rng);
            let e = scheme.random_vector(scheme.k_star(), &mut rng);
            (s, e)
        })
        .collect();
    let violations: Vec<Violation> = sets
        .par_iter()
        .zip(payloads.par_iter())
        .filter_map(|(m, (s, e))| {
            let eq = equivocation_formula(scheme, m).expect("universe matches").dims;
            let x = scheme.encode(s, e).expect("payload has scheme dimensions");
            let obs = Observation::restrict(&x, m).expect("lengths match");
            let detail = match scheme.decode(&obs) {
                Ok(decoded) if &decoded == s => None,
                Ok(_) => Some("wrong secret".to_string()),
                Err(err) => Some(err.to_string()),
            };
            (eq != 0 || detail.is_some()).then(|| Violation {
                set: m.clone(),
                equivocation: eq,
                detail,
            })
        })
        .collect();
    Ok(VerificationReport {
        property: Property::Reliability,
        reveal_count: scheme.nu(),
        expected_equivocation: 0,
        mode,
        exhaustive,
        checked: sets.len(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakageRow {
    pub revealed: usize,
    pub min_equivocation: usize,
    pub max_equivocation: usize,
    pub exhaustive: bool,
}

/// Min/max equivocation per number of revealed symbols `m = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakageProfile {
    pub k: usize,
    pub rows: Vec<LeakageRow>,
}

pub const LEAKAGE_CSV_HEADER: &str = "m,min_equivocation,max_equivocation,min_leaked,max_leaked,exhaustive";

impl LeakageProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(LEAKAGE_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.revealed,
                r.min_equivocation,
                r.max_equivocation,
                self.k - r.max_equivocation,
                self.k - r.min_equivocation,
                r.exhaustive
            ));
        }
        out
    }
}

pub fn leakage_profile(scheme: &NestedScheme, mode: Mode) -> Result<LeakageProfile, AnalysisError> {
    let rows = (0..=scheme.n())
        .map(|m| {
            let (sets, exhaustive) = index_sets(scheme.n(), m, mode)?;
            let values: Vec<usize> = sets
                .par_iter()
                .map(|j| equivocation_formula(scheme, j).expect("universe matches").dims)
                .collect();
            Ok(LeakageRow {
                revealed: m,
                min_equivocation: *values.iter().min().expect("at least one set per size"),
                max_equivocation: *values.iter().max().expect("at least one set per size"),
                exhaustive,
            })
        })
        .collect::<Result<_, AnalysisError>>()?;
    Ok(LeakageProfile { k: scheme.k(), rows })
}
