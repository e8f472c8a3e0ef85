//! Nested coset coding for the erasure-erasure wiretap channel.
//!
//! A `k`-symbol secret `S` is encoded together with a uniformly random
//! `k*`-symbol vector `E` as `X = S·G + E·G*`, where `G` and `G*` generate
//! codes `C` and `C*` with `C ∩ C* = {0}`. A receiver that sees any `ν` of
//! the `n` symbols recovers `S`; an eavesdropper that sees any `μ` symbols
//! learns nothing, provided `D = C + C*` and `C*` are MDS with dimensions
//! `ν` and `μ`.
//!
//! Modules, bottom up:
//!
//! - [`galois`]: GF(p^m) arithmetic.
//! - [`matrix`]: dense linear algebra over a field and index sets.
//! - [`codes`]: linear codes, Reed-Solomon constructions, shortening and
//!   the dimension/length profile.
//! - [`wiretap`]: the nested scheme, encoder and decoder.
//! - [`analysis`]: exact equivocation, a brute-force oracle, and
//!   security/reliability verification.
//! - [`channel`]: fixed-count random erasure simulation.
//! - [`storage`]: share files for secure distributed storage.
//! - [`descriptor`]: the scheme descriptor document used by the CLI.

pub mod analysis;
pub mod channel;
pub mod codes;
pub mod descriptor;
pub mod galois;
pub mod matrix;
pub mod rng;
pub mod storage;
pub mod wiretap;

pub use analysis::{Equivocation, LeakageProfile, Mode, VerificationReport};
pub use codes::{LinearCode, Poly};
pub use galois::{Field, Gf};
pub use matrix::{IndexSet, Matrix};
pub use wiretap::{NestedScheme, Observation, Rate};
