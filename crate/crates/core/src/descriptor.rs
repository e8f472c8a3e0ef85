//! Scheme descriptor: a TOML document that pins down a nested scheme
//! exactly, including both generator matrices in row-hex form.
//!
//! The generator matrices are authoritative. Construction parameters, when
//! present, are checked against them on load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{CodeError, LinearCode, Poly};
use crate::galois::{Field, GaloisError};
use crate::matrix::{Matrix, MatrixError};
use crate::wiretap::{self, Construction, NestedScheme, SchemeError};

pub const FORMAT: &str = "eewt-scheme/1";

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("descriptor is not valid TOML: {0}")]
    Toml(String),
    #[error("unsupported descriptor format `{0}`")]
    Format(String),
    #[error(transparent)]
    Field(#[from] GaloisError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("descriptor is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalParams {
    /// Evaluation points, fixed-width hex separated by spaces.
    pub points: String,
    pub message_first_degree: usize,
    pub randomizer_first_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicParams {
    /// Generator polynomial of `D`, coefficients low degree first.
    pub g_sum: String,
    pub g_sum_degree: usize,
    pub g_sum_roots: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_randomizer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_randomizer_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_randomizer_roots: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeDescriptor {
    pub format: String,
    pub field: String,
    pub construction: String,
    pub n: usize,
    pub nu: usize,
    pub mu: usize,
    pub k: usize,
    pub k_star: usize,
    /// Secrecy capacity `(nu - mu)/n`, unreduced.
    pub capacity: String,
    pub capacity_approx: f64,
    /// `G`, one row per line.
    pub generator_message: String,
    /// `G*`, one row per line.
    pub generator_randomizer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<CyclicParams>,
}

fn roots_label(degree: usize) -> String {
    match degree {
        0 => "none".to_string(),
        1 => "alpha^1".to_string(),
        d => format!("alpha^1..alpha^{d}"),
    }
}

impl SchemeDescriptor {
    pub fn from_scheme(scheme: &NestedScheme) -> Self {
        let field = scheme.field();
        let capacity = scheme.capacity();
        let (eval, cyclic) = match scheme.construction() {
            Construction::Eval { points } => (
                Some(EvalParams {
                    points: wiretap::format_symbols(field, points),
                    message_first_degree: 0,
                    randomizer_first_degree: scheme.k(),
                }),
                None,
            ),
            Construction::Cyclic { g_sum, g_randomizer } => {
                let deg = |g: &Poly| g.degree().unwrap_or(0);
                (
                    None,
                    Some(CyclicParams {
                        g_sum: g_sum.to_hex(),
                        g_sum_degree: deg(g_sum),
                        g_sum_roots: roots_label(deg(g_sum)),
                        g_randomizer: g_randomizer.as_ref().map(Poly::to_hex),
                        g_randomizer_degree: g_randomizer.as_ref().map(deg),
                        g_randomizer_roots: g_randomizer.as_ref().map(|g| roots_label(deg(g))),
                    }),
                )
            }
            Construction::OzarowWyner | Construction::Custom => (None, None),
        };
        SchemeDescriptor {
            format: FORMAT.to_string(),
            field: field.to_string(),
            construction: scheme.construction().name().to_string(),
            n: scheme.n(),
            nu: scheme.nu(),
            mu: scheme.mu(),
            k: scheme.k(),
            k_star: scheme.k_star(),
            capacity: capacity.to_string(),
            capacity_approx: (capacity.to_f64() * 1e4).round() / 1e4,
            generator_message: scheme.message_code().generator().to_hex(),
            generator_randomizer: scheme.randomizer_code().generator().to_hex(),
            eval,
            cyclic,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("descriptor serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, DescriptorError> {
        let d: SchemeDescriptor = toml::from_str(text).map_err(|e| DescriptorError::Toml(e.to_string()))?;
        if d.format != FORMAT {
            return Err(DescriptorError::Format(d.format));
        }
        Ok(d)
    }

    pub fn to_scheme(&self) -> Result<NestedScheme, DescriptorError> {
        let field: Field = self.field.parse()?;
        let g = Matrix::from_hex(&field, self.n, &self.generator_message)?;
        let gs = Matrix::from_hex(&field, self.n, &self.generator_randomizer)?;
        if g.rows() != self.k || gs.rows() != self.k_star {
            return Err(DescriptorError::Inconsistent(format!(
                "generators have {} and {} rows but k = {}, k* = {}",
                g.rows(),
                gs.rows(),
                self.k,
                self.k_star
            )));
        }
        let scheme = NestedScheme::new(
            self.n,
            self.nu,
            self.mu,
            LinearCode::new(g)?,
            LinearCode::new(gs)?,
        )?;
        let (rebuilt, construction) = match self.construction.as_str() {
            "eval" => {
                let params = self
                    .eval
                    .as_ref()
                    .ok_or_else(|| DescriptorError::Inconsistent("missing [eval] table".into()))?;
                let points = wiretap::parse_symbols(&field, &params.points)?;
                let rebuilt = NestedScheme::eval_on_points(&field, &points, self.nu, self.mu, self.k)?;
                (Some(rebuilt), Construction::Eval { points })
            }
            "cyclic" => {
                let params = self
                    .cyclic
                    .as_ref()
                    .ok_or_else(|| DescriptorError::Inconsistent("missing [cyclic] table".into()))?;
                let rebuilt = NestedScheme::cyclic(&field, self.nu, self.mu, Some(self.k))?;
                let g_sum = Poly::from_hex(&field, &params.g_sum)?;
                let g_randomizer = params
                    .g_randomizer
                    .as_deref()
                    .map(|t| Poly::from_hex(&field, t))
                    .transpose()?;
                (Some(rebuilt), Construction::Cyclic { g_sum, g_randomizer })
            }
            "ozarow-wyner" => (None, Construction::OzarowWyner),
            "custom" => (None, Construction::Custom),
            other => {
                return Err(DescriptorError::Inconsistent(format!("unknown construction `{other}`")));
            }
        };
        if let Some(rebuilt) = rebuilt {
            if rebuilt.message_code() != scheme.message_code()
                || rebuilt.randomizer_code() != scheme.randomizer_code()
                || rebuilt.construction() != &construction
            {
                return Err(DescriptorError::Inconsistent(format!(
                    "generator matrices do not match the {} parameters",
                    self.construction
                )));
            }
        }
        Ok(scheme.with_construction(construction))
    }
}
