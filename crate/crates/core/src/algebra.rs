//! Algebra descriptors: a finite direct sum of simple Jordan factors.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Scalar field of a hermitian matrix factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// A simple summand of a finite-dimensional JBW algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `n × n` self-adjoint matrices over `field`, `n ≥ 2`.
    Herm { n: usize, field: Field },
    /// The spin factor `V_n = H_n ⊕ ℝ`, `n ≥ 2`.
    Spin { n: usize },
    /// The one-dimensional algebra `ℝ`.
    Real,
}

impl Factor {
    /// Real dimension of the factor.
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Herm {
                n,
                field: Field::Real,
            } => n * (n + 1) / 2,
            Factor::Herm {
                n,
                field: Field::Complex,
            } => n * n,
            Factor::Spin { n } => n + 1,
            Factor::Real => 1,
        }
    }

    /// Number of pairwise orthogonal minimal projections summing to the factor unit.
    pub fn rank(&self) -> usize {
        match *self {
            Factor::Herm { n, .. } => n,
            Factor::Spin { .. } => 2,
            Factor::Real => 1,
        }
    }

    /// Type I₂ factors: spin factors, and 2×2 hermitian matrices (`≅ V_2`, `V_3`).
    pub fn is_type_i2(&self) -> bool {
        matches!(self, Factor::Spin { .. } | Factor::Herm { n: 2, .. })
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Herm {
                n,
                field: Field::Real,
            } => write!(f, "Sym({n},ℝ)"),
            Factor::Herm {
                n,
                field: Field::Complex,
            } => write!(f, "Herm({n},ℂ)"),
            Factor::Spin { n } => write!(f, "V_{n}"),
            Factor::Real => write!(f, "ℝ"),
        }
    }
}

/// Descriptor of a finite direct sum of factors. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    factors: Arc<[Factor]>,
}

impl Algebra {
    /// Validates and canonicalizes the factor list. `Herm(1)` becomes `Real`.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDescriptor("empty factor list".into()));
        }
        let factors = factors
            .into_iter()
            .map(|f| match f {
                Factor::Herm { n: 0, .. } => Err(Error::InvalidDescriptor(
                    "hermitian factor needs n >= 1".into(),
                )),
                Factor::Herm { n: 1, .. } => Ok(Factor::Real),
                Factor::Spin { n } if n < 2 => Err(Error::InvalidDescriptor(format!(
                    "spin factor needs n >= 2, got {n}"
                ))),
                other => Ok(other),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            factors: factors.into(),
        })
    }

    pub fn herm(n: usize, field: Field) -> Self {
        Self::new(vec![Factor::Herm { n, field }]).expect("valid hermitian factor")
    }

    pub fn spin(n: usize) -> Self {
        Self::new(vec![Factor::Spin { n }]).expect("valid spin factor")
    }

    pub fn real_line() -> Self {
        Self::new(vec![Factor::Real]).expect("valid real line")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Total real dimension.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    /// Offset of each factor's coordinates in the global coordinate vector.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.factors
            .iter()
            .map(|f| {
                let o = acc;
                acc += f.dim();
                o
            })
            .collect()
    }

    /// Single factor of Type I₂ (spin or 2×2 hermitian).
    pub fn is_type_i2_factor(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].is_type_i2()
    }

    /// Exactly `ℝ ⊕ ℝ`.
    pub fn is_real_pair(&self) -> bool {
        self.factors.len() == 2 && self.factors.iter().all(|f| *f == Factor::Real)
    }

    pub fn has_type_i2_summand(&self) -> bool {
        self.factors.iter().any(Factor::is_type_i2)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawFactor {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    factors: Vec<RawFactor>,
}

impl RawFactor {
    fn parse(self) -> Result<Factor> {
        let need_n = |n: Option<usize>| {
            n.ok_or_else(|| Error::InvalidDescriptor(format!("factor `{}` needs `n`", self.kind)))
        };
        match self.kind.as_str() {
            "herm" => {
                let field = match self.field.as_deref().unwrap_or("real") {
                    "real" => Field::Real,
                    "complex" => Field::Complex,
                    "quaternion" | "quaternionic" => {
                        return Err(Error::UnsupportedFactor("herm over quaternions".into()))
                    }
                    other => {
                        return Err(Error::InvalidDescriptor(format!("unknown field `{other}`")))
                    }
                };
                Ok(Factor::Herm {
                    n: need_n(self.n)?,
                    field,
                })
            }
            "spin" => Ok(Factor::Spin { n: need_n(self.n)? }),
            "real" => Ok(Factor::Real),
            "quaternion" | "quaternionic" | "albert" | "exceptional" | "octonion" => {
                Err(Error::UnsupportedFactor(self.kind))
            }
            other => Err(Error::InvalidDescriptor(format!(
                "unknown factor kind `{other}`"
            ))),
        }
    }
}

impl From<&Factor> for RawFactor {
    fn from(f: &Factor) -> Self {
        match *f {
            Factor::Herm { n, field } => RawFactor {
                kind: "herm".into(),
                n: Some(n),
                field: Some(match field {
                    Field::Real => "real".into(),
                    Field::Complex => "complex".into(),
                }),
            },
            Factor::Spin { n } => RawFactor {
                kind: "spin".into(),
                n: Some(n),
                field: None,
            },
            Factor::Real => RawFactor {
                kind: "real".into(),
                n: None,
                field: None,
            },
        }
    }
}

impl Serialize for Algebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawAlgebra {
            factors: self.factors.iter().map(RawFactor::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Algebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawAlgebra::deserialize(d)?;
        let factors = raw
            .factors
            .into_iter()
            .map(RawFactor::parse)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Algebra::new(factors).map_err(serde::de::Error::custom)
    }
}
