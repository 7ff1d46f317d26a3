//! Real-parameter benchmark functions on `[-100, 100]^D`, each with global
//! minimum 0.

use core::fmt;
use core::str::FromStr;

use alloc::string::String;
use alloc::sync::Arc;

use crate::evo::Bounds;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FunctionError {
    #[error("{function} needs at least {min} dimensions, got {got}")]
    TooFewDimensions {
        function: &'static str,
        min: usize,
        got: usize,
    },
    #[error("unknown function {0:?}; expected one of: rastrigin, rosenbrock, cigar")]
    Unknown(String),
}

pub const DOMAIN: Bounds = Bounds::new(-100.0, 100.0);

/// `sum(x_i^2 - 10 cos(2 pi x_i) + 10)`
pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|&xi| xi * xi - 10.0 * libm::cos(2.0 * core::f64::consts::PI * xi) + 10.0)
        .sum()
}

/// `sum_{i<D} 100 (x_i^2 - x_{i+1})^2 + (x_i - 1)^2`
pub fn rosenbrock(x: &[f64]) -> Result<f64, FunctionError> {
    if x.len() < 2 {
        return Err(FunctionError::TooFewDimensions {
            function: "rosenbrock",
            min: 2,
            got: x.len(),
        });
    }
    Ok(x.windows(2)
        .map(|w| {
            let a = w[0] * w[0] - w[1];
            let b = w[0] - 1.0;
            100.0 * a * a + b * b
        })
        .sum())
}

/// `x_1^2 + 10^6 sum_{i>1} x_i^2`
pub fn cigar(x: &[f64]) -> Result<f64, FunctionError> {
    if x.len() < 2 {
        return Err(FunctionError::TooFewDimensions {
            function: "cigar",
            min: 2,
            got: x.len(),
        });
    }
    let tail: f64 = x[1..].iter().map(|v| v * v).sum();
    Ok(x[0] * x[0] + 1e6 * tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BenchmarkFunction {
    Rastrigin,
    Rosenbrock,
    Cigar,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 3] = [Self::Rastrigin, Self::Rosenbrock, Self::Cigar];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rastrigin => "rastrigin",
            Self::Rosenbrock => "rosenbrock",
            Self::Cigar => "cigar",
        }
    }

    pub fn min_dim(self) -> usize {
        match self {
            Self::Rastrigin => 1,
            Self::Rosenbrock | Self::Cigar => 2,
        }
    }

    pub fn evaluate(self, x: &[f64]) -> Result<f64, FunctionError> {
        match self {
            Self::Rastrigin => Ok(rastrigin(x)),
            Self::Rosenbrock => rosenbrock(x),
            Self::Cigar => cigar(x),
        }
    }

    pub fn bounds(dim: usize) -> Arc<[Bounds]> {
        Bounds::uniform(dim, DOMAIN.low, DOMAIN.high)
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkFunction {
    type Err = FunctionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| FunctionError::Unknown(s.into()))
    }
}

/// Evaluates the function called `name` at `x`.
pub fn evaluate(name: &str, x: &[f64]) -> Result<f64, FunctionError> {
    name.parse::<BenchmarkFunction>()?.evaluate(x)
}
