use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("need a <= b, got a={a}, b={b}")]
    Order { a: u32, b: u32 },
    #[error("neighborhood conditions need 2 <= a <= b, got a={a}, b={b}")]
    NeighborhoodRegime { a: u32, b: u32 },
}

/// Degree bounds `[a, b]` and the number `k` of deleted vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub a: u32,
    pub b: u32,
    pub k: u32,
}

impl Params {
    /// Criterion regime: `0 <= a <= b`.
    pub fn new(a: u32, b: u32, k: u32) -> Result<Self, ParamError> {
        if a > b {
            return Err(ParamError::Order { a, b });
        }
        Ok(Self { a, b, k })
    }

    /// Neighborhood-condition regime: `2 <= a <= b`, `k >= 0`.
    pub fn neighborhood(a: u32, b: u32, k: u32) -> Result<Self, ParamError> {
        let p = Self::new(a, b, k)?;
        p.require_neighborhood_regime()?;
        Ok(p)
    }

    pub fn require_neighborhood_regime(&self) -> Result<(), ParamError> {
        if self.a < 2 || self.a > self.b {
            return Err(ParamError::NeighborhoodRegime { a: self.a, b: self.b });
        }
        Ok(())
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={}, k={})", self.a, self.b, self.k)
    }
}
