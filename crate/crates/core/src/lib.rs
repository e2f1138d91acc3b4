//! Verification toolkit for fractional `[a,b]`-covered and fractional
//! `(a,b,k)`-critical covered graphs.
//!
//! Coveredness is decided two independent ways: [`criterion`] enumerates the
//! structural inequality `θ(S,T) >= ε(S)` over all vertex subsets, while
//! [`factor`] builds pinned fractional factors with integral flows.
//! [`hypothesis`] checks the neighborhood conditions in exact arithmetic and
//! [`extremal`] builds the family showing the ratio bound cannot be relaxed.

pub mod criterion;
pub mod extremal;
pub mod factor;
pub mod flow;
pub mod graph;
pub mod hypothesis;
pub mod io;
pub mod params;
pub mod subsets;
pub mod vset;

pub use criterion::{CoverageVerdict, CriterionCertificate};
pub use factor::{FractionalFactor, PinSet};
pub use graph::Graph;
pub use hypothesis::{HypothesisReport, NeighborhoodCondition};
pub use params::Params;
pub use subsets::EnumerationCap;
pub use vset::VertexSet;
