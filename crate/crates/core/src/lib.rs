//! Spare-satellite strategy analytics for large constellations.
//!
//! A three-echelon supply chain (ground, parking orbits, constellation
//! planes) run under continuous-review (s,Q) policies: analytic evaluation,
//! a discrete-event simulator to check it against, a validation harness,
//! and a genetic-algorithm optimizer over the strategy variables.

pub mod chain;
pub mod cost;
pub mod error;
pub mod inventory;
pub mod leadtime;
pub mod optimizer;
pub mod orbits;
pub mod quadrature;
pub mod scenario;
pub mod sim;
pub mod validation;

pub use chain::{ConstellationConfig, LaunchParams, PolicyMetrics, SpareStrategy};
pub use cost::{CostBreakdown, CostParams};
pub use error::{Error, Result};
pub use scenario::Scenario;
