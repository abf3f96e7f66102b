//! Differentially private Partial Set Cover and its application to
//! k-supplier with outliers.
//!
//! The crate provides:
//!
//! * [`model`]: set systems, facility-location instances, their text formats,
//!   coverage accounting and the neighbouring-instance relation.
//! * [`mechanisms`]: Laplace noise, the exponential mechanism, offline
//!   AboveThreshold and a composition ledger, all driven by a seedable
//!   [`NoiseSource`](mechanisms::NoiseSource).
//! * [`greedy_cover`]: private greedy permutation followed by a private
//!   threshold, giving a true approximation for Partial Set Cover.
//! * [`maxcov_cover`]: the maximum-coverage route, giving a
//!   pseudo-approximation via a private binary search over the optimum size.
//! * [`facility`]: a bicriteria private solver for the mobile vaccine clinic
//!   problem (k-supplier with outliers) by binary search on the radius.
//! * [`oracle`]: non-private baselines, exhaustive oracles and instance
//!   generators, including the lower-bound constructions.

pub mod error;
pub mod facility;
pub mod greedy_cover;
pub mod maxcov_cover;
pub mod mechanisms;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
pub use mechanisms::{NoiseSource, PrivacyBudget, PrivacyLedger};
pub use model::{CoverRequirement, SetSystem, VaccInstance};
