//! Nation-to-nation scientific collaboration analysis.
//!
//! Publication records are ingested into a [`corpus::Corpus`], sliced by
//! specialty and year, and turned into [`netbuild::CollabNetwork`]s. The
//! [`metrics`] battery summarizes each network, [`impact`] aggregates
//! field-weighted citation impact per country combination, [`lmm`] fits the
//! random-intercept regression over those combinations and [`longit`]
//! compares snapshots across years. [`syngen`] produces seeded synthetic
//! corpora with known ground truth.

pub mod corpus;
pub mod countries;
pub mod error;
pub mod impact;
pub mod lmm;
pub mod longit;
pub mod metrics;
pub mod netbuild;
pub mod optim;
pub mod syngen;

pub use error::{Error, Result};
