//! Bayesian model elimination.
//!
//! Composite models (a core hypothesis, a Gaussian prior on its one free
//! parameter, and auxiliary constraints on that parameter) are scored by
//! their marginal likelihood. Bayes factors, posteriors over model spaces,
//! sequential updating and elimination labels are built on top, and the
//! Neptune and Mercury episodes from the history of celestial mechanics are
//! shipped as runnable case studies.

pub mod cases;
pub mod error;
pub mod evidence;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod report;
pub mod scenario;
pub mod verify;

pub use error::{Error, Result};
pub use evidence::{LogEvidence, ModelPosterior, Observation, SignalDataset};
pub use model::{AuxiliaryConstraint, CompositeModel, GaussianPrior, Likelihood};
pub use numerics::LogValue;
pub use report::CaseReport;
