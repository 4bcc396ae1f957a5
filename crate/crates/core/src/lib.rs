//! Abstract argumentation frameworks with epistemic probability functions.
//!
//! Belief assignments over the arguments of a Dung framework are checked
//! against rationality properties and completed by maximum entropy.

pub mod af;
pub mod cli;
pub mod epistemic;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod labelling;
pub mod lp;
pub mod maxent;
pub mod properties;
pub mod verify;

pub use af::{ArgId, ArgumentationFramework};
pub use epistemic::{JointDistribution, MarginalAssignment, PartialAssignment};
pub use error::{Error, Result};
pub use labelling::{Label, Labelling, Semantics};
pub use properties::{PropertyId, PropertyReport, Restriction, Violation};
