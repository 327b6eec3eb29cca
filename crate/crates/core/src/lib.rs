//! Stability analysis for compartmental epidemic models built on compound
//! matrices and Lozinskii measures.
//!
//! The numeric kernels ([`matrix`], [`compound`], [`lozinskii`],
//! [`stability`]) are model-agnostic. [`covid`] and [`seir`] hold the two
//! models, [`sim`] integrates them, and [`paper_check`] compares printed
//! closed forms against numerically derived values.

// `!(x > 0.0)` style tests deliberately treat NaN as a failure
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compound;
pub mod covid;
pub mod error;
pub mod lozinskii;
pub mod matrix;
pub mod paper_check;
pub mod seir;
pub mod sim;
pub mod stability;

pub use compound::{add_compound, add_compound2_closed, mult_compound};
pub use covid::{CovidParams, CovidState, DerivedParams, Equilibrium, EquilibriumKind, NgmParts};
pub use error::{Error, Result};
pub use lozinskii::{measure, MeasureKind};
pub use matrix::{Matrix, Spectrum};
pub use paper_check::{ClaimEntry, ClaimValue, ClaimVerdict, PaperCheckReport};
pub use seir::SeirParams;
pub use sim::{integrate, InvarianceAudit, Trajectory};
pub use stability::{CubicRoots, Outcome, Verdict};
