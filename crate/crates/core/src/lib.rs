//! Exact root-system combinatorics and a certificate-producing rewrite
//! calculus for holonomy sequences of parabolic model spaces.

pub mod chevalley;
pub mod error;
pub mod holonomy;
pub mod notation;
pub mod parabolic;
pub mod prover;
pub mod rankone;
pub mod rootsystem;

pub use error::{Error, Result};
pub use holonomy::{
    AdmissibleOp, BoundednessStatus, Direction, HolonomyDescriptor, SignAssumption,
};
pub use parabolic::{ContextRef, ParabolicContext, SubsystemMap};
pub use rootsystem::{Root, RootSystem, Series};
