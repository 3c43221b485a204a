//! Permutation groups and their finest disjoint direct product decomposition.
//!
//! Points are `1..=degree` and act on the right (`p^(gh) = (p^g)^h`). Orbit
//! and level indices are zero-based.

pub mod apps;
pub mod ddpd;
pub mod error;
pub mod groups;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod stabchain;

pub use ddpd::{decompose, DecompositionResult, Factor};
pub use error::{Error, Result};
pub use partition::OrbitPartition;
pub use perm::{format_cycles, parse_cycles, Permutation, Point, PointSet};
pub use stabchain::{GroupHandle, OrbitStructure, StabilizerChain};
