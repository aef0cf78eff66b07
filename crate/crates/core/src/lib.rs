//! Finite racks and their crossed modules, computationally.
//!
//! Everything here is desk-scale and exact: racks are operation tables,
//! actions are bijection tables, group presentations are relator lists, and
//! the topological constructions (trunks, cubical nerves, coverings) become
//! finite combinatorics with integer linear algebra on top. Definitions are
//! validators, constructions are total functions that are checked against
//! those validators, and the library leans on exhaustive verification rather
//! than trusting any single code path.

pub mod action;
pub mod augmented;
pub mod bridge;
pub mod crossmod;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod homology;
pub mod linkdiag;
pub mod nerve;
pub mod perm;
pub mod permgroup;
pub mod present;
pub mod rack;
pub mod report;
pub mod snf;
pub mod trunk;
pub mod two_racks;

pub use error::{Error, Result};
pub use report::{ValidationReport, Violation};
