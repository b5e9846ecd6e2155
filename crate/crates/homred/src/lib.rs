//! Verification, classification, and reduction of homogeneous Riemannian
//! structures on chart-based manifolds.
//!
//! (Crate-level guide is written last; see module docs meanwhile.)

pub mod bundle;
pub mod catalog;
pub mod contact;
pub mod homstruct;
pub mod liered;
pub mod manifold;
pub mod numkit;
