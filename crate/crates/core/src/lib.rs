//! Finite local groups `S(G, L, f)`, rank-1 κ-term canonical forms, and a
//! decision procedure for κ-identities of rank at most 1 over `LG` and `S`.

pub mod decide;
pub mod error;
pub mod formats;
pub mod groups;
pub mod kappa;
pub mod langdecomp;
pub mod localgroups;
pub mod words;

pub use error::{Error, Result};
