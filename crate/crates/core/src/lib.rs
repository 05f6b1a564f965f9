//! Core of a CATT implementation with naturality.
//!
//! The crate is layered bottom-up: [`kernel`] holds the syntax and the
//! type checker, [`pasting`] the pasting-context combinatorics,
//! [`metaops`] suspension and opposites, [`naturality`] the functorial
//! lift of terms along up-closed variable sets, and [`geometry`] the
//! cylinder and cone composites built from it.

pub mod error;
pub mod geometry;
pub mod kernel;
pub mod metaops;
pub mod naturality;
pub mod pasting;
pub mod properties;

pub use error::{Error, Result};
pub use kernel::{Ctx, Head, Sub, Term, TermKind, Ty, TyKind, Var};
