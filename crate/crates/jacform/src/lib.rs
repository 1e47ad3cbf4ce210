//! Exact operator calculus for Jacobi forms of higher cogenus.
//!
//! This crate implements, over exact rational arithmetic, the covariant
//! differential-operator calculus on nearly holomorphic functions on the
//! Jacobi upper half space ℍ × ℂ^h, the constructive projection of nearly
//! holomorphic data onto tuples of holomorphic pieces, and the resulting
//! decomposition of Jacobi forms with a symmetric-power weight into tuples
//! of classical scalar Jacobi forms. Concrete forms are produced as lattice
//! theta series, and the covariance that the symbolic layer takes as input
//! is verified numerically through the slash action.
//!
//! The main entry points:
//!
//! - [`maass`]: raising/lowering operators, ladder compositions, commutator
//!   verification;
//! - [`project`]: the scalar decomposition of depth-bounded elements into
//!   holomorphic pieces moved by raising ladders;
//! - [`split`]: the vector-valued machinery — the non-holomorphic section,
//!   retracts, and the full decomposition/assembly round trip;
//! - [`theta`]: lattice theta series as concrete Jacobi forms;
//! - [`slash`]: numerical evaluation and slash-invariance checks;
//! - [`io`]: the exact JSON file format;
//! - [`cli`]: the `jacform` command-line front end.
//!
//! Every runnable capability also has a worked example under `examples/`.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod exact;
pub mod io;
pub mod maass;
pub mod nearly;
pub mod project;
pub mod slash;
pub mod split;
pub mod sympow;
pub mod theta;

pub use error::{Error, Result};
