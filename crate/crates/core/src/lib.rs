//! Musielak–Orlicz spaces on discretized measure spaces.
//!
//! The crate evaluates Musielak–Orlicz functions and their parameters,
//! computes modulars and Luxemburg norms of simple functions, evaluates the
//! generalized Young conjugate `phi (-) phi_1` and its truncations, brackets
//! pointwise multiplier norms, and builds explicit factorizations `z = z0 z1`.
//!
//! It is `no_std` with `alloc`; the default `std` feature only enables
//! `std` for downstream convenience.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod conjugate;
pub mod error;
pub mod expr;
pub mod ext;
pub mod factorization;
pub mod family;
pub mod measure;
pub mod rng;
pub mod search;
pub mod spaces;
pub mod young;

/// Version of this library, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use conjugate::{ConjugateSpec, SRange, SupSolverConfig};
pub use error::{Error, Result};
pub use expr::Expr;
pub use ext::ExtReal;
pub use measure::{classify, DomainClassification, Label, MeasureSpace, Point, PointSet, SimpleFunction};
pub use young::{Family, MOFunction, MusielakOrlicz, YoungSlice, EPS_CONV, EPS_ROOT};
