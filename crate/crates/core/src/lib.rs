//! # w1simplex
//!
//! The 1-Wasserstein distance between probability distributions on the
//! finite line `{1, …, n}` is the ℓ1 distance between their CDFs. This crate
//! computes that distance, and the exact first and second moments of it when
//! both distributions are drawn uniformly from the probability simplex.
//!
//! The first moment is reached three independent ways, all in exact rational
//! arithmetic:
//!
//! | Route | Module |
//! |-------|--------|
//! | polynomial recursion through the integral operator | [`moment_engine`] |
//! | closed form `2^(2n-3) (n-1) (n-1)!^2 / (2n-1)!` | [`moment_engine::first_moment`] |
//! | combinatorial recurrence `M(n,n)` | [`bourn_recurrence`] |
//!
//! and checked statistically by [`simplex_mc`]. The second moment has the
//! polynomial recursion and the closed form `(n-1)(7n-4) / (30n)`.
//!
//! ```
//! use w1simplex::exact_math::ratio;
//! use w1simplex::moment_engine::{first_moment, first_moment_via_recursion};
//! use w1simplex::bourn_recurrence::build_grid;
//!
//! let n = 6;
//! let closed = first_moment(n);
//! assert_eq!(closed, first_moment_via_recursion(n));
//! assert_eq!(&closed, build_grid(n, n).m(n, n));
//! assert_eq!(first_moment(2), ratio(1, 3));
//! ```
//!
//! [`verify`] runs every cross-check and reports pass/fail per suite.

pub mod bivariate_poly;
pub mod bourn_recurrence;
pub mod error;
pub mod exact_math;
pub mod moment_engine;
pub mod reference;
pub mod simplex_mc;
pub mod univariate;
pub mod verify;

pub use num_bigint;

pub use bivariate_poly::BivarPoly;
pub use bourn_recurrence::RecurrenceGrid;
pub use error::{Error, Result};
pub use exact_math::Rational;
pub use moment_engine::{CoeffKind, CoeffTable, MomentReport};
pub use simplex_mc::{CdfVector, McConfig, McEstimate};
