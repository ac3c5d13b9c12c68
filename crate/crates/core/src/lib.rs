//! Genus-0 Gopakumar-Vafa invariants of the fiber classes `d1 [C1] + d2 [C2] + [C3]`
//! on the Banana manifold, in exact integer arithmetic.
//!
//! The invariants are computed three independent ways:
//!
//! * expanding the infinite product
//!   `12 prod_m (1 - x^m y^(m-1))^2 (1 - x^(m-1) y^m)^2 / (1 - x^m y^m)^4` ([`series`]);
//! * counting configurations built from partitions with distinct odd parts ([`partitions`]);
//! * brute-force enumeration of torus-fixed thickened curves with
//!   `chi(O_C) = 1` ([`oracle`], using the Euler calculus of [`curveconfig`]).
//!
//! [`invariants`] assembles the tables and checks the weak Jacobi form and
//! quadratic-norm identities.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod curveconfig;
pub mod invariants;
pub mod oracle;
pub mod partitions;
pub mod series;

pub use curveconfig::{Branch, BranchKind, CurveConfig, Edge};
pub use invariants::{InvariantTable, JacobiExpansion, Route};
pub use series::{BiSeries, ClassVector, LaurentQP, Trunc};
