//! Finite commutative monoids, their spectra, topologies and sheaf
//! categories, and schemes glued from finitely many finite charts.
//!
//! Every construction is computed explicitly and paired with an exhaustive
//! verification routine that returns a [`check::CheckFailure`] witness when
//! a law does not hold.

pub mod bitset;
pub mod check;
pub mod corpus;
pub mod counterexample;
pub mod harness;
pub mod ideals;
pub mod lawvere;
pub mod localization;
pub mod monoid;
pub mod mset;
pub mod omega;
pub mod poset;
pub mod scheme;
pub mod sheaf;
pub mod topology;

pub use bitset::{BitSet, ElemSet};
pub use check::{CheckFailure, CheckResult};
pub use monoid::{Elem, FiniteCommMonoid, MonoidError, MonoidHom, Submonoid};
