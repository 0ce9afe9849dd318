//! Exact computation of Artin and Swan conductors.
//!
//! This crate computes conductors of representations of local Galois and
//! Weil groups through several provably equal definitions and checks the
//! definitions against each other with zero rounding error:
//!
//! * [`exactnum`] — arbitrary-precision rationals and exact arithmetic in
//!   cyclotomic fields `Q(zeta_n)`.
//! * [`groups`] — finite groups given by multiplication tables, subgroups,
//!   quotients, conjugacy classes.
//! * [`ramification`] — lower/upper ramification filtrations and the
//!   Herbrand functions `phi`/`psi` as exact piecewise-linear maps.
//! * [`characters`] — cyclotomic-valued class functions, the conductor by
//!   Artin's sum and by both integral forms, the Artin/Swan class
//!   functions, twisting and depth.
//! * [`linalg`] — exact Gaussian elimination over cyclotomic fields.
//! * [`weildeligne`] — Weil-Deligne representations with nilpotent
//!   monodromy and the three conductor definitions compared.
//! * [`instances`] — generators of realizable (genuinely arithmetic) and
//!   random abstract test instances, plus independent oracles.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.
//!
//! The crate is `no_std`-compatible (it requires `alloc`); disable the
//! default `std` feature for embedded use.

#![cfg_attr(all(not(feature = "std"), not(test)), no_std)]

extern crate alloc;

pub mod characters;
pub mod exactnum;
pub mod groups;
pub mod instances;
pub mod linalg;
pub mod ramification;
pub mod weildeligne;

pub use exactnum::{Cyclotomic, Rational};
pub use groups::{FiniteGroup, Subgroup};
pub use ramification::{HerbrandFunction, RamifiedGroup};
