//! Exact finite-level models of `SL2` over a local nonarchimedean field.
//!
//! Everything is computed in the finite quotients `SL2(R/P^N)` of the maximal
//! compact subgroup, with the residue field an odd prime power `F_q` and the
//! integer ring realized in equal characteristic as `F_q[t]/(t^N)`.  On top of
//! that sit class functions (induced characters, inner products), the cuspidal
//! characters of `SL2(F_q)`, anisotropic tori and their characters, the
//! ramified induced representations of the maximal compact subgroup, and
//! branching tables for supercuspidal data.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature enables
//! the parallel reduction backend.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod abelian;
pub mod branching;
pub mod burnside;
pub mod classfun;
pub mod eigen;
pub mod errors;
pub mod field;
pub mod fqchars;
pub mod group;
pub mod local;
pub mod numeric;
pub mod parallel;
pub mod rng;
pub mod shalika;
pub mod supercusp;
pub mod tori;

pub use errors::{Error, Result};
pub use field::Field;
pub use local::{LocalElem, LocalField, SquareClass, Valuation};

/// Default tolerance for assertions that a complex quantity is an integer.
pub const DEFAULT_TOL: f64 = 1e-6;
