//! Exact arithmetic for finitely generated class-2 nilpotent groups whose
//! derived subgroup is infinite cyclic, i.e. groups of the form
//! `Z^s x H_D`.
//!
//! Elements are stored in Mal'cev coordinates
//! `z_1^l_1 .. z_s^l_s a_1^i_1 b_1^j_1 .. a_r^i_r b_r^j_r c^k`, and every
//! operation here is pure integer arithmetic with overflow reported as an
//! error. Nothing in this crate touches IO or threads; it builds with
//! `#![no_std]` and only needs `alloc`.
//!
//! Modules:
//! - [`group`]: group specifications, elements and the group law.
//! - [`form`]: the commutator form on the abelianisation.
//! - [`class`]: conjugacy class keys and class moduli.
//! - [`automorphism`]: the matrix group preserving the form up to sign and
//!   automorphisms built from it.
//! - [`linalg`]: small exact integer linear algebra (rank, inverse, Hermite
//!   form, coset counting).
//! - [`gcdsum`]: gcd sums over lattice balls and the zeta function.
//! - [`quasi`]: quasi-polynomial detection on integer sequences.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod automorphism;
pub mod class;
pub mod error;
pub mod form;
pub mod gcdsum;
pub mod group;
pub mod linalg;
pub mod quasi;

pub use automorphism::{Automorphism, RankCase};
pub use class::ConjClassKey;
pub use error::{Error, Result};
pub use form::OmegaForm;
pub use group::{AbelianVector, GroupElement, GroupSpec};
pub use linalg::IntMatrix;
