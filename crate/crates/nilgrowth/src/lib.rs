//! Experiments on conjugacy growth of Heisenberg-type nilpotent groups:
//! balls and word metrics, conjugacy and twisted conjugacy counts,
//! commensurability embeddings, gcd sums and series analysis.

pub use nilgrowth_core as core;

pub mod ball;
pub mod cli;
pub mod conjugacy;
pub mod embeddings;
pub mod error;
pub mod gcd;
pub mod io;
pub mod manifest;
pub mod series;
pub mod twisted;
pub mod verify;

pub use error::{NilError, Result};
