#![allow(clippy::neg_cmp_op_on_partial_ord)] // !(x > 0) also rejects NaN
#![allow(clippy::excessive_precision, clippy::needless_range_loop)]

pub mod cli;
pub mod darboux;
pub mod ermakov;
pub mod error;
pub mod grid;
pub mod ode;
pub mod oracle;
pub mod potentials;
pub mod quad;
pub mod seeds;
pub mod specfun;

pub use error::{Error, Result};
