#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
//! Numerics for determinantal edge processes between Gumbel and Tracy-Widom statistics.

extern crate alloc;

mod dd;
pub mod dpp;
pub mod error;
pub mod exec;
pub mod fredholm;
pub mod kernels;
pub mod limits;
pub mod linalg;
pub mod quad;
pub mod rmt;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
