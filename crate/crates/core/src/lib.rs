//! Small-time moments of the running supremum of pure-jump Lévy processes.
//!
//! The crate covers the process catalog and its Lévy triplets ([`levy`]),
//! path simulation ([`sampler`]), Monte Carlo estimation of
//! `E sup_{s≤t}|X_s|^p` ([`moment`]), and the small-time rate laws, both
//! predicted from the Blumenthal–Getoor index and fitted to curves ([`rates`]).

// `!(x > 0.0)` is used on purpose so that NaN is rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod levy;
pub mod moment;
pub mod quadrature;
pub mod rates;
pub mod sampler;
pub mod specfun;

pub use error::{Error, Result};
