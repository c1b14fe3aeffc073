//! Bayesian ordinal probit regression under a shrinkage prior whose global
//! variance is calibrated so that McFadden's pseudo-R² follows a chosen
//! Beta law a priori.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation driven by an explicit random number generator: special
//! functions, the cumulative probit model, the Dirichlet-induced cut-point
//! prior, the generalized inverse Gaussian distribution, hyperparameter
//! elicitation, a No-U-Turn sampler with warmup adaptation, convergence
//! diagnostics and the simulation-study metrics. File formats, threading
//! and the command line live in the companion `pr2d2ord` crate.
//!
//! ```
//! use pr2d2ord_core::model::{mcfadden_r2, CutPoints};
//!
//! let tau = CutPoints::new(vec![1.0]).unwrap();
//! let r2 = mcfadden_r2(&[1, 2], &tau, 3.0).unwrap();
//! assert!((r2 - 0.23285).abs() < 1e-4);
//! ```
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// test builds link std, whose inherent float methods shadow the trait
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod cutpoint;
pub mod diagnostics;
pub mod draws;
pub mod elicit;
mod error;
pub mod gig;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod nuts;
pub mod optim;
pub mod posterior;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stats;
pub mod transform;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
