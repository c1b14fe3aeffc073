//! Files, parallel drivers and the command-line interface around
//! [`pr2d2ord_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod formats;
pub mod ingest;
pub mod report;
pub mod runner;
