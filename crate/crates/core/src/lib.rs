// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod oracle;
pub mod orthopoly;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
