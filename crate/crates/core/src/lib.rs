#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod accel;
pub mod closedform;
pub mod error;
pub mod hypergeom;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
