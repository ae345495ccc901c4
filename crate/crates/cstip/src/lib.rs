//! Crack-tip asymptotics for an antiplane interface crack between
//! couple-stress elastic materials, and between a couple-stress and a
//! classical elastic material.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conditions;
pub mod eigen;
pub mod error;
pub mod fields;
pub mod jintegral;
pub mod material;
pub mod quad;
pub mod reference;
pub mod termalg;
pub mod verify;

pub use error::{Error, Result};
