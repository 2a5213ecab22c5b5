#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod derived;
pub mod error;
pub mod exactla;
pub mod modcx;
pub mod par;
pub mod resolve;
pub mod simpset;

pub use error::{Error, Result};
