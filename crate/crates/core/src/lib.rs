#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod error;
pub mod fresnel;
pub mod factor;
pub mod medium;
pub mod metaclass;
pub mod quadric;
pub mod report;
pub mod sampling;
pub mod segre;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
