pub mod cli;
pub mod error;
pub mod higgs;
pub mod parabolic;
pub mod scalar;
pub mod strata;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
