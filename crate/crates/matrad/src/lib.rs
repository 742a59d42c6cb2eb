pub mod error;
pub mod verify;
pub mod riesz;
pub mod radon;
pub mod fracint;
pub mod mcquad;
pub mod specialfn;
pub mod symcone;

pub use error::{Error, Result};
