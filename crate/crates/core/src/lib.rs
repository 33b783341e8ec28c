pub mod error;
pub mod numerics;
pub mod curve;
pub mod observables;
pub mod oracle;
pub mod partitions;
pub mod toprec;
pub mod verify;

pub use error::{Error, Result};
