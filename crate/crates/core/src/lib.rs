pub mod channel;
pub mod code;
pub mod constraints;
pub mod decoder;
pub mod error;
pub mod frustration;
pub mod harness;
pub mod lp;
pub mod lpfc;

pub use error::{Error, Result};
