pub mod arith;
pub mod cli;
pub mod error;
pub mod density;
pub mod family;
pub mod num_str;
pub mod oracle;
pub mod quadfield;
pub mod verify;
pub mod twist;
pub mod weierstrass;

pub use error::{Error, Result};
