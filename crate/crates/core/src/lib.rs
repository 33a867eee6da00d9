pub mod error;
pub mod linalg;

pub use error::{Error, Result};
pub mod words;
pub mod mapping_class;
pub mod schreier;
pub mod covers;
pub mod extensions;
pub mod oracle;
pub mod orbits;
pub mod selftest;
