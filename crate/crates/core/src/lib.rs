pub mod algebra;
pub mod corpus;
pub mod error;
pub mod homalg;
pub mod linalg;
pub mod module;
pub mod purity;
pub mod relative;
pub mod semidualizing;
pub mod verify;

pub use error::{Error, Result};
