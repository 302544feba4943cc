pub mod arith;
pub mod linalg;
pub mod error;
pub mod testfn;

pub use error::{Error, Result};
pub mod intertwiner;
pub mod transform;
pub mod reduced;
pub mod cohomology;
pub mod deformation;
pub mod io;
