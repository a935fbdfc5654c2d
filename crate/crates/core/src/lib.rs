pub mod adhm;
pub mod check;
pub mod dalgebra;
pub mod error;
pub mod io;
pub mod linalg;
pub mod moduli;
pub mod torus;

pub use error::{Error, Result};
