pub mod cones;
pub mod error;
pub mod functors;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod subspace;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{relative_residual, Mat, Svd, Tolerances};
pub use scalar::{Field, Scalar};
pub use subspace::Subspace;
