pub mod algebra;
pub mod arith;
pub mod barcomplex;
pub mod bvalgebra;
pub mod cyclic;
pub mod error;
pub mod isocheck;
pub mod resolution;

pub use arith::{ExactMatrix, ModuleDescriptor, RingSpec, Scalar};
pub use error::{Error, Result};
