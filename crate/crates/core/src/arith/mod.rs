//! Exact scalars over ℤ, ℚ and 𝔽_p, and the integer/field linear algebra
//! (Smith normal form, kernels, homology at a spot) behind every
//! homology computation in the crate.

mod matrix;
mod ring;
mod smith;

pub use matrix::ExactMatrix;
pub use ring::{RingSpec, Scalar};
pub use smith::{
    homology_of_pair, kernel_basis, rank, smith_normal_form, solve, ClassCoordinates, Homology,
    ModuleDescriptor, SmithForm,
};
