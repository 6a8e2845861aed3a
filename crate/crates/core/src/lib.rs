//! Operator algebra, Poisson tensors and flows of the two-dimensional Toda
//! lattice hierarchy on a periodic lattice.

pub mod brackets;
pub mod diffop;
pub mod error;
pub mod hierarchy;
pub mod io;
pub mod lattice;
pub mod pair;
pub mod reduction;
pub mod sample;
pub mod scalar;
pub mod state;
pub mod tensors;
pub mod verify;

pub use diffop::DiffOp;
pub use error::{Error, Result};
pub use lattice::LatticeFunction;
pub use pair::{PairElement, RMap};
pub use scalar::{rat, Rational, Scalar};
pub use state::{coordinate_differential, Family, LaxState};
pub use tensors::{apply_tensor, bracket_functionals, TensorId};
