//! Exact integer linear algebra: dense matrices, Smith normal form, kernels,
//! and the bounded solver for `X * K = T`.

mod matrix;
mod smith;
mod solve;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::ToBigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub use matrix::{Matrix, ShapeError};
pub use smith::{kernel_basis, snf, SmithForm};
pub use solve::{solve_matrix_eq, Constraint, MatrixEquation, MatrixSolutions, SolveError};

/// Exact integer scalar usable as a matrix entry.
///
/// Implemented for every signed integer type with the usual numeric traits;
/// in practice `BigInt` (what the CLI uses) and `i64`/`i128` for small
/// computations where overflow cannot occur.
pub trait ExactInt:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + ToBigInt + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + ToBigInt + Send + Sync + 'static
{
}

/// Widens a machine integer into `T`.
pub(crate) fn int<T: ExactInt>(v: i64) -> T {
    T::from_i64(v).expect("every ExactInt holds an i64")
}
