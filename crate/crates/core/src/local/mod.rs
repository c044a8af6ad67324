//! Local algebra at the origin: standard bases, quotient dimensions and the
//! relative Milnor/Tjurina numbers.

mod invariants;
mod standard_basis;

pub use invariants::{
    invariants, jacobian_ideal, relative_jacobian_ideal, restricted_jacobian_ideal,
    InvariantRecord, LocalError,
};
pub use standard_basis::{
    quotient_dimension, standard_basis, LocalIdeal, QuotientDimension, StandardBasis,
};
