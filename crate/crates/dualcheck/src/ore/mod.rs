//! The ring `D = K[d1..dn]` of linear differential operators and matrices
//! over it.

mod lclm;
mod matrix;
mod operator;
pub mod print;

use thiserror::Error;

pub use lclm::lclm;
pub use matrix::OpMatrix;
pub use operator::{derive, OreOperator};

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("affine map is singular")]
    SingularMap,
    #[error("no common left multiple of order <= {0}; raise the bound")]
    BoundExceeded(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
}
