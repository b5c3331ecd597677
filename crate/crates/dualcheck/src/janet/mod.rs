//! Formal integrability machinery: prolongations, compatibility conditions,
//! membership, symbols and their δ-cohomology.

pub mod jet;
mod pp;
mod symbol;
mod syzygy;

pub use jet::{dim_jet, dim_sym, prolong, JetMatrix, JetSpace};
pub use pp::{
    first_order_reduction, polynomial_solutions, pp_reduce, spencerize, PpReport, Spencerized,
};
pub use symbol::{
    delta_cohomology_dims, delta_map, delta_rank, janet_fibers_finite_type,
    janet_fibers_zero_symbol, spencer_fibers, CohomologyEntry, SymbolTableau,
};
pub use syzygy::{
    cc, membership, normalize_row, rank_d, resolution, row_module_equal, rows_in_module,
    specialize, CcResult, Membership, MembershipVerdict,
};

use crate::field::FieldError;
use crate::ore::OreError;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum JanetError {
    #[error("search bound {0} exceeded")]
    BoundExceeded(u32),
    #[error("system is not of finite type up to order {0}")]
    NotFiniteType(u32),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
