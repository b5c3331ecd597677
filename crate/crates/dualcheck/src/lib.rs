//! Exact symbolic workbench for matrices of linear differential operators.
//!
//! The crate is layered bottom-up:
//! - [`field`]: the differential field `K = Q(params)(x1..xn)`;
//! - [`ore`]: operators `a^μ d_μ`, their matrices, adjoints and composition;
//! - [`janet`]: jet-level linear algebra (prolongation, syzygies, ranks,
//!   Spencer δ-cohomology);
//! - [`duality`]: the five-step parametrizability test and its relatives;
//! - [`geom`]: named operators (Killing, Riemann, Einstein, Airy, ...) and
//!   the fixture registry.
//!
//! Everything is generic over an exact [`field::Scalar`]; the aliases below
//! fix it to arbitrary-precision rationals.

pub mod duality;
pub mod field;
pub mod geom;
pub mod janet;
pub mod ore;

pub use num_rational::BigRational;

/// The scalar field used by every concrete alias.
pub type Q = BigRational;
/// Rational function over `Q(params)(x)`.
pub type RatFunc = field::RatFunc<Q>;
pub type Poly = field::Poly<Q>;
pub type OreOperator = ore::OreOperator<Q>;
pub type OpMatrix = ore::OpMatrix<Q>;
