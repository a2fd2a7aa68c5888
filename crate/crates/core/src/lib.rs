//! Computer algebra for the pro-unipotent fundamental-group structures of
//! P¹ ∖ ({0,∞} ∪ μ_N): truncated noncommutative series with concatenation
//! and shuffle products, the free graded Lie algebra on Lyndon bases, the
//! Ihara derivations / bracket / twisted group law, high-precision cyclotomic
//! multiple zeta values with shuffle regularization, dimension-bound
//! generating series, and LLL-based discovery of Q-linear coefficient
//! relations.

pub mod alphabet;
pub mod cfloat;
pub mod checks;
pub mod dims;
pub mod error;
pub mod ihara;
pub mod lie;
pub mod polylog;
pub mod relations;
pub mod scalar;
pub mod series;
pub mod textio;

pub use alphabet::{
    format_word, is_convergent, parse_word, permute_point, DihedralElement, ExtendedPoint,
    Letter, Level, Word,
};
pub use error::Error;
pub use scalar::{Ring, Scalar};
pub use series::Series;
