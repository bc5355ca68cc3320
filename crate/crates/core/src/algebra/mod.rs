//! Exact scalar, polynomial, series and matrix arithmetic.

pub mod field;
pub mod matrix;
pub mod multiindex;
pub mod parse;
pub mod poly;
pub mod series;

pub use field::{is_prime, valuation, CoefficientField, Field, PrimeField, Rationals, Ring};
pub use matrix::{kernel, rank, rref, solve, Matrix, Subspace};
pub use multiindex::{monomial_count, multiindex_enumerate, MultiIndex};
pub use parse::{parse_rational, parse_rational_function};
pub use poly::{ratfun_taylor_at, Polynomial, RationalFunction, RationalFunctions};
pub use series::{
    series_arithmetic, series_substitute, SeriesOp, SeriesRing, TruncatedSeries, WeilAlgebra,
};
