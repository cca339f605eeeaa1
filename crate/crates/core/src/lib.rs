//! Exact intersection-theoretic invariants of complete-intersection curve
//! fibrations in projective bundles over a curve, the slope coefficient
//! `lambda(n, d)`, and the signature bound for complete-intersection surface
//! singularities.
//!
//! Every scalar is an exact [`Rational`]; nothing in the computation path
//! uses floating point.

pub mod chow_ring;
pub mod exact_arith;
pub mod fibration_invariants;
pub mod oracles;
pub mod singularity_calc;
pub mod slope_elimination;
pub mod verify;

pub use exact_arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported argument: {0}")]
    UnsupportedArgument(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mismatched ring specs")]
    SpecMismatch,
    #[error("slope undefined: denominator zero for (n, d) = ({n}, {d})")]
    UndefinedSlope { n: i64, d: i64 },
    #[error("degenerate fiber genus: e' = {eprime} <= 0 for (n, d) = ({n}, {d})")]
    DegenerateFiberGenus { n: i64, d: i64, eprime: i64 },
    #[error("elimination singular: u - d v = 0 at (n, d, m) = ({n}, {d}, {m})")]
    EliminationSingular { n: i64, d: i64, m: i64 },
    #[error("degenerate elimination: zero K^2 coefficient at (n, d, m) = ({n}, {d}, {m})")]
    DegenerateElimination { n: i64, d: i64, m: i64 },
    #[error("inconsistent resolution data: {0}")]
    InconsistentData(String),
    #[error("oracle out of range: {0}")]
    OracleOutOfRange(String),
    #[error("internal cross-check mismatch: {0}")]
    CrossCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
