use thiserror::Error;

/// Errors raised by knot construction, representation building and torsion
/// computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p and q must be coprime (gcd({p}, {q}) = {gcd})")]
    NonCoprime { p: i64, q: i64, gcd: i64 },

    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: i64,
        expected: String,
    },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("meridian trace {trace} hits the excluded value {excluded}; retry with another t")]
    ExcludedTrace { trace: String, excluded: String },

    #[error(
        "irreducibility tests disagree (eigenvector test: {eigenvector}, trace test: {trace})"
    )]
    InconsistentTest { eigenvector: bool, trace: bool },

    #[error("matrix is not unimodular: |det - 1| = {deviation:e}")]
    NotUnimodular { deviation: f64 },

    #[error("chain condition violated: |d1 d2| / (|d1| |d2|) = {relative:e}")]
    ChainConditionViolated { relative: f64 },

    #[error("rank decision is ambiguous: singular value {value:e} lies within the band around the threshold {threshold:e}")]
    RankIndeterminate { value: f64, threshold: f64 },

    #[error(
        "twisted complex is not acyclic (rank d1 = {rank_d1}, rank d2 = {rank_d2}, 2N = {dim})"
    )]
    NotAcyclic {
        rank_d1: usize,
        rank_d2: usize,
        dim: usize,
    },

    #[error("base-change determinant is ill-conditioned at {bits} bits (condition estimate 10^{log10_cond:.1})")]
    IllConditioned { bits: u32, log10_cond: f64 },

    #[error(
        "component ({a}, {b}) has even parity; the closed and structured formulas need a, b odd"
    )]
    WrongParity { a: u32, b: u32 },

    #[error("denominator determinant {which} is singular")]
    SingularDenominator { which: &'static str },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("squeeze bound violated at N = {n}: {value} not in [{lo}, {hi}]")]
    BoundViolated {
        n: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("no precision up to {max_bits} bits produced a verified value")]
    PrecisionExhausted { max_bits: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
