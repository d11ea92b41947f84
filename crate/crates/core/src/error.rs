use num_bigint::BigInt;
use thiserror::Error;

/// Domain errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a unit: {a} has no inverse modulo {m}")]
    NotAUnit { a: BigInt, m: BigInt },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not coprime: gcd({a}, {b}) != 1")]
    NotCoprime { a: BigInt, b: BigInt },

    #[error("not a Markov triple: ({0}, {1}, {2})")]
    NotMarkov(BigInt, BigInt, BigInt),

    #[error("Markov triple ({0}, {1}, {2}) violates the coprime / not-divisible-by-3 property")]
    MarkovArithmetic(BigInt, BigInt, BigInt),

    #[error("position {0} out of range, expected 0, 1 or 2")]
    BadPosition(usize),

    #[error("non-isolated quotient: weight {q} is not coprime to the order {r}")]
    NonIsolatedQuotient { r: BigInt, q: BigInt },

    #[error("smooth point: entry {0} has index 1")]
    SmoothPoint(BigInt),

    #[error("no bundle of rank 1 in the target set (entry {0})")]
    RankOne(BigInt),

    #[error("mutation not defined: h0 = {h0} must exceed the rank {rank}")]
    MutationNotDefined { h0: BigInt, rank: BigInt },

    #[error("not an exceptional class: rank {rank}, degree {degree}")]
    NotExceptionalClass { rank: BigInt, degree: BigInt },

    #[error("uniqueness violation: {count} Markov triples match rank {rank}, degree {degree}")]
    UniquenessViolation { rank: BigInt, degree: BigInt, count: usize },

    #[error("singularity {0} was expected to be of Wahl type")]
    NotWahl(String),

    #[error("degenerate fan: {0}")]
    DegenerateFan(String),

    #[error("vector {0} is not a primitive lattice vector")]
    NotPrimitive(String),

    #[error("vector {0} is not in the interior of the cone")]
    NotInterior(String),

    #[error("vector {0} does not lie in the lattice")]
    NotInLattice(String),

    #[error("expected an integer, got {0}")]
    NonIntegral(String),
}

pub type Result<T> = std::result::Result<T, Error>;
