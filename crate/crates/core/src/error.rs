use thiserror::Error;

use crate::fan::FanReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fan file error: {0}")]
    FanSyntax(String),

    #[error("invalid fan:\n{0}")]
    InvalidFan(FanReport),

    #[error("cokernel of the ray pairing has torsion (diagonal entry {entry}); fan is not smooth/complete as required")]
    PicardTorsion { entry: String },

    #[error("rays do not span the ambient lattice (rank {rank} < {dim})")]
    RaysDoNotSpan { rank: usize, dim: usize },

    #[error("anticanonical divisor is not globally generated: exponent {value} on ray {ray} in cone {cone}")]
    AnticanonicalNotGloballyGenerated { cone: usize, ray: usize, value: i64 },

    #[error("fan has {n} rays, exceeding the supported maximum {max}")]
    TooManyRays { n: usize, max: usize },

    #[error("coordinate {index} is zero; all torsor coordinates must be nonzero")]
    ZeroCoordinate { index: usize },

    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },

    #[error("cone index {cone} out of range ({n_cones} maximal cones)")]
    ConeIndex { cone: usize, n_cones: usize },

    #[error("invalid count query: {0}")]
    BadQuery(String),

    #[error("estimated enumeration size {estimate} exceeds the cap {cap}; raise the cap to proceed")]
    EnumerationTooLarge { estimate: u64, cap: u64 },

    #[error("Picard rank {rank} exceeds the supported maximum {max} for exact polytope volume")]
    RankTooLarge { rank: usize, max: usize },

    #[error("polytope for the effective-cone volume is degenerate; anticanonical class is not big")]
    DegeneratePolytope,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid sieve problem: {0}")]
    BadSieveProblem(String),

    #[error("polynomial error: {0}")]
    Polynomial(String),

    #[error("polynomials are not coprime: common factor {0}")]
    NotCoprime(String),

    #[error("invalid experiment plan: {0}")]
    BadPlan(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
