use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus: {0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("undefined symbol (0/0)")]
    UndefinedSymbol,
    #[error("moduli not pairwise coprime: gcd({0}, {1}) > 1")]
    ModuliNotCoprime(u64, u64),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(u64),
    #[error("insufficient precision: class number residue {residue} at {bits} bits")]
    InsufficientPrecision { bits: u32, residue: f64 },
    #[error("undecided at max precision ({0} bits)")]
    UndecidedAtMaxPrecision(u32),
    #[error("degenerate field: equal generators {0}")]
    DegenerateField(u64),
    #[error("ineligible triple ({q}, {k}, {r}): {reason}")]
    IneligibleTriple { q: u64, k: u64, r: u64, reason: String },
    #[error("hypothesis h_K = 2 fails: h_K = {0}")]
    ClassNumberHypothesisFails(u32),
    #[error("unit index inconsistent: 4 does not divide {index} * {h1} * {h2} * {h3}")]
    UnitIndexInconsistent { index: u32, h1: u32, h2: u32, h3: u32 },
    #[error("Q1 violation: no prime s < {0}, s = 3 (mod 4), with (s/{0}) = 1")]
    Q1Violation(u64),
    #[error("Q2 violation: no prime s < {0}, s = 3 (mod 4), with (s/{0}) = -1")]
    Q2Violation(u64),
    #[error("prime search bound {bound} exceeded for x0 = {x0} (mod {modulus})")]
    SearchBoundExceeded { x0: u64, modulus: u64, bound: u64 },
    #[error("certificate inconsistent: {0}")]
    CertificateInconsistent(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
