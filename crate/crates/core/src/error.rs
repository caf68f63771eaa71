use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the individual
/// operations so that callers (and the CLI exit-code mapping) can distinguish
/// configuration problems from computational obstructions.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("malformed group definition: {0}")]
    MalformedConfig(String),
    #[error("bad holonomy table: {0}")]
    BadTable(String),
    #[error("linear part for label '{label}' is not unimodular (det = {det})")]
    NonUnimodularMatrix { label: String, det: i64 },
    #[error("cocycle violation at pair ('{h1}', '{h2}'): offset {offset} is not integral")]
    CocycleViolation { h1: String, h2: String, offset: String },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("fixed locus is infinite: {0}")]
    InfiniteFixedLocus(String),
    #[error("little group is nonabelian: {0}")]
    NonabelianLittleGroup(String),
    #[error("no multiplicative extension exists: {0}")]
    InconsistentExtension(String),
    #[error("bad transversal: {0}")]
    BadTransversal(String),
    #[error("coset bookkeeping failed while inducing: {0}")]
    ElementEscapes(String),
    #[error("matrix of lattice element is not diagonal: {0}")]
    NotDiagonalOnLattice(String),
    #[error("assignment is missing symbol '{0}'")]
    MissingSymbol(String),
    #[error("value for symbol '{symbol}' is off the unit circle (|z| = {modulus})")]
    OffCircleValue { symbol: String, modulus: f64 },
    #[error("representation does not factor through the quotient: {0}")]
    DoesNotFactor(String),
    #[error("quotient group is nonabelian")]
    NonabelianQuotient,
    #[error("multiplicity is not within tolerance of an integer: {0}")]
    NonIntegerMultiplicity(String),
    #[error("bad section of the quotient map: {0}")]
    BadSection(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("{residue} is not a generator modulo {modulus}")]
    NotAGenerator { residue: u64, modulus: u64 },
    #[error("holonomy group is not cyclic: {0}")]
    NonCyclicHolonomy(String),
    #[error("transfer homomorphism is trivial")]
    TrivialTransfer,
    #[error("group has torsion: witness {0}")]
    NotTorsionFree(String),
    #[error("certificate invariant failed: {0}")]
    CertificateInvalid(String),
}
