use thiserror::Error;

/// Unified error type for the engine and the drivers built on top of it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),

    #[error("prime {0} is not an odd prime")]
    BadPrime(u64),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u8, u8),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("element is not a member of the subgroup")]
    NotAMember,

    #[error("class-1 group has the abelian root as parent; no projection below it")]
    RootReached,

    #[error("search budget of {limit} nodes exhausted")]
    BudgetExceeded { limit: u64 },

    #[error("step size {s} exceeds nuclear rank {nu}")]
    StepSizeExceedsNuclearRank { s: u32, nu: u32 },

    #[error("generator rank is {0}, expected 2")]
    GeneratorRankNot2(u32),

    #[error("abelianization is {0}, expected (p,p)")]
    AbelianizationNotPP(String),

    #[error("transfer kernel of order 1 on maximal subgroup {0}")]
    KernelOfOrderOne(usize),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),

    #[error("root has no parent edge")]
    RootHasNoParent,

    #[error("mainline index {0} beyond computed horizon {1}")]
    IndexBeyondHorizon(usize, usize),

    #[error("vertex {0} is marked expandable; tree horizon too small for this operation")]
    VertexNotExpanded(usize),

    #[error("branch horizon of {0} entries is too short to test any period")]
    HorizonTooShort(usize),

    #[error("no admissible child: expected exactly one, found {0}")]
    NoAdmissibleChild(usize),

    #[error("vertex lacks required annotations: {0}")]
    MissingAnnotations(String),

    #[error("no root-path template matches")]
    NoTemplateMatch,

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("catalog domain error: {0}")]
    CatalogDomain(String),

    #[error("unknown catalog id: {0}")]
    UnknownCatalogId(String),

    #[error("cache failure: {0}")]
    CacheFailure(String),

    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization failure: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
