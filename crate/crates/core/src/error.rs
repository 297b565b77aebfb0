use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{r} exceeds the bound {bound}")]
    FieldTooLarge { p: u64, r: u32, bound: u64 },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(u32),
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("operand does not belong to this field")]
    FieldMismatch,
    #[error("projection index {index} out of range 1..={r}")]
    ProjectionIndex { index: usize, r: u32 },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("gate {gate} references gate {target}, which does not precede it")]
    ForwardReference { gate: usize, target: usize },
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("degree {found} exceeds the bound {bound}")]
    DegreeOverflow { found: u32, bound: u32 },
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget { what: &'static str, needed: u128, limit: u128 },
    #[error("grid insufficient: class member #{member} vanishes on every grid point")]
    GridInsufficient { member: usize },
    #[error("hitting set verification failed at class member #{member}")]
    NotHitting { member: usize },
    #[error("extension field too small: q = {q} < d^2 = {needed}")]
    ExtensionTooSmall { q: u64, needed: u64 },
    #[error("monomial order mismatch: expected (n={expected_n}, d={expected_d}), got (n={n}, d={d})")]
    OrderMismatch { expected_n: usize, expected_d: u32, n: usize, d: u32 },
    #[error("coefficient at index {index} is outside {{-1, 0, 1}}")]
    NotDelta { index: usize },
    #[error("kernel is trivial: no nonzero vector vanishes on the hitting set")]
    EmptyKernel,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("target not embeddable: {0}")]
    NotEmbeddable(String),
    #[error("no {{-1,0,1}} witness found within budget (pigeonhole condition holds: {pigeonhole})")]
    WitnessNotFound { pigeonhole: bool },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
