use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("polynomial {0} is not irreducible mod {1}")]
    NotIrreducible(String, u64),
    #[error("polynomial degree {got}, expected {want}")]
    DegreeMismatch { got: usize, want: usize },
    #[error("operands belong to different rings ({left} vs {right})")]
    RingMismatch { left: String, right: String },
    #[error("element {0} is not a unit")]
    NotAUnit(String),
    #[error("index {index} out of range for {what} (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: u32,
        limit: u32,
    },
    #[error("internal cardinality mismatch in {what}: expected {expected}, got {got}")]
    InternalCardinalityError {
        what: &'static str,
        expected: String,
        got: String,
    },
    #[error("trace of {0} is not a constant polynomial")]
    TraceNotConstant(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("edge set contains a cycle")]
    CyclicGraph,
    #[error("work budget exceeded: operation needs ~{needed} units, budget {budget}")]
    WorkBudgetExceeded { needed: u128, budget: u64 },
    #[error("comparison still indeterminate at {bits} working bits")]
    PrecisionCapExceeded { bits: u32 },
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("cap exceeded for {what}: needs {needed}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: String,
    },
    #[error("sampling infeasible: {0}")]
    InfeasibleSampling(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("p^e = {p}^{e} does not fit the scalar type")]
    ScalarOverflow { p: u64, e: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
