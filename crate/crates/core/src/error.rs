use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generators: {0}")]
    InvalidGenerators(String),

    #[error("{m} is not in the numerical semigroup generated by {gens:?}")]
    NotInSemigroup { m: u64, gens: Vec<u64> },

    #[error("{what} = {value} exceeds the supported cap of {cap}")]
    TooLarge {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("homogenizing variable x{var} already occurs in the polynomial")]
    HomVarOccurs { var: usize },

    #[error("more than one rewrite rule for x{var}")]
    RuleConflict { var: usize },

    #[error("invalid rewrite rule: {0}")]
    InvalidRule(String),

    #[error("gcd(l, m) = gcd({ell}, {m}) is not 1")]
    NotCoprime { ell: u64, m: u64 },

    #[error("largeness condition fails: {0}")]
    ConditionFails(String),

    #[error("rewrite rules do not have a supported shape: {0}")]
    ShapeMismatch(String),

    #[error("extension is not nice (delta(m) = {delta} <= l = {ell})")]
    NotNiceExtension { delta: u64, ell: u64 },

    #[error("extension is not bad (delta(m) = {delta} > l = {ell})")]
    NotBadExtension { delta: u64, ell: u64 },

    #[error("equation does not vanish on the curve: {0}")]
    DoesNotVanish(String),

    #[error("toric degree bound {bound} exceeds the maximum of {max}")]
    BoundTooLarge { bound: u32, max: u32 },

    #[error("invalid finite field size {0}: need a prime in 3..=101")]
    InvalidField(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Exit code of the `stci` binary for this error: 3 when a construction
    /// precondition fails, 2 for every other usage or domain error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConditionFails(_)
            | Error::ShapeMismatch(_)
            | Error::NotNiceExtension { .. }
            | Error::NotBadExtension { .. } => 3,
            _ => 2,
        }
    }
}
