use thiserror::Error;

pub type Result<T> = std::result::Result<T, TfaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TfaError {
    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: usize, found: usize },

    #[error("{d} does not divide {n}")]
    NotADivisor { d: usize, n: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("signal has mass {mass:e} outside the subgroup generated by {a}")]
    OffSubgroupMass { a: usize, mass: f64 },

    #[error("input signal is identically zero")]
    ZeroSignal,

    #[error("modulus {0} is not prime")]
    CompositeModulus(usize),

    #[error("pair is not extremal: support has {support_size} points, minimum is {bound}")]
    NotExtremal { support_size: usize, bound: usize },

    #[error("numerically ambiguous classification: {0}")]
    NumericallyAmbiguous(String),

    #[error("table is not an auto-STFT (residual {residual:e})")]
    InconsistentTable { residual: f64 },

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid format: {0}")]
    Format(String),
}
