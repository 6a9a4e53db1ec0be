use crate::dof::CellConfig;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{field} must be a positive integer, got {value}")]
    NonPositive { field: &'static str, value: i64 },

    #[error("stream fraction {name} = {value} is outside [0, 1]")]
    LambdaOutOfRange { name: &'static str, value: String },

    #[error("allocation violates constraint {constraint}")]
    InfeasibleAllocation { constraint: String },

    #[error("lambda1 must be positive to build a transmission plan")]
    ZeroLambda1,

    #[error("feasible region is empty")]
    EmptyFeasibleRegion,

    #[error("(T+1)^(N1*N2) = {requested} exceeds the supported cap of {cap}")]
    SizeCap { requested: u128, cap: u64 },

    #[error("null space has {available} dimensions, {needed} required")]
    InsufficientNullSpace { needed: usize, available: usize },

    #[error("regime rows {rows:?} disagree for {config}")]
    InconsistentRegimes { config: CellConfig, rows: Vec<u8> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
