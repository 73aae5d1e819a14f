use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("infeasible plan: {0}")]
    InfeasiblePlan(ValidationReport),

    #[error("mapping convergence violated: VNF ({slice}, {vnf}) listed more than once")]
    DuplicateAssignment { slice: usize, vnf: usize },

    #[error("instance exceeds oracle budget: {vnfs} VNFs (max {max_vnfs}), {nodes} nodes (max {max_nodes})")]
    BudgetExceeded {
        vnfs: usize,
        nodes: usize,
        max_vnfs: usize,
        max_nodes: usize,
    },

    #[error("infeasible generator config: {0}")]
    InfeasibleConfig(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSweep(String),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("unknown algorithm token `{0}` (expected rba, cba, gcba, gba or exact)")]
    UnknownAlgorithm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
