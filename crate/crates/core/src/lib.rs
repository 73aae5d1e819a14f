//! Embedding of RAN-slice VNF graphs onto a resource-constrained substrate
//! network.
//!
//! Four greedy heuristics ([`heuristics::solve_rba`], [`heuristics::solve_cba`],
//! [`group::solve_gcba`], [`group::solve_gba`]) and an exact branch-and-bound
//! oracle ([`oracle::solve_exact`]) all maximize the number of embedded VNFs
//! subject to node capacity, one-hop connectivity and link bandwidth.
//! [`generator`] builds seeded random instances and [`harness`] runs
//! parameter sweeps over them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub mod error;
pub mod fixtures;
pub mod generator;
pub mod group;
pub mod harness;
pub mod heuristics;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
pub use model::{Instance, MappingPlan, ResidualState, Solution, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rba,
    Cba,
    Gcba,
    Gba,
    Exact,
}

impl Algorithm {
    pub const HEURISTICS: [Algorithm; 4] = [
        Algorithm::Rba,
        Algorithm::Cba,
        Algorithm::Gcba,
        Algorithm::Gba,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Algorithm::Rba => "rba",
            Algorithm::Cba => "cba",
            Algorithm::Gcba => "gcba",
            Algorithm::Gba => "gba",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rba" => Ok(Algorithm::Rba),
            "cba" => Ok(Algorithm::Cba),
            "gcba" => Ok(Algorithm::Gcba),
            "gba" => Ok(Algorithm::Gba),
            "exact" => Ok(Algorithm::Exact),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

/// Knobs that are not part of an algorithm's identity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub negative_rule: group::NegativeRule,
    pub budget: oracle::OracleBudget,
}

/// Runs `alg` on a validated topology. Only [`Algorithm::Exact`] can fail,
/// when the instance is over the oracle budget.
pub fn solve(alg: Algorithm, topo: &Topology, opts: &SolveOptions) -> Result<Solution> {
    Ok(match alg {
        Algorithm::Rba => heuristics::solve_rba(topo),
        Algorithm::Cba => heuristics::solve_cba(topo),
        Algorithm::Gcba => group::solve_gcba_with(topo, opts.negative_rule),
        Algorithm::Gba => group::solve_gba_with(topo, opts.negative_rule),
        Algorithm::Exact => oracle::solve_exact(topo, &opts.budget)?.solution,
    })
}
