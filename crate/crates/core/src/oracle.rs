//! Exact maximizer of the embedded-VNF count, for small instances only.
//!
//! Depth-first over VNFs in ascending id order. Each VNF branches over every
//! feasible host (ascending node id) and then over being left out. A branch
//! is cut as soon as the VNFs already placed plus all VNFs still undecided
//! cannot beat the incumbent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Embedding, Solution, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_vnfs: usize,
    pub max_nodes: usize,
    pub max_expansions: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_vnfs: 10,
            max_nodes: 6,
            max_expansions: 10_000_000,
        }
    }
}

impl OracleBudget {
    pub fn admits(&self, vnfs: usize, nodes: usize) -> bool {
        vnfs <= self.max_vnfs && nodes <= self.max_nodes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSolution {
    pub solution: Solution,
    /// False when the expansion cap stopped the search early; the plan is
    /// then only the best one found.
    pub optimal: bool,
    pub expansions: u64,
}

struct Search<'t> {
    emb: Embedding<'t>,
    best: usize,
    best_hosts: Vec<Option<usize>>,
    expansions: u64,
    cap: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn visit(&mut self, u: usize) {
        if self.exhausted {
            return;
        }
        self.expansions += 1;
        if self.expansions > self.cap {
            self.exhausted = true;
            return;
        }
        let topo = self.emb.topology();
        let remaining = topo.vnf_count() - u;
        if self.emb.embedded() + remaining <= self.best {
            return;
        }
        if u == topo.vnf_count() {
            self.best = self.emb.embedded();
            self.best_hosts = (0..u).map(|v| self.emb.host(v)).collect();
            return;
        }
        for t in 0..topo.node_count() {
            if let Some(debits) = self.emb.placement(u, t) {
                self.emb.assign(u, t, &debits);
                self.visit(u + 1);
                self.emb.unassign(u);
            }
        }
        self.visit(u + 1);
    }
}

pub fn solve_exact(topo: &Topology, budget: &OracleBudget) -> Result<ExactSolution> {
    if !budget.admits(topo.vnf_count(), topo.node_count()) {
        return Err(Error::BudgetExceeded {
            vnfs: topo.vnf_count(),
            nodes: topo.node_count(),
            max_vnfs: budget.max_vnfs,
            max_nodes: budget.max_nodes,
        });
    }
    let mut search = Search {
        emb: Embedding::new(topo),
        best: 0,
        best_hosts: vec![None; topo.vnf_count()],
        expansions: 0,
        cap: budget.max_expansions,
        exhausted: false,
    };
    search.visit(0);

    let mut emb = Embedding::new(topo);
    for (u, host) in search.best_hosts.iter().enumerate() {
        if let Some(t) = *host {
            let placed = emb.try_assign(u, t);
            debug_assert!(placed, "replaying a feasible plan");
        }
    }
    Ok(ExactSolution {
        solution: emb.into_solution(),
        optimal: !search.exhausted,
        expansions: search.expansions,
    })
}
