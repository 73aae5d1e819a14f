//! Low-complexity greedy solvers that embed one VNF at a time.
//!
//! Both walk a fixed VNF order and hand each VNF to [`embed_vnf`]; they
//! differ only in the order. RBA sorts by resource demand, CBA by slice
//! degree. Ties always break by ascending id.

use crate::model::{Embedding, NodeId, ResidualState, Solution, Topology, VnfId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnfKey {
    ByDemandDesc,
    ByDegreeDesc,
}

/// Every VNF of every slice, in the order a solver will attempt them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VnfOrder {
    pub key: VnfKey,
    flat: Vec<usize>,
    pub order: Vec<VnfId>,
}

impl VnfOrder {
    pub fn build(topo: &Topology, key: VnfKey) -> Self {
        let mut flat: Vec<usize> = (0..topo.vnf_count()).collect();
        // flat index order is id order, so a stable sort keeps the tie-break
        match key {
            VnfKey::ByDemandDesc => flat.sort_by_key(|&u| std::cmp::Reverse(topo.demand(u))),
            VnfKey::ByDegreeDesc => flat.sort_by_key(|&u| std::cmp::Reverse(topo.degree(u))),
        }
        let order = flat.iter().map(|&u| topo.vnf_id(u)).collect();
        Self { key, flat, order }
    }
}

/// Substrate nodes by live residual resources, largest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeOrder(pub Vec<NodeId>);

impl NodeOrder {
    pub fn from_residual(state: &ResidualState) -> Self {
        Self(sorted_by_residual(
            state,
            (0..state.nodes().len()).collect(),
        ))
    }

    pub fn first(&self) -> Option<NodeId> {
        self.0.first().copied()
    }
}

pub(crate) fn sorted_by_residual(state: &ResidualState, mut nodes: Vec<usize>) -> Vec<NodeId> {
    nodes.sort_by_key(|&s| (std::cmp::Reverse(state.node(NodeId(s))), s));
    nodes.into_iter().map(NodeId).collect()
}

/// Hosts of the already-placed neighbors together with the substrate nodes
/// adjacent to all of them, ascending and without duplicates.
pub(crate) fn neighborhood_candidates(topo: &Topology, hosts: &[usize]) -> Vec<usize> {
    let Some((&first, rest)) = hosts.split_first() else {
        return Vec::new();
    };
    let mut out: Vec<usize> = topo
        .neighbors(first)
        .iter()
        .map(|&(t, _)| t)
        .filter(|&t| rest.iter().all(|&h| topo.link_between(t, h).is_some()))
        .collect();
    out.extend_from_slice(hosts);
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Placed(NodeId),
    Skipped,
}

/// One greedy embedding step for `u`.
///
/// With no neighbor placed yet, only the node with the most residual
/// resources is probed. Otherwise the candidates are the neighbors' hosts
/// and their common substrate neighbors, tried by residual resources; the
/// first that fits the demand and reaches every placed neighbor over a link
/// with enough bandwidth (or shares its node) wins. A skip leaves the state
/// untouched.
pub fn embed_vnf(emb: &mut Embedding<'_>, u: VnfId) -> Outcome {
    let flat = emb
        .topology()
        .flat_index(u)
        .expect("VNF belongs to the instance");
    embed_flat(emb, flat)
}

pub(crate) fn embed_flat(emb: &mut Embedding<'_>, u: usize) -> Outcome {
    debug_assert!(emb.host(u).is_none());
    let topo = emb.topology();

    if !emb.has_assigned_neighbor(u) {
        let Some(top) = NodeOrder::from_residual(emb.residual()).first() else {
            return Outcome::Skipped;
        };
        return if emb.try_assign(u, top.0) {
            Outcome::Placed(top)
        } else {
            Outcome::Skipped
        };
    }

    let hosts = emb.neighbor_hosts(u);
    let candidates = sorted_by_residual(emb.residual(), neighborhood_candidates(topo, &hosts));
    for t in candidates {
        if let Some(debits) = emb.placement(u, t.0) {
            emb.assign(u, t.0, &debits);
            return Outcome::Placed(t);
        }
    }
    Outcome::Skipped
}

fn solve_in_order(topo: &Topology, key: VnfKey) -> Solution {
    let order = VnfOrder::build(topo, key);
    let mut emb = Embedding::new(topo);
    for &u in &order.flat {
        embed_flat(&mut emb, u);
    }
    emb.into_solution()
}

/// Resource-based algorithm: most demanding VNF first.
pub fn solve_rba(topo: &Topology) -> Solution {
    solve_in_order(topo, VnfKey::ByDemandDesc)
}

/// Connectivity-based algorithm: highest-degree VNF first.
pub fn solve_cba(topo: &Topology) -> Solution {
    solve_in_order(topo, VnfKey::ByDegreeDesc)
}
