//! Cluster-based solvers: GCBA and GBA.
//!
//! VNFs are grouped into disjoint clusters (a head plus its still-unclaimed
//! slice neighbors) and embedded cluster by cluster. Each placement picks
//! the substrate node whose neighborhood resource total is closest to the
//! VNF's own neighborhood demand total, preferring nodes that cover it.

use serde::{Deserialize, Serialize};

use crate::heuristics::{neighborhood_candidates, Outcome};
use crate::model::{Embedding, NodeId, ResidualState, Solution, Topology, Units, VnfId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterKey {
    /// Head with the most unclaimed neighbors first (GCBA).
    BySizeDesc,
    /// Head with the largest neighborhood demand total first (GBA).
    ByHeadCumulativeDesc,
}

/// How to choose when every candidate's difference is negative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativeRule {
    /// The negative difference nearest to zero.
    #[default]
    ClosestToZero,
    /// The most negative difference.
    MostNegative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub head: VnfId,
    /// Head first, then the other members by ascending id.
    pub members: Vec<VnfId>,
    pub key: Units,
    flat: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterList {
    pub key: ClusterKey,
    pub clusters: Vec<Cluster>,
}

/// Own demand plus the demands of all slice neighbors.
pub fn cumulative_vnf(topo: &Topology, v: VnfId) -> Units {
    cumulative_vnf_flat(
        topo,
        topo.flat_index(v).expect("VNF belongs to the instance"),
    )
}

fn cumulative_vnf_flat(topo: &Topology, u: usize) -> Units {
    topo.demand(u)
        + topo
            .vnf_neighbors(u)
            .iter()
            .map(|&(v, _)| topo.demand(v))
            .sum::<Units>()
}

/// Own residual plus the residuals of all substrate neighbors.
pub fn cumulative_node(topo: &Topology, state: &ResidualState, s: NodeId) -> Units {
    state.node(s)
        + topo
            .neighbors(s.0)
            .iter()
            .map(|&(t, _)| state.node(NodeId(t)))
            .sum::<Units>()
}

/// Greedy disjoint clustering over all slices.
///
/// Repeatedly takes the unclaimed VNF with the largest key (ties to the
/// lowest id) and claims it together with its unclaimed slice neighbors.
/// For [`ClusterKey::BySizeDesc`] the key is the number of unclaimed
/// neighbors at that moment; for [`ClusterKey::ByHeadCumulativeDesc`] it is
/// the head's neighborhood demand total over the full slice.
pub fn build_clusters(topo: &Topology, key: ClusterKey) -> ClusterList {
    let n = topo.vnf_count();
    let mut claimed = vec![false; n];
    let score: Vec<Units> = match key {
        ClusterKey::BySizeDesc => (0..n).map(|u| topo.degree(u) as Units).collect(),
        ClusterKey::ByHeadCumulativeDesc => (0..n).map(|u| cumulative_vnf_flat(topo, u)).collect(),
    };
    // live count of unclaimed neighbors, only consulted for BySizeDesc
    let mut open_degree: Vec<Units> = score.clone();

    let mut clusters = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let mut head = usize::MAX;
        let mut best = Units::MIN;
        for u in (0..n).filter(|&u| !claimed[u]) {
            let k = match key {
                ClusterKey::BySizeDesc => open_degree[u],
                ClusterKey::ByHeadCumulativeDesc => score[u],
            };
            if k > best {
                best = k;
                head = u;
            }
        }

        let mut flat = vec![head];
        flat.extend(
            topo.vnf_neighbors(head)
                .iter()
                .map(|&(v, _)| v)
                .filter(|&v| !claimed[v]),
        );
        for &m in &flat {
            claimed[m] = true;
            for &(v, _) in topo.vnf_neighbors(m) {
                open_degree[v] -= 1;
            }
        }
        remaining -= flat.len();

        let key_value = match key {
            ClusterKey::BySizeDesc => flat.len() as Units,
            ClusterKey::ByHeadCumulativeDesc => best,
        };
        clusters.push(Cluster {
            head: topo.vnf_id(head),
            members: flat.iter().map(|&u| topo.vnf_id(u)).collect(),
            key: key_value,
            flat,
        });
    }
    clusters.sort_by_key(|c| (std::cmp::Reverse(c.key), c.head));
    ClusterList { key, clusters }
}

/// Picks among scored candidates by `score - target`: the smallest
/// non-negative difference if there is one, otherwise a negative one chosen
/// by `rule`. Ties go to the lowest node id.
pub fn select_by_difference(
    candidates: &[(NodeId, Units)],
    target: Units,
    rule: NegativeRule,
) -> Option<NodeId> {
    let covering = candidates
        .iter()
        .filter(|(_, s)| s - target >= 0)
        .min_by_key(|&&(id, s)| (s - target, id));
    if let Some(&(id, _)) = covering {
        return Some(id);
    }
    let pick = match rule {
        NegativeRule::ClosestToZero => candidates.iter().min_by_key(|&&(id, s)| (target - s, id)),
        NegativeRule::MostNegative => candidates.iter().min_by_key(|&&(id, s)| (s - target, id)),
    };
    pick.map(|&(id, _)| id)
}

/// One group-aware embedding step for `u`.
///
/// Candidate nodes must have room for `u`. Without a placed neighbor all of
/// them compete; otherwise only the neighbors' hosts and their common
/// substrate neighbors that also satisfy connectivity and bandwidth. The
/// winner is chosen by [`select_by_difference`] against `u`'s neighborhood
/// demand total.
pub fn embed_group(emb: &mut Embedding<'_>, u: VnfId, rule: NegativeRule) -> Outcome {
    let flat = emb
        .topology()
        .flat_index(u)
        .expect("VNF belongs to the instance");
    embed_group_flat(emb, flat, rule)
}

fn embed_group_flat(emb: &mut Embedding<'_>, u: usize, rule: NegativeRule) -> Outcome {
    debug_assert!(emb.host(u).is_none());
    let topo = emb.topology();
    let demand = topo.demand(u);

    let fitting: Vec<(NodeId, Units)> = (0..topo.node_count())
        .filter(|&t| emb.node_residual(t) >= demand)
        .map(|t| (NodeId(t), cumulative_node(topo, emb.residual(), NodeId(t))))
        .collect();
    let target = cumulative_vnf_flat(topo, u);

    if !emb.has_assigned_neighbor(u) {
        let Some(t) = select_by_difference(&fitting, target, rule) else {
            return Outcome::Skipped;
        };
        emb.assign(u, t.0, &[]);
        return Outcome::Placed(t);
    }

    let hosts = emb.neighbor_hosts(u);
    let mut debits_of = Vec::new();
    let mut scored = Vec::new();
    for t in neighborhood_candidates(topo, &hosts) {
        let Ok(i) = fitting.binary_search_by_key(&t, |&(id, _)| id.0) else {
            continue;
        };
        if let Some(debits) = emb.link_debits(u, t) {
            scored.push(fitting[i]);
            debits_of.push((t, debits));
        }
    }
    let Some(t) = select_by_difference(&scored, target, rule) else {
        return Outcome::Skipped;
    };
    let (_, debits) = debits_of
        .into_iter()
        .find(|(id, _)| *id == t.0)
        .expect("selected candidate was scored");
    emb.assign(u, t.0, &debits);
    Outcome::Placed(t)
}

fn solve_clusters(topo: &Topology, key: ClusterKey, rule: NegativeRule) -> Solution {
    let list = build_clusters(topo, key);
    let mut emb = Embedding::new(topo);
    for cluster in &list.clusters {
        for &u in &cluster.flat {
            embed_group_flat(&mut emb, u, rule);
        }
    }
    emb.into_solution()
}

/// Group-connectivity-based algorithm: clusters by size.
pub fn solve_gcba(topo: &Topology) -> Solution {
    solve_gcba_with(topo, NegativeRule::default())
}

pub fn solve_gcba_with(topo: &Topology, rule: NegativeRule) -> Solution {
    solve_clusters(topo, ClusterKey::BySizeDesc, rule)
}

/// Group-based algorithm: clusters by the head's neighborhood demand.
pub fn solve_gba(topo: &Topology) -> Solution {
    solve_gba_with(topo, NegativeRule::default())
}

pub fn solve_gba_with(topo: &Topology, rule: NegativeRule) -> Solution {
    solve_clusters(topo, ClusterKey::ByHeadCumulativeDesc, rule)
}
