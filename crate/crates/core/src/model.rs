//! Substrate and slice graphs, mapping plans, residual accounting and the
//! constraint validator.
//!
//! Instances and plans are plain data that may be structurally broken (they
//! come straight from files). [`validate_instance`] reports what is wrong;
//! [`Topology::new`] refuses anything that does not validate and produces the
//! indexed view every solver runs against.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource blocks on nodes, bandwidth on links. Signed so that malformed
/// input can be represented and reported instead of rejected by the parser.
pub type Units = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// A VNF is addressed by its slice and its slice-local id. Ordering is by
/// slice first, which is the global tie-break order used by every solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VnfId {
    pub slice: usize,
    pub index: usize,
}

impl VnfId {
    pub fn new(slice: usize, index: usize) -> Self {
        Self { slice, index }
    }
}

impl fmt::Display for VnfId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}.{}", self.slice, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstrateNode {
    pub id: usize,
    pub capacity: Units,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstrateLink {
    pub a: usize,
    pub b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<Units>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstrateNetwork {
    pub nodes: Vec<SubstrateNode>,
    pub links: Vec<SubstrateLink>,
}

impl SubstrateNetwork {
    pub fn total_capacity(&self) -> Units {
        self.nodes.iter().map(|n| n.capacity).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vnf {
    pub id: usize,
    pub demand: Units,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirtualLink {
    pub a: usize,
    pub b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<Units>,
}

/// One slice graph. Link endpoints are slice-local VNF ids, so a virtual
/// link can never reach into another slice.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub vnfs: Vec<Vnf>,
    pub links: Vec<VirtualLink>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SliceSet {
    pub slices: Vec<Slice>,
}

impl SliceSet {
    pub fn vnf_count(&self) -> usize {
        self.slices.iter().map(|s| s.vnfs.len()).sum()
    }

    pub fn demand_of(&self, id: VnfId) -> Option<Units> {
        let slice = self.slices.get(id.slice)?;
        match slice.vnfs.get(id.index) {
            Some(v) if v.id == id.index => Some(v.demand),
            _ => slice
                .vnfs
                .iter()
                .find(|v| v.id == id.index)
                .map(|v| v.demand),
        }
    }
}

/// A substrate network together with the slices to embed on it.
///
/// On disk this is a JSON document:
///
/// ```json
/// {
///   "substrate": {
///     "nodes": [{"id": 0, "capacity": 4}],
///     "links": [{"a": 0, "b": 1, "capacity": 2}]
///   },
///   "slices": [
///     {"vnfs": [{"id": 0, "demand": 2}], "links": [{"a": 0, "b": 1, "bandwidth": 1}]}
///   ]
/// }
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub substrate: SubstrateNetwork,
    pub slices: SliceSet,
}

impl Instance {
    pub fn new(substrate: SubstrateNetwork, slices: SliceSet) -> Self {
        Self { substrate, slices }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("instance serializes");
        out.push('\n');
        out
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// A partial assignment of VNFs to substrate nodes. Keyed by VNF, so a VNF
/// can never be hosted twice. Edge mappings are derived on demand.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<PlanEntry>", try_from = "Vec<PlanEntry>")]
pub struct MappingPlan {
    assignments: BTreeMap<VnfId, NodeId>,
}

/// Serialized form of one assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub slice: usize,
    pub vnf: usize,
    pub node: usize,
}

/// A virtual link whose two ends are both hosted. `substrate.0 == substrate.1`
/// means the pair is co-located and uses no substrate link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeMapping {
    pub virtual_link: (VnfId, VnfId),
    pub substrate: (NodeId, NodeId),
    pub bandwidth: Units,
}

impl MappingPlan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns `vnf` to `node`, returning the previous host if there was one.
    pub fn assign(&mut self, vnf: VnfId, node: NodeId) -> Option<NodeId> {
        self.assignments.insert(vnf, node)
    }

    pub fn unassign(&mut self, vnf: VnfId) -> Option<NodeId> {
        self.assignments.remove(&vnf)
    }

    pub fn host(&self, vnf: VnfId) -> Option<NodeId> {
        self.assignments.get(&vnf).copied()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VnfId, NodeId)> + '_ {
        self.assignments.iter().map(|(v, n)| (*v, *n))
    }

    pub fn edge_mappings(&self, slices: &SliceSet) -> Vec<EdgeMapping> {
        let mut out = Vec::new();
        for (si, slice) in slices.slices.iter().enumerate() {
            for link in &slice.links {
                let (u, v) = (VnfId::new(si, link.a), VnfId::new(si, link.b));
                if let (Some(s), Some(t)) = (self.host(u), self.host(v)) {
                    out.push(EdgeMapping {
                        virtual_link: (u, v),
                        substrate: (s, t),
                        bandwidth: link.bandwidth.unwrap_or(0),
                    });
                }
            }
        }
        out.sort();
        out
    }

    pub fn entries(&self) -> Vec<PlanEntry> {
        self.iter()
            .map(|(v, n)| PlanEntry {
                slice: v.slice,
                vnf: v.index,
                node: n.0,
            })
            .collect()
    }

    pub fn from_entries(entries: Vec<PlanEntry>) -> Result<Self> {
        let mut plan = Self::new();
        for e in entries {
            if plan
                .assign(VnfId::new(e.slice, e.vnf), NodeId(e.node))
                .is_some()
            {
                return Err(Error::DuplicateAssignment {
                    slice: e.slice,
                    vnf: e.vnf,
                });
            }
        }
        Ok(plan)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<PlanEntry> = serde_json::from_str(text)?;
        Self::from_entries(entries)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plan serializes");
        out.push('\n');
        out
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

impl From<MappingPlan> for Vec<PlanEntry> {
    fn from(plan: MappingPlan) -> Self {
        plan.entries()
    }
}

impl TryFrom<Vec<PlanEntry>> for MappingPlan {
    type Error = Error;

    fn try_from(entries: Vec<PlanEntry>) -> Result<Self> {
        Self::from_entries(entries)
    }
}

/// The objective: number of embedded VNFs.
pub fn objective(plan: &MappingPlan) -> usize {
    plan.len()
}

/// Remaining node resources and link bandwidth. Links are kept in
/// ascending `(min, max)` endpoint order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualState {
    node: Vec<Units>,
    link_ends: Vec<(usize, usize)>,
    link: Vec<Units>,
}

impl ResidualState {
    pub fn node(&self, s: NodeId) -> Units {
        self.node[s.0]
    }

    pub fn nodes(&self) -> &[Units] {
        &self.node
    }

    pub fn link(&self, a: NodeId, b: NodeId) -> Option<Units> {
        let key = ordered(a.0, b.0);
        self.link_ends
            .binary_search(&key)
            .ok()
            .map(|i| self.link[i])
    }

    pub fn links(&self) -> impl Iterator<Item = ((NodeId, NodeId), Units)> + '_ {
        self.link_ends
            .iter()
            .zip(&self.link)
            .map(|(&(a, b), &r)| ((NodeId(a), NodeId(b)), r))
    }

    /// Total remaining node resources across the substrate.
    pub fn total_node_residual(&self) -> Units {
        self.node.iter().sum()
    }
}

/// Computes the residual state left behind by `plan` from scratch.
pub fn residual_after(
    substrate: &SubstrateNetwork,
    slices: &SliceSet,
    plan: &MappingPlan,
) -> Result<ResidualState> {
    let topo = Topology::new(&Instance::new(substrate.clone(), slices.clone()))?;
    let report = validate_plan(substrate, slices, plan);
    if !report.is_ok() {
        return Err(Error::InfeasiblePlan(report));
    }
    let mut state = topo.full_residual();
    for (vnf, node) in plan.iter() {
        let demand = slices.demand_of(vnf).unwrap_or(0);
        state.node[node.0] -= demand;
    }
    for em in plan.edge_mappings(slices) {
        let (s, t) = em.substrate;
        if s != t {
            let i = state
                .link_ends
                .binary_search(&ordered(s.0, t.0))
                .expect("validated link");
            state.link[i] -= em.bandwidth;
        }
    }
    if state.node.iter().chain(&state.link).any(|&r| r < 0) {
        return Err(Error::InfeasiblePlan(report));
    }
    Ok(state)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// One finding from [`validate_instance`] or [`validate_plan`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    NodeIdNotDense {
        position: usize,
        id: usize,
    },
    NegativeCapacity {
        node: usize,
        capacity: Units,
    },
    SelfLoop {
        a: usize,
    },
    DuplicateLink {
        a: usize,
        b: usize,
    },
    DanglingLinkEndpoint {
        a: usize,
        b: usize,
    },
    MissingLinkCapacity {
        a: usize,
        b: usize,
    },
    NegativeLinkCapacity {
        a: usize,
        b: usize,
        capacity: Units,
    },
    VnfIdNotDense {
        slice: usize,
        position: usize,
        id: usize,
    },
    NegativeDemand {
        vnf: VnfId,
        demand: Units,
    },
    VirtualSelfLoop {
        slice: usize,
        a: usize,
    },
    DuplicateVirtualLink {
        slice: usize,
        a: usize,
        b: usize,
    },
    DanglingVirtualLinkEndpoint {
        slice: usize,
        a: usize,
        b: usize,
    },
    MissingBandwidthDemand {
        slice: usize,
        a: usize,
        b: usize,
    },
    NegativeBandwidth {
        slice: usize,
        a: usize,
        b: usize,
        bandwidth: Units,
    },
    UnknownVnf {
        vnf: VnfId,
    },
    UnknownNode {
        vnf: VnfId,
        node: NodeId,
    },
    NodeCapacity {
        node: NodeId,
        used: Units,
        capacity: Units,
    },
    LinkCapacity {
        a: NodeId,
        b: NodeId,
        used: Units,
        capacity: Units,
    },
    Connectivity {
        u: VnfId,
        v: VnfId,
        s: NodeId,
        t: NodeId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NodeIdNotDense { position, id } => {
                write!(f, "node id not dense: position {position} holds id {id}")
            }
            NegativeCapacity { node, capacity } => {
                write!(f, "negative capacity {capacity} on node {node}")
            }
            SelfLoop { a } => write!(f, "self-loop on substrate node {a}"),
            DuplicateLink { a, b } => write!(f, "duplicate substrate link ({a}, {b})"),
            DanglingLinkEndpoint { a, b } => write!(f, "dangling link endpoint in ({a}, {b})"),
            MissingLinkCapacity { a, b } => write!(f, "missing link capacity on ({a}, {b})"),
            NegativeLinkCapacity { a, b, capacity } => {
                write!(f, "negative capacity {capacity} on link ({a}, {b})")
            }
            VnfIdNotDense {
                slice,
                position,
                id,
            } => write!(
                f,
                "vnf id not dense: slice {slice} position {position} holds id {id}"
            ),
            NegativeDemand { vnf, demand } => write!(f, "negative demand {demand} on {vnf}"),
            VirtualSelfLoop { slice, a } => write!(f, "self-loop on VNF {a} in slice {slice}"),
            DuplicateVirtualLink { slice, a, b } => {
                write!(f, "duplicate virtual link ({a}, {b}) in slice {slice}")
            }
            DanglingVirtualLinkEndpoint { slice, a, b } => write!(
                f,
                "dangling virtual link endpoint in ({a}, {b}) of slice {slice}"
            ),
            MissingBandwidthDemand { slice, a, b } => write!(
                f,
                "missing bandwidth demand on virtual link ({a}, {b}) of slice {slice}"
            ),
            NegativeBandwidth {
                slice,
                a,
                b,
                bandwidth,
            } => write!(
                f,
                "negative bandwidth {bandwidth} on virtual link ({a}, {b}) of slice {slice}"
            ),
            UnknownVnf { vnf } => write!(f, "plan references unknown VNF {vnf}"),
            UnknownNode { vnf, node } => {
                write!(f, "plan places {vnf} on unknown node {node}")
            }
            NodeCapacity {
                node,
                used,
                capacity,
            } => write!(
                f,
                "node capacity violated: {node} hosts {used} units, capacity {capacity}"
            ),
            LinkCapacity {
                a,
                b,
                used,
                capacity,
            } => write!(
                f,
                "link capacity violated: ({a}, {b}) carries {used} units, capacity {capacity}"
            ),
            Connectivity { u, v, s, t } => write!(
                f,
                "connectivity violated: {u} on {s} and {v} on {t} are not adjacent"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the structural invariants of an instance: dense ids, no
/// self-loops or duplicate links, endpoints that exist, capacities and
/// demands present and non-negative.
pub fn validate_instance(substrate: &SubstrateNetwork, slices: &SliceSet) -> ValidationReport {
    let mut out = Vec::new();

    for (pos, node) in substrate.nodes.iter().enumerate() {
        if node.id != pos {
            out.push(Violation::NodeIdNotDense {
                position: pos,
                id: node.id,
            });
        }
        if node.capacity < 0 {
            out.push(Violation::NegativeCapacity {
                node: node.id,
                capacity: node.capacity,
            });
        }
    }
    let n = substrate.nodes.len();
    let mut seen = HashMap::new();
    for link in &substrate.links {
        let (a, b) = (link.a, link.b);
        if a >= n || b >= n {
            out.push(Violation::DanglingLinkEndpoint { a, b });
        }
        if a == b {
            out.push(Violation::SelfLoop { a });
        } else if seen.insert(ordered(a, b), ()).is_some() {
            out.push(Violation::DuplicateLink { a, b });
        }
        match link.capacity {
            None => out.push(Violation::MissingLinkCapacity { a, b }),
            Some(c) if c < 0 => out.push(Violation::NegativeLinkCapacity { a, b, capacity: c }),
            Some(_) => {}
        }
    }

    for (si, slice) in slices.slices.iter().enumerate() {
        for (pos, vnf) in slice.vnfs.iter().enumerate() {
            if vnf.id != pos {
                out.push(Violation::VnfIdNotDense {
                    slice: si,
                    position: pos,
                    id: vnf.id,
                });
            }
            if vnf.demand < 0 {
                out.push(Violation::NegativeDemand {
                    vnf: VnfId::new(si, vnf.id),
                    demand: vnf.demand,
                });
            }
        }
        let m = slice.vnfs.len();
        let mut seen = HashMap::new();
        for link in &slice.links {
            let (a, b) = (link.a, link.b);
            if a >= m || b >= m {
                out.push(Violation::DanglingVirtualLinkEndpoint { slice: si, a, b });
            }
            if a == b {
                out.push(Violation::VirtualSelfLoop { slice: si, a });
            } else if seen.insert(ordered(a, b), ()).is_some() {
                out.push(Violation::DuplicateVirtualLink { slice: si, a, b });
            }
            match link.bandwidth {
                None => out.push(Violation::MissingBandwidthDemand { slice: si, a, b }),
                Some(bw) if bw < 0 => out.push(Violation::NegativeBandwidth {
                    slice: si,
                    a,
                    b,
                    bandwidth: bw,
                }),
                Some(_) => {}
            }
        }
    }

    ValidationReport { violations: out }
}

/// Checks a plan against node capacity, link capacity and connectivity.
/// Convergence holds by construction of [`MappingPlan`].
///
/// This deliberately recomputes every sum from the raw instance rather than
/// going through [`Topology`] or the solvers' bookkeeping.
pub fn validate_plan(
    substrate: &SubstrateNetwork,
    slices: &SliceSet,
    plan: &MappingPlan,
) -> ValidationReport {
    let mut out = Vec::new();
    let n = substrate.nodes.len();
    let mut used = vec![0 as Units; n];

    for (vnf, node) in plan.iter() {
        let Some(demand) = slices.demand_of(vnf) else {
            out.push(Violation::UnknownVnf { vnf });
            continue;
        };
        if node.0 >= n {
            out.push(Violation::UnknownNode { vnf, node });
            continue;
        }
        used[node.0] += demand;
    }
    for (s, node) in substrate.nodes.iter().enumerate() {
        if used[s] > node.capacity {
            out.push(Violation::NodeCapacity {
                node: NodeId(s),
                used: used[s],
                capacity: node.capacity,
            });
        }
    }

    let capacity: BTreeMap<(usize, usize), Units> = substrate
        .links
        .iter()
        .map(|l| (ordered(l.a, l.b), l.capacity.unwrap_or(0)))
        .collect();
    let mut carried: BTreeMap<(usize, usize), Units> = BTreeMap::new();
    for em in plan.edge_mappings(slices) {
        let (s, t) = em.substrate;
        if s == t || s.0 >= n || t.0 >= n {
            continue;
        }
        let key = ordered(s.0, t.0);
        if capacity.contains_key(&key) {
            *carried.entry(key).or_default() += em.bandwidth;
        } else {
            out.push(Violation::Connectivity {
                u: em.virtual_link.0,
                v: em.virtual_link.1,
                s,
                t,
            });
        }
    }
    for (key, load) in carried {
        let cap = capacity[&key];
        if load > cap {
            out.push(Violation::LinkCapacity {
                a: NodeId(key.0),
                b: NodeId(key.1),
                used: load,
                capacity: cap,
            });
        }
    }

    ValidationReport { violations: out }
}

/// Indexed, validated view of an [`Instance`].
///
/// VNFs get a flat index in `(slice, index)` order; substrate links get an
/// index in ascending `(min, max)` endpoint order. Adjacency lists are sorted.
#[derive(Debug, Clone)]
pub struct Topology {
    node_capacity: Vec<Units>,
    adjacency: Vec<Vec<(usize, usize)>>,
    link_ends: Vec<(usize, usize)>,
    link_capacity: Vec<Units>,
    vnf_ids: Vec<VnfId>,
    slice_offsets: Vec<usize>,
    demand: Vec<Units>,
    vnf_adjacency: Vec<Vec<(usize, Units)>>,
    virtual_links: usize,
}

impl Topology {
    pub fn new(instance: &Instance) -> Result<Self> {
        let report = validate_instance(&instance.substrate, &instance.slices);
        if !report.is_ok() {
            return Err(Error::InvalidInstance(report));
        }
        let sub = &instance.substrate;
        let n = sub.nodes.len();
        let node_capacity = sub.nodes.iter().map(|x| x.capacity).collect();

        let mut links: Vec<((usize, usize), Units)> = sub
            .links
            .iter()
            .map(|l| (ordered(l.a, l.b), l.capacity.unwrap_or(0)))
            .collect();
        links.sort();
        let mut adjacency = vec![Vec::new(); n];
        for (i, &((a, b), _)) in links.iter().enumerate() {
            adjacency[a].push((b, i));
            adjacency[b].push((a, i));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }

        let mut vnf_ids = Vec::new();
        let mut slice_offsets = Vec::with_capacity(instance.slices.slices.len());
        let mut demand = Vec::new();
        for (si, slice) in instance.slices.slices.iter().enumerate() {
            slice_offsets.push(vnf_ids.len());
            for vnf in &slice.vnfs {
                vnf_ids.push(VnfId::new(si, vnf.id));
                demand.push(vnf.demand);
            }
        }
        let mut vnf_adjacency = vec![Vec::new(); vnf_ids.len()];
        let mut virtual_links = 0;
        for (si, slice) in instance.slices.slices.iter().enumerate() {
            let base = slice_offsets[si];
            for link in &slice.links {
                let bw = link.bandwidth.unwrap_or(0);
                vnf_adjacency[base + link.a].push((base + link.b, bw));
                vnf_adjacency[base + link.b].push((base + link.a, bw));
                virtual_links += 1;
            }
        }
        for adj in &mut vnf_adjacency {
            adj.sort_unstable();
        }

        Ok(Self {
            node_capacity,
            adjacency,
            link_ends: links.iter().map(|&(e, _)| e).collect(),
            link_capacity: links.iter().map(|&(_, c)| c).collect(),
            vnf_ids,
            slice_offsets,
            demand,
            vnf_adjacency,
            virtual_links,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_capacity.len()
    }

    pub fn link_count(&self) -> usize {
        self.link_ends.len()
    }

    pub fn vnf_count(&self) -> usize {
        self.vnf_ids.len()
    }

    pub fn virtual_link_count(&self) -> usize {
        self.virtual_links
    }

    pub fn capacity(&self, s: usize) -> Units {
        self.node_capacity[s]
    }

    pub fn total_capacity(&self) -> Units {
        self.node_capacity.iter().sum()
    }

    /// Substrate neighbors of `s` with the connecting link index.
    pub fn neighbors(&self, s: usize) -> &[(usize, usize)] {
        &self.adjacency[s]
    }

    pub fn link_between(&self, s: usize, t: usize) -> Option<usize> {
        let adj = &self.adjacency[s];
        adj.binary_search_by_key(&t, |&(x, _)| x)
            .ok()
            .map(|i| adj[i].1)
    }

    pub fn link_capacity(&self, link: usize) -> Units {
        self.link_capacity[link]
    }

    pub fn vnf_id(&self, u: usize) -> VnfId {
        self.vnf_ids[u]
    }

    pub fn flat_index(&self, id: VnfId) -> Option<usize> {
        let base = *self.slice_offsets.get(id.slice)?;
        let end = self
            .slice_offsets
            .get(id.slice + 1)
            .copied()
            .unwrap_or(self.vnf_ids.len());
        (base + id.index < end).then_some(base + id.index)
    }

    pub fn demand(&self, u: usize) -> Units {
        self.demand[u]
    }

    pub fn total_demand(&self) -> Units {
        self.demand.iter().sum()
    }

    /// Slice neighbors of VNF `u` with the virtual link's bandwidth demand.
    pub fn vnf_neighbors(&self, u: usize) -> &[(usize, Units)] {
        &self.vnf_adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.vnf_adjacency[u].len()
    }

    pub fn full_residual(&self) -> ResidualState {
        ResidualState {
            node: self.node_capacity.clone(),
            link_ends: self.link_ends.clone(),
            link: self.link_capacity.clone(),
        }
    }
}

/// A solver's output: the plan and the residual state it leaves behind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub plan: MappingPlan,
    pub residual: ResidualState,
}

impl Solution {
    pub fn embedded(&self) -> usize {
        objective(&self.plan)
    }
}

/// Per-link bandwidth a tentative placement would consume.
pub type LinkDebits = Vec<(usize, Units)>;

/// Mutable state of a single solver run: residuals plus the current host of
/// every VNF. Only ever written by one solver.
#[derive(Debug, Clone)]
pub struct Embedding<'t> {
    topo: &'t Topology,
    residual: ResidualState,
    hosts: Vec<Option<usize>>,
    embedded: usize,
}

impl<'t> Embedding<'t> {
    pub fn new(topo: &'t Topology) -> Self {
        Self {
            topo,
            residual: topo.full_residual(),
            hosts: vec![None; topo.vnf_count()],
            embedded: 0,
        }
    }

    pub fn topology(&self) -> &'t Topology {
        self.topo
    }

    pub fn residual(&self) -> &ResidualState {
        &self.residual
    }

    pub fn node_residual(&self, s: usize) -> Units {
        self.residual.node[s]
    }

    pub fn link_residual(&self, link: usize) -> Units {
        self.residual.link[link]
    }

    pub fn host(&self, u: usize) -> Option<usize> {
        self.hosts[u]
    }

    pub fn embedded(&self) -> usize {
        self.embedded
    }

    pub fn has_assigned_neighbor(&self, u: usize) -> bool {
        self.topo
            .vnf_neighbors(u)
            .iter()
            .any(|&(v, _)| self.hosts[v].is_some())
    }

    /// Distinct hosts of `u`'s assigned neighbors, ascending.
    pub fn neighbor_hosts(&self, u: usize) -> Vec<usize> {
        let mut hosts: Vec<usize> = self
            .topo
            .vnf_neighbors(u)
            .iter()
            .filter_map(|&(v, _)| self.hosts[v])
            .collect();
        hosts.sort_unstable();
        hosts.dedup();
        hosts
    }

    /// Bandwidth that hosting `u` on `t` would take from each substrate link,
    /// or `None` if some assigned neighbor sits on a node that is neither `t`
    /// nor adjacent to it, or a link lacks the bandwidth.
    pub fn link_debits(&self, u: usize, t: usize) -> Option<LinkDebits> {
        let mut debits: LinkDebits = Vec::new();
        for &(v, bw) in self.topo.vnf_neighbors(u) {
            let Some(h) = self.hosts[v] else { continue };
            if h == t {
                continue;
            }
            let link = self.topo.link_between(t, h)?;
            match debits.iter_mut().find(|(l, _)| *l == link) {
                Some((_, sum)) => *sum += bw,
                None => debits.push((link, bw)),
            }
        }
        debits
            .iter()
            .all(|&(l, sum)| self.residual.link[l] >= sum)
            .then_some(debits)
    }

    /// Node resources plus connectivity and bandwidth towards every assigned
    /// neighbor.
    pub fn placement(&self, u: usize, t: usize) -> Option<LinkDebits> {
        if self.residual.node[t] < self.topo.demand(u) {
            return None;
        }
        self.link_debits(u, t)
    }

    pub fn assign(&mut self, u: usize, t: usize, debits: &[(usize, Units)]) {
        debug_assert!(self.hosts[u].is_none());
        self.residual.node[t] -= self.topo.demand(u);
        for &(l, bw) in debits {
            self.residual.link[l] -= bw;
        }
        self.hosts[u] = Some(t);
        self.embedded += 1;
    }

    /// Places `u` on `t` if every constraint holds; leaves state untouched
    /// otherwise.
    pub fn try_assign(&mut self, u: usize, t: usize) -> bool {
        match self.placement(u, t) {
            Some(debits) => {
                self.assign(u, t, &debits);
                true
            }
            None => false,
        }
    }

    /// Removes `u` and credits back its node demand and the bandwidth of
    /// every edge to a currently assigned neighbor.
    pub fn unassign(&mut self, u: usize) {
        let Some(t) = self.hosts[u].take() else {
            return;
        };
        self.residual.node[t] += self.topo.demand(u);
        for &(v, bw) in self.topo.vnf_neighbors(u) {
            if let Some(h) = self.hosts[v] {
                if h != t {
                    let l = self
                        .topo
                        .link_between(t, h)
                        .expect("assigned edge on a link");
                    self.residual.link[l] += bw;
                }
            }
        }
        self.embedded -= 1;
    }

    pub fn plan(&self) -> MappingPlan {
        let mut plan = MappingPlan::new();
        for (u, h) in self.hosts.iter().enumerate() {
            if let Some(h) = h {
                plan.assign(self.topo.vnf_id(u), NodeId(*h));
            }
        }
        plan
    }

    pub fn into_solution(self) -> Solution {
        let plan = self.plan();
        Solution {
            plan,
            residual: self.residual,
        }
    }
}
