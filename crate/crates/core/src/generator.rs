//! Seeded random instances for the normal and shortage experiment regimes.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with the
//! config's 64-bit seed, so an instance is a pure function of its config.
//!
//! Substrates are always connected. With a fixed degree `k` they are random
//! `k`-regular graphs; when `n * k` is odd one node, picked at random, gets
//! degree `k - 1`. Otherwise they are a random spanning tree plus independent
//! extra edges tuned to the configured mean degree. Slices use the same two
//! families with the slice degree `k'`.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Instance, Slice, SliceSet, SubstrateLink, SubstrateNetwork, SubstrateNode, VirtualLink, Vnf,
};

/// Inclusive integer range, serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span(pub i64, pub i64);

impl Span {
    pub fn fixed(v: i64) -> Self {
        Span(v, v)
    }

    pub fn lo(&self) -> i64 {
        self.0
    }

    pub fn hi(&self) -> i64 {
        self.1
    }

    pub fn contains(&self, v: i64) -> bool {
        self.0 <= v && v <= self.1
    }

    fn sample(&self, rng: &mut impl Rng) -> i64 {
        rng.gen_range(self.0..=self.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Normal,
    Shortage,
    Custom,
}

/// Per-node degree: a fixed count, or `"random"` for the tree-plus-extras
/// family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DegreeRepr", into = "DegreeRepr")]
pub enum Degree {
    Fixed(usize),
    Random,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DegreeRepr {
    Count(usize),
    Word(String),
}

impl From<Degree> for DegreeRepr {
    fn from(d: Degree) -> Self {
        match d {
            Degree::Fixed(k) => DegreeRepr::Count(k),
            Degree::Random => DegreeRepr::Word("random".into()),
        }
    }
}

impl TryFrom<DegreeRepr> for Degree {
    type Error = String;

    fn try_from(r: DegreeRepr) -> std::result::Result<Self, String> {
        match r {
            DegreeRepr::Count(k) => Ok(Degree::Fixed(k)),
            DegreeRepr::Word(w) if w == "random" => Ok(Degree::Random),
            DegreeRepr::Word(w) => Err(format!("degree must be a count or \"random\", got {w:?}")),
        }
    }
}

/// Everything `generate` needs. In files, only `regime` is required; every
/// omitted field takes the regime's preset (custom uses the normal preset).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigDoc")]
pub struct GeneratorConfig {
    pub seed: u64,
    pub regime: Regime,
    pub n_substrate: Span,
    pub node_capacity: Span,
    pub n_slices: Span,
    pub vnfs_per_slice: Span,
    /// When set, slice sizes are drawn so that they sum to exactly this.
    pub total_vnfs: Option<usize>,
    pub vnf_demand: Span,
    pub substrate_degree: Degree,
    pub vnf_degree: Degree,
    /// Mean degree targeted when `substrate_degree` is random.
    pub random_substrate_degree: f64,
    /// Mean degree targeted when `vnf_degree` is random.
    pub random_vnf_degree: f64,
    pub link_capacity: Span,
    pub bandwidth_demand: Span,
}

impl GeneratorConfig {
    pub fn normal(seed: u64) -> Self {
        Self {
            seed,
            regime: Regime::Normal,
            n_substrate: Span(60, 100),
            node_capacity: Span(4, 8),
            n_slices: Span(2, 10),
            vnfs_per_slice: Span(10, 100),
            total_vnfs: None,
            vnf_demand: Span(1, 2),
            substrate_degree: Degree::Random,
            vnf_degree: Degree::Random,
            random_substrate_degree: 4.0,
            random_vnf_degree: 2.5,
            link_capacity: Span(4, 8),
            bandwidth_demand: Span(1, 2),
        }
    }

    pub fn shortage(seed: u64) -> Self {
        Self {
            regime: Regime::Shortage,
            node_capacity: Span(2, 4),
            vnfs_per_slice: Span(1, 10),
            link_capacity: Span(2, 4),
            ..Self::normal(seed)
        }
    }

    pub fn preset(regime: Regime, seed: u64) -> Self {
        match regime {
            Regime::Normal => Self::normal(seed),
            Regime::Shortage => Self::shortage(seed),
            Regime::Custom => Self {
                regime: Regime::Custom,
                ..Self::normal(seed)
            },
        }
    }

    /// Smallest slice the config may produce.
    fn min_slice_size(&self) -> i64 {
        match self.vnf_degree {
            Degree::Fixed(k) => k as i64 + 1,
            Degree::Random => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleConfig(msg));
        for (name, span) in [
            ("n_substrate", self.n_substrate),
            ("node_capacity", self.node_capacity),
            ("n_slices", self.n_slices),
            ("vnfs_per_slice", self.vnfs_per_slice),
            ("vnf_demand", self.vnf_demand),
            ("link_capacity", self.link_capacity),
            ("bandwidth_demand", self.bandwidth_demand),
        ] {
            if span.0 < 0 || span.0 > span.1 {
                return bad(format!(
                    "{name} range [{}, {}] is empty or negative",
                    span.0, span.1
                ));
            }
        }
        if self.n_substrate.0 < 1 {
            return bad("substrate needs at least one node".into());
        }
        if !(self.random_substrate_degree >= 0.0 && self.random_vnf_degree >= 0.0) {
            return bad("random mean degrees must be non-negative".into());
        }
        if let Degree::Fixed(k) = self.substrate_degree {
            let (lo, hi) = (self.n_substrate.0 as usize, self.n_substrate.1 as usize);
            if k >= lo {
                return bad(format!("substrate degree {k} needs more than {lo} nodes"));
            }
            if k == 0 && hi > 1 || k == 1 && hi > 2 {
                return bad(format!(
                    "no connected {k}-regular graph on up to {hi} nodes"
                ));
            }
        }
        match self.total_vnfs {
            Some(total) => {
                let need = self.n_slices.1 * self.min_slice_size();
                if (total as i64) < need {
                    return bad(format!(
                        "{total} VNFs cannot fill {} slices of at least {} VNFs",
                        self.n_slices.1,
                        self.min_slice_size()
                    ));
                }
                if self.n_slices.0 < 1 {
                    return bad("total_vnfs needs at least one slice".into());
                }
            }
            None => {
                if let Degree::Fixed(k) = self.vnf_degree {
                    if (k as i64) >= self.vnfs_per_slice.0 {
                        return bad(format!(
                            "vnf degree {k} needs slices larger than {}",
                            self.vnfs_per_slice.0
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    #[serde(default = "default_seed")]
    seed: u64,
    regime: Regime,
    n_substrate: Option<Span>,
    node_capacity: Option<Span>,
    n_slices: Option<Span>,
    vnfs_per_slice: Option<Span>,
    total_vnfs: Option<usize>,
    vnf_demand: Option<Span>,
    substrate_degree: Option<Degree>,
    vnf_degree: Option<Degree>,
    random_substrate_degree: Option<f64>,
    random_vnf_degree: Option<f64>,
    link_capacity: Option<Span>,
    bandwidth_demand: Option<Span>,
}

fn default_seed() -> u64 {
    1
}

impl TryFrom<ConfigDoc> for GeneratorConfig {
    type Error = Error;

    fn try_from(d: ConfigDoc) -> Result<Self> {
        let p = GeneratorConfig::preset(d.regime, d.seed);
        let cfg = GeneratorConfig {
            seed: d.seed,
            regime: d.regime,
            n_substrate: d.n_substrate.unwrap_or(p.n_substrate),
            node_capacity: d.node_capacity.unwrap_or(p.node_capacity),
            n_slices: d.n_slices.unwrap_or(p.n_slices),
            vnfs_per_slice: d.vnfs_per_slice.unwrap_or(p.vnfs_per_slice),
            total_vnfs: d.total_vnfs.or(p.total_vnfs),
            vnf_demand: d.vnf_demand.unwrap_or(p.vnf_demand),
            substrate_degree: d.substrate_degree.unwrap_or(p.substrate_degree),
            vnf_degree: d.vnf_degree.unwrap_or(p.vnf_degree),
            random_substrate_degree: d
                .random_substrate_degree
                .unwrap_or(p.random_substrate_degree),
            random_vnf_degree: d.random_vnf_degree.unwrap_or(p.random_vnf_degree),
            link_capacity: d.link_capacity.unwrap_or(p.link_capacity),
            bandwidth_demand: d.bandwidth_demand.unwrap_or(p.bandwidth_demand),
        };
        Ok(cfg)
    }
}

pub fn generate(config: &GeneratorConfig) -> Result<Instance> {
    config.validate()?;
    let stream = |id: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(id);
        rng
    };
    // sizes and resources, substrate topology, link capacities, slice
    // topology and bandwidths each draw from their own stream, so that
    // changing k or k' leaves every other draw of a seed untouched
    let mut sizes_rng = stream(0);
    let mut substrate_rng = stream(1);
    let mut capacity_rng = stream(2);
    let mut slice_rng = stream(3);
    let mut bandwidth_rng = stream(4);

    let n = config.n_substrate.sample(&mut sizes_rng) as usize;
    let nodes: Vec<SubstrateNode> = (0..n)
        .map(|id| SubstrateNode {
            id,
            capacity: config.node_capacity.sample(&mut sizes_rng),
        })
        .collect();
    let edges = match config.substrate_degree {
        Degree::Fixed(k) => regular_graph(n, k, true, &mut substrate_rng)?,
        Degree::Random => {
            random_connected_graph(n, config.random_substrate_degree, &mut substrate_rng)
        }
    };
    let links = edges
        .into_iter()
        .map(|(a, b)| SubstrateLink {
            a,
            b,
            capacity: Some(config.link_capacity.sample(&mut capacity_rng)),
        })
        .collect();

    let n_slices = config.n_slices.sample(&mut sizes_rng) as usize;
    let sizes: Vec<usize> = match config.total_vnfs {
        Some(total) => {
            let min = config.min_slice_size() as usize;
            let mut sizes = vec![min; n_slices];
            for _ in 0..total - min * n_slices {
                sizes[sizes_rng.gen_range(0..n_slices)] += 1;
            }
            sizes
        }
        None => (0..n_slices)
            .map(|_| config.vnfs_per_slice.sample(&mut sizes_rng) as usize)
            .collect(),
    };

    let mut slices = Vec::with_capacity(n_slices);
    for size in sizes {
        let vnfs = (0..size)
            .map(|id| Vnf {
                id,
                demand: config.vnf_demand.sample(&mut sizes_rng),
            })
            .collect();
        let edges = match config.vnf_degree {
            Degree::Fixed(k) => regular_graph(size, k, k >= 2, &mut slice_rng)?,
            Degree::Random => {
                random_connected_graph(size, config.random_vnf_degree, &mut slice_rng)
            }
        };
        let links = edges
            .into_iter()
            .map(|(a, b)| VirtualLink {
                a,
                b,
                bandwidth: Some(config.bandwidth_demand.sample(&mut bandwidth_rng)),
            })
            .collect();
        slices.push(Slice { vnfs, links });
    }

    Ok(Instance::new(
        SubstrateNetwork { nodes, links },
        SliceSet { slices },
    ))
}

const PAIRING_ATTEMPTS: usize = 1000;

/// Random (nearly) `k`-regular simple graph on `n` nodes, edges as sorted
/// `(a, b)` pairs with `a < b`.
pub fn regular_graph(
    n: usize,
    k: usize,
    connected: bool,
    rng: &mut impl Rng,
) -> Result<Vec<(usize, usize)>> {
    if n == 0 || (n == 1 && k == 0) {
        return Ok(Vec::new());
    }
    if k >= n {
        return Err(Error::InfeasibleConfig(format!(
            "no {k}-regular graph on {n} nodes"
        )));
    }
    if connected && (k == 0 || (k == 1 && n > 2)) {
        return Err(Error::InfeasibleConfig(format!(
            "no connected {k}-regular graph on {n} nodes"
        )));
    }

    if k == 2 && connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut edges: Vec<_> = (0..n)
            .map(|i| ordered(order[i], order[(i + 1) % n]))
            .collect();
        edges.sort_unstable();
        return Ok(edges);
    }

    let mut degrees = vec![k; n];
    if (n * k) % 2 == 1 {
        degrees[rng.gen_range(0..n)] -= 1;
    }
    for _ in 0..PAIRING_ATTEMPTS {
        if let Some(edges) = try_pairing(&degrees, rng) {
            if !connected || is_connected(n, &edges) {
                return Ok(edges.into_iter().collect());
            }
        }
    }
    Err(Error::InfeasibleConfig(format!(
        "failed to realize a {k}-regular graph on {n} nodes"
    )))
}

/// Stub pairing with repair rounds: pair shuffled stubs, keep every pair
/// that forms a new simple edge, and re-pair the leftovers as long as some
/// admissible pair remains among them.
fn try_pairing(degrees: &[usize], rng: &mut impl Rng) -> Option<BTreeSet<(usize, usize)>> {
    let mut edges = BTreeSet::new();
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    while !stubs.is_empty() {
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = ordered(pair[0], pair[1]);
            if a != b && edges.insert((a, b)) {
                continue;
            }
            *leftover.entry(a).or_default() += 1;
            *leftover.entry(b).or_default() += 1;
        }
        let open: Vec<usize> = leftover.keys().copied().collect();
        let admissible = open.is_empty()
            || open
                .iter()
                .enumerate()
                .any(|(i, &a)| open[i + 1..].iter().any(|&b| !edges.contains(&(a, b))));
        if !admissible {
            return None;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c))
            .collect();
    }
    Some(edges)
}

/// Random spanning tree plus each remaining pair with the probability that
/// makes the expected mean degree `mean`.
pub fn random_connected_graph(n: usize, mean: f64, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.insert(ordered(order[i], order[j]));
    }
    let pairs = n * (n - 1) / 2;
    let spare = pairs - (n - 1);
    if spare > 0 {
        let wanted = mean * n as f64 / 2.0 - (n - 1) as f64;
        let p = (wanted / spare as f64).clamp(0.0, 1.0);
        if p > 0.0 {
            for a in 0..n {
                for b in a + 1..n {
                    if !edges.contains(&(a, b)) && rng.gen_bool(p) {
                        edges.insert((a, b));
                    }
                }
            }
        }
    }
    edges.into_iter().collect()
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn is_connected(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Degree of every node in an edge list.
pub fn degrees(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut d = vec![0; n];
    for (a, b) in edges {
        d[a] += 1;
        d[b] += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;

    fn substrate_edges(inst: &Instance) -> Vec<(usize, usize)> {
        inst.substrate.links.iter().map(|l| (l.a, l.b)).collect()
    }

    #[test]
    fn normal_seed_one_in_ranges() {
        let inst = generate(&GeneratorConfig::normal(1)).unwrap();
        let n = inst.substrate.nodes.len();
        assert!((60..=100).contains(&n));
        assert!(inst
            .substrate
            .nodes
            .iter()
            .all(|x| (4..=8).contains(&x.capacity)));
        assert!((2..=10).contains(&inst.slices.slices.len()));
        assert!(validate_instance(&inst.substrate, &inst.slices).is_ok());
        let edges: BTreeSet<_> = substrate_edges(&inst).into_iter().collect();
        assert!(is_connected(n, &edges));
    }

    #[test]
    fn k2_n5_is_a_five_cycle() {
        let cfg = GeneratorConfig {
            n_substrate: Span::fixed(5),
            substrate_degree: Degree::Fixed(2),
            ..GeneratorConfig::normal(7)
        };
        let inst = generate(&cfg).unwrap();
        let edges = substrate_edges(&inst);
        assert_eq!(edges.len(), 5);
        assert_eq!(degrees(5, edges.iter().copied()), vec![2; 5]);
        assert!(is_connected(5, &edges.into_iter().collect()));
    }

    #[test]
    fn same_seed_same_bytes() {
        for cfg in [GeneratorConfig::normal(42), GeneratorConfig::shortage(42)] {
            assert_eq!(
                generate(&cfg).unwrap().to_json(),
                generate(&cfg).unwrap().to_json()
            );
        }
        assert_ne!(
            generate(&GeneratorConfig::normal(1)).unwrap(),
            generate(&GeneratorConfig::normal(2)).unwrap()
        );
    }

    #[test]
    fn regular_when_even_nearest_when_odd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, k) in [(60, 10), (61, 4), (80, 3), (12, 11)] {
            let e = regular_graph(n, k, true, &mut rng).unwrap();
            assert_eq!(degrees(n, e.iter().copied()), vec![k; n], "n={n} k={k}");
        }
        let e = regular_graph(61, 3, true, &mut rng).unwrap();
        let d = degrees(61, e);
        assert_eq!(d.iter().filter(|&&x| x == 2).count(), 1);
        assert_eq!(d.iter().filter(|&&x| x == 3).count(), 60);
    }

    #[test]
    fn impossible_degrees_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            regular_graph(5, 5, true, &mut rng),
            Err(Error::InfeasibleConfig(_))
        ));
        assert!(matches!(
            regular_graph(6, 1, true, &mut rng),
            Err(Error::InfeasibleConfig(_))
        ));
        let cfg = GeneratorConfig {
            substrate_degree: Degree::Fixed(80),
            ..GeneratorConfig::normal(1)
        };
        assert!(matches!(generate(&cfg), Err(Error::InfeasibleConfig(_))));
        let cfg = GeneratorConfig {
            vnf_degree: Degree::Fixed(10),
            ..GeneratorConfig::normal(1)
        };
        assert!(matches!(generate(&cfg), Err(Error::InfeasibleConfig(_))));
    }

    #[test]
    fn total_vnfs_is_exact() {
        let cfg = GeneratorConfig {
            total_vnfs: Some(200),
            vnf_degree: Degree::Fixed(3),
            ..GeneratorConfig::normal(9)
        };
        let inst = generate(&cfg).unwrap();
        assert_eq!(inst.slices.vnf_count(), 200);
        for s in &inst.slices.slices {
            let d = degrees(s.vnfs.len(), s.links.iter().map(|l| (l.a, l.b)));
            let odd = (s.vnfs.len() * 3) % 2 == 1;
            assert_eq!(d.iter().filter(|&&x| x != 3).count(), usize::from(odd));
        }
    }

    #[test]
    fn config_file_fills_from_preset() {
        let cfg: GeneratorConfig =
            serde_json::from_str(r#"{"regime": "shortage", "seed": 5, "substrate_degree": 4}"#)
                .unwrap();
        assert_eq!(cfg.node_capacity, Span(2, 4));
        assert_eq!(cfg.substrate_degree, Degree::Fixed(4));
        assert_eq!(cfg.vnf_degree, Degree::Random);
        let back: GeneratorConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<GeneratorConfig>(
            r#"{"regime":"normal","vnf_degree":"dense"}"#
        )
        .is_err());
    }

    #[test]
    fn many_seeds_stay_in_range() {
        for seed in 0..200 {
            let cfg = if seed % 2 == 0 {
                GeneratorConfig::normal(seed)
            } else {
                GeneratorConfig::shortage(seed)
            };
            let inst = generate(&cfg).unwrap();
            assert!(cfg.n_substrate.contains(inst.substrate.nodes.len() as i64));
            assert!(cfg.n_slices.contains(inst.slices.slices.len() as i64));
            for n in &inst.substrate.nodes {
                assert!(cfg.node_capacity.contains(n.capacity));
            }
            for l in &inst.substrate.links {
                assert!(cfg.link_capacity.contains(l.capacity.unwrap()));
            }
            for s in &inst.slices.slices {
                assert!(cfg.vnfs_per_slice.contains(s.vnfs.len() as i64));
                assert!(s.vnfs.iter().all(|v| cfg.vnf_demand.contains(v.demand)));
                assert!(s
                    .links
                    .iter()
                    .all(|l| cfg.bandwidth_demand.contains(l.bandwidth.unwrap())));
            }
        }
    }

    #[test]
    fn degree_change_keeps_other_draws() {
        let base = GeneratorConfig {
            vnfs_per_slice: Span(11, 40),
            ..GeneratorConfig::normal(9)
        };
        let with = |k: usize, kp: usize| {
            generate(&GeneratorConfig {
                substrate_degree: Degree::Fixed(k),
                vnf_degree: Degree::Fixed(kp),
                ..base.clone()
            })
            .unwrap()
        };
        let a = with(2, 3);
        let b = with(10, 3);
        assert_eq!(a.substrate.nodes, b.substrate.nodes);
        assert_eq!(a.slices, b.slices);
        assert_ne!(a.substrate.links.len(), b.substrate.links.len());

        let c = with(2, 10);
        assert_eq!(a.substrate, c.substrate);
        for (x, y) in a.slices.slices.iter().zip(&c.slices.slices) {
            assert_eq!(x.vnfs, y.vnfs);
        }
    }
}
