#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slice_embed::fixtures::{build, LinkTable};
use slice_embed::model::Units;
use slice_embed::Instance;

/// Random instance with at most `max_nodes` substrate nodes and `max_vnfs`
/// VNFs in total. Links and virtual links appear with probability one half.
pub fn random_micro(seed: u64, max_nodes: usize, max_vnfs: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_nodes);
    let caps: Vec<Units> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let mut links = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                links.push((a, b, rng.gen_range(0..=3)));
            }
        }
    }
    let mut budget = rng.gen_range(1..=max_vnfs);
    let mut slices = Vec::<(Vec<Units>, Vec<(usize, usize, Units)>)>::new();
    while budget > 0 {
        let size = rng.gen_range(1..=budget);
        budget -= size;
        let demands = (0..size).map(|_| rng.gen_range(1..=3)).collect();
        let mut vl = Vec::new();
        for a in 0..size {
            for b in a + 1..size {
                if rng.gen_bool(0.5) {
                    vl.push((a, b, rng.gen_range(1..=2)));
                }
            }
        }
        slices.push((demands, vl));
    }
    let refs: Vec<(&[Units], &LinkTable)> = slices
        .iter()
        .map(|(d, l)| (d.as_slice(), l.as_slice()))
        .collect();
    build(&caps, &links, &refs)
}

/// Flat VNF list: (slice, index, demand), slice-major.
fn flat_vnfs(inst: &Instance) -> Vec<(usize, usize, Units)> {
    let mut out = Vec::new();
    for (s, slice) in inst.slices.slices.iter().enumerate() {
        for v in &slice.vnfs {
            out.push((s, v.id, v.demand));
        }
    }
    out
}

/// Checks an assignment (`hosts[i]` for flat VNF `i`) directly against the
/// raw instance tables.
pub fn feasible(inst: &Instance, hosts: &[Option<usize>]) -> bool {
    let vnfs = flat_vnfs(inst);
    let n = inst.substrate.nodes.len();
    let mut load = vec![0; n];
    for (i, h) in hosts.iter().enumerate() {
        if let Some(t) = *h {
            load[t] += vnfs[i].2;
        }
    }
    if (0..n).any(|t| load[t] > inst.substrate.nodes[t].capacity) {
        return false;
    }
    let flat = |s: usize, idx: usize| vnfs.iter().position(|v| v.0 == s && v.1 == idx).unwrap();
    let mut traffic = vec![0; inst.substrate.links.len()];
    for (s, slice) in inst.slices.slices.iter().enumerate() {
        for vl in &slice.links {
            let (Some(x), Some(y)) = (hosts[flat(s, vl.a)], hosts[flat(s, vl.b)]) else {
                continue;
            };
            if x == y {
                continue;
            }
            let Some(l) = inst
                .substrate
                .links
                .iter()
                .position(|l| (l.a, l.b) == (x, y) || (l.a, l.b) == (y, x))
            else {
                return false;
            };
            traffic[l] += vl.bandwidth.unwrap();
        }
    }
    inst.substrate
        .links
        .iter()
        .zip(&traffic)
        .all(|(l, &t)| t <= l.capacity.unwrap())
}

/// Maximum embedded count by enumerating all (nodes + 1)^VNFs assignments.
pub fn brute_force_max(inst: &Instance) -> usize {
    let v = flat_vnfs(inst).len();
    let n = inst.substrate.nodes.len();
    let mut hosts = vec![None; v];
    let mut best = 0;
    loop {
        let count = hosts.iter().filter(|h| h.is_some()).count();
        if count > best && feasible(inst, &hosts) {
            best = count;
        }
        // odometer increment over None, Some(0), .., Some(n - 1)
        let mut i = 0;
        loop {
            if i == v {
                return best;
            }
            hosts[i] = match hosts[i] {
                None if n > 0 => Some(0),
                Some(t) if t + 1 < n => Some(t + 1),
                _ => None,
            };
            if hosts[i].is_some() {
                break;
            }
            i += 1;
        }
    }
}

/// Flat host vector of a plan, in slice-major order.
pub fn hosts_of(inst: &Instance, plan: &slice_embed::MappingPlan) -> Vec<Option<usize>> {
    flat_vnfs(inst)
        .iter()
        .map(|&(s, i, _)| plan.host(slice_embed::model::VnfId::new(s, i)).map(|n| n.0))
        .collect()
}
