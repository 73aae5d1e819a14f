//! Small hand-built instances shared by tests, docs and the CLI.

use crate::model::{
    Instance, Slice, SliceSet, SubstrateLink, SubstrateNetwork, SubstrateNode, Units, VirtualLink,
    Vnf,
};

fn nodes(capacities: &[Units]) -> Vec<SubstrateNode> {
    capacities
        .iter()
        .enumerate()
        .map(|(id, &capacity)| SubstrateNode { id, capacity })
        .collect()
}

fn slice(demands: &[Units], links: &[(usize, usize, Units)]) -> Slice {
    Slice {
        vnfs: demands
            .iter()
            .enumerate()
            .map(|(id, &demand)| Vnf { id, demand })
            .collect(),
        links: links
            .iter()
            .map(|&(a, b, bw)| VirtualLink {
                a,
                b,
                bandwidth: Some(bw),
            })
            .collect(),
    }
}

/// Five base stations s1..s5 (ids 0..4) on a cycle, four resource blocks
/// each, link capacity 2. Slice 0 is the pair u1 (2 RBs), u2 (1 RB); slice 1
/// is the triangle p1, p2, p3 (1 RB each). Every virtual link asks for 1.
pub fn fig2() -> Instance {
    let links = (0..5)
        .map(|i| SubstrateLink {
            a: i,
            b: (i + 1) % 5,
            capacity: Some(2),
        })
        .collect();
    Instance::new(
        SubstrateNetwork {
            nodes: nodes(&[4; 5]),
            links,
        },
        SliceSet {
            slices: vec![
                slice(&[2, 1], &[(0, 1, 1)]),
                slice(&[1, 1, 1], &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]),
            ],
        },
    )
}

/// Single node of capacity 4 and one slice of three isolated VNFs demanding
/// 3, 2 and 2: a unit-weight knapsack.
pub fn rrs_micro() -> Instance {
    Instance::new(
        SubstrateNetwork {
            nodes: nodes(&[4]),
            links: vec![],
        },
        SliceSet {
            slices: vec![slice(&[3, 2, 2], &[])],
        },
    )
}

/// Two adjacent nodes of capacity 2 and a three-VNF path demanding 2 each.
pub fn shortage_micro() -> Instance {
    Instance::new(
        SubstrateNetwork {
            nodes: nodes(&[2, 2]),
            links: vec![SubstrateLink {
                a: 0,
                b: 1,
                capacity: Some(2),
            }],
        },
        SliceSet {
            slices: vec![slice(&[2, 2, 2], &[(0, 1, 1), (1, 2, 1)])],
        },
    )
}

/// `(a, b, capacity or bandwidth)` rows.
pub type LinkTable = [(usize, usize, Units)];

/// Builds an instance from compact tables; used heavily by tests.
pub fn build(
    capacities: &[Units],
    links: &LinkTable,
    slices: &[(&[Units], &LinkTable)],
) -> Instance {
    Instance::new(
        SubstrateNetwork {
            nodes: nodes(capacities),
            links: links
                .iter()
                .map(|&(a, b, c)| SubstrateLink {
                    a,
                    b,
                    capacity: Some(c),
                })
                .collect(),
        },
        SliceSet {
            slices: slices.iter().map(|(d, l)| slice(d, l)).collect(),
        },
    )
}
