//! Maximal bisimulation, quotients and canonical minimal graphs.
//!
//! Two nodes are bisimilar when their successor sets match up to
//! bisimilarity. The maximal bisimulation below an initial partition is the
//! coarsest refinement of it in which all members of a block have the same
//! set of successor blocks. [`naive_largest_bisimulation`] computes it by
//! pairwise fixpoint iteration and is kept as an oracle for the
//! splitter-based [`refine_partition`].

mod canon;
mod partition;
mod refine;

pub(crate) use canon::write_varint;
pub use canon::{decode, read_varint, CanonicalApg};
pub use partition::Partition;

use crate::error::{Error, Result};
use crate::graph::{Apg, NodeId, NodeMap};

/// Greatest stable refinement of `init`, by iterating the pairwise relation
/// `R(x, y) = init(x, y) ∧ ∀x'∈succ(x) ∃y'∈succ(y) R(x', y') ∧ vice versa`
/// until nothing changes. Quadratic memory; meant for small graphs.
pub fn naive_largest_bisimulation(g: &Apg, init: &Partition) -> Result<Partition> {
    init.check_for(g)?;
    let n = g.node_count();
    let mut rel = vec![false; n * n];
    for x in g.nodes() {
        for y in g.nodes() {
            rel[x.index() * n + y.index()] = init.same_block(x, y);
        }
    }
    let covered = |rel: &[bool], x: NodeId, y: NodeId| {
        g.succ(x)
            .iter()
            .all(|a| g.succ(y).iter().any(|b| rel[a.index() * n + b.index()]))
    };
    loop {
        let mut changed = false;
        for x in g.nodes() {
            for y in g.nodes() {
                if x < y
                    && rel[x.index() * n + y.index()]
                    && !(covered(&rel, x, y) && covered(&rel, y, x))
                {
                    rel[x.index() * n + y.index()] = false;
                    rel[y.index() * n + x.index()] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut block = vec![u32::MAX; n];
    let mut count = 0;
    for x in 0..n {
        if block[x] == u32::MAX {
            for y in x..n {
                if rel[x * n + y] {
                    block[y] = count;
                }
            }
            count += 1;
        }
    }
    Ok(Partition::from_raw(block, count as usize))
}

/// Same result as [`naive_largest_bisimulation`], in O(m log n).
pub fn refine_partition(g: &Apg, init: &Partition) -> Result<Partition> {
    init.check_for(g)?;
    Ok(refine::Refiner::new(g, init).run())
}

/// Collapses each block to a node. Fails if `p` is not stable for `g`.
pub fn quotient(g: &Apg, p: &Partition) -> Result<(Apg, NodeMap)> {
    p.check_for(g)?;
    let block_succ = |v: NodeId| {
        let mut s: Vec<NodeId> = g
            .succ(v)
            .iter()
            .map(|&t| NodeId::from(p.block_of(t)))
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let mut lists: Vec<Option<(NodeId, Vec<NodeId>)>> = vec![None; p.block_count()];
    for v in g.nodes() {
        let b = p.block_of(v);
        let s = block_succ(v);
        match &lists[b] {
            None => lists[b] = Some((v, s)),
            Some((rep, rs)) if *rs != s => {
                return Err(Error::UnstablePartition {
                    block: b,
                    left: rep.index(),
                    right: v.index(),
                })
            }
            Some(_) => {}
        }
    }
    let lists = lists
        .into_iter()
        .map(|l| l.expect("every block is inhabited").1)
        .collect();
    let projection = NodeMap::total(g.nodes().map(|v| NodeId::from(p.block_of(v))));
    let point = NodeId::from(p.block_of(g.point()));
    Ok((Apg::from_sorted_lists(lists, point), projection))
}

/// Restriction to the reachable part, quotient by the maximal bisimulation
/// and canonical reordering. The map sends every node of `g` reachable from
/// its point to the node of the canonical graph it denotes.
pub fn minimize(g: &Apg) -> (CanonicalApg, NodeMap) {
    let (reach, to_reach) = g.reachable_restriction();
    let p = refine::Refiner::new(&reach, &Partition::trivial(reach.node_count())).run();
    let (quot, to_quot) = quotient(&reach, &p).expect("maximal bisimulation is stable");
    let (canon, perm) = CanonicalApg::from_minimal(&quot);
    let map = to_reach.then(&to_quot).then(&NodeMap::total(perm));
    (canon, map)
}

/// Canonical reordering of a graph already known to be accessible and
/// minimal, skipping the refinement.
pub(crate) fn canonicalize_minimal(g: &Apg) -> CanonicalApg {
    CanonicalApg::from_minimal(g).0
}

pub fn canonical_encoding(c: &CanonicalApg) -> &[u8] {
    c.encoding()
}

/// Whether the points of the two graphs are bisimilar.
pub fn bisimilar(g1: &Apg, g2: &Apg) -> bool {
    let (u, maps) = Apg::disjoint_union(&[g1.clone(), g2.clone()]).expect("two summands");
    let p = refine::Refiner::new(&u, &Partition::trivial(u.node_count())).run();
    let a = maps[0].get(g1.point()).expect("total injection");
    let b = maps[1].get(g2.point()).expect("total injection");
    p.same_block(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn von_neumann_two() -> Apg {
        // 0 = {1, 2}, 1 = {2}, 2 = {}
        Apg::build(3, [(0, 1), (0, 2), (1, 2)], 0).unwrap()
    }

    fn both(g: &Apg, init: &Partition) -> Partition {
        let a = naive_largest_bisimulation(g, init).unwrap();
        let b = refine_partition(g, init).unwrap();
        assert_eq!(a, b, "oracle disagreement on {g:?}");
        a
    }

    #[test]
    fn edgeless_nodes_form_one_block() {
        let g = Apg::build(3, [], 0).unwrap();
        assert_eq!(both(&g, &Partition::trivial(3)).block_count(), 1);
    }

    #[test]
    fn two_cycle_is_one_block() {
        let g = Apg::build(2, [(0, 1), (1, 0)], 0).unwrap();
        assert_eq!(both(&g, &Partition::trivial(2)).block_count(), 1);
    }

    #[test]
    fn von_neumann_two_has_three_blocks() {
        let g = von_neumann_two();
        assert_eq!(both(&g, &Partition::trivial(3)).block_count(), 3);
    }

    #[test]
    fn discrete_init_stays_discrete() {
        let g = Apg::build(3, [(0, 1), (1, 0), (2, 2)], 0).unwrap();
        assert!(both(&g, &Partition::discrete(3)).is_discrete());
    }

    #[test]
    fn malformed_partition_rejected() {
        let g = von_neumann_two();
        assert!(refine_partition(&g, &Partition::trivial(2)).is_err());
        assert!(naive_largest_bisimulation(&g, &Partition::trivial(4)).is_err());
    }

    #[test]
    fn quotient_by_discrete_is_isomorphic() {
        let g = von_neumann_two();
        let (q, map) = quotient(&g, &Partition::discrete(3)).unwrap();
        assert_eq!(q, g);
        assert!(map.is_identity());
    }

    #[test]
    fn quotient_of_two_cycle_is_loop() {
        let g = Apg::build(2, [(0, 1), (1, 0)], 0).unwrap();
        let (q, map) = quotient(&g, &Partition::trivial(2)).unwrap();
        assert_eq!(q, Apg::build(1, [(0, 0)], 0).unwrap());
        assert!(g.is_morphism_into(&q, &map));
    }

    #[test]
    fn quotient_of_parallel_chains() {
        // 0 -> 1, 2 -> 3; blocks {0, 2} and {1, 3}
        let g = Apg::build(4, [(0, 1), (2, 3)], 0).unwrap();
        let p = Partition::from_blocks(vec![0, 1, 0, 1]).unwrap();
        let (q, map) = quotient(&g, &p).unwrap();
        assert_eq!(q, Apg::build(2, [(0, 1)], 0).unwrap());
        assert!(g.is_morphism_into(&q, &map));
    }

    #[test]
    fn quotient_rejects_unstable() {
        let g = von_neumann_two();
        let err = quotient(&g, &Partition::trivial(3)).unwrap_err();
        assert!(matches!(err, Error::UnstablePartition { .. }));
    }

    #[test]
    fn cycles_of_singletons_minimize_to_quine_atom() {
        let omega = Apg::build(1, [(0, 0)], 0).unwrap();
        for n in 1..8 {
            let g = Apg::build(n, (0..n).map(|i| (i, (i + 1) % n)), 0).unwrap();
            let (c, map) = minimize(&g);
            assert_eq!(c.graph(), &omega);
            assert!(g.is_morphism_into(c.graph(), &map));
        }
    }

    #[test]
    fn duplicated_empty_nodes_collapse() {
        // 0 = {1, 2, 3}, 1 = {} , 2 = {4}, 3 = {}, 4 = {}
        let g = Apg::build(5, [(0, 1), (0, 2), (0, 3), (2, 4)], 0).unwrap();
        let (c, _) = minimize(&g);
        assert_eq!(c.node_count(), 3);
        assert_eq!(c.encoding(), minimize(&von_neumann_two()).0.encoding());
    }

    #[test]
    fn minimize_is_idempotent_and_encoding_fixed() {
        let (c, _) = minimize(&Apg::build(1, [(0, 0)], 0).unwrap());
        assert_eq!(canonical_encoding(&c), &[1, 0, 1, 0]);
        let (c2, map) = minimize(c.graph());
        assert_eq!(c2.encoding(), c.encoding());
        assert!(map.is_identity());
        let (e, _) = minimize(&Apg::build(1, [], 0).unwrap());
        assert_ne!(e.encoding(), c.encoding());
    }

    #[test]
    fn independent_copies_encode_identically() {
        let a = von_neumann_two();
        // Same set, different numbering: 0 = {}, 1 = {0}, 2 = {0, 1}
        let b = Apg::build(3, [(1, 0), (2, 0), (2, 1)], 2).unwrap();
        assert_eq!(minimize(&a).0.encoding(), minimize(&b).0.encoding());
    }

    #[test]
    fn bisimilar_examples() {
        let xy = Apg::build(2, [(0, 1), (1, 0)], 0).unwrap();
        let z = Apg::build(1, [(0, 0)], 0).unwrap();
        let empty = Apg::build(1, [], 0).unwrap();
        assert!(bisimilar(&xy, &z));
        assert!(!bisimilar(&empty, &z));
        assert!(bisimilar(&xy, minimize(&xy).0.graph()));
    }
}
