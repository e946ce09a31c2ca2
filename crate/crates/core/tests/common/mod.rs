//! Reference implementations used only by tests. They are deliberately
//! simple and share no code with the library algorithms they check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hydra_core::mtype::{LabelledApg, Signature, SymbolId};
use hydra_core::{Apg, NodeId};
use rand::Rng;

/// Greatest bisimulation as a boolean matrix: start from all pairs and
/// delete pairs whose successor sets do not match, until nothing changes.
pub fn bisim_matrix(g: &Apg) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut r = vec![vec![true; n]; n];
    let succ = |v: usize| {
        g.succ(NodeId::from(v))
            .iter()
            .map(|t| t.index())
            .collect::<Vec<_>>()
    };
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !r[a][b] {
                    continue;
                }
                let (sa, sb) = (succ(a), succ(b));
                let forth = sa.iter().all(|&x| sb.iter().any(|&y| r[x][y]));
                let back = sb.iter().all(|&y| sa.iter().any(|&x| r[x][y]));
                if !(forth && back) {
                    r[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

/// Set denoted by node `v` of an acyclic graph, as text with elements
/// sorted and deduplicated. Equal text means equal sets.
pub fn wf_repr(g: &Apg, v: NodeId) -> String {
    let elems: BTreeSet<String> = g.succ(v).iter().map(|&c| wf_repr(g, c)).collect();
    let parts: Vec<String> = elems.into_iter().collect();
    format!("{{{}}}", parts.join(","))
}

/// Random finite coalgebra over `sig`, point 0.
pub fn random_labelled(rng: &mut impl Rng, sig: &Signature, max_nodes: usize) -> LabelledApg {
    let n = rng.gen_range(1..=max_nodes);
    let labels: Vec<SymbolId> = (0..n)
        .map(|_| SymbolId(rng.gen_range(0..sig.len() as u32)))
        .collect();
    let children = labels
        .iter()
        .map(|&s| {
            (0..sig.arity(s))
                .map(|_| NodeId::from(rng.gen_range(0..n)))
                .collect()
        })
        .collect();
    LabelledApg::from_parts(labels, children, NodeId(0))
}

/// Labelled bisimilarity: same symbol and positionwise related children.
pub fn labelled_matrix(g: &LabelledApg) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let node = |v: usize| NodeId::from(v);
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| g.label(node(a)) == g.label(node(b)))
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if r[a][b]
                    && !g
                        .children(node(a))
                        .iter()
                        .zip(g.children(node(b)))
                        .all(|(x, y)| r[x.index()][y.index()])
                {
                    r[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}
