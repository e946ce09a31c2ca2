//! Canonical node order and byte encoding of minimal graphs.

use std::fmt;

use crate::graph::{Apg, NodeId};

/// A bisimulation-minimal accessible graph with nodes in canonical order,
/// together with its encoding.
///
/// Two canonical graphs are bisimilar exactly when their encodings are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalApg {
    graph: Apg,
    encoding: Vec<u8>,
}

impl fmt::Debug for CanonicalApg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Canonical({:?})", self.graph)
    }
}

impl CanonicalApg {
    /// `graph` must already be minimal; its nodes are reordered.
    pub(crate) fn from_minimal(graph: &Apg) -> (CanonicalApg, Vec<NodeId>) {
        let perm = canonical_order(graph);
        let graph = graph.permute(&perm);
        let encoding = encode(&graph);
        (CanonicalApg { graph, encoding }, perm)
    }

    /// Wraps a graph without reordering or checking minimality.
    pub(crate) fn unchecked(graph: Apg) -> CanonicalApg {
        let encoding = encode(&graph);
        CanonicalApg { graph, encoding }
    }

    pub fn graph(&self) -> &Apg {
        &self.graph
    }

    pub fn encoding(&self) -> &[u8] {
        &self.encoding
    }

    pub fn into_graph(self) -> Apg {
        self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }
}

/// Colour refinement: colour 0 everywhere, then each round ranks nodes by
/// `(own colour, sorted successor colours)` lexicographically. On a minimal
/// accessible graph the stable colouring is discrete and gives an
/// isomorphism-invariant total order. Returns `perm[v]` = new index of `v`.
pub(crate) fn canonical_order(g: &Apg) -> Vec<NodeId> {
    let n = g.node_count();
    let mut colour = vec![0u32; n];
    let mut classes = 1usize;
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut sig_off = vec![0usize; n + 1];
    let mut sig = Vec::with_capacity(g.edge_count());
    while classes < n {
        sig.clear();
        for v in g.nodes() {
            let s0 = sig.len();
            sig.extend(g.succ(v).iter().map(|t| colour[t.index()]));
            sig[s0..].sort_unstable();
            sig_off[v.index() + 1] = sig.len();
        }
        let key = |v: u32| {
            let v = v as usize;
            (colour[v], &sig[sig_off[v]..sig_off[v + 1]])
        };
        order.sort_unstable_by(|&a, &b| key(a).cmp(&key(b)));
        let mut next = vec![0u32; n];
        let mut rank = 0u32;
        for i in 0..n {
            if i > 0 && key(order[i - 1]) != key(order[i]) {
                rank += 1;
            }
            next[order[i] as usize] = rank;
        }
        let new_classes = rank as usize + 1;
        colour = next;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }
    debug_assert!(
        {
            let mut c = colour.clone();
            c.sort_unstable();
            c.dedup();
            c.len() == n
        },
        "canonical_order called on a non-minimal graph"
    );
    colour.into_iter().map(NodeId).collect()
}

pub(crate) fn write_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

/// Reads one varint, advancing `input`.
pub fn read_varint(input: &mut &[u8]) -> Option<u64> {
    let mut v = 0u64;
    for shift in (0..64).step_by(7) {
        let (&byte, rest) = input.split_first()?;
        *input = rest;
        v |= u64::from(byte & 0x7f) << shift;
        if byte & 0x80 == 0 {
            return Some(v);
        }
    }
    None
}

/// `node_count, point, then per node: successor count and successors`, all
/// as unsigned little-endian base-128 varints.
pub(crate) fn encode(g: &Apg) -> Vec<u8> {
    let mut out = Vec::with_capacity(2 + g.node_count() + g.edge_count());
    write_varint(&mut out, g.node_count() as u64);
    write_varint(&mut out, u64::from(g.point().0));
    for v in g.nodes() {
        let succ = g.succ(v);
        write_varint(&mut out, succ.len() as u64);
        for t in succ {
            write_varint(&mut out, u64::from(t.0));
        }
    }
    out
}

/// Inverse of the encoding; `None` on malformed input.
pub fn decode(mut bytes: &[u8]) -> Option<Apg> {
    let input = &mut bytes;
    let n = read_varint(input)? as usize;
    let point = read_varint(input)? as usize;
    let mut adj = Vec::with_capacity(n.min(1 << 20));
    for _ in 0..n {
        let k = read_varint(input)? as usize;
        let mut succ = Vec::with_capacity(k.min(1 << 20));
        for _ in 0..k {
            succ.push(read_varint(input)? as usize);
        }
        adj.push(succ);
    }
    if !input.is_empty() {
        return None;
    }
    Apg::from_adjacency(adj, point).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn varint_boundaries() {
        for v in [
            0u64,
            1,
            127,
            128,
            300,
            16_383,
            16_384,
            u64::from(u32::MAX),
            u64::MAX,
        ] {
            let mut buf = Vec::new();
            write_varint(&mut buf, v);
            let mut s = &buf[..];
            assert_eq!(read_varint(&mut s), Some(v));
            assert!(s.is_empty());
        }
        let mut buf = Vec::new();
        write_varint(&mut buf, 300);
        assert_eq!(buf, vec![0xac, 0x02]);
    }

    #[test]
    fn quine_atom_bytes() {
        let g = Apg::build(1, [(0, 0)], 0).unwrap();
        assert_eq!(encode(&g), vec![1, 0, 1, 0]);
        let empty = Apg::build(1, [], 0).unwrap();
        assert_eq!(encode(&empty), vec![1, 0, 0]);
    }

    #[test]
    fn decode_inverts_encode() {
        let g = Apg::build(3, [(0, 1), (0, 2), (1, 2), (2, 0)], 1).unwrap();
        assert_eq!(decode(&encode(&g)), Some(g));
        assert_eq!(decode(&[1, 0, 1]), None);
        assert_eq!(decode(&[1, 0, 0, 9]), None);
    }
}
