//! Finite pointed graphs, read as coalgebras for the finite powerset functor.
//!
//! A node's successor set is what the coalgebra structure map sends it to.
//! Graphs are stored in compressed sparse row form with each successor list
//! sorted ascending and free of duplicates, so iteration order is
//! deterministic everywhere downstream.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Dense 0-based node index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Accessible pointed graph in raw form.
///
/// Accessibility is not an invariant: junk nodes not reachable from the point
/// are allowed until [`Apg::reachable_restriction`] removes them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Apg {
    offsets: Vec<u32>,
    targets: Vec<NodeId>,
    point: NodeId,
}

impl fmt::Debug for Apg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for v in self.nodes() {
            m.entry(&v.0, &self.succ(v).iter().map(|n| n.0).collect::<Vec<_>>());
        }
        m.finish()?;
        write!(f, " @ {}", self.point)
    }
}

/// Partial renumbering of nodes from a source graph into a destination graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMap {
    map: Vec<Option<NodeId>>,
}

impl NodeMap {
    pub fn identity(n: usize) -> Self {
        NodeMap {
            map: (0..n).map(|i| Some(NodeId::from(i))).collect(),
        }
    }

    pub fn from_vec(map: Vec<Option<NodeId>>) -> Self {
        NodeMap { map }
    }

    pub fn total(map: impl IntoIterator<Item = NodeId>) -> Self {
        NodeMap {
            map: map.into_iter().map(Some).collect(),
        }
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> Option<NodeId> {
        self.map.get(v.index()).copied().flatten()
    }

    /// Number of source nodes the map is defined over.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(i, t)| *t == Some(NodeId::from(i)))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &NodeMap) -> NodeMap {
        NodeMap {
            map: self
                .map
                .iter()
                .map(|t| t.and_then(|t| next.get(t)))
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Option<NodeId>)> + '_ {
        self.map
            .iter()
            .enumerate()
            .map(|(i, t)| (NodeId::from(i), *t))
    }
}

/// The part of a graph generated by one node, with the inclusion back into
/// the original graph.
#[derive(Clone, Debug)]
pub struct Subcoalgebra {
    pub root: NodeId,
    pub graph: Apg,
    /// `inclusion[i]` is the node of the original graph that node `i` came from.
    pub inclusion: Vec<NodeId>,
}

impl Apg {
    /// Builds a graph from an edge list, collapsing duplicate edges.
    pub fn build(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        point: usize,
    ) -> Result<Apg> {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        check_range(point, node_count)?;
        let mut adj = vec![Vec::new(); node_count];
        for (from, to) in edges {
            check_range(from, node_count)?;
            check_range(to, node_count)?;
            adj[from].push(to);
        }
        Apg::from_adjacency(adj, point)
    }

    /// Builds a graph from per-node successor lists, in any order and with
    /// possible repeats.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>, point: usize) -> Result<Apg> {
        let n = adj.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        check_range(point, n)?;
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for succ in &mut adj {
            succ.sort_unstable();
            succ.dedup();
            for &t in succ.iter() {
                check_range(t, n)?;
                targets.push(NodeId::from(t));
            }
            offsets.push(targets.len() as u32);
        }
        Ok(Apg {
            offsets,
            targets,
            point: NodeId::from(point),
        })
    }

    /// Assumes every list is sorted, deduplicated and in range.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<NodeId>>, point: NodeId) -> Apg {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        offsets.push(0);
        for l in lists {
            debug_assert!(l.windows(2).all(|w| w[0] < w[1]));
            targets.extend(l);
            offsets.push(targets.len() as u32);
        }
        Apg {
            offsets,
            targets,
            point,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn point(&self) -> NodeId {
        self.point
    }

    /// Successors of `v`, sorted ascending.
    #[inline]
    pub fn succ(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Start of `v`'s successor list in the flat edge array; edge `e` of `v`
    /// has global index `edge_offset(v) + e`.
    #[inline]
    pub(crate) fn edge_offset(&self, v: NodeId) -> usize {
        self.offsets[v.index()] as usize
    }

    pub(crate) fn targets(&self) -> &[NodeId] {
        &self.targets
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.node_count() as u32).map(NodeId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes()
            .flat_map(move |v| self.succ(v).iter().map(move |&t| (v, t)))
    }

    /// Same graph with a different point.
    pub fn with_point(&self, point: NodeId) -> Result<Apg> {
        check_range(point.index(), self.node_count())?;
        Ok(Apg {
            offsets: self.offsets.clone(),
            targets: self.targets.clone(),
            point,
        })
    }

    /// Nodes reachable from `root`, as a membership mask.
    pub fn reachable_from(&self, root: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::new();
        seen[root.index()] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &t in self.succ(v) {
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Restricts to the nodes reachable from `keep`'s true entries, keeping
    /// their relative order. Returns the restricted lists and the renumbering.
    fn restrict_to(&self, keep: &[bool], point: NodeId) -> (Apg, NodeMap) {
        let mut map = vec![None; self.node_count()];
        let mut next = 0u32;
        for (i, &k) in keep.iter().enumerate() {
            if k {
                map[i] = Some(NodeId(next));
                next += 1;
            }
        }
        let lists = self
            .nodes()
            .filter(|v| keep[v.index()])
            .map(|v| {
                self.succ(v)
                    .iter()
                    .map(|t| map[t.index()].expect("successor of a kept node is kept"))
                    .collect()
            })
            .collect();
        let point = map[point.index()].expect("point is kept");
        (Apg::from_sorted_lists(lists, point), NodeMap::from_vec(map))
    }

    /// The subcoalgebra generated by the point: exactly the reachable nodes,
    /// renumbered in ascending order of their old ids. On an accessible graph
    /// this is the identity.
    pub fn reachable_restriction(&self) -> (Apg, NodeMap) {
        let keep = self.reachable_from(self.point);
        self.restrict_to(&keep, self.point)
    }

    pub fn is_accessible(&self) -> bool {
        self.reachable_from(self.point).iter().all(|&b| b)
    }

    /// Coproduct of graphs: summands are renumbered consecutively, in order.
    /// The point of the result is node 0, the first node of the first summand.
    pub fn disjoint_union(gs: &[Apg]) -> Result<(Apg, Vec<NodeMap>)> {
        if gs.is_empty() {
            return Err(Error::EmptyUnion);
        }
        let total: usize = gs.iter().map(Apg::node_count).sum();
        let mut offsets = Vec::with_capacity(total + 1);
        let mut targets = Vec::with_capacity(gs.iter().map(Apg::edge_count).sum());
        let mut maps = Vec::with_capacity(gs.len());
        offsets.push(0u32);
        let mut base = 0u32;
        for g in gs {
            for v in g.nodes() {
                targets.extend(g.succ(v).iter().map(|t| NodeId(t.0 + base)));
                offsets.push(targets.len() as u32);
            }
            maps.push(NodeMap::total(
                (0..g.node_count() as u32).map(|i| NodeId(i + base)),
            ));
            base += g.node_count() as u32;
        }
        Ok((
            Apg {
                offsets,
                targets,
                point: NodeId(0),
            },
            maps,
        ))
    }

    /// One generated subcoalgebra per node of the graph.
    pub fn small_subcoalgebras(&self) -> Vec<Subcoalgebra> {
        self.nodes()
            .map(|root| {
                let keep = self.reachable_from(root);
                let (graph, map) = self.restrict_to(&keep, root);
                let mut inclusion = vec![NodeId(0); graph.node_count()];
                for (old, new) in map.iter() {
                    if let Some(new) = new {
                        inclusion[new.index()] = old;
                    }
                }
                Subcoalgebra {
                    root,
                    graph,
                    inclusion,
                }
            })
            .collect()
    }

    /// Relabels nodes: node `v` becomes `perm[v]`. `perm` must be a permutation.
    pub fn permute(&self, perm: &[NodeId]) -> Apg {
        assert_eq!(perm.len(), self.node_count());
        let mut lists = vec![Vec::new(); self.node_count()];
        for v in self.nodes() {
            let mut l: Vec<NodeId> = self.succ(v).iter().map(|t| perm[t.index()]).collect();
            l.sort_unstable();
            lists[perm[v.index()].index()] = l;
        }
        Apg::from_sorted_lists(lists, perm[self.point.index()])
    }

    /// Whether `map` is a coalgebra morphism from `self` into `target`: total
    /// on `self`, and successor sets commute with it.
    pub fn is_morphism_into(&self, target: &Apg, map: &NodeMap) -> bool {
        if map.len() != self.node_count() {
            return false;
        }
        self.nodes().all(|v| {
            let Some(fv) = map.get(v) else { return false };
            if fv.index() >= target.node_count() {
                return false;
            }
            let mut image: Vec<NodeId> = match self.succ(v).iter().map(|&t| map.get(t)).collect() {
                Some(image) => image,
                None => return false,
            };
            image.sort_unstable();
            image.dedup();
            image == target.succ(fv)
        })
    }
}

fn check_range(node: usize, node_count: usize) -> Result<()> {
    if node >= node_count {
        Err(Error::NodeOutOfRange { node, node_count })
    } else {
        Ok(())
    }
}
