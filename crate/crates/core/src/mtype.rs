//! Rational elements of M-types: possibly infinite trees over a signature.
//!
//! A signature lists symbols with finite arities. A finite labelled graph
//! in which every node carries a symbol and an ordered list of children of
//! the right length is a coalgebra for the polynomial functor of the
//! signature, and each node unfolds to a tree. [`MUniverse::unfold`]
//! interns the minimal representative of that tree.
//!
//! Children are positional: two nodes are bisimilar when their symbols agree
//! and their `i`-th children are bisimilar for every `i`. Sets of children
//! are never compared as sets.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use crate::bisim::{refine_partition, write_varint, Partition};
use crate::error::{Error, Result};
use crate::graph::{Apg, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<(String, usize)>,
    index: HashMap<String, SymbolId>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut out = Signature {
            symbols: Vec::new(),
            index: HashMap::new(),
        };
        for (name, arity) in symbols {
            let name = name.into();
            if out.index.contains_key(&name) {
                return Err(Error::DuplicateSymbol(name));
            }
            out.index
                .insert(name.clone(), SymbolId(out.symbols.len() as u32));
            out.symbols.push((name, arity));
        }
        if out.symbols.is_empty() {
            return Err(Error::EmptySignature);
        }
        Ok(out)
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn arity(&self, s: SymbolId) -> usize {
        self.symbols[s.0 as usize].1
    }

    pub fn name(&self, s: SymbolId) -> &str {
        &self.symbols[s.0 as usize].0
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Finite coalgebra of a polynomial functor: every node has a symbol and
/// one child per argument position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelledApg {
    labels: Vec<SymbolId>,
    children: Vec<Vec<NodeId>>,
    point: NodeId,
}

impl LabelledApg {
    /// Nodes given as `(symbol name, children)`.
    pub fn build(sig: &Signature, nodes: &[(&str, Vec<usize>)], point: usize) -> Result<Self> {
        let labels = nodes
            .iter()
            .map(|(name, _)| {
                sig.symbol(name)
                    .ok_or_else(|| Error::UnknownSymbol((*name).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let children = nodes
            .iter()
            .map(|(_, cs)| cs.iter().map(|&c| NodeId::from(c)).collect())
            .collect();
        let g = LabelledApg {
            labels,
            children,
            point: NodeId::from(point),
        };
        g.validate(sig)?;
        Ok(g)
    }

    pub fn from_parts(labels: Vec<SymbolId>, children: Vec<Vec<NodeId>>, point: NodeId) -> Self {
        LabelledApg {
            labels,
            children,
            point,
        }
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if self.children.len() != n {
            return Err(Error::InvalidConfig(format!(
                "{} labels but {} child lists",
                n,
                self.children.len()
            )));
        }
        if self.point.index() >= n {
            return Err(Error::NodeOutOfRange {
                node: self.point.index(),
                node_count: n,
            });
        }
        for (label, cs) in self.labels.iter().zip(&self.children) {
            if label.0 as usize >= sig.len() {
                return Err(Error::UnknownSymbol(format!("#{}", label.0)));
            }
            let arity = sig.arity(*label);
            if cs.len() != arity {
                return Err(Error::ArityMismatch {
                    symbol: sig.name(*label).to_string(),
                    expected: arity,
                    found: cs.len(),
                });
            }
            if let Some(c) = cs.iter().find(|c| c.index() >= n) {
                return Err(Error::NodeOutOfRange {
                    node: c.index(),
                    node_count: n,
                });
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn point(&self) -> NodeId {
        self.point
    }

    pub fn label(&self, v: NodeId) -> SymbolId {
        self.labels[v.index()]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.index()]
    }

    pub fn with_point(&self, point: NodeId) -> LabelledApg {
        LabelledApg {
            point,
            ..self.clone()
        }
    }

    /// Nodes reachable from the point, renumbered in breadth-first order
    /// following children left to right. `map[old]` is the new id.
    fn bfs_restriction(&self) -> (LabelledApg, Vec<Option<NodeId>>) {
        let mut map = vec![None; self.node_count()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        map[self.point.index()] = Some(NodeId(0));
        order.push(self.point);
        queue.push_back(self.point);
        while let Some(v) = queue.pop_front() {
            for &c in self.children(v) {
                if map[c.index()].is_none() {
                    map[c.index()] = Some(NodeId::from(order.len()));
                    order.push(c);
                    queue.push_back(c);
                }
            }
        }
        let labels = order.iter().map(|&v| self.label(v)).collect();
        let children = order
            .iter()
            .map(|&v| {
                self.children(v)
                    .iter()
                    .map(|c| map[c.index()].expect("reachable"))
                    .collect()
            })
            .collect();
        (
            LabelledApg {
                labels,
                children,
                point: NodeId(0),
            },
            map,
        )
    }

    /// Labelled bisimulation classes of the nodes.
    ///
    /// Positions are made explicit: every (node, position) pair becomes an
    /// auxiliary node with the child as its single successor, labelled by the
    /// position. Plain set bisimulation on that graph, started from the
    /// partition by symbol and position, matches children positionwise.
    pub fn bisimulation(&self) -> Partition {
        let n = self.node_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut labels: Vec<(u32, u32)> = self.labels.iter().map(|s| (0, s.0)).collect();
        for v in 0..n {
            for (i, &c) in self.children[v].iter().enumerate() {
                let aux = adj.len();
                adj.push(vec![c.index()]);
                labels.push((1, i as u32));
                adj[v].push(aux);
            }
        }
        let g = Apg::from_adjacency(adj, 0).expect("valid by construction");
        let init = Partition::from_labels(&labels);
        let full = refine_partition(&g, &init).expect("partition sized to graph");
        Partition::from_labels(&full.labels()[..n])
    }

    /// Minimal representative in canonical (breadth-first) order.
    fn canonical(&self) -> LabelledApg {
        let (reach, _) = self.bfs_restriction();
        let p = reach.bisimulation();
        let mut labels = vec![SymbolId(0); p.block_count()];
        let mut children = vec![Vec::new(); p.block_count()];
        for v in 0..reach.node_count() {
            let b = p.block_of(NodeId::from(v));
            labels[b] = reach.labels[v];
            children[b] = reach.children[v]
                .iter()
                .map(|&c| NodeId::from(p.block_of(c)))
                .collect();
        }
        let quotient = LabelledApg {
            labels,
            children,
            point: NodeId::from(p.block_of(reach.point)),
        };
        quotient.bfs_restriction().0
    }

    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        write_varint(&mut out, self.node_count() as u64);
        write_varint(&mut out, u64::from(self.point.0));
        for (label, cs) in self.labels.iter().zip(&self.children) {
            write_varint(&mut out, u64::from(label.0));
            write_varint(&mut out, cs.len() as u64);
            for c in cs {
                write_varint(&mut out, u64::from(c.0));
            }
        }
        out
    }
}

struct MEntry {
    graph: LabelledApg,
    children: OnceLock<Vec<u32>>,
}

#[derive(Default)]
struct MStore {
    by_key: HashMap<Vec<u8>, u32>,
    entries: Vec<Arc<MEntry>>,
}

struct MShared {
    signature: Signature,
    store: RwLock<MStore>,
}

/// Interned trees over one signature.
#[derive(Clone)]
pub struct MUniverse {
    shared: Arc<MShared>,
}

impl fmt::Debug for MUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MUniverse")
            .field("symbols", &self.shared.signature.len())
            .field("trees", &self.len())
            .finish()
    }
}

/// Handle to an interned tree.
#[derive(Clone)]
pub struct MTree {
    id: u32,
    universe: MUniverse,
}

impl PartialEq for MTree {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && Arc::ptr_eq(&self.universe.shared, &other.universe.shared)
    }
}

impl Eq for MTree {}

impl Hash for MTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl fmt::Debug for MTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MTree#{}", self.id)
    }
}

impl MUniverse {
    pub fn new(signature: Signature) -> Self {
        MUniverse {
            shared: Arc::new(MShared {
                signature,
                store: RwLock::new(MStore::default()),
            }),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.shared.signature
    }

    pub fn len(&self) -> usize {
        self.shared.store.read().expect("store lock").entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn entry(&self, id: u32) -> Arc<MEntry> {
        self.shared.store.read().expect("store lock").entries[id as usize].clone()
    }

    fn insert(&self, canonical: LabelledApg) -> MTree {
        let key = canonical.encode();
        if let Some(&id) = self
            .shared
            .store
            .read()
            .expect("store lock")
            .by_key
            .get(&key)
        {
            return MTree {
                id,
                universe: self.clone(),
            };
        }
        let mut store = self.shared.store.write().expect("store lock");
        let next = store.entries.len() as u32;
        let id = *store.by_key.entry(key).or_insert(next);
        if id == next {
            store.entries.push(Arc::new(MEntry {
                graph: canonical,
                children: OnceLock::new(),
            }));
        }
        MTree {
            id,
            universe: self.clone(),
        }
    }

    /// The tree the point of `c` unfolds to.
    pub fn unfold(&self, c: &LabelledApg) -> Result<MTree> {
        c.validate(self.signature())?;
        Ok(self.insert(c.canonical()))
    }
}

/// Finite cut of a tree; [`FiniteTree::Continue`] marks the frontier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiniteTree {
    Node {
        symbol: String,
        children: Vec<FiniteTree>,
    },
    Continue,
}

impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteTree::Continue => f.write_str("⋯"),
            FiniteTree::Node { symbol, children } => {
                f.write_str(symbol)?;
                if !children.is_empty() {
                    f.write_str("(")?;
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{c}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl MTree {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn universe(&self) -> &MUniverse {
        &self.universe
    }

    /// Canonical minimal graph; its point is node 0.
    pub fn graph(&self) -> LabelledApg {
        self.universe.entry(self.id).graph.clone()
    }

    /// Equality of trees. Trees over different universes cannot be compared.
    pub fn mtree_equals(&self, other: &MTree) -> Result<bool> {
        if !Arc::ptr_eq(&self.universe.shared, &other.universe.shared) {
            return Err(Error::UniverseMismatch);
        }
        Ok(self.id == other.id)
    }

    pub fn symbol(&self) -> String {
        let e = self.universe.entry(self.id);
        let s = e.graph.label(e.graph.point());
        self.universe.signature().name(s).to_string()
    }

    /// Root symbol and subtrees.
    pub fn observe(&self) -> (String, Vec<MTree>) {
        let entry = self.universe.entry(self.id);
        let ids = entry.children.get_or_init(|| {
            let g = &entry.graph;
            g.children(g.point())
                .iter()
                // Generated subgraphs of a minimal graph stay minimal;
                // re-canonicalizing only renumbers.
                .map(|&c| self.universe.insert(g.with_point(c).canonical()).id)
                .collect()
        });
        let children = ids
            .iter()
            .map(|&id| MTree {
                id,
                universe: self.universe.clone(),
            })
            .collect();
        (self.symbol(), children)
    }

    pub fn truncate(&self, depth: usize) -> FiniteTree {
        let entry = self.universe.entry(self.id);
        let sig = self.universe.signature();
        fn go(g: &LabelledApg, sig: &Signature, v: NodeId, depth: usize) -> FiniteTree {
            if depth == 0 {
                return FiniteTree::Continue;
            }
            FiniteTree::Node {
                symbol: sig.name(g.label(v)).to_string(),
                children: g
                    .children(v)
                    .iter()
                    .map(|&c| go(g, sig, c, depth - 1))
                    .collect(),
            }
        }
        go(&entry.graph, sig, entry.graph.point(), depth)
    }
}
