//! The universe of hereditarily finite hypersets.
//!
//! A [`Universe`] interns canonical minimal graphs: each distinct hyperset
//! gets one id, so extensional equality is id equality. [`HSet::elements`]
//! and [`Universe::from_elements`] are the two directions of the fixpoint
//! between sets and finite sets of sets; every other operation is built from
//! them.
//!
//! Smallness is finiteness here. The universe is closed under all the
//! operations below, but it does not contain `ω`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use crate::bisim::{self, CanonicalApg};
use crate::error::{Error, Result};
use crate::graph::{Apg, NodeId};

/// Resource bounds. Exceeding one is a clean [`Error::Resource`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest raw graph accepted by interning.
    pub max_nodes: usize,
    /// Largest set whose powerset may be built.
    pub max_powerset_base: usize,
    pub max_numeral: u64,
    /// Largest number of functions an exponential may contain.
    pub max_exponential: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 1_000_000,
            max_powerset_base: 20,
            max_numeral: 1_000,
            max_exponential: 1 << 16,
        }
    }
}

struct Entry {
    canon: Arc<CanonicalApg>,
    // Sorted by canonical encoding.
    elements: OnceLock<Vec<u32>>,
}

#[derive(Default)]
struct Store {
    by_key: HashMap<Vec<u8>, u32>,
    entries: Vec<Arc<Entry>>,
}

struct Shared {
    store: RwLock<Store>,
    limits: Limits,
    // Deliberately broken mode for mutation tests: interns raw graphs
    // without quotienting by bisimilarity.
    skip_minimize: bool,
}

/// Append-only interning table of hypersets. Cloning shares the table.
#[derive(Clone)]
pub struct Universe {
    shared: Arc<Shared>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("sets", &self.len())
            .finish()
    }
}

impl Default for Universe {
    fn default() -> Self {
        Universe::new()
    }
}

/// Handle to an interned hyperset.
#[derive(Clone)]
pub struct HSet {
    id: u32,
    universe: Universe,
}

impl PartialEq for HSet {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.universe.same_as(&other.universe)
    }
}

impl Eq for HSet {}

impl Hash for HSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl fmt::Debug for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HSet#{}", self.id)
    }
}

impl fmt::Display for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::lang::print_canonical(self, None))
    }
}

impl Universe {
    pub fn new() -> Self {
        Universe::with_limits(Limits::default())
    }

    pub fn with_limits(limits: Limits) -> Self {
        Universe {
            shared: Arc::new(Shared {
                store: RwLock::new(Store::default()),
                limits,
                skip_minimize: false,
            }),
        }
    }

    /// A universe that interns graphs without minimizing them, so bisimilar
    /// graphs get distinct ids. Exists only to check that the axiom suite
    /// notices.
    #[doc(hidden)]
    pub fn broken_without_minimize() -> Self {
        Universe {
            shared: Arc::new(Shared {
                store: RwLock::new(Store::default()),
                limits: Limits::default(),
                skip_minimize: true,
            }),
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.shared.limits
    }

    /// Number of distinct sets interned so far.
    pub fn len(&self) -> usize {
        self.shared.store.read().expect("store lock").entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn same_as(&self, other: &Universe) -> bool {
        Arc::ptr_eq(&self.shared, &other.shared)
    }

    fn handle(&self, id: u32) -> HSet {
        HSet {
            id,
            universe: self.clone(),
        }
    }

    fn entry(&self, id: u32) -> Arc<Entry> {
        self.shared.store.read().expect("store lock").entries[id as usize].clone()
    }

    fn check(&self, x: &HSet) -> Result<()> {
        if x.universe.same_as(self) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    /// Atomic check-or-insert: concurrent callers with equal encodings get
    /// the same id.
    fn insert(&self, canon: CanonicalApg) -> HSet {
        if let Some(&id) = self
            .shared
            .store
            .read()
            .expect("store lock")
            .by_key
            .get(canon.encoding())
        {
            return self.handle(id);
        }
        let mut store = self.shared.store.write().expect("store lock");
        let next = store.entries.len() as u32;
        let id = *store
            .by_key
            .entry(canon.encoding().to_vec())
            .or_insert(next);
        if id == next {
            store.entries.push(Arc::new(Entry {
                canon: Arc::new(canon),
                elements: OnceLock::new(),
            }));
        }
        drop(store);
        self.handle(id)
    }

    fn check_size(&self, g: &Apg) -> Result<()> {
        let limit = self.shared.limits.max_nodes;
        if g.node_count() > limit {
            return Err(Error::Resource {
                what: "graph nodes",
                requested: g.node_count() as u128,
                limit: limit as u128,
            });
        }
        Ok(())
    }

    /// The set denoted by the point of `g`. Bisimilar graphs give the same
    /// handle.
    pub fn intern(&self, g: &Apg) -> Result<HSet> {
        self.check_size(g)?;
        if self.shared.skip_minimize {
            let (raw, _) = g.reachable_restriction();
            return Ok(self.insert(CanonicalApg::unchecked(raw)));
        }
        Ok(self.insert(bisim::minimize(g).0))
    }

    /// Interns the sets denoted by several nodes of one graph, refining the
    /// graph only once.
    pub fn intern_nodes(&self, g: &Apg, nodes: &[NodeId]) -> Result<Vec<HSet>> {
        self.check_size(g)?;
        if self.shared.skip_minimize {
            return nodes
                .iter()
                .map(|&v| self.intern(&g.with_point(v)?))
                .collect();
        }
        let p = bisim::refine_partition(g, &bisim::Partition::trivial(g.node_count()))?;
        let (q, proj) = bisim::quotient(g, &p)?;
        let mut by_block: HashMap<NodeId, HSet> = HashMap::new();
        let mut out = Vec::with_capacity(nodes.len());
        for &v in nodes {
            let b = proj.get(v).ok_or(Error::NodeOutOfRange {
                node: v.index(),
                node_count: g.node_count(),
            })?;
            let set = match by_block.get(&b) {
                Some(s) => s.clone(),
                None => {
                    let (sub, _) = q.with_point(b)?.reachable_restriction();
                    let s = self.insert(bisim::canonicalize_minimal(&sub));
                    by_block.insert(b, s.clone());
                    s
                }
            };
            out.push(set);
        }
        Ok(out)
    }

    pub fn empty(&self) -> HSet {
        self.insert(bisim::canonicalize_minimal(
            &Apg::build(1, [], 0).expect("one node"),
        ))
    }

    /// The Quine atom `Ω = {Ω}`.
    pub fn omega(&self) -> HSet {
        self.insert(bisim::canonicalize_minimal(
            &Apg::build(1, [(0, 0)], 0).expect("one node"),
        ))
    }

    /// The set whose members are exactly `xs`, duplicates collapsed.
    pub fn from_elements(&self, xs: &[HSet]) -> Result<HSet> {
        for x in xs {
            self.check(x)?;
        }
        // Graph over the membership closure of `xs`: node 0 is the new set,
        // every other node an already interned set.
        let mut index: HashMap<u32, usize> = HashMap::new();
        let mut ids = Vec::new();
        let mut queue = VecDeque::new();
        let mut root = Vec::with_capacity(xs.len());
        for x in xs {
            let next = index.len() + 1;
            let slot = *index.entry(x.id).or_insert_with(|| {
                ids.push(x.id);
                queue.push_back(x.id);
                next
            });
            root.push(slot);
        }
        let mut adj: Vec<Vec<usize>> = vec![root];
        let mut processed = 0;
        while let Some(id) = queue.pop_front() {
            processed += 1;
            if processed > self.shared.limits.max_nodes {
                return Err(Error::Resource {
                    what: "graph nodes",
                    requested: processed as u128,
                    limit: self.shared.limits.max_nodes as u128,
                });
            }
            let members = self.element_ids(id);
            let mut succ = Vec::with_capacity(members.len());
            for m in members.iter() {
                let next = index.len() + 1;
                let slot = *index.entry(*m).or_insert_with(|| {
                    ids.push(*m);
                    queue.push_back(*m);
                    next
                });
                succ.push(slot);
            }
            adj.push(succ);
        }
        let g = Apg::from_adjacency(adj, 0)?;
        self.intern(&g)
    }

    /// The von Neumann numeral `n`, up to [`Limits::max_numeral`].
    pub fn numeral(&self, n: u64) -> Result<HSet> {
        let limit = self.shared.limits.max_numeral;
        if n > limit {
            return Err(Error::Resource {
                what: "numeral",
                requested: u128::from(n),
                limit: u128::from(limit),
            });
        }
        let mut members = Vec::with_capacity(n as usize);
        let mut x = self.empty();
        for _ in 0..n {
            members.push(x);
            x = self.from_elements(&members)?;
        }
        Ok(x)
    }

    fn element_ids(&self, id: u32) -> Vec<u32> {
        let entry = self.entry(id);
        entry
            .elements
            .get_or_init(|| self.compute_elements(&entry.canon))
            .clone()
    }

    fn compute_elements(&self, canon: &CanonicalApg) -> Vec<u32> {
        let g = canon.graph();
        let mut out: Vec<(Arc<CanonicalApg>, u32)> = g
            .succ(g.point())
            .iter()
            .map(|&s| {
                let (sub, _) = g.with_point(s).expect("valid node").reachable_restriction();
                let set = if self.shared.skip_minimize {
                    self.insert(CanonicalApg::unchecked(sub))
                } else {
                    // A generated subgraph of a minimal graph is minimal.
                    self.insert(bisim::canonicalize_minimal(&sub))
                };
                (self.entry(set.id).canon.clone(), set.id)
            })
            .collect();
        out.sort_by(|a, b| a.0.encoding().cmp(b.0.encoding()));
        out.dedup_by_key(|e| e.1);
        out.into_iter().map(|(_, id)| id).collect()
    }
}

impl HSet {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Minimal graph of this set, in canonical order.
    pub fn canonical(&self) -> Arc<CanonicalApg> {
        self.universe.entry(self.id).canon.clone()
    }

    pub fn encoding(&self) -> Vec<u8> {
        self.canonical().encoding().to_vec()
    }

    /// Distinct members, ordered by canonical encoding.
    pub fn elements(&self) -> Vec<HSet> {
        self.universe
            .element_ids(self.id)
            .into_iter()
            .map(|id| self.universe.handle(id))
            .collect()
    }

    pub fn cardinality(&self) -> usize {
        self.universe.element_ids(self.id).len()
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality() == 0
    }

    /// `self ∈ y`.
    pub fn is_member(&self, y: &HSet) -> bool {
        self.universe.same_as(&y.universe) && y.universe.element_ids(y.id).contains(&self.id)
    }

    /// `x ∈ self`.
    pub fn contains(&self, x: &HSet) -> bool {
        x.is_member(self)
    }

    pub fn equals(&self, y: &HSet) -> bool {
        self == y
    }

    pub fn is_subset(&self, y: &HSet) -> bool {
        let ys: HashSet<u32> = y.universe.element_ids(y.id).into_iter().collect();
        self.universe.same_as(&y.universe)
            && self
                .universe
                .element_ids(self.id)
                .iter()
                .all(|m| ys.contains(m))
    }

    fn build(&self, members: &[HSet]) -> Result<HSet> {
        self.universe.from_elements(members)
    }

    pub fn pair(&self, y: &HSet) -> Result<HSet> {
        self.build(&[self.clone(), y.clone()])
    }

    pub fn singleton(&self) -> Result<HSet> {
        self.build(std::slice::from_ref(self))
    }

    /// `⋃ self`.
    pub fn union_of(&self) -> Result<HSet> {
        let members: Vec<HSet> = self.elements().iter().flat_map(HSet::elements).collect();
        self.build(&members)
    }

    /// Binary union `self ∪ y`.
    pub fn union(&self, y: &HSet) -> Result<HSet> {
        self.universe.check(y)?;
        let mut members = self.elements();
        members.extend(y.elements());
        self.build(&members)
    }

    pub fn intersect(&self, y: &HSet) -> Result<HSet> {
        self.universe.check(y)?;
        let ys: HashSet<u32> = y.universe.element_ids(y.id).into_iter().collect();
        let members: Vec<HSet> = self
            .elements()
            .into_iter()
            .filter(|m| ys.contains(&m.id))
            .collect();
        self.build(&members)
    }

    /// Members satisfying `pred`.
    pub fn separation(&self, mut pred: impl FnMut(&HSet) -> bool) -> Result<HSet> {
        let members: Vec<HSet> = self.elements().into_iter().filter(|m| pred(m)).collect();
        self.build(&members)
    }

    /// Image of the members under `f`.
    pub fn replacement(&self, f: impl FnMut(&HSet) -> Result<HSet>) -> Result<HSet> {
        let members = self.elements().iter().map(f).collect::<Result<Vec<_>>>()?;
        self.build(&members)
    }

    /// `self ∪ {self}`.
    pub fn succ(&self) -> Result<HSet> {
        let mut members = self.elements();
        members.push(self.clone());
        self.build(&members)
    }

    /// `{{x}, {x, y}}`.
    pub fn kuratowski_pair(&self, y: &HSet) -> Result<HSet> {
        self.universe.check(y)?;
        let a = self.singleton()?;
        let b = self.pair(y)?;
        a.pair(&b)
    }

    /// Components `(x, y)` if `self` has the shape `{{x}, {x, y}}`.
    pub fn kuratowski_components(&self) -> Option<(HSet, HSet)> {
        let members = self.elements();
        match members.as_slice() {
            [only] => match only.elements().as_slice() {
                [x] => Some((x.clone(), x.clone())),
                _ => None,
            },
            [a, b] => {
                let (ea, eb) = (a.elements(), b.elements());
                let (single, double) = match (ea.len(), eb.len()) {
                    (1, 2) => (ea, eb),
                    (2, 1) => (eb, ea),
                    _ => return None,
                };
                let x = &single[0];
                let y = double.iter().find(|d| *d != x)?;
                double.contains(x).then(|| (x.clone(), y.clone()))
            }
            _ => None,
        }
    }

    /// All functions from `self` to `codomain`, each a set of Kuratowski
    /// pairs.
    pub fn exponential(&self, codomain: &HSet) -> Result<HSet> {
        self.universe.check(codomain)?;
        let xs = self.elements();
        let ys = codomain.elements();
        let limit = self.universe.limits().max_exponential;
        let count = (ys.len() as u128)
            .checked_pow(xs.len() as u32)
            .unwrap_or(u128::MAX);
        if count > limit {
            return Err(Error::Resource {
                what: "exponential",
                requested: count,
                limit,
            });
        }
        let pairs = xs
            .iter()
            .map(|x| ys.iter().map(|y| x.kuratowski_pair(y)).collect())
            .collect::<Result<Vec<Vec<HSet>>>>()?;
        let mut functions = Vec::with_capacity(count as usize);
        if count > 0 {
            let mut choice = vec![0usize; xs.len()];
            loop {
                let graph: Vec<HSet> = choice
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| pairs[i][j].clone())
                    .collect();
                functions.push(self.build(&graph)?);
                // Mixed-radix increment.
                let mut i = 0;
                while i < choice.len() {
                    choice[i] += 1;
                    if choice[i] < ys.len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
        self.build(&functions)
    }

    /// All subsets, up to [`Limits::max_powerset_base`] members.
    pub fn powerset(&self) -> Result<HSet> {
        let xs = self.elements();
        let limit = self.universe.limits().max_powerset_base;
        if xs.len() > limit {
            return Err(Error::Resource {
                what: "powerset base",
                requested: xs.len() as u128,
                limit: limit as u128,
            });
        }
        let mut subsets = Vec::with_capacity(1 << xs.len());
        for mask in 0u64..(1u64 << xs.len()) {
            let members: Vec<HSet> = xs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect();
            subsets.push(self.build(&members)?);
        }
        self.build(&subsets)
    }
}
