//! Randomized checks that the universe satisfies the set-theoretic axioms.
//!
//! Each axiom is checked in bounded form: quantifiers range over generated
//! witnesses (the instance sets, their members and members of members, plus
//! a few unrelated random sets). Separation and Replacement are checked for
//! a fixed menu of host predicates and functions, not as schemas.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::afa::{check_colouring, solve, FlatSystem, Solution};
use crate::bisim::bisimilar;
use crate::error::{Error, Result};
use crate::graph::{Apg, NodeId};
use crate::hset::{HSet, Universe};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_nodes: usize,
    /// Relative weight of backward edges (including self-loops); 0 yields
    /// only well-founded sets.
    pub cycle_prob: f64,
    pub samples: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_nodes: 6,
            cycle_prob: 0.3,
            samples: 1000,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.max_nodes == 0 {
            return Err(Error::InvalidConfig("max_nodes must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.cycle_prob) {
            return Err(Error::InvalidConfig("cycle_prob must lie in [0, 1]".into()));
        }
        Ok(())
    }

    fn with_seed(&self, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..self.clone()
        }
    }
}

/// Seed of sample `i` of a run started from `seed` (splitmix64 step).
pub fn sample_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random graph with at most `max_nodes` nodes, point 0. Forward edges
/// (to higher ids) appear with a per-graph density; backward edges and
/// self-loops with that density scaled by `cycle_prob`.
pub fn random_graph(rng: &mut impl Rng, max_nodes: usize, cycle_prob: f64) -> Apg {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let density: f64 = rng.gen_range(0.15..0.6);
    let mut adj = vec![Vec::new(); n];
    for (i, succ) in adj.iter_mut().enumerate() {
        for j in 0..n {
            let p = if j > i { density } else { density * cycle_prob };
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                succ.push(j);
            }
        }
    }
    Apg::from_adjacency(adj, 0).expect("nonempty, in range")
}

/// Random acyclic graph; only forward edges.
pub fn random_acyclic_graph(rng: &mut impl Rng, max_nodes: usize) -> Apg {
    random_graph(rng, max_nodes, 0.0)
}

/// Accessible random graph with exactly `nodes` nodes and about `edges`
/// edges: a random tree from node 0, then uniformly random extra edges.
/// Duplicate edges collapse, so the count can come out slightly lower.
pub fn random_sparse_graph(rng: &mut impl Rng, nodes: usize, edges: usize) -> Apg {
    let nodes = nodes.max(1);
    let mut adj = vec![Vec::new(); nodes];
    for v in 1..nodes {
        adj[rng.gen_range(0..v)].push(v);
    }
    for _ in (nodes - 1)..edges {
        adj[rng.gen_range(0..nodes)].push(rng.gen_range(0..nodes));
    }
    Apg::from_adjacency(adj, 0).expect("in range")
}

/// A graph bisimilar to `g` but presented differently: two copies of every
/// node, each edge sent to a random copy, then a random renumbering.
pub fn scramble(rng: &mut impl Rng, g: &Apg) -> Apg {
    let n = g.node_count();
    let mut adj = vec![Vec::new(); 2 * n];
    for copy in 0..2 {
        for v in g.nodes() {
            adj[copy * n + v.index()] = g
                .succ(v)
                .iter()
                .map(|t| rng.gen_range(0..2) * n + t.index())
                .collect();
        }
    }
    let point = rng.gen_range(0..2) * n + g.point().index();
    let raw = Apg::from_adjacency(adj, point).expect("in range");
    let mut perm: Vec<NodeId> = (0..2 * n).map(NodeId::from).collect();
    perm.shuffle(rng);
    raw.permute(&perm)
}

/// Hyperset of a random graph drawn from `cfg.seed`.
pub fn random_hset(u: &Universe, cfg: &GenConfig) -> Result<HSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = random_graph(&mut rng, cfg.max_nodes, cfg.cycle_prob);
    u.intern(&g)
}

/// Random flat system with at most `cfg.max_nodes` variables named
/// `x0, x1, ...`; some equations also carry random constants.
pub fn random_system(u: &Universe, cfg: &GenConfig) -> Result<FlatSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    random_system_with(&mut rng, u, cfg)
}

fn random_system_with(rng: &mut ChaCha8Rng, u: &Universe, cfg: &GenConfig) -> Result<FlatSystem> {
    let k = rng.gen_range(1..=cfg.max_nodes);
    let density: f64 = rng.gen_range(0.05f64..0.5).min(3.0 / k as f64 + 0.05);
    let mut sys = FlatSystem::new();
    for i in 0..k {
        let vars: Vec<String> = (0..k)
            .filter(|_| rng.gen_bool(density))
            .map(|j| format!("x{j}"))
            .collect();
        let mut constants = Vec::new();
        while rng.gen_bool(0.25) && constants.len() < 3 {
            let g = random_graph(rng, 4, cfg.cycle_prob);
            constants.push(u.intern(&g)?);
        }
        sys.define(format!("x{i}"), vars, constants)?;
    }
    Ok(sys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Extensionality,
    Pairing,
    Union,
    Emptyset,
    Intersection,
    Replacement,
    Separation,
    Infinity,
    Exponentiation,
    Powerset,
    AntiFoundation,
}

impl Axiom {
    pub const ALL: [Axiom; 11] = [
        Axiom::Extensionality,
        Axiom::Pairing,
        Axiom::Union,
        Axiom::Emptyset,
        Axiom::Intersection,
        Axiom::Replacement,
        Axiom::Separation,
        Axiom::Infinity,
        Axiom::Exponentiation,
        Axiom::Powerset,
        Axiom::AntiFoundation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Extensionality => "extensionality",
            Axiom::Pairing => "pairing",
            Axiom::Union => "union",
            Axiom::Emptyset => "emptyset",
            Axiom::Intersection => "intersection",
            Axiom::Replacement => "replacement",
            Axiom::Separation => "separation",
            Axiom::Infinity => "infinity",
            Axiom::Exponentiation => "exp",
            Axiom::Powerset => "powerset",
            Axiom::AntiFoundation => "afa",
        }
    }

    fn supported() -> String {
        Axiom::ALL.map(Axiom::name).join(", ")
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let found = match lower.as_str() {
            "delta0-separation" | "d0-separation" => Some(Axiom::Separation),
            "exponentiation" => Some(Axiom::Exponentiation),
            "anti-foundation" => Some(Axiom::AntiFoundation),
            other => Axiom::ALL.into_iter().find(|a| a.name() == other),
        };
        found.ok_or_else(|| Error::UnknownAxiom {
            name: s.to_string(),
            supported: Axiom::supported(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// Re-running the sample with this seed reproduces the failure.
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub axiom: Axiom,
    pub samples: usize,
    pub seed: u64,
    pub failures: Vec<Failure>,
    /// Deliberately wrong assignments the colouring check rejected (AFA only).
    pub rejected_mutants: usize,
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `AXIOM<TAB>PASS|FAIL<TAB>samples<TAB>seed`
    pub fn machine_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.axiom,
            if self.passed() { "PASS" } else { "FAIL" },
            self.samples,
            self.seed
        )
    }

    /// Combines reports of disjoint sample sets for the same axiom.
    pub fn merge(mut self, other: Report) -> Report {
        debug_assert_eq!(self.axiom, other.axiom);
        self.samples += other.samples;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| f.seed);
        self.rejected_mutants += other.rejected_mutants;
        self.elapsed += other.elapsed;
        self.seed = self.seed.min(other.seed);
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<15} {} ({} samples, seed {}, {:.2?})",
            self.axiom.name(),
            if self.passed() { "pass" } else { "FAIL" },
            self.samples,
            self.seed,
            self.elapsed
        )?;
        if self.axiom == Axiom::AntiFoundation {
            write!(f, ", {} bad colourings rejected", self.rejected_mutants)?;
        }
        for failure in self.failures.iter().take(5) {
            write!(f, "\n  seed {}: {}", failure.seed, failure.detail)?;
        }
        if self.failures.len() > 5 {
            write!(f, "\n  ... {} more", self.failures.len() - 5)?;
        }
        Ok(())
    }
}

/// Runs `cfg.samples` instances of the named axiom.
pub fn run_axiom_check(axiom: &str, u: &Universe, cfg: &GenConfig) -> Result<Report> {
    let axiom: Axiom = axiom.parse()?;
    run_check(axiom, u, cfg)
}

pub fn run_check(axiom: Axiom, u: &Universe, cfg: &GenConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let outcomes: Vec<(u64, Outcome)> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = sample_seed(cfg.seed, i);
            (seed, run_sample(axiom, u, &cfg.with_seed(seed)))
        })
        .collect();
    let mut failures = Vec::new();
    let mut rejected = 0;
    for (seed, outcome) in outcomes {
        rejected += outcome.rejected_mutants;
        if let Some(detail) = outcome.failure {
            failures.push(Failure { seed, detail });
        }
    }
    failures.sort_by_key(|f| f.seed);
    Ok(Report {
        axiom,
        samples: cfg.samples,
        seed: cfg.seed,
        failures,
        rejected_mutants: rejected,
        elapsed: started.elapsed(),
    })
}

pub fn run_all(u: &Universe, cfg: &GenConfig) -> Result<Vec<Report>> {
    Axiom::ALL.iter().map(|&a| run_check(a, u, cfg)).collect()
}

#[derive(Default)]
struct Outcome {
    failure: Option<String>,
    rejected_mutants: usize,
}

/// One instance of `axiom`, drawn from `cfg.seed`.
pub fn run_sample_seed(axiom: Axiom, u: &Universe, cfg: &GenConfig) -> Option<String> {
    run_sample(axiom, u, cfg).failure
}

fn run_sample(axiom: Axiom, u: &Universe, cfg: &GenConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ctx = Ctx {
        u,
        cfg,
        rng: &mut rng,
        rejected_mutants: 0,
    };
    let result = match axiom {
        Axiom::Extensionality => ctx.extensionality(),
        Axiom::Pairing => ctx.pairing(),
        Axiom::Union => ctx.union(),
        Axiom::Emptyset => ctx.emptyset(),
        Axiom::Intersection => ctx.intersection(),
        Axiom::Replacement => ctx.replacement(),
        Axiom::Separation => ctx.separation(),
        Axiom::Infinity => ctx.infinity(),
        Axiom::Exponentiation => ctx.exponentiation(),
        Axiom::Powerset => ctx.powerset(),
        Axiom::AntiFoundation => ctx.anti_foundation(),
    };
    let rejected_mutants = ctx.rejected_mutants;
    Outcome {
        failure: match result {
            Ok(()) => None,
            Err(Violation(detail)) => Some(detail),
        },
        rejected_mutants,
    }
}

struct Violation(String);

impl From<Error> for Violation {
    fn from(e: Error) -> Self {
        Violation(format!("error: {e}"))
    }
}

type Check = std::result::Result<(), Violation>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(Violation(what()))
    }
}

fn id_set(xs: &[HSet]) -> HashSet<u32> {
    xs.iter().map(HSet::id).collect()
}

type Predicate = fn(&HSet) -> bool;
type Function = fn(&HSet) -> Result<HSet>;

/// Host predicates standing in for bounded formulas.
const PREDICATES: [(&str, Predicate); 5] = [
    ("is empty", |x| x.is_empty()),
    ("is nonempty", |x| !x.is_empty()),
    ("has even cardinality", |x| x.cardinality() % 2 == 0),
    ("is self-membered", |x| x.is_member(x)),
    ("contains the empty set", |x| {
        x.elements().iter().any(HSet::is_empty)
    }),
];

/// Host functions, all total on the universe.
const FUNCTIONS: [(&str, Function); 5] = [
    ("identity", |x| Ok(x.clone())),
    ("singleton", HSet::singleton),
    ("successor", HSet::succ),
    ("union", HSet::union_of),
    ("pair with empty", |x| x.pair(&x.universe().empty())),
];

struct Ctx<'a> {
    u: &'a Universe,
    cfg: &'a GenConfig,
    rng: &'a mut ChaCha8Rng,
    rejected_mutants: usize,
}

impl Ctx<'_> {
    fn graph(&mut self) -> Apg {
        random_graph(self.rng, self.cfg.max_nodes, self.cfg.cycle_prob)
    }

    fn set(&mut self) -> Result<HSet> {
        let g = self.graph();
        self.u.intern(&g)
    }

    /// A set of up to `max` random sets.
    fn set_of_sets(&mut self, max: usize) -> Result<HSet> {
        let k = self.rng.gen_range(0..=max);
        let members = (0..k).map(|_| self.set()).collect::<Result<Vec<_>>>()?;
        self.u.from_elements(&members)
    }

    /// Witnesses for bounded quantifiers: the given sets, two levels of
    /// their members, and two unrelated random sets.
    fn pool(&mut self, sets: &[&HSet]) -> Result<Vec<HSet>> {
        let mut out: Vec<HSet> = Vec::new();
        for s in sets {
            out.push((*s).clone());
            for m in s.elements() {
                out.extend(m.elements());
                out.push(m);
            }
        }
        out.push(self.set()?);
        out.push(self.set()?);
        out.push(self.u.empty());
        out.push(self.u.omega());
        let mut seen = HashSet::new();
        out.retain(|x| seen.insert(x.id()));
        Ok(out)
    }

    fn extensionality(&mut self) -> Check {
        let g1 = self.graph();
        let g2 = if self.rng.gen_bool(0.5) {
            scramble(self.rng, &g1)
        } else {
            self.graph()
        };
        let a = self.u.intern(&g1)?;
        let b = self.u.intern(&g2)?;
        let same_members = id_set(&a.elements()) == id_set(&b.elements());
        ensure(!same_members || a == b, || {
            format!("{a:?} and {b:?} have the same members but differ")
        })?;
        ensure(a != b || same_members, || {
            format!("{a:?} equals {b:?} but members differ")
        })?;
        ensure((a == b) == bisimilar(&g1, &g2), || {
            format!("equality of {a:?}, {b:?} disagrees with bisimilarity")
        })?;
        let rebuilt = self.u.from_elements(&a.elements())?;
        ensure(rebuilt == a, || {
            format!("rebuilding {a:?} from its members gave {rebuilt:?}")
        })
    }

    fn pairing(&mut self) -> Check {
        let x = self.set()?;
        let y = if self.rng.gen_bool(0.2) {
            x.clone()
        } else {
            self.set()?
        };
        let t = x.pair(&y)?;
        for z in self.pool(&[&x, &y, &t])? {
            let expected = z == x || z == y;
            ensure(z.is_member(&t) == expected, || {
                format!("{z:?} ∈ pair({x:?}, {y:?}) should be {expected}")
            })?;
        }
        for z in t.elements() {
            ensure(z == x || z == y, || format!("pair contains stray {z:?}"))?;
        }
        Ok(())
    }

    fn union(&mut self) -> Check {
        let x = self.set_of_sets(3)?;
        let t = x.union_of()?;
        let members = x.elements();
        for z in self.pool(&[&x, &t])? {
            let expected = members.iter().any(|y| z.is_member(y));
            ensure(z.is_member(&t) == expected, || {
                format!("{z:?} ∈ ⋃{x:?} should be {expected}")
            })?;
        }
        for y in &members {
            for z in y.elements() {
                ensure(z.is_member(&t), || format!("{z:?} missing from ⋃{x:?}"))?;
            }
        }
        Ok(())
    }

    fn emptyset(&mut self) -> Check {
        let e = self.u.from_elements(&[])?;
        ensure(e == self.u.empty(), || "∅ is not unique".into())?;
        ensure(e.elements().is_empty(), || "∅ has members".into())?;
        let x = self.set()?;
        for z in self.pool(&[&x])? {
            ensure(!z.is_member(&e), || format!("{z:?} ∈ ∅"))?;
        }
        Ok(())
    }

    fn intersection(&mut self) -> Check {
        let a = self.set_of_sets(4)?;
        let mut shared: Vec<HSet> = a
            .elements()
            .into_iter()
            .filter(|_| self.rng.gen_bool(0.5))
            .collect();
        if self.rng.gen_bool(0.7) {
            shared.push(self.set()?);
        }
        let b = self.u.from_elements(&shared)?;
        let t = a.intersect(&b)?;
        for z in self.pool(&[&a, &b, &t])? {
            let expected = z.is_member(&a) && z.is_member(&b);
            ensure(z.is_member(&t) == expected, || {
                format!("{z:?} ∈ {a:?} ∩ {b:?} should be {expected}")
            })?;
        }
        Ok(())
    }

    fn replacement(&mut self) -> Check {
        let a = self.set_of_sets(4)?;
        let (name, f) = FUNCTIONS[self.rng.gen_range(0..FUNCTIONS.len())];
        let t = a.replacement(f)?;
        let images = a.elements().iter().map(f).collect::<Result<Vec<_>>>()?;
        for y in &images {
            ensure(y.is_member(&t), || format!("image {y:?} missing ({name})"))?;
        }
        let image_ids = id_set(&images);
        for y in t.elements() {
            ensure(image_ids.contains(&y.id()), || {
                format!("{y:?} is not an image under {name}")
            })?;
        }
        Ok(())
    }

    fn separation(&mut self) -> Check {
        let a = self.set_of_sets(5)?;
        let (name, phi) = PREDICATES[self.rng.gen_range(0..PREDICATES.len())];
        let t = a.separation(phi)?;
        for z in self.pool(&[&a, &t])? {
            let expected = z.is_member(&a) && phi(&z);
            ensure(z.is_member(&t) == expected, || {
                format!("{z:?} ∈ {{z ∈ {a:?} | {name}}} should be {expected}")
            })?;
        }
        Ok(())
    }

    /// Bounded forms of both infinity axioms on the numerals.
    fn infinity(&mut self) -> Check {
        let n = self.rng.gen_range(0..=12u64);
        let w = self.u.numeral(n)?;
        let next = self.u.numeral(n + 1)?;
        ensure(w.cardinality() == n as usize, || {
            format!("numeral {n} has {} members", w.cardinality())
        })?;
        ensure(w.is_member(&next), || format!("{n} ∉ {}", n + 1))?;
        ensure(self.u.empty().is_member(&next), || format!("∅ ∉ {}", n + 1))?;
        for x in w.elements() {
            let s = x.succ()?;
            ensure(s.is_member(&next), || format!("s({x:?}) ∉ {}", n + 1))?;
        }
        // Induction over ω_n for a few properties that hold at ∅ and are
        // preserved by successor.
        let properties: [(&str, Predicate); 2] = [
            ("transitive", |x| {
                x.elements().iter().all(|y| y.is_subset(x))
            }),
            ("not self-membered", |x| !x.is_member(x)),
        ];
        for (name, psi) in properties {
            let base = psi(&self.u.empty());
            let step = w
                .elements()
                .iter()
                .all(|x| !psi(x) || x.succ().map(|s| psi(&s)).unwrap_or(false));
            if base && step {
                for x in next.elements() {
                    ensure(psi(&x), || format!("induction for `{name}` fails at {x:?}"))?;
                }
            }
        }
        Ok(())
    }

    fn exponentiation(&mut self) -> Check {
        let x = self.set_of_sets(3)?;
        let y = self.set_of_sets(3)?;
        let t = x.exponential(&y)?;
        let (xs, ys) = (x.elements(), y.elements());
        let expected = ys.len().pow(xs.len() as u32);
        ensure(t.cardinality() == expected, || {
            format!(
                "|{y:?}^{x:?}| = {} but |y|^|x| = {expected}",
                t.cardinality()
            )
        })?;
        for f in t.elements() {
            ensure(is_function(&f, &x, &y), || {
                format!("{f:?} ∈ {y:?}^{x:?} is not a function")
            })?;
        }
        Ok(())
    }

    fn powerset(&mut self) -> Check {
        let x = self.set_of_sets(6)?;
        let p = x.powerset()?;
        let xs = x.elements();
        ensure(p.cardinality() == 1 << xs.len(), || {
            format!("|P({x:?})| = {} ≠ 2^{}", p.cardinality(), xs.len())
        })?;
        for w in p.elements() {
            ensure(w.is_subset(&x), || {
                format!("{w:?} ∈ P({x:?}) is not a subset")
            })?;
        }
        let mask: u64 = self.rng.gen_range(0..(1u64 << xs.len()));
        let members: Vec<HSet> = xs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, m)| m.clone())
            .collect();
        let sub = self.u.from_elements(&members)?;
        ensure(sub.is_member(&p), || format!("subset {sub:?} ∉ P({x:?})"))
    }

    fn anti_foundation(&mut self) -> Check {
        let sys = random_system_with(self.rng, self.u, self.cfg)?;
        let sol = solve(self.u, &sys)?;
        ensure(check_colouring(&sys, &sol), || {
            "solution fails the colouring equation".into()
        })?;

        let mut order: Vec<usize> = (0..sys.len()).collect();
        order.shuffle(self.rng);
        let permuted = solve(self.u, &sys.reordered(&order))?;
        ensure(permuted == sol, || {
            "solving a permuted system changed the solution".into()
        })?;

        // Uniqueness: any change to one variable must break the equations.
        let victim = sys.vars()[self.rng.gen_range(0..sys.len())].clone();
        let mut bad = sol.clone();
        let old = &sol[&victim];
        let replacement = if old.is_empty() {
            self.u.empty().singleton()?
        } else {
            self.u.empty()
        };
        bad.insert(victim.clone(), replacement);
        ensure(!check_colouring(&sys, &bad), || {
            format!("perturbed value of {victim} still satisfies the system")
        })?;
        self.rejected_mutants += 1;

        // Substitutivity: replacing references to `victim` with its value.
        let mut spliced = FlatSystem::new();
        for (name, rhs) in sys.equations() {
            let mut constants = rhs.constants.clone();
            let vars: Vec<String> = rhs
                .vars
                .iter()
                .filter(|v| {
                    if **v == victim && name != victim {
                        constants.push(sol[&victim].clone());
                        false
                    } else {
                        true
                    }
                })
                .cloned()
                .collect();
            spliced.define(name, vars, constants)?;
        }
        let resolved: Solution = solve(self.u, &spliced)?;
        ensure(resolved == sol, || {
            format!("splicing the value of {victim} changed the solution")
        })
    }
}

/// `f` is a set of Kuratowski pairs `(a, b)` with `a ∈ x`, `b ∈ y`, and
/// exactly one pair for every `a ∈ x`.
pub fn is_function(f: &HSet, x: &HSet, y: &HSet) -> bool {
    let mut domain = HashSet::new();
    for p in f.elements() {
        let Some((a, b)) = p.kuratowski_components() else {
            return false;
        };
        if !a.is_member(x) || !b.is_member(y) || !domain.insert(a.id()) {
            return false;
        }
    }
    domain.len() == x.cardinality()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        let err = "choice".parse::<Axiom>().unwrap_err();
        assert!(err.to_string().contains("extensionality"));
    }

    #[test]
    fn single_node_without_loop_is_empty() {
        let u = Universe::new();
        let cfg = GenConfig {
            max_nodes: 1,
            cycle_prob: 0.0,
            ..GenConfig::default()
        };
        for seed in 0..20 {
            assert_eq!(random_hset(&u, &cfg.with_seed(seed)).unwrap(), u.empty());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let u = Universe::new();
        let cfg = GenConfig {
            seed: 42,
            ..GenConfig::default()
        };
        let a = random_hset(&u, &cfg).unwrap();
        let b = random_hset(&u, &cfg).unwrap();
        assert_eq!(a, b);
        let fresh = Universe::new();
        assert_eq!(random_hset(&fresh, &cfg).unwrap().encoding(), a.encoding());
        let s1 = random_system(&u, &cfg).unwrap();
        let s2 = random_system(&u, &cfg).unwrap();
        assert_eq!(s1.vars(), s2.vars());
        for ((n1, r1), (n2, r2)) in s1.equations().zip(s2.equations()) {
            assert_eq!((n1, r1), (n2, r2));
        }
    }

    #[test]
    fn distribution_has_both_kinds() {
        let u = Universe::new();
        let cfg = GenConfig::default();
        let mut cyclic = 0;
        let mut well_founded = 0;
        for i in 0..1000 {
            let s = random_hset(&u, &cfg.with_seed(sample_seed(7, i))).unwrap();
            let g = s.canonical();
            let acyclic = g.graph().edges().all(|(a, b)| a != b) && is_acyclic(g.graph());
            if acyclic {
                well_founded += 1;
            } else {
                cyclic += 1;
            }
        }
        assert!(cyclic > 0 && well_founded > 0, "{cyclic} / {well_founded}");
        let contains_omega = (0..1000).any(|i| {
            u.omega()
                .is_member(&random_hset(&u, &cfg.with_seed(sample_seed(3, i))).unwrap())
        });
        assert!(contains_omega);
    }

    #[test]
    fn system_distribution_degenerate_and_mixed() {
        let u = Universe::new();
        let one = GenConfig {
            max_nodes: 1,
            ..GenConfig::default()
        };
        let s = random_system(&u, &one).unwrap();
        assert_eq!(s.len(), 1);
        let cfg = GenConfig::default();
        let mut saw_cycle = false;
        for i in 0..200 {
            let s = random_system(&u, &cfg.with_seed(i)).unwrap();
            let sol = solve(&u, &s).unwrap();
            saw_cycle |= sol.values().any(|v| !is_acyclic(v.canonical().graph()));
        }
        assert!(saw_cycle);
    }

    fn is_acyclic(g: &Apg) -> bool {
        // Kahn's algorithm.
        let n = g.node_count();
        let mut indeg = vec![0; n];
        for (_, t) in g.edges() {
            indeg[t.index()] += 1;
        }
        let mut stack: Vec<NodeId> = g.nodes().filter(|v| indeg[v.index()] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for t in g.succ(v) {
                indeg[t.index()] -= 1;
                if indeg[t.index()] == 0 {
                    stack.push(*t);
                }
            }
        }
        seen == n
    }

    #[test]
    fn every_axiom_passes_small_run() {
        let u = Universe::new();
        let cfg = GenConfig {
            samples: 50,
            seed: 11,
            ..GenConfig::default()
        };
        for report in run_all(&u, &cfg).unwrap() {
            assert!(report.passed(), "{report}");
            assert!(report.machine_line().ends_with("PASS\t50\t11"));
        }
    }

    #[test]
    fn afa_rejects_perturbations() {
        let u = Universe::new();
        let cfg = GenConfig {
            samples: 30,
            ..GenConfig::default()
        };
        let r = run_axiom_check("afa", &u, &cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.rejected_mutants, 30);
    }

    #[test]
    fn unknown_axiom_is_an_error() {
        let u = Universe::new();
        assert!(matches!(
            run_axiom_check("choice", &u, &GenConfig::default()),
            Err(Error::UnknownAxiom { .. })
        ));
        let bad = GenConfig {
            samples: 0,
            ..GenConfig::default()
        };
        assert!(run_axiom_check("union", &u, &bad).is_err());
    }

    #[test]
    fn merge_is_associative_on_counts() {
        let u = Universe::new();
        let mk = |seed| {
            run_check(
                Axiom::Pairing,
                &u,
                &GenConfig {
                    seed,
                    samples: 5,
                    ..GenConfig::default()
                },
            )
            .unwrap()
        };
        let (a, b, c) = (mk(1), mk(2), mk(3));
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(left.samples, right.samples);
        assert_eq!(left.failures, right.failures);
        assert_eq!(left.seed, right.seed);
    }
}
