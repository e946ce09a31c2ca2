//! Flat systems of set equations and their unique solutions.
//!
//! A flat system assigns to each variable a finite set of variables and
//! constants: `x = {y, z, c}`. Every such system has exactly one solution
//! in the hyperset universe. The solver turns the system into one graph, a
//! node per variable with the constants' canonical graphs spliced in, and
//! interns each variable's node.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Apg, NodeId};
use crate::hset::{HSet, Universe};

/// Right-hand side of one equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rhs {
    pub vars: Vec<String>,
    pub constants: Vec<HSet>,
}

#[derive(Clone, Debug, Default)]
pub struct FlatSystem {
    vars: Vec<String>,
    equations: Vec<Rhs>,
    index: HashMap<String, usize>,
}

/// Value of every variable.
pub type Solution = BTreeMap<String, HSet>;

impl FlatSystem {
    pub fn new() -> Self {
        FlatSystem::default()
    }

    /// Adds `name = {vars..., constants...}`.
    pub fn define<S: Into<String>>(
        &mut self,
        name: impl Into<String>,
        vars: impl IntoIterator<Item = S>,
        constants: impl IntoIterator<Item = HSet>,
    ) -> Result<()> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVariable(name));
        }
        self.index.insert(name.clone(), self.vars.len());
        self.vars.push(name);
        self.equations.push(Rhs {
            vars: vars.into_iter().map(Into::into).collect(),
            constants: constants.into_iter().collect(),
        });
        Ok(())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn rhs(&self, name: &str) -> Option<&Rhs> {
        self.index.get(name).map(|&i| &self.equations[i])
    }

    pub fn equations(&self) -> impl Iterator<Item = (&str, &Rhs)> {
        self.vars.iter().map(String::as_str).zip(&self.equations)
    }

    /// Same equations, declared in the order `order` (indices into
    /// [`FlatSystem::vars`]).
    pub fn reordered(&self, order: &[usize]) -> FlatSystem {
        let mut out = FlatSystem::new();
        for &i in order {
            let rhs = &self.equations[i];
            out.define(
                self.vars[i].clone(),
                rhs.vars.iter().cloned(),
                rhs.constants.iter().cloned(),
            )
            .expect("permutation of distinct names");
        }
        out
    }

    /// Every referenced variable is declared and every constant lives in `u`.
    pub fn validate(&self, u: &Universe) -> Result<()> {
        for rhs in &self.equations {
            if let Some(v) = rhs.vars.iter().find(|v| !self.index.contains_key(*v)) {
                return Err(Error::UndeclaredVariable(v.clone()));
            }
            if rhs.constants.iter().any(|c| !c.universe().same_as(u)) {
                return Err(Error::UniverseMismatch);
            }
        }
        Ok(())
    }
}

/// The unique solution of `sys`.
pub fn solve(u: &Universe, sys: &FlatSystem) -> Result<Solution> {
    sys.validate(u)?;
    let k = sys.len();
    if k == 0 {
        return Ok(Solution::new());
    }

    // Splice each distinct constant's canonical graph after the variables.
    let mut const_point: HashMap<u32, usize> = HashMap::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for rhs in &sys.equations {
        for c in &rhs.constants {
            if const_point.contains_key(&c.id()) {
                continue;
            }
            let canon = c.canonical();
            let g = canon.graph();
            let base = adj.len();
            for v in g.nodes() {
                adj.push(g.succ(v).iter().map(|t| t.index() + base).collect());
            }
            const_point.insert(c.id(), base + g.point().index());
        }
    }
    for (i, rhs) in sys.equations.iter().enumerate() {
        adj[i].extend(rhs.vars.iter().map(|v| sys.index[v]));
        adj[i].extend(rhs.constants.iter().map(|c| const_point[&c.id()]));
    }
    let g = Apg::from_adjacency(adj, 0)?;
    let nodes: Vec<NodeId> = (0..k).map(NodeId::from).collect();
    let values = u.intern_nodes(&g, &nodes)?;
    Ok(sys.vars.iter().cloned().zip(values).collect())
}

/// Whether `assignment` satisfies every equation of `sys` exactly.
pub fn check_colouring(sys: &FlatSystem, assignment: &Solution) -> bool {
    sys.equations().all(|(name, rhs)| {
        let Some(value) = assignment.get(name) else {
            return false;
        };
        let mut expected: HashSet<u32> = HashSet::new();
        for v in &rhs.vars {
            match assignment.get(v) {
                Some(s) => {
                    expected.insert(s.id());
                }
                None => return false,
            }
        }
        if rhs
            .constants
            .iter()
            .any(|c| !c.universe().same_as(value.universe()))
        {
            return false;
        }
        expected.extend(rhs.constants.iter().map(HSet::id));
        let actual: HashSet<u32> = value.elements().iter().map(HSet::id).collect();
        actual == expected
    })
}
