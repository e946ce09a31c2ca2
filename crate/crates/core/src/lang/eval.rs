use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use super::parser::{parse, Builtin, Command, Definition, Expr, Item, Program};
use super::{locate, print_canonical, ParseError, Span};
use crate::afa::{solve, FlatSystem};
use crate::axioms::{run_all, run_check, Axiom, GenConfig, Report};
use crate::error::Error;
use crate::hset::{HSet, Limits, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound name `{0}`")]
    Unbound(String),

    #[error("`{0}` is defined only in terms of itself; wrap it in a set")]
    Unguarded(String),

    #[error("`{builtin}` cannot take an argument that depends on `{name}`, which is still being defined")]
    RecursiveBuiltin { builtin: &'static str, name: String },

    #[error(transparent)]
    Core(#[from] Error),
}

/// Any failure of [`Session::run`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("parse error at {0}")]
    Parse(ParseError),

    #[error("evaluation error at {line}:{column}: {error}")]
    Eval {
        error: EvalError,
        span: Span,
        line: usize,
        column: usize,
    },
}

impl LangError {
    /// 2 for syntax errors, 3 for exceeded resource bounds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LangError::Parse(_) => 2,
            LangError::Eval {
                error: EvalError::Core(e),
                ..
            } if e.is_resource() => 3,
            LangError::Eval { .. } => 1,
        }
    }
}

impl From<ParseError> for LangError {
    fn from(e: ParseError) -> Self {
        LangError::Parse(e)
    }
}

/// Result of one item.
#[derive(Debug, Clone)]
pub enum Output {
    Value(HSet),
    Bool(bool),
    Defined(Vec<(String, HSet)>),
    Minimized(HSet),
    Solved(Vec<(String, HSet)>),
    Reports(Vec<Report>),
    Printed(String),
    Reset,
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Value(x) => write!(f, "{x}"),
            Output::Bool(b) => write!(f, "{b}"),
            Output::Defined(defs) | Output::Solved(defs) => {
                for (i, (name, x)) in defs.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{name} = {x}")?;
                }
                Ok(())
            }
            Output::Minimized(x) => {
                let canon = x.canonical();
                let g = canon.graph();
                write!(
                    f,
                    "{} nodes, {} edges, point 0",
                    g.node_count(),
                    g.edge_count()
                )?;
                for v in g.nodes() {
                    let succ: Vec<String> = g.succ(v).iter().map(|t| t.to_string()).collect();
                    write!(f, "\n  {v} -> [{}]", succ.join(", "))?;
                }
                Ok(())
            }
            Output::Reports(reports) => {
                for (i, r) in reports.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{r}")?;
                }
                Ok(())
            }
            Output::Printed(s) => f.write_str(s),
            Output::Reset => f.write_str("universe reset"),
        }
    }
}

/// A universe plus the names defined so far.
pub struct Session {
    universe: Universe,
    limits: Limits,
    env: BTreeMap<String, HSet>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Self {
        Session::with_limits(Limits::default())
    }

    pub fn with_limits(limits: Limits) -> Self {
        Session {
            universe: Universe::with_limits(limits.clone()),
            limits,
            env: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn get(&self, name: &str) -> Option<&HSet> {
        self.env.get(name)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &HSet)> {
        self.env.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn reset(&mut self) {
        self.universe = Universe::with_limits(self.limits.clone());
        self.env.clear();
    }

    /// Parses and runs `src`, one output per definition group and item.
    pub fn run(&mut self, src: &str) -> Result<Vec<Output>, LangError> {
        let program = parse(src)?;
        self.exec(&program).map_err(|(error, span)| {
            let (line, column) = locate(src, span.start);
            LangError::Eval {
                error,
                span,
                line,
                column,
            }
        })
    }

    /// Evaluates a single expression.
    pub fn eval_str(&mut self, src: &str) -> Result<HSet, LangError> {
        let e = super::parse_expr(src)?;
        self.eval(&e).map_err(|(error, span)| {
            let (line, column) = locate(src, span.start);
            LangError::Eval {
                error,
                span,
                line,
                column,
            }
        })
    }

    /// Runs a parsed program. Definitions between two `:reset`s are solved
    /// together before the other items of that stretch run.
    pub fn exec(&mut self, program: &Program) -> Result<Vec<Output>, (EvalError, Span)> {
        let mut out = Vec::new();
        for segment in program
            .items
            .split_inclusive(|i| matches!(i, Item::Command(Command::Reset, _)))
        {
            let defs: Vec<&Definition> = segment
                .iter()
                .filter_map(|i| match i {
                    Item::Def(d) => Some(d),
                    _ => None,
                })
                .collect();
            if !defs.is_empty() {
                let values = self.define(&defs)?;
                out.push(Output::Defined(values));
            }
            for item in segment {
                match item {
                    Item::Def(_) => {}
                    Item::Expr(e) => out.push(Output::Value(self.eval(e)?)),
                    Item::Command(c, span) => out.push(self.command(c, *span)?),
                }
            }
        }
        Ok(out)
    }

    fn eval(&self, e: &Expr) -> Result<HSet, (EvalError, Span)> {
        let group = HashSet::new();
        let mut fl = Flattener::new(&self.universe, &self.env, &group);
        let t = fl.flatten(e)?;
        let mut values = fl.solve(&[t]).map_err(|err| (err, e.span()))?;
        Ok(values.pop().expect("one term"))
    }

    /// Solves `defs` strongly connected group by group, dependencies first.
    fn define(&mut self, defs: &[&Definition]) -> Result<Vec<(String, HSet)>, (EvalError, Span)> {
        let index: HashMap<&str, usize> = defs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.name.as_str(), i))
            .collect();
        let mut deps = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = (0..defs.len()).map(|i| deps.add_node(i)).collect();
        for (i, d) in defs.iter().enumerate() {
            let mut names = Vec::new();
            free_names(&d.expr, &mut Vec::new(), &mut names);
            for n in names {
                if let Some(&j) = index.get(n.as_str()) {
                    deps.update_edge(nodes[i], nodes[j], ());
                }
            }
        }
        // Components come out sinks first, i.e. dependencies before users.
        for component in tarjan_scc(&deps) {
            let members: Vec<&Definition> = component.iter().map(|&n| defs[deps[n]]).collect();
            let group: HashSet<String> = members.iter().map(|d| d.name.clone()).collect();
            let values = {
                let mut fl = Flattener::new(&self.universe, &self.env, &group);
                let mut terms = Vec::with_capacity(members.len());
                for d in &members {
                    let t = fl.flatten(&d.expr)?;
                    fl.aliases.insert(d.name.clone(), t);
                    terms.push(Term::Var(d.name.clone()));
                }
                let span = members
                    .iter()
                    .map(|d| d.span)
                    .reduce(Span::to)
                    .unwrap_or_default();
                fl.solve(&terms).map_err(|err| (err, span))?
            };
            for (d, v) in members.iter().zip(values) {
                self.env.insert(d.name.clone(), v);
            }
        }
        Ok(defs
            .iter()
            .map(|d| (d.name.clone(), self.env[&d.name].clone()))
            .collect())
    }

    fn command(&mut self, c: &Command, span: Span) -> Result<Output, (EvalError, Span)> {
        let core = |e: Error| (EvalError::Core(e), span);
        Ok(match c {
            Command::Eq(a, b) => Output::Bool(self.eval(a)? == self.eval(b)?),
            Command::Min(e) => Output::Minimized(self.eval(e)?),
            Command::Solve => Output::Solved(
                self.env
                    .iter()
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            ),
            Command::Pow(e) => Output::Value(self.eval(e)?.powerset().map_err(core)?),
            Command::Exp(a, b) => {
                Output::Value(self.eval(a)?.exponential(&self.eval(b)?).map_err(core)?)
            }
            Command::Print { depth, expr } => {
                Output::Printed(print_canonical(&self.eval(expr)?, *depth))
            }
            Command::Reset => {
                self.reset();
                Output::Reset
            }
            Command::Check {
                axiom,
                samples,
                seed,
                max_nodes,
            } => {
                let mut cfg = GenConfig::default();
                if let Some(s) = samples {
                    cfg.samples = usize::try_from(*s).unwrap_or(usize::MAX);
                }
                if let Some(s) = seed {
                    cfg.seed = *s;
                }
                if let Some(n) = max_nodes {
                    cfg.max_nodes = usize::try_from(*n).unwrap_or(usize::MAX);
                }
                let reports = match axiom {
                    Some(name) => {
                        let a: Axiom = name.parse().map_err(core)?;
                        vec![run_check(a, &self.universe, &cfg).map_err(core)?]
                    }
                    None => run_all(&self.universe, &cfg).map_err(core)?,
                };
                Output::Reports(reports)
            }
        })
    }
}

/// Names occurring free in `e`.
fn free_names(e: &Expr, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match e {
        Expr::Name(n, _) => {
            if !bound.contains(n) {
                out.push(n.clone());
            }
        }
        Expr::Nat(..) => {}
        Expr::Set(items, _) | Expr::Call(_, items, _) => {
            for i in items {
                free_names(i, bound, out);
            }
        }
        Expr::Mu(x, body, _) => {
            bound.push(x.clone());
            free_names(body, bound, out);
            bound.pop();
        }
    }
}

#[derive(Clone, Debug)]
enum Term {
    Var(String),
    Const(HSet),
}

/// Turns expressions into flat equations. Set literals that mention a
/// variable become fresh variables `%k`; closed subterms are evaluated on
/// the spot.
struct Flattener<'a> {
    u: &'a Universe,
    env: &'a BTreeMap<String, HSet>,
    group: &'a HashSet<String>,
    equations: Vec<(String, Vec<Term>)>,
    /// Variables standing for another term: definitions and binders.
    aliases: HashMap<String, Term>,
    scope: Vec<(String, String)>,
    fresh: usize,
}

impl<'a> Flattener<'a> {
    fn new(u: &'a Universe, env: &'a BTreeMap<String, HSet>, group: &'a HashSet<String>) -> Self {
        Flattener {
            u,
            env,
            group,
            equations: Vec::new(),
            aliases: HashMap::new(),
            scope: Vec::new(),
            fresh: 0,
        }
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("%{}", self.fresh - 1)
    }

    fn flatten(&mut self, e: &Expr) -> Result<Term, (EvalError, Span)> {
        let core = |err: Error| (EvalError::Core(err), e.span());
        Ok(match e {
            Expr::Nat(n, _) => Term::Const(self.u.numeral(*n).map_err(core)?),
            Expr::Name(n, span) => {
                if let Some((_, v)) = self.scope.iter().rev().find(|(x, _)| x == n) {
                    Term::Var(v.clone())
                } else if self.group.contains(n) {
                    Term::Var(n.clone())
                } else if let Some(x) = self.env.get(n) {
                    Term::Const(x.clone())
                } else {
                    return Err((EvalError::Unbound(n.clone()), *span));
                }
            }
            Expr::Set(items, _) => {
                let terms = items
                    .iter()
                    .map(|i| self.flatten(i))
                    .collect::<Result<Vec<_>, _>>()?;
                if terms.iter().all(|t| matches!(t, Term::Const(_))) {
                    let xs: Vec<HSet> = terms
                        .into_iter()
                        .map(|t| match t {
                            Term::Const(x) => x,
                            Term::Var(_) => unreachable!(),
                        })
                        .collect();
                    Term::Const(self.u.from_elements(&xs).map_err(core)?)
                } else {
                    let v = self.fresh_var();
                    self.equations.push((v.clone(), terms));
                    Term::Var(v)
                }
            }
            Expr::Call(b, args, _) => {
                let mut xs = Vec::with_capacity(args.len());
                for a in args {
                    match self.flatten(a)? {
                        Term::Const(x) => xs.push(x),
                        Term::Var(_) => {
                            let name = self.open_name(a);
                            return Err((
                                EvalError::RecursiveBuiltin {
                                    builtin: b.name(),
                                    name,
                                },
                                a.span(),
                            ));
                        }
                    }
                }
                Term::Const(apply(*b, &xs).map_err(core)?)
            }
            Expr::Mu(x, body, _) if self.open_name(e).is_empty() => {
                // Closed: solve on its own so builtins can take it.
                let empty = HashSet::new();
                let mut inner = Flattener::new(self.u, self.env, &empty);
                let t = inner.binder(x, body)?;
                let mut v = inner.solve(&[t]).map_err(|err| (err, e.span()))?;
                Term::Const(v.pop().expect("one term"))
            }
            Expr::Mu(x, body, _) => self.binder(x, body)?,
        })
    }

    fn binder(&mut self, x: &str, body: &Expr) -> Result<Term, (EvalError, Span)> {
        let v = self.fresh_var();
        self.scope.push((x.to_string(), v.clone()));
        let t = self.flatten(body);
        self.scope.pop();
        self.aliases.insert(v.clone(), t?);
        Ok(Term::Var(v))
    }

    /// First free name of `e` bound by an enclosing binder or by the group
    /// being defined; empty if `e` is closed.
    fn open_name(&self, e: &Expr) -> String {
        let mut names = Vec::new();
        free_names(e, &mut Vec::new(), &mut names);
        names
            .into_iter()
            .find(|n| self.group.contains(n) || self.scope.iter().any(|(x, _)| x == n))
            .unwrap_or_default()
    }

    /// Follows aliases to an equation variable or a constant.
    fn resolve(&self, t: &Term) -> Result<Term, EvalError> {
        let mut t = t.clone();
        let mut seen = HashSet::new();
        while let Term::Var(v) = &t {
            let Some(next) = self.aliases.get(v) else {
                break;
            };
            if !seen.insert(v.clone()) {
                let shown = if v.starts_with('%') {
                    "μ-bound variable".to_string()
                } else {
                    v.clone()
                };
                return Err(EvalError::Unguarded(shown));
            }
            t = next.clone();
        }
        Ok(t)
    }

    /// Values of `terms` under the unique solution of the equations.
    fn solve(&self, terms: &[Term]) -> Result<Vec<HSet>, EvalError> {
        let mut sys = FlatSystem::new();
        for (v, rhs) in &self.equations {
            let mut vars = Vec::new();
            let mut constants = Vec::new();
            for t in rhs {
                match self.resolve(t)? {
                    Term::Var(w) => vars.push(w),
                    Term::Const(x) => constants.push(x),
                }
            }
            sys.define(v.clone(), vars, constants)?;
        }
        let resolved = terms
            .iter()
            .map(|t| self.resolve(t))
            .collect::<Result<Vec<_>, _>>()?;
        let solution = if resolved.iter().any(|t| matches!(t, Term::Var(_))) {
            solve(self.u, &sys)?
        } else {
            Default::default()
        };
        Ok(resolved
            .into_iter()
            .map(|t| match t {
                Term::Var(v) => solution[&v].clone(),
                Term::Const(x) => x,
            })
            .collect())
    }
}

fn apply(b: Builtin, xs: &[HSet]) -> Result<HSet, Error> {
    match b {
        Builtin::Pair => xs[0].pair(&xs[1]),
        Builtin::Union => xs[0].union_of(),
        Builtin::Cup => xs[0].union(&xs[1]),
        Builtin::Inter => xs[0].intersect(&xs[1]),
        Builtin::Pow => xs[0].powerset(),
        Builtin::Exp => xs[0].exponential(&xs[1]),
        Builtin::Kpair => xs[0].kuratowski_pair(&xs[1]),
        Builtin::Succ => xs[0].succ(),
    }
}
