//! Acceptance criteria. Run with `cargo test -p hydra-core --test
//! acceptance`; prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{bisim_matrix, random_labelled, wf_repr};
use hydra_core::axioms::{
    is_function, random_acyclic_graph, random_graph, random_hset, random_sparse_graph,
    random_system, run_check, sample_seed, scramble, Axiom, GenConfig,
};
use hydra_core::lang::{parse, print_canonical, Session};
use hydra_core::mtype::{LabelledApg, MUniverse, Signature};
use hydra_core::{
    bisimilar, check_colouring, minimize, naive_largest_bisimulation, refine_partition, solve, Apg,
    FlatSystem, HSet, Limits, NodeId, Partition, Solution, Universe,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within(started: Instant, limit: Duration, detail: String) -> Outcome {
    let took = started.elapsed();
    if took <= limit {
        Ok(format!("{detail}; {took:.2?} (limit {limit:?})"))
    } else {
        Err(format!("{detail}; took {took:.2?}, limit {limit:?}"))
    }
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut blocks = 0;
    for i in 0..500u64 {
        let mut r = rng(sample_seed(1, i));
        let cycles = r.gen_range(0.0..1.0);
        let g = random_graph(&mut r, 40, cycles);
        let n = g.node_count();
        let init = if i % 2 == 0 {
            Partition::trivial(n)
        } else {
            let labels: Vec<u8> = (0..n).map(|_| r.gen_range(0..3)).collect();
            Partition::from_labels(&labels)
        };
        let fast = refine_partition(&g, &init).map_err(|e| e.to_string())?;
        let slow = naive_largest_bisimulation(&g, &init).map_err(|e| e.to_string())?;
        if fast != slow {
            return Err(format!("graph {i}: partitions differ"));
        }
        blocks += fast.block_count();
    }
    within(
        started,
        Duration::from_secs(10),
        format!("500 graphs, {blocks} blocks in total"),
    )
}

fn extensionality_finality() -> Outcome {
    let started = Instant::now();
    let u = Universe::new();
    let mut equal = 0;
    for i in 0..500u64 {
        let mut r = rng(sample_seed(2, i));
        let g1 = random_graph(&mut r, 8, 0.5);
        let g2 = match i % 3 {
            0 => scramble(&mut r, &g1),
            _ => random_graph(&mut r, 4, 0.5),
        };
        let same = u.intern(&g1).unwrap().equals(&u.intern(&g2).unwrap());
        if same != bisimilar(&g1, &g2) {
            return Err(format!("pair {i}: equals={same} disagrees with bisimilar"));
        }
        let (union, maps) = Apg::disjoint_union(&[g1.clone(), g2.clone()]).unwrap();
        let p1 = maps[0].get(g1.point()).unwrap().index();
        let p2 = maps[1].get(g2.point()).unwrap().index();
        if same != bisim_matrix(&union)[p1][p2] {
            return Err(format!("pair {i}: disagrees with the reference relation"));
        }
        equal += usize::from(same);
    }
    within(
        started,
        Duration::from_secs(10),
        format!("500 pairs, {equal} equal"),
    )
}

fn axiom_suite() -> Outcome {
    let started = Instant::now();
    let u = Universe::new();
    let cfg = GenConfig {
        seed: 3,
        samples: 1000,
        ..GenConfig::default()
    };
    let axioms = [
        Axiom::Extensionality,
        Axiom::Pairing,
        Axiom::Union,
        Axiom::Emptyset,
        Axiom::Intersection,
        Axiom::Replacement,
        Axiom::Separation,
        Axiom::Infinity,
    ];
    for a in axioms {
        let report = run_check(a, &u, &cfg).map_err(|e| e.to_string())?;
        if !report.passed() {
            return Err(report.to_string());
        }
    }
    within(
        started,
        Duration::from_secs(60),
        "8 axioms x 1000 samples, 0 failures".into(),
    )
}

fn afa() -> Outcome {
    let u = Universe::new();
    let mut rejected = 0;
    let mut total_vars = 0;
    for i in 0..200u64 {
        let cfg = GenConfig {
            seed: sample_seed(4, i),
            max_nodes: 30,
            ..GenConfig::default()
        };
        let sys = random_system(&u, &cfg).map_err(|e| e.to_string())?;
        total_vars += sys.len();
        let sol = solve(&u, &sys).map_err(|e| e.to_string())?;
        if !check_colouring(&sys, &sol) {
            return Err(format!("system {i}: solution fails the colouring check"));
        }
        let mut order: Vec<usize> = (0..sys.len()).collect();
        order.shuffle(&mut rng(cfg.seed));
        let permuted = solve(&u, &sys.reordered(&order)).map_err(|e| e.to_string())?;
        if permuted != sol {
            return Err(format!("system {i}: permuted solve differs"));
        }
        if reject_bad_assignment(&u, &sys, &sol) {
            rejected += 1;
        } else {
            return Err(format!("system {i}: a wrong assignment was accepted"));
        }
    }
    // One more injected mistake with a known answer: x = {x} with x := ∅.
    let mut quine = FlatSystem::new();
    quine.define("x", ["x"], []).unwrap();
    let wrong: Solution = [("x".to_string(), u.empty())].into_iter().collect();
    if check_colouring(&quine, &wrong) {
        return Err("x := {} accepted for x = {x}".into());
    }
    Ok(format!(
        "200 systems ({total_vars} variables), permutation-stable, {} bad assignments rejected",
        rejected + 1
    ))
}

/// Replaces one variable's value with a set that differs from it.
fn reject_bad_assignment(u: &Universe, sys: &FlatSystem, sol: &Solution) -> bool {
    let (name, value) = sol.iter().next().expect("non-empty system");
    let other = value.singleton().unwrap();
    let other = if other == *value { u.empty() } else { other };
    let mut bad = sol.clone();
    bad.insert(name.clone(), other);
    !check_colouring(sys, &bad)
}

fn well_founded() -> Outcome {
    let u = Universe::new();
    let mut prev: Option<(HSet, String)> = None;
    let mut comparisons = 0;
    for i in 0..300u64 {
        let g = random_acyclic_graph(&mut rng(sample_seed(5, i)), 8);
        let nodes: Vec<NodeId> = g.nodes().collect();
        let values = u.intern_nodes(&g, &nodes).unwrap();
        let reprs: Vec<String> = nodes.iter().map(|&v| wf_repr(&g, v)).collect();
        for a in 0..nodes.len() {
            for b in 0..nodes.len() {
                if (values[a] == values[b]) != (reprs[a] == reprs[b]) {
                    return Err(format!("graph {i}: nodes {a}, {b} disagree"));
                }
                comparisons += 1;
            }
        }
        let point = &values[g.point().index()];
        let point_repr = &reprs[g.point().index()];
        if let Some((x, r)) = &prev {
            if (x == point) != (r == point_repr) {
                return Err(format!("graph {i}: disagrees with graph {}", i - 1));
            }
        }
        prev = Some((point.clone(), point_repr.clone()));
    }
    Ok(format!("300 graphs, {comparisons} node comparisons"))
}

/// Set with exactly `k` elements drawn from random hypersets and numerals.
fn set_of_size(u: &Universe, r: &mut ChaCha8Rng, k: usize) -> HSet {
    let mut elems: Vec<HSet> = Vec::new();
    while elems.len() < k {
        let e = if r.gen_bool(0.5) {
            u.numeral(r.gen_range(0..12)).unwrap()
        } else {
            let cfg = GenConfig {
                seed: r.gen(),
                max_nodes: 4,
                ..GenConfig::default()
            };
            random_hset(u, &cfg).unwrap()
        };
        if !elems.contains(&e) {
            elems.push(e);
        }
    }
    u.from_elements(&elems).unwrap()
}

fn exponential_counts() -> Outcome {
    let u = Universe::new();
    let mut r = rng(6);
    for i in 0..100 {
        let (a, b) = (r.gen_range(0..=3), r.gen_range(0..=3));
        let x = set_of_size(&u, &mut r, a);
        let y = set_of_size(&u, &mut r, b);
        let e = x.exponential(&y).map_err(|e| e.to_string())?;
        let expected = b.pow(a as u32);
        if e.cardinality() != expected {
            return Err(format!(
                "pair {i}: |y^x| = {} for |x|={a}, |y|={b}",
                e.cardinality()
            ));
        }
        if let Some(f) = e.elements().iter().find(|f| !is_function(f, &x, &y)) {
            return Err(format!("pair {i}: element {f} is not a function"));
        }
    }
    Ok("100 pairs with |x|, |y| <= 3".into())
}

fn powerset_counts() -> Outcome {
    let u = Universe::new();
    let mut r = rng(7);
    for k in 0..=10 {
        let x = set_of_size(&u, &mut r, k);
        let p = x.powerset().map_err(|e| e.to_string())?;
        if p.cardinality() != 1 << k {
            return Err(format!("|P(x)| = {} for |x| = {k}", p.cardinality()));
        }
        if !p.elements().iter().all(|s| s.is_subset(&x)) {
            return Err(format!("|x| = {k}: a member is not a subset"));
        }
    }
    Ok("|x| = 0..=10".into())
}

fn closed_forms() -> Outcome {
    let u = Universe::new();
    let mut sys = FlatSystem::new();
    sys.define("x", ["x"], []).unwrap();
    let x = solve(&u, &sys).map_err(|e| e.to_string())?["x"].clone();
    let omega = u.omega();
    let checks = [
        (
            "solve(x={x}) has 1 canonical node",
            x.canonical().node_count() == 1 && x == omega,
        ),
        ("succ(Ω) = Ω", omega.succ().unwrap() == omega),
        ("Ω ∈ Ω", omega.is_member(&omega)),
        ("union_of(Ω) = Ω", omega.union_of().unwrap() == omega),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Err(format!("{name} fails")),
        None => Ok(checks.map(|(n, _)| n).join(", ")),
    }
}

/// Copies every node twice and points each child at a random copy.
fn labelled_scramble(r: &mut ChaCha8Rng, g: &LabelledApg) -> LabelledApg {
    let n = g.node_count();
    let mut labels = Vec::with_capacity(2 * n);
    let mut children = Vec::with_capacity(2 * n);
    for _ in 0..2 {
        for v in (0..n).map(NodeId::from) {
            labels.push(g.label(v));
            children.push(
                g.children(v)
                    .iter()
                    .map(|c| NodeId::from(r.gen_range(0..2) * n + c.index()))
                    .collect(),
            );
        }
    }
    LabelledApg::from_parts(labels, children, NodeId::from(n * r.gen_range(0..2)))
}

fn m_types() -> Outcome {
    let ab = Signature::new([("a", 1), ("b", 1)]).unwrap();
    let mu = MUniverse::new(ab.clone());
    let abw = LabelledApg::build(&ab, &[("a", vec![1]), ("b", vec![0])], 0).unwrap();
    let a_baw =
        LabelledApg::build(&ab, &[("a", vec![1]), ("b", vec![2]), ("a", vec![1])], 0).unwrap();
    if !mu
        .unfold(&abw)
        .unwrap()
        .mtree_equals(&mu.unfold(&a_baw).unwrap())
        .unwrap()
    {
        return Err("(ab)^ω != a(ba)^ω".into());
    }

    let one = Signature::new([("s", 1)]).unwrap();
    let single = MUniverse::new(one.clone());
    for i in 0..100u64 {
        let g = random_labelled(&mut rng(sample_seed(8, i)), &one, 12);
        single.unfold(&g).unwrap();
    }
    if single.len() != 1 {
        return Err(format!("one-symbol universe has {} elements", single.len()));
    }

    let sig = Signature::new([("a", 1), ("b", 2), ("c", 0)]).unwrap();
    let mu = MUniverse::new(sig.clone());
    let mut equal = 0;
    for i in 0..200u64 {
        let mut r = rng(sample_seed(9, i));
        let g1 = random_labelled(&mut r, &sig, 6);
        let g2 = if i % 2 == 0 {
            labelled_scramble(&mut r, &g1)
        } else {
            random_labelled(&mut r, &sig, 6)
        };
        let (t1, t2) = (mu.unfold(&g1).unwrap(), mu.unfold(&g2).unwrap());
        let same = t1.mtree_equals(&t2).unwrap();
        // Distinct states of an n-state system differ within depth n.
        let depth = g1.node_count() + g2.node_count() + 1;
        if same != (t1.truncate(depth) == t2.truncate(depth)) {
            return Err(format!("pair {i}: truncation disagrees with mtree_equals"));
        }
        equal += usize::from(same);
    }
    Ok(format!(
        "(ab)^ω = a(ba)^ω; 1 element after 100 unfolds; 200 pairs ({equal} equal)"
    ))
}

fn performance() -> Outcome {
    let g = random_sparse_graph(&mut rng(10), 100_000, 300_000);
    let started = Instant::now();
    let (canon, _) = minimize(&g);
    within(
        started,
        Duration::from_secs(5),
        format!(
            "{} nodes, {} edges -> {} nodes",
            g.node_count(),
            g.edge_count(),
            canon.node_count()
        ),
    )
}

fn cli_round_trip_and_fuzz() -> Outcome {
    let mut session = Session::new();
    for i in 0..500u64 {
        let cfg = GenConfig {
            seed: sample_seed(11, i),
            max_nodes: 7,
            ..GenConfig::default()
        };
        let x = random_hset(session.universe(), &cfg).unwrap();
        let text = print_canonical(&x, None);
        match session.eval_str(&text) {
            Ok(y) if y == x => {}
            Ok(_) => return Err(format!("value {i}: `{text}` evaluates to a different set")),
            Err(e) => return Err(format!("value {i}: `{text}` fails: {e}")),
        }
    }

    const PIECES: &[&str] = &[
        "{",
        "}",
        "{",
        "}",
        ",",
        ";",
        "=",
        ".",
        "(",
        ")",
        "μ",
        "mu ",
        "x",
        "y",
        "z",
        " ",
        "\n",
        "0",
        "3",
        "17",
        "pair",
        "union",
        "inter",
        "pow",
        "exp",
        "kpair",
        "succ",
        "cup",
        ":eq",
        ":min",
        ":pow",
        ":exp",
        ":print",
        "depth=",
        ":solve",
        ":reset",
        "#",
        "∅",
        "é",
        "\u{0}",
        "99999999999999999999",
        "$",
    ];
    let limits = Limits {
        max_nodes: 5_000,
        max_powerset_base: 8,
        max_numeral: 50,
        max_exponential: 256,
    };
    let mut r = rng(12);
    let mut parsed = 0;
    let mut fuzz = Session::with_limits(limits.clone());
    for i in 0..100_000u64 {
        let src: String = match i % 3 {
            0 => {
                let bytes: Vec<u8> = (0..r.gen_range(0..40)).map(|_| r.gen()).collect();
                String::from_utf8_lossy(&bytes).into_owned()
            }
            _ => (0..r.gen_range(0..30))
                .map(|_| *PIECES.choose(&mut r).unwrap())
                .collect(),
        };
        let result = catch_unwind(AssertUnwindSafe(|| {
            if parse(&src).is_ok() {
                parsed += 1;
                let _ = fuzz.run(&src);
            }
        }));
        if result.is_err() {
            return Err(format!("input {i} panicked: {src:?}"));
        }
        if i % 1000 == 0 {
            fuzz = Session::with_limits(limits.clone());
        }
    }
    Ok(format!(
        "500 round trips; 100000 fuzz inputs ({parsed} parsed and evaluated), no panics"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("extensionality/finality", extensionality_finality),
        ("axiom suite", axiom_suite),
        ("afa", afa),
        ("well-founded agreement", well_founded),
        ("exponential counts", exponential_counts),
        ("powerset counts", powerset_counts),
        ("closed-form identities", closed_forms),
        ("m-types", m_types),
        ("performance", performance),
        ("cli round trip and fuzz", cli_round_trip_and_fuzz),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    let _ = std::panic::take_hook();
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
