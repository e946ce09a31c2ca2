//! Browser bindings: evaluate expressions, minimize a drawn graph and run an
//! axiom check. Each export takes and returns plain strings so the page
//! needs no glue beyond the generated module.

use std::cell::RefCell;

use hydra_core::axioms::{run_check, Axiom, GenConfig};
use hydra_core::lang::Session;
use hydra_core::{minimize, Apg, Limits};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

thread_local! {
    static SESSION: RefCell<Session> = RefCell::new(Session::with_limits(demo_limits()));
}

/// Smaller bounds than the library defaults; a browser tab is not a server.
fn demo_limits() -> Limits {
    Limits {
        max_nodes: 20_000,
        max_powerset_base: 12,
        max_numeral: 200,
        max_exponential: 1 << 12,
    }
}

/// Runs `src` in the page's session and returns one line per output, or
/// the error message prefixed with `error: `.
#[wasm_bindgen]
pub fn evaluate(src: &str) -> String {
    SESSION.with(|s| match s.borrow_mut().run(src) {
        Ok(outputs) => outputs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n"),
        Err(e) => format!("error: {e}"),
    })
}

#[wasm_bindgen]
pub fn reset_session() {
    SESSION.with(|s| s.borrow_mut().reset());
}

#[derive(Deserialize)]
struct GraphIn {
    adjacency: Vec<Vec<usize>>,
    #[serde(default)]
    point: usize,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct Minimized {
    pub nodes: usize,
    pub edges: usize,
    /// Canonical graph; its point is node 0.
    pub adjacency: Vec<Vec<usize>>,
    /// Canonical node of each input node; `null` if unreachable.
    pub class_of: Vec<Option<usize>>,
    pub text: String,
}

pub fn minimize_json(input: &str) -> Result<Minimized, String> {
    let g: GraphIn = serde_json::from_str(input).map_err(|e| format!("bad graph JSON: {e}"))?;
    let max = demo_limits().max_nodes;
    if g.adjacency.len() > max {
        return Err(format!(
            "graph has {} nodes; the demo allows {max}",
            g.adjacency.len()
        ));
    }
    let apg = Apg::from_adjacency(g.adjacency, g.point).map_err(|e| e.to_string())?;
    let (canon, map) = minimize(&apg);
    let out = canon.graph();
    let text = SESSION.with(|s| {
        s.borrow()
            .universe()
            .intern(&apg)
            .map(|x| x.to_string())
            .map_err(|e| e.to_string())
    })?;
    Ok(Minimized {
        nodes: out.node_count(),
        edges: out.edge_count(),
        adjacency: out
            .nodes()
            .map(|v| out.succ(v).iter().map(|t| t.index()).collect())
            .collect(),
        class_of: map.iter().map(|(_, c)| c.map(|c| c.index())).collect(),
        text,
    })
}

/// `input` is `{"adjacency": [[1, 2], [0], []], "point": 0}`; the result is
/// the JSON form of [`Minimized`], or `{"error": ...}`.
#[wasm_bindgen]
pub fn minimize_graph(input: &str) -> String {
    match minimize_json(input) {
        Ok(m) => serde_json::to_string(&m).expect("serializable"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

/// Runs `samples` instances of one axiom and returns the report text
/// followed by its machine-readable line.
#[wasm_bindgen]
pub fn check_axiom(name: &str, samples: u32, seed: u32) -> String {
    let cfg = GenConfig {
        seed: u64::from(seed),
        samples: samples.clamp(1, 5000) as usize,
        ..GenConfig::default()
    };
    let result = name
        .parse::<Axiom>()
        .and_then(|a| SESSION.with(|s| run_check(a, s.borrow().universe(), &cfg)));
    match result {
        Ok(r) => format!("{r}\n{}", r.machine_line()),
        Err(e) => format!("error: {e}"),
    }
}

#[wasm_bindgen]
pub fn axiom_names() -> String {
    Axiom::ALL
        .iter()
        .map(|a| a.name())
        .collect::<Vec<_>>()
        .join(",")
}
