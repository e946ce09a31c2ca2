use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use hydra_core::axioms::{random_sparse_graph, run_all, run_check, Axiom, GenConfig};
use hydra_core::lang::{LangError, Output, Session};
use hydra_core::{minimize, Universe};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "hydra", version, about = "Hypersets as canonical graphs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Interactive session; one universe until `:reset`.
    Repl,
    /// Run a `.hset` program and print the value of each expression.
    Run { file: PathBuf },
    /// Run the axiom checks on random hypersets.
    Check {
        /// Only this axiom (default: all).
        #[arg(long)]
        axiom: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest random graph drawn per sample.
        #[arg(long, default_value_t = 6)]
        max_nodes: usize,
    },
    /// Solve the definitions of a `.hset` program and print every binding.
    Solve { file: PathBuf },
    /// Time minimization of a random sparse graph.
    Bench {
        #[arg(long, default_value_t = 100_000)]
        nodes: usize,
        /// Defaults to three times the node count.
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const EVAL_FAILURE: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Repl => repl(),
        Cmd::Run { file } => run_file(&file, false),
        Cmd::Solve { file } => run_file(&file, true),
        Cmd::Check {
            axiom,
            samples,
            seed,
            max_nodes,
        } => check(axiom.as_deref(), samples, seed, max_nodes),
        Cmd::Bench { nodes, edges, seed } => bench(nodes, edges.unwrap_or(3 * nodes), seed),
    }
}

fn report(e: &LangError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn run_file(path: &Path, solve: bool) -> ExitCode {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(EVAL_FAILURE);
        }
    };
    let mut session = Session::new();
    let outputs = match session.run(&src) {
        Ok(o) => o,
        Err(e) => return report(&e),
    };
    for out in outputs {
        match out {
            Output::Defined(_) if !solve => {}
            out => println!("{out}"),
        }
    }
    ExitCode::SUCCESS
}

fn check(axiom: Option<&str>, samples: usize, seed: u64, max_nodes: usize) -> ExitCode {
    let u = Universe::new();
    let cfg = GenConfig {
        seed,
        samples,
        max_nodes,
        ..GenConfig::default()
    };
    let result = match axiom {
        Some(name) => name
            .parse::<Axiom>()
            .and_then(|a| run_check(a, &u, &cfg))
            .map(|r| vec![r]),
        None => run_all(&u, &cfg),
    };
    let reports = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_resource() { 3 } else { EVAL_FAILURE });
        }
    };
    for r in &reports {
        eprintln!("{r}");
        println!("{}", r.machine_line());
    }
    if reports.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EVAL_FAILURE)
    }
}

fn bench(nodes: usize, edges: usize, seed: u64) -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let started = Instant::now();
    let g = random_sparse_graph(&mut rng, nodes, edges);
    let built = started.elapsed();
    let started = Instant::now();
    let (canon, _) = minimize(&g);
    let took = started.elapsed();
    println!(
        "graph: {} nodes, {} edges (built in {built:.2?})",
        g.node_count(),
        g.edge_count()
    );
    println!(
        "minimize: {:.3} s -> {} nodes, {} edges",
        took.as_secs_f64(),
        canon.node_count(),
        canon.graph().edge_count()
    );
    ExitCode::SUCCESS
}

/// Lines are collected until they form a complete program, so a set
/// literal may span several lines.
fn repl() -> ExitCode {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut session = Session::new();
    let mut buffer = String::new();
    let mut last_error = None;
    let prompt = |continued: bool| {
        if interactive {
            print!("{}", if continued { "...... " } else { "hydra> " });
            let _ = io::stdout().flush();
        }
    };
    prompt(false);
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        buffer.push_str(&line);
        buffer.push('\n');
        match session.run(&buffer) {
            Err(LangError::Parse(e)) if e.span.start >= buffer.trim_end().len() => {
                prompt(true);
                continue;
            }
            Err(e) => {
                eprintln!("error: {e}");
                last_error = Some(e.exit_code() as u8);
            }
            Ok(outputs) => {
                for out in outputs {
                    println!("{out}");
                }
                last_error = None;
            }
        }
        buffer.clear();
        prompt(false);
    }
    if !buffer.trim().is_empty() {
        if let Err(e) = session.run(&buffer) {
            eprintln!("error: {e}");
            last_error = Some(e.exit_code() as u8);
        }
    }
    if interactive {
        println!();
    }
    match last_error {
        Some(code) if !interactive => ExitCode::from(code),
        _ => ExitCode::SUCCESS,
    }
}
