//! Hereditarily finite hypersets as bisimulation-canonical graphs.
//!
//! A hyperset is a possibly non-well-founded set, such as the Quine atom
//! `Ω = {Ω}`. Every finite pointed graph denotes one: a node stands for the
//! set of what its successors stand for. Two graphs denote the same set
//! exactly when their points are bisimilar, so each hyperset has a unique
//! minimal graph, and interning those graphs makes equality an id compare.
//!
//! Only finitely branching, finitely presented sets exist here. In particular
//! `ω` is not representable; the numerals are available up to a bound.
//!
//! ```
//! use hydra_core::{solve, FlatSystem, Universe};
//!
//! let u = Universe::new();
//! let omega = u.omega();
//! assert!(omega.is_member(&omega));
//! assert_eq!(omega.succ()?, omega);
//!
//! // x = {y, ∅}, y = {x}
//! let mut sys = FlatSystem::new();
//! sys.define("x", ["y"], [u.empty()])?;
//! sys.define("y", ["x"], [])?;
//! let sol = solve(&u, &sys)?;
//! assert!(sol["y"].contains(&sol["x"]));
//! assert_eq!(sol["x"].to_string(), "μx0.{{}, {x0}}");
//! # Ok::<(), hydra_core::Error>(())
//! ```

pub mod afa;
pub mod axioms;
pub mod bisim;
pub mod error;
pub mod graph;
pub mod hset;
pub mod lang;
pub mod mtype;

pub use afa::{check_colouring, solve, FlatSystem, Solution};
pub use bisim::{
    bisimilar, canonical_encoding, minimize, naive_largest_bisimulation, quotient,
    refine_partition, CanonicalApg, Partition,
};
pub use error::{Error, Result};
pub use graph::{Apg, NodeId, NodeMap, Subcoalgebra};
pub use hset::{HSet, Limits, Universe};
