//! Canonical text for a hyperset.
//!
//! The canonical graph is unfolded from its point, children in canonical
//! node order. Revisiting a node that is still open on the unfolding path
//! prints a reference to it, and that node gets a `μ` binder named after its
//! depth on the path. A node reached again after it was closed is unfolded
//! afresh, so the text stays a single closed expression.

use crate::graph::NodeId;
use crate::hset::HSet;

enum Piece {
    Open,
    Close,
    Comma,
    Ref(usize),
    Ellipsis,
    /// Filled in once the subtree is finished: binder depth, if referenced.
    Binder(Option<usize>),
}

struct Frame {
    node: NodeId,
    next: usize,
    binder_slot: usize,
    referenced: bool,
}

/// Prints `x`; with `depth = Some(d)`, non-empty sets nested `d` levels
/// deep print as `…`.
pub fn print_canonical(x: &HSet, depth: Option<usize>) -> String {
    let canon = x.canonical();
    let g = canon.graph();
    let mut pieces = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();

    let open = |v: NodeId, stack: &mut Vec<Frame>, pieces: &mut Vec<Piece>| {
        if let Some(pos) = stack.iter().position(|f| f.node == v) {
            stack[pos].referenced = true;
            pieces.push(Piece::Ref(pos));
        } else if depth.is_some_and(|d| stack.len() >= d) && !g.succ(v).is_empty() {
            pieces.push(Piece::Ellipsis);
        } else {
            pieces.push(Piece::Binder(None));
            let binder_slot = pieces.len() - 1;
            pieces.push(Piece::Open);
            stack.push(Frame {
                node: v,
                next: 0,
                binder_slot,
                referenced: false,
            });
        }
    };

    open(g.point(), &mut stack, &mut pieces);
    while let Some(top) = stack.last_mut() {
        let succ = g.succ(top.node);
        if top.next < succ.len() {
            let child = succ[top.next];
            if top.next > 0 {
                pieces.push(Piece::Comma);
            }
            top.next += 1;
            open(child, &mut stack, &mut pieces);
        } else {
            let done = stack.pop().expect("non-empty");
            pieces.push(Piece::Close);
            if done.referenced {
                pieces[done.binder_slot] = Piece::Binder(Some(stack.len()));
            }
        }
    }

    let mut out = String::new();
    for p in pieces {
        match p {
            Piece::Open => out.push('{'),
            Piece::Close => out.push('}'),
            Piece::Comma => out.push_str(", "),
            Piece::Ref(d) => {
                out.push('x');
                out.push_str(&d.to_string());
            }
            Piece::Ellipsis => out.push('…'),
            Piece::Binder(Some(d)) => {
                out.push_str("μx");
                out.push_str(&d.to_string());
                out.push('.');
            }
            Piece::Binder(None) => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hset::Universe;

    #[test]
    fn empty_and_omega() {
        let u = Universe::new();
        assert_eq!(print_canonical(&u.empty(), None), "{}");
        assert_eq!(print_canonical(&u.omega(), None), "μx0.{x0}");
        assert_eq!(u.omega().to_string(), "μx0.{x0}");
    }

    #[test]
    fn numerals_print_as_nested_braces() {
        let u = Universe::new();
        let two = u.numeral(2).unwrap();
        let text = print_canonical(&two, None);
        assert_eq!(text.matches('{').count(), 4);
        assert!(!text.contains('μ'));
    }

    #[test]
    fn depth_limit_elides() {
        let u = Universe::new();
        let three = u.numeral(3).unwrap();
        assert_eq!(print_canonical(&three, Some(0)), "…");
        let one_level = print_canonical(&three, Some(1));
        assert!(one_level.contains('…'));
        assert!(one_level.contains("{}"));
        assert_eq!(print_canonical(&u.omega(), Some(1)), "μx0.{x0}");
    }

    #[test]
    fn inner_cycle_binder_named_by_depth() {
        let u = Universe::new();
        let s = u.omega().pair(&u.empty()).unwrap();
        let text = print_canonical(&s, None);
        assert!(text.contains("μx1.{x1}"), "{text}");
    }
}
