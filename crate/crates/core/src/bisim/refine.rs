//! Splitter-based computation of the coarsest stable refinement.
//!
//! This is the three-way splitting scheme of Paige and Tarjan. Alongside the
//! partition `Q` of nodes it keeps a coarser partition `X` of "compound"
//! blocks, each a union of `Q`-blocks, with `Q` stable with respect to every
//! compound block. A compound block holding two or more `Q`-blocks is a
//! pending splitter: the smaller of two of its blocks, `B`, is removed and
//! `Q` is split by `pre(B)` and by `pre(B) \ pre(S \ B)`. Per-node edge counts
//! into each compound block make the second split cheap, so every node is
//! touched O(log n) times as a member of a splitter.

use crate::graph::Apg;

use super::Partition;

const NONE: u32 = u32::MAX;

pub(super) struct Refiner<'g> {
    g: &'g Apg,
    // Refinable partition: blocks are contiguous ranges of `elems`.
    elems: Vec<u32>,
    pos: Vec<u32>,
    block_of: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
    // Marked members of a block occupy `start..mid`.
    mid: Vec<u32>,
    touched: Vec<u32>,
    // Compound blocks.
    compound_of: Vec<u32>,
    members: Vec<Vec<u32>>,
    slot_in_compound: Vec<u32>,
    worklist: Vec<u32>,
    queued: Vec<bool>,
    // Reverse edges: `rev_edges[rev_off[y]..rev_off[y+1]]` are edge ids into `y`.
    rev_off: Vec<u32>,
    rev_edges: Vec<u32>,
    edge_src: Vec<u32>,
    // Edge counts from a node into a compound block.
    counts: Vec<u32>,
    edge_rec: Vec<u32>,
    rec_b: Vec<u32>,
    rec_s: Vec<u32>,
}

impl<'g> Refiner<'g> {
    pub(super) fn new(g: &'g Apg, init: &Partition) -> Self {
        let n = g.node_count();
        let m = g.edge_count();

        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| init.labels()[v as usize]);
        let mut pos = vec![0u32; n];
        for (i, &v) in elems.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut start = Vec::new();
        let mut end = Vec::new();
        let mut block_of = vec![0u32; n];
        let mut i = 0;
        while i < n {
            let label = init.labels()[elems[i] as usize];
            let b = start.len() as u32;
            start.push(i as u32);
            while i < n && init.labels()[elems[i] as usize] == label {
                block_of[elems[i] as usize] = b;
                i += 1;
            }
            end.push(i as u32);
        }
        let blocks = start.len();

        let mut rev_off = vec![0u32; n + 1];
        let mut edge_src = vec![0u32; m];
        for v in g.nodes() {
            let base = g.edge_offset(v);
            for (k, t) in g.succ(v).iter().enumerate() {
                rev_off[t.index() + 1] += 1;
                edge_src[base + k] = v.0;
            }
        }
        for y in 0..n {
            rev_off[y + 1] += rev_off[y];
        }
        let mut fill = rev_off.clone();
        let mut rev_edges = vec![0u32; m];
        for (e, t) in g.targets().iter().enumerate() {
            let slot = &mut fill[t.index()];
            rev_edges[*slot as usize] = e as u32;
            *slot += 1;
        }

        Refiner {
            g,
            mid: start.clone(),
            elems,
            pos,
            block_of,
            start,
            end,
            touched: Vec::new(),
            compound_of: vec![0; blocks],
            members: vec![(0..blocks as u32).collect()],
            slot_in_compound: (0..blocks as u32).collect(),
            worklist: Vec::new(),
            queued: vec![false],
            rev_off,
            rev_edges,
            edge_src,
            counts: Vec::new(),
            edge_rec: vec![NONE; m],
            rec_b: vec![NONE; n],
            rec_s: vec![NONE; n],
        }
    }

    fn mark(&mut self, v: u32) {
        let b = self.block_of[v as usize] as usize;
        let p = self.pos[v as usize];
        let m = self.mid[b];
        if p < m {
            return;
        }
        if m == self.start[b] {
            self.touched.push(b as u32);
        }
        let other = self.elems[m as usize];
        self.elems.swap(p as usize, m as usize);
        self.pos[v as usize] = m;
        self.pos[other as usize] = p;
        self.mid[b] = m + 1;
    }

    fn split_marked(&mut self) {
        let touched = std::mem::take(&mut self.touched);
        for &b in &touched {
            let b = b as usize;
            let (s, m, e) = (self.start[b], self.mid[b], self.end[b]);
            self.mid[b] = s;
            if m == e {
                continue;
            }
            let nb = self.start.len() as u32;
            // The smaller half becomes the new block.
            let (new_range, old_range) = if m - s <= e - m {
                ((s, m), (m, e))
            } else {
                ((m, e), (s, m))
            };
            self.start[b] = old_range.0;
            self.end[b] = old_range.1;
            self.mid[b] = old_range.0;
            self.start.push(new_range.0);
            self.end.push(new_range.1);
            self.mid.push(new_range.0);
            for i in new_range.0..new_range.1 {
                self.block_of[self.elems[i as usize] as usize] = nb;
            }
            let c = self.compound_of[b];
            self.compound_of.push(c);
            self.slot_in_compound
                .push(self.members[c as usize].len() as u32);
            self.members[c as usize].push(nb);
            self.enqueue(c);
        }
        self.touched = touched;
        self.touched.clear();
    }

    fn enqueue(&mut self, c: u32) {
        if !self.queued[c as usize] && self.members[c as usize].len() >= 2 {
            self.queued[c as usize] = true;
            self.worklist.push(c);
        }
    }

    fn size(&self, b: u32) -> u32 {
        self.end[b as usize] - self.start[b as usize]
    }

    /// Moves block `b` out of its compound into a fresh singleton compound.
    fn detach(&mut self, b: u32) {
        let c = self.compound_of[b as usize] as usize;
        let slot = self.slot_in_compound[b as usize] as usize;
        self.members[c].swap_remove(slot);
        if let Some(&moved) = self.members[c].get(slot) {
            self.slot_in_compound[moved as usize] = slot as u32;
        }
        let nc = self.members.len() as u32;
        self.members.push(vec![b]);
        self.queued.push(false);
        self.compound_of[b as usize] = nc;
        self.slot_in_compound[b as usize] = 0;
    }

    pub(super) fn run(mut self) -> Partition {
        let g = self.g;
        // Make Q stable with respect to the single compound block of all nodes.
        for v in g.nodes() {
            let deg = g.succ(v).len() as u32;
            if deg > 0 {
                let rec = self.counts.len() as u32;
                self.counts.push(deg);
                let base = g.edge_offset(v);
                for e in base..base + deg as usize {
                    self.edge_rec[e] = rec;
                }
                self.mark(v.0);
            }
        }
        self.split_marked();
        self.enqueue(0);

        let mut splitter = Vec::new();
        let mut preds = Vec::new();
        while let Some(s) = self.worklist.pop() {
            self.queued[s as usize] = false;
            if self.members[s as usize].len() < 2 {
                continue;
            }
            let (b1, b2) = (self.members[s as usize][0], self.members[s as usize][1]);
            let b = if self.size(b1) <= self.size(b2) {
                b1
            } else {
                b2
            };
            self.detach(b);
            self.enqueue(s);

            splitter.clear();
            splitter.extend_from_slice(
                &self.elems[self.start[b as usize] as usize..self.end[b as usize] as usize],
            );

            preds.clear();
            for &y in &splitter {
                let y = y as usize;
                for i in self.rev_off[y]..self.rev_off[y + 1] {
                    let e = self.rev_edges[i as usize] as usize;
                    let x = self.edge_src[e] as usize;
                    if self.rec_b[x] == NONE {
                        self.rec_b[x] = self.counts.len() as u32;
                        self.counts.push(0);
                        self.rec_s[x] = self.edge_rec[e];
                        preds.push(x as u32);
                    }
                    self.counts[self.rec_b[x] as usize] += 1;
                }
            }

            for &x in &preds {
                self.mark(x);
            }
            self.split_marked();

            for &x in &preds {
                let x = x as usize;
                if self.counts[self.rec_b[x] as usize] == self.counts[self.rec_s[x] as usize] {
                    self.mark(x as u32);
                }
            }
            self.split_marked();

            for &y in &splitter {
                let y = y as usize;
                for i in self.rev_off[y]..self.rev_off[y + 1] {
                    let e = self.rev_edges[i as usize] as usize;
                    let x = self.edge_src[e] as usize;
                    self.counts[self.edge_rec[e] as usize] -= 1;
                    self.edge_rec[e] = self.rec_b[x];
                }
            }
            for &x in &preds {
                self.rec_b[x as usize] = NONE;
                self.rec_s[x as usize] = NONE;
            }
        }

        let count = self.start.len();
        Partition::from_raw(self.block_of, count).normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_set_nodes_collapse() {
        let g = Apg::build(3, [], 0).unwrap();
        let p = Refiner::new(&g, &Partition::trivial(3)).run();
        assert_eq!(p.block_count(), 1);
    }

    #[test]
    fn respects_initial_partition() {
        let g = Apg::build(2, [(0, 0), (1, 1)], 0).unwrap();
        let p = Refiner::new(&g, &Partition::discrete(2)).run();
        assert!(p.is_discrete());
        let p = Refiner::new(&g, &Partition::trivial(2)).run();
        assert_eq!(p.block_count(), 1);
    }

    #[test]
    fn long_chain_is_fully_split() {
        let n = 2000;
        let g = Apg::build(n, (0..n - 1).map(|i| (i, i + 1)), 0).unwrap();
        let p = Refiner::new(&g, &Partition::trivial(n)).run();
        assert!(p.is_discrete());
    }
}
