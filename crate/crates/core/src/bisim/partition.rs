use crate::error::{Error, Result};
use crate::graph::{Apg, NodeId};

/// Assignment of every node to a block; block ids are exactly `0..block_count`.
///
/// Partitions produced by this crate are normalized: blocks are numbered in
/// order of their smallest member, so two partitions describing the same
/// equivalence compare equal with `==`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<u32>,
    block_count: usize,
}

impl Partition {
    /// Everything in one block.
    pub fn trivial(n: usize) -> Self {
        Partition {
            block_of: vec![0; n],
            block_count: usize::from(n > 0),
        }
    }

    /// Every node in its own block.
    pub fn discrete(n: usize) -> Self {
        Partition {
            block_of: (0..n as u32).collect(),
            block_count: n,
        }
    }

    /// Validates that the ids used are exactly `0..max+1`.
    pub fn from_blocks(block_of: Vec<usize>) -> Result<Self> {
        let count = block_of.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; count];
        for &b in &block_of {
            used[b] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::MalformedPartition(format!(
                "block id {missing} is unused but {} blocks are declared",
                count
            )));
        }
        Ok(Partition {
            block_of: block_of.into_iter().map(|b| b as u32).collect(),
            block_count: count,
        })
    }

    /// Builds from raw labels of any range; equal labels share a block.
    pub fn from_labels<T: Ord + Clone>(labels: &[T]) -> Self {
        let mut sorted: Vec<T> = labels.to_vec();
        sorted.sort();
        sorted.dedup();
        let block_of = labels
            .iter()
            .map(|l| sorted.binary_search(l).expect("label present") as u32)
            .collect();
        Partition {
            block_of,
            block_count: sorted.len(),
        }
        .normalized()
    }

    pub(crate) fn from_raw(block_of: Vec<u32>, block_count: usize) -> Self {
        Partition {
            block_of,
            block_count,
        }
    }

    /// Renumbers blocks by first occurrence.
    pub fn normalized(&self) -> Partition {
        let mut rename = vec![u32::MAX; self.block_count];
        let mut next = 0;
        let block_of = self
            .block_of
            .iter()
            .map(|&b| {
                let r = &mut rename[b as usize];
                if *r == u32::MAX {
                    *r = next;
                    next += 1;
                }
                *r
            })
            .collect();
        Partition {
            block_of,
            block_count: self.block_count,
        }
    }

    #[inline]
    pub fn block_of(&self, v: NodeId) -> usize {
        self.block_of[v.index()] as usize
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// Number of nodes partitioned.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    #[inline]
    pub fn same_block(&self, a: NodeId, b: NodeId) -> bool {
        self.block_of[a.index()] == self.block_of[b.index()]
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count == self.block_of.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.block_of
    }

    pub fn blocks(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.block_count];
        for (i, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(NodeId::from(i));
        }
        out
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image = vec![u32::MAX; self.block_count];
        self.block_of.iter().zip(&coarser.block_of).all(|(&b, &c)| {
            let slot = &mut image[b as usize];
            if *slot == u32::MAX {
                *slot = c;
            }
            *slot == c
        })
    }

    pub(crate) fn check_for(&self, g: &Apg) -> Result<()> {
        if self.len() != g.node_count() {
            return Err(Error::MalformedPartition(format!(
                "partition covers {} nodes, graph has {}",
                self.len(),
                g.node_count()
            )));
        }
        if self
            .block_of
            .iter()
            .any(|&b| b as usize >= self.block_count)
        {
            return Err(Error::MalformedPartition("block id out of range".into()));
        }
        Ok(())
    }
}
