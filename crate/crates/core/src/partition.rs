//! Partitions of orbit indices.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A partition of the orbit indices `0..len` into cells.
///
/// Always canonical: each cell sorted ascending, cells sorted by their
/// smallest element. Indices are zero-based; `Display` shows them one-based
/// to match the usual `<{1} | {2, 3}>` notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitPartition {
    cells: Vec<Vec<usize>>,
}

impl OrbitPartition {
    /// Validates and canonicalizes `cells`, which must cover `0..len` exactly.
    pub fn new(mut cells: Vec<Vec<usize>>) -> Result<Self> {
        let len: usize = cells.iter().map(Vec::len).sum();
        let mut seen = vec![false; len];
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::MalformedPartition("empty cell".into()));
            }
            for &i in cell {
                if i >= len || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::MalformedPartition(format!(
                        "cells do not partition 0..{len} (index {i})"
                    )));
                }
            }
        }
        for cell in &mut cells {
            cell.sort_unstable();
        }
        cells.sort_unstable_by_key(|c| c[0]);
        Ok(Self { cells })
    }

    /// `<{0, ..., len-1}>`.
    pub fn single_cell(len: usize) -> Self {
        if len == 0 {
            return Self { cells: Vec::new() };
        }
        Self {
            cells: vec![(0..len).collect()],
        }
    }

    /// `<{0} | {1} | ... >`.
    pub fn discrete(len: usize) -> Self {
        Self {
            cells: (0..len).map(|i| vec![i]).collect(),
        }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Number of indices covered.
    pub fn len(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Position of the cell containing `index`.
    pub fn cell_of(&self, index: usize) -> Option<usize> {
        self.cells
            .iter()
            .position(|c| c.binary_search(&index).is_ok())
    }

    /// `self` with the cells at positions in `merge` (plus the fresh index
    /// `self.len()`) joined into one cell.
    pub fn extend_merging(&self, merge: &[usize]) -> Self {
        let mut sets = DisjointSets::from_partition(self, self.len() + 1);
        let fresh = self.len();
        for &c in merge {
            sets.union(self.cells[c][0], fresh);
        }
        sets.to_partition()
    }

    /// Every refinement obtained by splitting exactly one cell in two.
    pub fn single_splits(&self) -> Vec<OrbitPartition> {
        let mut out = Vec::new();
        for (pos, cell) in self.cells.iter().enumerate() {
            if cell.len() < 2 || cell.len() > 20 {
                continue;
            }
            // Subsets containing cell[0] but not the whole cell, each split once.
            let rest = cell.len() - 1;
            for mask in 0..(1u64 << rest) - 1 {
                let mut left = vec![cell[0]];
                let mut right = Vec::new();
                for (bit, &i) in cell[1..].iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        left.push(i);
                    } else {
                        right.push(i);
                    }
                }
                let mut cells: Vec<Vec<usize>> = self
                    .cells
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != pos)
                    .map(|(_, c)| c.clone())
                    .collect();
                cells.push(left);
                cells.push(right);
                out.push(OrbitPartition::new(cells).expect("split of a valid partition"));
            }
        }
        out
    }

    /// Relabels indices through `map` (old index -> new index).
    pub fn relabel(&self, map: &[usize]) -> Result<Self> {
        Self::new(
            self.cells
                .iter()
                .map(|c| c.iter().map(|&i| map[i]).collect())
                .collect(),
        )
    }
}

impl fmt::Display for OrbitPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (n, cell) in self.cells.iter().enumerate() {
            if n > 0 {
                f.write_str(" | ")?;
            }
            f.write_str("{")?;
            for (m, i) in cell.iter().enumerate() {
                if m > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", i + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str(">")
    }
}

/// Union–find over orbit indices with path compression and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    /// Sets for `partition`, padded with singletons up to `len` elements.
    pub fn from_partition(partition: &OrbitPartition, len: usize) -> Self {
        let mut sets = Self::new(len.max(partition.len()));
        for cell in partition.cells() {
            for &i in &cell[1..] {
                sets.union(cell[0], i);
            }
        }
        sets
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }

    /// Canonical partition of the first `len` elements.
    pub fn to_partition_prefix(&mut self, len: usize) -> OrbitPartition {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..len {
            let root = self.find(i);
            groups.entry(root).or_default().push(i);
        }
        OrbitPartition::new(groups.into_values().collect()).expect("union-find classes partition")
    }

    pub fn to_partition(&mut self) -> OrbitPartition {
        self.to_partition_prefix(self.len())
    }
}
