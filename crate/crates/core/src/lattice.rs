//! The full lattice NC(n) held in memory: every non-crossing partition with
//! strict-order and crossing relations as bitsets. Built once per `n`.

use std::collections::HashMap;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::enumeration::enumerate_ncp;
use crate::partition::Partition;
use crate::universe::{Universe, MAX_N};

pub struct NcLattice {
    universe: Universe,
    elements: Vec<Partition>,
    index: HashMap<Partition, usize>,
    strictly_above: Vec<FixedBitSet>,
    strictly_below: Vec<FixedBitSet>,
    crossing: Vec<FixedBitSet>,
}

static LATTICES: [OnceLock<NcLattice>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];

impl NcLattice {
    /// Shared instance for `u`, built on first use.
    pub fn get(u: Universe) -> &'static NcLattice {
        LATTICES[u.n() as usize].get_or_init(|| NcLattice::build(u))
    }

    fn build(u: Universe) -> NcLattice {
        let elements: Vec<Partition> = enumerate_ncp(u).collect();
        let len = elements.len();
        let index = elements.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut strictly_above = vec![FixedBitSet::with_capacity(len); len];
        let mut strictly_below = vec![FixedBitSet::with_capacity(len); len];
        let mut crossing = vec![FixedBitSet::with_capacity(len); len];
        for (i, p) in elements.iter().enumerate() {
            for (j, q) in elements.iter().enumerate() {
                if i != j && p.rank() < q.rank() && p.leq_unchecked(q) {
                    strictly_above[i].insert(j);
                    strictly_below[j].insert(i);
                }
                if p.crosses_unchecked(q) {
                    crossing[i].insert(j);
                }
            }
        }
        NcLattice {
            universe: u,
            elements,
            index,
            strictly_above,
            strictly_below,
            crossing,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Partition {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn bottom_index(&self) -> usize {
        self.index[&Partition::bottom(self.universe)]
    }

    pub fn top_index(&self) -> usize {
        self.index[&Partition::top(self.universe)]
    }

    pub fn strictly_above(&self, i: usize) -> &FixedBitSet {
        &self.strictly_above[i]
    }

    pub fn strictly_below(&self, i: usize) -> &FixedBitSet {
        &self.strictly_below[i]
    }

    pub fn crossing_with(&self, i: usize) -> &FixedBitSet {
        &self.crossing[i]
    }

    /// Elements strictly between `lo` and `hi`.
    pub fn open_interval(&self, lo: usize, hi: usize) -> FixedBitSet {
        let mut set = self.strictly_above[lo].clone();
        set.intersect_with(&self.strictly_below[hi]);
        set
    }

    /// Some crossing pair inside `set`, if one exists.
    pub fn crossing_pair_in(&self, set: &FixedBitSet) -> Option<(usize, usize)> {
        set.ones()
            .find_map(|i| self.crossing[i].intersection(set).next().map(|j| (i, j)))
    }
}
