//! Non-crossing spanning trees, apartment membership and dominant vertices.
//!
//! A partition lies in the apartment of a tree `T` when each of its parts
//! spans a connected subtree of `T`; the union of those subtrees is then a
//! sub-forest of `T` with `rank(P)` edges.

use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::chain::Chain;
use crate::condition_four::cond_iv;
use crate::error::{NcpError, Result};
use crate::lattice::NcLattice;
use crate::partition::{masks_cross, Partition};
use crate::universe::{bit, elements, Mask, Universe, MAX_N};

/// A spanning tree on `1..=n` whose edges, drawn as chords, do not cross.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCSpanningTree {
    universe: Universe,
    /// Sorted, each with `a < b`.
    edges: Vec<(u8, u8)>,
}

fn edge_mask((a, b): (u8, u8)) -> Mask {
    bit(a) | bit(b)
}

impl NCSpanningTree {
    /// Validates that `edges` form a non-crossing spanning tree.
    pub fn new(u: Universe, edges: &[(u8, u8)]) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            u.check_element(a)?;
            u.check_element(b)?;
            if a == b {
                return Err(NcpError::NotAPartition {
                    n: u.n(),
                    reason: format!("loop at {a}"),
                });
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        let bad = |reason: String| NcpError::NotAPartition { n: u.n(), reason };
        if norm.len() != u.n() as usize - 1 {
            return Err(bad(format!(
                "a spanning tree needs {} distinct edges, got {}",
                u.n() - 1,
                norm.len()
            )));
        }
        for (x, &e) in norm.iter().enumerate() {
            for &f in &norm[x + 1..] {
                if masks_cross(edge_mask(e), edge_mask(f)) {
                    return Err(NcpError::Crossing(format!(
                        "{}-{} and {}-{}",
                        e.0, e.1, f.0, f.1
                    )));
                }
            }
        }
        let tree = NCSpanningTree {
            universe: u,
            edges: norm,
        };
        if tree.reach(1, u.full()) != u.full() {
            return Err(bad("edges do not connect every point".into()));
        }
        Ok(tree)
    }

    /// Parses `"1-3,3-5,…"`.
    pub fn parse(u: Universe, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut offset = 0;
        for piece in text.split(',') {
            let err = |message: &str| NcpError::Parse {
                position: offset,
                message: message.to_string(),
            };
            let (a, b) = piece
                .trim()
                .split_once('-')
                .ok_or_else(|| err("expected a-b"))?;
            let a: u8 = a.trim().parse().map_err(|_| err("bad endpoint"))?;
            let b: u8 = b.trim().parse().map_err(|_| err("bad endpoint"))?;
            edges.push((a, b));
            offset += piece.len() + 1;
        }
        Self::new(u, &edges)
    }

    /// The path `1–2–…–n`.
    pub fn path(u: Universe) -> Self {
        let edges: Vec<_> = (1..u.n()).map(|a| (a, a + 1)).collect();
        NCSpanningTree { universe: u, edges }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    /// Vertices reachable from `start` using only vertices in `within`.
    fn reach(&self, start: u8, within: Mask) -> Mask {
        let mut seen = bit(start) & within;
        loop {
            let mut grown = seen;
            for &(a, b) in &self.edges {
                let m = edge_mask((a, b));
                if m & seen != 0 && m & !within == 0 {
                    grown |= m;
                }
            }
            if grown == seen {
                return seen;
            }
            seen = grown;
        }
    }

    /// Whether `part` induces a connected subgraph.
    pub fn spans(&self, part: Mask) -> bool {
        part == 0 || self.reach(crate::universe::min_element(part), part) == part
    }
}

impl fmt::Display for NCSpanningTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for NCSpanningTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCSpanningTree({self})")
    }
}

impl Serialize for NCSpanningTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Every non-crossing spanning tree, each once, in lexicographic edge order.
pub fn enumerate_nc_spanning_trees(u: Universe) -> Vec<NCSpanningTree> {
    let chords: Vec<(u8, u8)> = (1..=u.n())
        .flat_map(|a| (a + 1..=u.n()).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(u.n() as usize);
    let mut comp = [0 as Mask; MAX_N];
    for e in u.elements() {
        comp[e as usize - 1] = bit(e);
    }
    grow(u, &chords, 0, &mut chosen, &mut comp, &mut out);
    out
}

fn grow(
    u: Universe,
    chords: &[(u8, u8)],
    from: usize,
    chosen: &mut Vec<(u8, u8)>,
    comp: &mut [Mask; MAX_N],
    out: &mut Vec<NCSpanningTree>,
) {
    let need = u.n() as usize - 1 - chosen.len();
    if need == 0 {
        out.push(NCSpanningTree {
            universe: u,
            edges: chosen.clone(),
        });
        return;
    }
    for idx in from..chords.len() {
        if chords.len() - idx < need {
            break;
        }
        let (a, b) = chords[idx];
        if comp[a as usize - 1] & bit(b) != 0 {
            continue;
        }
        let m = edge_mask((a, b));
        if chosen.iter().any(|&e| masks_cross(edge_mask(e), m)) {
            continue;
        }
        let saved = *comp;
        let merged = comp[a as usize - 1] | comp[b as usize - 1];
        for e in elements(merged) {
            comp[e as usize - 1] = merged;
        }
        chosen.push((a, b));
        grow(u, chords, idx + 1, chosen, comp, out);
        chosen.pop();
        *comp = saved;
    }
}

/// Whether `p` is a vertex of the apartment of `tree`.
pub fn apartment_contains(tree: &NCSpanningTree, p: &Partition) -> bool {
    p.blocks().all(|b| tree.spans(b.mask()))
}

/// All trees of NC(n) and, per lattice element, the trees whose apartments
/// contain it.
pub struct ApartmentIndex {
    universe: Universe,
    trees: Vec<NCSpanningTree>,
    containing: Vec<FixedBitSet>,
}

static APARTMENTS: [OnceLock<ApartmentIndex>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];

impl ApartmentIndex {
    /// Shared index for `u` (n ≤ 8), built on first use.
    pub fn get(u: Universe) -> Result<&'static ApartmentIndex> {
        if u.n() > 8 {
            return Err(NcpError::TooLarge {
                operation: "apartment index",
                n: u.n(),
                max: 8,
            });
        }
        Ok(APARTMENTS[u.n() as usize].get_or_init(|| Self::build(u)))
    }

    fn build(u: Universe) -> Self {
        let trees = enumerate_nc_spanning_trees(u);
        let lattice = NcLattice::get(u);
        let containing = lattice
            .elements()
            .iter()
            .map(|p| {
                let mut set = FixedBitSet::with_capacity(trees.len());
                for (t, tree) in trees.iter().enumerate() {
                    if apartment_contains(tree, p) {
                        set.insert(t);
                    }
                }
                set
            })
            .collect();
        ApartmentIndex {
            universe: u,
            trees,
            containing,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn trees(&self) -> &[NCSpanningTree] {
        &self.trees
    }

    /// Trees whose apartment contains `p`.
    pub fn containing(&self, p: &Partition) -> &FixedBitSet {
        let idx = NcLattice::get(self.universe)
            .index_of(p)
            .expect("non-crossing partition of the same universe");
        &self.containing[idx]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub dominant: Option<Partition>,
    /// Every member meeting the dominance test; more than one would
    /// contradict uniqueness.
    pub all_dominant: Vec<Partition>,
    pub checked_trees: usize,
}

/// The member `u` of `chain` such that every apartment containing `u`
/// contains the whole chain.
pub fn dominant_vertex(chain: &Chain) -> Result<DominanceReport> {
    let index = ApartmentIndex::get(chain.universe())?;
    let sets: Vec<&FixedBitSet> = chain
        .members()
        .iter()
        .map(|p| index.containing(p))
        .collect();
    let all_dominant: Vec<Partition> = chain
        .members()
        .iter()
        .zip(&sets)
        .filter(|(_, mine)| sets.iter().all(|other| mine.is_subset(other)))
        .map(|(p, _)| *p)
        .collect();
    Ok(DominanceReport {
        dominant: all_dominant.first().copied(),
        all_dominant,
        checked_trees: index.trees().len(),
    })
}

/// Condition IV′: no dominant vertex, or the dominant vertex alone passes
/// condition IV.
pub fn cond_iv_prime(chain: &Chain) -> Result<bool> {
    match dominant_vertex(chain)?.dominant {
        None => Ok(true),
        Some(u) => Ok(cond_iv(&Chain::single(u)?)?.holds()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u7() -> Universe {
        Universe::new(7).unwrap()
    }

    #[test]
    fn small_counts() {
        let n4 = enumerate_nc_spanning_trees(Universe::new(4).unwrap());
        assert_eq!(n4.len(), 12);
        assert!(n4.contains(&NCSpanningTree::path(Universe::new(4).unwrap())));
    }

    #[test]
    fn parse_and_validate() {
        let t = NCSpanningTree::parse(u7(), "1-3,3-5,1-2,3-4,5-6,6-7").unwrap();
        assert_eq!(t.to_string(), "1-2,1-3,3-4,3-5,5-6,6-7");
        assert!(NCSpanningTree::parse(u7(), "1-3,2-4,1-5,5-6,6-7,1-7").is_err());
        assert!(NCSpanningTree::parse(u7(), "1-2,2-3").is_err());
        assert!(NCSpanningTree::parse(u7(), "1-2,2-3,1-3,4-5,5-6,6-7").is_err());
    }

    #[test]
    fn membership_examples() {
        let path = NCSpanningTree::path(u7());
        let p = |s: &str| Partition::parse(u7(), s).unwrap();
        assert!(apartment_contains(&path, &p("123")));
        assert!(!apartment_contains(&path, &p("13")));
        let t = NCSpanningTree::parse(u7(), "1-3,3-5,1-2,3-4,5-6,6-7").unwrap();
        assert!(apartment_contains(&t, &p("135")));
    }

    #[test]
    fn dominance_examples() {
        let c = |s: &str| Chain::parse(u7(), s).unwrap();
        assert_eq!(dominant_vertex(&c("13<13457")).unwrap().dominant, None);
        assert!(cond_iv_prime(&c("13<13457")).unwrap());
        let d = dominant_vertex(&c("12<12,34")).unwrap();
        assert_eq!(d.dominant, Some(Partition::parse(u7(), "12,34").unwrap()));
        assert_eq!(d.all_dominant.len(), 1);
        assert!(!cond_iv_prime(&c("14")).unwrap());
    }
}
