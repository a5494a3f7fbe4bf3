//! Exhaustive generators over NC(n): partitions, chains, maximal chains,
//! plus dihedral orbit classes of chains.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chain::{canonical_prime_signature, Chain, RankSet};
use crate::lattice::NcLattice;
use crate::partition::{masks_cross, Partition};
use crate::universe::{bit, Mask, Universe};

/// Every non-crossing partition of `1..=n` once, in restricted-growth-string
/// order. Elements are placed one at a time; a placement that makes the
/// receiving part cross another part is abandoned.
pub fn enumerate_ncp(u: Universe) -> impl Iterator<Item = Partition> {
    let mut out = Vec::new();
    let mut parts: Vec<Mask> = Vec::with_capacity(u.n() as usize);
    grow_ncp(u, 1, &mut parts, &mut out);
    out.into_iter()
}

fn grow_ncp(u: Universe, e: u8, parts: &mut Vec<Mask>, out: &mut Vec<Partition>) {
    if e > u.n() {
        out.push(Partition::from_disjoint(u, parts.iter().copied()));
        return;
    }
    for idx in 0..parts.len() {
        let grown = parts[idx] | bit(e);
        let ok = parts
            .iter()
            .enumerate()
            .all(|(j, &m)| j == idx || !masks_cross(grown, m));
        if ok {
            parts[idx] = grown;
            grow_ncp(u, e + 1, parts, out);
            parts[idx] &= !bit(e);
        }
    }
    parts.push(bit(e));
    grow_ncp(u, e + 1, parts, out);
    parts.pop();
}

/// Non-crossing partitions with rank in `1..=n-2`.
pub fn enumerate_proper_ncp(u: Universe) -> impl Iterator<Item = Partition> {
    let max = (u.n() as usize).saturating_sub(2);
    enumerate_ncp(u).filter(move |p| (1..=max).contains(&p.rank()))
}

/// Visit every chain of the proper part of NC(n) once. With a filter, only
/// chains whose rank set equals it are visited.
pub fn for_each_chain(u: Universe, filter: Option<RankSet>, mut visit: impl FnMut(&Chain)) {
    let lat = NcLattice::get(u);
    let max = (u.n() as usize).saturating_sub(2);
    let allowed = |r: usize| (1..=max).contains(&r) && filter.is_none_or(|f| f.contains(r));
    let starts: Vec<usize> = (0..lat.len())
        .filter(|&i| allowed(lat.element(i).rank()))
        .filter(|&i| {
            // with a filter, chains must start at its least rank
            filter.is_none_or(|f| f.ranks().first() == Some(&lat.element(i).rank()))
        })
        .collect();
    let mut stack: Vec<Partition> = Vec::with_capacity(max);
    for s in starts {
        stack.push(*lat.element(s));
        extend_chain(u, lat, s, filter, &allowed, &mut stack, &mut visit);
        stack.pop();
    }
}

fn extend_chain(
    u: Universe,
    lat: &NcLattice,
    last: usize,
    filter: Option<RankSet>,
    allowed: &dyn Fn(usize) -> bool,
    stack: &mut Vec<Partition>,
    visit: &mut dyn FnMut(&Chain),
) {
    let complete = filter.is_none_or(|f| f.len() == stack.len());
    if complete {
        visit(&Chain::from_sorted(u, stack.clone()));
        if filter.is_some() {
            return;
        }
    }
    let next_rank = filter.and_then(|f| f.ranks().get(stack.len()).copied());
    for j in lat.strictly_above(last).ones() {
        let r = lat.element(j).rank();
        if !allowed(r) || next_rank.is_some_and(|nr| nr != r) {
            continue;
        }
        stack.push(*lat.element(j));
        extend_chain(u, lat, j, filter, allowed, stack, visit);
        stack.pop();
    }
}

/// Every chain (optionally of one rank set), collected.
pub fn enumerate_chains(u: Universe, filter: Option<RankSet>) -> Vec<Chain> {
    let mut out = Vec::new();
    for_each_chain(u, filter, |c| out.push(c.clone()));
    out
}

/// A cover step: merge two parts whose union does not cross the others.
/// Returned in order of the merged part indices.
pub fn cover_moves(p: &Partition) -> impl Iterator<Item = CoverMove> + '_ {
    let parts = p.parts();
    let len = parts.len();
    (0..len)
        .flat_map(move |a| (a + 1..len).map(move |b| (a, b)))
        .filter_map(move |(a, b)| {
            let merged = parts[a].mask() | parts[b].mask();
            let clear = parts
                .iter()
                .enumerate()
                .all(|(k, t)| k == a || k == b || !masks_cross(merged, t.mask()));
            clear.then(|| CoverMove {
                left: parts[a].mask(),
                right: parts[b].mask(),
                result: Partition::from_disjoint(
                    p.universe(),
                    parts
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != a && k != b)
                        .map(|(_, t)| t.mask())
                        .chain(std::iter::once(merged)),
                ),
            })
        })
}

#[derive(Clone, Copy, Debug)]
pub struct CoverMove {
    pub left: Mask,
    pub right: Mask,
    pub result: Partition,
}

impl CoverMove {
    pub fn merged(&self) -> Mask {
        self.left | self.right
    }
}

/// Depth-first stream of maximal chains of the proper part (one member of
/// each rank `1..=n-2`), bottom-up by merging two parts at a time.
pub struct MaximalChains {
    target: usize,
    stack: Vec<(Partition, Vec<CoverMove>)>,
}

impl MaximalChains {
    pub fn new(u: Universe) -> Self {
        let bottom = Partition::bottom(u);
        let mut moves: Vec<CoverMove> = cover_moves(&bottom).collect();
        moves.reverse();
        let target = (u.n() as usize).saturating_sub(2);
        // below n = 3 the proper part is empty and there is nothing to yield
        let stack = if target == 0 {
            Vec::new()
        } else {
            vec![(bottom, moves)]
        };
        MaximalChains { target, stack }
    }
}

impl Iterator for MaximalChains {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        loop {
            let depth = self.stack.len().checked_sub(1)?;
            let (_, moves) = self.stack.last_mut()?;
            if depth == self.target {
                let members: Vec<Partition> = self.stack[1..].iter().map(|(p, _)| *p).collect();
                let u = members[0].universe();
                self.stack.pop();
                return Some(Chain::from_sorted(u, members));
            }
            match moves.pop() {
                Some(m) => {
                    let mut next: Vec<CoverMove> = if depth + 1 < self.target {
                        cover_moves(&m.result).collect()
                    } else {
                        Vec::new()
                    };
                    next.reverse();
                    self.stack.push((m.result, next));
                }
                None => {
                    self.stack.pop();
                    if self.stack.is_empty() {
                        return None;
                    }
                }
            }
        }
    }
}

pub fn enumerate_maximal_chains(u: Universe) -> MaximalChains {
    MaximalChains::new(u)
}

/// Nonempty rank sets satisfying condition I, one per duality pair
/// `{R, n−1−R}` (the lexicographically smaller), ordered by size then
/// lexicographically.
pub fn condition_one_rank_sets(u: Universe) -> Vec<RankSet> {
    let max = (u.n() as usize).saturating_sub(2);
    let mut out: Vec<RankSet> = (1u32..1 << max)
        .map(|bits| RankSet::from_ranks(u, (1..=max).filter(|r| bits & (1 << (r - 1)) != 0)))
        .filter(|r| r.has_consecutive_coranks())
        .filter(|r| r.lex_cmp(&r.dual()).is_le())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lex_cmp(b)));
    out
}

/// One dihedral orbit of chains.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitClass {
    /// Least chain of the orbit.
    pub representative: Chain,
    /// Size of the full orbit under the dihedral group.
    pub orbit_size: usize,
    /// How many of the input chains fell into this class.
    pub members_seen: usize,
    /// Canonical form of the dual of the representative.
    pub dual_representative: Chain,
    /// `(F_1′, …, F_n′)` of the representative.
    pub prime_signature: Vec<Mask>,
    /// Earlier class with the same prime signature up to symmetry.
    pub signature_duplicate_of: Option<Chain>,
}

impl OrbitClass {
    pub fn is_signature_duplicate(&self) -> bool {
        self.signature_duplicate_of.is_some()
    }
}

/// Sort order for class listings: rank-set size, rank set, representative.
pub fn class_order_key(c: &Chain) -> (usize, Vec<usize>, Vec<u64>) {
    let r = c.rank_set();
    (r.len(), r.ranks(), c.key())
}

/// Group chains into dihedral orbits. Classes come out in
/// [`class_order_key`] order; a class whose prime signature matches an
/// earlier class's up to symmetry records that class.
pub fn orbit_classes<'a>(chains: impl IntoIterator<Item = &'a Chain>) -> Vec<OrbitClass> {
    let mut seen: BTreeMap<Chain, usize> = BTreeMap::new();
    for c in chains {
        *seen.entry(c.canonical_form()).or_default() += 1;
    }
    let mut reps: Vec<(Chain, usize)> = seen.into_iter().collect();
    reps.sort_by_key(|(c, _)| class_order_key(c));
    let mut by_signature: BTreeMap<Vec<Mask>, Chain> = BTreeMap::new();
    reps.into_iter()
        .map(|(rep, count)| {
            let u = rep.universe();
            let family = rep.smallest_blocks();
            let signature = family.prime_signature();
            let canon = canonical_prime_signature(u, &signature);
            let duplicate = match by_signature.get(&canon) {
                Some(earlier) => Some(earlier.clone()),
                None => {
                    by_signature.insert(canon, rep.clone());
                    None
                }
            };
            OrbitClass {
                orbit_size: rep.orbit().len(),
                members_seen: count,
                dual_representative: rep.dual().canonical_form(),
                prime_signature: signature,
                signature_duplicate_of: duplicate,
                representative: rep,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let u = Universe::new(4).unwrap();
        assert_eq!(enumerate_ncp(u).count(), 14);
        assert_eq!(enumerate_maximal_chains(u).count(), 16);
        let u = Universe::new(7).unwrap();
        assert_eq!(enumerate_ncp(u).filter(|p| p.rank() == 1).count(), 21);
    }

    #[test]
    fn filtered_chain_counts() {
        let u = Universe::new(7).unwrap();
        let singles = enumerate_chains(u, Some(RankSet::from_ranks(u, [1])));
        assert_eq!(singles.len(), 21);
        let pairs = enumerate_chains(u, Some(RankSet::from_ranks(u, [1, 2])));
        let proper: Vec<Partition> = enumerate_proper_ncp(u).collect();
        let direct = proper
            .iter()
            .filter(|p| p.rank() == 1)
            .flat_map(|p| {
                proper
                    .iter()
                    .filter(move |q| q.rank() == 2 && p.leq(q).unwrap())
            })
            .count();
        assert_eq!(pairs.len(), direct);
        assert!(pairs.iter().all(|c| c.rank_set().ranks() == vec![1, 2]));
    }

    #[test]
    fn orbit_class_examples() {
        let u = Universe::new(7).unwrap();
        let chains = [
            Chain::parse(u, "12<12,34").unwrap(),
            Chain::parse(u, "12,34").unwrap(),
        ];
        let classes = orbit_classes(&chains);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].representative.to_string(), "12,34");
        assert!(!classes[0].is_signature_duplicate());
        assert_eq!(classes[1].representative.to_string(), "12<12,34");
        assert_eq!(
            classes[1]
                .signature_duplicate_of
                .as_ref()
                .unwrap()
                .to_string(),
            "12,34"
        );

        let chains = [
            Chain::parse(u, "13").unwrap(),
            Chain::parse(u, "14").unwrap(),
            Chain::parse(u, "24").unwrap(),
        ];
        let classes = orbit_classes(&chains);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].representative.to_string(), "13");
        assert_eq!(classes[0].orbit_size, 7);
        assert_eq!(classes[0].members_seen, 2);
        assert_eq!(classes[1].representative.to_string(), "14");
        assert_eq!(classes[1].orbit_size, 7);
    }

    #[test]
    fn rank_set_list_for_seven() {
        let u = Universe::new(7).unwrap();
        let got: Vec<Vec<usize>> = condition_one_rank_sets(u)
            .iter()
            .map(|r| r.ranks())
            .collect();
        let expected: Vec<Vec<usize>> = vec![
            vec![1],
            vec![2],
            vec![3],
            vec![1, 2],
            vec![1, 3],
            vec![1, 4],
            vec![1, 5],
            vec![2, 3],
            vec![1, 2, 3],
            vec![1, 2, 5],
        ];
        assert_eq!(got, expected);
    }
}
