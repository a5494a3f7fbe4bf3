//! Chains of the proper part of NC(n), their smallest-block families and
//! the first three chain conditions.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcpError, Result};
use crate::lattice::NcLattice;
use crate::partition::{masks_cross, DualOrientation, Partition};
use crate::universe::{bit, elements, mask_set, Mask, Symmetry, Universe, MAX_N};

/// A nonempty strictly increasing sequence of non-crossing partitions, all
/// of rank `1..=n-2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    universe: Universe,
    members: Vec<Partition>,
}

impl Chain {
    /// Validate and build. Members may be given in any order; they are
    /// sorted by rank.
    pub fn new(mut members: Vec<Partition>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| NcpError::NotAChain("no members".into()))?;
        let u = first.universe();
        for p in &members {
            u.same_as(p.universe())?;
        }
        members.sort_by_key(|p| p.rank());
        Self::validate(u, &members)?;
        Ok(Chain {
            universe: u,
            members,
        })
    }

    pub fn single(p: Partition) -> Result<Self> {
        Self::new(vec![p])
    }

    fn validate(u: Universe, members: &[Partition]) -> Result<()> {
        let max_rank = (u.n() as usize).saturating_sub(2);
        for p in members {
            if !p.is_noncrossing() {
                return Err(NcpError::Crossing(p.to_string()));
            }
            if p.rank() == 0 || p.rank() > max_rank {
                return Err(NcpError::NotAChain(format!(
                    "member {p} has rank {} outside 1..={max_rank}",
                    p.rank()
                )));
            }
        }
        for w in members.windows(2) {
            if !w[0].leq_unchecked(&w[1]) || w[0].rank() == w[1].rank() {
                return Err(NcpError::NotAChain(format!(
                    "members {} and {} are incomparable",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    /// Unchecked constructor for members already known to form a chain in
    /// increasing order.
    pub(crate) fn from_sorted(u: Universe, members: Vec<Partition>) -> Self {
        debug_assert!(Self::validate(u, &members).is_ok());
        Chain {
            universe: u,
            members,
        }
    }

    /// Parse `P1<P2<…`, members in increasing order, each in the compact
    /// partition notation.
    pub fn parse(u: Universe, text: &str) -> Result<Self> {
        let mut members = Vec::new();
        let mut offset = 0;
        for piece in text.split('<') {
            let lead = piece.len() - piece.trim_start().len();
            let body = piece.trim();
            if body.is_empty() {
                return Err(NcpError::Parse {
                    position: offset + lead,
                    message: "empty chain member".into(),
                });
            }
            let p = Partition::parse_at(u, body, offset + lead)?;
            if !p.is_noncrossing() {
                return Err(NcpError::Crossing(body.to_string()));
            }
            members.push(p);
            offset += piece.len() + 1;
        }
        for w in members.windows(2) {
            if w[0].rank() >= w[1].rank() || !w[0].leq_unchecked(&w[1]) {
                let relation = if w[1].leq_unchecked(&w[0]) {
                    "listed in decreasing order"
                } else {
                    "incomparable"
                };
                return Err(NcpError::NotAChain(format!(
                    "members {} and {} are {relation}",
                    w[0], w[1]
                )));
            }
        }
        Self::validate(u, &members)?;
        Ok(Chain {
            universe: u,
            members,
        })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Members in increasing order.
    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn bottom_member(&self) -> &Partition {
        &self.members[0]
    }

    pub fn top_member(&self) -> &Partition {
        self.members.last().expect("chains are nonempty")
    }

    pub fn is_maximal(&self) -> bool {
        self.members.len() == (self.universe.n() as usize).saturating_sub(2)
    }

    pub fn rank_set(&self) -> RankSet {
        RankSet::from_ranks(self.universe, self.members.iter().map(|p| p.rank()))
    }

    pub fn smallest_blocks(&self) -> SmallestBlockFamily {
        SmallestBlockFamily::of(self)
    }

    /// Condition I: the corank set holds two consecutive integers.
    pub fn cond_i(&self) -> bool {
        self.rank_set().has_consecutive_coranks()
    }

    /// Condition II: some member is not universal (universal = exactly one
    /// block, and that block a cyclic interval).
    pub fn cond_ii(&self) -> bool {
        self.members.iter().any(|p| !is_universal(p))
    }

    /// Condition III via the four-member test on the chain's own members.
    pub fn cond_iii_criterion(&self) -> bool {
        self.cond_iii_clause().is_some()
    }

    /// Which clause of the four-member test fires first, if any.
    pub fn cond_iii_clause(&self) -> Option<ConditionThreeClause> {
        let top: Vec<Mask> = self.top_member().parts().iter().map(|b| b.mask()).collect();
        if let Some(members) = four_member_crossing(&top) {
            return Some(ConditionThreeClause::AboveTop { members });
        }
        for (level, w) in self.members.windows(2).enumerate() {
            for sigma in w[1].blocks() {
                let inside: Vec<Mask> = w[0]
                    .parts()
                    .iter()
                    .filter(|b| b.is_subset(sigma))
                    .map(|b| b.mask())
                    .collect();
                if let Some(members) = four_member_crossing(&inside) {
                    return Some(ConditionThreeClause::BetweenMembers {
                        lower: level + 1,
                        block: sigma.mask(),
                        members,
                    });
                }
            }
        }
        self.bottom_member()
            .parts()
            .iter()
            .find(|b| b.len() >= 4)
            .map(|b| ConditionThreeClause::BelowBottom { block: b.mask() })
    }

    /// Condition III decided by exhaustive search of NC(n): a crossing pair
    /// both strictly below the bottom, strictly between two consecutive
    /// members, or strictly above the top (and below the maximum).
    pub fn cond_iii_bruteforce(&self) -> Result<bool> {
        Ok(self.cond_iii_witness()?.is_some())
    }

    pub fn cond_iii_witness(&self) -> Result<Option<ConditionThreeWitness>> {
        let n = self.universe.n();
        if n > 7 {
            return Err(NcpError::TooLarge {
                operation: "exhaustive condition III",
                n,
                max: 7,
            });
        }
        let lat = NcLattice::get(self.universe);
        let idx: Vec<usize> = self
            .members
            .iter()
            .map(|p| lat.index_of(p).expect("members are non-crossing"))
            .collect();
        let mut bounds = Vec::with_capacity(idx.len() + 1);
        bounds.push((lat.bottom_index(), idx[0], 0));
        for (k, w) in idx.windows(2).enumerate() {
            bounds.push((w[0], w[1], k + 1));
        }
        bounds.push((*idx.last().unwrap(), lat.top_index(), idx.len()));
        for (lo, hi, gap) in bounds {
            let interval = lat.open_interval(lo, hi);
            if let Some((a, b)) = lat.crossing_pair_in(&interval) {
                return Ok(Some(ConditionThreeWitness {
                    gap,
                    plus: *lat.element(a),
                    minus: *lat.element(b),
                }));
            }
        }
        Ok(None)
    }

    /// Elementwise Kreweras dual, re-sorted increasingly.
    pub fn dual(&self) -> Chain {
        self.dual_with(DualOrientation::Increasing)
    }

    pub fn dual_with(&self, orientation: DualOrientation) -> Chain {
        let mut members: Vec<Partition> = self
            .members
            .iter()
            .map(|p| {
                p.kreweras_dual_with(orientation)
                    .expect("chain members are non-crossing")
            })
            .collect();
        members.reverse();
        Chain::from_sorted(self.universe, members)
    }

    pub fn apply(&self, g: Symmetry) -> Chain {
        Chain {
            universe: self.universe,
            members: self.members.iter().map(|p| p.apply(g)).collect(),
        }
    }

    /// Member keys in increasing order; chains compare by this.
    pub fn key(&self) -> Vec<u64> {
        self.members.iter().map(|p| p.key()).collect()
    }

    /// Least image under the dihedral group (acting on all members at once).
    pub fn canonical_form(&self) -> Chain {
        self.universe
            .symmetries()
            .into_iter()
            .map(|g| self.apply(g))
            .min()
            .expect("group is nonempty")
    }

    pub fn orbit(&self) -> Vec<Chain> {
        let mut out: Vec<Chain> = self
            .universe
            .symmetries()
            .into_iter()
            .map(|g| self.apply(g))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl PartialOrd for Chain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Chain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str("<")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain(n={}, \"{}\")", self.universe.n(), self)
    }
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Exactly one block, and that block a cyclic interval.
pub fn is_universal(p: &Partition) -> bool {
    let u = p.universe();
    let mut blocks = p.blocks();
    match (blocks.next(), blocks.next()) {
        (Some(b), None) => u.is_cyclic_interval(b.mask()),
        _ => false,
    }
}

/// Four distinct members `m1..m4` with `m1 ∪ m3` crossing `m2 ∪ m4`.
fn four_member_crossing(members: &[Mask]) -> Option<[Mask; 4]> {
    let len = members.len();
    if len < 4 {
        return None;
    }
    for a in 0..len {
        for b in a + 1..len {
            for c in b + 1..len {
                for d in c + 1..len {
                    let [w, x, y, z] = [members[a], members[b], members[c], members[d]];
                    // the three ways to split four members into two pairs
                    for (p, q, r, s) in [(w, x, y, z), (w, y, x, z), (w, z, x, y)] {
                        if masks_cross(p | q, r | s) {
                            return Some([p, r, q, s]);
                        }
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum ConditionThreeClause {
    /// Four members of the top partition arranged to cross.
    AboveTop { members: [Mask; 4] },
    /// Four members of member `lower` (1-based) inside one block of the next.
    BetweenMembers {
        lower: usize,
        block: Mask,
        members: [Mask; 4],
    },
    /// The bottom member has a part of size at least four.
    BelowBottom { block: Mask },
}

impl ConditionThreeClause {
    pub fn label(&self) -> &'static str {
        match self {
            ConditionThreeClause::AboveTop { .. } => "i",
            ConditionThreeClause::BetweenMembers { .. } => "ii",
            ConditionThreeClause::BelowBottom { .. } => "iii",
        }
    }
}

/// A crossing pair found by exhaustive search. `gap` is 0 below the
/// bottom member, `k` between members `k` and `k+1`, `len` above the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionThreeWitness {
    pub gap: usize,
    pub plus: Partition,
    pub minus: Partition,
}

/// The families `i ↦ F_i` and `i ↦ F_i′` of a chain.
///
/// `F_i` is the smallest part of size ≥ 2 containing `i` among the chain's
/// members (such parts are nested), or the whole ground set when `i` is a
/// singleton in every member. `F_i′ = F_i ∩ {i−1, i+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallestBlockFamily {
    universe: Universe,
    blocks: [Mask; MAX_N],
    primes: [Mask; MAX_N],
}

impl SmallestBlockFamily {
    pub fn of(chain: &Chain) -> Self {
        Self::from_members(chain.universe, &chain.members)
    }

    pub(crate) fn from_members(u: Universe, members: &[Partition]) -> Self {
        let mut blocks = [0; MAX_N];
        let mut primes = [0; MAX_N];
        for i in u.elements() {
            let smallest = members
                .iter()
                .map(|p| p.part_of(i))
                .find(|b| b.len() >= 2)
                .map_or(u.full(), |b| b.mask());
            blocks[i as usize - 1] = smallest;
            primes[i as usize - 1] = smallest & u.neighbours(i);
        }
        SmallestBlockFamily {
            universe: u,
            blocks,
            primes,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// `F_i` for `i` in `1..=n`.
    #[inline]
    pub fn block(&self, i: u8) -> Mask {
        self.blocks[i as usize - 1]
    }

    /// `F_i′`.
    #[inline]
    pub fn prime(&self, i: u8) -> Mask {
        self.primes[i as usize - 1]
    }

    /// `(F_1′, …, F_n′)`.
    pub fn prime_signature(&self) -> Vec<Mask> {
        self.primes[..self.universe.n() as usize].to_vec()
    }

    pub fn blocks(&self) -> &[Mask] {
        &self.blocks[..self.universe.n() as usize]
    }

    /// Family of the chain transformed by `g`: `F_{g(i)} = g(F_i)`.
    pub fn apply(&self, g: Symmetry) -> Self {
        let u = self.universe;
        let mut out = *self;
        for i in u.elements() {
            let j = g.apply(i) as usize - 1;
            out.blocks[j] = g.apply_mask(self.block(i));
            out.primes[j] = g.apply_mask(self.prime(i));
        }
        out
    }

    /// True when `F_i′ ∩ other_i′ = ∅` for every `i`.
    pub fn primes_disjoint_from(&self, other: &[Mask]) -> bool {
        self.primes[..self.universe.n() as usize]
            .iter()
            .zip(other)
            .all(|(a, b)| a & b == 0)
    }
}

impl fmt::Debug for SmallestBlockFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for i in self.universe.elements() {
            list.entry(
                &i,
                &format!("{} / {}", mask_set(self.block(i)), mask_set(self.prime(i))),
            );
        }
        list.finish()
    }
}

/// Canonical dihedral form of a prime signature `(F_1′, …, F_n′)`.
pub fn canonical_prime_signature(u: Universe, primes: &[Mask]) -> Vec<Mask> {
    u.symmetries()
        .into_iter()
        .map(|g| {
            let mut out = vec![0; primes.len()];
            for i in u.elements() {
                out[g.apply(i) as usize - 1] = g.apply_mask(primes[i as usize - 1]);
            }
            out
        })
        .min()
        .expect("group is nonempty")
}

/// Ranks of a chain's members, with coranks the complement in `1..=n-2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankSet {
    n: u8,
    ranks: u16,
}

impl RankSet {
    pub fn from_ranks(u: Universe, ranks: impl IntoIterator<Item = usize>) -> Self {
        let mask = ranks.into_iter().fold(0u16, |m, r| m | (1 << r));
        RankSet {
            n: u.n(),
            ranks: mask & Self::span(u.n()),
        }
    }

    fn span(n: u8) -> u16 {
        // bits 1..=n-2
        ((1u16 << (n - 1)) - 1) & !1
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.n as usize).expect("valid n")
    }

    pub fn ranks(&self) -> Vec<usize> {
        (1..=self.n as usize - 2)
            .filter(|r| self.ranks & (1 << r) != 0)
            .collect()
    }

    pub fn coranks(&self) -> Vec<usize> {
        (1..=self.n as usize - 2)
            .filter(|r| self.ranks & (1 << r) == 0)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.ranks.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.ranks == 0
    }

    pub fn contains(&self, r: usize) -> bool {
        self.ranks & (1 << r) != 0
    }

    pub fn has_consecutive_coranks(&self) -> bool {
        let co = !self.ranks & Self::span(self.n);
        co & (co >> 1) != 0
    }

    /// Image under `r ↦ n − 1 − r`, the rank sets of dual chains.
    pub fn dual(&self) -> RankSet {
        let n = self.n as usize;
        RankSet::from_ranks(self.universe(), self.ranks().into_iter().map(|r| n - 1 - r))
    }

    /// Order used to pick duality representatives: sorted rank lists compared
    /// lexicographically.
    pub fn lex_cmp(&self, other: &RankSet) -> Ordering {
        self.ranks().cmp(&other.ranks())
    }
}

impl fmt::Display for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.ranks().iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

impl fmt::Debug for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RankSet{self}")
    }
}

/// Mask of elements `i + 1, …, i + k` (cyclic), or `i − k, …, i − 1`
/// when `forward` is false; `i` itself is never included.
pub fn cyclic_run(u: Universe, i: u8, k: u8, forward: bool) -> Mask {
    let sign = if forward { 1 } else { -1 };
    (1..=k as i32).fold(0, |m, d| m | bit(u.offset(i, sign * d))) & !bit(i)
}

/// Elements of a mask as a `Vec`, for reports.
pub fn mask_elements(mask: Mask) -> Vec<u8> {
    elements(mask).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u7() -> Universe {
        Universe::new(7).unwrap()
    }

    fn chain(text: &str) -> Chain {
        Chain::parse(u7(), text).unwrap()
    }

    fn set(es: &[u8]) -> Mask {
        es.iter().fold(0, |m, &e| m | bit(e))
    }

    #[test]
    fn parse_and_display() {
        for text in ["12<12346", "13", "23<23,45<123456"] {
            assert_eq!(chain(text).to_string(), text);
        }
        let err = Chain::parse(u7(), "13<24").unwrap_err();
        assert!(err.to_string().contains("incomparable"), "{err}");
        assert!(matches!(
            Chain::parse(u7(), "123<12"),
            Err(NcpError::NotAChain(_))
        ));
        assert!(matches!(
            Chain::parse(u7(), "13<"),
            Err(NcpError::Parse { position: 3, .. })
        ));
        assert!(matches!(
            Chain::parse(u7(), "13,24"),
            Err(NcpError::Crossing(_))
        ));
        // the maximum is not a member of the proper part
        assert!(Chain::parse(u7(), "1234567").is_err());
        assert!(Chain::parse(u7(), "").is_err());
    }

    #[test]
    fn smallest_blocks_examples() {
        let f = chain("12<12346").smallest_blocks();
        assert_eq!(f.block(3), set(&[1, 2, 3, 4, 6]));
        assert_eq!(f.block(1), set(&[1, 2]));
        assert_eq!(f.block(5), u7().full());

        let f = chain("13").smallest_blocks();
        assert_eq!(f.prime(1), 0);
        assert_eq!(f.prime(2), set(&[1, 3]));
        assert_eq!(f.prime(4), set(&[3, 5]));

        let f = chain("12,46").smallest_blocks();
        assert_eq!(f.block(4), set(&[4, 6]));
        assert_eq!(f.block(6), set(&[4, 6]));
        assert_eq!(f.prime(4), 0);
        assert_eq!(f.prime(6), 0);
        assert_eq!(f.prime(3), set(&[2, 4]));
    }

    #[test]
    fn rank_sets() {
        let r = chain("13<123,45").rank_set();
        assert_eq!(r.ranks(), vec![1, 3]);
        assert_eq!(r.coranks(), vec![2, 4, 5]);
        let r = chain("13").rank_set();
        assert_eq!(r.coranks(), vec![2, 3, 4, 5]);
        let r = chain("12<123<1234<12345<123456").rank_set();
        assert!(r.coranks().is_empty());
        assert_eq!(r.dual().ranks(), vec![1, 2, 3, 4, 5]);
        assert_eq!(chain("13<1234").rank_set().dual().ranks(), vec![3, 5]);
    }

    #[test]
    fn condition_one() {
        let u = u7();
        assert!(RankSet::from_ranks(u, [1, 4]).has_consecutive_coranks());
        assert!(!RankSet::from_ranks(u, [2, 4]).has_consecutive_coranks());
        assert!(!RankSet::from_ranks(u, [1, 2, 3, 4, 5]).has_consecutive_coranks());
        // coranks {1, 5} are not consecutive: no wraparound
        assert!(!RankSet::from_ranks(u, [2, 3, 4]).has_consecutive_coranks());
    }

    #[test]
    fn condition_two() {
        assert!(!chain("12").cond_ii());
        assert!(chain("13").cond_ii());
        assert!(chain("12<12,45").cond_ii());
        assert!(!chain("71").cond_ii());
        assert!(!chain("12<712").cond_ii());
    }

    #[test]
    fn condition_three_criterion() {
        assert_eq!(chain("13").cond_iii_clause().unwrap().label(), "i");
        assert!(chain("123456").cond_iii_criterion());
        assert!(chain("12<123").cond_iii_criterion());
        assert!(!chain("123,456").cond_iii_criterion());
        assert_eq!(chain("123456").cond_iii_clause().unwrap().label(), "iii");
    }

    #[test]
    fn condition_three_bruteforce() {
        let w = chain("13").cond_iii_witness().unwrap().unwrap();
        assert_eq!(w.gap, 1);
        assert!(w.plus.crosses(&w.minus).unwrap());
        assert!(chain("12<123").cond_iii_bruteforce().unwrap());
        assert!(!chain("123,456").cond_iii_bruteforce().unwrap());
        let u8_ = Universe::new(8).unwrap();
        assert!(Chain::parse(u8_, "13")
            .unwrap()
            .cond_iii_bruteforce()
            .is_err());
    }

    #[test]
    fn dual_chains() {
        let f = chain("13");
        assert_eq!(f.dual(), chain("12,34567"));
        let f = chain("12<12346");
        let d = f.dual();
        assert_eq!(d.rank_set(), f.rank_set().dual());
        let rot = Symmetry::rotation(u7(), -1);
        assert_eq!(d.dual(), f.apply(rot));
    }

    #[test]
    fn runs() {
        let u = u7();
        assert_eq!(cyclic_run(u, 3, 4, false), set(&[6, 7, 1, 2]));
        assert_eq!(cyclic_run(u, 6, 3, true), set(&[7, 1, 2]));
    }

    #[test]
    fn family_transforms_with_chain() {
        let f = chain("12<12346");
        for g in u7().symmetries() {
            assert_eq!(f.apply(g).smallest_blocks(), f.smallest_blocks().apply(g));
        }
    }
}
