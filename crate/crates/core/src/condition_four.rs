//! Condition IV: a maximal chain `C` with `F_i′ ∩ C_i′ = ∅` for every `i`.
//!
//! Decided exactly by depth-first search over maximal chains with pruning,
//! and by a precomputed table of all maximal chains' smallest blocks. Also
//! hosts the exclusion table derived from pattern hits.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::certificate::{pattern_refute, RefutationCertificate};
use crate::chain::{Chain, SmallestBlockFamily};
use crate::enumeration::{cover_moves, MaximalChains};
use crate::error::{NcpError, Result};
use crate::partition::{Block, Partition};
use crate::patterns::{detect_in_family, InclusionConvention, PatternHit};
use crate::universe::{bit, elements, Mask, Universe, MAX_N};

/// Outcome of deciding condition IV.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ConditionFour {
    /// A maximal chain whose neighbour sets avoid the chain's.
    Witness { witness: Chain },
    /// No maximal chain qualifies.
    Refuted {
        /// Search nodes expanded before exhaustion.
        nodes: usize,
        certificate: Option<RefutationCertificate>,
    },
}

impl ConditionFour {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionFour::Witness { .. })
    }

    pub fn witness(&self) -> Option<&Chain> {
        match self {
            ConditionFour::Witness { witness } => Some(witness),
            ConditionFour::Refuted { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&RefutationCertificate> {
        match self {
            ConditionFour::Refuted { certificate, .. } => certificate.as_ref(),
            ConditionFour::Witness { .. } => None,
        }
    }
}

/// Exhaustive search, returning the first witness in enumeration order.
pub fn cond_iv(chain: &Chain) -> Result<ConditionFour> {
    cond_iv_for_primes(chain.universe(), &chain.smallest_blocks().prime_signature())
}

/// As [`cond_iv`], and attach a propagation certificate when refuted and
/// one can be found.
pub fn cond_iv_certified(chain: &Chain) -> Result<ConditionFour> {
    let mut outcome = cond_iv(chain)?;
    if let ConditionFour::Refuted { certificate, .. } = &mut outcome {
        *certificate = pattern_refute(chain, InclusionConvention::NonStrict);
    }
    Ok(outcome)
}

/// Condition IV for an arbitrary prime signature `(F_1′, …, F_n′)`.
pub fn cond_iv_for_primes(u: Universe, primes: &[Mask]) -> Result<ConditionFour> {
    if u.n() > 9 {
        return Err(NcpError::TooLarge {
            operation: "condition IV search",
            n: u.n(),
            max: 9,
        });
    }
    let mut search = Search {
        primes,
        target: (u.n() as usize).saturating_sub(2),
        members: Vec::with_capacity(u.n() as usize),
        nodes: 0,
    };
    if search.descend(Partition::bottom(u)) {
        Ok(ConditionFour::Witness {
            witness: Chain::from_sorted(u, search.members),
        })
    } else {
        Ok(ConditionFour::Refuted {
            nodes: search.nodes,
            certificate: None,
        })
    }
}

struct Search<'a> {
    primes: &'a [Mask],
    target: usize,
    members: Vec<Partition>,
    nodes: usize,
}

impl Search<'_> {
    fn descend(&mut self, p: Partition) -> bool {
        self.nodes += 1;
        if self.members.len() == self.target {
            // elements never merged have C_j = everything, so C_j′ = {j−1, j+1}
            return p
                .parts()
                .iter()
                .filter(|b| b.is_singleton())
                .all(|b| self.primes[Block::min(*b) as usize - 1] == 0);
        }
        for mv in cover_moves(&p) {
            let merged = mv.merged();
            // C_j is fixed the first time j leaves its singleton
            let fresh = [mv.left, mv.right]
                .into_iter()
                .filter(|m| m.count_ones() == 1)
                .fold(0, |acc, m| acc | m);
            let blocked = elements(fresh).any(|j| merged & self.primes[j as usize - 1] != 0);
            if blocked {
                continue;
            }
            self.members.push(mv.result);
            if self.descend(mv.result) {
                return true;
            }
            self.members.pop();
        }
        false
    }
}

/// Whether `witness` is a maximal chain satisfying condition IV for `chain`.
pub fn verify_witness(chain: &Chain, witness: &Chain) -> bool {
    witness.universe() == chain.universe()
        && witness.is_maximal()
        && chain
            .smallest_blocks()
            .primes_disjoint_from(&witness.smallest_blocks().prime_signature())
}

/// Every maximal chain of NC(n) reduced to its tuple `(C_1, …, C_n)`,
/// deduplicated, with the position of the first chain producing it.
pub struct MaximalChainIndex {
    universe: Universe,
    total: usize,
    tuples: Vec<BlockTuple>,
}

#[derive(Clone, Copy, Debug)]
pub struct BlockTuple {
    /// Position in [`MaximalChains`] order of the first chain with these blocks.
    pub first: usize,
    pub blocks: [Mask; MAX_N],
    pub primes: [Mask; MAX_N],
}

static INDEXES: [OnceLock<MaximalChainIndex>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];

impl MaximalChainIndex {
    /// Shared index for `u`, built on first use (n ≤ 8).
    pub fn get(u: Universe) -> Result<&'static MaximalChainIndex> {
        if u.n() > 8 {
            return Err(NcpError::TooLarge {
                operation: "maximal chain index",
                n: u.n(),
                max: 8,
            });
        }
        Ok(INDEXES[u.n() as usize].get_or_init(|| Self::build(u)))
    }

    fn build(u: Universe) -> Self {
        let mut seen: BTreeMap<[Mask; MAX_N], usize> = BTreeMap::new();
        let mut tuples = Vec::new();
        let mut total = 0;
        for (pos, c) in MaximalChains::new(u).enumerate() {
            total += 1;
            let fam = c.smallest_blocks();
            let mut blocks = [0; MAX_N];
            blocks[..u.n() as usize].copy_from_slice(fam.blocks());
            seen.entry(blocks).or_insert_with(|| {
                let mut primes = [0; MAX_N];
                for i in u.elements() {
                    primes[i as usize - 1] = fam.prime(i);
                }
                tuples.push(BlockTuple {
                    first: pos,
                    blocks,
                    primes,
                });
                pos
            });
        }
        MaximalChainIndex {
            universe: u,
            total,
            tuples,
        }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Number of maximal chains scanned.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn tuples(&self) -> &[BlockTuple] {
        &self.tuples
    }

    /// Block tuples compatible with a prime signature.
    pub fn compatible<'a>(
        &'a self,
        primes: &'a [Mask],
    ) -> impl Iterator<Item = &'a BlockTuple> + 'a {
        self.tuples
            .iter()
            .filter(move |t| primes.iter().zip(&t.primes).all(|(f, c)| f & c == 0))
    }

    /// Position of the first compatible maximal chain.
    pub fn first_witness_position(&self, primes: &[Mask]) -> Option<usize> {
        self.compatible(primes).map(|t| t.first).min()
    }

    /// Condition IV decided from the table; the witness is regenerated by
    /// position.
    pub fn decide(&self, primes: &[Mask]) -> ConditionFour {
        match self.first_witness_position(primes) {
            Some(pos) => ConditionFour::Witness {
                witness: MaximalChains::new(self.universe)
                    .nth(pos)
                    .expect("position came from the same enumeration"),
            },
            None => ConditionFour::Refuted {
                nodes: self.total,
                certificate: None,
            },
        }
    }

    pub fn holds(&self, primes: &[Mask]) -> bool {
        self.compatible(primes).next().is_some()
    }

    /// For each `i`, the union of `C_i` over compatible maximal chains.
    pub fn companion_union(&self, primes: &[Mask]) -> [Mask; MAX_N] {
        let mut out = [0; MAX_N];
        for t in self.compatible(primes) {
            for (o, b) in out.iter_mut().zip(&t.blocks) {
                *o |= b;
            }
        }
        out
    }
}

/// Per-index companions ruled out for `C_i`, with their sources.
#[derive(Clone, Debug)]
pub struct ExclusionTable {
    universe: Universe,
    excluded: [Mask; MAX_N],
    sources: Vec<Vec<ExclusionSource>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExclusionSource {
    Pattern(PatternHit),
    /// `F_i′` itself.
    Neighbours,
}

impl ExclusionTable {
    pub fn excluded(&self, i: u8) -> Mask {
        self.excluded[i as usize - 1]
    }

    /// Elements other than `i` that `C_i` may still contain.
    pub fn allowed_companions(&self, i: u8) -> Mask {
        self.universe.full() & !bit(i) & !self.excluded(i)
    }

    pub fn sources(&self, i: u8) -> &[ExclusionSource] {
        &self.sources[i as usize - 1]
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }
}

/// Union of the ranges ruled out by every pattern hit, plus `F_i′` at `i`.
pub fn lemma3_exclusions(chain: &Chain, convention: InclusionConvention) -> ExclusionTable {
    exclusions_for_family(&chain.smallest_blocks(), convention)
}

pub fn exclusions_for_family(
    family: &SmallestBlockFamily,
    convention: InclusionConvention,
) -> ExclusionTable {
    let u = family.universe();
    let mut excluded = [0; MAX_N];
    let mut sources = vec![Vec::new(); u.n() as usize];
    for hit in detect_in_family(family, convention) {
        excluded[hit.i as usize - 1] |= hit.excluded(u);
        sources[hit.i as usize - 1].push(ExclusionSource::Pattern(hit));
    }
    for i in u.elements() {
        if family.prime(i) != 0 {
            excluded[i as usize - 1] |= family.prime(i);
            sources[i as usize - 1].push(ExclusionSource::Neighbours);
        }
    }
    ExclusionTable {
        universe: u,
        excluded,
        sources,
    }
}

/// First index whose exclusions leave no companion for `C_i`.
pub fn corollary4(chain: &Chain) -> Option<u8> {
    let table = lemma3_exclusions(chain, InclusionConvention::NonStrict);
    chain
        .universe()
        .elements()
        .find(|&i| table.allowed_companions(i) == 0)
}

/// The pair of opposite hits at `i` with the largest `k + l`, if any.
pub fn strongest_opposite_pair(chain: &Chain, i: u8) -> Option<(PatternHit, PatternHit)> {
    use crate::patterns::{detect_patterns, Sign};
    let hits = detect_patterns(chain, InclusionConvention::NonStrict);
    let best = |sign: Sign| {
        hits.iter()
            .filter(|h| h.i == i && h.sign == sign)
            .max_by_key(|h| (h.k, std::cmp::Reverse(h.variant)))
            .copied()
    };
    Some((best(Sign::Plus)?, best(Sign::Minus)?))
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

    #[test]
    fn positive_control_has_witness() {
        let f = chain("24<246");
        let outcome = cond_iv(&f).unwrap();
        let w = outcome.witness().expect("witness");
        assert!(verify_witness(&f, w));
        assert!(verify_witness(&f, &chain("13<13,57<13,567<13,4567<134567")));
    }

    #[test]
    fn documented_refutations() {
        for text in ["14", "24", "13", "12,46"] {
            assert!(!cond_iv(&chain(text)).unwrap().holds(), "{text}");
        }
    }

    #[test]
    fn table_agrees_with_search() {
        let index = MaximalChainIndex::get(u7()).unwrap();
        assert_eq!(index.total(), 16807);
        for text in ["24<246", "14", "12,46", "1", "135", "12<1234", "2<25"] {
            let Ok(f) = Chain::parse(u7(), text) else {
                continue;
            };
            let primes = f.smallest_blocks().prime_signature();
            let a = cond_iv(&f).unwrap();
            let b = index.decide(&primes);
            assert_eq!(a.witness(), b.witness(), "{text}");
        }
    }

    #[test]
    fn exclusion_examples() {
        let t = lemma3_exclusions(&chain("12,46"), InclusionConvention::NonStrict);
        assert_eq!(t.allowed_companions(3), bit(5));
        let t = lemma3_exclusions(&chain("13"), InclusionConvention::NonStrict);
        assert_eq!(t.allowed_companions(6), 0);
        let t = lemma3_exclusions(&chain("24<246"), InclusionConvention::NonStrict);
        assert!(u7().elements().all(|i| t.allowed_companions(i) != 0));
    }

    #[test]
    fn corollary_four_examples() {
        assert!(corollary4(&chain("13")).is_some());
        let t = lemma3_exclusions(&chain("13"), InclusionConvention::NonStrict);
        assert_eq!(t.allowed_companions(6), 0);
        assert_eq!(corollary4(&chain("12<12346")), Some(3));
        assert_eq!(corollary4(&chain("24<246")), None);
        let (plus, minus) = strongest_opposite_pair(&chain("13"), 6).unwrap();
        assert!(plus.k + minus.k >= 6);
    }
}
