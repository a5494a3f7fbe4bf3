//! The transcribed candidate table for n = 7: the duality-reduced rank sets,
//! the enumerated chains grouped by rank set, and the case table with the
//! pattern hits each case relies on.

use serde::Deserialize;

use crate::chain::{Chain, RankSet};
use crate::error::{NcpError, Result};
use crate::patterns::PatternHit;
use crate::universe::Universe;

const EMBEDDED: &str = include_str!("../data/theorem5.toml");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFixtures {
    version: u32,
    n: usize,
    rank_sets: Vec<Vec<usize>>,
    enumeration: Vec<RawItem>,
    case: Vec<RawCase>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawItem {
    item: String,
    ranks: Vec<usize>,
    chains: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    id: u8,
    chains: Vec<String>,
    hits: Vec<String>,
    forced: bool,
}

#[derive(Clone, Debug)]
pub struct EnumerationItem {
    pub label: String,
    pub rank_set: RankSet,
    pub chains: Vec<Chain>,
}

#[derive(Clone, Debug)]
pub struct CaseFixture {
    pub case_id: u8,
    pub chains: Vec<Chain>,
    pub claimed_hits: Vec<PatternHit>,
    /// The case argues through forced two-element blocks.
    pub expects_forced_argument: bool,
}

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub version: u32,
    pub universe: Universe,
    pub rank_sets: Vec<RankSet>,
    pub items: Vec<EnumerationItem>,
    pub cases: Vec<CaseFixture>,
}

impl Fixtures {
    /// The table shipped with the crate.
    pub fn embedded() -> Result<Self> {
        Self::parse(EMBEDDED)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFixtures =
            toml::from_str(text).map_err(|e| NcpError::Fixture(e.to_string()))?;
        let u = Universe::new(raw.n)?;
        let fail = |what: String| NcpError::Fixture(what);
        let parse_chain =
            |text: &str| Chain::parse(u, text).map_err(|e| fail(format!("chain {text:?}: {e}")));
        let check_ranks = |ranks: &[usize]| {
            if ranks.iter().any(|&r| r == 0 || r > raw.n - 2) {
                Err(fail(format!("rank set {ranks:?} out of range")))
            } else {
                Ok(RankSet::from_ranks(u, ranks.iter().copied()))
            }
        };
        let rank_sets = raw
            .rank_sets
            .iter()
            .map(|r| check_ranks(r))
            .collect::<Result<Vec<_>>>()?;
        let mut items = Vec::new();
        for item in &raw.enumeration {
            let rank_set = check_ranks(&item.ranks)?;
            let chains = item
                .chains
                .iter()
                .map(|c| parse_chain(c))
                .collect::<Result<Vec<_>>>()?;
            if let Some(bad) = chains.iter().find(|c| c.rank_set() != rank_set) {
                return Err(fail(format!("{bad} listed under rank set {rank_set}")));
            }
            items.push(EnumerationItem {
                label: item.item.clone(),
                rank_set,
                chains,
            });
        }
        let mut cases = Vec::new();
        for case in &raw.case {
            let chains = case
                .chains
                .iter()
                .map(|c| parse_chain(c))
                .collect::<Result<Vec<_>>>()?;
            let claimed_hits = case
                .hits
                .iter()
                .map(|h| h.parse::<PatternHit>())
                .collect::<Result<Vec<_>>>()?;
            if let Some(h) = claimed_hits.iter().find(|h| h.i == 0 || h.i > u.n()) {
                return Err(fail(format!(
                    "case {}: hit {h} has index out of range",
                    case.id
                )));
            }
            cases.push(CaseFixture {
                case_id: case.id,
                chains,
                claimed_hits,
                expects_forced_argument: case.forced,
            });
        }
        let fixtures = Fixtures {
            version: raw.version,
            universe: u,
            rank_sets,
            items,
            cases,
        };
        for case in &fixtures.cases {
            for c in &case.chains {
                if !fixtures.chains().any(|e| e == c) {
                    return Err(fail(format!(
                        "case {} chain {c} is not enumerated",
                        case.case_id
                    )));
                }
            }
        }
        Ok(fixtures)
    }

    /// Enumerated chains in table order.
    pub fn chains(&self) -> impl Iterator<Item = &Chain> {
        self.items.iter().flat_map(|i| i.chains.iter())
    }

    /// The case covering `chain`, compared literally.
    pub fn case_of(&self, chain: &Chain) -> Option<&CaseFixture> {
        self.cases.iter().find(|c| c.chains.contains(chain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_loads() {
        let f = Fixtures::embedded().unwrap();
        assert_eq!(f.rank_sets.len(), 10);
        assert_eq!(f.items.len(), 10);
        assert_eq!(f.chains().count(), 58);
        assert_eq!(f.cases.len(), 39);
        let forced: Vec<u8> = f
            .cases
            .iter()
            .filter(|c| c.expects_forced_argument)
            .map(|c| c.case_id)
            .collect();
        assert_eq!(forced, vec![5, 7, 12, 15, 16, 17, 19, 38]);
        for c in f.chains() {
            assert!(f.case_of(c).is_some(), "{c} has no case");
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(Fixtures::parse("n = 7").is_err());
        let bad = EMBEDDED.replacen("\"13\", \"14\"]", "\"13\", \"1<3\"]", 1);
        assert!(Fixtures::parse(&bad).is_err());
        let bad = EMBEDDED.replacen("\"(3,+,6)(1)\"", "\"(3,+,6)(9)\"", 1);
        assert!(Fixtures::parse(&bad).is_err());
    }
}
