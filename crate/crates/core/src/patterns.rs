//! Inclusion patterns `(k, ±, i)(m)` among the smallest blocks around an
//! index, and the companion exclusions they imply for maximal chains.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{cyclic_run, Chain, SmallestBlockFamily};
use crate::error::NcpError;
use crate::universe::{Mask, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn step(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Relation between consecutive terms of a clause, read left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// left ⊇ right
    Contains,
    /// left ⊆ right
    ContainedIn,
}

use Relation::{ContainedIn as Sub, Contains as Sup, Equal as Eq_};

/// Clauses for `k = 1..=4`, indexed `[k - 1][m - 1]`. Each clause relates
/// `F_i, F_{i±1}, F_{i±2}, …` pairwise in sequence.
pub const CLAUSES: [&[&[Relation]]; 4] = [
    &[&[Sup]],
    &[&[Eq_], &[Sup, Sup]],
    &[&[Eq_, Sup], &[Eq_, Sub], &[Sup, Eq_], &[Sup, Sup, Sup]],
    &[
        &[Eq_, Eq_],
        &[Eq_, Sup, Sup],
        &[Eq_, Sub, Sup],
        &[Eq_, Sub, Sub],
        &[Sup, Eq_, Sup],
        &[Sup, Eq_, Sub],
        &[Sup, Sup, Eq_],
        &[Sup, Sup, Sup, Sup],
    ],
];

/// How `⊇`/`⊆` in the clauses are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InclusionConvention {
    #[default]
    NonStrict,
    /// Proper inclusion; equality is still equality.
    Strict,
}

/// One satisfied clause: `F` satisfies `(k, sign, i)(variant)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternHit {
    pub k: u8,
    pub sign: Sign,
    pub i: u8,
    pub variant: u8,
}

impl PatternHit {
    pub fn clause(&self) -> &'static [Relation] {
        CLAUSES[self.k as usize - 1][self.variant as usize - 1]
    }

    /// Companions this hit rules out for `C_i`: `i+1..=i+k` or `i−k..=i−1`.
    pub fn excluded(&self, u: Universe) -> Mask {
        cyclic_run(u, self.i, self.k, self.sign == Sign::Plus)
    }

    /// Whether the clause holds for `family`.
    pub fn holds(&self, family: &SmallestBlockFamily, convention: InclusionConvention) -> bool {
        clause_holds(family, self.i, self.sign, self.clause(), convention)
    }
}

impl fmt::Display for PatternHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})({})",
            self.k,
            self.sign.symbol(),
            self.i,
            self.variant
        )
    }
}

impl FromStr for PatternHit {
    type Err = NcpError;

    /// Accepts `(k,±,i)(m)` with `-` or `−` for minus.
    fn from_str(s: &str) -> Result<Self, NcpError> {
        let bad = || NcpError::BadPattern(s.to_string());
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let cleaned = cleaned.replace('−', "-");
        let body = cleaned.strip_prefix('(').ok_or_else(bad)?;
        let (triple, rest) = body.split_once(")(").ok_or_else(bad)?;
        let variant: u8 = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let fields: Vec<&str> = triple.split(',').collect();
        let [k, sign, i] = fields.as_slice() else {
            return Err(bad());
        };
        let k: u8 = k.parse().map_err(|_| bad())?;
        let i: u8 = i.parse().map_err(|_| bad())?;
        let sign = match *sign {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return Err(bad()),
        };
        if !(1..=4).contains(&k) || variant == 0 || variant as usize > CLAUSES[k as usize - 1].len()
        {
            return Err(bad());
        }
        Ok(PatternHit {
            k,
            sign,
            i,
            variant,
        })
    }
}

impl Serialize for PatternHit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PatternHit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn relation_holds(left: Mask, right: Mask, rel: Relation, convention: InclusionConvention) -> bool {
    let strict = convention == InclusionConvention::Strict;
    match rel {
        Relation::Equal => left == right,
        Relation::Contains => right & !left == 0 && !(strict && left == right),
        Relation::ContainedIn => left & !right == 0 && !(strict && left == right),
    }
}

fn clause_holds(
    family: &SmallestBlockFamily,
    i: u8,
    sign: Sign,
    clause: &[Relation],
    convention: InclusionConvention,
) -> bool {
    let u = family.universe();
    clause.iter().enumerate().all(|(step, &rel)| {
        let left = family.block(u.offset(i, sign.step() * step as i32));
        let right = family.block(u.offset(i, sign.step() * (step as i32 + 1)));
        relation_holds(left, right, rel, convention)
    })
}

/// All hits over `k = 1..=4`, both signs, every base index and every clause,
/// sorted.
pub fn detect_patterns(chain: &Chain, convention: InclusionConvention) -> Vec<PatternHit> {
    detect_in_family(&chain.smallest_blocks(), convention)
}

pub fn detect_in_family(
    family: &SmallestBlockFamily,
    convention: InclusionConvention,
) -> Vec<PatternHit> {
    let u = family.universe();
    let mut hits = Vec::new();
    for i in u.elements() {
        for sign in [Sign::Plus, Sign::Minus] {
            for (k0, clauses) in CLAUSES.iter().enumerate() {
                for (m0, clause) in clauses.iter().enumerate() {
                    if clause_holds(family, i, sign, clause, convention) {
                        hits.push(PatternHit {
                            k: k0 as u8 + 1,
                            sign,
                            i,
                            variant: m0 as u8 + 1,
                        });
                    }
                }
            }
        }
    }
    hits.sort();
    hits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hits(text: &str) -> Vec<PatternHit> {
        let u = Universe::new(7).unwrap();
        detect_patterns(
            &Chain::parse(u, text).unwrap(),
            InclusionConvention::NonStrict,
        )
    }

    fn h(s: &str) -> PatternHit {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let p = h("(4,−,3)(6)");
        assert_eq!(p.to_string(), "(4,-,3)(6)");
        assert_eq!(p.k, 4);
        assert_eq!(p.sign, Sign::Minus);
        assert!("(5,+,1)(1)".parse::<PatternHit>().is_err());
        assert!("(2,+,1)(3)".parse::<PatternHit>().is_err());
        assert!("(2,*,1)(1)".parse::<PatternHit>().is_err());
    }

    #[test]
    fn clause_table_shape() {
        let sizes: Vec<usize> = CLAUSES.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8]);
        // a clause relating j+1 terms reaches at most index i ± k
        for (k0, clauses) in CLAUSES.iter().enumerate() {
            for clause in clauses.iter() {
                assert!(clause.len() <= k0 + 1);
            }
        }
    }

    #[test]
    fn documented_hits() {
        let got = hits("12,46");
        for want in ["(1,+,3)(1)", "(4,-,3)(6)", "(4,+,7)(6)", "(1,-,7)(1)"] {
            assert!(got.contains(&h(want)), "{want} missing from {got:?}");
        }
        let got = hits("12<12346");
        assert!(got.contains(&h("(2,+,3)(1)")));
        assert!(got.contains(&h("(4,-,3)(6)")));
        let got = hits("24<123456");
        assert!(got.contains(&h("(2,+,7)(2)")));
        assert!(got.contains(&h("(4,-,7)(5)")));
    }

    #[test]
    fn strict_reading_loses_equal_full_sets() {
        let u = Universe::new(7).unwrap();
        let f = Chain::parse(u, "13").unwrap().smallest_blocks();
        assert!(h("(3,-,6)(1)").holds(&f, InclusionConvention::NonStrict));
        assert!(!h("(3,-,6)(1)").holds(&f, InclusionConvention::Strict));
    }

    #[test]
    fn exclusion_ranges() {
        let u = Universe::new(7).unwrap();
        assert_eq!(h("(4,-,3)(6)").excluded(u), 0b110_0011);
        assert_eq!(h("(1,+,3)(1)").excluded(u), 0b000_1000);
    }
}
