//! Set partitions of `{1, …, n}` stored as block bitmasks, with the crossing
//! relation, refinement order, Kreweras duality and partition-lattice
//! operations.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcpError, Result};
use crate::universe::{bit, elements, mask_digits, min_element, Mask, Symmetry, Universe, MAX_N};

/// A nonempty subset of the ground set, one part of a partition.
///
/// Parts of size one are singletons; parts with two or more elements are
/// what the notation calls blocks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Mask);

impl Block {
    pub fn new(mask: Mask) -> Self {
        Block(mask)
    }

    pub fn from_elements(elems: &[u8]) -> Self {
        Block(elems.iter().fold(0, |m, &e| m | bit(e)))
    }

    #[inline]
    pub fn mask(self) -> Mask {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_singleton(self) -> bool {
        self.len() == 1
    }

    #[inline]
    pub fn contains(self, e: u8) -> bool {
        self.0 & bit(e) != 0
    }

    #[inline]
    pub fn is_subset(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> u8 {
        min_element(self.0)
    }

    pub fn elements(self) -> impl Iterator<Item = u8> {
        elements(self.0)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mask_digits(self.0))
    }
}

/// Evidence that two disjoint blocks alternate: `a < b < c < d` with `a, c`
/// in `first` and `b, d` in `second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingWitness {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub d: u8,
    #[serde(with = "block_digits")]
    pub first: Block,
    #[serde(with = "block_digits")]
    pub second: Block,
}

mod block_digits {
    use super::Block;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &Block, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&b.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Block, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Block::from_elements(
            &s.bytes().map(|c| c.wrapping_sub(b'0')).collect::<Vec<_>>(),
        ))
    }
}

/// Fast crossing test on raw masks. Disjoint masks cross iff reading
/// `1..=n` and recording which mask each element belongs to yields
/// at least four alternating runs.
#[inline]
pub fn masks_cross(x: Mask, y: Mask) -> bool {
    if x & y != 0 || x.count_ones() < 2 || y.count_ones() < 2 {
        return false;
    }
    let mut runs = 0;
    let mut last = 0u8;
    let mut rest = x | y;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let side = if x & low != 0 { 1 } else { 2 };
        if side != last {
            runs += 1;
            last = side;
        }
        rest &= rest - 1;
    }
    runs >= 4
}

/// Crossing test with a witness: the lexicographically least alternating
/// quadruple `(a, b, c, d)`, if any.
pub fn blocks_cross(u: Universe, s: Block, t: Block) -> Result<Option<CrossingWitness>> {
    u.check_mask(s.0)?;
    u.check_mask(t.0)?;
    if s.0 & t.0 != 0 {
        return Ok(None);
    }
    let next_in = |m: Mask, after: u8| -> Option<u8> {
        let higher = m & !(((1u32 << after) - 1) as Mask);
        (higher != 0).then(|| min_element(higher))
    };
    for a in elements(s.0 | t.0) {
        let (first, second) = if s.contains(a) { (s, t) } else { (t, s) };
        let found = next_in(second.0, a).and_then(|b| {
            next_in(first.0, b).and_then(|c| next_in(second.0, c).map(|d| (b, c, d)))
        });
        if let Some((b, c, d)) = found {
            return Ok(Some(CrossingWitness {
                a,
                b,
                c,
                d,
                first,
                second,
            }));
        }
    }
    Ok(None)
}

/// Which way the Kreweras construction walks round the circle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualOrientation {
    /// Dual blocks list their elements in increasing cyclic order; element
    /// `i` of the dual stands for the gap between `i` and `i + 1`.
    #[default]
    Increasing,
    /// The mirror-image construction; element `i` of the dual stands for
    /// the gap between `i − 1` and `i`.
    Decreasing,
}

/// A set partition of `{1, …, n}`.
///
/// Parts (singletons included) are kept sorted by minimum element, so
/// structural equality is partition equality. Ordering compares the
/// restricted growth strings.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Partition {
    n: u8,
    len: u8,
    parts: [Block; MAX_N],
}

impl Partition {
    /// All singletons.
    pub fn bottom(u: Universe) -> Self {
        let mut parts = [Block(0); MAX_N];
        for e in u.elements() {
            parts[e as usize - 1] = Block(bit(e));
        }
        Partition {
            n: u.n(),
            len: u.n(),
            parts,
        }
    }

    /// The single-block partition.
    pub fn top(u: Universe) -> Self {
        let mut parts = [Block(0); MAX_N];
        parts[0] = Block(u.full());
        Partition {
            n: u.n(),
            len: 1,
            parts,
        }
    }

    /// Build from any collection of disjoint nonempty masks; elements not
    /// mentioned become singletons.
    pub fn from_masks(u: Universe, masks: &[Mask]) -> Result<Self> {
        let mut seen: Mask = 0;
        for &m in masks {
            u.check_mask(m)?;
            if m == 0 {
                return Err(NcpError::NotAPartition {
                    n: u.n(),
                    reason: "empty part".into(),
                });
            }
            if seen & m != 0 {
                return Err(NcpError::NotAPartition {
                    n: u.n(),
                    reason: format!("element {} appears twice", min_element(seen & m)),
                });
            }
            seen |= m;
        }
        Ok(Self::from_disjoint(u, masks.iter().copied()))
    }

    /// Unchecked builder: masks must be disjoint subsets of the universe.
    pub(crate) fn from_disjoint(u: Universe, masks: impl IntoIterator<Item = Mask>) -> Self {
        let mut parts = [Block(0); MAX_N];
        let mut len = 0usize;
        let mut seen: Mask = 0;
        for m in masks {
            if m == 0 {
                continue;
            }
            seen |= m;
            parts[len] = Block(m);
            len += 1;
        }
        for e in elements(u.full() & !seen) {
            parts[len] = Block(bit(e));
            len += 1;
        }
        parts[..len].sort_unstable_by_key(|b| b.0.trailing_zeros());
        Partition {
            n: u.n(),
            len: len as u8,
            parts,
        }
    }

    pub fn from_blocks(u: Universe, blocks: &[&[u8]]) -> Result<Self> {
        let masks: Vec<Mask> = blocks
            .iter()
            .map(|b| {
                b.iter().try_fold(0 as Mask, |m, &e| {
                    u.check_element(e)?;
                    Ok(m | bit(e))
                })
            })
            .collect::<Result<_>>()?;
        Self::from_masks(u, &masks)
    }

    /// Parse the compact notation: blocks as digit strings separated by
    /// commas, singletons omitted. The empty string is the bottom element.
    /// Crossing partitions are accepted here; see [`Partition::parse_noncrossing`].
    pub fn parse(u: Universe, text: &str) -> Result<Self> {
        Self::parse_at(u, text, 0)
    }

    pub(crate) fn parse_at(u: Universe, text: &str, offset: usize) -> Result<Self> {
        let err = |pos: usize, message: String| NcpError::Parse {
            position: offset + pos,
            message,
        };
        let mut masks = Vec::new();
        let mut current: Mask = 0;
        let mut seen: Mask = 0;
        let mut block_start = 0;
        let trimmed = text.trim_end();
        if trimmed.trim().is_empty() {
            return Ok(Self::bottom(u));
        }
        for (pos, ch) in trimmed.char_indices() {
            match ch {
                '1'..='9' => {
                    let e = ch as u8 - b'0';
                    if e > u.n() {
                        return Err(err(pos, format!("digit {e} exceeds n={}", u.n())));
                    }
                    if seen & bit(e) != 0 {
                        return Err(err(pos, format!("digit {e} repeated")));
                    }
                    seen |= bit(e);
                    current |= bit(e);
                }
                ',' => {
                    if current == 0 {
                        return Err(err(pos, "empty block".into()));
                    }
                    masks.push(current);
                    current = 0;
                    block_start = pos + 1;
                }
                ' ' | '\t' if current == 0 => block_start = pos + 1,
                _ => return Err(err(pos, format!("unexpected character {ch:?}"))),
            }
        }
        if current == 0 {
            return Err(err(block_start, "empty block".into()));
        }
        masks.push(current);
        Ok(Self::from_disjoint(u, masks))
    }

    pub fn parse_noncrossing(u: Universe, text: &str) -> Result<Self> {
        let p = Self::parse(u, text)?;
        if p.is_noncrossing() {
            Ok(p)
        } else {
            Err(NcpError::Crossing(text.to_string()))
        }
    }

    #[inline]
    pub fn universe(&self) -> Universe {
        Universe::new(self.n as usize).expect("partition carries a valid n")
    }

    #[inline]
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Every part, singletons included, sorted by minimum element.
    #[inline]
    pub fn parts(&self) -> &[Block] {
        &self.parts[..self.len as usize]
    }

    /// Parts with at least two elements.
    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        self.parts().iter().copied().filter(|b| b.len() >= 2)
    }

    #[inline]
    pub fn num_parts(&self) -> usize {
        self.len as usize
    }

    /// The part containing `e`.
    pub fn part_of(&self, e: u8) -> Block {
        *self
            .parts()
            .iter()
            .find(|b| b.contains(e))
            .expect("every element lies in some part")
    }

    /// `n` minus the number of parts.
    #[inline]
    pub fn rank(&self) -> usize {
        (self.n - self.len) as usize
    }

    pub fn is_bottom(&self) -> bool {
        self.len == self.n
    }

    pub fn is_top(&self) -> bool {
        self.len == 1
    }

    pub fn is_noncrossing(&self) -> bool {
        let parts = self.parts();
        parts
            .iter()
            .enumerate()
            .all(|(i, s)| s.len() < 2 || parts[i + 1..].iter().all(|t| !masks_cross(s.0, t.0)))
    }

    /// First crossing pair of parts, with its witness.
    pub fn crossing_witness(&self) -> Option<CrossingWitness> {
        let u = self.universe();
        let parts = self.parts();
        for (i, &s) in parts.iter().enumerate() {
            for &t in &parts[i + 1..] {
                if let Ok(Some(w)) = blocks_cross(u, s, t) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// `P ∦ Q`: some block of `self` crosses some block of `other`.
    pub fn crosses(&self, other: &Partition) -> Result<bool> {
        self.universe().same_as(other.universe())?;
        Ok(self.crosses_unchecked(other))
    }

    #[inline]
    pub(crate) fn crosses_unchecked(&self, other: &Partition) -> bool {
        self.blocks()
            .any(|s| other.blocks().any(|t| masks_cross(s.0, t.0)))
    }

    /// Refinement order: every part of `self` lies inside a part of `other`.
    pub fn leq(&self, other: &Partition) -> Result<bool> {
        self.universe().same_as(other.universe())?;
        Ok(self.leq_unchecked(other))
    }

    #[inline]
    pub(crate) fn leq_unchecked(&self, other: &Partition) -> bool {
        self.len >= other.len
            && other.parts().iter().all(|t| {
                self.parts()
                    .iter()
                    .all(|s| s.0 & t.0 == 0 || s.is_subset(*t))
            })
    }

    pub fn lt(&self, other: &Partition) -> Result<bool> {
        Ok(self.leq(other)? && self != other)
    }

    /// Kreweras complement in the default orientation.
    pub fn kreweras_dual(&self) -> Result<Partition> {
        self.kreweras_dual_with(DualOrientation::Increasing)
    }

    /// Each dual block is a cycle of `i ↦ prev(i + 1)`, where `prev`
    /// steps backwards (cyclically) inside the part containing `i + 1`.
    /// Consecutive elements of a cycle pass through distinct parts, which
    /// is the clockwise successor description of the dual.
    pub fn kreweras_dual_with(&self, orientation: DualOrientation) -> Result<Partition> {
        if !self.is_noncrossing() {
            return Err(NcpError::Crossing(self.to_string()));
        }
        let u = self.universe();
        Ok(match orientation {
            DualOrientation::Increasing => self.kreweras_increasing(),
            DualOrientation::Decreasing => {
                let mirror = Symmetry::reflection(u, 0);
                self.apply(mirror).kreweras_increasing().apply(mirror)
            }
        })
    }

    fn kreweras_increasing(&self) -> Partition {
        let u = self.universe();
        let step = |i: u8| -> u8 {
            let j = u.succ(i);
            let part = self.part_of(j).0;
            // Largest element of the part below j, else wrap to its maximum.
            let below = part & (bit(j) - 1);
            let pick = if below != 0 { below } else { part };
            16 - pick.leading_zeros() as u8
        };
        let mut assigned: Mask = 0;
        let mut masks = Vec::with_capacity(u.n() as usize);
        for start in u.elements() {
            if assigned & bit(start) != 0 {
                continue;
            }
            let mut cycle: Mask = 0;
            let mut i = start;
            while cycle & bit(i) == 0 {
                cycle |= bit(i);
                i = step(i);
            }
            assigned |= cycle;
            masks.push(cycle);
        }
        Self::from_disjoint(u, masks)
    }

    /// Join in the lattice of all set partitions (transitive closure of
    /// overlapping parts).
    pub fn pi_join(&self, other: &Partition) -> Result<Partition> {
        self.universe().same_as(other.universe())?;
        let mut merged: Vec<Mask> = self.parts().iter().map(|b| b.0).collect();
        for t in other.parts() {
            let mut acc = t.0;
            merged.retain(|&m| {
                if m & acc != 0 {
                    acc |= m;
                    false
                } else {
                    true
                }
            });
            merged.push(acc);
        }
        Ok(Self::from_disjoint(self.universe(), merged))
    }

    /// Meet in the lattice of all set partitions (nonempty pairwise
    /// intersections of parts).
    pub fn pi_meet(&self, other: &Partition) -> Result<Partition> {
        self.universe().same_as(other.universe())?;
        let masks = self
            .parts()
            .iter()
            .flat_map(|s| other.parts().iter().map(move |t| s.0 & t.0))
            .filter(|&m| m != 0);
        Ok(Self::from_disjoint(self.universe(), masks))
    }

    /// Coarsest non-crossing partition above both: the set-partition join,
    /// with crossing parts merged until none remain.
    pub fn nc_join(&self, other: &Partition) -> Result<Partition> {
        for p in [self, other] {
            if !p.is_noncrossing() {
                return Err(NcpError::Crossing(p.to_string()));
            }
        }
        let joined = self.pi_join(other)?;
        Ok(joined.noncrossing_closure())
    }

    /// Merge crossing parts until the partition is non-crossing.
    pub fn noncrossing_closure(&self) -> Partition {
        let mut masks: Vec<Mask> = self.parts().iter().map(|b| b.0).collect();
        'outer: loop {
            for i in 0..masks.len() {
                for j in i + 1..masks.len() {
                    if masks_cross(masks[i], masks[j]) {
                        let m = masks.swap_remove(j);
                        masks[i] |= m;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        Self::from_disjoint(self.universe(), masks)
    }

    /// Relabel every element by `g`.
    pub fn apply(&self, g: Symmetry) -> Partition {
        Self::from_disjoint(
            self.universe(),
            self.parts().iter().map(|b| g.apply_mask(b.0)),
        )
    }

    /// Restricted growth string packed four bits per element, element 1
    /// most significant. Lexicographic on the string.
    pub fn key(&self) -> u64 {
        let mut key = 0u64;
        for e in 1..=self.n {
            let label = self
                .parts()
                .iter()
                .position(|b| b.contains(e))
                .expect("covering") as u64;
            key = (key << 4) | label;
        }
        key
    }

    /// Distinct images under the dihedral group.
    pub fn orbit(&self) -> Vec<Partition> {
        let mut out: Vec<Partition> = self
            .universe()
            .symmetries()
            .into_iter()
            .map(|g| self.apply(g))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Least orbit member in the `key` order.
    pub fn canonical_form(&self) -> Partition {
        self.universe()
            .symmetries()
            .into_iter()
            .map(|g| self.apply(g))
            .min()
            .expect("group is nonempty")
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.key().cmp(&other.key()))
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in self.blocks() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition(n={}, \"{}\")", self.n, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u7() -> Universe {
        Universe::new(7).unwrap()
    }

    fn p(text: &str) -> Partition {
        Partition::parse(u7(), text).unwrap()
    }

    #[test]
    fn crossing_witnesses() {
        let u = u7();
        let w = blocks_cross(
            u,
            Block::from_elements(&[1, 3]),
            Block::from_elements(&[2, 5]),
        )
        .unwrap()
        .unwrap();
        assert_eq!((w.a, w.b, w.c, w.d), (1, 2, 3, 5));
        assert_eq!(w.first, Block::from_elements(&[1, 3]));
        assert!(blocks_cross(
            u,
            Block::from_elements(&[1, 2]),
            Block::from_elements(&[3, 4])
        )
        .unwrap()
        .is_none());
        let w = blocks_cross(
            u,
            Block::from_elements(&[4, 6]),
            Block::from_elements(&[5, 7]),
        )
        .unwrap()
        .unwrap();
        assert_eq!((w.a, w.b, w.c, w.d), (4, 5, 6, 7));
        assert!(blocks_cross(
            u,
            Block::from_elements(&[1, 5]),
            Block::from_elements(&[2, 4])
        )
        .unwrap()
        .is_none());
        // second argument holding the least element
        let w = blocks_cross(
            u,
            Block::from_elements(&[2, 5]),
            Block::from_elements(&[1, 3]),
        )
        .unwrap()
        .unwrap();
        assert_eq!((w.a, w.b, w.c, w.d), (1, 2, 3, 5));
        assert_eq!(w.first, Block::from_elements(&[1, 3]));
    }

    #[test]
    fn crossing_rejects_foreign_elements() {
        let u = Universe::new(4).unwrap();
        let err = blocks_cross(
            u,
            Block::from_elements(&[1, 5]),
            Block::from_elements(&[2, 3]),
        );
        assert!(matches!(
            err,
            Err(NcpError::ElementOutOfRange { element: 5, .. })
        ));
    }

    #[test]
    fn noncrossing_examples() {
        assert!(p("13,46").is_noncrossing());
        assert!(!p("13,25").is_noncrossing());
        assert!(p("").is_noncrossing());
        assert!(p("").is_bottom());
        assert!(p("15,234").is_noncrossing());
    }

    #[test]
    fn partitions_cross_examples() {
        assert!(p("13").crosses(&p("24")).unwrap());
        assert!(!p("13").crosses(&p("57")).unwrap());
        assert!(!p("13").crosses(&p("13")).unwrap());
        let other = Partition::parse(Universe::new(5).unwrap(), "24").unwrap();
        assert!(p("13").crosses(&other).is_err());
    }

    #[test]
    fn order_examples() {
        assert!(p("13").leq(&p("123")).unwrap());
        assert!(!p("12").leq(&p("13")).unwrap());
        assert!(!p("13").leq(&p("12")).unwrap());
        assert!(p("12,45").leq(&p("12,45")).unwrap());
        assert!(!p("12,45").lt(&p("12,45")).unwrap());
        assert!(Partition::bottom(u7()).leq(&p("12")).unwrap());
        assert!(p("12").leq(&Partition::top(u7())).unwrap());
    }

    #[test]
    fn ranks() {
        assert_eq!(p("13").rank(), 1);
        assert_eq!(p("").rank(), 0);
        assert_eq!(p("123456").rank(), 5);
        assert_eq!(Partition::top(u7()).rank(), 6);
    }

    #[test]
    fn dual_examples() {
        let u4 = Universe::new(4).unwrap();
        let d = Partition::parse(u4, "12").unwrap().kreweras_dual().unwrap();
        assert_eq!(d, Partition::parse(u4, "234").unwrap());
        assert_eq!(p("12").kreweras_dual().unwrap(), p("234567"));
        assert_eq!(p("13").kreweras_dual().unwrap(), p("12,34567"));
        assert!(p("13,24").kreweras_dual().is_err());
        assert_eq!(
            Partition::bottom(u7()).kreweras_dual().unwrap(),
            Partition::top(u7())
        );
    }

    #[test]
    fn decreasing_orientation_is_shifted() {
        let rot = Symmetry::rotation(u7(), 1);
        for text in ["12", "13", "124,56", "1357", "17,2346"] {
            let inc = p(text).kreweras_dual().unwrap();
            let dec = p(text)
                .kreweras_dual_with(DualOrientation::Decreasing)
                .unwrap();
            assert_eq!(dec, inc.apply(rot), "{text}");
        }
    }

    #[test]
    fn lattice_operations() {
        assert_eq!(p("12").pi_join(&p("23")).unwrap(), p("123"));
        assert_eq!(p("13").pi_join(&p("24")).unwrap(), p("13,24"));
        assert_eq!(p("13").nc_join(&p("24")).unwrap(), p("1234"));
        assert_eq!(p("123").pi_meet(&p("12,34")).unwrap(), p("12"));
        assert!(p("13,24").nc_join(&p("")).is_err());
    }

    #[test]
    fn symmetry_and_canonical_forms() {
        let rot = Symmetry::rotation(u7(), 1);
        assert_eq!(p("13").apply(rot), p("24"));
        assert_eq!(p("24").canonical_form(), p("13").canonical_form());
        assert_eq!(p("13").canonical_form(), p("13"));
        assert_eq!(p("13").orbit().len(), 7);
        assert_eq!(p("14").orbit().len(), 7);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let u = u7();
        assert!(matches!(
            Partition::parse(u, "12,8"),
            Err(NcpError::Parse { position: 3, .. })
        ));
        assert!(matches!(
            Partition::parse(u, "121"),
            Err(NcpError::Parse { position: 2, .. })
        ));
        assert!(matches!(
            Partition::parse(u, "12,,3"),
            Err(NcpError::Parse { position: 3, .. })
        ));
        assert!(matches!(
            Partition::parse(u, "12,"),
            Err(NcpError::Parse { position: 3, .. })
        ));
        assert!(Partition::parse(u, "10").is_err());
        assert!(Partition::parse(u, "13,25").is_ok());
        assert!(matches!(
            Partition::parse_noncrossing(u, "13,25"),
            Err(NcpError::Crossing(_))
        ));
    }

    #[test]
    fn display_round_trip() {
        for text in ["12,46", "1357", "17,23,456", ""] {
            assert_eq!(p(text).to_string(), text);
        }
        // singletons written explicitly are dropped on display
        assert_eq!(p("3,12").to_string(), "12");
    }
}
