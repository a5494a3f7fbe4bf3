//! Ground sets `{1, …, n}` with cyclic neighbour arithmetic, element
//! bitmasks and the dihedral group acting on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NcpError, Result};

/// Largest supported ground set. Elements are written as single digits.
pub const MAX_N: usize = 9;

/// A subset of `1..=n`, bit `e - 1` standing for element `e`.
pub type Mask = u16;

#[inline]
pub const fn bit(element: u8) -> Mask {
    1 << (element - 1)
}

/// Iterate the elements of a mask in increasing order.
pub fn elements(mask: Mask) -> impl Iterator<Item = u8> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let e = rest.trailing_zeros() as u8 + 1;
        rest &= rest - 1;
        Some(e)
    })
}

#[inline]
pub fn min_element(mask: Mask) -> u8 {
    debug_assert!(mask != 0);
    mask.trailing_zeros() as u8 + 1
}

/// Digit-string rendering of a mask, e.g. `{1,2,4}` -> `"124"`.
pub fn mask_digits(mask: Mask) -> String {
    elements(mask).map(|e| char::from(b'0' + e)).collect()
}

/// `{a,b,…}` rendering used in reports; the empty set prints as `{}`.
pub fn mask_set(mask: Mask) -> String {
    let inner: Vec<String> = elements(mask).map(|e| e.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// The ground set `{1, …, n}` (1 ≤ n ≤ 9). Sizes below 3 are only useful
/// for counting; the chain conditions assume n ≥ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Universe(u8);

impl Universe {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_N).contains(&n) {
            Ok(Universe(n as u8))
        } else {
            Err(NcpError::UnsupportedSize(n))
        }
    }

    #[inline]
    pub fn n(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn full(self) -> Mask {
        ((1u32 << self.0) - 1) as Mask
    }

    pub fn elements(self) -> impl Iterator<Item = u8> {
        1..=self.0
    }

    /// `e + 1` modulo `n`, in `1..=n`.
    #[inline]
    pub fn succ(self, e: u8) -> u8 {
        self.offset(e, 1)
    }

    #[inline]
    pub fn pred(self, e: u8) -> u8 {
        self.offset(e, -1)
    }

    /// `e + delta` reduced into `1..=n`.
    #[inline]
    pub fn offset(self, e: u8, delta: i32) -> u8 {
        let n = self.0 as i32;
        ((e as i32 - 1 + delta).rem_euclid(n) + 1) as u8
    }

    /// `{e - 1, e + 1}` taken cyclically.
    #[inline]
    pub fn neighbours(self, e: u8) -> Mask {
        bit(self.pred(e)) | bit(self.succ(e))
    }

    pub fn check_element(self, e: u8) -> Result<()> {
        if e >= 1 && e <= self.0 {
            Ok(())
        } else {
            Err(NcpError::ElementOutOfRange {
                element: e,
                n: self.0,
            })
        }
    }

    pub fn check_mask(self, mask: Mask) -> Result<()> {
        if mask & !self.full() != 0 {
            let element = 16 - (mask & !self.full()).leading_zeros() as u8;
            Err(NcpError::ElementOutOfRange { element, n: self.0 })
        } else {
            Ok(())
        }
    }

    pub fn same_as(self, other: Universe) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(NcpError::UniverseMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }

    /// True when `mask` is a cyclic interval of `1..=n`.
    pub fn is_cyclic_interval(self, mask: Mask) -> bool {
        if mask == 0 || mask == self.full() {
            return mask != 0;
        }
        // An arc has exactly one element whose predecessor lies outside it.
        elements(mask)
            .filter(|&e| mask & bit(self.pred(e)) == 0)
            .count()
            == 1
    }

    /// All `2n` rotations and reflections, rotations first.
    pub fn symmetries(self) -> Vec<Symmetry> {
        let n = self.0;
        let mut out = Vec::with_capacity(2 * n as usize);
        for reflect in [false, true] {
            for shift in 0..n {
                out.push(Symmetry { n, shift, reflect });
            }
        }
        out
    }
}

impl TryFrom<u8> for Universe {
    type Error = NcpError;

    fn try_from(n: u8) -> Result<Self> {
        Universe::new(n as usize)
    }
}

impl From<Universe> for u8 {
    fn from(u: Universe) -> u8 {
        u.0
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U_{}", self.0)
    }
}

/// An element of the dihedral group of order `2n`: `e ↦ e + shift`, or
/// `e ↦ shift − e` when reflecting (all modulo `n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    n: u8,
    shift: u8,
    reflect: bool,
}

impl Symmetry {
    pub fn rotation(u: Universe, shift: i32) -> Self {
        Symmetry {
            n: u.n(),
            shift: shift.rem_euclid(u.n() as i32) as u8,
            reflect: false,
        }
    }

    pub fn reflection(u: Universe, shift: i32) -> Self {
        Symmetry {
            n: u.n(),
            shift: shift.rem_euclid(u.n() as i32) as u8,
            reflect: true,
        }
    }

    pub fn is_reflection(self) -> bool {
        self.reflect
    }

    #[inline]
    pub fn apply(self, e: u8) -> u8 {
        let n = self.n as i32;
        let v = if self.reflect {
            self.shift as i32 - e as i32
        } else {
            e as i32 + self.shift as i32
        };
        ((v - 1).rem_euclid(n) + 1) as u8
    }

    #[inline]
    pub fn apply_mask(self, mask: Mask) -> Mask {
        elements(mask).fold(0, |acc, e| acc | bit(self.apply(e)))
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reflect {
            write!(f, "e -> {}-e", self.shift)
        } else {
            write!(f, "e -> e+{}", self.shift)
        }
    }
}
