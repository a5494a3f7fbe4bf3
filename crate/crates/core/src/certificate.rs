//! Propagation certificates for refutations of condition IV, and an
//! independent replay checker.
//!
//! The engine starts from the companion exclusions implied by pattern hits
//! and by `F_i′`, forces two-element blocks when a single companion is left,
//! pushes forced blocks through `x ∈ C_i ⇒ C_x ⊆ C_i`, and stops at the first
//! conflict. It is sound but not complete: `None` means "inconclusive".
//!
//! The checker in [`replay`] recomputes the smallest blocks and the clause
//! table from scratch with ordered sets, so it shares no evaluation code with
//! the engine.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::Chain;
use crate::partition::masks_cross;
use crate::patterns::{detect_in_family, InclusionConvention, PatternHit, Sign};
use crate::universe::{bit, elements, Mask, Universe, MAX_N};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    /// `set ∩ C_index = ∅`.
    Exclusion,
    /// `C_index = set`, from the exclusions at `index`.
    ForcedBlock,
    /// `C_index = set`, from another forced block containing `index`.
    Propagate,
    /// Contradiction; the certificate ends here.
    Conflict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Justification {
    /// A pattern hit at `index` excludes its run of neighbours.
    Pattern { hit: PatternHit },
    /// `C_index′` must avoid `F_index′`.
    Neighbours,
    /// `C_via` is forced and contains `element`, which is excluded from
    /// `C_index`; so `via ∉ C_index`.
    Containment { via: u8, element: u8 },
    /// Exactly one companion is left for `C_index`.
    SoleCompanion,
    /// `C_from = set` contains `index`, so `C_index ⊆ set`.
    Subset { from: u8 },
    /// No companion is left for `C_index`.
    Emptiness,
    /// `C_index = set`, but `C_via = other` contains `index` too.
    ForcedMismatch { via: u8, other: Vec<u8> },
    /// `C_index = set` and `C_other_index` are forced and cross.
    ForcedCrossing { other_index: u8, other: Vec<u8> },
    /// The forced `C_index` contains an excluded element.
    ForcedExcluded { element: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub index: u8,
    pub set: Vec<u8>,
    pub justification: Justification,
}

/// Machine-checkable derivation that no maximal chain satisfies condition IV
/// against `chain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub n: u8,
    pub chain: String,
    pub steps: Vec<Step>,
    pub conclusion: String,
}

const CONCLUSION: &str = "condition IV fails";

impl RefutationCertificate {
    /// Whether any block was forced (a case-style argument rather than a bare
    /// emptiness count).
    pub fn uses_forced_blocks(&self) -> bool {
        self.steps.iter().any(|s| s.kind == StepKind::ForcedBlock)
    }

    pub fn conflict(&self) -> Option<&Step> {
        self.steps.last().filter(|s| s.kind == StepKind::Conflict)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One line per step, for terminal output.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (pos, s) in self.steps.iter().enumerate() {
            let set = set_text(&s.set);
            let line = match (&s.kind, &s.justification) {
                (StepKind::Exclusion, Justification::Pattern { hit }) => {
                    format!("{set} ∉ C_{} by {hit}", s.index)
                }
                (StepKind::Exclusion, Justification::Neighbours) => {
                    format!(
                        "{set} ∉ C_{} since C_{}′ ∩ F_{}′ = ∅",
                        s.index, s.index, s.index
                    )
                }
                (StepKind::Exclusion, Justification::Containment { via, element }) => format!(
                    "{set} ∉ C_{}: C_{via} would lie in C_{} but contains {element}",
                    s.index, s.index
                ),
                (StepKind::ForcedBlock, _) => {
                    format!("C_{} = {set} (only companion left)", s.index)
                }
                (StepKind::Propagate, Justification::Subset { from }) => {
                    format!("C_{} = {set} since {} ∈ C_{from}", s.index, s.index)
                }
                (StepKind::Conflict, Justification::Emptiness) => {
                    format!("no companion left for C_{}", s.index)
                }
                (StepKind::Conflict, Justification::ForcedMismatch { via, other }) => format!(
                    "C_{} = {set} and C_{} = {} via C_{via}: contradiction",
                    s.index,
                    s.index,
                    set_text(other)
                ),
                (StepKind::Conflict, Justification::ForcedCrossing { other_index, other }) => {
                    format!(
                        "C_{} = {set} crosses C_{other_index} = {}: contradiction",
                        s.index,
                        set_text(other)
                    )
                }
                (StepKind::Conflict, Justification::ForcedExcluded { element }) => format!(
                    "C_{} = {set} contains excluded {element}: contradiction",
                    s.index
                ),
                (kind, j) => format!("{kind:?} at {} {set} ({j:?})", s.index),
            };
            out.push_str(&format!("{:>3}. {line}\n", pos + 1));
        }
        out
    }
}

fn set_text(set: &[u8]) -> String {
    let inner: Vec<String> = set.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn to_vec(mask: Mask) -> Vec<u8> {
    elements(mask).collect()
}

struct Engine {
    u: Universe,
    excluded: [Mask; MAX_N],
    forced: [Mask; MAX_N],
    steps: Vec<Step>,
}

impl Engine {
    fn ex(&self, i: u8) -> Mask {
        self.excluded[i as usize - 1]
    }

    fn forced(&self, i: u8) -> Option<Mask> {
        Some(self.forced[i as usize - 1]).filter(|&m| m != 0)
    }

    fn allowed(&self, i: u8) -> Mask {
        self.u.full() & !bit(i) & !self.ex(i)
    }

    fn push(&mut self, kind: StepKind, index: u8, set: Mask, justification: Justification) {
        self.steps.push(Step {
            kind,
            index,
            set: to_vec(set),
            justification,
        });
    }

    fn exclude(&mut self, i: u8, set: Mask, justification: Justification) -> bool {
        if set & !self.ex(i) == 0 {
            return false;
        }
        self.excluded[i as usize - 1] |= set;
        self.push(StepKind::Exclusion, i, set, justification);
        true
    }

    fn find_conflict(&mut self) -> bool {
        for i in self.u.elements() {
            if self.allowed(i) == 0 {
                self.push(StepKind::Conflict, i, 0, Justification::Emptiness);
                return true;
            }
        }
        for i in self.u.elements() {
            if let Some(b) = self.forced(i) {
                if let Some(e) = elements(b & self.ex(i)).next() {
                    self.push(
                        StepKind::Conflict,
                        i,
                        b,
                        Justification::ForcedExcluded { element: e },
                    );
                    return true;
                }
            }
        }
        for i in self.u.elements() {
            for j in self.u.elements().filter(|&j| j > i) {
                if let (Some(a), Some(b)) = (self.forced(i), self.forced(j)) {
                    if masks_cross(a, b) {
                        let just = Justification::ForcedCrossing {
                            other_index: j,
                            other: to_vec(b),
                        };
                        self.push(StepKind::Conflict, i, a, just);
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Forces `C_i = {i, x}` and its mirror. Returns true on conflict.
    fn force(&mut self, i: u8, x: u8) -> bool {
        let block = bit(i) | bit(x);
        self.forced[i as usize - 1] = block;
        self.push(
            StepKind::ForcedBlock,
            i,
            block,
            Justification::SoleCompanion,
        );
        match self.forced(x) {
            Some(b) if b == block => false,
            Some(b) => {
                let just = Justification::ForcedMismatch {
                    via: i,
                    other: to_vec(block),
                };
                self.push(StepKind::Conflict, x, b, just);
                true
            }
            None => {
                self.forced[x as usize - 1] = block;
                self.push(
                    StepKind::Propagate,
                    x,
                    block,
                    Justification::Subset { from: i },
                );
                false
            }
        }
    }

    fn run(&mut self) -> bool {
        loop {
            if self.find_conflict() {
                return true;
            }
            let sole: Vec<(u8, u8)> = self
                .u
                .elements()
                .filter_map(|i| {
                    let allowed = self.allowed(i);
                    (self.forced(i).is_none() && self.ex(i) != 0 && allowed.count_ones() == 1)
                        .then(|| (i, allowed.trailing_zeros() as u8 + 1))
                })
                .collect();
            // prefer a block that immediately clashes with one already forced
            let clashes = |&(i, x): &(u8, u8)| {
                let block = bit(i) | bit(x);
                self.forced(x).is_some_and(|b| b != block)
                    || self
                        .u
                        .elements()
                        .filter_map(|j| self.forced(j))
                        .any(|b| masks_cross(b, block))
            };
            let sole = sole.iter().find(|c| clashes(c)).or(sole.first()).copied();
            if let Some((i, x)) = sole {
                if self.force(i, x) {
                    return true;
                }
                continue;
            }
            let mut changed = false;
            for j in self.u.elements() {
                let Some(b) = self.forced(j) else { continue };
                for i in self.u.elements() {
                    if i == j || b & bit(i) != 0 || self.ex(i) & bit(j) != 0 {
                        continue;
                    }
                    if let Some(e) = elements(b & self.ex(i)).next() {
                        let just = Justification::Containment { via: j, element: e };
                        changed |= self.exclude(i, bit(j), just);
                    }
                }
            }
            if !changed {
                return false;
            }
        }
    }
}

/// Try to refute condition IV for `chain` by propagation alone.
pub fn pattern_refute(
    chain: &Chain,
    convention: InclusionConvention,
) -> Option<RefutationCertificate> {
    let u = chain.universe();
    let family = chain.smallest_blocks();
    let mut engine = Engine {
        u,
        excluded: [0; MAX_N],
        forced: [0; MAX_N],
        steps: Vec::new(),
    };
    for hit in detect_in_family(&family, convention) {
        engine.exclude(hit.i, hit.excluded(u), Justification::Pattern { hit });
    }
    for i in u.elements() {
        engine.exclude(i, family.prime(i), Justification::Neighbours);
    }
    engine.run().then(|| RefutationCertificate {
        n: u.n(),
        chain: chain.to_string(),
        steps: prune(u, engine.steps),
        conclusion: CONCLUSION.to_string(),
    })
}

fn step_mask(step: &Step) -> Mask {
    step.set.iter().fold(0, |m, &e| m | bit(e))
}

/// Keep only the steps the final conflict depends on. Exclusions needed to
/// cover a set are picked greedily, largest contribution first.
fn prune(u: Universe, steps: Vec<Step>) -> Vec<Step> {
    let Some(last) = steps.len().checked_sub(1) else {
        return steps;
    };
    let defined = |index: u8, before: usize| {
        (0..before).rev().find(|&q| {
            steps[q].index == index
                && matches!(steps[q].kind, StepKind::ForcedBlock | StepKind::Propagate)
        })
    };
    let cover = |index: u8, target: Mask, before: usize| {
        let mut rest = target;
        let mut picked = Vec::new();
        while rest != 0 {
            let best = (0..before)
                .filter(|&q| steps[q].index == index && steps[q].kind == StepKind::Exclusion)
                .max_by_key(|&q| {
                    (
                        (step_mask(&steps[q]) & rest).count_ones(),
                        std::cmp::Reverse(q),
                    )
                });
            match best {
                Some(q) if step_mask(&steps[q]) & rest != 0 => {
                    rest &= !step_mask(&steps[q]);
                    picked.push(q);
                }
                _ => break,
            }
        }
        picked
    };
    let mut keep = vec![false; steps.len()];
    let mut work = vec![last];
    while let Some(p) = work.pop() {
        if std::mem::replace(&mut keep[p], true) {
            continue;
        }
        let s = &steps[p];
        let i = s.index;
        let others = u.full() & !bit(i);
        match (&s.kind, &s.justification) {
            (_, Justification::Containment { via, element }) => {
                work.extend(defined(*via, p));
                work.extend(cover(i, bit(*element), p));
            }
            (StepKind::ForcedBlock, _) => work.extend(cover(i, others & !step_mask(s), p)),
            (_, Justification::Subset { from }) => work.extend(defined(*from, p)),
            (_, Justification::Emptiness) => work.extend(cover(i, others, p)),
            (_, Justification::ForcedMismatch { via, .. }) => {
                work.extend(defined(i, p));
                work.extend(defined(*via, p));
            }
            (_, Justification::ForcedCrossing { other_index, .. }) => {
                work.extend(defined(i, p));
                work.extend(defined(*other_index, p));
            }
            (_, Justification::ForcedExcluded { element }) => {
                work.extend(defined(i, p));
                work.extend(cover(i, bit(*element), p));
            }
            _ => {}
        }
    }
    steps
        .into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("certificate is for n={found}, chain has n={expected}")]
    WrongUniverse { expected: u8, found: u8 },
    #[error("certificate names chain {found:?}, expected {expected:?}")]
    WrongChain { expected: String, found: String },
    #[error("step {step}: {reason}")]
    InvalidStep { step: usize, reason: String },
    #[error("certificate does not end in a conflict")]
    NoConflict,
}

type Set = BTreeSet<u8>;

/// Clause shapes, one string per clause: `=` equality, `>` left contains
/// right, `<` left contained in right.
const CHECKER_CLAUSES: [&[&str]; 4] = [
    &[">"],
    &["=", ">>"],
    &["=>", "=<", ">=", ">>>"],
    &["==", "=>>", "=<>", "=<<", ">=>", ">=<", ">>=", ">>>>"],
];

struct Checker {
    n: u8,
    smallest: Vec<Set>,
    excluded: Vec<Set>,
    forced: Vec<Option<Set>>,
}

impl Checker {
    fn new(chain: &Chain) -> Self {
        let n = chain.universe().n();
        let full: Set = (1..=n).collect();
        let mut smallest = Vec::new();
        for i in 1..=n {
            let mut best = full.clone();
            for p in chain.members() {
                for part in p.parts() {
                    let part: Set = part.elements().collect();
                    if part.len() >= 2 && part.contains(&i) && part.len() < best.len() {
                        best = part;
                    }
                }
            }
            smallest.push(best);
        }
        Checker {
            n,
            smallest,
            excluded: vec![Set::new(); n as usize],
            forced: vec![None; n as usize],
        }
    }

    fn wrap(&self, x: i32) -> u8 {
        ((x - 1).rem_euclid(self.n as i32) + 1) as u8
    }

    fn f(&self, i: u8) -> &Set {
        &self.smallest[i as usize - 1]
    }

    fn f_prime(&self, i: u8) -> Set {
        let near = [self.wrap(i as i32 - 1), self.wrap(i as i32 + 1)];
        near.into_iter().filter(|e| self.f(i).contains(e)).collect()
    }

    fn hit_holds(&self, hit: &PatternHit) -> bool {
        let Some(family) = CHECKER_CLAUSES.get(hit.k as usize - 1) else {
            return false;
        };
        let Some(shape) = family.get(hit.variant as usize - 1) else {
            return false;
        };
        let dir = if hit.sign == Sign::Plus { 1 } else { -1 };
        shape.chars().enumerate().all(|(t, rel)| {
            let a = self.f(self.wrap(hit.i as i32 + dir * t as i32));
            let b = self.f(self.wrap(hit.i as i32 + dir * (t as i32 + 1)));
            match rel {
                '=' => a == b,
                '>' => b.is_subset(a),
                _ => a.is_subset(b),
            }
        })
    }

    fn hit_range(&self, hit: &PatternHit) -> Set {
        let dir = if hit.sign == Sign::Plus { 1 } else { -1 };
        (1..=hit.k as i32)
            .map(|d| self.wrap(hit.i as i32 + dir * d))
            .filter(|&e| e != hit.i)
            .collect()
    }

    fn allowed(&self, i: u8) -> Set {
        (1..=self.n)
            .filter(|&e| e != i && !self.excluded[i as usize - 1].contains(&e))
            .collect()
    }

    fn forced_at(&self, i: u8) -> Option<&Set> {
        self.forced.get(i as usize - 1)?.as_ref()
    }

    fn crossing(a: &Set, b: &Set) -> bool {
        a.iter().any(|&w| {
            b.iter().any(|&x| {
                a.iter().any(|&y| {
                    b.iter()
                        .any(|&z| w < x && x < y && y < z && !b.contains(&w) && !a.contains(&x))
                })
            })
        }) || b.iter().any(|&w| {
            a.iter().any(|&x| {
                b.iter().any(|&y| {
                    a.iter()
                        .any(|&z| w < x && x < y && y < z && !a.contains(&w) && !b.contains(&x))
                })
            })
        })
    }

    fn apply(&mut self, step: &Step) -> Result<bool, String> {
        let i = step.index;
        if i == 0 || i > self.n {
            return Err(format!("index {i} out of range"));
        }
        let set: Set = step.set.iter().copied().collect();
        if set.len() != step.set.len() || set.iter().any(|&e| e == 0 || e > self.n) {
            return Err("malformed set".into());
        }
        match (step.kind, &step.justification) {
            (StepKind::Exclusion, just) => {
                if set.contains(&i) {
                    return Err("an index cannot be excluded from its own block".into());
                }
                let licensed: Set = match just {
                    Justification::Pattern { hit } => {
                        if hit.i != i {
                            return Err(format!("{hit} is not based at {i}"));
                        }
                        if !self.hit_holds(hit) {
                            return Err(format!("{hit} does not hold"));
                        }
                        self.hit_range(hit)
                    }
                    Justification::Neighbours => self.f_prime(i),
                    Justification::Containment { via, element } => {
                        let Some(b) = self.forced_at(*via) else {
                            return Err(format!("C_{via} is not forced"));
                        };
                        if b.contains(&i)
                            || !b.contains(element)
                            || !self.excluded[i as usize - 1].contains(element)
                        {
                            return Err("containment premises fail".into());
                        }
                        [*via].into_iter().collect()
                    }
                    other => return Err(format!("{other:?} does not justify an exclusion")),
                };
                if !set.is_subset(&licensed) {
                    return Err("excluded set exceeds what the rule licenses".into());
                }
                self.excluded[i as usize - 1].extend(set);
                Ok(false)
            }
            (StepKind::ForcedBlock, Justification::SoleCompanion) => {
                let allowed = self.allowed(i);
                if self.excluded[i as usize - 1].is_empty() || allowed.len() != 1 {
                    return Err("more than one companion remains".into());
                }
                let mut expect = allowed;
                expect.insert(i);
                if expect != set {
                    return Err("forced block is not {index, companion}".into());
                }
                self.set_forced(i, set)?;
                Ok(false)
            }
            (StepKind::Propagate, Justification::Subset { from }) => {
                let Some(b) = self.forced_at(*from) else {
                    return Err(format!("C_{from} is not forced"));
                };
                if *from == i || !b.contains(&i) || b.len() != 2 || *b != set {
                    return Err("subset propagation premises fail".into());
                }
                self.set_forced(i, set)?;
                Ok(false)
            }
            (StepKind::Conflict, Justification::Emptiness) => {
                if self.allowed(i).is_empty() {
                    Ok(true)
                } else {
                    Err("companions remain".into())
                }
            }
            (StepKind::Conflict, Justification::ForcedMismatch { via, other }) => {
                let other: Set = other.iter().copied().collect();
                let ok = self.forced_at(i) == Some(&set)
                    && self.forced_at(*via) == Some(&other)
                    && other.contains(&i)
                    && other.len() == 2
                    && other != set;
                if ok {
                    Ok(true)
                } else {
                    Err("mismatch premises fail".into())
                }
            }
            (StepKind::Conflict, Justification::ForcedCrossing { other_index, other }) => {
                let other: Set = other.iter().copied().collect();
                let ok = self.forced_at(i) == Some(&set)
                    && self.forced_at(*other_index) == Some(&other)
                    && Self::crossing(&set, &other);
                if ok {
                    Ok(true)
                } else {
                    Err("crossing premises fail".into())
                }
            }
            (StepKind::Conflict, Justification::ForcedExcluded { element }) => {
                let ok = self.forced_at(i) == Some(&set)
                    && set.contains(element)
                    && self.excluded[i as usize - 1].contains(element);
                if ok {
                    Ok(true)
                } else {
                    Err("forced block avoids the exclusions".into())
                }
            }
            (kind, just) => Err(format!("{just:?} cannot justify a {kind:?} step")),
        }
    }

    fn set_forced(&mut self, i: u8, set: Set) -> Result<(), String> {
        match &self.forced[i as usize - 1] {
            Some(old) if *old != set => Err("block already forced to a different value".into()),
            _ => {
                self.forced[i as usize - 1] = Some(set);
                Ok(())
            }
        }
    }
}

/// Replays `cert` against `chain` step by step.
///
/// Exclusions from a pattern hit trust the companion-exclusion lemma; every
/// other rule is checked from the definitions.
pub fn replay(chain: &Chain, cert: &RefutationCertificate) -> Result<(), ReplayError> {
    let n = chain.universe().n();
    if cert.n != n {
        return Err(ReplayError::WrongUniverse {
            expected: n,
            found: cert.n,
        });
    }
    if cert.chain != chain.to_string() {
        return Err(ReplayError::WrongChain {
            expected: chain.to_string(),
            found: cert.chain.clone(),
        });
    }
    let mut checker = Checker::new(chain);
    for (pos, step) in cert.steps.iter().enumerate() {
        let done = checker
            .apply(step)
            .map_err(|reason| ReplayError::InvalidStep {
                step: pos + 1,
                reason,
            })?;
        if done {
            return if pos + 1 == cert.steps.len() {
                Ok(())
            } else {
                Err(ReplayError::InvalidStep {
                    step: pos + 2,
                    reason: "steps after the conflict".into(),
                })
            };
        }
    }
    Err(ReplayError::NoConflict)
}
