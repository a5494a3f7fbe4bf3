//! End-to-end verification: enumerate every chain, filter by conditions
//! I–III on both the chain and its dual, decide condition IV per dihedral
//! class, and align the survivors of the filter with the case table.
//! Also hosts the exhaustive validators for the lemmas used by the
//! certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

use serde::Serialize;

use crate::apartments::{cond_iv_prime, dominant_vertex, ApartmentIndex};
use crate::certificate::{pattern_refute, replay, RefutationCertificate};
use crate::chain::{canonical_prime_signature, Chain, SmallestBlockFamily};
use crate::condition_four::{
    cond_iv, cond_iv_certified, corollary4, ConditionFour, MaximalChainIndex,
};
use crate::enumeration::{for_each_chain, orbit_classes};
use crate::error::{NcpError, Result};
use crate::fixtures::Fixtures;
use crate::partition::{masks_cross, Partition};
use crate::patterns::{detect_in_family, detect_patterns, InclusionConvention, PatternHit};
use crate::universe::{bit, mask_set, Mask, Universe};

pub const VERIFIED: &str = "THEOREM 5 VERIFIED";
pub const FAILED: &str = "THEOREM 5 FAILED";

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    /// Attach propagation certificates to refuted classes.
    pub certificates: bool,
    pub convention: InclusionConvention,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            certificates: true,
            convention: InclusionConvention::NonStrict,
        }
    }
}

/// Conditions I–III for one chain.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct FirstThree {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    /// Condition III by the four-member test.
    pub iii_criterion: bool,
}

impl FirstThree {
    pub fn of(c: &Chain) -> Result<Self> {
        Ok(FirstThree {
            i: c.cond_i(),
            ii: c.cond_ii(),
            iii: c.cond_iii_bruteforce()?,
            iii_criterion: c.cond_iii_criterion(),
        })
    }

    pub fn all(&self) -> bool {
        self.i && self.ii && self.iii
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassMatch {
    /// The class, or its dual class, contains a listed chain.
    Case {
        case_id: u8,
        fixture: String,
        via_dual: bool,
    },
    /// The class (or its dual) has the prime signature of a listed chain up
    /// to symmetry, so condition IV fails with it.
    SignatureCovered {
        case_id: u8,
        fixture: String,
        via_dual: bool,
    },
    Unmatched,
}

impl ClassMatch {
    pub fn label(&self) -> String {
        match self {
            ClassMatch::Case {
                case_id, via_dual, ..
            } => {
                format!("case {case_id}{}", if *via_dual { " (dual)" } else { "" })
            }
            ClassMatch::SignatureCovered {
                case_id,
                fixture,
                via_dual,
            } => format!(
                "signature of {fixture} (case {case_id}){}",
                if *via_dual { " (dual)" } else { "" }
            ),
            ClassMatch::Unmatched => "unmatched".to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub representative: Chain,
    pub rank_set: String,
    pub orbit_size: usize,
    pub members_seen: usize,
    pub dual_representative: Chain,
    pub conditions: FirstThree,
    pub dual_conditions: FirstThree,
    pub iv: bool,
    pub iv_dual: bool,
    pub witness: Option<Chain>,
    pub dual_witness: Option<Chain>,
    pub certificate: Option<RefutationCertificate>,
    pub certificate_replayed: Option<bool>,
    pub corollary4: Option<u8>,
    pub signature_duplicate_of: Option<Chain>,
    pub matched: Option<ClassMatch>,
}

impl ClassReport {
    pub fn survives(&self) -> bool {
        self.iv && self.iv_dual
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub n: u8,
    pub chains_scanned: usize,
    pub candidate_chains: usize,
    pub classes: Vec<ClassReport>,
    pub survivors: Vec<Chain>,
    /// Chains where the four-member test and the exhaustive test for
    /// condition III differ.
    pub condition_three_disagreements: Vec<Chain>,
    /// Classes where the search and the table disagree on condition IV.
    pub condition_four_disagreements: Vec<Chain>,
    /// Certificates issued for chains that have a witness.
    pub unsound_certificates: Vec<Chain>,
    pub certified_classes: usize,
    pub verdict: String,
    pub alignment: Option<Alignment>,
}

impl PipelineReport {
    pub fn verified(&self) -> bool {
        self.survivors.is_empty()
    }

    pub fn unmatched(&self) -> Vec<&ClassReport> {
        self.classes
            .iter()
            .filter(|c| c.matched == Some(ClassMatch::Unmatched))
            .collect()
    }

    /// Fixtures present and every class and fixture chain accounted for.
    pub fn aligned(&self) -> bool {
        self.alignment.as_ref().is_some_and(|a| a.aligned()) && self.unmatched().is_empty()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "chains scanned: {}", self.chains_scanned);
        let _ = writeln!(
            out,
            "chains with F and F* satisfying I, II, III: {}",
            self.candidate_chains
        );
        let _ = writeln!(out, "dihedral classes: {}", self.classes.len());
        let _ = writeln!(
            out,
            "classes with a propagation certificate: {}/{}",
            self.certified_classes,
            self.classes.len()
        );
        let _ = writeln!(
            out,
            "condition III test disagreements: {}",
            self.condition_three_disagreements.len()
        );
        for c in &self.condition_three_disagreements {
            let _ = writeln!(out, "  {c}");
        }
        if !self.condition_four_disagreements.is_empty() || !self.unsound_certificates.is_empty() {
            let _ = writeln!(
                out,
                "INTERNAL DISAGREEMENT: search/table {:?}, unsound certificates {:?}",
                self.condition_four_disagreements, self.unsound_certificates
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<22} {:<10} {:<22} {:>5} {:>5}  match",
            "class", "ranks", "dual", "IV", "IV*"
        );
        for c in &self.classes {
            let _ = writeln!(
                out,
                "{:<22} {:<10} {:<22} {:>5} {:>5}  {}",
                c.representative.to_string(),
                c.rank_set,
                c.dual_representative.to_string(),
                c.iv,
                c.iv_dual,
                c.matched.as_ref().map_or("-".to_string(), |m| m.label())
            );
        }
        let unmatched = self.unmatched();
        if !unmatched.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "!!! {} class(es) satisfy I, II, III with their duals but match no listed case:",
                unmatched.len()
            );
            for c in unmatched {
                let _ = writeln!(out, "!!!   {}", c.representative);
            }
        }
        if let Some(a) = &self.alignment {
            let _ = writeln!(out);
            out.push_str(&a.render_text());
        }
        for s in &self.survivors {
            let _ = writeln!(out, "SURVIVOR: {s}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{}", self.verdict);
        out
    }

    /// Flat per-class rows for CSV output.
    pub fn rows(&self) -> Vec<ClassRow> {
        self.classes
            .iter()
            .map(|c| ClassRow {
                representative: c.representative.to_string(),
                rank_set: c.rank_set.clone(),
                orbit_size: c.orbit_size,
                dual_representative: c.dual_representative.to_string(),
                cond_i: c.conditions.i,
                cond_ii: c.conditions.ii,
                cond_iii: c.conditions.iii,
                dual_cond_i: c.dual_conditions.i,
                dual_cond_ii: c.dual_conditions.ii,
                dual_cond_iii: c.dual_conditions.iii,
                cond_iv: c.iv,
                dual_cond_iv: c.iv_dual,
                witness: c
                    .witness
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_default(),
                certificate_steps: c.certificate.as_ref().map_or(0, |x| x.steps.len()),
                signature_duplicate_of: c
                    .signature_duplicate_of
                    .as_ref()
                    .map(|d| d.to_string())
                    .unwrap_or_default(),
                matched: c.matched.as_ref().map_or(String::new(), |m| m.label()),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub representative: String,
    pub rank_set: String,
    pub orbit_size: usize,
    pub dual_representative: String,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub dual_cond_i: bool,
    pub dual_cond_ii: bool,
    pub dual_cond_iii: bool,
    pub cond_iv: bool,
    pub dual_cond_iv: bool,
    pub witness: String,
    pub certificate_steps: usize,
    pub signature_duplicate_of: String,
    pub matched: String,
}

/// Condition IV with the search as decider and the table as a cross-check.
fn decide_iv(c: &Chain, index: Option<&MaximalChainIndex>) -> Result<(ConditionFour, bool)> {
    let outcome = cond_iv(c)?;
    let agrees =
        index.is_none_or(|ix| ix.holds(&c.smallest_blocks().prime_signature()) == outcome.holds());
    Ok((outcome, agrees))
}

/// Run the whole verification for `u` (n ≤ 7).
pub fn run_theorem5(u: Universe, options: PipelineOptions) -> Result<PipelineReport> {
    if u.n() > 7 {
        return Err(NcpError::TooLarge {
            operation: "theorem pipeline",
            n: u.n(),
            max: 7,
        });
    }
    let mut scanned = 0;
    let mut candidates = Vec::new();
    let mut disagreements = Vec::new();
    let mut memo: HashMap<Chain, FirstThree> = HashMap::new();
    let mut first_three = |c: &Chain, dis: &mut Vec<Chain>| -> Result<FirstThree> {
        if let Some(r) = memo.get(c) {
            return Ok(*r);
        }
        let r = FirstThree::of(c)?;
        if r.iii != r.iii_criterion {
            dis.push(c.clone());
        }
        memo.insert(c.clone(), r);
        Ok(r)
    };
    let mut failure = None;
    for_each_chain(u, None, |c| {
        if failure.is_some() {
            return;
        }
        scanned += 1;
        let mut step = || -> Result<bool> {
            let mine = first_three(c, &mut disagreements)?;
            if !mine.i || !mine.ii {
                // cheap rejection; III is still tallied for the comparison
                return Ok(false);
            }
            Ok(mine.all() && first_three(&c.dual(), &mut disagreements)?.all())
        };
        match step() {
            Ok(true) => candidates.push(c.clone()),
            Ok(false) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    disagreements.sort();
    disagreements.dedup();

    let fixtures = if u.n() == 7 {
        Some(Fixtures::embedded()?)
    } else {
        None
    };
    let fixture_keys = fixtures.as_ref().map(FixtureKeys::new);
    let index = MaximalChainIndex::get(u).ok();

    let mut classes = Vec::new();
    let mut iv_disagreements = Vec::new();
    let mut unsound = Vec::new();
    let mut certified = 0;
    for class in orbit_classes(&candidates) {
        let rep = &class.representative;
        let dual = &class.dual_representative;
        let (iv, ok1) = decide_iv(rep, index)?;
        let (iv_dual, ok2) = decide_iv(dual, index)?;
        if !(ok1 && ok2) {
            iv_disagreements.push(rep.clone());
        }
        let certificate = if options.certificates {
            pattern_refute(rep, options.convention)
        } else {
            None
        };
        if certificate.is_some() && iv.holds() {
            unsound.push(rep.clone());
        }
        let certificate_replayed = certificate.as_ref().map(|c| replay(rep, c).is_ok());
        if certificate_replayed == Some(true) {
            certified += 1;
        }
        classes.push(ClassReport {
            rank_set: rep.rank_set().to_string(),
            orbit_size: class.orbit_size,
            members_seen: class.members_seen,
            conditions: FirstThree::of(rep)?,
            dual_conditions: FirstThree::of(dual)?,
            iv: iv.holds(),
            iv_dual: iv_dual.holds(),
            witness: iv.witness().cloned(),
            dual_witness: iv_dual.witness().cloned(),
            certificate,
            certificate_replayed,
            corollary4: corollary4(rep),
            signature_duplicate_of: class.signature_duplicate_of.clone(),
            matched: fixture_keys.as_ref().map(|k| k.classify(rep, dual)),
            dual_representative: dual.clone(),
            representative: rep.clone(),
        });
    }
    let survivors: Vec<Chain> = classes
        .iter()
        .filter(|c| c.survives())
        .map(|c| c.representative.clone())
        .collect();
    let alignment = match &fixtures {
        Some(f) => Some(compare_fixture(&candidates, f)?),
        None => None,
    };
    Ok(PipelineReport {
        n: u.n(),
        chains_scanned: scanned,
        candidate_chains: candidates.len(),
        verdict: if survivors.is_empty() {
            VERIFIED
        } else {
            FAILED
        }
        .to_string(),
        classes,
        survivors,
        condition_three_disagreements: disagreements,
        condition_four_disagreements: iv_disagreements,
        unsound_certificates: unsound,
        certified_classes: certified,
        alignment,
    })
}

struct FixtureKeys {
    by_class: BTreeMap<Chain, (u8, String)>,
    by_signature: BTreeMap<Vec<Mask>, (u8, String)>,
}

impl FixtureKeys {
    fn new(f: &Fixtures) -> Self {
        let mut by_class = BTreeMap::new();
        let mut by_signature = BTreeMap::new();
        for case in &f.cases {
            for c in &case.chains {
                let entry = (case.case_id, c.to_string());
                by_class.entry(c.canonical_form()).or_insert(entry.clone());
                by_signature.entry(signature_key(c)).or_insert(entry);
            }
        }
        FixtureKeys {
            by_class,
            by_signature,
        }
    }

    fn classify(&self, rep: &Chain, dual: &Chain) -> ClassMatch {
        for (c, via_dual) in [(rep, false), (dual, true)] {
            if let Some((case_id, fixture)) = self.by_class.get(&c.canonical_form()) {
                return ClassMatch::Case {
                    case_id: *case_id,
                    fixture: fixture.clone(),
                    via_dual,
                };
            }
        }
        for (c, via_dual) in [(rep, false), (dual, true)] {
            if let Some((case_id, fixture)) = self.by_signature.get(&signature_key(c)) {
                return ClassMatch::SignatureCovered {
                    case_id: *case_id,
                    fixture: fixture.clone(),
                    via_dual,
                };
            }
        }
        ClassMatch::Unmatched
    }
}

fn signature_key(c: &Chain) -> Vec<Mask> {
    canonical_prime_signature(c.universe(), &c.smallest_blocks().prime_signature())
}

/// One listed chain checked against the computation.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureRow {
    pub case_id: u8,
    pub chain: String,
    pub found: bool,
    pub first_three: bool,
    pub dual_first_three: bool,
    pub iii_tests_agree: bool,
    pub hits_nonstrict: bool,
    pub hits_strict: bool,
    pub missing_hits: Vec<PatternHit>,
    pub iv_refuted: bool,
    pub certificate: bool,
    pub certificate_replayed: bool,
    pub certificate_forced: bool,
    pub expects_forced: bool,
}

impl FixtureRow {
    pub fn style_matches(&self) -> bool {
        self.certificate && self.certificate_forced == self.expects_forced
    }
}

/// Per-case summary of which reading of the inclusions reproduces the quoted
/// hits.
#[derive(Clone, Debug, Serialize)]
pub struct CaseConvention {
    pub case_id: u8,
    pub nonstrict: bool,
    pub strict: bool,
}

impl CaseConvention {
    pub fn label(&self) -> &'static str {
        match (self.nonstrict, self.strict) {
            (true, true) => "both",
            (true, false) => "non-strict only",
            (false, true) => "strict only",
            (false, false) => "neither",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Alignment {
    pub rank_sets_match: bool,
    pub computed_rank_sets: Vec<String>,
    pub rows: Vec<FixtureRow>,
    pub conventions: Vec<CaseConvention>,
}

impl Alignment {
    /// Every listed chain is a candidate, fails condition IV, and shows its
    /// quoted hits; and the rank sets agree.
    pub fn aligned(&self) -> bool {
        self.rank_sets_match
            && self.rows.iter().all(|r| {
                r.found && r.first_three && r.dual_first_three && r.iv_refuted && r.hits_nonstrict
            })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "rank sets: {} ({})",
            self.computed_rank_sets.join(" "),
            if self.rank_sets_match {
                "match"
            } else {
                "MISMATCH"
            }
        );
        let _ = writeln!(
            out,
            "{:>4} {:<18} {:>5} {:>5} {:>5} {:>6} {:>7} {:>6} {:>5}",
            "case", "chain", "found", "I-III", "hits", "strict", "IV fail", "cert", "style"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4} {:<18} {:>5} {:>5} {:>5} {:>6} {:>7} {:>6} {:>5}",
                r.case_id,
                r.chain,
                yes(r.found),
                yes(r.first_three && r.dual_first_three),
                yes(r.hits_nonstrict),
                yes(r.hits_strict),
                yes(r.iv_refuted),
                if r.certificate_replayed {
                    if r.certificate_forced {
                        "forced"
                    } else {
                        "count"
                    }
                } else {
                    "none"
                },
                yes(r.style_matches()),
            );
            if !r.missing_hits.is_empty() {
                let missing: Vec<String> = r.missing_hits.iter().map(|h| h.to_string()).collect();
                let _ = writeln!(out, "     not reproduced: {}", missing.join(" "));
            }
        }
        let _ = writeln!(out, "inclusion reading per case:");
        for c in &self.conventions {
            let _ = writeln!(out, "  case {:>2}: {}", c.case_id, c.label());
        }
        let _ = writeln!(
            out,
            "fixtures {}",
            if self.aligned() {
                "aligned"
            } else {
                "MISALIGNED"
            }
        );
        out
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Check every listed chain against the candidate set and the deciders.
pub fn compare_fixture(candidates: &[Chain], fixtures: &Fixtures) -> Result<Alignment> {
    let u = fixtures.universe;
    let candidate_classes: BTreeSet<Chain> =
        candidates.iter().map(|c| c.canonical_form()).collect();
    let computed = crate::enumeration::condition_one_rank_sets(u);
    let rank_sets_match = computed == fixtures.rank_sets;
    let mut rows = Vec::new();
    let mut conventions = Vec::new();
    for case in &fixtures.cases {
        let mut nonstrict_all = true;
        let mut strict_all = true;
        for c in &case.chains {
            let loose = detect_patterns(c, InclusionConvention::NonStrict);
            let strict = detect_patterns(c, InclusionConvention::Strict);
            let missing: Vec<PatternHit> = case
                .claimed_hits
                .iter()
                .filter(|h| !loose.contains(h))
                .copied()
                .collect();
            let hits_strict = case.claimed_hits.iter().all(|h| strict.contains(h));
            nonstrict_all &= missing.is_empty();
            strict_all &= hits_strict;
            let mine = FirstThree::of(c)?;
            let dual = FirstThree::of(&c.dual())?;
            let iv = cond_iv_certified(c)?;
            let cert = iv.certificate();
            rows.push(FixtureRow {
                case_id: case.case_id,
                chain: c.to_string(),
                found: candidate_classes.contains(&c.canonical_form()),
                first_three: mine.all(),
                dual_first_three: dual.all(),
                iii_tests_agree: mine.iii == mine.iii_criterion,
                hits_nonstrict: missing.is_empty(),
                hits_strict,
                missing_hits: missing,
                iv_refuted: !iv.holds(),
                certificate: cert.is_some(),
                certificate_replayed: cert.is_some_and(|x| replay(c, x).is_ok()),
                certificate_forced: cert.is_some_and(|x| x.uses_forced_blocks()),
                expects_forced: case.expects_forced_argument,
            });
        }
        conventions.push(CaseConvention {
            case_id: case.case_id,
            nonstrict: nonstrict_all,
            strict: strict_all,
        });
    }
    Ok(Alignment {
        rank_sets_match,
        computed_rank_sets: computed.iter().map(|r| r.to_string()).collect(),
        rows,
        conventions,
    })
}

/// Alignment of the embedded table against a fresh candidate scan at n = 7.
pub fn fixtures_alignment() -> Result<Alignment> {
    let fixtures = Fixtures::embedded()?;
    let report = run_theorem5(fixtures.universe, PipelineOptions::default())?;
    report
        .alignment
        .ok_or_else(|| NcpError::Fixture("no alignment computed".into()))
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    pub dual: bool,
    pub dominant: bool,
    pub strict_patterns: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub chain: Chain,
    pub rank_set: String,
    pub smallest_blocks: Vec<(u8, String, String)>,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii_criterion: bool,
    pub cond_iii_clause: Option<String>,
    pub cond_iii_bruteforce: Option<bool>,
    pub cond_iv: ConditionFour,
    pub hits: Vec<PatternHit>,
    pub strict_hits: Option<Vec<PatternHit>>,
    pub corollary4: Option<u8>,
    pub certificate_replayed: Option<bool>,
    pub dominant: Option<Option<Partition>>,
    pub cond_iv_prime: Option<bool>,
    pub dual: Option<Box<ChainReport>>,
}

/// Everything known about one chain.
pub fn check_chain(u: Universe, text: &str, options: &CheckOptions) -> Result<ChainReport> {
    let chain = Chain::parse(u, text)?;
    check_parsed(&chain, options)
}

fn check_parsed(chain: &Chain, options: &CheckOptions) -> Result<ChainReport> {
    let u = chain.universe();
    let family = chain.smallest_blocks();
    let iv = cond_iv_certified(chain)?;
    let certificate_replayed = iv.certificate().map(|c| replay(chain, c).is_ok());
    let (dominant, iv_prime) = if options.dominant {
        (
            Some(dominant_vertex(chain)?.dominant),
            Some(cond_iv_prime(chain)?),
        )
    } else {
        (None, None)
    };
    let dual = if options.dual {
        let inner = CheckOptions {
            dual: false,
            ..options.clone()
        };
        Some(Box::new(check_parsed(&chain.dual(), &inner)?))
    } else {
        None
    };
    Ok(ChainReport {
        rank_set: chain.rank_set().to_string(),
        smallest_blocks: u
            .elements()
            .map(|i| (i, mask_set(family.block(i)), mask_set(family.prime(i))))
            .collect(),
        cond_i: chain.cond_i(),
        cond_ii: chain.cond_ii(),
        cond_iii_criterion: chain.cond_iii_criterion(),
        cond_iii_clause: chain.cond_iii_clause().map(|c| c.label().to_string()),
        cond_iii_bruteforce: chain.cond_iii_bruteforce().ok(),
        cond_iv: iv,
        hits: detect_patterns(chain, InclusionConvention::NonStrict),
        strict_hits: options
            .strict_patterns
            .then(|| detect_patterns(chain, InclusionConvention::Strict)),
        corollary4: corollary4(chain),
        certificate_replayed,
        dominant,
        cond_iv_prime: iv_prime,
        dual,
        chain: chain.clone(),
    })
}

impl ChainReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "chain: {}   ranks {}", self.chain, self.rank_set);
        let _ = writeln!(out, "  i  F_i              F_i'");
        for (i, f, p) in &self.smallest_blocks {
            let _ = writeln!(out, "  {i}  {f:<16} {p}");
        }
        let _ = writeln!(out, "condition I:   {}", self.cond_i);
        let _ = writeln!(out, "condition II:  {}", self.cond_ii);
        let _ = writeln!(
            out,
            "condition III: {}{}{}",
            self.cond_iii_criterion,
            self.cond_iii_clause
                .as_ref()
                .map_or(String::new(), |c| format!(" (clause {c})")),
            self.cond_iii_bruteforce
                .map_or(String::new(), |b| format!(", exhaustive {b}"))
        );
        let _ = writeln!(out, "condition IV:  {}", self.cond_iv.holds());
        match &self.cond_iv {
            ConditionFour::Witness { witness } => {
                let _ = writeln!(out, "  witness: {witness}");
            }
            ConditionFour::Refuted { nodes, certificate } => {
                let _ = writeln!(out, "  no maximal chain qualifies ({nodes} search nodes)");
                match certificate {
                    Some(c) => {
                        let _ = writeln!(
                            out,
                            "  certificate ({} steps, replay {}):",
                            c.steps.len(),
                            if self.certificate_replayed == Some(true) {
                                "ok"
                            } else {
                                "FAILED"
                            }
                        );
                        for line in c.render().lines() {
                            let _ = writeln!(out, "  {line}");
                        }
                    }
                    None => {
                        let _ = writeln!(out, "  no propagation certificate");
                    }
                }
            }
        }
        let hits: Vec<String> = self.hits.iter().map(|h| h.to_string()).collect();
        let _ = writeln!(out, "pattern hits: {}", hits.join(" "));
        if let Some(strict) = &self.strict_hits {
            let s: Vec<String> = strict.iter().map(|h| h.to_string()).collect();
            let _ = writeln!(out, "strict hits:  {}", s.join(" "));
        }
        if let Some(i) = self.corollary4 {
            let _ = writeln!(out, "no companion left at index {i}");
        }
        if let Some(d) = &self.dominant {
            let _ = writeln!(
                out,
                "dominant vertex: {}",
                d.map_or("none".to_string(), |p| p.to_string())
            );
        }
        if let Some(p) = self.cond_iv_prime {
            let _ = writeln!(out, "condition IV': {p}");
        }
        if let Some(d) = &self.dual {
            let _ = writeln!(out, "\ndual:");
            out.push_str(&d.render_text());
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Violation {
    pub chain: Chain,
    pub hit: PatternHit,
    /// Excluded companions that some compatible maximal chain does use.
    pub used: Vec<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Report {
    pub chains: usize,
    pub hits: usize,
    /// Hits on chains that admit at least one compatible maximal chain.
    pub live_hits: usize,
    pub violations: Vec<Lemma3Violation>,
}

/// For each chain, every hit's excluded range must avoid `C_i` for every
/// maximal chain compatible with the chain's prime signature.
pub fn validate_lemma3<'a>(
    u: Universe,
    chains: impl IntoIterator<Item = &'a Chain>,
) -> Result<Lemma3Report> {
    let index = MaximalChainIndex::get(u)?;
    let mut unions: HashMap<Vec<Mask>, Option<[Mask; crate::universe::MAX_N]>> = HashMap::new();
    let mut report = Lemma3Report {
        chains: 0,
        hits: 0,
        live_hits: 0,
        violations: Vec::new(),
    };
    for c in chains {
        report.chains += 1;
        let family = c.smallest_blocks();
        let primes = family.prime_signature();
        let union = *unions
            .entry(primes.clone())
            .or_insert_with(|| index.holds(&primes).then(|| index.companion_union(&primes)));
        for hit in detect_in_family(&family, InclusionConvention::NonStrict) {
            report.hits += 1;
            let Some(union) = union else { continue };
            report.live_hits += 1;
            let used = hit.excluded(u) & union[hit.i as usize - 1];
            if used != 0 {
                report.violations.push(Lemma3Violation {
                    chain: c.clone(),
                    hit,
                    used: crate::universe::elements(used).collect(),
                });
            }
        }
    }
    Ok(report)
}

/// [`validate_lemma3`] over every chain of NC(n).
pub fn validate_lemma3_all(u: Universe) -> Result<Lemma3Report> {
    let mut all = Vec::new();
    for_each_chain(u, None, |c| all.push(c.clone()));
    validate_lemma3(u, &all)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StructureReport {
    pub chains: usize,
    /// Incomparable `F_i`, `F_j` that meet or cross.
    pub lemma1: Vec<(Chain, u8, u8)>,
    /// Failures of the nested-interval statement.
    pub corollary2: Vec<(Chain, u8, u8, u8)>,
    /// `j ∈ F_i` but `F_j ⊄ F_i`.
    pub subset_propagation: Vec<(Chain, u8, u8)>,
}

impl StructureReport {
    pub fn clean(&self) -> bool {
        self.lemma1.is_empty() && self.corollary2.is_empty() && self.subset_propagation.is_empty()
    }
}

/// Structural facts about smallest blocks, checked on every chain of NC(n).
pub fn validate_structure(u: Universe) -> StructureReport {
    let mut report = StructureReport::default();
    for_each_chain(u, None, |c| {
        report.chains += 1;
        check_structure(c, &c.smallest_blocks(), &mut report);
    });
    report
}

fn check_structure(c: &Chain, f: &SmallestBlockFamily, report: &mut StructureReport) {
    let u = c.universe();
    let sub = |a: Mask, b: Mask| a & !b == 0;
    for i in u.elements() {
        let fi = f.block(i);
        for j in u.elements() {
            let fj = f.block(j);
            if !sub(fi, fj) && !sub(fj, fi) && (fi & fj != 0 || masks_cross(fi, fj)) {
                report.lemma1.push((c.clone(), i, j));
            }
            if fi & bit(j) != 0 && !sub(fj, fi) {
                report.subset_propagation.push((c.clone(), i, j));
            }
        }
        for k in 2..u.n() {
            let far = u.offset(i, k as i32);
            if fi & bit(far) == 0 {
                continue;
            }
            let inside = (1..k as i32).fold(0, |m, d| m | bit(u.offset(i, d)));
            for j in crate::universe::elements(inside) {
                if fi & bit(j) != 0 {
                    continue;
                }
                let fj = f.block(j);
                if !(sub(fi, fj) || sub(fj, inside)) {
                    report.corollary2.push((c.clone(), i, k, j));
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DominanceValidation {
    pub chains: usize,
    pub with_dominant: usize,
    pub multiple_dominant: Vec<Chain>,
    pub neighbour_mismatch: Vec<Chain>,
    /// Condition IV holds but IV′ fails.
    pub strength_violations: Vec<Chain>,
}

impl DominanceValidation {
    pub fn clean(&self) -> bool {
        self.multiple_dominant.is_empty()
            && self.neighbour_mismatch.is_empty()
            && self.strength_violations.is_empty()
    }
}

/// Dominant-vertex uniqueness, `u_i′ = F_i′`, and IV ⇒ IV′ over `chains`.
pub fn validate_dominance<'a>(
    u: Universe,
    chains: impl IntoIterator<Item = &'a Chain>,
) -> Result<DominanceValidation> {
    ApartmentIndex::get(u)?;
    let index = MaximalChainIndex::get(u)?;
    let mut iv_memo: HashMap<Vec<Mask>, bool> = HashMap::new();
    let mut iv = |c: &Chain| {
        let primes = c.smallest_blocks().prime_signature();
        *iv_memo
            .entry(primes.clone())
            .or_insert_with(|| index.holds(&primes))
    };
    let mut out = DominanceValidation::default();
    for c in chains {
        out.chains += 1;
        let report = dominant_vertex(c)?;
        if report.all_dominant.len() > 1 {
            out.multiple_dominant.push(c.clone());
        }
        let iv_prime = match report.dominant {
            Some(d) => {
                out.with_dominant += 1;
                let single = Chain::single(d)?;
                if single.smallest_blocks().prime_signature()
                    != c.smallest_blocks().prime_signature()
                {
                    out.neighbour_mismatch.push(c.clone());
                }
                iv(&single)
            }
            None => true,
        };
        if iv(c) && !iv_prime {
            out.strength_violations.push(c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_pipeline_runs() {
        let report = run_theorem5(Universe::new(4).unwrap(), PipelineOptions::default()).unwrap();
        assert!(report.chains_scanned > 0);
        assert!(report.alignment.is_none());
        assert!(report.verdict == VERIFIED || report.verdict == FAILED);
    }

    #[test]
    fn check_reports() {
        let u = Universe::new(7).unwrap();
        let r = check_chain(u, "12,46", &CheckOptions::default()).unwrap();
        assert!(r.cond_i && r.cond_ii && r.cond_iii_criterion);
        assert!(!r.cond_iv.holds());
        assert_eq!(r.certificate_replayed, Some(true));
        let r = check_chain(u, "24<246", &CheckOptions::default()).unwrap();
        assert!(r.cond_iv.holds());
        assert!(r.render_text().contains("witness"));
        assert!(check_chain(u, "13<24", &CheckOptions::default()).is_err());
    }
}
