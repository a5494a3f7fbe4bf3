//! Acceptance checks for the seven-strand verification, one line per
//! criterion. Every comparison is exact.
//!
//! Two criteria restate claims from the transcribed case table that the
//! exhaustive computation contradicts (see `KNOWN_FAILURES`). They are
//! reported as FAIL; the test asserts that exactly those two fail, so a
//! regression anywhere else, or an unexpected fix, is caught.

use ncp_core::apartments::{cond_iv_prime, dominant_vertex, enumerate_nc_spanning_trees};
use ncp_core::certificate::{pattern_refute, replay};
use ncp_core::condition_four::{cond_iv, verify_witness};
use ncp_core::enumeration::{
    condition_one_rank_sets, enumerate_maximal_chains, enumerate_ncp, for_each_chain,
};
use ncp_core::fixtures::Fixtures;
use ncp_core::lattice::NcLattice;
use ncp_core::patterns::InclusionConvention;
use ncp_core::pipeline::{
    fixtures_alignment, run_theorem5, validate_dominance, validate_lemma3, validate_lemma3_all,
    validate_structure, FirstThree, PipelineOptions, VERIFIED,
};
use ncp_core::{Chain, Symmetry, Universe};

const KNOWN_FAILURES: [u8; 2] = [5, 6];

struct Outcome {
    id: u8,
    pass: bool,
    detail: String,
}

fn u(n: usize) -> Universe {
    Universe::new(n).unwrap()
}

fn catalan_recurrence(n: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for m in 1..=n {
        c.push((0..m).map(|k| c[k] * c[m - 1 - k]).sum());
    }
    c
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn candidates(u: Universe) -> Vec<Chain> {
    let mut out = Vec::new();
    for_each_chain(u, None, |c| {
        let mine = FirstThree::of(c).unwrap();
        if mine.all() && FirstThree::of(&c.dual()).unwrap().all() {
            out.push(c.clone());
        }
    });
    out
}

fn criterion_1() -> Outcome {
    let expected = catalan_recurrence(7);
    let counts: Vec<u64> = (1..=7)
        .map(|n| enumerate_ncp(u(n)).count() as u64)
        .collect();
    let literal = [1u64, 2, 5, 14, 42, 132, 429];
    Outcome {
        id: 1,
        pass: counts == expected[1..] && counts == literal,
        detail: format!("|NC(1..7)| = {counts:?}"),
    }
}

fn criterion_2() -> Outcome {
    let counts: Vec<(u64, u64)> = (3..=7)
        .map(|n| {
            let got = enumerate_maximal_chains(u(n)).count() as u64;
            (got, (n as u64).pow(n as u32 - 2))
        })
        .collect();
    Outcome {
        id: 2,
        pass: counts.iter().all(|(a, b)| a == b) && counts[4].0 == 16807,
        detail: format!(
            "maximal chains n=3..7: {:?}",
            counts.iter().map(|c| c.0).collect::<Vec<_>>()
        ),
    }
}

fn criterion_3() -> Outcome {
    let u7 = u(7);
    let lat = NcLattice::get(u7);
    let duals: Vec<_> = lat
        .elements()
        .iter()
        .map(|p| p.kreweras_dual().unwrap())
        .collect();
    let mut bad_rank = 0;
    let mut bad_order = 0;
    let mut bad_double = 0;
    let mut comparable = 0;
    let rot = Symmetry::rotation(u7, -1);
    for (i, p) in lat.elements().iter().enumerate() {
        if duals[i].rank() != 6 - p.rank() {
            bad_rank += 1;
        }
        if duals[i].kreweras_dual().unwrap() != p.apply(rot) {
            bad_double += 1;
        }
        for (j, q) in lat.elements().iter().enumerate() {
            let forward = p.leq(q).unwrap();
            if forward {
                comparable += 1;
            }
            if forward != duals[j].leq(&duals[i]).unwrap() {
                bad_order += 1;
            }
        }
    }
    Outcome {
        id: 3,
        pass: lat.len() == 429 && bad_rank == 0 && bad_order == 0 && bad_double == 0,
        detail: format!(
            "429 duals: rank errors {bad_rank}, order errors {bad_order} over {comparable} comparable pairs, double-dual errors {bad_double}"
        ),
    }
}

fn criterion_4() -> Outcome {
    let got: Vec<String> = condition_one_rank_sets(u(7))
        .iter()
        .map(|r| r.to_string())
        .collect();
    let expected = [
        "{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{1,4}", "{1,5}", "{2,3}", "{1,2,3}", "{1,2,5}",
    ];
    Outcome {
        id: 4,
        pass: got == expected,
        detail: got.join(" "),
    }
}

fn criterion_5(fx: &Fixtures) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for c in fx.chains() {
        total += 1;
        let crit = c.cond_iii_criterion();
        let brute = c.cond_iii_bruteforce().unwrap();
        let iv = cond_iv(c).unwrap().holds();
        if !(c.cond_i() && c.cond_ii() && crit && brute && !iv) {
            bad.push(format!(
                "{c} (I {} II {} III crit {crit} brute {brute} IV {iv})",
                c.cond_i(),
                c.cond_ii()
            ));
        }
    }
    Outcome {
        id: 5,
        pass: total == 58 && bad.is_empty(),
        detail: format!("{total} fixture chains; failing: {}", list(&bad)),
    }
}

fn criterion_6(fx: &Fixtures) -> Outcome {
    let mut bad = Vec::new();
    for case in &fx.cases {
        for c in &case.chains {
            let family = c.smallest_blocks();
            for hit in &case.claimed_hits {
                if !hit.holds(&family, InclusionConvention::NonStrict) {
                    bad.push(format!("case {} {c} {hit}", case.case_id));
                }
            }
        }
    }
    let alignment = fixtures_alignment().unwrap();
    for conv in &alignment.conventions {
        println!("    case {:2}: {}", conv.case_id, conv.label());
    }
    Outcome {
        id: 6,
        pass: fx.cases.len() == 39 && bad.is_empty(),
        detail: format!("39 cases; hits not reproduced: {}", list(&bad)),
    }
}

fn criterion_7() -> Outcome {
    let report = run_theorem5(u(7), PipelineOptions::default()).unwrap();
    Outcome {
        id: 7,
        pass: report.survivors.is_empty()
            && report.verdict == VERIFIED
            && report.unsound_certificates.is_empty(),
        detail: format!(
            "{} chains, {} candidates, {} classes, {} survivors, {}",
            report.chains_scanned,
            report.candidate_chains,
            report.classes.len(),
            report.survivors.len(),
            report.verdict
        ),
    }
}

fn criterion_8(cands: &[Chain]) -> Outcome {
    // Candidates admit no compatible maximal chain at all, so the check is
    // repeated over every chain of NC(7) where survivors do exist.
    let on_candidates = validate_lemma3(u(7), cands).unwrap();
    let everywhere = validate_lemma3_all(u(7)).unwrap();
    Outcome {
        id: 8,
        pass: on_candidates.violations.is_empty() && everywhere.violations.is_empty() && everywhere.live_hits > 0,
        detail: format!(
            "{} candidate chains with {} hits; {} chains with {} hits ({} with a compatible maximal chain); {} violations",
            on_candidates.chains,
            on_candidates.hits,
            everywhere.chains,
            everywhere.hits,
            everywhere.live_hits,
            on_candidates.violations.len() + everywhere.violations.len()
        ),
    }
}

fn criterion_9() -> Outcome {
    let report = validate_structure(u(7));
    Outcome {
        id: 9,
        pass: report.clean() && report.chains > 0,
        detail: format!(
            "{} chains; incomparable blocks meeting or crossing {}, interval nesting failures {}",
            report.chains,
            report.lemma1.len(),
            report.corollary2.len()
        ),
    }
}

fn criterion_10() -> Outcome {
    let t4 = enumerate_nc_spanning_trees(u(4)).len() as u64;
    let t7 = enumerate_nc_spanning_trees(u(7)).len() as u64;
    let formula = |n: u64| binomial(3 * n - 3, n - 1) / (2 * n - 1);
    let example = Chain::parse(u(7), "13<13457").unwrap();
    let no_dominant = dominant_vertex(&example).unwrap().dominant.is_none();
    let iv_prime = cond_iv_prime(&example).unwrap();
    let mut corpus = Vec::new();
    for_each_chain(u(7), None, |c| corpus.push(c.clone()));
    let dom = validate_dominance(u(7), &corpus).unwrap();
    Outcome {
        id: 10,
        pass: t4 == 12 && t4 == formula(4) && t7 == 1428 && t7 == formula(7) && no_dominant && iv_prime && dom.clean(),
        detail: format!(
            "trees {t4}/{t7}; 13<13457 dominant none {no_dominant}, IV' {iv_prime}; {} chains scanned, {} with dominant vertex, {} counterexamples",
            dom.chains,
            dom.with_dominant,
            dom.multiple_dominant.len() + dom.neighbour_mismatch.len() + dom.strength_violations.len()
        ),
    }
}

fn criterion_11(fx: &Fixtures) -> Outcome {
    let control = Chain::parse(u(7), "24<246").unwrap();
    let iv = cond_iv(&control).unwrap();
    let witnessed = iv.witness().is_some_and(|w| verify_witness(&control, w));
    let no_cert = pattern_refute(&control, InclusionConvention::NonStrict).is_none();
    let mut bad = Vec::new();
    for c in fx.chains() {
        match pattern_refute(c, InclusionConvention::NonStrict) {
            Some(cert) if replay(c, &cert).is_ok() => {}
            Some(_) => bad.push(format!("{c} (replay rejected)")),
            None => bad.push(format!("{c} (no certificate)")),
        }
    }
    Outcome {
        id: 11,
        pass: witnessed && no_cert && bad.is_empty(),
        detail: format!(
            "24<246 witness verified {witnessed}, no certificate {no_cert}; fixture certificates failing: {}",
            list(&bad)
        ),
    }
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

#[test]
fn acceptance() {
    let fx = Fixtures::embedded().unwrap();
    let cands = candidates(u(7));
    let outcomes = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&fx),
        criterion_6(&fx),
        criterion_7(),
        criterion_8(&cands),
        criterion_9(),
        criterion_10(),
        criterion_11(&fx),
    ];
    for o in &outcomes {
        println!(
            "criterion {:2}: {} {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let failing: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert_eq!(failing, KNOWN_FAILURES, "unexpected acceptance outcome");
}
