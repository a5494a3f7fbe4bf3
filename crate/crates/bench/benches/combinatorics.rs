use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ncp_core::apartments::{dominant_vertex, enumerate_nc_spanning_trees};
use ncp_core::certificate::{pattern_refute, replay};
use ncp_core::condition_four::{cond_iv, cond_iv_for_primes};
use ncp_core::enumeration::{enumerate_maximal_chains, enumerate_ncp, for_each_chain};
use ncp_core::patterns::InclusionConvention;
use ncp_core::{Chain, Universe};

fn u7() -> Universe {
    Universe::new(7).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let u = u7();
    c.bench_function("enumerate_ncp n=7", |b| {
        b.iter(|| enumerate_ncp(black_box(u)).count())
    });
    c.bench_function("maximal chains n=7", |b| {
        b.iter(|| enumerate_maximal_chains(black_box(u)).count())
    });
    c.bench_function("all chains n=7", |b| {
        b.iter(|| {
            let mut k = 0usize;
            for_each_chain(black_box(u), None, |_| k += 1);
            k
        })
    });
    c.bench_function("nc spanning trees n=7", |b| {
        b.iter(|| enumerate_nc_spanning_trees(black_box(u)).len())
    });
}

fn conditions(c: &mut Criterion) {
    let u = u7();
    let refuted = Chain::parse(u, "12,46").unwrap();
    let control = Chain::parse(u, "24<246").unwrap();
    let primes = refuted.smallest_blocks().prime_signature();
    c.bench_function("cond_iv search 12,46", |b| {
        b.iter(|| cond_iv_for_primes(u, black_box(&primes)).unwrap().holds())
    });
    c.bench_function("cond_iv 24<246", |b| {
        b.iter(|| cond_iv(black_box(&control)).unwrap().holds())
    });
    c.bench_function("cond_iii bruteforce 12<123", |b| {
        let chain = Chain::parse(u, "12<123").unwrap();
        b.iter(|| black_box(&chain).cond_iii_bruteforce().unwrap())
    });
    c.bench_function("pattern_refute 12,46", |b| {
        b.iter(|| pattern_refute(black_box(&refuted), InclusionConvention::NonStrict))
    });
    let cert = pattern_refute(&refuted, InclusionConvention::NonStrict).unwrap();
    c.bench_function("replay 12,46", |b| {
        b.iter(|| replay(black_box(&refuted), black_box(&cert)).is_ok())
    });
    c.bench_function("dominant vertex 13<13457", |b| {
        let chain = Chain::parse(u, "13<13457").unwrap();
        b.iter(|| dominant_vertex(black_box(&chain)).unwrap().dominant)
    });
}

criterion_group!(benches, enumeration, conditions);
criterion_main!(benches);
