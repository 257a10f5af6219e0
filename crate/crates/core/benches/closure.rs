use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mauto::automata::{MAutomaton, TupleWord};
use mauto::structures::{cnf_add, ordinal_presentation, Cnf};
use mauto::theories::Element;

fn ordinals() -> Vec<Cnf> {
    let mut out = vec![Cnf::zero()];
    for a in 0..4u64 {
        for b in 0..4u64 {
            for c in 1..4u64 {
                out.push(Cnf::new(vec![a, b, c]).unwrap());
            }
        }
    }
    out
}

fn sums() -> Vec<TupleWord> {
    let all = ordinals();
    let nats = |w: &[u64]| w.iter().map(|&n| Element::Nat(n)).collect::<Vec<_>>();
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            let s = cnf_add(a, b);
            out.push(TupleWord(vec![nats(a.coeffs()), nats(b.coeffs()), nats(s.coeffs())]));
        }
    }
    out
}

fn workloads(c: &mut Criterion, mode: &str, run: &dyn Fn(&mut (dyn FnMut() + Send))) {
    let p = ordinal_presentation().unwrap();
    let plus: MAutomaton = p.relation("plus").unwrap().clone();
    let words = sums();
    let mut group = c.benchmark_group("closure");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("accepts_all", mode), |b| {
        b.iter(|| run(&mut || assert!(plus.accepts_all(&words).unwrap().iter().all(|x| *x))))
    });
    group.bench_function(BenchmarkId::new("complement", mode), |b| {
        b.iter(|| run(&mut || drop(plus.complement().unwrap())))
    });
    group.bench_function(BenchmarkId::new("project", mode), |b| {
        b.iter(|| run(&mut || drop(plus.project(3).unwrap())))
    });
    group.finish();
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    workloads(c, "sequential", &|f| one.install(f));
    workloads(c, "parallel", &|f| all.install(f));
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    workloads(c, "sequential", &|f| f());
}

criterion_group!(benches, bench);
criterion_main!(benches);
