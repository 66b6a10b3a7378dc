use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use seqlogic::arith::godel_encode;
use seqlogic::complexity::profile;
use seqlogic::fol::{Formula, Signature};
use seqlogic::satgen::{SatMode, Satgen};
use seqlogic::testgen::{rng, FormulaShape};
use seqlogic::translations::make_identity;

fn corpus(n: usize) -> Vec<Formula> {
    let shape = FormulaShape::relational(8);
    let mut r = rng(7);
    (0..n).map(|_| shape.formula(&mut r)).collect()
}

fn measures(c: &mut Criterion) {
    let formulas = corpus(200);
    c.bench_function("profile/200 formulas", |b| b.iter(|| formulas.iter().map(|f| profile(f).rho0).sum::<u32>()));
}

fn translate(c: &mut Criterion) {
    let formulas = corpus(200);
    let id = make_identity(&FormulaShape::relational(8).signature());
    c.bench_function("translate/identity 200 formulas", |b| {
        b.iter(|| formulas.iter().map(|f| id.apply(f, None).unwrap().symbol_count()).sum::<usize>())
    });
}

fn sat(c: &mut Criterion) {
    let g = Satgen::new(&Signature::with_preds("theta", &[("P", 1)]).unwrap()).unwrap();
    let mut group = c.benchmark_group("gen_sat");
    for n in [1u32, 3, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| g.gen_sat(n, SatMode::Optimized).unwrap()));
    }
    group.finish();
}

fn encode(c: &mut Criterion) {
    let formulas = corpus(200);
    c.bench_function("godel_encode/200 formulas", |b| b.iter(|| formulas.iter().map(|f| godel_encode(f).bits()).sum::<u64>()));
}

criterion_group!(benches, measures, translate, sat, encode);
criterion_main!(benches);
