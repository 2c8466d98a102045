use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use kottsep_core::normed::{auerbach_basis, separated_points, Norm, NormSpec, PValue, Vector, Q};
use kottsep_core::Budgets;

fn cut_cube(n: usize) -> NormSpec {
    let mut rows: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| Q::from_integer(i64::from(i == j).into())).collect()).collect();
    rows.push(vec![Q::new(2.into(), 3.into()); n]);
    NormSpec::facets(n, rows).unwrap()
}

fn eval(c: &mut Criterion) {
    let b = Budgets::default();
    let x = Vector::exact_from_i64(&[3, -1, 4, -1, 5, -9]);
    let mut g = c.benchmark_group("norm_eval");
    for (name, spec) in
        [("l1", NormSpec::l1(6).unwrap()), ("linf", NormSpec::linf(6).unwrap()), ("cut_cube", cut_cube(6))]
    {
        let norm = Norm::new(spec, &b).unwrap();
        g.bench_function(name, |bench| bench.iter(|| norm.eval(black_box(&x)).unwrap()));
    }
    let l3 = Norm::new(NormSpec::lp(6, PValue::Finite(Q::from_integer(3.into()))).unwrap(), &b).unwrap();
    let xf = Vector::Float(vec![3.0, -1.0, 4.0, -1.0, 5.0, -9.0]);
    g.bench_function("l3", |bench| bench.iter(|| l3.eval(black_box(&xf)).unwrap()));
    g.finish();
}

fn pipelines(c: &mut Criterion) {
    let b = Budgets::default();
    let mut g = c.benchmark_group("separated_points");
    g.sample_size(10);
    for n in [3, 5, 7] {
        let norm = Norm::new(cut_cube(n), &b).unwrap();
        g.bench_with_input(BenchmarkId::new("cut_cube", n), &norm, |bench, norm| {
            bench.iter(|| separated_points(norm, &b).unwrap())
        });
        let l2 = Norm::new(NormSpec::l2(n).unwrap(), &b).unwrap();
        g.bench_with_input(BenchmarkId::new("l2", n), &l2, |bench, norm| {
            bench.iter(|| separated_points(norm, &b).unwrap())
        });
    }
    g.finish();

    let norm = Norm::new(NormSpec::l1(5).unwrap(), &b).unwrap();
    c.bench_function("auerbach_basis/l1_5", |bench| bench.iter(|| auerbach_basis(black_box(&norm), &b).unwrap()));
}

criterion_group!(benches, eval, pipelines);
criterion_main!(benches);
