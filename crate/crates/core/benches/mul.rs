use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use imtheta::{eval_e, member_theta, parse_poly, FieldTag};

fn bench_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    for field in [FieldTag::Rational, FieldTag::prime(101).unwrap()] {
        let f = parse_poly("z1 + 2*z2 - u1 + 1/3*u2 + 1", 2, field).unwrap();
        for k in [3u32, 6] {
            let a = f.pow(k);
            let b = f.pow(k - 1);
            group.bench_with_input(BenchmarkId::new(field.to_string(), k), &(a, b), |bench, (a, b)| {
                bench.iter(|| black_box(a.checked_mul(b).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_image(c: &mut Criterion) {
    let f = parse_poly("(u1*z1 + u2*z2 - 1)*(z1^2 + z2 + 1)^3 + u1^2*z2^3", 2, FieldTag::Rational).unwrap();
    c.bench_function("eval_e", |b| b.iter(|| black_box(eval_e(&f))));
    c.bench_function("member_theta", |b| b.iter(|| black_box(member_theta(&f).unwrap())));
}

criterion_group!(benches, bench_mul, bench_image);
criterion_main!(benches);
