use criterion::{black_box, criterion_group, criterion_main, Criterion};

use nubshift_core::algebra::{direct_product, group_by_name, make_cyclic};
use nubshift_core::shift::image_sft;
use nubshift_core::structure::{depth, eta_solve};
use nubshift_core::{EPWord, GroupShiftSFT, SlidingBlockHom};

fn bench_depth(c: &mut Criterion) {
    let s3 = group_by_name("S3").unwrap();
    let full = GroupShiftSFT::full(&s3);
    let c2 = make_cyclic(2).unwrap();
    let prod = GroupShiftSFT::full(&direct_product(&c2, &make_cyclic(3).unwrap()));
    c.bench_function("depth/full-S3", |b| b.iter(|| depth(black_box(&full)).unwrap()));
    c.bench_function("depth/full-C2xC3", |b| b.iter(|| depth(black_box(&prod)).unwrap()));
}

fn bench_language(c: &mut Criterion) {
    let c2 = make_cyclic(2).unwrap();
    let h = GroupShiftSFT::generated(c2, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
    c.bench_function("language/n=12", |b| b.iter(|| h.language(black_box(12)).unwrap()));
    c.bench_function("trim/window-3", |b| {
        b.iter(|| GroupShiftSFT::from_codes(h.alphabet().clone(), 3, h.codes().to_vec()).unwrap().trim())
    });
}

fn bench_image(c: &mut Criterion) {
    let c2 = make_cyclic(2).unwrap();
    let phi = SlidingBlockHom::linear(&c2, &[1, 0, 1], 0).unwrap();
    let full = GroupShiftSFT::full(&c2);
    c.bench_function("image_sft/x+x^2", |b| b.iter(|| image_sft(black_box(&phi), &full).unwrap()));
}

fn bench_eta(c: &mut Criterion) {
    let s3 = group_by_name("S3").unwrap();
    let f = EPWord::finite(&s3, -2, vec![1, 3, 5, 2, 4]).unwrap();
    c.bench_function("eta_solve/S3-k=3", |b| b.iter(|| eta_solve(black_box(&f), 3).unwrap()));
}

criterion_group!(benches, bench_depth, bench_language, bench_image, bench_eta);
criterion_main!(benches);
