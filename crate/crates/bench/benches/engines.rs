use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use groupoid_toric::commutation::check_corner_commutation;
use groupoid_toric::dense::{hamiltonian_trace, DEFAULT_BUDGET};
use groupoid_toric::{build_hamiltonian, Corner, Groupoid, Lattice, ModelId, StabilizerModel};

fn stabilizer_gsd(c: &mut Criterion) {
    let mut group = c.benchmark_group("stabilizer_gsd");
    for size in [4, 6, 8] {
        let l = Lattice::torus(size, size).unwrap();
        for model in [ModelId::M1, ModelId::MNondeg, ModelId::Zn(4)] {
            let h = build_hamiltonian(model, &l).unwrap();
            group.bench_with_input(BenchmarkId::new(model.to_string(), size), &h, |b, h| {
                b.iter(|| {
                    StabilizerModel::from_hamiltonian(black_box(h))
                        .unwrap()
                        .gsd()
                })
            });
        }
    }
    group.finish();
}

fn dense_trace(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_trace");
    group.sample_size(10);
    let l = Lattice::torus(2, 2).unwrap();
    for model in [ModelId::M1, ModelId::MNondeg] {
        let h = build_hamiltonian(model, &l).unwrap();
        group.bench_function(model.to_string(), |b| {
            b.iter(|| hamiltonian_trace(black_box(&h), DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn corner_commutation(c: &mut Criterion) {
    let mut group = c.benchmark_group("corner_commutation");
    for (name, g) in [
        ("sis2", Groupoid::sis(2).unwrap()),
        ("sis3", Groupoid::sis(3).unwrap()),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| check_corner_commutation(black_box(&g), Corner::SW))
        });
    }
    group.finish();
}

criterion_group!(benches, stabilizer_gsd, dense_trace, corner_commutation);
criterion_main!(benches);
