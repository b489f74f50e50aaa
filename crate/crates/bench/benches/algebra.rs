use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wittlift::classes::{check_universal_class, cup_power_tensor, witt_cocycle};
use wittlift::comodules::{div_power, gl2_conjugation};
use wittlift::{IntegerMatrix, PairingSetup, Ring, UniversalClassSpec};

fn hnf(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("hnf");
    for n in [4usize, 8, 16] {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntegerMatrix::from_rows(&rows);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| a.hnf()));
    }
    group.finish();
}

fn witt(c: &mut Criterion) {
    let mut group = c.benchmark_group("witt_differential");
    for (p, r) in [(2u64, 3u32), (3, 2), (5, 2)] {
        let f = witt_cocycle(p, r).unwrap();
        group.bench_function(format!("p{p}_r{r}"), |b| b.iter(|| f.differential().unwrap()));
    }
    group.finish();
}

fn cup_powers(c: &mut Criterion) {
    let mut group = c.benchmark_group("cup_power_certificate");
    group.sample_size(10);
    for m in [2u32, 4] {
        group.bench_function(format!("p3_r2_m{m}"), |b| {
            b.iter(|| cup_power_tensor(3, 2, m).unwrap().differential().unwrap())
        });
    }
    group.finish();
}

fn divided_powers(c: &mut Criterion) {
    let gl2 = gl2_conjugation();
    c.bench_function("gamma4_gl2_coaction", |b| {
        b.iter(|| {
            let g = div_power(black_box(&gl2), 4);
            g.coaction_matrix().unwrap()
        })
    });
}

fn pairing(c: &mut Criterion) {
    let setup = PairingSetup::standard(2, 1).unwrap();
    c.bench_function("pairing_setup_p3", |b| b.iter(|| PairingSetup::standard(3, 1).unwrap()));
    c.bench_function("diagram_p2_m2", |b| b.iter(|| setup.diagram_commutes(2, Ring::Mod(4)).unwrap()));
}

fn universal(c: &mut Criterion) {
    let mut group = c.benchmark_group("universal_class");
    group.sample_size(10);
    for (p, r, j, m) in [(2u64, 1u32, 0u32, 2u32), (2, 2, 0, 1), (3, 1, 0, 1)] {
        let spec = UniversalClassSpec::new(p, r, j, m).unwrap();
        group.bench_function(spec.to_string(), |b| b.iter(|| check_universal_class(&spec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, hnf, witt, cup_powers, divided_powers, pairing, universal);
criterion_main!(benches);
