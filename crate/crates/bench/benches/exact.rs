use criterion::{criterion_group, criterion_main, Criterion};
use dbar_core::adjoint::{commutator_direct, commutator_formula};
use dbar_core::{gaussian_pairing, BiPoly};

fn commutator(c: &mut Criterion) {
    let phi: BiPoly = "z*zb + (z^2 + zb^2)/4".parse().unwrap();
    let psi: BiPoly = "z^3*zb - 2*z*zb^2 + i*z + 1".parse().unwrap();
    for k in [2u32, 4] {
        c.bench_function(&format!("commutator_direct_k{k}"), |b| {
            b.iter(|| commutator_direct(&psi, &phi, k).unwrap())
        });
        c.bench_function(&format!("commutator_formula_k{k}"), |b| {
            b.iter(|| commutator_formula(&psi, &phi, k).unwrap())
        });
    }
}

fn pairing(c: &mut Criterion) {
    let f: BiPoly = "(z + zb)^8".parse().unwrap();
    let g: BiPoly = "(z - i*zb)^8".parse().unwrap();
    c.bench_function("gaussian_pairing_deg8", |b| b.iter(|| gaussian_pairing(&f, &g)));
}

criterion_group!(benches, commutator, pairing);
criterion_main!(benches);
