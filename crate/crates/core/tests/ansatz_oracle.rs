mod common;

use combifock::ansatz::{enumerate_excitations, ClusterOperator};
use combifock::compact_ham::CompactHamiltonian;
use combifock::vqe::{gradient, CompactObjective, Counted};
use common::*;
use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `exp(A)` by scaling and squaring with a 30-term Taylor series.
fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = norm.max(1.0).log2().ceil() as i32 + 1;
    let scaled = a / Complex64::new(2f64.powi(squarings), 0.0);
    let n = a.nrows();
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn random_cluster(name: &str, rng: &mut ChaCha8Rng) -> ClusterOperator {
    let ints = load(name);
    let shape = ints.shape().unwrap();
    let c =
        ClusterOperator::new(&shape, enumerate_excitations(&shape, &ints, 0.0).unwrap()).unwrap();
    let theta: Vec<f64> = (0..c.num_params())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    c.with_theta(&theta).unwrap()
}

#[test]
fn generator_has_rank_two_and_exponential_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in [
        "h2_4so_0.7A.fcidump",
        "h2_8so_1.4A.fcidump",
        "lih_6so_1.6A.fcidump",
        "lih_8so_2.4A.fcidump",
    ] {
        for _ in 0..5 {
            let c = random_cluster(name, &mut rng);
            let k = c.build_k();
            let svd = SVD::new(k.clone(), false, false);
            assert_eq!(
                svd.singular_values.iter().filter(|&&s| s > 1e-12).count(),
                2,
                "{name}"
            );
            let u = expm(&(k * Complex64::new(0.0, -1.0)));
            let dim = u.nrows();
            assert!(
                (u.adjoint() * &u - DMatrix::identity(dim, dim)).camax() < 1e-12,
                "{name}"
            );

            let prepared = c.prepare();
            for (r, a) in prepared.iter().enumerate() {
                assert!((a - u[(r, 0)]).norm() < 1e-12, "{name}");
            }
            let psi: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let exact = &u * nalgebra::DVector::from_column_slice(&psi);
            let fast = c.apply_exact(&psi).unwrap();
            for (a, b) in fast.iter().zip(exact.iter()) {
                assert!((a - b).norm() < 1e-12, "{name}");
            }
        }
    }
}

#[test]
fn central_difference_error_shrinks_fourfold() {
    let ints = load("h2_8so_0.7A.fcidump");
    let shape = ints.shape().unwrap();
    let h = CompactHamiltonian::build(&ints, &shape).unwrap();
    let c =
        ClusterOperator::new(&shape, enumerate_excitations(&shape, &ints, 1e-6).unwrap()).unwrap();
    let obj = CompactObjective::new(&h, &c).unwrap();
    let counted = Counted::new(&obj);
    let theta: Vec<f64> = (0..c.num_params())
        .map(|s| 0.05 * (s as f64 + 1.0).sin())
        .collect();
    let g = |step: f64| gradient(&counted, &theta, step);
    let (g1, g2, g4) = (g(0.08), g(0.04), g(0.02));
    let s = (0..theta.len())
        .max_by(|&a, &b| (g1[a] - g2[a]).abs().total_cmp(&(g1[b] - g2[b]).abs()))
        .unwrap();
    let ratio = (g1[s] - g2[s]) / (g2[s] - g4[s]);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    assert_eq!(counted.calls(), 3 * 2 * theta.len());
}

#[test]
fn trotter_circuit_reproduces_small_rotations() {
    let ints = load("h2_4so_0.7A.fcidump");
    let shape = ints.shape().unwrap();
    let c =
        ClusterOperator::new(&shape, enumerate_excitations(&shape, &ints, 0.0).unwrap()).unwrap();
    let small = c.clone().with_theta(&[1e-3, -2e-3, 1.5e-3]).unwrap();
    let large = c.with_theta(&[0.3, -0.6, 0.45]).unwrap();
    let (es, el) = (
        small.state_fidelity_check(1e-12),
        large.state_fidelity_check(1e-12),
    );
    assert!(es < 1e-5, "{es}");
    assert!(el > es);
}
