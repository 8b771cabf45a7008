mod common;

use combifock::ansatz::{enumerate_excitations, ClusterOperator, DEFAULT_MP2_EPS};
use combifock::compact_ham::CompactHamiltonian;
use combifock::jw::jw_uccsd_vqe;
use combifock::vqe::{minimize_compact, VqeConfig};
use common::*;

#[test]
fn compact_vqe_is_variational_and_accurate_on_h2() {
    let cfg = VqeConfig::default();
    for name in fixtures("h2_4so_").into_iter().chain(fixtures("h2_8so_")) {
        let ints = load(&name);
        let shape = ints.shape().unwrap();
        let h = CompactHamiltonian::build(&ints, &shape).unwrap();
        let exact = h.exact_ground_state().energy;
        let c = ClusterOperator::new(
            &shape,
            enumerate_excitations(&shape, &ints, DEFAULT_MP2_EPS).unwrap(),
        )
        .unwrap();
        let r = minimize_compact(&h, &c, &cfg).unwrap();
        println!(
            "{name}: params {} E {} exact {} d {:.2e} calls {} iters {}",
            c.num_params(),
            r.energy,
            exact,
            r.energy - exact,
            r.function_calls,
            r.iterations
        );
        assert!(r.trace.iter().all(|&e| e >= exact - 1e-10), "{name}");
        assert!(r.energy - exact < 1.6e-3, "{name}");
    }
}

#[test]
fn jw_vqe_matches_on_minimal_h2() {
    let cfg = VqeConfig::default();
    for name in fixtures("h2_8so_") {
        let ints = load(&name);
        let shape = ints.shape().unwrap();
        let h = CompactHamiltonian::build(&ints, &shape).unwrap();
        let exact = h.exact_ground_state().energy;
        let exc = enumerate_excitations(&shape, &ints, DEFAULT_MP2_EPS).unwrap();
        let c = ClusterOperator::new(&shape, exc.clone()).unwrap();
        let rc = minimize_compact(&h, &c, &cfg).unwrap();
        let rj = jw_uccsd_vqe(&ints, &shape, &exc, &cfg).unwrap();
        println!(
            "{name}: compact {} ({:.2e}) jw {} ({:.2e}) iters {} / {}",
            rc.function_calls,
            rc.energy - exact,
            rj.function_calls,
            rj.energy - exact,
            rc.iterations,
            rj.iterations
        );
        assert!(rj.energy >= exact - 1e-10);
    }
}
