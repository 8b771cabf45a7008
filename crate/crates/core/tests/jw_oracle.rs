mod common;

use combifock::combinadics::SectorShape;
use combifock::compact_ham::CompactHamiltonian;
use combifock::fockops::{commutator_check, shift_matrix};
use combifock::jw::{
    commutator_norm, jw_excitation, jw_hamiltonian, number_operator, sector_project, sz_operator,
};
use common::*;

#[test]
fn shift_matrices_equal_projected_jw_ladder_products() {
    for (m, nu, nd) in [(2, 1, 1), (3, 1, 2), (4, 2, 2), (5, 1, 1), (4, 0, 3)] {
        let shape = SectorShape::new(m, nu, nd).unwrap();
        for i in 0..2 * m {
            for j in 0..2 * m {
                let e = shift_matrix(i, j, &shape).unwrap().to_dense_physical();
                let proj = sector_project(&jw_excitation(i, j, 2 * m), &shape).unwrap();
                assert_eq!(proj.max_imaginary(), 0.0);
                assert!(
                    (proj.real_part() - e).amax() < 1e-12,
                    "E_{i}{j} on {m},{nu},{nd}"
                );
            }
        }
    }
}

// Spin-flipping E_ij leave the sector, so the identity is only closed on
// spin-conserving pairs.
#[test]
fn commutator_identity_on_small_shapes() {
    let shape = SectorShape::new(3, 2, 1).unwrap();
    let same = |a: usize, b: usize| a / 3 == b / 3;
    for i in 0..6 {
        for j in (0..6).filter(|&j| same(i, j)) {
            for k in 0..6 {
                for l in (0..6).filter(|&l| same(k, l)) {
                    assert!(commutator_check((i, j), (k, l), &shape).unwrap() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn projected_jw_hamiltonian_equals_compact_block() {
    let names: Vec<String> = [
        "h2_4so_",
        "h2_8so_",
        "h2_10so_",
        "lih_6so_",
        "lih_8so_",
        "lih_10so_",
    ]
    .iter()
    .flat_map(|p| fixtures(p))
    .collect();
    for name in names {
        let ints = load(&name);
        let shape = ints.shape().unwrap();
        let h = jw_hamiltonian(&ints).unwrap();
        assert!(h.max_imaginary() < 1e-12, "{name}");
        let proj = sector_project(&h, &shape).unwrap();
        assert!(proj.off_sector < 1e-12, "{name}");
        let compact = CompactHamiltonian::build(&ints, &shape).unwrap();
        assert!(
            (proj.real_part() - compact.physical_block()).amax() < 1e-10,
            "{name}"
        );
    }
}

#[test]
fn jw_hamiltonian_conserves_symmetries() {
    for name in ["h2_8so_0.7A.fcidump", "lih_6so_1.6A.fcidump"] {
        let ints = load(name);
        let h = jw_hamiltonian(&ints).unwrap();
        let total = 2 * ints.norb();
        assert!(commutator_norm(&h, &number_operator(total)) < 1e-10);
        assert!(commutator_norm(&h, &sz_operator(ints.norb())) < 1e-10);
    }
}
