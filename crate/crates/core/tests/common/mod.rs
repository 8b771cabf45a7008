#![allow(dead_code)]

use std::path::PathBuf;

use combifock::integrals::IntegralSet;
use nalgebra::{DMatrix, SymmetricEigen};
use serde_json::Value;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/fixtures")
}

pub fn load(name: &str) -> IntegralSet {
    IntegralSet::from_path(fixture_dir().join(name)).unwrap()
}

pub fn fixtures(prefix: &str) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with(prefix) && n.ends_with(".fcidump"))
        .collect();
    names.sort();
    names
}

pub fn reference_energies() -> Value {
    let text = std::fs::read_to_string(fixture_dir().join("reference_energies.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Determinants over interleaved spin orbitals `2p + σ` (σ = 0 down, 1 up),
/// with the Hamiltonian applied through explicit ladder operators:
/// `H = Σ h_pq a†_pσ a_qσ + ½ Σ (pq|rs) a†_pσ a†_rτ a_sτ a_qσ + e_core`.
pub fn fci_matrix(ints: &IntegralSet) -> DMatrix<f64> {
    let m = ints.norb();
    let so = |p: usize, s: usize| 2 * p + s;
    let dets: Vec<u64> = (0u64..1 << (2 * m))
        .filter(|d| {
            let up = (0..m).filter(|&p| d >> so(p, 1) & 1 == 1).count();
            let down = (0..m).filter(|&p| d >> so(p, 0) & 1 == 1).count();
            up == ints.n_up() && down == ints.n_down()
        })
        .collect();
    let index = |d: u64| dets.binary_search(&d).unwrap();
    let annihilate = |d: u64, k: usize| -> Option<(u64, f64)> {
        if d >> k & 1 == 0 {
            return None;
        }
        let below = (d & ((1 << k) - 1)).count_ones();
        Some((d ^ 1 << k, if below.is_multiple_of(2) { 1.0 } else { -1.0 }))
    };
    let create = |d: u64, k: usize| -> Option<(u64, f64)> {
        if d >> k & 1 == 1 {
            return None;
        }
        let below = (d & ((1 << k) - 1)).count_ones();
        Some((d | 1 << k, if below.is_multiple_of(2) { 1.0 } else { -1.0 }))
    };
    let n = dets.len();
    let mut h = DMatrix::zeros(n, n);
    for (col, &d) in dets.iter().enumerate() {
        h[(col, col)] += ints.e_core();
        for s in 0..2 {
            for p in 0..m {
                for q in 0..m {
                    let v = ints.h1(p, q);
                    if v == 0.0 {
                        continue;
                    }
                    let Some((d1, s1)) = annihilate(d, so(q, s)) else {
                        continue;
                    };
                    let Some((d2, s2)) = create(d1, so(p, s)) else {
                        continue;
                    };
                    h[(index(d2), col)] += v * s1 * s2;
                }
            }
        }
        for s in 0..2 {
            for t in 0..2 {
                for p in 0..m {
                    for q in 0..m {
                        let Some((d1, s1)) = annihilate(d, so(q, s)) else {
                            continue;
                        };
                        for r in 0..m {
                            for u in 0..m {
                                let v = ints.h2(p, q, r, u);
                                if v == 0.0 {
                                    continue;
                                }
                                let Some((d2, s2)) = annihilate(d1, so(u, t)) else {
                                    continue;
                                };
                                let Some((d3, s3)) = create(d2, so(r, t)) else {
                                    continue;
                                };
                                let Some((d4, s4)) = create(d3, so(p, s)) else {
                                    continue;
                                };
                                h[(index(d4), col)] += 0.5 * v * s1 * s2 * s3 * s4;
                            }
                        }
                    }
                }
            }
        }
    }
    h
}

pub fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
