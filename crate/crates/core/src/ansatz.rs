//! Compact UCCSD-style ansatz.
//!
//! Each retained single or double excitation of the Hartree–Fock reference
//! (rank 0) owns one parameter, placed at the paired rank of the excited
//! determinant. The generator `K = i(T_c† − T_c)` has nonzeros only in row and
//! column 0, so it has rank two and `exp(−iK)` is a plane rotation between
//! `|0⟩` and `|u⟩ = Σ_s θ_s |t_s⟩ / ‖θ‖`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::combinadics::{SectorShape, Spin};
use crate::error::{Error, Result};
use crate::fockops::excite;
use crate::integrals::IntegralSet;
use crate::pauli::{decompose, PauliSum};

pub const DEFAULT_MP2_EPS: f64 = 1e-6;

/// Orbital-energy gaps below this keep the double unconditionally.
const DEGENERATE_GAP: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExcitationKind {
    Single,
    Double,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Excitation {
    pub kind: ExcitationKind,
    /// Occupied spin orbitals emptied by the excitation.
    pub from: Vec<usize>,
    /// Virtual spin orbitals filled by the excitation, paired with `from`.
    pub to: Vec<usize>,
    /// Paired rank of the excited determinant.
    pub target_rank: u64,
    pub slot: usize,
    /// First-order amplitude estimate for doubles; `None` for singles and for
    /// degenerate denominators.
    pub mp2_amplitude: Option<f64>,
}

fn push_excitation(
    out: &mut Vec<Excitation>,
    shape: &SectorShape,
    kind: ExcitationKind,
    from: Vec<usize>,
    to: Vec<usize>,
    mp2_amplitude: Option<f64>,
) -> Result<()> {
    let mut det = shape.reference();
    for (&a, &i) in to.iter().zip(&from) {
        det = excite(a, i, &det, shape)
            .expect("virtual target and occupied source")
            .state;
    }
    let target_rank = shape.paired_rank(&det)?.combined;
    out.push(Excitation {
        kind,
        from,
        to,
        target_rank,
        slot: out.len(),
        mp2_amplitude,
    });
    Ok(())
}

/// Spin- and number-conserving singles and MP2-screened doubles of the
/// lowest-rank reference.
///
/// A double survives when `|⟨ab||ij⟩| / (ε_a + ε_b − ε_i − ε_j)` exceeds
/// `mp2_eps`, with `ε` the Fock diagonal of the reference. `mp2_eps = 0`
/// disables screening; `f64::INFINITY` removes every double.
pub fn enumerate_excitations(
    shape: &SectorShape,
    ints: &IntegralSet,
    mp2_eps: f64,
) -> Result<Vec<Excitation>> {
    if ints.norb() != shape.orbitals() {
        return Err(Error::Dimension(format!(
            "shape has {} orbitals, integrals have {}",
            shape.orbitals(),
            ints.norb()
        )));
    }
    let m = shape.orbitals();
    let occ = |s: Spin| 0..shape.particles(s);
    let virt = |s: Spin| shape.particles(s)..m;
    let fock = [ints.fock_diagonal(Spin::Down), ints.fock_diagonal(Spin::Up)];
    let eps = |s: Spin, p: usize| fock[s as usize][p];
    let so = |s: Spin, p: usize| shape.spin_orbital(s, p);

    let mut out = Vec::new();
    for s in Spin::BOTH {
        for i in occ(s) {
            for a in virt(s) {
                push_excitation(
                    &mut out,
                    shape,
                    ExcitationKind::Single,
                    vec![so(s, i)],
                    vec![so(s, a)],
                    None,
                )?;
            }
        }
    }

    let consider = |out: &mut Vec<Excitation>,
                    (si, i, sa, a): (Spin, usize, Spin, usize),
                    (sj, j, sb, b): (Spin, usize, Spin, usize)|
     -> Result<()> {
        let direct = if si == sa && sj == sb {
            ints.h2(a, i, b, j)
        } else {
            0.0
        };
        let exchange = if sj == sa && si == sb {
            ints.h2(a, j, b, i)
        } else {
            0.0
        };
        let gap = eps(sa, a) + eps(sb, b) - eps(si, i) - eps(sj, j);
        let amplitude = (gap.abs() >= DEGENERATE_GAP).then(|| ((direct - exchange) / gap).abs());
        let keep = mp2_eps == 0.0 || amplitude.is_none_or(|t| t > mp2_eps);
        if keep {
            push_excitation(
                out,
                shape,
                ExcitationKind::Double,
                vec![so(si, i), so(sj, j)],
                vec![so(sa, a), so(sb, b)],
                amplitude,
            )?;
        }
        Ok(())
    };

    for s in Spin::BOTH {
        for i in occ(s) {
            for j in i + 1..shape.particles(s) {
                for a in virt(s) {
                    for b in a + 1..m {
                        consider(&mut out, (s, i, s, a), (s, j, s, b))?;
                    }
                }
            }
        }
    }
    for i in occ(Spin::Down) {
        for a in virt(Spin::Down) {
            for j in occ(Spin::Up) {
                for b in virt(Spin::Up) {
                    consider(
                        &mut out,
                        (Spin::Down, i, Spin::Down, a),
                        (Spin::Up, j, Spin::Up, b),
                    )?;
                }
            }
        }
    }
    Ok(out)
}

/// Parameterized generator `K(θ)` on the compact register.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterOperator {
    qubits: usize,
    dim_phys: usize,
    excitations: Vec<Excitation>,
    theta: Vec<f64>,
}

impl ClusterOperator {
    /// Zero-parameter operator (the Hartree–Fock state) over `excitations`.
    pub fn new(shape: &SectorShape, excitations: Vec<Excitation>) -> Result<Self> {
        let dim_phys = shape.dimension()? as usize;
        let mut seen = std::collections::BTreeSet::new();
        for e in &excitations {
            if e.target_rank == 0 || e.target_rank as usize >= dim_phys {
                return Err(Error::RankOutOfRange {
                    rank: e.target_rank,
                    dimension: dim_phys as u64,
                });
            }
            if !seen.insert(e.target_rank) {
                return Err(Error::DuplicateTarget(e.target_rank));
            }
        }
        let theta = vec![0.0; excitations.len()];
        Ok(Self {
            qubits: shape.qubit_count()?,
            dim_phys,
            excitations,
            theta,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dimension(&self) -> usize {
        1 << self.qubits
    }

    pub fn num_params(&self) -> usize {
        self.excitations.len()
    }

    pub fn excitations(&self) -> &[Excitation] {
        &self.excitations
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.excitations.iter().map(|e| e.target_rank as usize)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn set_theta(&mut self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.theta.len() {
            return Err(Error::ParameterCount {
                expected: self.theta.len(),
                got: theta.len(),
            });
        }
        self.theta.copy_from_slice(theta);
        Ok(())
    }

    pub fn with_theta(mut self, theta: &[f64]) -> Result<Self> {
        self.set_theta(theta)?;
        Ok(self)
    }

    /// Dense `K` with `K[0][t] = iθ_s` and `K[t][0] = −iθ_s`.
    pub fn build_k(&self) -> DMatrix<Complex64> {
        let dim = self.dimension();
        let mut k = DMatrix::zeros(dim, dim);
        for (t, &th) in self.targets().zip(&self.theta) {
            k[(0, t)] = Complex64::new(0.0, th);
            k[(t, 0)] = Complex64::new(0.0, -th);
        }
        k
    }

    /// `exp(−iK)|0⟩ = cos‖θ‖ |0⟩ − sin‖θ‖ Σ_s (θ_s/‖θ‖) |t_s⟩`, real amplitudes.
    pub fn prepare_real(&self) -> Vec<f64> {
        let mut psi = vec![0.0; self.dimension()];
        let norm = self.theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm == 0.0 {
            psi[0] = 1.0;
            return psi;
        }
        let (s, c) = norm.sin_cos();
        psi[0] = c;
        for (t, th) in self.targets().zip(&self.theta) {
            psi[t] = -s * th / norm;
        }
        psi
    }

    /// `exp(−iK)|ψ⟩` for any `ψ`: with `τ = ‖θ‖`, `−iK = τ(|0⟩⟨u| − |u⟩⟨0|)`
    /// and `exp(−iK) = I + (cos τ − 1)(|0⟩⟨0| + |u⟩⟨u|) + sin τ (|0⟩⟨u| − |u⟩⟨0|)`.
    pub fn apply_exact(&self, reference: &[Complex64]) -> Result<Vec<Complex64>> {
        if reference.len() != self.dimension() {
            return Err(Error::Dimension(format!(
                "state has {} amplitudes, register has {}",
                reference.len(),
                self.dimension()
            )));
        }
        let mut out = reference.to_vec();
        let tau = self.theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        if tau == 0.0 {
            return Ok(out);
        }
        let (s, c) = tau.sin_cos();
        let u: Vec<(usize, f64)> = self
            .targets()
            .zip(&self.theta)
            .map(|(t, th)| (t, th / tau))
            .collect();
        let a0 = reference[0];
        let au: Complex64 = u.iter().map(|&(t, w)| reference[t] * w).sum();
        out[0] += a0 * (c - 1.0) + au * s;
        for &(t, w) in &u {
            out[t] += (au * (c - 1.0) - a0 * s) * w;
        }
        Ok(out)
    }

    /// `exp(−iK)|0⟩`.
    pub fn prepare(&self) -> Vec<Complex64> {
        self.prepare_real()
            .into_iter()
            .map(|a| Complex64::new(a, 0.0))
            .collect()
    }

    /// Pauli decomposition of `K` and the single-step product circuit of its
    /// terms.
    pub fn trotter_circuit(&self, prune_eps: f64) -> TrotterCircuit {
        let generator =
            decompose(&self.build_k(), prune_eps).expect("register dimension is a power of two");
        let circuit = Circuit::from_pauli_evolution(&generator, 1.0);
        TrotterCircuit { generator, circuit }
    }

    /// `‖exp(−iK)|0⟩ − circuit|0⟩‖`, the single-step Trotter error.
    pub fn state_fidelity_check(&self, prune_eps: f64) -> f64 {
        let exact = self.prepare();
        let mut state = vec![Complex64::default(); self.dimension()];
        state[0] = Complex64::new(1.0, 0.0);
        self.trotter_circuit(prune_eps).circuit.simulate(&mut state);
        exact
            .iter()
            .zip(&state)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn dim_phys(&self) -> usize {
        self.dim_phys
    }
}

#[derive(Clone, Debug)]
pub struct TrotterCircuit {
    pub generator: PauliSum,
    pub circuit: Circuit,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::parse_fcidump;

    const H2: &str = " &FCI NORB=   2,NELEC= 2,MS2=0,
 &END
 0.6744887663568377    1    1    1    1
 0.1812888082114958    2    1    2    1
 0.6634680964235677    2    2    1    1
 0.6973937674230266    2    2    2    2
 -1.252463573564898    1    1  0  0
 -0.4759487152209642    2    2  0  0
 0.7137539936876182  0  0  0  0
";

    fn h2() -> (IntegralSet, SectorShape) {
        let ints = parse_fcidump(H2).unwrap();
        let shape = ints.shape().unwrap();
        (ints, shape)
    }

    #[test]
    fn minimal_h2_has_two_singles_one_double() {
        let (ints, shape) = h2();
        let ex = enumerate_excitations(&shape, &ints, DEFAULT_MP2_EPS).unwrap();
        assert_eq!(ex.len(), 3);
        assert_eq!(
            ex.iter()
                .filter(|e| e.kind == ExcitationKind::Single)
                .count(),
            2
        );
        let mut targets: Vec<_> = ex.iter().map(|e| e.target_rank).collect();
        targets.sort();
        assert_eq!(targets, vec![1, 2, 3]);
        let slots: Vec<_> = ex.iter().map(|e| e.slot).collect();
        assert_eq!(slots, vec![0, 1, 2]);
    }

    #[test]
    fn infinite_threshold_keeps_singles_only() {
        let (ints, shape) = h2();
        let ex = enumerate_excitations(&shape, &ints, f64::INFINITY).unwrap();
        assert!(ex.iter().all(|e| e.kind == ExcitationKind::Single));
        assert_eq!(ex.len(), 2);
    }

    #[test]
    fn zero_threshold_counts_every_excitation() {
        let mut ints = IntegralSet::zeros(5, 2, 1);
        for p in 0..5 {
            ints.set_h1(p, p, p as f64);
        }
        let shape = ints.shape().unwrap();
        let ex = enumerate_excitations(&shape, &ints, 0.0).unwrap();
        // singles: 2·3 + 1·4; doubles: C(2,2)·C(3,2) + 0 + (2·3)·(1·4)
        let singles = 2 * 3 + 4;
        let doubles = 3 + 6 * 4;
        assert_eq!(ex.len(), singles + doubles);
        ClusterOperator::new(&shape, ex).unwrap();
    }

    #[test]
    fn duplicate_targets_rejected() {
        let (ints, shape) = h2();
        let mut ex = enumerate_excitations(&shape, &ints, 0.0).unwrap();
        let dup = ex[0].clone();
        ex.push(dup);
        assert!(matches!(
            ClusterOperator::new(&shape, ex),
            Err(Error::DuplicateTarget(_))
        ));
    }

    #[test]
    fn k_structure() {
        let (ints, shape) = h2();
        let ex = enumerate_excitations(&shape, &ints, 0.0).unwrap();
        let c = ClusterOperator::new(&shape, ex).unwrap();
        assert_eq!(c.build_k(), DMatrix::zeros(4, 4));

        let only = ClusterOperator::new(&shape, vec![c.excitations()[0].clone()]).unwrap();
        let t = only.excitations()[0].target_rank as usize;
        let half_pi = std::f64::consts::FRAC_PI_2;
        let k = only.with_theta(&[half_pi]).unwrap().build_k();
        assert_eq!(k[(0, t)], Complex64::new(0.0, half_pi));
        assert_eq!(k[(t, 0)], Complex64::new(0.0, -half_pi));
        assert_eq!(k.iter().filter(|v| v.norm() > 0.0).count(), 2);
    }

    #[test]
    fn quarter_turn_transfers_population() {
        let (ints, shape) = h2();
        let ex = enumerate_excitations(&shape, &ints, 0.0).unwrap();
        let one = ClusterOperator::new(&shape, vec![ex[2].clone()])
            .unwrap()
            .with_theta(&[std::f64::consts::FRAC_PI_2])
            .unwrap();
        let psi = one.prepare_real();
        let t = ex[2].target_rank as usize;
        assert!(psi[0].abs() < 1e-15);
        assert!((psi[t].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_theta_is_identity() {
        let (ints, shape) = h2();
        let c = ClusterOperator::new(&shape, enumerate_excitations(&shape, &ints, 0.0).unwrap())
            .unwrap();
        assert_eq!(c.prepare_real(), vec![1.0, 0.0, 0.0, 0.0]);
        let t = c.trotter_circuit(1e-12);
        assert!(t.generator.is_empty());
        assert_eq!(t.circuit.depth(), 0);
        assert_eq!(c.state_fidelity_check(1e-12), 0.0);
    }

    #[test]
    fn general_apply_matches_prepare_on_reference() {
        let (ints, shape) = h2();
        let c = ClusterOperator::new(&shape, enumerate_excitations(&shape, &ints, 0.0).unwrap())
            .unwrap()
            .with_theta(&[0.3, -0.2, 0.7])
            .unwrap();
        let mut zero = vec![Complex64::default(); 4];
        zero[0] = Complex64::new(1.0, 0.0);
        let a = c.apply_exact(&zero).unwrap();
        let b = c.prepare();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-15);
        }
        assert!(c.apply_exact(&zero[..2]).is_err());
    }
}
