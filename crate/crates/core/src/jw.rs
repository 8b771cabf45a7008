//! Jordan–Wigner reference encoding on `2M` qubits.
//!
//! Qubit `p` holds spin orbital `p` in block ordering, so a determinant's
//! occupation bitstring is its computational basis index and the sector
//! projection needs no relabeling beyond the rank order.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ansatz::{Excitation, ExcitationKind};
use crate::circuit::{apply_pauli_rotation, Circuit};
use crate::combinadics::SectorShape;
use crate::error::{Error, Result};
use crate::integrals::IntegralSet;
use crate::pauli::{PauliString, PauliSum};
use crate::vqe::{minimize, Objective, VqeConfig, VqeResult};

/// Largest register for the Hamiltonian and the sector projection.
pub const MAX_HAMILTONIAN_QUBITS: usize = 12;
/// Largest register for the statevector UCCSD run.
pub const MAX_VQE_QUBITS: usize = 10;
/// Products of ladder operators leave round-off at this scale.
pub const JW_PRUNE_EPS: f64 = 1e-14;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `a_p = (X_p + iY_p)/2 ⊗ Z_{p−1} ⋯ Z_0`.
pub fn jw_annihilation(p: usize, total: usize) -> PauliSum {
    assert!(
        p < total && total <= 64,
        "spin orbital {p} outside a {total}-qubit register"
    );
    let zs = (1u64 << p) - 1;
    let bit = 1u64 << p;
    PauliSum::from_terms(
        total,
        [
            (PauliString::from_masks(total, bit, zs), c(0.5, 0.0)),
            (PauliString::from_masks(total, bit, zs | bit), c(0.0, 0.5)),
        ],
    )
}

pub fn jw_creation(p: usize, total: usize) -> PauliSum {
    jw_annihilation(p, total).adjoint()
}

/// `a_i† a_j`.
pub fn jw_excitation(i: usize, j: usize, total: usize) -> PauliSum {
    jw_creation(i, total)
        .mul(&jw_annihilation(j, total))
        .pruned(JW_PRUNE_EPS)
}

pub fn number_operator(total: usize) -> PauliSum {
    let mut n = PauliSum::zero(total);
    for p in 0..total {
        n = n.add(&jw_excitation(p, p, total));
    }
    n.pruned(JW_PRUNE_EPS)
}

/// `S_z = (N_↑ − N_↓)/2` with spin-down on the low `M` qubits.
pub fn sz_operator(orbitals: usize) -> PauliSum {
    let total = 2 * orbitals;
    let mut s = PauliSum::zero(total);
    for p in 0..total {
        let sign = if p < orbitals { -0.5 } else { 0.5 };
        s = s.add(&jw_excitation(p, p, total).scale(c(sign, 0.0)));
    }
    s.pruned(JW_PRUNE_EPS)
}

/// Largest coefficient magnitude of `AB − BA`.
pub fn commutator_norm(a: &PauliSum, b: &PauliSum) -> f64 {
    let comm = a.mul(b).add(&b.mul(a).scale(c(-1.0, 0.0)));
    comm.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max)
}

/// `H = A + A† + e_core` with `A = Σ h_pq E_pq + ½ Σ h_pqrs (E_pq E_rs − δ_qr E_ps)`,
/// the same coefficients and operator algebra the compact build uses.
pub fn jw_hamiltonian(ints: &IntegralSet) -> Result<PauliSum> {
    let total = 2 * ints.norb();
    if total > MAX_HAMILTONIAN_QUBITS {
        return Err(Error::TooLarge {
            qubits: total,
            cap: MAX_HAMILTONIAN_QUBITS,
        });
    }
    let coeffs = ints.to_physicist_coefficients();
    let e: Vec<Vec<PauliSum>> = (0..total)
        .map(|p| (0..total).map(|q| jw_excitation(p, q, total)).collect())
        .collect();
    let mut a = PauliSum::zero(total);
    for (p, q, h) in coeffs.one_body_terms() {
        a = a.add(&e[p][q].scale(c(h, 0.0)));
    }
    for ((p, q, r, s), h) in coeffs.two_body_terms() {
        let mut term = e[p][q].mul(&e[r][s]);
        if q == r {
            term = term.add(&e[p][s].scale(c(-1.0, 0.0)));
        }
        a = a.add(&term.scale(c(0.5 * h, 0.0)));
    }
    let h = a
        .add(&a.adjoint())
        .add(&PauliSum::identity(total, coeffs.e_core()));
    Ok(h.pruned(JW_PRUNE_EPS))
}

/// Restriction of a `2M`-qubit operator to one particle-number sector.
#[derive(Clone, Debug)]
pub struct SectorProjection {
    /// Rows and columns in compact (paired-rank) order.
    pub matrix: DMatrix<Complex64>,
    /// JW bitstring of each row.
    pub basis: Vec<u64>,
    /// Frobenius norm of the amplitude the operator sends out of the sector.
    pub off_sector: f64,
}

impl SectorProjection {
    pub fn real_part(&self) -> DMatrix<f64> {
        self.matrix.map(|z| z.re)
    }

    pub fn max_imaginary(&self) -> f64 {
        self.matrix.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Applies every term of `op` to each sector basis state; images inside the
/// sector fill the matrix, images outside accumulate into `off_sector`.
pub fn sector_project(op: &PauliSum, shape: &SectorShape) -> Result<SectorProjection> {
    let total = shape.spin_orbitals();
    if op.num_qubits() != total {
        return Err(Error::Dimension(format!(
            "operator on {} qubits, shape has {total} spin orbitals",
            op.num_qubits()
        )));
    }
    if total > MAX_HAMILTONIAN_QUBITS {
        return Err(Error::TooLarge {
            qubits: total,
            cap: MAX_HAMILTONIAN_QUBITS,
        });
    }
    let m = shape.orbitals();
    let basis: Vec<u64> = shape.basis()?.iter().map(|d| d.to_bitstring(m)).collect();
    let mut index = vec![usize::MAX; 1 << total];
    for (k, &b) in basis.iter().enumerate() {
        index[b as usize] = k;
    }
    let dim = basis.len();
    let mut matrix = DMatrix::zeros(dim, dim);
    let mut outside = vec![Complex64::default(); 1 << total];
    let mut off = 0.0;
    for (col, &b) in basis.iter().enumerate() {
        for (p, coeff) in op.iter() {
            let (r, ph) = p.apply_basis(b as usize);
            let v = coeff * ph;
            match index[r] {
                usize::MAX => outside[r] += v,
                row => matrix[(row, col)] += v,
            }
        }
        for z in outside.iter_mut() {
            off += z.norm_sqr();
            *z = Complex64::default();
        }
    }
    Ok(SectorProjection {
        matrix,
        basis,
        off_sector: off.sqrt(),
    })
}

/// Hermitian `K_s = −i(T_s − T_s†)` of one excitation, so that
/// `exp(−θ(T_s − T_s†)) = exp(−iθK_s)`. Terms of `K_s` commute pairwise.
pub fn excitation_generator(ex: &Excitation, total: usize) -> PauliSum {
    let t = match ex.kind {
        ExcitationKind::Single => jw_excitation(ex.to[0], ex.from[0], total),
        ExcitationKind::Double => jw_creation(ex.to[0], total)
            .mul(&jw_creation(ex.to[1], total))
            .mul(&jw_annihilation(ex.from[1], total))
            .mul(&jw_annihilation(ex.from[0], total)),
    };
    let g = t.add(&t.adjoint().scale(c(-1.0, 0.0)));
    g.scale(c(0.0, -1.0)).pruned(JW_PRUNE_EPS)
}

/// Standard UCCSD on the full register: product over excitations of
/// `exp(−iθ_s K_s)`, each exponential split into its commuting Pauli
/// rotations, acting on the Hartree–Fock bitstring.
pub struct JwUccsd {
    total: usize,
    hf: u64,
    generators: Vec<Vec<(PauliString, f64)>>,
    /// Hamiltonian columns as `(row, value)` lists.
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl JwUccsd {
    pub fn new(
        ints: &IntegralSet,
        shape: &SectorShape,
        excitations: &[Excitation],
    ) -> Result<Self> {
        let total = shape.spin_orbitals();
        if total > MAX_VQE_QUBITS {
            return Err(Error::TooLarge {
                qubits: total,
                cap: MAX_VQE_QUBITS,
            });
        }
        let h = jw_hamiltonian(ints)?;
        let dim = 1usize << total;
        let mut columns = Vec::with_capacity(dim);
        let mut acc = vec![Complex64::default(); dim];
        for b in 0..dim {
            for (p, coeff) in h.iter() {
                let (r, ph) = p.apply_basis(b);
                acc[r] += coeff * ph;
            }
            let mut col = Vec::new();
            for (r, v) in acc.iter_mut().enumerate() {
                if v.norm() > JW_PRUNE_EPS {
                    col.push((r, *v));
                }
                *v = Complex64::default();
            }
            columns.push(col);
        }
        let generators = excitations
            .iter()
            .map(|ex| {
                excitation_generator(ex, total)
                    .iter()
                    .map(|(p, v)| (*p, v.re))
                    .collect()
            })
            .collect();
        let hf = shape.reference().to_bitstring(shape.orbitals());
        Ok(Self {
            total,
            hf,
            generators,
            columns,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.total
    }

    pub fn prepare(&self, theta: &[f64]) -> Vec<Complex64> {
        let mut psi = vec![Complex64::default(); 1 << self.total];
        psi[self.hf as usize] = c(1.0, 0.0);
        for (terms, &th) in self.generators.iter().zip(theta) {
            if th == 0.0 {
                continue;
            }
            for (p, v) in terms {
                apply_pauli_rotation(&mut psi, p, th * v);
            }
        }
        psi
    }

    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let mut e = Complex64::default();
        for (col, amp) in self.columns.iter().zip(psi) {
            if *amp == Complex64::default() {
                continue;
            }
            for &(r, v) in col {
                e += psi[r].conj() * v * amp;
            }
        }
        e.re
    }

    /// Gate sequence of the ansatz; depth and CNOT count do not depend on the
    /// angles as long as they are nonzero.
    pub fn circuit(&self, theta: &[f64]) -> Circuit {
        let mut circ = Circuit::new(self.total);
        for x in self.hf_flips() {
            circ.push_pauli_evolution(&x, std::f64::consts::FRAC_PI_2);
        }
        for (terms, &th) in self.generators.iter().zip(theta) {
            for (p, v) in terms {
                circ.push_pauli_evolution(p, th * v);
            }
        }
        circ
    }

    /// Single-qubit X strings preparing the reference from `|0…0⟩`.
    fn hf_flips(&self) -> Vec<PauliString> {
        (0..self.total)
            .filter(|q| self.hf >> q & 1 == 1)
            .map(|q| PauliString::from_masks(self.total, 1 << q, 0))
            .collect()
    }
}

impl Objective for JwUccsd {
    fn num_params(&self) -> usize {
        self.generators.len()
    }

    fn energy(&self, theta: &[f64]) -> f64 {
        self.expectation(&self.prepare(theta))
    }
}

pub fn jw_uccsd_vqe(
    ints: &IntegralSet,
    shape: &SectorShape,
    excitations: &[Excitation],
    cfg: &VqeConfig,
) -> Result<VqeResult> {
    minimize(&JwUccsd::new(ints, shape, excitations)?, cfg)
}
