//! Dense Hamiltonian on the combinadic register.
//!
//! Every physical determinant `|σ↑σ↓⟩` is acted on by the one- and two-body
//! excitations of the molecular Hamiltonian; source and image are mapped to
//! their paired ranks and the coefficient is accumulated together with its
//! Hermitian-conjugate mirror. The `k = j` contraction term is subtracted in
//! the same pass. Rows and columns at or beyond `C(M,N↑)·C(M,N↓)` are padding
//! and stay exactly zero.

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::combinadics::{Determinant, SectorShape, Spin};
use crate::error::{Error, Result};
use crate::fockops::{excite, SignedState};
use crate::integrals::{IntegralSet, SpinOrbitalCoefficients};

pub const DEFAULT_MAX_QUBITS: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub struct CompactHamiltonian {
    shape: SectorShape,
    qubits: usize,
    dim_phys: usize,
    /// Real symmetric `2^n × 2^n` matrix in Hartree, core energy included on
    /// the physical diagonal.
    matrix: DMatrix<f64>,
    e_core: f64,
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    /// Unit eigenvector embedded in all `2^n` components (zero on padding).
    pub state: DVector<f64>,
}

impl CompactHamiltonian {
    /// Builds the compact Hamiltonian with the default register cap.
    pub fn build(ints: &IntegralSet, shape: &SectorShape) -> Result<Self> {
        Self::build_with_cap(ints, shape, DEFAULT_MAX_QUBITS)
    }

    pub fn build_with_cap(
        ints: &IntegralSet,
        shape: &SectorShape,
        max_qubits: usize,
    ) -> Result<Self> {
        if shape.orbitals() != ints.norb() {
            return Err(Error::Dimension(format!(
                "shape has {} orbitals, integrals have {}",
                shape.orbitals(),
                ints.norb()
            )));
        }
        let qubits = shape.qubit_count()?;
        if qubits > max_qubits {
            return Err(Error::TooLarge {
                qubits,
                cap: max_qubits,
            });
        }
        let dim = 1usize << qubits;
        let basis = shape.basis()?;
        let dim_phys = basis.len();
        let coeffs = ints.to_physicist_coefficients();
        let contraction = contraction_table(&coeffs);

        // Column p of the one-sided operator A; H = A + A^T.
        let columns: Vec<Vec<(usize, f64)>> = basis
            .par_iter()
            .map(|det| column(det, shape, &coeffs, &contraction))
            .collect();

        let mut half = DMatrix::<f64>::zeros(dim, dim);
        for (p, col) in columns.iter().enumerate() {
            for &(t, v) in col {
                half[(t, p)] += v;
            }
        }
        let mut matrix = &half + half.transpose();
        for p in 0..dim_phys {
            matrix[(p, p)] += ints.e_core();
        }
        Ok(Self {
            shape: *shape,
            qubits,
            dim_phys,
            matrix,
            e_core: ints.e_core(),
        })
    }

    /// Wraps an electronic matrix given on the physical block (or the full
    /// register) and adds `e_core` to the physical diagonal.
    pub fn from_electronic(
        shape: &SectorShape,
        electronic: &DMatrix<f64>,
        e_core: f64,
    ) -> Result<Self> {
        let qubits = shape.qubit_count()?;
        let dim = 1usize << qubits;
        let dim_phys = shape.dimension()? as usize;
        let n = electronic.nrows();
        if electronic.ncols() != n || (n != dim_phys && n != dim) {
            return Err(Error::Dimension(format!(
                "electronic matrix is {}x{}, expected {dim_phys} or {dim}",
                n,
                electronic.ncols()
            )));
        }
        let mut matrix = DMatrix::zeros(dim, dim);
        for r in 0..dim_phys {
            for c in 0..dim_phys {
                matrix[(r, c)] = electronic[(r, c)];
            }
            matrix[(r, r)] += e_core;
        }
        Ok(Self {
            shape: *shape,
            qubits,
            dim_phys,
            matrix,
            e_core,
        })
    }

    pub fn shape(&self) -> &SectorShape {
        &self.shape
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dimension(&self) -> usize {
        1 << self.qubits
    }

    pub fn dim_phys(&self) -> usize {
        self.dim_phys
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn physical_block(&self) -> DMatrix<f64> {
        self.matrix
            .view((0, 0), (self.dim_phys, self.dim_phys))
            .into_owned()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// Largest magnitude anywhere in the padding rows/columns.
    pub fn padding_leak(&self) -> f64 {
        let dim = self.dimension();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                if r >= self.dim_phys || c >= self.dim_phys {
                    worst = worst.max(self.matrix[(r, c)].abs());
                }
            }
        }
        worst
    }

    /// Ascending eigenvalues of the physical block.
    pub fn physical_spectrum(&self) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(self.physical_block())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// Lowest eigenpair of the physical block. Padding states are excluded:
    /// their zero eigenvalue would otherwise undercut a positive ground energy.
    pub fn exact_ground_state(&self) -> GroundState {
        let eig = SymmetricEigen::new(self.physical_block());
        let (idx, &energy) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("physical block is non-empty");
        let v = eig.eigenvectors.column(idx);
        let mut state = DVector::zeros(self.dimension());
        // Fix the overall sign so the reference amplitude is non-negative.
        let sign = if v[0] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..self.dim_phys {
            state[i] = sign * v[i];
        }
        state /= state.norm();
        GroundState { energy, state }
    }

    /// Real expectation value `⟨ψ|H|ψ⟩` of a real statevector on the register.
    pub fn expectation(&self, psi: &[f64]) -> Result<f64> {
        if psi.len() != self.dimension() {
            return Err(Error::Dimension(format!(
                "statevector has {} amplitudes, register has {}",
                psi.len(),
                self.dimension()
            )));
        }
        let v = DVector::from_column_slice(psi);
        Ok(v.dot(&(&self.matrix * &v)))
    }

    /// Text dump: `#`-prefixed header lines, then one matrix row per line
    /// (row-major, space separated, shortest round-trip exponent form).
    pub fn write_dense(&self, mut out: impl Write) -> std::io::Result<()> {
        let dim = self.dimension();
        writeln!(
            out,
            "# combifock compact hamiltonian, row-major, Hartree, core energy included"
        )?;
        writeln!(
            out,
            "# qubits={} dimension={} physical={} orbitals={} n_up={} n_down={} e_core={:e}",
            self.qubits,
            dim,
            self.dim_phys,
            self.shape.orbitals(),
            self.shape.n_up(),
            self.shape.n_down(),
            self.e_core
        )?;
        for r in 0..dim {
            let row: Vec<String> = (0..dim)
                .map(|c| format!("{:e}", self.matrix[(r, c)]))
                .collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `Σ_j h_ijjl` for every same-spin `(i, l)`, flattened `i * 2M + l`.
fn contraction_table(coeffs: &SpinOrbitalCoefficients<'_>) -> Vec<f64> {
    let n = coeffs.spin_orbitals();
    let mut table = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            table[i * n + l] = (0..n).map(|j| coeffs.two_body(i, j, j, l)).sum();
        }
    }
    table
}

/// Spin orbitals `j` occupied in `det` paired with every `i` in the same spin
/// sector that `a_i† a_j` can reach (vacant orbitals or `i = j`).
fn moves(det: &Determinant, shape: &SectorShape) -> Vec<(usize, usize)> {
    let m = shape.orbitals();
    let mut out = Vec::new();
    for spin in Spin::BOTH {
        let occ = det.sector(spin);
        let vacant = occ.vacancies(m);
        for j in occ.elements() {
            let sj = shape.spin_orbital(spin, j);
            for i in vacant.elements().chain(std::iter::once(j)) {
                out.push((shape.spin_orbital(spin, i), sj));
            }
        }
    }
    out
}

fn column(
    det: &Determinant,
    shape: &SectorShape,
    coeffs: &SpinOrbitalCoefficients<'_>,
    contraction: &[f64],
) -> Vec<(usize, f64)> {
    let n = coeffs.spin_orbitals();
    let mut out = Vec::new();
    let first_moves = moves(det, shape);

    // One-body: h_ij E_ij.
    for &(i, j) in &first_moves {
        let h = coeffs.one_body(i, j);
        if h == 0.0 {
            continue;
        }
        if let Some(SignedState { state, sign }) = excite(i, j, det, shape) {
            out.push((shape.index_of(&state), sign as f64 * h));
        }
    }

    // Two-body: ½ h_ijkl E_ij E_kl, with E_kl applied first.
    for &(k, l) in &first_moves {
        let Some(mid) = excite(k, l, det, shape) else {
            continue;
        };
        for (i, j) in moves(&mid.state, shape) {
            let h = coeffs.two_body(i, j, k, l);
            if h == 0.0 {
                continue;
            }
            if let Some(end) = excite(i, j, &mid.state, shape) {
                let sign = (mid.sign * end.sign) as f64;
                out.push((shape.index_of(&end.state), 0.5 * sign * h));
            }
        }
    }

    // Contraction: −½ δ_kj h_ijkl E_il.
    for &(i, l) in &first_moves {
        let h = contraction[i * n + l];
        if h == 0.0 {
            continue;
        }
        if let Some(SignedState { state, sign }) = excite(i, l, det, shape) {
            out.push((shape.index_of(&state), -0.5 * sign as f64 * h));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::parse_fcidump;

    const H2: &str = " &FCI NORB=   2,NELEC= 2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
 0.6744887663568377    1    1    1    1
 0.1812888082114958    2    1    2    1
 0.6634680964235677    2    2    1    1
 0.6973937674230266    2    2    2    2
 -1.252463573564898    1    1  0  0
 -0.4759487152209642    2    2  0  0
 0.7137539936876182  0  0  0  0
";

    #[test]
    fn h2_minimal_ground_energy() {
        let ints = parse_fcidump(H2).unwrap();
        let h = CompactHamiltonian::build(&ints, &ints.shape().unwrap()).unwrap();
        assert_eq!(h.qubits(), 2);
        assert!(h.hermiticity_error() < 1e-14);
        let gs = h.exact_ground_state();
        assert!((gs.energy + 1.137).abs() < 1e-3, "{}", gs.energy);
        assert!((gs.state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_integrals_give_core_identity() {
        let mut ints = IntegralSet::zeros(3, 1, 1);
        ints.set_e_core(0.25);
        let h = CompactHamiltonian::build(&ints, &ints.shape().unwrap()).unwrap();
        assert_eq!(h.dim_phys(), 9);
        assert_eq!(h.dimension(), 16);
        for r in 0..16 {
            for c in 0..16 {
                let expected = if r == c && r < 9 { 0.25 } else { 0.0 };
                assert_eq!(h.matrix()[(r, c)], expected);
            }
        }
    }

    #[test]
    fn one_particle_diagonal_h1() {
        let mut ints = IntegralSet::zeros(3, 0, 1);
        for (i, e) in [-1.0, 0.5, 2.0].into_iter().enumerate() {
            ints.set_h1(i, i, e);
        }
        let h = CompactHamiltonian::build(&ints, &ints.shape().unwrap()).unwrap();
        let block = h.physical_block();
        assert_eq!(
            block,
            DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 0.5, 2.0]))
        );
    }

    #[test]
    fn padding_eigenvalue_is_excluded() {
        let shape = SectorShape::new(3, 1, 0).unwrap();
        let h = CompactHamiltonian::from_electronic(&shape, &DMatrix::identity(3, 3), 0.0).unwrap();
        assert_eq!(h.dimension(), 4);
        let gs = h.exact_ground_state();
        assert_eq!(gs.energy, 1.0);
        assert_eq!(gs.state[3], 0.0);
    }

    #[test]
    fn size_cap_is_enforced() {
        let ints = IntegralSet::zeros(12, 3, 3);
        let shape = ints.shape().unwrap();
        assert!(matches!(
            CompactHamiltonian::build_with_cap(&ints, &shape, 10),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn builds_are_bitwise_deterministic() {
        let ints = parse_fcidump(H2).unwrap();
        let shape = ints.shape().unwrap();
        let a = CompactHamiltonian::build(&ints, &shape).unwrap();
        let b = CompactHamiltonian::build(&ints, &shape).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dense_dump_has_header_and_rows() {
        let ints = parse_fcidump(H2).unwrap();
        let h = CompactHamiltonian::build(&ints, &ints.shape().unwrap()).unwrap();
        let mut buf = Vec::new();
        h.write_dense(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[1].contains("qubits=2"));
        let first: Vec<f64> = lines[2].split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(first[0], h.matrix()[(0, 0)]);
    }
}
