//! One VQE run per (fixture, encoding).

use clap::ValueEnum;
use combifock::ansatz::{enumerate_excitations, ClusterOperator};
use combifock::compact_ham::CompactHamiltonian;
use combifock::integrals::IntegralSet;
use combifock::jw::{jw_hamiltonian, JwUccsd};
use combifock::pauli::decompose_real;
use combifock::vqe::{minimize, minimize_compact, VqeConfig};
use serde::Serialize;

use crate::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    Compact,
    JwFull,
    Both,
}

impl Encoding {
    pub fn expand(self) -> &'static [Encoding] {
        match self {
            Encoding::Compact => &[Encoding::Compact],
            Encoding::JwFull => &[Encoding::JwFull],
            Encoding::Both => &[Encoding::Compact, Encoding::JwFull],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Encoding::Compact => "compact",
            Encoding::JwFull => "jw-full",
            Encoding::Both => "both",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSettings {
    pub mp2_eps: f64,
    pub prune_eps: f64,
    pub vqe: VqeConfig,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub distance_angstrom: f64,
    pub encoding: String,
    pub n_qubits: usize,
    pub n_params: usize,
    pub vqe_energy: f64,
    pub exact_energy: f64,
    pub delta: f64,
    pub function_calls: usize,
    pub iterations: usize,
    pub depth: usize,
    pub cnot_count: usize,
    pub pauli_terms: usize,
}

pub fn run_point(
    ints: &IntegralSet,
    distance: f64,
    encoding: Encoding,
    s: &RunSettings,
) -> CliResult<ScanRow> {
    let shape = ints.shape()?;
    let ham = CompactHamiltonian::build(ints, &shape)?;
    let exact = ham.exact_ground_state().energy;
    let excitations = enumerate_excitations(&shape, ints, s.mp2_eps)?;
    let n_params = excitations.len();
    let (n_qubits, result, stats, pauli_terms) = match encoding {
        Encoding::Compact | Encoding::Both => {
            let cluster = ClusterOperator::new(&shape, excitations)?;
            let r = minimize_compact(&ham, &cluster, &s.vqe)?;
            let at_opt = cluster.with_theta(&r.theta_opt)?;
            let stats = at_opt.trotter_circuit(s.prune_eps).circuit.stats();
            let terms = decompose_real(ham.matrix(), s.prune_eps)?.len();
            (ham.qubits(), r, stats, terms)
        }
        Encoding::JwFull => {
            let obj = JwUccsd::new(ints, &shape, &excitations)?;
            let r = minimize(&obj, &s.vqe)?;
            let stats = obj.circuit(&r.theta_opt).stats();
            let terms = jw_hamiltonian(ints)?.pruned(s.prune_eps).len();
            (obj.num_qubits(), r, stats, terms)
        }
    };
    Ok(ScanRow {
        distance_angstrom: distance,
        encoding: encoding.label().into(),
        n_qubits,
        n_params,
        vqe_energy: result.energy,
        exact_energy: exact,
        delta: result.energy - exact,
        function_calls: result.function_calls,
        iterations: result.iterations,
        depth: stats.depth,
        cnot_count: stats.cnots,
        pauli_terms,
    })
}

/// Compact Hamiltonian term count at `prune_eps`.
pub fn compact_terms(ints: &IntegralSet, prune_eps: f64) -> CliResult<(usize, usize)> {
    let shape = ints.shape()?;
    let ham = CompactHamiltonian::build(ints, &shape)?;
    Ok((ham.qubits(), decompose_real(ham.matrix(), prune_eps)?.len()))
}
