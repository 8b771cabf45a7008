//! CSV and JSON output. The CSV column set and order are fixed.

use std::fmt::Write as _;

use serde::Serialize;

use crate::morse::MorseFit;
use crate::run::{RunSettings, ScanRow};

pub const SCAN_COLUMNS: [&str; 12] = [
    "distance_angstrom",
    "encoding",
    "n_qubits",
    "n_params",
    "vqe_energy",
    "exact_energy",
    "delta",
    "function_calls",
    "iterations",
    "depth",
    "cnot_count",
    "pauli_terms",
];

pub const COMPARE_COLUMNS: [&str; 9] = [
    "distance_angstrom",
    "n_params",
    "full_depth",
    "compact_depth",
    "full_function_calls",
    "compact_function_calls",
    "full_delta",
    "compact_delta",
    "compact_fewer_calls",
];

pub const TERMS_COLUMNS: [&str; 3] = ["distance_angstrom", "n_qubits", "pauli_terms"];

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = SCAN_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{:?},{},{},{},{:.12},{:.12},{:.6e},{},{},{},{},{}",
            r.distance_angstrom,
            r.encoding,
            r.n_qubits,
            r.n_params,
            r.vqe_energy,
            r.exact_energy,
            r.delta,
            r.function_calls,
            r.iterations,
            r.depth,
            r.cnot_count,
            r.pauli_terms
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub distance_angstrom: f64,
    pub n_params: usize,
    pub full_depth: usize,
    pub compact_depth: usize,
    pub full_function_calls: usize,
    pub compact_function_calls: usize,
    pub full_delta: f64,
    pub compact_delta: f64,
    pub compact_fewer_calls: bool,
}

impl CompareRow {
    pub fn from_pair(compact: &ScanRow, full: &ScanRow) -> Self {
        Self {
            distance_angstrom: compact.distance_angstrom,
            n_params: compact.n_params,
            full_depth: full.depth,
            compact_depth: compact.depth,
            full_function_calls: full.function_calls,
            compact_function_calls: compact.function_calls,
            full_delta: full.delta,
            compact_delta: compact.delta,
            compact_fewer_calls: compact.function_calls < full.function_calls,
        }
    }
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = COMPARE_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{:?},{},{},{},{},{},{:.6e},{:.6e},{}",
            r.distance_angstrom,
            r.n_params,
            r.full_depth,
            r.compact_depth,
            r.full_function_calls,
            r.compact_function_calls,
            r.full_delta,
            r.compact_delta,
            r.compact_fewer_calls
        );
    }
    out
}

pub fn terms_csv(rows: &[(f64, usize, usize)]) -> String {
    let mut out = TERMS_COLUMNS.join(",");
    out.push('\n');
    for (d, q, t) in rows {
        let _ = writeln!(out, "{d:?},{q},{t}");
    }
    out
}

#[derive(Debug, Serialize)]
pub struct ScanReport<'a> {
    pub molecule: &'a str,
    pub spin_orbitals: usize,
    pub settings: &'a RunSettings,
    pub rows: &'a [ScanRow],
    /// Fit of the compact VQE energies when at least four distances ran.
    pub morse_fit: Option<MorseFit>,
}
