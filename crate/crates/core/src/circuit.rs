//! Gate-level circuits for Pauli-evolution products, with depth/CNOT
//! accounting, OpenQASM 2 export and a dense statevector simulator.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::pauli::{Pauli, PauliString, PauliSum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// `Rz(θ) = exp(−iθZ/2)`.
    Rz(usize, f64),
    Cx {
        control: usize,
        target: usize,
    },
}

impl Gate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) => (q, None),
            Gate::Cx { control, target } => (control, Some(target)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitStats {
    pub gates: usize,
    pub cnots: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cx { .. }))
            .count()
    }

    /// Longest path when every gate occupies one layer on each of its qubits.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.qubits];
        for g in &self.gates {
            match g.qubits() {
                (a, None) => level[a] += 1,
                (a, Some(b)) => {
                    let l = level[a].max(level[b]) + 1;
                    level[a] = l;
                    level[b] = l;
                }
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    pub fn stats(&self) -> CircuitStats {
        CircuitStats {
            gates: self.gates.len(),
            cnots: self.cnot_count(),
            depth: self.depth(),
        }
    }

    /// Appends `exp(−i·angle·P)`: basis change to Z, CNOT ladder onto the
    /// highest support qubit, `Rz(2·angle)`, then the inverse ladder and basis
    /// change. Identity strings only contribute a global phase and are skipped.
    pub fn push_pauli_evolution(&mut self, p: &PauliString, angle: f64) {
        let support = p.support();
        let Some(&last) = support.last() else { return };
        for &q in &support {
            match p.get(q) {
                Pauli::X => self.gates.push(Gate::H(q)),
                Pauli::Y => {
                    self.gates.push(Gate::Sdg(q));
                    self.gates.push(Gate::H(q));
                }
                _ => {}
            }
        }
        for w in support.windows(2) {
            self.gates.push(Gate::Cx {
                control: w[0],
                target: w[1],
            });
        }
        self.gates.push(Gate::Rz(last, 2.0 * angle));
        for w in support.windows(2).rev() {
            self.gates.push(Gate::Cx {
                control: w[0],
                target: w[1],
            });
        }
        for &q in &support {
            match p.get(q) {
                Pauli::X => self.gates.push(Gate::H(q)),
                Pauli::Y => {
                    self.gates.push(Gate::H(q));
                    self.gates.push(Gate::S(q));
                }
                _ => {}
            }
        }
    }

    /// Single Trotter step of `exp(−i·time·Σ c_j P_j)` in term order.
    /// Only the real parts of the coefficients are used.
    pub fn from_pauli_evolution(sum: &PauliSum, time: f64) -> Self {
        let mut c = Circuit::new(sum.num_qubits());
        for (p, coeff) in sum.iter() {
            c.push_pauli_evolution(p, time * coeff.re);
        }
        c
    }

    pub fn to_qasm(&self) -> String {
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.qubits);
        for g in &self.gates {
            let _ = match *g {
                Gate::H(q) => writeln!(out, "h q[{q}];"),
                Gate::S(q) => writeln!(out, "s q[{q}];"),
                Gate::Sdg(q) => writeln!(out, "sdg q[{q}];"),
                Gate::Rz(q, t) => writeln!(out, "rz({t:.17e}) q[{q}];"),
                Gate::Cx { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
            };
        }
        out
    }

    /// Applies the circuit to a `2^qubits` statevector in place.
    pub fn simulate(&self, state: &mut [Complex64]) {
        assert_eq!(state.len(), 1usize << self.qubits);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        for g in &self.gates {
            match *g {
                Gate::H(q) => {
                    let bit = 1usize << q;
                    for i in 0..state.len() {
                        if i & bit == 0 {
                            let (a, b) = (state[i], state[i | bit]);
                            state[i] = (a + b) * half;
                            state[i | bit] = (a - b) * half;
                        }
                    }
                }
                Gate::S(q) | Gate::Sdg(q) => {
                    let ph = if matches!(g, Gate::S(_)) {
                        Complex64::i()
                    } else {
                        -Complex64::i()
                    };
                    let bit = 1usize << q;
                    for (i, a) in state.iter_mut().enumerate() {
                        if i & bit != 0 {
                            *a *= ph;
                        }
                    }
                }
                Gate::Rz(q, t) => {
                    let bit = 1usize << q;
                    let lo = Complex64::from_polar(1.0, -t / 2.0);
                    let hi = Complex64::from_polar(1.0, t / 2.0);
                    for (i, a) in state.iter_mut().enumerate() {
                        *a *= if i & bit == 0 { lo } else { hi };
                    }
                }
                Gate::Cx { control, target } => {
                    let (cb, tb) = (1usize << control, 1usize << target);
                    for i in 0..state.len() {
                        if i & cb != 0 && i & tb == 0 {
                            state.swap(i, i | tb);
                        }
                    }
                }
            }
        }
    }
}

/// `exp(−i·angle·P)|ψ⟩ = cos(angle)|ψ⟩ − i sin(angle) P|ψ⟩`, in place.
pub fn apply_pauli_rotation(state: &mut [Complex64], p: &PauliString, angle: f64) {
    let (s, c) = angle.sin_cos();
    let mut rotated = vec![Complex64::default(); state.len()];
    for (b, amp) in state.iter().enumerate() {
        let (r, ph) = p.apply_basis(b);
        rotated[r] = ph * amp;
    }
    let minus_i_s = Complex64::new(0.0, -s);
    for (a, pa) in state.iter_mut().zip(rotated) {
        *a = *a * c + minus_i_s * pa;
    }
}
