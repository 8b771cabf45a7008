//! Variational loop: ADAM over central-difference gradients.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::ClusterOperator;
use crate::compact_ham::CompactHamiltonian;
use crate::error::{Error, Result};

/// Consecutive sub-tolerance energy changes required to stop.
const STABLE_STEPS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Hartree.
    pub energy_tolerance: f64,
    pub gradient_step: f64,
    pub seed: u64,
    /// Uniform `[−jitter, jitter]` perturbation of the zero start; 0 disables it.
    pub initial_jitter: f64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_iterations: 2000,
            energy_tolerance: 1e-7,
            gradient_step: 1e-4,
            seed: 0,
            initial_jitter: 0.0,
        }
    }
}

impl VqeConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.beta1 > 0.0
            && self.beta1 < 1.0
            && self.beta2 > 0.0
            && self.beta2 < 1.0
            && self.learning_rate > 0.0
            && self.epsilon > 0.0
            && self.energy_tolerance > 0.0
            && self.gradient_step > 0.0
            && self.initial_jitter >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidShape(format!(
                "invalid VQE configuration {self:?}"
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    /// Final energy (Hartree).
    pub energy: f64,
    pub theta_opt: Vec<f64>,
    /// Total energy evaluations.
    pub function_calls: usize,
    /// Evaluations spent inside finite-difference gradients.
    pub gradient_calls: usize,
    /// Evaluations at the iterates themselves, including the start point.
    pub line_calls: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Energy at the start point followed by one entry per iteration.
    pub trace: Vec<f64>,
}

/// Scalar energy landscape over ansatz parameters.
pub trait Objective: Sync {
    fn num_params(&self) -> usize;
    fn energy(&self, theta: &[f64]) -> f64;
}

/// Counts every evaluation passed through it.
pub struct Counted<'a, O: ?Sized> {
    inner: &'a O,
    calls: AtomicUsize,
}

impl<'a, O: Objective + ?Sized> Counted<'a, O> {
    pub fn new(inner: &'a O) -> Self {
        Self {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn energy(&self, theta: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.energy(theta)
    }
}

/// Compact Hamiltonian with the closed-form rank-2 ansatz. Only the
/// reference and target amplitudes are nonzero, so the energy is a quadratic
/// form on that support.
pub struct CompactObjective<'a> {
    ham: &'a CompactHamiltonian,
    support: Vec<usize>,
    /// Hamiltonian restricted to `support`, row-major.
    block: Vec<f64>,
}

impl<'a> CompactObjective<'a> {
    pub fn new(ham: &'a CompactHamiltonian, cluster: &ClusterOperator) -> Result<Self> {
        if ham.qubits() != cluster.qubits() {
            return Err(Error::Dimension(format!(
                "Hamiltonian on {} qubits, ansatz on {}",
                ham.qubits(),
                cluster.qubits()
            )));
        }
        let support: Vec<usize> = std::iter::once(0).chain(cluster.targets()).collect();
        let m = ham.matrix();
        let block = support
            .iter()
            .flat_map(|&r| support.iter().map(move |&c| m[(r, c)]))
            .collect();
        Ok(Self {
            ham,
            support,
            block,
        })
    }

    pub fn hamiltonian(&self) -> &CompactHamiltonian {
        self.ham
    }

    /// Amplitudes on `support`: `cos τ` on the reference, `−sin τ · θ_s/τ` on targets.
    fn amplitudes(theta: &[f64]) -> Vec<f64> {
        let tau = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        let mut a = Vec::with_capacity(theta.len() + 1);
        if tau == 0.0 {
            a.push(1.0);
            a.extend(std::iter::repeat_n(0.0, theta.len()));
        } else {
            let (s, c) = tau.sin_cos();
            a.push(c);
            a.extend(theta.iter().map(|t| -s * t / tau));
        }
        a
    }
}

impl Objective for CompactObjective<'_> {
    fn num_params(&self) -> usize {
        self.support.len() - 1
    }

    fn energy(&self, theta: &[f64]) -> f64 {
        let a = Self::amplitudes(theta);
        let k = a.len();
        let mut e = 0.0;
        for (r, ar) in a.iter().enumerate() {
            if *ar == 0.0 {
                continue;
            }
            let row = &self.block[r * k..(r + 1) * k];
            e += ar * row.iter().zip(&a).map(|(h, ac)| h * ac).sum::<f64>();
        }
        e
    }
}

/// `⟨ψ(θ)|H|ψ(θ)⟩` with `ψ(θ) = exp(−iK(θ))|0⟩`; the core energy is carried
/// on the Hamiltonian's physical diagonal.
pub fn energy(theta: &[f64], ham: &CompactHamiltonian, cluster: &ClusterOperator) -> Result<f64> {
    if theta.len() != cluster.num_params() {
        return Err(Error::ParameterCount {
            expected: cluster.num_params(),
            got: theta.len(),
        });
    }
    Ok(CompactObjective::new(ham, cluster)?.energy(theta))
}

/// Central differences `(E(θ + h e_s) − E(θ − h e_s)) / 2h`, two evaluations
/// per coordinate, evaluated in parallel.
pub fn gradient<O: Objective + ?Sized>(
    objective: &Counted<'_, O>,
    theta: &[f64],
    step: f64,
) -> Vec<f64> {
    (0..theta.len())
        .into_par_iter()
        .map(|s| {
            let mut shifted = theta.to_vec();
            shifted[s] = theta[s] + step;
            let plus = objective.energy(&shifted);
            shifted[s] = theta[s] - step;
            let minus = objective.energy(&shifted);
            (plus - minus) / (2.0 * step)
        })
        .collect()
}

/// ADAM from the zero (Hartree–Fock) start. Stops after three consecutive
/// iterations with `|E_t − E_{t−1}| < energy_tolerance` or at `max_iterations`.
pub fn minimize<O: Objective + ?Sized>(objective: &O, cfg: &VqeConfig) -> Result<VqeResult> {
    cfg.validate()?;
    let counted = Counted::new(objective);
    let p = objective.num_params();
    let mut theta = vec![0.0; p];
    if cfg.initial_jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for t in &mut theta {
            *t = rng.gen_range(-cfg.initial_jitter..=cfg.initial_jitter);
        }
    }
    let mut m = vec![0.0; p];
    let mut v = vec![0.0; p];
    let mut e_prev = counted.energy(&theta);
    let mut line_calls = 1;
    let mut gradient_calls = 0;
    if !e_prev.is_finite() {
        return Err(Error::NonFinite {
            iteration: 0,
            energy: e_prev,
        });
    }
    let mut trace = vec![e_prev];
    let mut stable = 0;
    let mut converged = false;
    let mut iterations = 0;
    for t in 1..=cfg.max_iterations {
        iterations = t;
        let g = gradient(&counted, &theta, cfg.gradient_step);
        gradient_calls += 2 * p;
        let b1t = 1.0 - cfg.beta1.powi(t as i32);
        let b2t = 1.0 - cfg.beta2.powi(t as i32);
        for s in 0..p {
            m[s] = cfg.beta1 * m[s] + (1.0 - cfg.beta1) * g[s];
            v[s] = cfg.beta2 * v[s] + (1.0 - cfg.beta2) * g[s] * g[s];
            let m_hat = m[s] / b1t;
            let v_hat = v[s] / b2t;
            theta[s] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
        }
        let e = counted.energy(&theta);
        line_calls += 1;
        if !e.is_finite() || g.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                iteration: t,
                energy: e,
            });
        }
        trace.push(e);
        if (e - e_prev).abs() < cfg.energy_tolerance {
            stable += 1;
        } else {
            stable = 0;
        }
        e_prev = e;
        if stable >= STABLE_STEPS {
            converged = true;
            break;
        }
    }
    let function_calls = counted.calls();
    debug_assert_eq!(function_calls, gradient_calls + line_calls);
    Ok(VqeResult {
        energy: e_prev,
        theta_opt: theta,
        function_calls,
        gradient_calls,
        line_calls,
        iterations,
        converged,
        trace,
    })
}

/// [`minimize`] on the compact encoding.
pub fn minimize_compact(
    ham: &CompactHamiltonian,
    cluster: &ClusterOperator,
    cfg: &VqeConfig,
) -> Result<VqeResult> {
    minimize(&CompactObjective::new(ham, cluster)?, cfg)
}
