//! Morse potential `E(r) = D_e(1 − e^{−a(r − r_e)})² + (E_∞ − D_e)` fitted by
//! Levenberg–Marquardt.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;
use thiserror::Error;

const MAX_ITERATIONS: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MorseFit {
    /// Well depth, Hartree.
    pub d_e: f64,
    /// Width, 1/Å.
    pub a: f64,
    /// Equilibrium distance, Å.
    pub r_e: f64,
    /// Dissociation asymptote, Hartree.
    pub e_inf: f64,
    pub rms: f64,
}

impl MorseFit {
    pub fn energy(&self, r: f64) -> f64 {
        morse(&Vector4::new(self.d_e, self.a, self.r_e, self.e_inf), r)
    }

    fn from_params(p: &Vector4<f64>, rms: f64) -> Self {
        Self {
            d_e: p[0],
            a: p[1],
            r_e: p[2],
            e_inf: p[3],
            rms,
        }
    }
}

#[derive(Debug, Error)]
pub enum MorseError {
    #[error("a Morse fit needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("Morse fit did not converge (best D_e={:.6}, a={:.6}, r_e={:.6}, E_inf={:.6}, rms={:.3e})", best.d_e, best.a, best.r_e, best.e_inf, best.rms)]
    NonConvergence { best: MorseFit },
}

fn morse(p: &Vector4<f64>, r: f64) -> f64 {
    let u = 1.0 - (-p[1] * (r - p[2])).exp();
    p[0] * u * u + p[3] - p[0]
}

fn jacobian_row(p: &Vector4<f64>, r: f64) -> Vector4<f64> {
    let x = (-p[1] * (r - p[2])).exp();
    let u = 1.0 - x;
    Vector4::new(
        u * u - 1.0,
        2.0 * p[0] * u * x * (r - p[2]),
        -2.0 * p[0] * u * x * p[1],
        1.0,
    )
}

fn cost(p: &Vector4<f64>, points: &[(f64, f64)]) -> f64 {
    points.iter().map(|&(r, e)| (morse(p, r) - e).powi(2)).sum()
}

/// Start: `r_e` at the lowest sample, `E_∞` at the largest distance,
/// `D_e = E_∞ − E_min`, `a = 1/Å`.
pub fn initial_guess(points: &[(f64, f64)]) -> Vector4<f64> {
    let (r_min, e_min) = points
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let (_, e_far) = points
        .iter()
        .copied()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    Vector4::new(e_far - e_min, 1.0, r_min, e_far)
}

pub fn fit_morse(points: &[(f64, f64)]) -> Result<MorseFit, MorseError> {
    if points.len() < 4 {
        return Err(MorseError::TooFewPoints(points.len()));
    }
    let mut p = initial_guess(points);
    let mut c = cost(&p, points);
    let mut lambda = 1e-3;
    let rms = |c: f64| (c / points.len() as f64).sqrt();
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut jtj = Matrix4::zeros();
        let mut jtr = Vector4::zeros();
        for &(r, e) in points {
            let j = jacobian_row(&p, r);
            jtj += j * j.transpose();
            jtr += j * (morse(&p, r) - e);
        }
        if jtr.amax() < 1e-15 * (1.0 + c) {
            converged = true;
            break;
        }
        let mut stepped = false;
        while lambda < 1e16 {
            let mut damped = jtj;
            for k in 0..4 {
                damped[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(delta) = damped.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = p + delta;
            let tc = cost(&trial, points);
            if tc.is_finite() && tc <= c {
                let small = delta
                    .abs()
                    .iter()
                    .zip(p.iter())
                    .all(|(d, v)| *d <= 1e-14 * (1.0 + v.abs()));
                p = trial;
                let improvement = c - tc;
                c = tc;
                lambda = (lambda / 10.0).max(1e-15);
                stepped = true;
                if small || improvement <= 1e-30 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !stepped || converged {
            converged = converged || (stepped && c < 1e-28);
            break;
        }
    }
    let fit = MorseFit::from_params(&p, rms(c));
    let physical = fit.d_e > 0.0 && fit.a > 0.0 && fit.r_e > 0.0;
    if converged && physical {
        Ok(fit)
    } else {
        Err(MorseError::NonConvergence { best: fit })
    }
}
