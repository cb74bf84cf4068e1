//! Single-mode Gaussian states, energy bookkeeping and homodyne SNR.
//!
//! Quadratures are `X = a + a†`, so the vacuum variance is 1 and a coherent
//! state of real amplitude `α` has `<X> = 2α`.

use crate::error::{invalid, Result};

/// `D(α) R(θ) S(r) ρ_th(n_th)`: a displaced, rotated, squeezed thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    /// Real displacement amplitude.
    pub displacement: f64,
    /// Squeezing parameter; positive values squeeze the amplitude quadrature.
    pub squeezing: f64,
    /// Rotation of the squeezing ellipse relative to the displacement.
    pub squeezing_angle: f64,
    /// Mean thermal photons before squeezing.
    pub thermal_occupation: f64,
}

impl GaussianState {
    pub fn new(displacement: f64, squeezing: f64, squeezing_angle: f64, thermal_occupation: f64) -> Result<Self> {
        let state = Self {
            displacement,
            squeezing,
            squeezing_angle,
            thermal_occupation,
        };
        if ![displacement, squeezing, squeezing_angle, thermal_occupation]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(invalid(format!("Gaussian state fields must be finite: {state:?}")));
        }
        if thermal_occupation < 0.0 {
            return Err(invalid(format!(
                "thermal occupation must be non-negative, got {thermal_occupation}"
            )));
        }
        Ok(state)
    }

    pub fn coherent(alpha: f64) -> Self {
        Self {
            displacement: alpha,
            squeezing: 0.0,
            squeezing_angle: 0.0,
            thermal_occupation: 0.0,
        }
    }

    /// Displaced amplitude-squeezed vacuum, the optimal binary signal state.
    pub fn displaced_squeezed(beta: f64, r: f64) -> Self {
        Self {
            displacement: beta,
            squeezing: r,
            squeezing_angle: 0.0,
            thermal_occupation: 0.0,
        }
    }

    pub fn purity(&self) -> f64 {
        1.0 / (2.0 * self.thermal_occupation + 1.0)
    }

    /// Exact energy `α² + n_th + (2 n_th + 1) sinh²(r)`.
    pub fn mean_photon_number(&self) -> f64 {
        let s = self.squeezing.sinh();
        self.displacement.powi(2)
            + self.thermal_occupation
            + (2.0 * self.thermal_occupation + 1.0) * s * s
    }

    /// Variance of the amplitude quadrature.
    pub fn amplitude_variance(&self) -> f64 {
        let (s, c) = self.squeezing_angle.sin_cos();
        (2.0 * self.thermal_occupation + 1.0)
            * ((-2.0 * self.squeezing).exp() * c * c + (2.0 * self.squeezing).exp() * s * s)
    }

    /// Homodyne SNR `<X>² / Var(X)` of the amplitude quadrature.
    pub fn snr(&self) -> f64 {
        4.0 * self.displacement.powi(2) / self.amplitude_variance()
    }
}

pub fn mean_photon_number(state: &GaussianState) -> f64 {
    state.mean_photon_number()
}

pub fn snr_general(state: &GaussianState) -> f64 {
    state.snr()
}

/// Energy budget of a signal state: total mean photons and the fraction spent
/// on squeezing, `γ = sinh²(r) / n̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBudget {
    pub n_mean: f64,
    pub gamma: f64,
}

impl EnergyBudget {
    pub fn new(n_mean: f64, gamma: f64) -> Result<Self> {
        if !(n_mean >= 0.0 && n_mean.is_finite()) {
            return Err(invalid(format!("mean photon number must be finite and ≥ 0, got {n_mean}")));
        }
        if !(0.0..1.0).contains(&gamma) {
            return Err(invalid(format!("squeezing fraction must lie in [0, 1), got {gamma}")));
        }
        Ok(Self { n_mean, gamma })
    }

    /// Budget with the SNR-optimal squeezing fraction.
    pub fn optimal(n_mean: f64) -> Result<Self> {
        Self::new(n_mean, optimal_gamma(n_mean))
    }

    pub fn squeezed_photons(&self) -> f64 {
        self.gamma * self.n_mean
    }

    /// Squeezing parameter realizing `sinh²(r) = γ n̄`.
    pub fn squeezing(&self) -> f64 {
        self.squeezed_photons().sqrt().asinh()
    }

    /// The pure displaced squeezed state spending this budget.
    pub fn state(&self) -> GaussianState {
        GaussianState::displaced_squeezed(((1.0 - self.gamma) * self.n_mean).sqrt(), self.squeezing())
    }
}

/// `SNR = 4 (n̄ - n̄_s) (√n̄_s + √(n̄_s + 1))²` with `n̄_s = γ n̄`.
pub fn snr_bpsk(budget: &EnergyBudget) -> f64 {
    let ns = budget.squeezed_photons();
    let gain = ns.sqrt() + (ns + 1.0).sqrt();
    4.0 * (budget.n_mean - ns) * gain * gain
}

/// `γ* = n̄ / (2n̄ + 1)`, where the binary SNR peaks at `4(n̄² + n̄)`.
pub fn optimal_gamma(n_mean: f64) -> f64 {
    n_mean / (2.0 * n_mean + 1.0)
}

/// SNR after rotating a displaced squeezed state by `phi` before homodyne.
pub fn snr_rotated(alpha: f64, r: f64, phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    4.0 * alpha * alpha * c * c / ((-2.0 * r).exp() * c * c + (2.0 * r).exp() * s * s)
}

/// Displacement `β = √((1 - γ) n̄)` that keeps the squeezed signal at the
/// same energy as the coherent one.
pub fn amplitude_from_budget(budget: &EnergyBudget) -> Result<f64> {
    if !(budget.gamma < 1.0) {
        return Err(invalid(format!("squeezing fraction must be < 1, got {}", budget.gamma)));
    }
    Ok(((1.0 - budget.gamma) * budget.n_mean).sqrt())
}
