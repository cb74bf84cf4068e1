//! Error models for an imperfect transmitter and a lossy channel, expressed
//! in the quantities an experiment measures: displacement, squeezing,
//! thermal and electronic noise, homodyne visibility and channel loss.

use crate::error::{invalid, Error, Result};
use crate::gaussian::EnergyBudget;
use crate::numerics::{erfc, minimize_golden};

/// Convert a squeezing level in dB to the squeezing parameter `r`.
pub fn db_to_r(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

pub fn r_to_db(r: f64) -> f64 {
    r * 20.0 / std::f64::consts::LN_10
}

/// Squeezing given either in dB of noise reduction or as the parameter `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Squeezing {
    Decibels(f64),
    Parameter(f64),
}

impl Squeezing {
    pub fn r(self) -> f64 {
        match self {
            Squeezing::Decibels(db) => db_to_r(db),
            Squeezing::Parameter(r) => r,
        }
    }
}

/// How the mean photon number is attributed to squeezing and impurity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyModel {
    /// `n̄ V² = β² + sinh²(r) + (v_th - 1)/2`, the estimator used to analyse
    /// measured data.
    #[default]
    Published,
    /// Exact squeezed-thermal energy `β² + n_th + (2 n_th + 1) sinh²(r)` with
    /// `v_th = 2 n_th + 1`.
    Exact,
}

/// Transmitter, channel and receiver parameters, all in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentParams {
    pub beta: f64,
    pub r: f64,
    /// Thermal noise factor of the squeezed state (≥ 1).
    pub v_th: f64,
    /// Electronic noise of the homodyne detector (≥ 0).
    pub v_en: f64,
    pub visibility: f64,
    pub loss: f64,
    pub energy_model: EnergyModel,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self::ideal()
    }
}

impl ExperimentParams {
    pub fn new(beta: f64, r: f64, v_th: f64, v_en: f64, visibility: f64, loss: f64) -> Result<Self> {
        let p = Self {
            beta,
            r,
            v_th,
            v_en,
            visibility,
            loss,
            energy_model: EnergyModel::Published,
        };
        p.validate()?;
        Ok(p)
    }

    /// Pure states, unit visibility, no loss and no electronic noise.
    pub fn ideal() -> Self {
        Self {
            beta: 0.0,
            r: 0.0,
            v_th: 1.0,
            v_en: 0.0,
            visibility: 1.0,
            loss: 0.0,
            energy_model: EnergyModel::Published,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.beta, self.r, self.v_th, self.v_en, self.visibility, self.loss]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(invalid(format!("experiment parameters must be finite: {self:?}")));
        }
        if self.v_th < 1.0 {
            return Err(invalid(format!("v_th must be ≥ 1, got {}", self.v_th)));
        }
        if self.v_en < 0.0 {
            return Err(invalid(format!("v_en must be ≥ 0, got {}", self.v_en)));
        }
        if !(self.visibility > 0.0 && self.visibility <= 1.0) {
            return Err(invalid(format!("visibility must lie in (0, 1], got {}", self.visibility)));
        }
        if !(0.0..=1.0).contains(&self.loss) {
            return Err(invalid(format!("loss must lie in [0, 1], got {}", self.loss)));
        }
        Ok(())
    }

    pub fn with_loss(mut self, loss: f64) -> Self {
        self.loss = loss;
        self
    }

    pub fn with_squeezing(mut self, squeezing: Squeezing) -> Self {
        self.r = squeezing.r();
        self
    }

    pub fn with_energy_model(mut self, model: EnergyModel) -> Self {
        self.energy_model = model;
        self
    }

    /// Sets `r` so that `sinh²(r) = γ n̄ V²`, spending the budget's squeezing
    /// fraction of the detected energy on squeezing.
    pub fn with_budget(mut self, budget: &EnergyBudget) -> Self {
        self.r = squeezing_for_fraction(budget.gamma, budget.n_mean, self.visibility);
        self
    }

    fn thermal_photons(&self) -> f64 {
        0.5 * (self.v_th - 1.0)
    }

    fn squeezing_photons(&self) -> f64 {
        let s2 = self.r.sinh().powi(2);
        match self.energy_model {
            EnergyModel::Published => s2,
            EnergyModel::Exact => self.v_th * s2,
        }
    }

    /// Variance of the squeezed quadrature at the detector, loss included.
    pub fn noise_variance(&self) -> f64 {
        let t = 1.0 - self.loss;
        (-2.0 * self.r).exp() * self.v_th * t + self.loss + self.v_en
    }

    /// Variance of the anti-squeezed quadrature at the detector, loss included.
    pub fn antisqueezed_variance(&self) -> f64 {
        let t = 1.0 - self.loss;
        (2.0 * self.r).exp() * self.v_th * t + self.loss + self.v_en
    }

    fn signal_power_raw(&self, n_mean: f64) -> f64 {
        n_mean * self.visibility * self.visibility - self.squeezing_photons() - self.thermal_photons()
    }

    /// Detected displacement power `β²` implied by a total energy `n̄`.
    pub fn signal_power(&self, n_mean: f64) -> Result<f64> {
        let s = self.signal_power_raw(n_mean);
        if s < 0.0 || s.is_nan() {
            return Err(Error::InfeasibleBudget {
                n_mean,
                signal_power: s,
            });
        }
        Ok(s)
    }

    /// Detected displacement amplitude `β` implied by a total energy `n̄`.
    pub fn detected_amplitude(&self, n_mean: f64) -> Result<f64> {
        self.signal_power(n_mean).map(f64::sqrt)
    }

    /// Homodyne SNR `4 β² (1 - L) / Var` at the receiver.
    pub fn snr(&self, n_mean: f64) -> Result<f64> {
        Ok(4.0 * self.signal_power(n_mean)? * (1.0 - self.loss) / self.noise_variance())
    }
}

/// `r = asinh(√(γ n̄ V²))`.
pub fn squeezing_for_fraction(gamma: f64, n_mean: f64, visibility: f64) -> f64 {
    (gamma * n_mean * visibility * visibility).max(0.0).sqrt().asinh()
}

/// Mean photon number of the measured state from its measured parameters.
pub fn mean_photon_estimate(p: &ExperimentParams) -> f64 {
    (p.beta * p.beta + p.squeezing_photons() + p.thermal_photons()) / (p.visibility * p.visibility)
}

/// Predicted homodyne error of the imperfect state without channel loss.
pub fn predicted_error(p: &ExperimentParams, n_mean: f64) -> Result<f64> {
    let signal = p.signal_power(n_mean)?;
    let noise = (-2.0 * p.r).exp() * p.v_th + p.v_en;
    Ok(0.5 * erfc((2.0 * signal / noise).sqrt()))
}

/// Predicted homodyne error of the imperfect state after a channel with loss `L`.
pub fn predicted_error_lossy(p: &ExperimentParams, n_mean: f64) -> Result<f64> {
    let signal = p.signal_power(n_mean)?;
    let t = 1.0 - p.loss;
    let noise = (-2.0 * p.r).exp() * p.v_th * t + p.loss + p.v_en;
    Ok(0.5 * erfc((2.0 * signal * t / noise).sqrt()))
}

/// Squeezing fraction minimizing [`predicted_error_lossy`] at energy `n̄`,
/// with `sinh²(r) = γ n̄ V²`.
///
/// The search maximizes the SNR, which is equivalent and does not flatten
/// when the error underflows at large `n̄`.
pub fn optimal_gamma_lossy(n_mean: f64, p: &ExperimentParams) -> Result<f64> {
    p.validate()?;
    if !(n_mean >= 0.0) {
        return Err(invalid(format!("mean photon number must be non-negative, got {n_mean}")));
    }
    if n_mean == 0.0 {
        return Ok(0.0);
    }
    let snr_at = |gamma: f64| -> Option<f64> {
        let q = p.with_budget(&EnergyBudget { n_mean, gamma });
        q.snr(n_mean).ok()
    };
    let upper = 1.0 - 1e-12;
    if snr_at(0.0).is_none() {
        return Err(Error::InfeasibleBudget {
            n_mean,
            signal_power: p.with_budget(&EnergyBudget { n_mean, gamma: 0.0 }).signal_power_raw(n_mean),
        });
    }
    // Largest feasible fraction, by bisection on feasibility.
    let hi = if snr_at(upper).is_some() {
        upper
    } else {
        let (mut ok, mut bad) = (0.0, upper);
        while bad - ok > 1e-14 {
            let mid = 0.5 * (ok + bad);
            if snr_at(mid).is_some() {
                ok = mid;
            } else {
                bad = mid;
            }
        }
        ok
    };
    minimize_golden(|g| -snr_at(g).unwrap_or(0.0), 0.0, hi, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUEEZED_38DB: f64 = 0.437_491_167_668_868_7;

    #[test]
    fn decibel_conversion() {
        assert!((db_to_r(3.8) - SQUEEZED_38DB).abs() < 1e-15);
        assert!((r_to_db(db_to_r(5.0)) - 5.0).abs() < 1e-14);
        assert_eq!(Squeezing::Parameter(0.3).r(), 0.3);
    }

    #[test]
    fn parameter_validation() {
        assert!(ExperimentParams::new(1.0, 0.0, 0.9, 0.0, 1.0, 0.0).is_err());
        assert!(ExperimentParams::new(1.0, 0.0, 1.0, -0.1, 1.0, 0.0).is_err());
        assert!(ExperimentParams::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ExperimentParams::new(1.0, 0.0, 1.0, 0.0, 1.0, 1.5).is_err());
        assert!(ExperimentParams::new(1.0, 0.0, 1.0, 0.0, 0.9875, 0.3).is_ok());
    }

    #[test]
    fn photon_estimate_examples() {
        let coh = ExperimentParams { beta: 1.0, ..ExperimentParams::ideal() };
        assert_eq!(mean_photon_estimate(&coh), 1.0);
        let sq = ExperimentParams { r: 0.4375, ..ExperimentParams::ideal() };
        assert!((mean_photon_estimate(&sq) - 0.203_934_328_411_401_58).abs() < 1e-15);
        let vis = ExperimentParams { beta: 1.0, visibility: 0.9875, ..ExperimentParams::ideal() };
        assert!((mean_photon_estimate(&vis) - 1.0 / (0.9875f64 * 0.9875)).abs() < 1e-15);
    }

    #[test]
    fn exact_energy_adds_cross_term() {
        let p = ExperimentParams { beta: 0.5, r: 0.4, v_th: 1.4, ..ExperimentParams::ideal() };
        let exact = p.with_energy_model(EnergyModel::Exact);
        let s2 = 0.4f64.sinh().powi(2);
        let diff = mean_photon_estimate(&exact) - mean_photon_estimate(&p);
        assert!((diff - 0.4 * s2).abs() < 1e-15);
    }

    #[test]
    fn predicted_error_examples() {
        let ideal = ExperimentParams::ideal();
        assert!((predicted_error(&ideal, 1.0).unwrap() - 0.022_750_131_948_179_21).abs() < 1e-15);
        let opt = ideal.with_budget(&EnergyBudget::optimal(1.0).unwrap());
        assert!((predicted_error(&opt, 1.0).unwrap() - 0.002_338_867_490_523_633).abs() < 1e-15);
        let noisy = ExperimentParams { r: 0.4375, v_th: 1.2, v_en: 0.05, ..ExperimentParams::ideal() };
        assert!((predicted_error(&noisy, 1.0).unwrap() - 0.012_241_136_908_739_06).abs() < 1e-14);
    }

    #[test]
    fn infeasible_budget_is_typed() {
        let p = ExperimentParams { r: 1.0, ..ExperimentParams::ideal() };
        match predicted_error(&p, 0.5) {
            Err(Error::InfeasibleBudget { n_mean, signal_power }) => {
                assert_eq!(n_mean, 0.5);
                assert!(signal_power < 0.0);
            }
            other => panic!("expected InfeasibleBudget, got {other:?}"),
        }
    }

    #[test]
    fn lossy_examples() {
        let p = ExperimentParams { r: 0.3, v_th: 1.1, v_en: 0.02, visibility: 0.99, ..ExperimentParams::ideal() };
        assert_eq!(predicted_error_lossy(&p, 1.2).unwrap(), predicted_error(&p, 1.2).unwrap());
        assert_eq!(predicted_error_lossy(&p.with_loss(1.0), 1.2).unwrap(), 0.5);
        let fig3 = ExperimentParams::ideal().with_squeezing(Squeezing::Decibels(3.8)).with_loss(0.5);
        let got = predicted_error_lossy(&fig3, 1.0).unwrap();
        assert!((got - 0.066_918_778_545_223_09).abs() < 1e-14, "{got}");
    }

    #[test]
    fn lossless_optimum_matches_closed_form() {
        for n in [0.05, 0.3, 1.0, 2.15, 7.0] {
            let g = optimal_gamma_lossy(n, &ExperimentParams::ideal()).unwrap();
            let want = n / (2.0 * n + 1.0);
            assert!((g - want).abs() < 1e-5, "n̄ {n}: {g} vs {want}");
        }
        assert_eq!(optimal_gamma_lossy(0.0, &ExperimentParams::ideal()).unwrap(), 0.0);
        assert!(optimal_gamma_lossy(1e-6, &ExperimentParams::ideal()).unwrap() < 1e-5);
    }

    #[test]
    fn loss_reduces_optimal_squeezing() {
        let g0 = optimal_gamma_lossy(1.0, &ExperimentParams::ideal()).unwrap();
        let g5 = optimal_gamma_lossy(1.0, &ExperimentParams::ideal().with_loss(0.5)).unwrap();
        assert!(g5 < g0 - 1e-3, "{g5} vs {g0}");
    }

    #[test]
    fn impure_source_without_energy_for_displacement() {
        let p = ExperimentParams { v_th: 3.0, ..ExperimentParams::ideal() };
        assert!(matches!(optimal_gamma_lossy(0.5, &p), Err(Error::InfeasibleBudget { .. })));
    }
}
