//! Closed-form error limits for binary phase-shift keying.

use crate::error::{invalid, Result};
use crate::numerics::{erfc, find_root};

/// Homodyne error `½ erfc(√(SNR/2))` for a sign-threshold decision.
pub fn homodyne_error(snr: f64) -> Result<f64> {
    check_snr(snr)?;
    Ok(0.5 * erfc((0.5 * snr).sqrt()))
}

/// Helstrom error `½(1 - √(1 - e^{-SNR}))` for two pure Gaussian states with
/// overlap `|<ψ0|ψ1>|² = e^{-SNR}`.
///
/// Evaluated as `u / (2(1 + √(1 - u)))`, which is algebraically identical and
/// keeps full relative precision as `u = e^{-SNR} → 0`.
pub fn helstrom_error(snr: f64) -> Result<f64> {
    check_snr(snr)?;
    let overlap = (-snr).exp();
    Ok(overlap / (2.0 * (1.0 + (-(-snr).exp_m1()).sqrt())))
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr >= 0.0) {
        return Err(invalid(format!("SNR must be non-negative, got {snr}")));
    }
    Ok(())
}

/// The four reference limits at a given mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    pub n_mean: f64,
    /// Coherent states, homodyne detection (standard quantum limit).
    pub p_sql: f64,
    /// Coherent states, optimal quantum measurement.
    pub p_helstrom_coherent: f64,
    /// Optimally squeezed states, homodyne detection: the all-Gaussian limit.
    pub p_gaussian_limit: f64,
    /// Optimally squeezed states, optimal quantum measurement.
    pub p_helstrom_squeezed: f64,
}

pub fn coherent_snr(n_mean: f64) -> f64 {
    4.0 * n_mean
}

/// Largest SNR any Gaussian state of energy `n̄` reaches.
pub fn squeezed_snr(n_mean: f64) -> f64 {
    4.0 * (n_mean * n_mean + n_mean)
}

pub fn bound_set(n_mean: f64) -> Result<BoundSet> {
    if !(n_mean >= 0.0) {
        return Err(invalid(format!("mean photon number must be non-negative, got {n_mean}")));
    }
    let c = coherent_snr(n_mean);
    let s = squeezed_snr(n_mean);
    Ok(BoundSet {
        n_mean,
        p_sql: homodyne_error(c)?,
        p_helstrom_coherent: helstrom_error(c)?,
        p_gaussian_limit: homodyne_error(s)?,
        p_helstrom_squeezed: helstrom_error(s)?,
    })
}

/// `p_gauss(n̄) - p_hel_coherent(n̄)`; positive below the crossover.
pub fn crossover_gap(n_mean: f64) -> f64 {
    0.5 * erfc((0.5 * squeezed_snr(n_mean)).sqrt())
        - helstrom_error(coherent_snr(n_mean)).unwrap_or(f64::NAN)
}

/// Photon number above which homodyne detection of optimally squeezed states
/// beats the coherent-state Helstrom bound.
pub fn crossover_photon_number() -> f64 {
    find_root(crossover_gap, 0.1, 2.0, 1e-12).expect("crossover is bracketed by [0.1, 2]")
}

/// Binary-symmetric-channel mutual information `1 - H₂(p)` in bits, with
/// `0 log 0 = 0` at the endpoints.
pub fn mutual_information(p_error: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_error) {
        return Err(invalid(format!("error probability must lie in [0, 1], got {p_error}")));
    }
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(1.0 - h(p_error) - h(1.0 - p_error))
}
