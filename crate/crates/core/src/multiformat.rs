//! Larger alphabets: three-level amplitude keying read out by homodyne, and
//! three- and four-phase keying read out by dual homodyne.
//!
//! Dual-homodyne quantities use `X = (a + a†)/2` (vacuum variance 1/4); the
//! probabilities returned are convention-free.

use std::f64::consts::{FRAC_PI_3, PI};
use std::fmt;
use std::str::FromStr;

use crate::channel::ExperimentParams;
use crate::error::{invalid, Error, Result};
use crate::gaussian::EnergyBudget;
use crate::numerics::{erfc, erfcx, integrate_1d, integrate_2d_wedge, PlanarDensity, QuadratureSpec};

/// Signal alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Bpsk,
    Ask3,
    Psk3,
    Psk4,
}

impl Alphabet {
    pub fn symbols(self) -> usize {
        match self {
            Alphabet::Bpsk => 2,
            Alphabet::Ask3 | Alphabet::Psk3 => 3,
            Alphabet::Psk4 => 4,
        }
    }

    /// Error rate of a receiver that guesses uniformly.
    pub fn guessing_error(self) -> f64 {
        1.0 - 1.0 / self.symbols() as f64
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::Bpsk => "bpsk",
            Alphabet::Ask3 => "ask3",
            Alphabet::Psk3 => "psk3",
            Alphabet::Psk4 => "psk4",
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Alphabet::Bpsk),
            "ask3" => Ok(Alphabet::Ask3),
            "psk3" => Ok(Alphabet::Psk3),
            "psk4" | "qpsk" => Ok(Alphabet::Psk4),
            other => Err(invalid(format!("unknown alphabet {other:?} (expected bpsk, ask3, psk3 or psk4)"))),
        }
    }
}

fn check_budget(n_mean: f64, gamma: f64) -> Result<EnergyBudget> {
    EnergyBudget::new(n_mean, gamma)
}

/// Three-level amplitude keying `D(kα) S(r)|0>`, `k ∈ {-1, 0, 1}`, with
/// homodyne thresholds halfway between neighbours:
/// `P = (2/3) erfc(e^r α / √2)`, `α = √(3(1 - γ) n̄ / 2)`.
pub fn ask3_error(n_mean: f64, gamma: f64) -> Result<f64> {
    let b = check_budget(n_mean, gamma)?;
    let alpha = (1.5 * (1.0 - gamma) * n_mean).sqrt();
    Ok(2.0 / 3.0 * erfc(b.squeezing().exp() * alpha / std::f64::consts::SQRT_2))
}

/// [`ask3_error`] for an imperfect state through a lossy channel. The outer
/// symbols carry `α² = (3/2) β²` with `β²` the detected signal power.
pub fn ask3_error_channel(p: &ExperimentParams, n_mean: f64) -> Result<f64> {
    p.validate()?;
    let alpha2 = 1.5 * p.signal_power(n_mean)?;
    let arg = (alpha2 * (1.0 - p.loss) / (2.0 * p.noise_variance())).sqrt();
    Ok(2.0 / 3.0 * erfc(arg))
}

/// Joint density of one dual-homodyne outcome for a state displaced and
/// squeezed along `x`: `N(x; μ_x, σ²_x) N(p; 0, σ²_p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualHomodyneDistribution {
    pub mu_x: f64,
    pub sigma2_x: f64,
    pub sigma2_p: f64,
}

impl DualHomodyneDistribution {
    pub fn new(mu_x: f64, sigma2_x: f64, sigma2_p: f64) -> Result<Self> {
        if !(mu_x.is_finite() && sigma2_x > 0.0 && sigma2_p > 0.0 && sigma2_x.is_finite() && sigma2_p.is_finite()) {
            return Err(invalid(format!(
                "dual-homodyne distribution needs finite mean and positive variances (μ {mu_x}, σ²x {sigma2_x}, σ²p {sigma2_p})"
            )));
        }
        Ok(Self { mu_x, sigma2_x, sigma2_p })
    }

    /// Pure displaced squeezed state: `μ_x = β/√2`, `σ²_x = (1 + e^{-2r})/8`,
    /// `σ²_p = (1 + e^{2r})/8` with `β² = (1 - γ) n̄` and `sinh²r = γ n̄`.
    pub fn ideal(n_mean: f64, gamma: f64) -> Result<Self> {
        let b = check_budget(n_mean, gamma)?;
        let r = b.squeezing();
        let beta = ((1.0 - gamma) * n_mean).sqrt();
        Self::new(
            beta / std::f64::consts::SQRT_2,
            (1.0 + (-2.0 * r).exp()) / 8.0,
            (1.0 + (2.0 * r).exp()) / 8.0,
        )
    }

    /// Imperfect state after loss. Each arm sees half the received state plus
    /// half a vacuum, and adds its own electronic noise.
    pub fn from_channel(p: &ExperimentParams, n_mean: f64) -> Result<Self> {
        p.validate()?;
        let beta = p.detected_amplitude(n_mean)?;
        let t = 1.0 - p.loss;
        let sq = p.noise_variance() - p.v_en;
        let anti = p.antisqueezed_variance() - p.v_en;
        Self::new(
            beta * t.sqrt() / std::f64::consts::SQRT_2,
            (sq + 1.0) / 8.0 + p.v_en / 4.0,
            (anti + 1.0) / 8.0 + p.v_en / 4.0,
        )
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma2_x.sqrt()
    }

    pub fn sigma_p(&self) -> f64 {
        self.sigma2_p.sqrt()
    }

    /// Per-arm SNR `μ²_x / σ²_x`.
    pub fn snr(&self) -> f64 {
        self.mu_x * self.mu_x / self.sigma2_x
    }
}

impl PlanarDensity for DualHomodyneDistribution {
    fn density(&self, x: f64, p: f64) -> f64 {
        let dx = x - self.mu_x;
        (-dx * dx / (2.0 * self.sigma2_x) - p * p / (2.0 * self.sigma2_p)).exp()
            / (2.0 * PI * self.sigma_x() * self.sigma_p())
    }

    fn radial_cutoff(&self) -> f64 {
        self.mu_x.abs() + 10.0 * self.sigma_x().max(self.sigma_p())
    }
}

/// Marginal density of the outcome's phase angle `θ = atan2(p, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAngleDistribution {
    dist: DualHomodyneDistribution,
}

impl PhaseAngleDistribution {
    pub fn new(dist: DualHomodyneDistribution) -> Self {
        Self { dist }
    }

    pub fn a(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        c * c / (2.0 * self.dist.sigma2_x) + s * s / (2.0 * self.dist.sigma2_p)
    }

    pub fn b(&self, theta: f64) -> f64 {
        self.dist.mu_x * theta.cos() / self.dist.sigma2_x
    }

    pub fn prefactor(&self, theta: f64) -> f64 {
        1.0 / (4.0 * PI * self.dist.sigma_x() * self.dist.sigma_p() * self.a(theta))
    }

    /// `e^{-μ²/2σ²_x} / (4π σ_x σ_p A) · (√π B/(2√A) · e^{B²/4A} · erfc(-B/(2√A)) + 1)`.
    ///
    /// Both exponentials are combined before evaluation; the merged exponent
    /// is never positive, so nothing overflows for strong signals.
    pub fn density(&self, theta: f64) -> f64 {
        let a = self.a(theta);
        let t = self.b(theta) / (2.0 * a.sqrt());
        let offset = self.dist.mu_x * self.dist.mu_x / (2.0 * self.dist.sigma2_x);
        let tail = if t >= 0.0 {
            (t * t - offset).exp() * erfc(-t)
        } else {
            // erfc(-t) e^{t²} = erfcx(-t), finite for moderate |t|
            (-offset).exp() * erfcx(-t)
        };
        self.prefactor(theta) * (PI.sqrt() * t * tail + (-offset).exp())
    }
}

pub fn psk3_phase_density(theta: f64, dist: &DualHomodyneDistribution) -> f64 {
    PhaseAngleDistribution::new(*dist).density(theta)
}

/// `1 -` the mass of `dist` inside the decision wedge `|θ| < half_angle`, by
/// planar quadrature.
pub fn wedge_error(dist: &DualHomodyneDistribution, half_angle: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(1.0 - integrate_2d_wedge(dist, half_angle, spec)?.value)
}

/// `1 - ∫_{-half_angle}^{half_angle} P(θ) dθ`.
pub fn phase_error(dist: &DualHomodyneDistribution, half_angle: f64, spec: &QuadratureSpec) -> Result<f64> {
    let phase = PhaseAngleDistribution::new(*dist);
    Ok(1.0 - integrate_1d(|t| phase.density(t), -half_angle, half_angle, spec)?.value)
}

/// Three-phase keying error from the planar wedge integral.
pub fn psk3_error_quadrature(n_mean: f64, gamma: f64) -> Result<f64> {
    let dist = DualHomodyneDistribution::ideal(n_mean, gamma)?;
    wedge_error(&dist, FRAC_PI_3, &QuadratureSpec::default())
}

/// Three-phase keying error from the phase-angle marginal.
pub fn psk3_error_phase(n_mean: f64, gamma: f64) -> Result<f64> {
    let dist = DualHomodyneDistribution::ideal(n_mean, gamma)?;
    phase_error(&dist, FRAC_PI_3, &QuadratureSpec::default())
}

/// Per-arm dual-homodyne SNR of four-phase keying, `n̄(1 - γ)/(n̄γ + 1)`.
pub fn psk4_snr(n_mean: f64, gamma: f64) -> Result<f64> {
    if !(n_mean >= 0.0 && n_mean.is_finite()) {
        return Err(invalid(format!("mean photon number must be finite and ≥ 0, got {n_mean}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!("squeezing fraction must lie in [0, 1], got {gamma}")));
    }
    Ok(n_mean * (1.0 - gamma) / (n_mean * gamma + 1.0))
}

/// Quadrature variance `(e^{2r} + e^{-2r})/8` of a state squeezed at 45° to
/// the measured axes.
pub fn psk4_variance(r: f64) -> f64 {
    ((2.0 * r).exp() + (-2.0 * r).exp()) / 8.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    // 40-digit references (mpmath: closed forms and nested adaptive quadrature).
    const ASK3_COHERENT_1: f64 = 0.147_114_241_279_897_86;
    const ASK3_OPTIMAL_1: f64 = 0.055_509_677_775_700_27;
    const PSK3_COHERENT_1: f64 = 0.183_417_145_731_017_13;

    #[test]
    fn ask3_examples() {
        assert!((ask3_error(1.0, 0.0).unwrap() - ASK3_COHERENT_1).abs() < 1e-15);
        assert!((ask3_error(1.0, 1.0 / 3.0).unwrap() - ASK3_OPTIMAL_1).abs() < 1e-15);
        assert_eq!(ask3_error(0.0, 0.0).unwrap(), 2.0 / 3.0);
        assert!(ask3_error(1.0, 1.0).is_err());
    }

    #[test]
    fn ask3_channel_reduces_to_ideal() {
        for (n, g) in [(0.5, 0.0), (1.0, 0.2), (2.0, 0.4)] {
            let b = EnergyBudget::new(n, g).unwrap();
            let p = ExperimentParams::ideal().with_budget(&b);
            let a = ask3_error_channel(&p, n).unwrap();
            assert!((a - ask3_error(n, g).unwrap()).abs() < 1e-14);
        }
        let lossy = ExperimentParams::ideal().with_loss(1.0);
        assert_eq!(ask3_error_channel(&lossy, 1.0).unwrap(), 2.0 / 3.0);
    }

    #[test]
    fn dual_homodyne_parameters() {
        let coh = DualHomodyneDistribution::ideal(1.0, 0.0).unwrap();
        assert!((coh.mu_x - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(coh.sigma2_x, 0.25);
        assert_eq!(coh.sigma2_p, 0.25);
        let sq = DualHomodyneDistribution::ideal(1.0, 0.5).unwrap();
        assert!(sq.sigma2_x > 0.125 && sq.sigma2_x < 0.25 && sq.sigma2_p > 0.25);
        let b = EnergyBudget::new(1.0, 0.5).unwrap();
        let via = DualHomodyneDistribution::from_channel(&ExperimentParams::ideal().with_budget(&b), 1.0).unwrap();
        assert!((via.mu_x - sq.mu_x).abs() < 1e-15);
        assert!((via.sigma2_x - sq.sigma2_x).abs() < 1e-15);
        assert!((via.sigma2_p - sq.sigma2_p).abs() < 1e-15);
    }

    #[test]
    fn phase_density_isotropic_case() {
        let d = DualHomodyneDistribution::new(0.0, 0.3, 0.3).unwrap();
        for k in 0..20 {
            let theta = -PI + k as f64 * 0.3;
            assert!((psk3_phase_density(theta, &d) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_density_normalized() {
        let spec = QuadratureSpec::default();
        for (mu, sx, sp) in [(0.7, 0.25, 0.25), (2.0, 0.15, 0.9), (6.0, 0.13, 3.0), (0.0, 0.1, 1.0)] {
            let d = DualHomodyneDistribution::new(mu, sx, sp).unwrap();
            let total = integrate_1d(|t| psk3_phase_density(t, &d), -PI, PI, &spec).unwrap().value;
            assert!((total - 1.0).abs() < 1e-8, "{d:?}: {total}");
        }
    }

    #[test]
    fn phase_density_strong_signal_is_finite() {
        let d = DualHomodyneDistribution::new(40.0, 0.13, 0.2).unwrap();
        for k in 0..=40 {
            let theta = -PI + k as f64 * PI / 20.0;
            let v = psk3_phase_density(theta, &d);
            assert!(v.is_finite() && v >= 0.0, "θ {theta}: {v}");
        }
    }

    #[test]
    fn psk3_examples() {
        for f in [psk3_error_quadrature, psk3_error_phase] {
            assert!((f(0.0, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-9);
            assert!((f(1.0, 0.0).unwrap() - PSK3_COHERENT_1).abs() < 1e-9);
        }
        let squeezed = psk3_error_quadrature(1.0, 0.3).unwrap();
        assert!(squeezed >= PSK3_COHERENT_1 - 1e-4);
        assert!((squeezed - 0.278_207_619_268_398_4).abs() < 1e-9);
    }

    #[test]
    fn psk3_methods_agree_near_full_squeezing() {
        let q = psk3_error_quadrature(1.0, 0.95).unwrap();
        let p = psk3_error_phase(1.0, 0.95).unwrap();
        assert!((q - p).abs() < 1e-3);
        assert!((q - 0.690_589_986_139_882_5).abs() < 1e-8);
    }

    #[test]
    fn wedge_of_half_plane() {
        let d = DualHomodyneDistribution::new(0.0, 0.2, 0.7).unwrap();
        let e = wedge_error(&d, FRAC_PI_2, &QuadratureSpec::default()).unwrap();
        assert!((e - 0.5).abs() < 1e-9);
    }

    #[test]
    fn psk4_examples() {
        assert_eq!(psk4_snr(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(psk4_snr(1.0, 1.0).unwrap(), 0.0);
        assert!((psk4_snr(1.0, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert!(psk4_snr(1.0, 1.1).is_err());
        assert_eq!(psk4_variance(0.0), 0.25);
        assert!((psk4_variance(0.5) - 0.385_770_158_703_810_9).abs() < 1e-15);
        assert_eq!(psk4_variance(0.37), psk4_variance(-0.37));
    }

    #[test]
    fn alphabet_parsing() {
        assert_eq!("PSK3".parse::<Alphabet>().unwrap(), Alphabet::Psk3);
        assert_eq!("qpsk".parse::<Alphabet>().unwrap(), Alphabet::Psk4);
        assert!("ook".parse::<Alphabet>().is_err());
        assert_eq!(Alphabet::Psk4.guessing_error(), 0.75);
    }
}
