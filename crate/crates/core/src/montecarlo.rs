//! Sample-level simulation of the receivers and the empirical error estimate.
//!
//! A batch transmits every symbol of the alphabet `n_samples` times. Trials
//! are cut into fixed-size shards and shard `j` of symbol `s` draws from
//! `RandomStream(seed, (s << 40) | j)`, so counts depend only on the seed and
//! never on how many threads ran the shards.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::channel::ExperimentParams;
use crate::error::{invalid, Error, Result};
use crate::gaussian::EnergyBudget;
use crate::multiformat::{Alphabet, DualHomodyneDistribution};
use crate::numerics::RandomStream;

/// Trials per shard.
pub const SHARD_SIZE: u64 = 1 << 16;

/// Jeffreys-prior posterior for an error probability after `errors` errors
/// in `trials` Bernoulli trials: `Beta(k + ½, n - k + ½)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub errors: u64,
    pub trials: u64,
    pub posterior_alpha: f64,
    pub posterior_beta: f64,
    pub mean: f64,
    pub std: f64,
}

impl ErrorEstimate {
    pub fn from_counts(errors: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(invalid("error estimate needs at least one trial"));
        }
        if errors > trials {
            return Err(invalid(format!("{errors} errors exceed {trials} trials")));
        }
        let a = errors as f64 + 0.5;
        let b = (trials - errors) as f64 + 0.5;
        let s = a + b;
        Ok(Self {
            errors,
            trials,
            posterior_alpha: a,
            posterior_beta: b,
            mean: a / s,
            std: (a * b / (s * s * (s + 1.0))).sqrt(),
        })
    }

    /// Distance from `value` in posterior standard deviations.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.std
    }
}

/// One Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialBatch {
    /// Transmissions per symbol.
    pub n_samples: u64,
    pub seed: u64,
    pub alphabet: Alphabet,
    /// Channel and receiver; the squeezing is taken from `budget`.
    pub params: ExperimentParams,
    pub budget: EnergyBudget,
}

impl TrialBatch {
    pub fn new(alphabet: Alphabet, budget: EnergyBudget, params: ExperimentParams, n_samples: u64, seed: u64) -> Self {
        Self {
            n_samples,
            seed,
            alphabet,
            params,
            budget,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(invalid("a batch needs at least one sample per symbol"));
        }
        self.params.validate()
    }
}

/// Symbol decision for binary keying: non-negative outcomes decode as symbol 0.
pub fn decide_bpsk(outcome: f64) -> usize {
    if outcome >= 0.0 {
        0
    } else {
        1
    }
}

/// Symbol decision for three-level amplitude keying with thresholds at
/// `±threshold`; symbols 0, 1, 2 carry displacements -α, 0, +α.
pub fn decide_ask3(outcome: f64, threshold: f64) -> usize {
    if outcome <= -threshold {
        0
    } else if outcome <= threshold {
        1
    } else {
        2
    }
}

/// Nearest constellation angle for `M`-phase keying with symbol `s` at
/// `offset + 2πs/M`. Boundary points go to the lower index.
pub fn decide_psk(x: f64, p: f64, symbols: usize, offset: f64) -> usize {
    let step = TAU / symbols as f64;
    let rel = (p.atan2(x) - offset).rem_euclid(TAU) / step;
    let k = (rel - 0.5).ceil();
    (k as usize) % symbols
}

/// Receiver model resolved from a batch.
#[derive(Debug, Clone)]
enum Receiver {
    Homodyne {
        means: Vec<f64>,
        sd: f64,
        threshold: f64,
    },
    Dual {
        angles: Vec<f64>,
        offset: f64,
        radial_mean: f64,
        radial_sd: f64,
        tangential_sd: f64,
    },
}

impl Receiver {
    fn new(alphabet: Alphabet, params: &ExperimentParams, budget: &EnergyBudget) -> Result<Self> {
        let p = params.with_budget(budget);
        p.validate()?;
        let transmitted = (1.0 - p.loss).sqrt();
        match alphabet {
            Alphabet::Bpsk => {
                let m = 2.0 * p.detected_amplitude(budget.n_mean)? * transmitted;
                Ok(Receiver::Homodyne {
                    means: vec![m, -m],
                    sd: p.noise_variance().sqrt(),
                    threshold: 0.0,
                })
            }
            Alphabet::Ask3 => {
                let alpha = (1.5 * p.signal_power(budget.n_mean)?).sqrt() * transmitted;
                Ok(Receiver::Homodyne {
                    means: vec![-2.0 * alpha, 0.0, 2.0 * alpha],
                    sd: p.noise_variance().sqrt(),
                    threshold: alpha,
                })
            }
            Alphabet::Psk3 | Alphabet::Psk4 => {
                let d = DualHomodyneDistribution::from_channel(&p, budget.n_mean)?;
                let m = alphabet.symbols();
                let offset = if alphabet == Alphabet::Psk4 { FRAC_PI_4 } else { 0.0 };
                Ok(Receiver::Dual {
                    angles: (0..m).map(|s| offset + TAU * s as f64 / m as f64).collect(),
                    offset,
                    radial_mean: d.mu_x,
                    radial_sd: d.sigma_x(),
                    tangential_sd: d.sigma_p(),
                })
            }
        }
    }

    fn symbols(&self) -> usize {
        match self {
            Receiver::Homodyne { means, .. } => means.len(),
            Receiver::Dual { angles, .. } => angles.len(),
        }
    }

    #[inline]
    fn homodyne_outcome(mean: f64, sd: f64, stream: &mut RandomStream) -> f64 {
        mean + sd * stream.standard_normal()
    }

    /// Draws one outcome for `symbol` and returns the decoded symbol.
    #[inline]
    fn trial(&self, symbol: usize, stream: &mut RandomStream) -> usize {
        match self {
            Receiver::Homodyne { means, sd, threshold } => {
                let x = Self::homodyne_outcome(means[symbol], *sd, stream);
                if means.len() == 2 {
                    decide_bpsk(x)
                } else {
                    decide_ask3(x, *threshold)
                }
            }
            Receiver::Dual {
                angles,
                offset,
                radial_mean,
                radial_sd,
                tangential_sd,
            } => {
                let u = radial_mean + radial_sd * stream.standard_normal();
                let v = tangential_sd * stream.standard_normal();
                let (s, c) = angles[symbol].sin_cos();
                decide_psk(u * c - v * s, u * s + v * c, angles.len(), *offset)
            }
        }
    }
}

fn shard_plan(symbols: usize, n_samples: u64) -> Vec<(usize, u64, u64)> {
    let shards = n_samples.div_ceil(SHARD_SIZE);
    (0..symbols)
        .flat_map(|s| {
            (0..shards).map(move |j| {
                let len = SHARD_SIZE.min(n_samples - j * SHARD_SIZE);
                (s, j, len)
            })
        })
        .collect()
}

fn stream_for(seed: u64, symbol: usize, shard: u64) -> RandomStream {
    RandomStream::new(seed, ((symbol as u64) << 40) | shard)
}

/// Runs a batch and returns the pooled Jeffreys estimate over all symbols.
pub fn run_batch(batch: &TrialBatch) -> Result<ErrorEstimate> {
    batch.validate()?;
    let receiver = Receiver::new(batch.alphabet, &batch.params, &batch.budget)?;
    let errors: u64 = shard_plan(receiver.symbols(), batch.n_samples)
        .into_par_iter()
        .map(|(s, j, len)| {
            let mut stream = stream_for(batch.seed, s, j);
            (0..len).filter(|_| receiver.trial(s, &mut stream) != s).count() as u64
        })
        .sum();
    ErrorEstimate::from_counts(errors, batch.n_samples * receiver.symbols() as u64)
}

/// Homodyne outcomes of a binary batch, per symbol, exactly as
/// [`run_batch`] draws them.
pub fn simulate_bpsk_outcomes(batch: &TrialBatch) -> Result<(Vec<f64>, Vec<f64>)> {
    batch.validate()?;
    if batch.alphabet != Alphabet::Bpsk {
        return Err(invalid(format!("outcome dumps are binary only, got {}", batch.alphabet)));
    }
    let Receiver::Homodyne { means, sd, .. } = Receiver::new(Alphabet::Bpsk, &batch.params, &batch.budget)? else {
        unreachable!("binary keying uses a homodyne receiver")
    };
    let per_symbol = |s: usize| -> Vec<f64> {
        shard_plan(1, batch.n_samples)
            .into_par_iter()
            .flat_map_iter(|(_, j, len)| {
                let mut stream = stream_for(batch.seed, s, j);
                (0..len)
                    .map(|_| Receiver::homodyne_outcome(means[s], sd, &mut stream))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    Ok((per_symbol(0), per_symbol(1)))
}

/// One binary homodyne outcome, in `X = a + a†` units, for `symbol` sent
/// with the given budget through the given channel.
pub fn sample_bpsk_outcome(
    symbol: usize,
    params: &ExperimentParams,
    budget: &EnergyBudget,
    stream: &mut RandomStream,
) -> Result<f64> {
    if symbol > 1 {
        return Err(invalid(format!("binary symbol must be 0 or 1, got {symbol}")));
    }
    let Receiver::Homodyne { means, sd, .. } = Receiver::new(Alphabet::Bpsk, params, budget)? else {
        unreachable!("binary keying uses a homodyne receiver")
    };
    Ok(Receiver::homodyne_outcome(means[symbol], sd, stream))
}

/// Pooled error estimate from measured outcomes: samples of symbol 0 below
/// zero and samples of symbol 1 at or above zero count as errors.
pub fn estimate_from_samples(samples_0: &[f64], samples_1: &[f64]) -> Result<ErrorEstimate> {
    if samples_0.is_empty() {
        return Err(Error::EmptyInput("symbol 0 samples".into()));
    }
    if samples_1.is_empty() {
        return Err(Error::EmptyInput("symbol 1 samples".into()));
    }
    let e0 = samples_0.iter().filter(|&&x| decide_bpsk(x) != 0).count();
    let e1 = samples_1.iter().filter(|&&x| decide_bpsk(x) != 1).count();
    ErrorEstimate::from_counts((e0 + e1) as u64, (samples_0.len() + samples_1.len()) as u64)
}

/// Reads one real outcome per line; blank lines are skipped.
pub fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::open(path).map_err(io)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io)?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let v: f64 = text.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            text: text.to_string(),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                text: text.to_string(),
            });
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput(path.display().to_string()));
    }
    Ok(out)
}

/// Writes outcomes one per line in shortest round-trip form.
pub fn write_samples(path: &Path, samples: &[f64]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(std::fs::File::create(path).map_err(io)?);
    for x in samples {
        writeln!(w, "{x}").map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn jeffreys_arithmetic() {
        let e = ErrorEstimate::from_counts(2, 4).unwrap();
        assert_eq!((e.posterior_alpha, e.posterior_beta), (2.5, 2.5));
        assert_eq!(e.mean, 0.5);
        // Beta(2.5, 2.5) variance = 6.25 / (25 · 6)
        assert!((e.std - (6.25f64 / 150.0).sqrt()).abs() < 1e-16);
        let none = ErrorEstimate::from_counts(0, 10).unwrap();
        assert_eq!(none.mean, 0.5 / 11.0);
        assert!(ErrorEstimate::from_counts(3, 2).is_err());
        assert!(ErrorEstimate::from_counts(0, 0).is_err());
    }

    #[test]
    fn decisions() {
        assert_eq!(decide_bpsk(1.3), 0);
        assert_eq!(decide_bpsk(-0.2), 1);
        assert_eq!(decide_bpsk(0.0), 0);
        assert_eq!(decide_ask3(-2.0, 1.0), 0);
        assert_eq!(decide_ask3(-1.0, 1.0), 0);
        assert_eq!(decide_ask3(0.3, 1.0), 1);
        assert_eq!(decide_ask3(1.0, 1.0), 1);
        assert_eq!(decide_ask3(1.01, 1.0), 2);
        assert_eq!(decide_psk(1.0, 0.1, 3, 0.0), 0);
        assert_eq!(decide_psk(-0.5, 0.8, 3, 0.0), 1);
        assert_eq!(decide_psk(-0.5, -0.8, 3, 0.0), 2);
        assert_eq!(decide_psk(1.0, -1.7, 3, 0.0), 0);
        assert_eq!(decide_psk(1.0, -1.8, 3, 0.0), 2);
        assert_eq!(decide_psk(1.0, 1.0, 4, FRAC_PI_4), 0);
        assert_eq!(decide_psk(-1.0, 1.0, 4, FRAC_PI_4), 1);
        assert_eq!(decide_psk(-1.0, -1.0, 4, FRAC_PI_4), 2);
        assert_eq!(decide_psk(1.0, -1.0, 4, FRAC_PI_4), 3);
        // on the 0/1 boundary at θ = π/3
        let (s, c) = (PI / 3.0).sin_cos();
        assert_eq!(decide_psk(c, s, 3, 0.0), 0);
    }

    #[test]
    fn shard_plan_covers_every_trial() {
        let plan = shard_plan(3, 2 * SHARD_SIZE + 5);
        assert_eq!(plan.len(), 9);
        let total: u64 = plan.iter().map(|p| p.2).sum();
        assert_eq!(total, 3 * (2 * SHARD_SIZE + 5));
    }

    #[test]
    fn coherent_mean_outcome() {
        let n = 1_000_000;
        let b = EnergyBudget::new(0.8, 0.0).unwrap();
        let mut stream = RandomStream::new(3, 0);
        let mut sum = 0.0;
        for _ in 0..n {
            sum += sample_bpsk_outcome(0, &ExperimentParams::ideal(), &b, &mut stream).unwrap();
        }
        let mean = sum / n as f64;
        let beta = 0.8f64.sqrt();
        assert!((mean - 2.0 * beta).abs() < 5.0 / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn full_loss_is_a_coin_flip() {
        let b = EnergyBudget::new(1.0, 0.2).unwrap();
        let batch = TrialBatch::new(Alphabet::Bpsk, b, ExperimentParams::ideal().with_loss(1.0), 200_000, 9);
        let e = run_batch(&batch).unwrap();
        assert!(e.z_score(0.5).abs() < 3.0, "{e:?}");
    }

    #[test]
    fn sample_estimates() {
        let e = estimate_from_samples(&[1.0, 2.0, 0.5], &[-1.0, -0.1, -4.0]).unwrap();
        assert_eq!(e.errors, 0);
        assert_eq!(e.mean, 0.5 / 7.0);
        let same = [0.3, -0.2, 1.1, -0.9];
        let e = estimate_from_samples(&same, &same).unwrap();
        assert_eq!(e.errors, 4);
        assert_eq!(e.mean, 0.5);
        assert!(matches!(estimate_from_samples(&[], &[1.0]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn infeasible_batch_errors() {
        let b = EnergyBudget::new(0.1, 0.0).unwrap();
        let p = ExperimentParams { v_th: 2.0, ..ExperimentParams::ideal() };
        let batch = TrialBatch::new(Alphabet::Bpsk, b, p, 10, 1);
        assert!(matches!(run_batch(&batch), Err(Error::InfeasibleBudget { .. })));
    }

    #[test]
    fn sample_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.txt");
        let xs = [0.1, -2.5e-7, 3.0, f64::MIN_POSITIVE];
        write_samples(&path, &xs).unwrap();
        assert_eq!(read_samples(&path).unwrap(), xs);
        std::fs::write(&path, "1.0\n\nabc\n").unwrap();
        assert!(matches!(read_samples(&path), Err(Error::Parse { line: 3, .. })));
        std::fs::write(&path, "\n\n").unwrap();
        assert!(matches!(read_samples(&path), Err(Error::EmptyInput(_))));
        assert!(matches!(read_samples(&dir.path().join("missing")), Err(Error::Io { .. })));
    }
}
