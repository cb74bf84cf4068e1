//! Subcommand implementations. Each builds a [`Table`] without touching the
//! filesystem except where a command reads or dumps sample files.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};
use std::path::Path;

use rayon::prelude::*;
use sqzbpsk::bounds::{coherent_snr, squeezed_snr};
use sqzbpsk::montecarlo::{read_samples, simulate_bpsk_outcomes, write_samples};
use sqzbpsk::multiformat::{ask3_error_channel, phase_error, wedge_error};
use sqzbpsk::numerics::QuadratureSpec;
use sqzbpsk::{
    bound_set, crossover_photon_number, estimate_from_samples, mutual_information, optimal_gamma_lossy,
    predicted_error_lossy, run_batch, Alphabet, DualHomodyneDistribution, EnergyBudget, Error, ExperimentParams,
    Squeezing, TrialBatch,
};

use crate::config::{Allocation, McSettings, Settings};
use crate::error::{usage, CliError};
use crate::table::{fmt_sig, quantize, ResultRow, Status, Table};

/// Transmissions per symbol for `mc` when none are configured.
pub const DEFAULT_MC_SAMPLES: u64 = 5_000_000;

pub const BOUNDS_HEADER: [&str; 11] = [
    "n_mean",
    "snr_coherent",
    "snr_squeezed",
    "p_sql",
    "p_hel_coherent",
    "p_gauss",
    "p_hel_squeezed",
    "mi_sql",
    "mi_hel_coherent",
    "mi_gauss",
    "mi_hel_squeezed",
];

pub const PSK3_HEADER: [&str; 10] = [
    "n_mean",
    "gamma",
    "loss",
    "snr",
    "p_quadrature",
    "p_phase",
    "p_coherent",
    "p_mc_mean",
    "p_mc_std",
    "status",
];

pub const ANALYZE_HEADER: [&str; 7] = [
    "errors",
    "trials",
    "posterior_alpha",
    "posterior_beta",
    "mean",
    "std",
    "mutual_info",
];

pub const CROSSOVER_HEADER: [&str; 3] = ["n_mean_star", "p_gauss", "p_hel_coherent"];

/// Mutual information of a rounded error probability, itself rounded.
fn rounded_information(p: f64) -> Result<f64, CliError> {
    Ok(quantize(mutual_information(quantize(p))?))
}

/// The four binary-keying bounds and their mutual information at each `n̄`.
pub fn bounds_table(n_mean: &[f64]) -> Result<Table, CliError> {
    let mut table = Table::new(&BOUNDS_HEADER);
    for &n in n_mean {
        let b = bound_set(n)?;
        let p = [b.p_sql, b.p_helstrom_coherent, b.p_gaussian_limit, b.p_helstrom_squeezed];
        let mut row = vec![n.to_string(), fmt_sig(coherent_snr(n)), fmt_sig(squeezed_snr(n))];
        row.extend(p.iter().map(|&x| fmt_sig(x)));
        for x in p {
            row.push(fmt_sig(rounded_information(x)?));
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Crossover photon number and the two equal error probabilities there.
pub fn crossover_table() -> Result<Table, CliError> {
    let n = crossover_photon_number();
    let b = bound_set(n)?;
    let mut table = Table::new(&CROSSOVER_HEADER);
    table
        .rows
        .push(vec![fmt_sig(n), fmt_sig(b.p_gaussian_limit), fmt_sig(b.p_helstrom_coherent)]);
    Ok(table)
}

/// Jeffreys estimate and mutual information from two sample files.
pub fn analyze_table(file_0: &Path, file_1: &Path) -> Result<Table, CliError> {
    let e = estimate_from_samples(&read_samples(file_0)?, &read_samples(file_1)?)?;
    let mut table = Table::new(&ANALYZE_HEADER);
    table.rows.push(vec![
        e.errors.to_string(),
        e.trials.to_string(),
        e.posterior_alpha.to_string(),
        e.posterior_beta.to_string(),
        fmt_sig(e.mean),
        fmt_sig(e.std),
        fmt_sig(rounded_information(e.mean)?),
    ]);
    Ok(table)
}

/// One allocation choice at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Split {
    Fraction(f64),
    Optimal,
    Fixed(Squeezing),
}

/// A grid point: channel loss, allocation and energy.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    loss: f64,
    split: Split,
    n_mean: f64,
}

fn splits(settings: &Settings) -> Result<Vec<Split>, CliError> {
    match &settings.allocation {
        Allocation::Fractions(g) => Ok(g.iter().map(|&g| Split::Fraction(g)).collect()),
        Allocation::Optimal => {
            if matches!(settings.format, Alphabet::Psk3 | Alphabet::Psk4) {
                return Err(usage(format!(
                    "gamma=optimal is defined for bpsk and ask3; give explicit fractions for {}",
                    settings.format
                )));
            }
            Ok(vec![Split::Optimal])
        }
        Allocation::Fixed(s) => Ok(vec![Split::Fixed(*s)]),
    }
}

/// Loss outermost, then allocation, then `n̄`, so each curve is contiguous.
fn grid(settings: &Settings, n_mean: &[f64], loss: &[f64]) -> Result<Vec<Point>, CliError> {
    let splits = splits(settings)?;
    let mut points = Vec::with_capacity(loss.len() * splits.len() * n_mean.len());
    for &loss in loss {
        for &split in &splits {
            points.extend(n_mean.iter().map(|&n_mean| Point { loss, split, n_mean }));
        }
    }
    Ok(points)
}

/// Parameters of a feasible point, or the fraction of an infeasible one.
enum Resolved {
    Feasible { gamma: f64, params: ExperimentParams },
    Infeasible { gamma: Option<f64> },
}

fn resolve(point: &Point, base: &ExperimentParams) -> Result<Resolved, CliError> {
    let n = point.n_mean;
    let channel = base.with_loss(point.loss);
    let (gamma, params) = match point.split {
        Split::Fraction(g) => (g, channel.with_budget(&EnergyBudget::new(n, g)?)),
        Split::Optimal => match optimal_gamma_lossy(n, &channel) {
            Ok(g) => (g, channel.with_budget(&EnergyBudget::new(n, g)?)),
            Err(Error::InfeasibleBudget { .. }) => return Ok(Resolved::Infeasible { gamma: None }),
            Err(e) => return Err(e.into()),
        },
        Split::Fixed(s) => {
            let squeezed = s.r().sinh().powi(2);
            let available = n * base.visibility * base.visibility;
            let g = if squeezed == 0.0 { 0.0 } else { squeezed / available };
            if !(g < 1.0) {
                return Ok(Resolved::Infeasible {
                    gamma: g.is_finite().then_some(g),
                });
            }
            (g, channel.with_squeezing(s))
        }
    };
    match params.signal_power(n) {
        Ok(_) => Ok(Resolved::Feasible { gamma, params }),
        Err(Error::InfeasibleBudget { .. }) => Ok(Resolved::Infeasible { gamma: Some(gamma) }),
        Err(e) => Err(e.into()),
    }
}

/// Model error and the SNR reported alongside it.
fn model(format: Alphabet, params: &ExperimentParams, n: f64) -> Result<(f64, f64), CliError> {
    let spec = QuadratureSpec::default();
    Ok(match format {
        Alphabet::Bpsk => (predicted_error_lossy(params, n)?, params.snr(n)?),
        Alphabet::Ask3 => (ask3_error_channel(params, n)?, params.snr(n)?),
        Alphabet::Psk3 => {
            let d = DualHomodyneDistribution::from_channel(params, n)?;
            (wedge_error(&d, FRAC_PI_3, &spec)?, d.snr())
        }
        Alphabet::Psk4 => {
            let d = DualHomodyneDistribution::from_channel(params, n)?;
            // Each arm sees the displacement at 45° and the mean of the two variances.
            (wedge_error(&d, FRAC_PI_4, &spec)?, d.mu_x * d.mu_x / (d.sigma2_x + d.sigma2_p))
        }
    })
}

fn monte_carlo(
    format: Alphabet,
    params: &ExperimentParams,
    n: f64,
    gamma: f64,
    mc: &McSettings,
) -> Result<sqzbpsk::ErrorEstimate, CliError> {
    let batch = TrialBatch::new(format, EnergyBudget::new(n, gamma)?, *params, mc.samples, mc.seed);
    Ok(run_batch(&batch)?)
}

fn evaluate(settings: &Settings, point: &Point) -> Result<ResultRow, CliError> {
    let n = point.n_mean;
    let bounds = match settings.format {
        Alphabet::Bpsk => Some(bound_set(n)?),
        _ => None,
    };
    let mut row = ResultRow {
        n_mean: n,
        gamma: None,
        loss: point.loss,
        snr: None,
        p_sql: bounds.map(|b| quantize(b.p_sql)),
        p_hel_coherent: bounds.map(|b| quantize(b.p_helstrom_coherent)),
        p_gauss: bounds.map(|b| quantize(b.p_gaussian_limit)),
        p_hel_squeezed: bounds.map(|b| quantize(b.p_helstrom_squeezed)),
        p_model: None,
        p_mc_mean: None,
        p_mc_std: None,
        mutual_info: None,
        status: Status::Infeasible,
    };
    match resolve(point, &settings.params)? {
        Resolved::Infeasible { gamma } => row.gamma = gamma.map(quantize),
        Resolved::Feasible { gamma, params } => {
            let (p, snr) = model(settings.format, &params, n)?;
            row.gamma = Some(quantize(gamma));
            row.snr = Some(quantize(snr));
            row.p_model = Some(quantize(p));
            if settings.format == Alphabet::Bpsk {
                row.mutual_info = Some(rounded_information(p)?);
            }
            if let Some(mc) = &settings.mc {
                let e = monte_carlo(settings.format, &params, n, gamma, mc)?;
                row.p_mc_mean = Some(quantize(e.mean));
                row.p_mc_std = Some(quantize(e.std));
            }
            row.status = Status::Ok;
        }
    }
    Ok(row)
}

/// Every grid point of a sweep, in grid order.
pub fn sweep_rows(settings: &Settings) -> Result<Vec<ResultRow>, CliError> {
    let points = grid(settings, settings.require_n_mean()?, settings.require_loss()?)?;
    points.par_iter().map(|p| evaluate(settings, p)).collect()
}

/// Sweep rows, writing the binary-keying outcomes of each feasible point to `dump_dir`.
pub fn mc_rows(settings: &Settings, dump_dir: Option<&Path>) -> Result<Vec<ResultRow>, CliError> {
    let mut settings = settings.clone();
    let mc = *settings.mc.get_or_insert(McSettings {
        samples: DEFAULT_MC_SAMPLES,
        seed: 0,
    });
    if dump_dir.is_some() && settings.format != Alphabet::Bpsk {
        return Err(usage("sample dumps are available for bpsk only"));
    }
    let rows = sweep_rows(&settings)?;
    if let Some(dir) = dump_dir {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let points = grid(&settings, settings.require_n_mean()?, settings.require_loss()?)?;
        for (i, point) in points.iter().enumerate() {
            let Resolved::Feasible { gamma, params } = resolve(point, &settings.params)? else {
                continue;
            };
            let batch = TrialBatch::new(
                Alphabet::Bpsk,
                EnergyBudget::new(point.n_mean, gamma)?,
                params,
                mc.samples,
                mc.seed,
            );
            let (s0, s1) = simulate_bpsk_outcomes(&batch)?;
            write_samples(&dir.join(format!("point{i:04}_symbol0.txt")), &s0)?;
            write_samples(&dir.join(format!("point{i:04}_symbol1.txt")), &s1)?;
        }
    }
    Ok(rows)
}

/// Which three-phase integration methods to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Psk3Methods {
    pub quadrature: bool,
    pub phase: bool,
}

impl Psk3Methods {
    pub fn parse(names: &[String]) -> Result<Self, CliError> {
        let mut m = Psk3Methods {
            quadrature: false,
            phase: false,
        };
        for name in names {
            match name.trim().to_ascii_lowercase().as_str() {
                "quadrature" => m.quadrature = true,
                "phase" => m.phase = true,
                other => return Err(usage(format!("unknown method {other:?} (expected quadrature or phase)"))),
            }
        }
        if !(m.quadrature || m.phase) {
            return Err(usage("select at least one of quadrature, phase"));
        }
        Ok(m)
    }
}

/// Three-phase keying: per-γ errors by both integration methods, the
/// coherent baseline at the same `n̄` and loss, and optionally Monte Carlo.
/// Rows run over loss, then `n̄`, then γ. Loss defaults to zero.
pub fn psk3_table(settings: &Settings, methods: Psk3Methods) -> Result<Table, CliError> {
    let mut settings = settings.clone();
    settings.format = Alphabet::Psk3;
    let splits = splits(&settings)?;
    let mut points = Vec::new();
    for loss in settings.loss_or_zero() {
        for &n_mean in settings.require_n_mean()? {
            points.extend(splits.iter().map(|&split| Point { loss, split, n_mean }));
        }
    }
    let rows = points
        .par_iter()
        .map(|point| psk3_row(&settings, methods, point))
        .collect::<Result<_, _>>()?;
    Ok(Table {
        header: PSK3_HEADER.to_vec(),
        rows,
    })
}

fn psk3_row(settings: &Settings, methods: Psk3Methods, point: &Point) -> Result<Vec<String>, CliError> {
    let spec = QuadratureSpec::default();
    let error = |d: &DualHomodyneDistribution, quadrature: bool| -> Result<f64, CliError> {
        Ok(if quadrature {
            wedge_error(d, FRAC_PI_3, &spec)?
        } else {
            phase_error(d, FRAC_PI_3, &spec)?
        })
    };
    let n = point.n_mean;
    let mut row = vec![n.to_string(), String::new(), point.loss.to_string()];
    let (gamma, params) = match resolve(point, &settings.params)? {
        Resolved::Feasible { gamma, params } => (gamma, params),
        Resolved::Infeasible { gamma } => {
            row[1] = gamma.map(fmt_sig).unwrap_or_default();
            row.extend(std::iter::repeat_n(String::new(), 6));
            row.push(Status::Infeasible.as_str().into());
            return Ok(row);
        }
    };
    let d = DualHomodyneDistribution::from_channel(&params, n)?;
    let quad = methods.quadrature.then(|| error(&d, true)).transpose()?;
    let phase = methods.phase.then(|| error(&d, false)).transpose()?;
    let coherent = DualHomodyneDistribution::from_channel(&params.with_squeezing(Squeezing::Parameter(0.0)), n)?;
    row[1] = fmt_sig(gamma);
    row.push(fmt_sig(d.snr()));
    row.push(quad.map(fmt_sig).unwrap_or_default());
    row.push(phase.map(fmt_sig).unwrap_or_default());
    row.push(fmt_sig(error(&coherent, methods.quadrature)?));
    match &settings.mc {
        Some(mc) => {
            let e = monte_carlo(Alphabet::Psk3, &params, n, gamma, mc)?;
            row.push(fmt_sig(e.mean));
            row.push(fmt_sig(e.std));
        }
        None => row.extend([String::new(), String::new()]),
    }
    row.push(Status::Ok.as_str().into());
    Ok(row)
}
