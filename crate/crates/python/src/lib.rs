//! Python bindings: bounds, channel models, multi-symbol formats and Monte
//! Carlo estimates.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sqzbpsk::channel::{db_to_r, r_to_db};
use sqzbpsk::multiformat::{ask3_error, psk3_error_phase, psk3_error_quadrature, psk4_snr, psk4_variance};
use sqzbpsk::{Alphabet, EnergyModel, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::InfeasibleBudget { .. } | Error::EmptyInput(_) | Error::Parse { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::NotConverged { .. } | Error::NoSignChange { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

fn alphabet(name: &str) -> PyResult<Alphabet> {
    name.parse().map_err(to_py)
}

/// The four binary-keying error limits at one mean photon number.
#[pyclass(frozen, get_all, skip_from_py_object, module = "sqzbpsk")]
#[derive(Clone)]
struct BoundSet {
    n_mean: f64,
    p_sql: f64,
    p_hel_coherent: f64,
    p_gauss: f64,
    p_hel_squeezed: f64,
}

#[pymethods]
impl BoundSet {
    fn __repr__(&self) -> String {
        format!(
            "BoundSet(n_mean={}, p_sql={:e}, p_hel_coherent={:e}, p_gauss={:e}, p_hel_squeezed={:e})",
            self.n_mean, self.p_sql, self.p_hel_coherent, self.p_gauss, self.p_hel_squeezed
        )
    }
}

/// Transmitter, channel and receiver parameters in shot-noise units.
#[pyclass(get_all, set_all, skip_from_py_object, module = "sqzbpsk")]
#[derive(Clone)]
struct ExperimentParams {
    beta: f64,
    r: f64,
    v_th: f64,
    v_en: f64,
    visibility: f64,
    loss: f64,
    /// `"published"` or `"exact"`.
    energy_model: String,
}

impl ExperimentParams {
    fn core(&self) -> PyResult<sqzbpsk::ExperimentParams> {
        let energy_model = match self.energy_model.as_str() {
            "published" => EnergyModel::Published,
            "exact" => EnergyModel::Exact,
            other => {
                return Err(PyValueError::new_err(format!(
                    "energy_model must be 'published' or 'exact', got {other:?}"
                )))
            }
        };
        let p = sqzbpsk::ExperimentParams {
            beta: self.beta,
            r: self.r,
            v_th: self.v_th,
            v_en: self.v_en,
            visibility: self.visibility,
            loss: self.loss,
            energy_model,
        };
        p.validate().map_err(to_py)?;
        Ok(p)
    }
}

#[pymethods]
impl ExperimentParams {
    #[new]
    #[pyo3(signature = (*, beta=0.0, r=0.0, squeezing_db=None, v_th=1.0, v_en=0.0, visibility=1.0, loss=0.0, energy_model="published"))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        beta: f64,
        r: f64,
        squeezing_db: Option<f64>,
        v_th: f64,
        v_en: f64,
        visibility: f64,
        loss: f64,
        energy_model: &str,
    ) -> PyResult<Self> {
        if squeezing_db.is_some() && r != 0.0 {
            return Err(PyValueError::new_err("give either r or squeezing_db, not both"));
        }
        let p = Self {
            beta,
            r: squeezing_db.map_or(r, db_to_r),
            v_th,
            v_en,
            visibility,
            loss,
            energy_model: energy_model.to_string(),
        };
        p.core()?;
        Ok(p)
    }

    /// Squeezing in dB of noise reduction.
    #[getter]
    fn squeezing_db(&self) -> f64 {
        r_to_db(self.r)
    }

    /// Copy with `r` set so that `sinh²r = γ n̄ V²`.
    fn with_budget(&self, n_mean: f64, gamma: f64) -> PyResult<Self> {
        let budget = sqzbpsk::EnergyBudget::new(n_mean, gamma).map_err(to_py)?;
        let mut p = self.clone();
        p.r = self.core()?.with_budget(&budget).r;
        Ok(p)
    }

    /// Homodyne SNR at the receiver for total energy `n_mean`.
    fn snr(&self, n_mean: f64) -> PyResult<f64> {
        self.core()?.snr(n_mean).map_err(to_py)
    }

    /// Mean photon number implied by the parameters.
    fn mean_photon_estimate(&self) -> PyResult<f64> {
        Ok(sqzbpsk::mean_photon_estimate(&self.core()?))
    }

    fn __repr__(&self) -> String {
        format!(
            "ExperimentParams(beta={}, r={}, v_th={}, v_en={}, visibility={}, loss={}, energy_model={:?})",
            self.beta, self.r, self.v_th, self.v_en, self.visibility, self.loss, self.energy_model
        )
    }
}

/// Jeffreys-posterior estimate of an error probability.
#[pyclass(frozen, get_all, skip_from_py_object, module = "sqzbpsk")]
#[derive(Clone)]
struct ErrorEstimate {
    errors: u64,
    trials: u64,
    posterior_alpha: f64,
    posterior_beta: f64,
    mean: f64,
    std: f64,
}

impl From<sqzbpsk::ErrorEstimate> for ErrorEstimate {
    fn from(e: sqzbpsk::ErrorEstimate) -> Self {
        Self {
            errors: e.errors,
            trials: e.trials,
            posterior_alpha: e.posterior_alpha,
            posterior_beta: e.posterior_beta,
            mean: e.mean,
            std: e.std,
        }
    }
}

#[pymethods]
impl ErrorEstimate {
    /// Distance from `value` in posterior standard deviations.
    fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.std
    }

    fn __repr__(&self) -> String {
        format!(
            "ErrorEstimate(errors={}, trials={}, mean={:e}, std={:e})",
            self.errors, self.trials, self.mean, self.std
        )
    }
}

/// Complementary error function.
#[pyfunction]
fn erfc(x: f64) -> f64 {
    sqzbpsk::numerics::erfc(x)
}

/// Homodyne error `½erfc(√(snr/2))` for binary keying.
#[pyfunction]
fn homodyne_error(snr: f64) -> PyResult<f64> {
    sqzbpsk::homodyne_error(snr).map_err(to_py)
}

/// Helstrom error `½(1 - √(1 - e^{-snr}))` for binary keying.
#[pyfunction]
fn helstrom_error(snr: f64) -> PyResult<f64> {
    sqzbpsk::helstrom_error(snr).map_err(to_py)
}

#[pyfunction]
fn bound_set(n_mean: f64) -> PyResult<BoundSet> {
    let b = sqzbpsk::bound_set(n_mean).map_err(to_py)?;
    Ok(BoundSet {
        n_mean: b.n_mean,
        p_sql: b.p_sql,
        p_hel_coherent: b.p_helstrom_coherent,
        p_gauss: b.p_gaussian_limit,
        p_hel_squeezed: b.p_helstrom_squeezed,
    })
}

/// Mean photon number where squeezed homodyne detection meets the coherent Helstrom bound.
#[pyfunction]
fn crossover_photon_number() -> f64 {
    sqzbpsk::crossover_photon_number()
}

/// `1 - H₂(p)` in bits.
#[pyfunction]
fn mutual_information(p_error: f64) -> PyResult<f64> {
    sqzbpsk::mutual_information(p_error).map_err(to_py)
}

/// Optimal squeezing fraction `n̄/(2n̄+1)`.
#[pyfunction]
fn optimal_gamma(n_mean: f64) -> f64 {
    sqzbpsk::optimal_gamma(n_mean)
}

/// Homodyne SNR of a pure displaced squeezed state with squeezing fraction `gamma`.
#[pyfunction]
fn snr_bpsk(n_mean: f64, gamma: f64) -> PyResult<f64> {
    let b = sqzbpsk::EnergyBudget::new(n_mean, gamma).map_err(to_py)?;
    Ok(sqzbpsk::snr_bpsk(&b))
}

/// Predicted homodyne error of an imperfect state without channel loss.
#[pyfunction]
fn predicted_error(params: &ExperimentParams, n_mean: f64) -> PyResult<f64> {
    sqzbpsk::predicted_error(&params.core()?, n_mean).map_err(to_py)
}

/// Predicted homodyne error after the channel loss in `params`.
#[pyfunction]
fn predicted_error_lossy(params: &ExperimentParams, n_mean: f64) -> PyResult<f64> {
    sqzbpsk::predicted_error_lossy(&params.core()?, n_mean).map_err(to_py)
}

/// Squeezing fraction minimizing the lossy error.
#[pyfunction]
fn optimal_gamma_lossy(n_mean: f64, params: &ExperimentParams) -> PyResult<f64> {
    sqzbpsk::optimal_gamma_lossy(n_mean, &params.core()?).map_err(to_py)
}

#[pyfunction(name = "ask3_error")]
fn py_ask3_error(n_mean: f64, gamma: f64) -> PyResult<f64> {
    ask3_error(n_mean, gamma).map_err(to_py)
}

/// Three-phase keying error; `method` is `"quadrature"` or `"phase"`.
#[pyfunction]
#[pyo3(signature = (n_mean, gamma, method="quadrature"))]
fn psk3_error(n_mean: f64, gamma: f64, method: &str) -> PyResult<f64> {
    match method {
        "quadrature" => psk3_error_quadrature(n_mean, gamma).map_err(to_py),
        "phase" => psk3_error_phase(n_mean, gamma).map_err(to_py),
        other => Err(PyValueError::new_err(format!(
            "method must be 'quadrature' or 'phase', got {other:?}"
        ))),
    }
}

#[pyfunction(name = "psk4_snr")]
fn py_psk4_snr(n_mean: f64, gamma: f64) -> PyResult<f64> {
    psk4_snr(n_mean, gamma).map_err(to_py)
}

#[pyfunction(name = "psk4_variance")]
fn py_psk4_variance(r: f64) -> f64 {
    psk4_variance(r)
}

/// Monte Carlo error estimate for `alphabet` (`"bpsk"`, `"ask3"`, `"psk3"`, `"psk4"`),
/// drawing `n_samples` outcomes per symbol.
#[pyfunction]
#[pyo3(signature = (alphabet, n_mean, gamma, n_samples, seed=0, params=None))]
fn run_batch(
    py: Python<'_>,
    alphabet: &str,
    n_mean: f64,
    gamma: f64,
    n_samples: u64,
    seed: u64,
    params: Option<&ExperimentParams>,
) -> PyResult<ErrorEstimate> {
    let params = match params {
        Some(p) => p.core()?,
        None => sqzbpsk::ExperimentParams::ideal(),
    };
    let budget = sqzbpsk::EnergyBudget::new(n_mean, gamma).map_err(to_py)?;
    let batch = sqzbpsk::TrialBatch::new(self::alphabet(alphabet)?, budget, params, n_samples, seed);
    py.detach(|| sqzbpsk::run_batch(&batch))
        .map(Into::into)
        .map_err(to_py)
}

/// Pooled estimate from homodyne outcomes recorded for symbols 0 and 1.
#[pyfunction]
fn estimate_from_samples(samples_0: Vec<f64>, samples_1: Vec<f64>) -> PyResult<ErrorEstimate> {
    sqzbpsk::estimate_from_samples(&samples_0, &samples_1)
        .map(Into::into)
        .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "sqzbpsk")]
fn sqzbpsk_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BoundSet>()?;
    m.add_class::<ExperimentParams>()?;
    m.add_class::<ErrorEstimate>()?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(homodyne_error, m)?)?;
    m.add_function(wrap_pyfunction!(helstrom_error, m)?)?;
    m.add_function(wrap_pyfunction!(bound_set, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_photon_number, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(snr_bpsk, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_error, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_error_lossy, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_gamma_lossy, m)?)?;
    m.add_function(wrap_pyfunction!(py_ask3_error, m)?)?;
    m.add_function(wrap_pyfunction!(psk3_error, m)?)?;
    m.add_function(wrap_pyfunction!(py_psk4_snr, m)?)?;
    m.add_function(wrap_pyfunction!(py_psk4_variance, m)?)?;
    m.add_function(wrap_pyfunction!(run_batch, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_from_samples, m)?)?;
    Ok(())
}
