//! Error limits for discriminating phase-shift-keyed optical signals encoded
//! in coherent or displaced squeezed states.
//!
//! * [`bounds`]: homodyne and Helstrom limits for coherent and optimally
//!   squeezed binary signals, their crossover, and mutual information.
//! * [`gaussian`]: single-mode Gaussian states and homodyne SNR.
//! * [`channel`]: error models for impure states, detector noise and loss.
//! * [`multiformat`]: three-level amplitude keying, three- and four-phase
//!   keying with dual-homodyne detection.
//! * [`montecarlo`]: receiver simulation and Jeffreys-posterior error estimates.
//! * [`numerics`]: `erfc`, adaptive quadrature, bisection, random streams.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
mod error;
pub mod gaussian;
pub mod montecarlo;
pub mod multiformat;
pub mod numerics;

pub use bounds::{bound_set, crossover_photon_number, helstrom_error, homodyne_error, mutual_information, BoundSet};
pub use channel::{
    mean_photon_estimate, optimal_gamma_lossy, predicted_error, predicted_error_lossy, EnergyModel, ExperimentParams,
    Squeezing,
};
pub use error::{Error, Result};
pub use gaussian::{optimal_gamma, snr_bpsk, EnergyBudget, GaussianState};
pub use montecarlo::{estimate_from_samples, run_batch, ErrorEstimate, TrialBatch};
pub use multiformat::{Alphabet, DualHomodyneDistribution, PhaseAngleDistribution};
