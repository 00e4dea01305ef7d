//! Polarization squeezing in a periodically poled nonlinear crystal,
//! modeled as three cascaded parametric processes acting on the modes
//! (a₁ₒ, a₁ₑ, a₃ₑ): ordinary and extraordinary fundamental plus the
//! extraordinary third harmonic.
//!
//! In the undepleted-pump linearization the Heisenberg equations close
//! on the triple (a₁ₒ, a₁ₑ†, a₃ₑ), and evolution over a normalized
//! interaction length ζ is the matrix exponential of a fixed system
//! matrix whose entries are the coupling ratios k₁ and k₂
//! ([`propagator`]). All quantum statistics of the outputs — photon
//! numbers, their variances, Stokes parameters and the polarization
//! squeezing criterion — follow from vacuum moments of the evolved
//! operators ([`wick`], [`moments`], [`stokes`]).
//!
//! The [`qpm`] module designs the poling that realizes the couplings:
//! bulk phase mismatches from a dispersion table, grating periods and
//! orders, and the simultaneity condition that lets one grating serve
//! all four processes. The [`sweep`] module tabulates statistics along
//! ζ and searches coupling space for squeezing; [`verify`]
//! cross-checks every closed form against an independent route.
//!
//! ```
//! use polsqueeze::{propagator, stokes_report, CouplingRatios, InputState};
//! use std::f64::consts::PI;
//!
//! // equal coherent beams in both fundamental polarizations, with the
//! // deamplifying phase φ₁ₒ + φ₁ₑ = π, at the operating point k₁ < k₂
//! let ratios = CouplingRatios::new(0.2, 0.5)?;
//! let state = InputState::from_mean_photons(1.0, 1.0, PI, 0.0)?;
//! let p = propagator(&ratios, 0.3)?;
//! let report = stokes_report(&p, &state)?;
//!
//! // every normalized Stokes variance is below the coherent level
//! for v in report.normalized {
//!     assert!(v < 1.0);
//! }
//! # Ok::<(), polsqueeze::Error>(())
//! ```

pub mod error;
pub mod moments;
pub mod propagator;
pub mod qpm;
pub mod stokes;
pub mod sweep;
pub mod verify;
pub mod wick;

pub use error::{Error, Result};
pub use moments::{
    commutator_closure_residual, mean_photon_numbers, mean_photon_numbers_engine,
    output_expansion, photon_number_variance, InputState, OutputArm, OutputExpansion,
};
pub use propagator::{
    kernels, propagator, propagator_oracle, symplectic_residual, CouplingRatios, Kernels,
    PropagatorMatrix, METRIC,
};
pub use qpm::{
    bulk_mismatches, design_processes, effective_couplings, qpm_solve, simultaneity_check,
    DispersionTable, EffectiveCouplings, Polarization, ProcessId, QpmProcess, QpmSolution,
    SimultaneityReport, NEGLIGIBLE_MISMATCH,
};
pub use stokes::{
    stokes_means, stokes_means_closed_form, stokes_quadratic, stokes_raw_variances,
    stokes_raw_variances_closed_form, stokes_raw_variances_closed_form_q2_conjugated,
    stokes_report, su2_commutator_residual, StokesQuadratic, StokesReport,
};
pub use sweep::{
    parse_plan, run_sweep, squeezing_search, to_csv, GridAxis, OutputSelection, SearchGrid,
    SearchHit, SearchReport, SweepPlan, SweepRow, CSV_HEADER,
};
pub use verify::{run_verify, CheckOutcome, VerifyConfig, VerifyReport};
pub use wick::{AffineOp, FluctForm, QuadObservable};
