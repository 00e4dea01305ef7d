//! Error type shared by every module of the crate.
//!
//! All messages render on a single line so frontends can emit them as
//! one machine-parsable diagnostic.

/// Crate-wide error enumeration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A numeric input was NaN or infinite.
    #[error("{name} must be finite")]
    NonFinite { name: &'static str },

    /// A quantity constrained to be nonnegative was negative.
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },

    /// The fixed-step integrator needs at least one step.
    #[error("integrator step count must be at least 1")]
    ZeroSteps,

    /// Poling orders are restricted to odd integers; a 50% duty-cycle
    /// grating has no even Fourier components to compensate a mismatch.
    #[error("poling order must be odd, got {order}")]
    EvenPolingOrder { order: i64 },

    /// The first-process coupling normalizes the interaction length and
    /// the coupling ratios; zero leaves both undefined.
    #[error("first-process coupling xi1 is zero; coupling ratios k1, k2 are undefined")]
    ZeroPrimaryCoupling,

    /// Normalized Stokes variances divide by the total input photon
    /// number, which vanishes for vacuum input.
    #[error("normalized variances are undefined for vacuum input (both coherent amplitudes are zero)")]
    DegenerateNormalization,

    /// A refractive-index lookup fell outside the tabulated range.
    /// Extrapolation is never performed.
    #[error("wavelength {wavelength_um} um is outside the dispersion table range [{min_um}, {max_um}] um")]
    WavelengthOutOfRange {
        wavelength_um: f64,
        min_um: f64,
        max_um: f64,
    },

    /// A dispersion table file failed strict parsing.
    #[error("dispersion table line {line}: {reason}")]
    Table { line: usize, reason: String },

    /// A sweep plan file failed strict parsing.
    #[error("sweep plan line {line}: {reason}")]
    Plan { line: usize, reason: String },

    /// A sweep plan parsed but its fields are inconsistent.
    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),

    /// The fixed CSV schema needs output groups the plan did not select.
    #[error("csv output requires the {0} output group in the plan")]
    MissingColumns(&'static str),

    /// A parameter-search grid has an empty axis.
    #[error("search grid axis {name} must contain at least one point")]
    EmptyGridAxis { name: &'static str },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name })
    }
}

pub(crate) fn ensure_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value < 0.0 {
        Err(Error::Negative { name, value })
    } else {
        Ok(value)
    }
}
