//! Quasi-phase-matching design for the four cascaded three-wave
//! processes.
//!
//! The interacting harmonics and their polarizations are fixed:
//! fundamental ordinary (1o) and extraordinary (1e) at λ, second
//! harmonic extraordinary (2e) at λ/2, third harmonic extraordinary
//! (3e) at λ/3, fourth harmonic ordinary (4o) at λ/4. Wave numbers are
//! k = 2πn/λ with the polarization-appropriate index, and the bulk
//! mismatches of the four processes are
//!
//! ```text
//! Δk₁ = k₂ₑ − k₁ₒ − k₁ₑ        Δk₃ = k₄ₒ − k₁ₑ − k₃ₑ
//! Δk₂ = k₃ₑ − k₁ₒ − k₂ₑ        Δk₄ = k₄ₒ − 2k₂ₑ
//! ```
//!
//! A periodically poled grating of period Λ contributes a reciprocal
//! vector G = 2π/Λ; an odd order m cancels a mismatch when
//! Δk + mG = 0. All four processes share one crystal, so the design
//! question is whether their coherence lengths are compatible: the
//! first pair must agree, the second pair must agree, and the pairs
//! must sit in the ratio 9 so that one grating (or two commensurate
//! ones) serves all four.

use std::f64::consts::{PI, TAU};

use crate::error::{ensure_finite, Error, Result};
use crate::propagator::CouplingRatios;

/// Index polarization selector for table lookups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

/// Refractive indices (n_o, n_e) tabulated on a strictly increasing
/// wavelength grid, in micrometers. Lookups interpolate linearly and
/// never extrapolate.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionTable {
    /// (wavelength_um, n_o, n_e), strictly increasing in wavelength.
    rows: Vec<(f64, f64, f64)>,
}

impl DispersionTable {
    /// Validates and adopts `(wavelength_um, n_o, n_e)` rows. Row
    /// numbers in error messages are 1-based positions in the input.
    pub fn from_rows(rows: Vec<(f64, f64, f64)>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Table {
                line: rows.len(),
                reason: "table needs at least two rows to interpolate".into(),
            });
        }
        for (i, &(wl, n_o, n_e)) in rows.iter().enumerate() {
            let line = i + 1;
            if !(wl.is_finite() && n_o.is_finite() && n_e.is_finite()) {
                return Err(Error::Table {
                    line,
                    reason: "all columns must be finite numbers".into(),
                });
            }
            if wl <= 0.0 {
                return Err(Error::Table {
                    line,
                    reason: format!("wavelength must be positive, got {wl}"),
                });
            }
            if n_o <= 1.0 || n_e <= 1.0 {
                return Err(Error::Table {
                    line,
                    reason: format!("refractive indices must exceed 1, got ({n_o}, {n_e})"),
                });
            }
            if i > 0 && wl <= rows[i - 1].0 {
                return Err(Error::Table {
                    line,
                    reason: format!(
                        "wavelengths must be strictly increasing, got {wl} after {}",
                        rows[i - 1].0
                    ),
                });
            }
        }
        Ok(Self { rows })
    }

    /// Parses the plain-text table format: one row per line, three
    /// whitespace-separated numeric columns (wavelength_um, n_o, n_e),
    /// `#` starting a comment, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut row_lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let data = raw.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                continue;
            }
            let fields: Vec<&str> = data.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Table {
                    line,
                    reason: format!("expected 3 columns, found {}", fields.len()),
                });
            }
            let mut values = [0.0; 3];
            for (slot, field) in values.iter_mut().zip(&fields) {
                *slot = field.parse::<f64>().map_err(|_| Error::Table {
                    line,
                    reason: format!("not a number: {field:?}"),
                })?;
            }
            rows.push((values[0], values[1], values[2]));
            row_lines.push(line);
        }
        // re-map row positions to source line numbers for diagnostics
        Self::from_rows(rows).map_err(|e| match e {
            Error::Table { line, reason } if line > 0 && line <= row_lines.len() => Error::Table {
                line: row_lines[line - 1],
                reason,
            },
            other => other,
        })
    }

    pub fn min_wavelength_um(&self) -> f64 {
        self.rows[0].0
    }

    pub fn max_wavelength_um(&self) -> f64 {
        self.rows[self.rows.len() - 1].0
    }

    /// Refractive index at `wavelength_um`, linearly interpolated.
    /// Queries at grid points return the stored value exactly.
    pub fn index(&self, wavelength_um: f64, pol: Polarization) -> Result<f64> {
        ensure_finite("wavelength_um", wavelength_um)?;
        let (min, max) = (self.min_wavelength_um(), self.max_wavelength_um());
        if wavelength_um < min || wavelength_um > max {
            return Err(Error::WavelengthOutOfRange {
                wavelength_um,
                min_um: min,
                max_um: max,
            });
        }
        let pick = |row: &(f64, f64, f64)| match pol {
            Polarization::Ordinary => row.1,
            Polarization::Extraordinary => row.2,
        };
        // first row with wavelength >= query; bounds guarantee a hit
        let hi = self.rows.partition_point(|row| row.0 < wavelength_um);
        let upper = &self.rows[hi];
        if upper.0 == wavelength_um {
            return Ok(pick(upper));
        }
        let lower = &self.rows[hi - 1];
        let t = (wavelength_um - lower.0) / (upper.0 - lower.0);
        Ok(pick(lower) + t * (pick(upper) - pick(lower)))
    }

    /// Wave number k = 2πn/λ in rad/µm.
    pub fn wave_number(&self, wavelength_um: f64, pol: Polarization) -> Result<f64> {
        Ok(TAU * self.index(wavelength_um, pol)? / wavelength_um)
    }
}

/// Bulk phase mismatches (Δk₁, Δk₂, Δk₃, Δk₄) in rad/µm at the given
/// fundamental wavelength. All five harmonic wavelengths must lie
/// inside the table range.
pub fn bulk_mismatches(table: &DispersionTable, fundamental_um: f64) -> Result<[f64; 4]> {
    ensure_finite("fundamental_um", fundamental_um)?;
    if fundamental_um <= 0.0 {
        return Err(Error::Negative {
            name: "fundamental_um",
            value: fundamental_um,
        });
    }
    let k_1o = table.wave_number(fundamental_um, Polarization::Ordinary)?;
    let k_1e = table.wave_number(fundamental_um, Polarization::Extraordinary)?;
    let k_2e = table.wave_number(fundamental_um / 2.0, Polarization::Extraordinary)?;
    let k_3e = table.wave_number(fundamental_um / 3.0, Polarization::Extraordinary)?;
    let k_4o = table.wave_number(fundamental_um / 4.0, Polarization::Ordinary)?;
    Ok([
        k_2e - k_1o - k_1e,
        k_3e - k_1o - k_2e,
        k_4o - k_1e - k_3e,
        k_4o - 2.0 * k_2e,
    ])
}

/// Mismatches at or below this magnitude (rad/µm) count as already
/// matched. The corresponding coherence length exceeds 3×10¹² µm,
/// about nine orders of magnitude beyond any crystal, and the
/// threshold absorbs the rounding floor of mismatch arithmetic on
/// dispersionless tables.
pub const NEGLIGIBLE_MISMATCH: f64 = 1e-12;

/// Grating prescription for one process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QpmSolution {
    /// The bulk mismatch already vanishes; any grating would only
    /// spoil it.
    NoPolingNeeded,
    /// Poling with the signed order m and period Λ cancels the
    /// mismatch: Δk + m·(2π/Λ) = 0.
    Grating {
        order: i64,
        period_um: f64,
        coherence_length_um: f64,
    },
}

/// Chooses the poling period for one mismatch at the requested order
/// magnitude. Only |order| matters on input; the solver fixes sign(m)
/// opposite to sign(Δk). The returned period satisfies
/// Λ = 2|m|·L_coh bitwise, with L_coh = π/|Δk|. Mismatches within
/// [`NEGLIGIBLE_MISMATCH`] of zero need no poling at all.
pub fn qpm_solve(delta_k: f64, order: i64) -> Result<QpmSolution> {
    ensure_finite("delta_k", delta_k)?;
    if order % 2 == 0 {
        return Err(Error::EvenPolingOrder { order });
    }
    if delta_k.abs() <= NEGLIGIBLE_MISMATCH {
        return Ok(QpmSolution::NoPolingNeeded);
    }
    let magnitude = order.unsigned_abs() as f64;
    let coherence_length_um = PI / delta_k.abs();
    let period_um = 2.0 * magnitude * coherence_length_um;
    let signed_order = if delta_k > 0.0 {
        -(order.abs())
    } else {
        order.abs()
    };
    Ok(QpmSolution::Grating {
        order: signed_order,
        period_um,
        coherence_length_um,
    })
}

/// The four cascaded processes, in the order their mismatches are
/// defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessId {
    P1,
    P2,
    P3,
    P4,
}

/// One process with its bulk mismatch and grating prescription.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpmProcess {
    pub id: ProcessId,
    /// Bulk mismatch Δk in rad/µm, before poling.
    pub delta_k: f64,
    pub solution: QpmSolution,
}

impl QpmProcess {
    /// Residual mismatch δk = Δk + m·(2π/Λ) of the stored solution, in
    /// rad/µm. Zero when no poling is needed.
    pub fn residual(&self) -> f64 {
        match self.solution {
            QpmSolution::NoPolingNeeded => self.delta_k,
            QpmSolution::Grating {
                order, period_um, ..
            } => self.delta_k + (order as f64) * TAU / period_um,
        }
    }

    /// Coherence length π/|Δk| in µm; infinite for a vanishing
    /// mismatch.
    pub fn coherence_length_um(&self) -> f64 {
        match self.solution {
            QpmSolution::NoPolingNeeded => f64::INFINITY,
            QpmSolution::Grating {
                coherence_length_um,
                ..
            } => coherence_length_um,
        }
    }

    /// Grating period in µm, when poling is needed.
    pub fn period_um(&self) -> Option<f64> {
        match self.solution {
            QpmSolution::NoPolingNeeded => None,
            QpmSolution::Grating { period_um, .. } => Some(period_um),
        }
    }
}

/// Solves all four processes at one fundamental wavelength with the
/// given poling-order magnitudes.
pub fn design_processes(
    table: &DispersionTable,
    fundamental_um: f64,
    orders: [i64; 4],
) -> Result<[QpmProcess; 4]> {
    let deltas = bulk_mismatches(table, fundamental_um)?;
    let ids = [ProcessId::P1, ProcessId::P2, ProcessId::P3, ProcessId::P4];
    let mut out = [QpmProcess {
        id: ProcessId::P1,
        delta_k: 0.0,
        solution: QpmSolution::NoPolingNeeded,
    }; 4];
    for j in 0..4 {
        out[j] = QpmProcess {
            id: ids[j],
            delta_k: deltas[j],
            solution: qpm_solve(deltas[j], orders[j])?,
        };
    }
    Ok(out)
}

/// Outcome of the simultaneous-matching test over four processes.
///
/// The three conditions are relative agreements of coherence lengths:
/// L¹ ≈ L², L³ ≈ L⁴, and L¹/L³ ≈ 9. They are evaluated on the bulk
/// mismatches (L = π/|Δk|), so the verdicts are independent of the
/// chosen poling orders; only the single-grating option depends on the
/// orders through the periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimultaneityReport {
    /// Relative tolerance every condition is tested against.
    pub rel_tol: f64,
    /// All four bulk mismatches vanish; nothing to match.
    pub no_poling_required: bool,
    /// Relative gap between |Δk₁| and |Δk₂| (equivalently L¹ and L²).
    pub first_pair_rel: f64,
    pub first_pair_ok: bool,
    /// Relative gap between |Δk₃| and |Δk₄|.
    pub second_pair_rel: f64,
    pub second_pair_ok: bool,
    /// L¹/L³ = |Δk₃|/|Δk₁|; NaN when both mismatches vanish.
    pub coherence_ratio: f64,
    pub coherence_ratio_ok: bool,
    /// Largest relative spread of the four grating periods, when all
    /// four processes need poling.
    pub single_grating_spread: Option<f64>,
    pub single_grating_ok: bool,
    /// The three coherence-length conditions hold (or nothing needs
    /// poling at all).
    pub passed: bool,
}

/// Relative gap between two magnitudes; zero when both vanish, full
/// when exactly one does.
fn rel_gap(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    let scale = a.max(b);
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Tests whether the four processes can be quasi-phase-matched in one
/// crystal: pairwise coherence-length agreement and the 9:1 ratio
/// between the pairs, each to `rel_tol`.
pub fn simultaneity_check(processes: &[QpmProcess; 4], rel_tol: f64) -> SimultaneityReport {
    // negligible mismatches act as exact zeros in every comparison
    let dk: Vec<f64> = processes
        .iter()
        .map(|p| {
            let d = p.delta_k.abs();
            if d <= NEGLIGIBLE_MISMATCH {
                0.0
            } else {
                d
            }
        })
        .collect();
    let no_poling_required = dk.iter().all(|&d| d == 0.0);

    let first_pair_rel = rel_gap(dk[0], dk[1]);
    let second_pair_rel = rel_gap(dk[2], dk[3]);
    let first_pair_ok = first_pair_rel <= rel_tol;
    let second_pair_ok = second_pair_rel <= rel_tol;

    // L¹/L³ = |Δk₃|/|Δk₁|
    let coherence_ratio = if dk[0] == 0.0 && dk[2] == 0.0 {
        f64::NAN
    } else {
        dk[2] / dk[0]
    };
    let coherence_ratio_ok =
        no_poling_required || (coherence_ratio - 9.0).abs() <= 9.0 * rel_tol;

    let periods: Vec<Option<f64>> = processes.iter().map(|p| p.period_um()).collect();
    let single_grating_spread = if periods.iter().all(|p| p.is_some()) {
        let values: Vec<f64> = periods.iter().map(|p| p.unwrap()).collect();
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        Some((max - min) / max)
    } else {
        None
    };
    let single_grating_ok = no_poling_required
        || matches!(single_grating_spread, Some(spread) if spread <= rel_tol);

    let passed = no_poling_required || (first_pair_ok && second_pair_ok && coherence_ratio_ok);

    SimultaneityReport {
        rel_tol,
        no_poling_required,
        first_pair_rel,
        first_pair_ok,
        second_pair_rel,
        second_pair_ok,
        coherence_ratio,
        coherence_ratio_ok,
        single_grating_spread,
        single_grating_ok,
        passed,
    }
}

/// Effective nonlinear couplings after poling, and the dimensionless
/// ratios that drive the reduced three-mode dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings {
    /// γⱼ = 2ξⱼ/(πmⱼ), signed. γ₄ does not enter the reduced system;
    /// it is carried for completeness.
    pub gamma: [f64; 4],
    /// k₁ = |γ₃/γ₁|, k₂ = |γ₂/γ₁|. A negative ratio is a π phase on
    /// the corresponding mode and is absorbed into its definition.
    pub ratios: CouplingRatios,
}

/// Reduces raw coupling strengths ξⱼ and signed poling orders mⱼ to
/// the effective couplings γⱼ and the propagator ratios (k₁, k₂).
pub fn effective_couplings(xi: [f64; 4], orders: [i64; 4]) -> Result<EffectiveCouplings> {
    let mut gamma = [0.0; 4];
    for j in 0..4 {
        ensure_finite("xi", xi[j])?;
        if orders[j] % 2 == 0 {
            return Err(Error::EvenPolingOrder { order: orders[j] });
        }
        gamma[j] = 2.0 * xi[j] / (PI * orders[j] as f64);
    }
    if gamma[0] == 0.0 {
        return Err(Error::ZeroPrimaryCoupling);
    }
    let ratios = CouplingRatios::new((gamma[2] / gamma[0]).abs(), (gamma[1] / gamma[0]).abs())?;
    Ok(EffectiveCouplings { gamma, ratios })
}
