//! Coherent input states, evolved output operators, and photon-number
//! statistics.
//!
//! The two fundamental modes enter the crystal in coherent states
//! α₁ₒ = |α₁ₒ|e^{iφ₁ₒ} and α₁ₑ = |α₁ₑ|e^{iφ₁ₑ}; the third harmonic
//! starts in vacuum. Only the phase combinations φ₁ₒ + φ₁ₑ and
//! φ₁ₒ − φ₁ₑ affect any observable.
//!
//! Photon means are available through two independent routes: explicit
//! closed forms in the propagator entries, and the vacuum-moment engine
//! applied to the evolved operators. The engine is the canonical path;
//! the closed forms exist to cross-check it and to make the parameter
//! dependence legible.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{ensure_finite, ensure_nonnegative, Result};
use crate::propagator::PropagatorMatrix;
use crate::wick::{AffineOp, FluctForm, QuadObservable};

/// Wraps an angle into (−π, π].
fn wrap_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Coherent amplitudes of the two fundamental input modes, stored as
/// (magnitude, phase) to keep the physically meaningful phase
/// combinations first-class. Mode 3e is implicitly in vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    mag_1o: f64,
    phase_1o: f64,
    mag_1e: f64,
    phase_1e: f64,
}

impl InputState {
    /// Magnitudes must be finite and nonnegative; phases are wrapped
    /// into (−π, π].
    pub fn new(mag_1o: f64, phase_1o: f64, mag_1e: f64, phase_1e: f64) -> Result<Self> {
        ensure_nonnegative("mag_1o", mag_1o)?;
        ensure_nonnegative("mag_1e", mag_1e)?;
        ensure_finite("phase_1o", phase_1o)?;
        ensure_finite("phase_1e", phase_1e)?;
        Ok(Self {
            mag_1o,
            phase_1o: wrap_phase(phase_1o),
            mag_1e,
            phase_1e: wrap_phase(phase_1e),
        })
    }

    /// Builds the state from initial mean photon numbers and the two
    /// phase combinations: φ₁ₒ = (sum + diff)/2, φ₁ₑ = (sum − diff)/2.
    pub fn from_mean_photons(n_1o: f64, n_1e: f64, phase_sum: f64, phase_diff: f64) -> Result<Self> {
        ensure_nonnegative("n_1o", n_1o)?;
        ensure_nonnegative("n_1e", n_1e)?;
        ensure_finite("phase_sum", phase_sum)?;
        ensure_finite("phase_diff", phase_diff)?;
        Self::new(
            n_1o.sqrt(),
            0.5 * (phase_sum + phase_diff),
            n_1e.sqrt(),
            0.5 * (phase_sum - phase_diff),
        )
    }

    pub fn mag_1o(&self) -> f64 {
        self.mag_1o
    }

    pub fn phase_1o(&self) -> f64 {
        self.phase_1o
    }

    pub fn mag_1e(&self) -> f64 {
        self.mag_1e
    }

    pub fn phase_1e(&self) -> f64 {
        self.phase_1e
    }

    pub fn alpha_1o(&self) -> Complex64 {
        Complex64::from_polar(self.mag_1o, self.phase_1o)
    }

    pub fn alpha_1e(&self) -> Complex64 {
        Complex64::from_polar(self.mag_1e, self.phase_1e)
    }

    /// Total input photon number |α₁ₒ|² + |α₁ₑ|², the fixed
    /// normalization denominator for Stokes variances.
    pub fn total_mean_photons(&self) -> f64 {
        self.mag_1o * self.mag_1o + self.mag_1e * self.mag_1e
    }
}

/// The two evolved fundamental-mode operators written as mean plus a
/// linear combination of the six input fluctuation operators.
///
/// Row order matches the fluctuation basis of [`crate::wick`]: row 0
/// is a₁ₒ(ζ), row 1 is a₁ₑ(ζ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputExpansion {
    /// ⟨a₁ₒ(ζ)⟩ = λ₁₁α₁ₒ + λ₁₂α₁ₑ*.
    pub mean_b1: Complex64,
    /// ⟨a₁ₑ(ζ)⟩ = λ₂₁α₁ₒ* + λ₂₂α₁ₑ.
    pub mean_b2: Complex64,
    /// Fluctuation coefficients over (δa₁ₒ, δa₁ₒ†, δa₁ₑ, δa₁ₑ†, δa₃ₑ, δa₃ₑ†).
    pub fluct: [[Complex64; 6]; 2],
}

/// Selects one of the two fundamental polarization arms at the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputArm {
    Ordinary,
    Extraordinary,
}

/// Expands the evolved fundamental-mode operators over the input means
/// and fluctuations. The third-harmonic mode contributes fluctuations
/// only (its coherent amplitude is zero).
pub fn output_expansion(p: &PropagatorMatrix, s: &InputState) -> OutputExpansion {
    let ops = output_ops(p, s);
    OutputExpansion {
        mean_b1: ops[0].mean,
        mean_b2: ops[1].mean,
        fluct: [ops[0].fluct.0, ops[1].fluct.0],
    }
}

/// All three evolved annihilation operators (a₁ₒ, a₁ₑ, a₃ₑ at ζ) as
/// affine operators ready for moment evaluation.
pub(crate) fn output_ops(p: &PropagatorMatrix, s: &InputState) -> [AffineOp; 3] {
    let ao = s.alpha_1o();
    let ae = s.alpha_1e();
    let l = |r: usize, c: usize| Complex64::new(p.entry(r, c), 0.0);

    // a₁ₒ(ζ) = λ₁₁ a₁ₒ + λ₁₂ a₁ₑ† + λ₁₃ a₃ₑ
    let mut f1 = FluctForm::zero();
    f1.0[0] = l(0, 0);
    f1.0[3] = l(0, 1);
    f1.0[4] = l(0, 2);
    let b1 = AffineOp {
        mean: l(0, 0) * ao + l(0, 1) * ae.conj(),
        fluct: f1,
    };

    // a₁ₑ(ζ) = λ₂₁ a₁ₒ† + λ₂₂ a₁ₑ + λ₂₃ a₃ₑ† (conjugate of stored row 2)
    let mut f2 = FluctForm::zero();
    f2.0[1] = l(1, 0);
    f2.0[2] = l(1, 1);
    f2.0[5] = l(1, 2);
    let b2 = AffineOp {
        mean: l(1, 0) * ao.conj() + l(1, 1) * ae,
        fluct: f2,
    };

    // a₃ₑ(ζ) = λ₃₁ a₁ₒ + λ₃₂ a₁ₑ† + λ₃₃ a₃ₑ
    let mut f3 = FluctForm::zero();
    f3.0[0] = l(2, 0);
    f3.0[3] = l(2, 1);
    f3.0[4] = l(2, 2);
    let b3 = AffineOp {
        mean: l(2, 0) * ao + l(2, 1) * ae.conj(),
        fluct: f3,
    };

    [b1, b2, b3]
}

/// Largest deviation of the output commutators from their canonical
/// values: [b₁, b₁†] = 1, [b₂, b₂†] = 1, [b₁, b₂] = 0. These are the
/// symplectic row conditions restricted to the fundamental modes.
pub fn commutator_closure_residual(x: &OutputExpansion) -> f64 {
    let rows = [FluctForm(x.fluct[0]), FluctForm(x.fluct[1])];
    // for linear forms, [X, Y] = Σ_m (X_m,annih·Y_m,crea − X_m,crea·Y_m,annih)
    let comm = |a: &FluctForm, b: &FluctForm| {
        crate::wick::contraction(a, b) - crate::wick::contraction(b, a)
    };
    let r1 = (comm(&rows[0], &rows[0].dagger()) - Complex64::ONE).norm();
    let r2 = (comm(&rows[1], &rows[1].dagger()) - Complex64::ONE).norm();
    let r12 = comm(&rows[0], &rows[1]).norm();
    r1.max(r2).max(r12)
}

pub(crate) fn number_observable(op: &AffineOp) -> QuadObservable {
    QuadObservable::new(vec![(Complex64::ONE, op.dagger(), *op)])
}

/// Mean photon numbers (⟨N₁ₒ⟩, ⟨N₁ₑ⟩, ⟨N₃ₑ⟩) from the closed forms in
/// the propagator entries. The spontaneous (amplitude-independent)
/// terms come from the creation-operator columns of each row.
pub fn mean_photon_numbers(p: &PropagatorMatrix, s: &InputState) -> [f64; 3] {
    let a = s.mag_1o * s.mag_1o;
    let b = s.mag_1e * s.mag_1e;
    // 2|α₁ₒ||α₁ₑ|cos(φ₁ₒ + φ₁ₑ): the pair-coherence cross term
    let cross = 2.0 * s.mag_1o * s.mag_1e * (s.phase_1o + s.phase_1e).cos();
    let l = |r: usize, c: usize| p.entry(r, c);

    let n1o = l(0, 1) * l(0, 1) * (1.0 + b) + l(0, 0) * l(0, 1) * cross + l(0, 0) * l(0, 0) * a;
    let n1e = l(1, 0) * l(1, 0) * (1.0 + a)
        + l(1, 2) * l(1, 2)
        + l(1, 1) * l(1, 1) * b
        + l(1, 0) * l(1, 1) * cross;
    let n3e = l(2, 1) * l(2, 1) * (1.0 + b) + l(2, 0) * l(2, 1) * cross + l(2, 0) * l(2, 0) * a;
    [n1o, n1e, n3e]
}

/// Mean photon numbers from the vacuum-moment engine; the canonical
/// route used by sweeps and reports.
pub fn mean_photon_numbers_engine(p: &PropagatorMatrix, s: &InputState) -> [f64; 3] {
    let ops = output_ops(p, s);
    let mut out = [0.0; 3];
    for (slot, op) in out.iter_mut().zip(ops.iter()) {
        *slot = number_observable(op).mean().re;
    }
    out
}

/// Photon-number variance ⟨ΔN²⟩ of one fundamental output arm, from
/// fourth-order vacuum moments of the evolved operators.
pub fn photon_number_variance(p: &PropagatorMatrix, s: &InputState, arm: OutputArm) -> f64 {
    let ops = output_ops(p, s);
    let op = match arm {
        OutputArm::Ordinary => &ops[0],
        OutputArm::Extraordinary => &ops[1],
    };
    number_observable(op).variance().re
}
