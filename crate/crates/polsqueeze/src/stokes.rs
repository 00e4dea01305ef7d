//! Stokes parameters of the fundamental output field and their quantum
//! variances.
//!
//! With b₁ = a₁ₒ(ζ) and b₂ = a₁ₑ(ζ):
//!
//! ```text
//! S₀ = b₁†b₁ + b₂†b₂        S₂ = b₁†b₂ + b₂†b₁
//! S₁ = b₁†b₁ − b₂†b₂        S₃ = i(b₂†b₁ − b₁†b₂)
//! ```
//!
//! A coherent input gives ⟨ΔSⱼ²⟩ = |α₁ₒ|² + |α₁ₑ|² for every j, so each
//! variance is reported normalized by that total; values below 1 mean
//! polarization squeezing.
//!
//! Every variance is available through two independent routes: the
//! vacuum-moment engine applied to the operator expansion (the
//! canonical path for all shipped numbers) and explicit polynomials in
//! the propagator entries. The polynomial route exists to cross-check
//! the engine and to expose the phase structure of each variance.

use crate::error::{Error, Result};
use crate::moments::{output_ops, InputState};
use crate::propagator::PropagatorMatrix;
use crate::wick::QuadObservable;
use num_complex::Complex64;

/// Coefficients of the Stokes observables as bilinears in the
/// propagator entries λᵣ꜀ (zero-indexed below as l(r, c)).
///
/// `sum` and `diff` drive the intensity-type parameters S₀ and S₁;
/// `cross` drives the coherence-type parameters S₂ and S₃. Each array
/// is ordered exactly as consumed by the variance polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesQuadratic {
    pub sum: [f64; 7],
    pub diff: [f64; 7],
    pub cross: [f64; 6],
}

/// Builds the coefficient arrays for one propagator matrix.
pub fn stokes_quadratic(p: &PropagatorMatrix) -> StokesQuadratic {
    let l = |r: usize, c: usize| p.entry(r, c);
    let sum = [
        l(0, 1) * l(0, 1) + l(1, 0) * l(1, 0) + l(1, 2) * l(1, 2),
        l(0, 2) * l(0, 2) + l(1, 2) * l(1, 2),
        l(0, 1) * l(0, 2) + l(1, 1) * l(1, 2),
        l(0, 1) * l(0, 1) + l(1, 1) * l(1, 1),
        l(0, 0) * l(0, 2) + l(1, 0) * l(1, 2),
        l(0, 0) * l(0, 1) + l(1, 0) * l(1, 1),
        l(0, 0) * l(0, 0) + l(1, 0) * l(1, 0),
    ];
    let diff = [
        l(0, 1) * l(0, 1) - l(1, 0) * l(1, 0) - l(1, 2) * l(1, 2),
        l(0, 2) * l(0, 2) - l(1, 2) * l(1, 2),
        l(0, 1) * l(0, 2) - l(1, 1) * l(1, 2),
        l(0, 1) * l(0, 1) - l(1, 1) * l(1, 1),
        l(0, 0) * l(0, 2) - l(1, 0) * l(1, 2),
        l(0, 0) * l(0, 1) - l(1, 0) * l(1, 1),
        l(0, 0) * l(0, 0) - l(1, 0) * l(1, 0),
    ];
    let cross = [
        l(0, 2) * l(1, 2),
        l(0, 2) * l(1, 1) + l(0, 1) * l(1, 2),
        l(0, 1) * l(1, 1),
        l(0, 2) * l(1, 0) + l(0, 0) * l(1, 2),
        l(0, 1) * l(1, 0) + l(0, 0) * l(1, 1),
        l(0, 0) * l(1, 0),
    ];
    StokesQuadratic { sum, diff, cross }
}

/// The four Stokes observables over the evolved output operators.
pub(crate) fn stokes_observables(p: &PropagatorMatrix, s: &InputState) -> [QuadObservable; 4] {
    let [b1, b2, _] = output_ops(p, s);
    let one = Complex64::ONE;
    let i = Complex64::I;
    [
        QuadObservable::new(vec![(one, b1.dagger(), b1), (one, b2.dagger(), b2)]),
        QuadObservable::new(vec![(one, b1.dagger(), b1), (-one, b2.dagger(), b2)]),
        QuadObservable::new(vec![(one, b1.dagger(), b2), (one, b2.dagger(), b1)]),
        QuadObservable::new(vec![(i, b2.dagger(), b1), (-i, b1.dagger(), b2)]),
    ]
}

/// ⟨S₀⟩..⟨S₃⟩ from the vacuum-moment engine; the canonical route.
pub fn stokes_means(p: &PropagatorMatrix, s: &InputState) -> [f64; 4] {
    let obs = stokes_observables(p, s);
    let mut out = [0.0; 4];
    for (slot, o) in out.iter_mut().zip(obs.iter()) {
        *slot = o.mean().re;
    }
    out
}

/// ⟨S₀⟩ or ⟨S₁⟩: depends on the phases only through Σ = φ₁ₒ + φ₁ₑ.
fn intensity_mean(p: &[f64; 7], a: f64, b: f64, phase_sum: f64) -> f64 {
    let sab = (a * b).sqrt();
    p[0] + p[3] * b + 2.0 * p[5] * sab * phase_sum.cos() + p[6] * a
}

/// ⟨S₂⟩: the in-phase coherence between the two fundamental arms.
fn coherence_mean_in_phase(q: &[f64; 6], a: f64, b: f64, phi_o: f64, phi_e: f64) -> f64 {
    let sab = (a * b).sqrt();
    2.0 * q[2] * b * (2.0 * phi_e).cos()
        + 2.0 * q[4] * sab * (phi_o - phi_e).cos()
        + 2.0 * q[5] * a * (2.0 * phi_o).cos()
}

/// ⟨S₃⟩: the quadrature coherence between the two fundamental arms.
fn coherence_mean_quadrature(q: &[f64; 6], a: f64, b: f64, phi_o: f64, phi_e: f64) -> f64 {
    let sab = (a * b).sqrt();
    2.0 * q[2] * b * (2.0 * phi_e).sin()
        - 2.0 * q[4] * sab * (phi_o - phi_e).sin()
        - 2.0 * q[5] * a * (2.0 * phi_o).sin()
}

/// ⟨S₃⟩ with the q₂ term carrying the opposite sign, i.e. with that
/// term's phase effectively conjugated. This variant circulates in
/// hand transcriptions of the expanded formulas and is wrong whenever
/// q₂·sin(2φ₁ₑ) ≠ 0; see docs/errata.md. Kept only so the defect is
/// reproducible and testable.
fn coherence_mean_quadrature_q2_conjugated(
    q: &[f64; 6],
    a: f64,
    b: f64,
    phi_o: f64,
    phi_e: f64,
) -> f64 {
    let sab = (a * b).sqrt();
    -2.0 * q[2] * b * (2.0 * phi_e).sin()
        - 2.0 * q[4] * sab * (phi_o - phi_e).sin()
        - 2.0 * q[5] * a * (2.0 * phi_o).sin()
}

/// ⟨S₀⟩..⟨S₃⟩ from the explicit polynomials in the propagator entries.
pub fn stokes_means_closed_form(p: &PropagatorMatrix, s: &InputState) -> [f64; 4] {
    let quad = stokes_quadratic(p);
    let a = s.mag_1o() * s.mag_1o();
    let b = s.mag_1e() * s.mag_1e();
    let (phi_o, phi_e) = (s.phase_1o(), s.phase_1e());
    [
        intensity_mean(&quad.sum, a, b, phi_o + phi_e),
        intensity_mean(&quad.diff, a, b, phi_o + phi_e),
        coherence_mean_in_phase(&quad.cross, a, b, phi_o, phi_e),
        coherence_mean_quadrature(&quad.cross, a, b, phi_o, phi_e),
    ]
}

/// Second moment ⟨Sⱼ²⟩ minus nothing: the full quadratic-in-(A, B)
/// polynomial for the intensity-type parameters S₀ and S₁.
fn intensity_second_moment(p: &[f64; 7], a: f64, b: f64, phase_sum: f64) -> f64 {
    let sab = (a * b).sqrt();
    let cs = phase_sum.cos();
    let c2s = (2.0 * phase_sum).cos();
    p[0] * p[0] + p[2] * p[2] + p[5] * p[5]
        + (p[2] * p[2] + 2.0 * p[0] * p[3] + p[3] * p[3] + p[5] * p[5]) * b
        + p[3] * p[3] * b * b
        + 2.0 * (p[2] * p[4] + 2.0 * p[0] * p[5] + p[3] * p[5] + p[5] * p[6]) * sab * cs
        + 4.0 * p[3] * p[5] * sab * b * cs
        + 2.0 * p[5] * p[5] * a * b * c2s
        + (p[4] * p[4] + p[5] * p[5] + 2.0 * p[0] * p[6] + p[6] * p[6]) * a
        + 2.0 * (p[5] * p[5] + p[3] * p[6]) * a * b
        + 4.0 * p[5] * p[6] * a * sab * cs
        + p[6] * p[6] * a * a
}

/// ⟨Sⱼ²⟩ for the coherence-type parameters; `sg` is +1 for S₂ and −1
/// for S₃ (the relative sign of the phase-sensitive terms).
fn coherence_second_moment(q: &[f64; 6], a: f64, b: f64, phi_o: f64, phi_e: f64, sg: f64) -> f64 {
    let sab = (a * b).sqrt();
    let cs = (phi_o + phi_e).cos();
    2.0 * q[0] * q[0] + 2.0 * q[2] * q[2] + q[3] * q[3] + 2.0 * q[5] * q[5]
        + sg * 2.0 * q[2] * q[2] * b * b * (4.0 * phi_e).cos()
        + (q[1] * q[1] + 4.0 * q[2] * q[2] + q[4] * q[4]) * b
        + 2.0 * q[2] * q[2] * b * b
        + 2.0 * (q[1] * q[3] + 2.0 * q[2] * q[4] + 2.0 * q[4] * q[5]) * sab * cs
        + 4.0 * q[2] * q[4] * b * sab * cs
        + sg * 4.0 * q[2] * q[4] * b * sab * (phi_o - 3.0 * phi_e).cos()
        + 4.0 * q[2] * q[5] * a * b * (2.0 * phi_o + 2.0 * phi_e).cos()
        + sg * 2.0 * (q[4] * q[4] + 2.0 * q[2] * q[5]) * a * b * (2.0 * phi_o - 2.0 * phi_e).cos()
        + sg * 4.0 * q[4] * q[5] * a * sab * (3.0 * phi_o - phi_e).cos()
        + sg * 2.0 * q[5] * q[5] * a * a * (4.0 * phi_o).cos()
        + 4.0 * q[4] * q[5] * a * sab * cs
        + (q[3] * q[3] + q[4] * q[4] + 4.0 * q[5] * q[5]) * a
        + 2.0 * q[4] * q[4] * a * b
        + 2.0 * q[5] * q[5] * a * a
}

/// Unnormalized variances (⟨ΔS₀²⟩, …, ⟨ΔS₃²⟩) from the vacuum-moment
/// engine; the canonical route.
pub fn stokes_raw_variances(p: &PropagatorMatrix, s: &InputState) -> [f64; 4] {
    let obs = stokes_observables(p, s);
    let mut out = [0.0; 4];
    for (slot, o) in out.iter_mut().zip(obs.iter()) {
        *slot = o.variance().re;
    }
    out
}

/// Unnormalized variances from the explicit polynomials.
pub fn stokes_raw_variances_closed_form(p: &PropagatorMatrix, s: &InputState) -> [f64; 4] {
    let quad = stokes_quadratic(p);
    let a = s.mag_1o() * s.mag_1o();
    let b = s.mag_1e() * s.mag_1e();
    let (phi_o, phi_e) = (s.phase_1o(), s.phase_1e());
    let means = stokes_means_closed_form(p, s);
    [
        intensity_second_moment(&quad.sum, a, b, phi_o + phi_e) - means[0] * means[0],
        intensity_second_moment(&quad.diff, a, b, phi_o + phi_e) - means[1] * means[1],
        coherence_second_moment(&quad.cross, a, b, phi_o, phi_e, 1.0) - means[2] * means[2],
        coherence_second_moment(&quad.cross, a, b, phi_o, phi_e, -1.0) - means[3] * means[3],
    ]
}

/// Variant of [`stokes_raw_variances_closed_form`] whose S₃ entry
/// subtracts the q₂-conjugated mean. The offset from the correct value
/// is 4x(y + z) with x, y, z the three terms of the subtracted mean;
/// see docs/errata.md for the full analysis.
pub fn stokes_raw_variances_closed_form_q2_conjugated(
    p: &PropagatorMatrix,
    s: &InputState,
) -> [f64; 4] {
    let quad = stokes_quadratic(p);
    let a = s.mag_1o() * s.mag_1o();
    let b = s.mag_1e() * s.mag_1e();
    let (phi_o, phi_e) = (s.phase_1o(), s.phase_1e());
    let mut out = stokes_raw_variances_closed_form(p, s);
    let m3 = coherence_mean_quadrature_q2_conjugated(&quad.cross, a, b, phi_o, phi_e);
    out[3] = coherence_second_moment(&quad.cross, a, b, phi_o, phi_e, -1.0) - m3 * m3;
    out
}

/// Stokes means and variances at one propagation length, with the
/// variances normalized to the coherent-state level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesReport {
    /// Normalized interaction length the propagator was built at.
    pub zeta: f64,
    /// ⟨S₀⟩, ⟨S₁⟩, ⟨S₂⟩, ⟨S₃⟩.
    pub means: [f64; 4],
    /// ⟨ΔS₀²⟩, …, ⟨ΔS₃²⟩.
    pub variances: [f64; 4],
    /// Variances divided by |α₁ₒ|² + |α₁ₑ|²; below 1 is squeezed.
    pub normalized: [f64; 4],
}

/// Evaluates means and variances through the vacuum-moment engine.
/// Fails with [`Error::DegenerateNormalization`] when both input
/// amplitudes vanish, since the squeezing criterion is undefined there.
pub fn stokes_report(p: &PropagatorMatrix, s: &InputState) -> Result<StokesReport> {
    let denom = s.total_mean_photons();
    if denom == 0.0 {
        return Err(Error::DegenerateNormalization);
    }
    let means = stokes_means(p, s);
    let variances = stokes_raw_variances(p, s);
    let normalized = variances.map(|v| v / denom);
    Ok(StokesReport {
        zeta: p.zeta(),
        means,
        variances,
        normalized,
    })
}

/// Largest deviation of the output Stokes operators from su(2)
/// closure: ⟨[Sᵢ, Sⱼ]⟩ = 2i⟨Sₖ⟩ for (i, j, k) cyclic in (1, 2, 3) and
/// ⟨[S₀, Sⱼ]⟩ = 0. All products are evaluated by full Wick expansion,
/// so this exercises the quartic engine and the operator expansion
/// together.
pub fn su2_commutator_residual(p: &PropagatorMatrix, s: &InputState) -> f64 {
    let obs = stokes_observables(p, s);
    let two_i = Complex64::new(0.0, 2.0);
    let mut worst: f64 = 0.0;
    for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        let forward = QuadObservable::product_mean(&obs[i], &obs[j]);
        let backward = QuadObservable::product_mean(&obs[j], &obs[i]);
        worst = worst.max((forward - backward - two_i * obs[k].mean()).norm());
    }
    for j in 1..4 {
        let forward = QuadObservable::product_mean(&obs[0], &obs[j]);
        let backward = QuadObservable::product_mean(&obs[j], &obs[0]);
        worst = worst.max((forward - backward).norm());
    }
    worst
}
