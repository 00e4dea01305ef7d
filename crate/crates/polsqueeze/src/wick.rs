//! Vacuum-moment engine for Gaussian expectation values.
//!
//! Coherent inputs are displaced vacua, so every observable here is a
//! polynomial in the six fluctuation operators
//! (δa₁ₒ, δa₁ₒ†, δa₁ₑ, δa₁ₑ†, δa₃ₑ, δa₃ₑ†). Over the vacuum the only
//! nonvanishing elementary contraction, taken in the operator order as
//! written, is ⟨δx δx†⟩ = 1; every higher moment decomposes into a sum
//! over order-preserving pairings. No Fock-space truncation is involved
//! anywhere, so the results are exact up to rounding.
//!
//! The basis index convention is fixed throughout the crate:
//! even slots hold annihilators, odd slots their daggers, in mode order
//! (1o, 1e, 3e).

use num_complex::Complex64;

/// Number of fluctuation basis operators (three modes, two each).
pub const FLUCT_DIM: usize = 6;

/// A linear combination of the six fluctuation operators.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluctForm(pub [Complex64; FLUCT_DIM]);

impl FluctForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Hermitian conjugate: coefficients conjugate and each
    /// annihilator/creator pair swaps slots.
    pub fn dagger(&self) -> Self {
        let mut out = [Complex64::ZERO; FLUCT_DIM];
        for m in 0..3 {
            out[2 * m] = self.0[2 * m + 1].conj();
            out[2 * m + 1] = self.0[2 * m].conj();
        }
        Self(out)
    }

    fn add_scaled(&mut self, scale: Complex64, other: &FluctForm) {
        for (slot, coeff) in self.0.iter_mut().zip(other.0.iter()) {
            *slot += scale * coeff;
        }
    }
}

/// Vacuum expectation ⟨X·Y⟩ of two fluctuation forms in the written
/// order: only the ⟨δa δa†⟩ = 1 contractions survive.
pub fn contraction(x: &FluctForm, y: &FluctForm) -> Complex64 {
    x.0[0] * y.0[1] + x.0[2] * y.0[3] + x.0[4] * y.0[5]
}

/// Vacuum expectation of an ordered product of fluctuation forms via
/// recursive pairing. Odd counts vanish; the empty product is 1.
pub fn vacuum_moment(forms: &[FluctForm]) -> Complex64 {
    let n = forms.len();
    if n == 0 {
        return Complex64::ONE;
    }
    if n % 2 == 1 {
        return Complex64::ZERO;
    }
    if n == 2 {
        return contraction(&forms[0], &forms[1]);
    }
    let mut total = Complex64::ZERO;
    for j in 1..n {
        let pair = contraction(&forms[0], &forms[j]);
        if pair == Complex64::ZERO {
            continue;
        }
        let mut rest: Vec<FluctForm> = Vec::with_capacity(n - 2);
        rest.extend_from_slice(&forms[1..j]);
        rest.extend_from_slice(&forms[j + 1..]);
        total += pair * vacuum_moment(&rest);
    }
    total
}

/// An operator of the form (complex mean) + (fluctuation form): the
/// image of an input annihilator or creator under linear evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineOp {
    pub mean: Complex64,
    pub fluct: FluctForm,
}

impl AffineOp {
    pub fn dagger(&self) -> Self {
        Self {
            mean: self.mean.conj(),
            fluct: self.fluct.dagger(),
        }
    }
}

/// Expectation of an ordered product of affine operators: the means
/// factor out of every subset and the remaining fluctuations contribute
/// their vacuum moment.
pub fn expectation_product(ops: &[AffineOp]) -> Complex64 {
    let n = ops.len();
    assert!(n <= 16, "operator products longer than 16 are not supported");
    let mut total = Complex64::ZERO;
    let mut chosen: Vec<FluctForm> = Vec::with_capacity(n);
    for mask in 0u32..(1 << n) {
        let mut coeff = Complex64::ONE;
        chosen.clear();
        for (i, op) in ops.iter().enumerate() {
            if mask & (1 << i) != 0 {
                chosen.push(op.fluct);
            } else {
                coeff *= op.mean;
            }
        }
        if coeff != Complex64::ZERO {
            total += coeff * vacuum_moment(&chosen);
        }
    }
    total
}

/// A quadratic observable Σ w·X·Y over affine operators, e.g. a photon
/// number or a Stokes parameter.
#[derive(Debug, Clone)]
pub struct QuadObservable {
    pub terms: Vec<(Complex64, AffineOp, AffineOp)>,
}

impl QuadObservable {
    pub fn new(terms: Vec<(Complex64, AffineOp, AffineOp)>) -> Self {
        Self { terms }
    }

    /// ⟨Q⟩ = Σ w (μₓμᵧ + ⟨δx δy⟩).
    pub fn mean(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(w, x, y)| w * (x.mean * y.mean + contraction(&x.fluct, &y.fluct)))
            .sum()
    }

    /// ⟨(ΔQ)²⟩ computed in centered form.
    ///
    /// Writing each term as (μₓ + δx)(μᵧ + δy), the deviation from the
    /// mean is L + Σ w(δxδy − ⟨δxδy⟩) with the linear part
    /// L = Σ w(μₓδy + μᵧδx). Odd Gaussian moments vanish, so
    /// ⟨(ΔQ)²⟩ = ⟨L²⟩ plus the connected quartic pairings. Centering
    /// first avoids the large cancellation between ⟨Q²⟩ and ⟨Q⟩² that
    /// grows as the fourth power of the coherent amplitudes.
    pub fn variance(&self) -> Complex64 {
        let mut lin = FluctForm::zero();
        for (w, x, y) in &self.terms {
            lin.add_scaled(w * x.mean, &y.fluct);
            lin.add_scaled(w * y.mean, &x.fluct);
        }
        let mut var = contraction(&lin, &lin);
        for (wt, xt, yt) in &self.terms {
            for (wu, xu, yu) in &self.terms {
                var += wt
                    * wu
                    * (contraction(&xt.fluct, &xu.fluct) * contraction(&yt.fluct, &yu.fluct)
                        + contraction(&xt.fluct, &yu.fluct) * contraction(&yt.fluct, &xu.fluct));
            }
        }
        var
    }

    /// ⟨Qₐ·Q_b⟩ in the written order, via full Wick expansion of the
    /// quartic operator products.
    pub fn product_mean(a: &QuadObservable, b: &QuadObservable) -> Complex64 {
        let mut total = Complex64::ZERO;
        for (wa, xa, ya) in &a.terms {
            for (wb, xb, yb) in &b.terms {
                total += wa * wb * expectation_product(&[*xa, *ya, *xb, *yb]);
            }
        }
        total
    }
}
