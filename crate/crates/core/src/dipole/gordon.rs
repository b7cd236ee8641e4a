//! Closed-form bound-bound radial integrals ⟨n l| r |n' l−1⟩ for hydrogen.
//!
//! The factorial prefactor is carried in the log domain, and the two
//! terminating hypergeometric series are accumulated together with Neumaier
//! summation, so nothing overflows up to n = 200.

use libm::lgamma;

use crate::error::{Error, Result};

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Appends the terms of weight·₂F₁(−a, −b; c; x) as (ln|term|, sign) pairs.
fn push_2f1_terms(out: &mut Vec<(f64, f64)>, a: u32, b: u32, c: f64, x: f64, ln_weight: f64, sign: f64) {
    let (mut ln_term, mut sgn) = (ln_weight, sign);
    out.push((ln_term, sgn));
    for k in 0..a.min(b) {
        let kf = k as f64;
        let ratio = (kf - a as f64) * (kf - b as f64) / ((c + kf) * (kf + 1.0)) * x;
        ln_term += ratio.abs().ln();
        sgn *= ratio.signum();
        out.push((ln_term, sgn));
    }
}

/// Hydrogen radial integral ∫ R_{n1 l1} R_{n2 l2} r³ dr in units of a0.
///
/// Requires |l1 − l2| = 1, n1 ≠ n2, and l < n for both states.
pub fn hydrogen_radial(n1: u32, l1: u32, n2: u32, l2: u32) -> Result<f64> {
    if l1 >= n1 || l2 >= n2 {
        return Err(Error::domain(format!("bound states need l < n: ({n1},{l1}), ({n2},{l2})")));
    }
    if l1.abs_diff(l2) != 1 {
        return Err(Error::Forbidden(format!("|Δl| must be 1: l={l1} -> l={l2}")));
    }
    if n1 == n2 {
        return Err(Error::domain(format!("radial element needs n1 != n2 (n={n1})")));
    }
    // (n, l) carries the larger orbital quantum number.
    let (n, l, np) = if l1 > l2 { (n1, l1, n2) } else { (n2, l2, n1) };
    let (nf, lf, npf) = (n as f64, l as f64, np as f64);

    let diff = nf - npf;
    let sum = nf + npf;
    let ln_pref = 0.5 * (lgamma(nf + lf + 1.0) + lgamma(npf + lf) - lgamma(nf - lf) - lgamma(npf - lf + 1.0))
        - 4f64.ln()
        - lgamma(2.0 * lf)
        + (lf + 1.0) * (4.0 * nf * npf).ln()
        + (sum - 2.0 * lf - 2.0) * diff.abs().ln()
        - sum * sum.ln();

    let mut sign = if (np - l) % 2 == 0 { 1.0 } else { -1.0 };
    if diff < 0.0 && (n + np - 2 * l - 2) % 2 == 1 {
        sign = -sign;
    }

    let x = -4.0 * nf * npf / (diff * diff);
    let nr = n - l - 1;
    let npr = np - l;
    let mut terms = Vec::with_capacity(2 * (npr as usize + 2));
    push_2f1_terms(&mut terms, nr, npr, 2.0 * lf, x, 0.0, 1.0);
    push_2f1_terms(&mut terms, nr + 2, npr, 2.0 * lf, x, 2.0 * (diff.abs() / sum).ln(), -1.0);
    // scale by the largest term so neither the prefactor nor the series overflows
    let ln_max = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let mut acc = CompensatedSum::default();
    for &(ln_t, sgn) in &terms {
        acc.add(sgn * (ln_t - ln_max).exp());
    }
    let series = acc.value();
    let value = if series == 0.0 {
        0.0
    } else {
        sign * series.signum() * (ln_pref + ln_max + series.abs().ln()).exp()
    };
    if !value.is_finite() {
        return Err(Error::Convergence(format!(
            "radial element ({n1},{l1})-({n2},{l2}) not finite"
        )));
    }
    Ok(value)
}
