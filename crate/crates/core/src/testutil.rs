//! Shared helpers for unit tests.

/// ∫_a^b f over `panels` equal sub-intervals, each done with double-exponential
/// quadrature.
pub(crate) fn panel_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            quadrature::double_exponential::integrate(&f, lo, lo + h, 1e-16).integral
        })
        .sum()
}
