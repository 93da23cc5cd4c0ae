//! Overflow-safe scalar building blocks used by the statistical sums.
//!
//! Everything here is valid over the full argument range the thermodynamic
//! sums can produce, i.e. exponents of order ±10³ and beyond, where naive
//! `exp` would overflow or lose the answer entirely.

/// ln(1 + eˣ), finite and accurate for all finite `x`.
///
/// For large positive `x` the result is `x` plus an exponentially small
/// correction; for large negative `x` it is `eˣ` itself. The max/ln_1p
/// arrangement covers both ends without branching on magnitude.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// ln(1 − e^(−x)) for x > 0, accurate at both ends of the range.
///
/// Below ln 2 the complement `1 − e^(−x)` is computed via `expm1` so tiny
/// arguments keep full precision (result ≈ ln x); above ln 2 the direct
/// `ln_1p(−e^(−x))` form is exact and underflow-safe.
pub fn log1mexp(x: f64) -> f64 {
    debug_assert!(x > 0.0, "log1mexp requires a positive argument, got {x}");
    if x > std::f64::consts::LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}

/// ln Σ wᵢ·e^(xᵢ) with positive weights, shifted by the max exponent so the
/// sum never overflows. Returns −∞ for an empty slice.
pub fn weighted_log_sum_exp(terms: &[(f64, f64)]) -> f64 {
    let max = terms
        .iter()
        .map(|&(_, x)| x)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|&(w, x)| w * (x - max).exp()).sum();
    max + sum.ln()
}

/// Mean occupation of a fermionic mode, 1/(eˣ + 1), for x = (Ẽ − μ̃)/T.
///
/// Written as a logistic in −x so neither tail overflows: saturates to 1 for
/// x → −∞ and decays as e^(−x) for x → +∞.
pub fn fermi_occupation(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Mean occupation of a bosonic mode, 1/(eˣ − 1), for x = (Ẽ − μ̃)/T > 0.
///
/// The denominator is computed as −expm1(−x) so small x keeps precision
/// (result ≈ 1/x) and large x decays cleanly as e^(−x).
pub fn bose_occupation(x: f64) -> f64 {
    debug_assert!(x > 0.0, "bose occupation requires a positive argument, got {x}");
    (-x).exp() / (-(-x).exp_m1())
}
