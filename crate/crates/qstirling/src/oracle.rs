//! Brute-force validators, deliberately independent of the analytic
//! summation routines: direct enumeration of occupation configurations for
//! the grand partition function, and finite-difference checks of the
//! internal-energy identity. The only artifact shared with the analytic
//! code is the list of mode energies.

use crate::error::{Error, Result};
use crate::spectrum::{enumerate_levels, BoxConfig, Level};
use crate::statistics::{log_grand_partition, Species};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write as _;

/// Hard limit on fermionic full enumeration: 2^14 = 16384 configurations.
pub const MAX_FERMI_ENUM_MODES: usize = 14;

/// Relative geometric-tail budget per bosonic mode.
const BOSE_TAIL_FRACTION: f64 = 1e-12;

/// A finite set of single-particle mode energies (degeneracies expanded to
/// individual entries) plus the per-mode occupation cap for bosonic
/// enumeration.
#[derive(Clone, Debug)]
pub struct TruncatedModeSet {
    pub modes: Vec<f64>,
    pub bose_cap: u32,
}

impl TruncatedModeSet {
    pub fn new(modes: Vec<f64>, bose_cap: u32) -> Self {
        Self { modes, bose_cap }
    }

    /// Expands levels into individual modes and keeps the `max_modes`
    /// lowest. The bosonic cap is left at its floor; fermionic enumeration
    /// ignores it.
    pub fn from_levels(levels: &[Level], max_modes: usize) -> Result<Self> {
        let mut modes: Vec<f64> = Vec::new();
        for level in levels {
            for _ in 0..level.degeneracy {
                modes.push(level.energy);
            }
        }
        modes.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        modes.truncate(max_modes);
        if modes.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        Ok(Self { modes, bose_cap: 8 })
    }

    /// [`TruncatedModeSet::from_levels`], then sizes the occupation cap so
    /// every mode's omitted geometric tail at (μ̃, T) is negligible.
    pub fn from_levels_for_bose(
        levels: &[Level],
        max_modes: usize,
        mu: f64,
        t: f64,
    ) -> Result<Self> {
        let mut set = Self::from_levels(levels, max_modes)?;
        set.bose_cap = bose_cap_for(&set.modes, mu, t)?;
        Ok(set)
    }
}

/// Per-mode occupation cap: with r = e^(−(Ẽ−μ̃)/T), the smallest cap with
/// r^cap ≤ tail·(1−r) — so the omitted tail is below `tail` of the mode's
/// full geometric series — floored at 8. Returns the max over modes.
pub fn bose_cap_for(modes: &[f64], mu: f64, t: f64) -> Result<u32> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveTemperature(t));
    }
    let mut cap = 8u32;
    for &e in modes {
        let x = (e - mu) / t;
        if x <= 0.0 {
            return Err(Error::BoseMuDomain { mu, ground: e });
        }
        let r = (-x).exp();
        if r > 0.0 {
            let needed = ((BOSE_TAIL_FRACTION * (1.0 - r)).ln() / r.ln()).ceil();
            if needed.is_finite() && needed > cap as f64 {
                cap = needed as u32;
            }
        }
    }
    Ok(cap)
}

/// Maximum relative geometric tail omitted by truncating every mode's
/// occupation series at `cap`: max over modes of r^(cap+1).
pub fn bose_tail_bound(set: &TruncatedModeSet, mu: f64, t: f64) -> f64 {
    set.modes
        .iter()
        .map(|&e| (-(e - mu) / t * (set.bose_cap + 1) as f64).exp())
        .fold(0.0, f64::max)
}

// Local log-sum-exp over raw exponents; intentionally not shared with the
// analytic code paths.
fn local_log_sum_exp(exponents: &[f64]) -> f64 {
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = exponents.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// ln Z by direct occupation-configuration enumeration.
///
/// Fermi: sums over all occupation vectors in {0,1}^K (K ≤ 14). Bose: sums
/// each mode's occupation series 0..=cap as an explicit finite geometric
/// sum and adds the per-mode logs.
pub fn brute_force_log_grand_partition(
    set: &TruncatedModeSet,
    mu: f64,
    t: f64,
    species: Species,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveTemperature(t));
    }
    if set.modes.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    match species {
        Species::Fermi => {
            let k = set.modes.len();
            if k > MAX_FERMI_ENUM_MODES {
                return Err(Error::TooManyModes { max: MAX_FERMI_ENUM_MODES, got: k });
            }
            let weights: Vec<f64> = set.modes.iter().map(|&e| -(e - mu) / t).collect();
            let mut exponents = Vec::with_capacity(1usize << k);
            for mask in 0u32..(1u32 << k) {
                let mut s = 0.0;
                for (bit, w) in weights.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        s += w;
                    }
                }
                exponents.push(s);
            }
            Ok(local_log_sum_exp(&exponents))
        }
        Species::Bose => {
            let mut total = 0.0;
            for &e in &set.modes {
                let x = (e - mu) / t;
                if x <= 0.0 {
                    return Err(Error::BoseMuDomain { mu, ground: e });
                }
                let r = (-x).exp();
                // Explicit finite geometric sum: 1 + r + r² + … + r^cap.
                let mut sum = 0.0;
                let mut term = 1.0;
                for _ in 0..=set.bose_cap {
                    sum += term;
                    term *= r;
                }
                total += sum.ln();
            }
            Ok(total)
        }
        Species::MaxwellBoltzmann => Err(Error::UnsupportedSpecies(
            "brute-force enumeration covers Fermi and Bose statistics only",
        )),
    }
}

/// ln Z for ≤ 3 bosonic modes by full cross-product enumeration over
/// occupation tuples — no per-mode factorization, so it independently
/// validates the factorized form.
pub fn brute_force_bose_cross_product(
    modes: &[f64],
    mu: f64,
    t: f64,
    cap: u32,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveTemperature(t));
    }
    if modes.is_empty() || modes.len() > 3 {
        return Err(Error::TooManyModes { max: 3, got: modes.len() });
    }
    let xs: Vec<f64> = modes
        .iter()
        .map(|&e| {
            let x = (e - mu) / t;
            if x <= 0.0 {
                Err(Error::BoseMuDomain { mu, ground: e })
            } else {
                Ok(x)
            }
        })
        .collect::<Result<_>>()?;
    // Every exponent is ≤ 0 (the all-empty tuple gives exactly 0), so the
    // plain sum of exponentials is already overflow-free.
    let mut sum = 0.0f64;
    let caps = |i: usize| if i < xs.len() { cap } else { 0 };
    for j0 in 0..=caps(0) {
        for j1 in 0..=caps(1) {
            for j2 in 0..=caps(2) {
                let expo = -(j0 as f64 * xs[0]
                    + j1 as f64 * xs.get(1).copied().unwrap_or(0.0)
                    + j2 as f64 * xs.get(2).copied().unwrap_or(0.0));
                sum += expo.exp();
            }
        }
    }
    Ok(sum.ln())
}

/// T²·(lnZ(T+h) − lnZ(T−h))/(2h) at fixed μ̃ — the finite-difference side
/// of the internal-energy identity.
pub fn finite_difference_internal_energy(
    levels: &[Level],
    mu: f64,
    t: f64,
    species: Species,
    h: f64,
) -> Result<f64> {
    if !(t - h > 0.0) {
        return Err(Error::NonPositiveTemperature(t - h));
    }
    let up = log_grand_partition(levels, mu, t + h, species)?;
    let down = log_grand_partition(levels, mu, t - h, species)?;
    Ok(t * t * (up - down) / (2.0 * h))
}

/// Outcome of one verification check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_name: String,
    pub max_abs_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(check_name: &str, max_abs_err: f64, tolerance: f64) -> Self {
        Self {
            check_name: check_name.to_string(),
            max_abs_err,
            tolerance,
            pass: max_abs_err <= tolerance,
        }
    }
}

/// Full verification report; `all_pass` is the conjunction of the checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
}

impl VerificationReport {
    fn from_checks(checks: Vec<CheckResult>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Self { checks, all_pass }
    }

    /// Plain-text rendering, one line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}: max deviation {:.3e} (tolerance {:.3e})\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.check_name,
                c.max_abs_err,
                c.tolerance
            ));
        }
        out.push_str(&format!(
            "{}: {} checks, {} failed\n",
            if self.all_pass { "OK" } else { "FAILED" },
            self.checks.len(),
            self.checks.iter().filter(|c| !c.pass).count()
        ));
        out
    }
}

/// Writes the machine-readable JSON summary.
pub fn write_report_json(report: &VerificationReport, path: &std::path::Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    file.write_all(json.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Seed for the randomized finite-difference fixtures: fixed so the suite
/// is deterministic run to run.
const FD_FIXTURE_SEED: u64 = 0x51A7_E5;

fn all_configs(alpha: f64) -> Vec<BoxConfig> {
    let mut out = Vec::new();
    for dim in 1..=3 {
        for barrier in [false, true] {
            out.push(BoxConfig::new(dim, alpha, barrier).expect("valid config"));
        }
    }
    out
}

/// Runs every oracle comparison plus the spectrum degeneracy checks.
pub fn verify_suite() -> Result<VerificationReport> {
    let mut checks = Vec::new();

    // Split-spectrum multiset identity: the merged spectrum must equal the
    // even sublattice carrying 2^d modes per lattice point.
    {
        let mut worst = 0.0f64;
        for dim in 1..=3u32 {
            let split = BoxConfig::new(dim, 1.0, true)?;
            let cutoff = 8;
            let actual = enumerate_levels(&split, cutoff)?;
            let reference = even_lattice_reference(dim, 1.0, cutoff);
            worst = worst.max(multiset_deviation(&actual, &reference));
        }
        checks.push(CheckResult::new("split_spectrum_multiset", worst, 1e-12));
    }

    // Ground-level bookkeeping of the split box.
    {
        let mut worst = 0.0f64;
        for dim in 1..=3u32 {
            let split = BoxConfig::new(dim, 1.0, true)?;
            let levels = enumerate_levels(&split, 6)?;
            worst = worst.max((levels[0].energy - dim as f64 / 2.0).abs());
            worst = worst.max((levels[0].degeneracy as f64 - (1u64 << dim) as f64).abs());
        }
        checks.push(CheckResult::new("split_ground_level", worst, 1e-12));
    }

    // Fermi single mode at Ẽ = μ̃ enumerates to exactly ln 2.
    {
        let set = TruncatedModeSet::new(vec![1.0], 8);
        let v = brute_force_log_grand_partition(&set, 1.0, 0.7, Species::Fermi)?;
        checks.push(CheckResult::new(
            "fermi_single_mode_ln2",
            (v - std::f64::consts::LN_2).abs(),
            1e-14,
        ));
    }

    // Fermi product formula vs bitmask enumeration across the fixture grid:
    // 6 box configurations × 3 (μ̃, T) variants.
    {
        let mut worst = 0.0f64;
        for config in all_configs(1.0) {
            let levels = enumerate_levels(&config, 6)?;
            let ground = levels[0].energy;
            let set = TruncatedModeSet::from_levels(&levels, 12)?;
            for (dmu, t) in [(0.5, 0.3), (2.0, 0.7), (5.0, 1.5)] {
                let mu = ground + dmu;
                let analytic = log_grand_partition(&as_unit_levels(&set.modes), mu, t, Species::Fermi)?;
                let enumerated = brute_force_log_grand_partition(&set, mu, t, Species::Fermi)?;
                worst = worst.max((analytic - enumerated).abs());
            }
        }
        checks.push(CheckResult::new("fermi_product_vs_enumeration", worst, 1e-9));
    }

    // Pinned fermionic case: 10 modes of the open 1-D box, μ̃ = 5, T = 0.7.
    {
        let open = BoxConfig::new(1, 1.0, false)?;
        let levels = enumerate_levels(&open, 10)?;
        let set = TruncatedModeSet::from_levels(&levels, 10)?;
        let analytic = log_grand_partition(&as_unit_levels(&set.modes), 5.0, 0.7, Species::Fermi)?;
        let enumerated = brute_force_log_grand_partition(&set, 5.0, 0.7, Species::Fermi)?;
        checks.push(CheckResult::new(
            "fermi_k10_pinned",
            (analytic - enumerated).abs(),
            1e-10,
        ));
    }

    // Bose product formula vs per-mode geometric expansion, with the
    // truncation bound computed and asserted rather than assumed.
    {
        let mut worst = 0.0f64;
        let mut worst_bound = 0.0f64;
        for config in all_configs(1.0) {
            let levels = enumerate_levels(&config, 6)?;
            let ground = levels[0].energy;
            for (below, t) in [(0.25, 0.3), (0.6, 0.8), (1.0, 2.0)] {
                let mu = ground - below;
                let set = TruncatedModeSet::from_levels_for_bose(&levels, 12, mu, t)?;
                let analytic = log_grand_partition(&as_unit_levels(&set.modes), mu, t, Species::Bose)?;
                let expanded = brute_force_log_grand_partition(&set, mu, t, Species::Bose)?;
                worst = worst.max((analytic - expanded).abs());
                worst_bound = worst_bound.max(bose_tail_bound(&set, mu, t));
            }
        }
        checks.push(CheckResult::new("bose_product_vs_expansion", worst, 1e-9));
        checks.push(CheckResult::new("bose_tail_bound", worst_bound, 5e-10));
    }

    // Unfactorized cross-product enumerations against the closed form.
    {
        let modes2 = [0.5, 1.125];
        let mu = 0.2;
        let t = 0.3;
        let closed = log_grand_partition(&as_unit_levels(&modes2), mu, t, Species::Bose)?;
        let cross = brute_force_bose_cross_product(&modes2, mu, t, 60)?;
        checks.push(CheckResult::new(
            "bose_cross_product_2mode",
            (closed - cross).abs(),
            1e-10,
        ));

        let modes3 = [0.5, 1.125, 2.0];
        let mu3 = 0.1;
        let t3 = 0.4;
        let closed3 = log_grand_partition(&as_unit_levels(&modes3), mu3, t3, Species::Bose)?;
        let cross3 = brute_force_bose_cross_product(&modes3, mu3, t3, 90)?;
        checks.push(CheckResult::new(
            "bose_cross_product_3mode",
            (closed3 - cross3).abs(),
            1e-10,
        ));
    }

    // Finite-difference internal-energy identity over randomized fixtures:
    // 20 seeded (μ̃, T) draws per species per dimension, 120 in total.
    {
        let (worst, _count) = fd_identity_sweep()?;
        checks.push(CheckResult::new("fd_internal_energy_rel", worst, 1e-6));
    }

    // Expected-error control: evaluating Bose sums at μ̃ on the ground level
    // must error, never return a number.
    {
        let open = BoxConfig::new(1, 1.0, false)?;
        let levels = enumerate_levels(&open, 10)?;
        let guarded = log_grand_partition(&levels, levels[0].energy, 0.5, Species::Bose);
        let err = if matches!(guarded, Err(Error::BoseMuDomain { .. })) { 0.0 } else { 1.0 };
        checks.push(CheckResult::new("bose_mu_domain_guard", err, 0.0));
    }

    Ok(VerificationReport::from_checks(checks))
}

/// Max relative finite-difference deviation over the seeded fixture grid,
/// plus the fixture count. Exposed so tests can assert the exact budget.
pub fn fd_identity_sweep() -> Result<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(FD_FIXTURE_SEED);
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for species in [Species::Fermi, Species::Bose] {
        for dim in 1..=3u32 {
            for draw in 0..20 {
                // Alternate box configurations so both spectra are covered.
                let barrier = draw % 2 == 1;
                let config = BoxConfig::new(dim, 1.0, barrier)?;
                let t = (rng.gen_range(0.05f64.ln()..=2.0f64.ln())).exp();
                let levels = enumerate_levels(&config, 40)?;
                let ground = levels[0].energy;
                let mu = match species {
                    Species::Fermi => ground + rng.gen_range(0.0..=15.0),
                    _ => ground - (rng.gen_range(0.05f64.ln()..=2.0f64.ln())).exp(),
                };
                let h = 1e-5 * t;
                let analytic = crate::statistics::internal_energy(&levels, mu, t, species)?;
                let fd = finite_difference_internal_energy(&levels, mu, t, species, h)?;
                let denom = analytic.abs().max(fd.abs()).max(f64::MIN_POSITIVE);
                worst = worst.max((analytic - fd).abs() / denom);
                count += 1;
            }
        }
    }
    Ok((worst, count))
}

/// Wraps raw mode energies as unit-degeneracy levels for the analytic sums.
pub fn as_unit_levels(modes: &[f64]) -> Vec<Level> {
    modes
        .iter()
        .map(|&energy| Level { energy, degeneracy: 1 })
        .collect()
}

/// Reference split spectrum built directly from the even sublattice.
pub fn even_lattice_reference(dim: u32, alpha: f64, cutoff: u32) -> Vec<Level> {
    use std::collections::BTreeMap;
    let evens: Vec<u64> = (1..=(cutoff / 2) as u64).map(|k| 2 * k).collect();
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mult = 1u64 << dim;
    match dim {
        1 => {
            for &a in &evens {
                *hist.entry(a * a).or_insert(0) += mult;
            }
        }
        2 => {
            for &a in &evens {
                for &b in &evens {
                    *hist.entry(a * a + b * b).or_insert(0) += mult;
                }
            }
        }
        _ => {
            for &a in &evens {
                for &b in &evens {
                    for &c in &evens {
                        *hist.entry(a * a + b * b + c * c).or_insert(0) += mult;
                    }
                }
            }
        }
    }
    hist.iter()
        .map(|(&key, &degeneracy)| Level { energy: alpha * key as f64 / 8.0, degeneracy })
        .collect()
}

/// Deviation between two level lists as multisets: 0 when identical,
/// otherwise the largest energy/degeneracy mismatch (length mismatches
/// count as 1 per missing level).
pub fn multiset_deviation(a: &[Level], b: &[Level]) -> f64 {
    let mut dev = (a.len() as f64 - b.len() as f64).abs();
    for (la, lb) in a.iter().zip(b.iter()) {
        dev = dev.max((la.energy - lb.energy).abs());
        dev = dev.max((la.degeneracy as f64 - lb.degeneracy as f64).abs());
    }
    dev
}
