//! Stirling-cycle observables: relative partition functions ζ(T), the
//! work-deciding function ω(T) = T·ln ζ(T), work and heats over a full
//! cycle, operating-mode classification, and efficiencies.
//!
//! Sign conventions: W > 0 means work is done ON the system; Qh and Qc are
//! heats INTO the system from the hot and cold baths.

use crate::error::{Error, Result};
use crate::spectrum::{enumerate_levels, lattice_cutoff, BoxConfig, Level};
use crate::stable::log1mexp;
use crate::statistics::{
    bose_chemical_potential, fermi_energy, internal_energy, log_grand_partition, solve_mu_exact,
    GasSpec, MuPolicy, Species, DEFAULT_TAIL_TOL,
};
use serde::{Deserialize, Serialize};

/// Default relative tolerance for mode classification.
pub const DEFAULT_MODE_TOL: f64 = 1e-12;

/// Operating mode of one cycle, by the signs of (W, Qh, Qc).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Qh > 0, Qc < 0, W < 0: heat flows hot→cold, work is extracted.
    Engine,
    /// Qh < 0, Qc > 0, W > 0: work pumps heat cold→hot.
    Refrigerator,
    /// Qh > 0, Qc < 0, W > 0: work pushes extra heat hot→cold.
    Accelerator,
    /// Qh < 0, Qc < 0, W > 0: work dissipates into both baths.
    Heater,
    /// Some magnitude sits inside the tolerance band, or the sign pattern
    /// matches no named row.
    Indeterminate,
}

impl Mode {
    /// Token used in CSV rows and CLI output.
    pub fn token(&self) -> &'static str {
        match self {
            Mode::Engine => "Engine",
            Mode::Refrigerator => "Refrigerator",
            Mode::Accelerator => "Accelerator",
            Mode::Heater => "Heater",
            Mode::Indeterminate => "Indeterminate",
        }
    }
}

/// Work, heats, mode, and efficiencies for one cycle.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CycleResult {
    /// Work done ON the system over the full cycle (α units).
    pub w: f64,
    /// Heat into the system from the hot bath.
    pub qh: f64,
    /// Heat into the system from the cold bath.
    pub qc: f64,
    pub mode: Mode,
    /// η_E = −W/Qh for an Engine, η_R = Qc/W for a Refrigerator, absent
    /// otherwise.
    pub eta: Option<f64>,
    /// `eta` divided by its Carnot counterpart, absent with `eta`.
    pub eta_scaled: Option<f64>,
}

/// Cached per-temperature quantities: everything a sweep needs to assemble
/// any cycle that uses this temperature as its hot or cold bath.
#[derive(Clone, Copy, Debug)]
pub struct CyclePoint {
    pub temperature: f64,
    /// ln ζ(T).
    pub log_zeta: f64,
    /// ω(T) = T·ln ζ(T).
    pub omega: f64,
    /// Internal energy of the split box at this temperature (its own μ̃′).
    pub u_split: f64,
    /// Internal energy of the open box at this temperature (its own μ̃).
    pub u_open: f64,
}

/// A gas in a box of fixed dimension and α, evaluated at chosen
/// temperatures with a fixed truncation tolerance.
#[derive(Clone, Copy, Debug)]
pub struct StirlingMachine {
    spec: GasSpec,
    open: BoxConfig,
    split: BoxConfig,
    tail_tol: f64,
}

impl StirlingMachine {
    pub fn new(spec: GasSpec, dim: u32, alpha: f64, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidTailTolerance(tail_tol));
        }
        Ok(Self {
            spec,
            open: BoxConfig::new(dim, alpha, false)?,
            split: BoxConfig::new(dim, alpha, true)?,
            tail_tol,
        })
    }

    pub fn with_default_tail(spec: GasSpec, dim: u32, alpha: f64) -> Result<Self> {
        Self::new(spec, dim, alpha, DEFAULT_TAIL_TOL)
    }

    pub fn spec(&self) -> &GasSpec {
        &self.spec
    }

    pub fn dim(&self) -> u32 {
        self.open.dim
    }

    pub fn alpha(&self) -> f64 {
        self.open.alpha
    }

    /// Spectrum and chemical potential for one box configuration at T.
    fn config_state(&self, config: &BoxConfig, t: f64) -> Result<(Vec<Level>, f64)> {
        match self.spec.species {
            Species::MaxwellBoltzmann => {
                // Fugacity factors out of every Boltzmann sum, so the
                // truncation budget needs no μ̃ headroom.
                let cutoff = lattice_cutoff(config, 0.0, t, self.tail_tol)?;
                let levels = enumerate_levels(config, cutoff)?;
                let ln_z1 = log_grand_partition(&levels, 0.0, t, self.spec.species)?;
                let mu = t * ((self.spec.particles as f64).ln() - ln_z1);
                match self.spec.mu_policy {
                    // The classical relation N = e^(μ̃/T)·Z₁ is already the
                    // exact inversion; both policies coincide.
                    MuPolicy::PaperApprox | MuPolicy::ExactSolve => Ok((levels, mu)),
                }
            }
            Species::Fermi | Species::Bose => {
                let mu_closed = match self.spec.species {
                    Species::Fermi => {
                        fermi_energy(config.dim, self.spec.particles, config.alpha)?
                    }
                    _ => bose_chemical_potential(config, self.spec.particles, t)?,
                };
                let cutoff = lattice_cutoff(config, mu_closed, t, self.tail_tol)?;
                let levels = enumerate_levels(config, cutoff)?;
                let mu = match self.spec.mu_policy {
                    MuPolicy::PaperApprox => mu_closed,
                    MuPolicy::ExactSolve => {
                        solve_mu_exact(&levels, self.spec.particles, t, self.spec.species)?
                    }
                };
                Ok((levels, mu))
            }
        }
    }

    /// ln ζ(T) = ln of the split/open partition-function ratio.
    ///
    /// Fermions and d ≥ 2 bosons use the exact log difference of the two
    /// grand partition functions. One-dimensional bosons use the paired
    /// per-level product — the n-th open odd level against a single copy of
    /// the n-th split even level — which is the form whose sign structure
    /// the phase diagrams require. Maxwell–Boltzmann uses the
    /// single-particle ratio, where fugacity cancels.
    pub fn log_relative_partition(&self, t: f64) -> Result<f64> {
        let (open_levels, mu_open) = self.config_state(&self.open, t)?;
        let (split_levels, mu_split) = self.config_state(&self.split, t)?;
        match (self.spec.species, self.open.dim) {
            (Species::Bose, 1) => {
                let alpha = self.open.alpha;
                let pairs = lattice_cutoff(&self.open, mu_open.max(mu_split), t, self.tail_tol)?;
                let mut sum = 0.0;
                for n in 1..=pairs as u64 {
                    let e_odd = alpha * ((2 * n - 1) * (2 * n - 1)) as f64 / 8.0;
                    let e_even = alpha * ((2 * n) * (2 * n)) as f64 / 8.0;
                    sum += log1mexp((e_odd - mu_open) / t) - log1mexp((e_even - mu_split) / t);
                }
                Ok(sum)
            }
            _ => {
                let ln_z_split =
                    log_grand_partition(&split_levels, mu_split, t, self.spec.species)?;
                let ln_z_open = log_grand_partition(&open_levels, mu_open, t, self.spec.species)?;
                Ok(ln_z_split - ln_z_open)
            }
        }
    }

    /// ζ(T) = exp(ln ζ); may underflow to 0 for strongly negative ln ζ.
    pub fn relative_partition(&self, t: f64) -> Result<f64> {
        Ok(self.log_relative_partition(t)?.exp())
    }

    /// ω(T) = T·ln ζ(T), always computed from the log-domain value.
    pub fn omega(&self, t: f64) -> Result<f64> {
        Ok(t * self.log_relative_partition(t)?)
    }

    /// Central difference (ω(T+h) − ω(T−h))/(2h); h defaults to 1e−4·T.
    pub fn omega_slope(&self, t: f64, h: Option<f64>) -> Result<f64> {
        let h = h.unwrap_or(1e-4 * t);
        if !(t - h > 0.0) {
            return Err(Error::NonPositiveTemperature(t - h));
        }
        Ok((self.omega(t + h)? - self.omega(t - h)?) / (2.0 * h))
    }

    /// All per-temperature quantities needed to assemble cycles.
    pub fn point(&self, t: f64) -> Result<CyclePoint> {
        let (open_levels, mu_open) = self.config_state(&self.open, t)?;
        let (split_levels, mu_split) = self.config_state(&self.split, t)?;
        let log_zeta = self.log_relative_partition(t)?;
        Ok(CyclePoint {
            temperature: t,
            log_zeta,
            omega: t * log_zeta,
            u_split: internal_energy(&split_levels, mu_split, t, self.spec.species)?,
            u_open: internal_energy(&open_levels, mu_open, t, self.spec.species)?,
        })
    }

    /// Full cycle between a hot bath at `th` and a cold bath at `tc` ≤ `th`.
    pub fn run(&self, th: f64, tc: f64) -> Result<CycleResult> {
        if !(th > 0.0) || !th.is_finite() {
            return Err(Error::NonPositiveTemperature(th));
        }
        if !(tc > 0.0) || !tc.is_finite() {
            return Err(Error::NonPositiveTemperature(tc));
        }
        if th < tc {
            return Err(Error::TemperatureOrder { th, tc });
        }
        let hot = self.point(th)?;
        let cold = self.point(tc)?;
        Ok(assemble_cycle(&hot, &cold))
    }
}

/// Builds the cycle observables from the two cached endpoints.
///
/// a = ω(Th), b = ω(Tc), U_B = split-box energy at Th, U_D = open-box energy
/// at Tc: W = −(a − b), Qh = a + U_B − U_D, Qc = −b − U_B + U_D, so the
/// first law W + Qh + Qc = 0 holds to floating-point rounding by
/// construction.
pub fn assemble_cycle(hot: &CyclePoint, cold: &CyclePoint) -> CycleResult {
    let a = hot.omega;
    let b = cold.omega;
    let u_b = hot.u_split;
    let u_d = cold.u_open;
    let w = -(a - b);
    let qh = a + u_b - u_d;
    let qc = -b - u_b + u_d;
    let mode = classify_mode(w, qh, qc, DEFAULT_MODE_TOL);
    let (eta, eta_scaled) = match mode {
        Mode::Engine => {
            let eta = -w / qh;
            let carnot = 1.0 - cold.temperature / hot.temperature;
            (Some(eta), Some(eta / carnot))
        }
        Mode::Refrigerator => {
            let eta = qc / w;
            let carnot = cold.temperature / (hot.temperature - cold.temperature);
            (Some(eta), Some(eta / carnot))
        }
        _ => (None, None),
    };
    CycleResult { w, qh, qc, mode, eta, eta_scaled }
}

/// ζ(T) through a default-tolerance machine.
pub fn relative_partition(spec: &GasSpec, dim: u32, alpha: f64, t: f64) -> Result<f64> {
    StirlingMachine::with_default_tail(*spec, dim, alpha)?.relative_partition(t)
}

/// ln ζ(T) through a default-tolerance machine.
pub fn log_relative_partition(spec: &GasSpec, dim: u32, alpha: f64, t: f64) -> Result<f64> {
    StirlingMachine::with_default_tail(*spec, dim, alpha)?.log_relative_partition(t)
}

/// ω(T) through a default-tolerance machine.
pub fn omega(spec: &GasSpec, dim: u32, alpha: f64, t: f64) -> Result<f64> {
    StirlingMachine::with_default_tail(*spec, dim, alpha)?.omega(t)
}

/// dω/dT by central difference; `h` defaults to 1e−4·T.
pub fn omega_slope(spec: &GasSpec, dim: u32, alpha: f64, t: f64, h: Option<f64>) -> Result<f64> {
    StirlingMachine::with_default_tail(*spec, dim, alpha)?.omega_slope(t, h)
}

/// One full cycle through a default-tolerance machine.
pub fn run_cycle(spec: &GasSpec, dim: u32, alpha: f64, th: f64, tc: f64) -> Result<CycleResult> {
    StirlingMachine::with_default_tail(*spec, dim, alpha)?.run(th, tc)
}

/// Classifies the sign triple (W, Qh, Qc), with any magnitude below
/// tol·max(1, |W|, |Qh|, |Qc|) mapping to Indeterminate.
pub fn classify_mode(w: f64, qh: f64, qc: f64, tol: f64) -> Mode {
    let scale = 1f64.max(w.abs()).max(qh.abs()).max(qc.abs());
    let band = tol * scale;
    if w.abs() < band || qh.abs() < band || qc.abs() < band {
        return Mode::Indeterminate;
    }
    match (w > 0.0, qh > 0.0, qc > 0.0) {
        (false, true, false) => Mode::Engine,
        (true, false, true) => Mode::Refrigerator,
        (true, true, false) => Mode::Accelerator,
        (true, false, false) => Mode::Heater,
        _ => Mode::Indeterminate,
    }
}

/// η_E = −W/Qh; defined only when the hot bath supplies heat (Qh > 0).
pub fn engine_efficiency(w: f64, qh: f64) -> Result<f64> {
    if !(qh > 0.0) {
        return Err(Error::EfficiencyDomain("engine efficiency requires Qh > 0"));
    }
    Ok(-w / qh)
}

/// η_R = Qc/W; defined only when net work is done on the system (W > 0).
pub fn cop(w: f64, qc: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::EfficiencyDomain("coefficient of performance requires W > 0"));
    }
    Ok(qc / w)
}

/// Carnot bounds (η_E^max, η_R^max) = (1 − Tc/Th, Tc/(Th − Tc)).
pub fn carnot_limits(th: f64, tc: f64) -> Result<(f64, f64)> {
    if !(tc > 0.0) || !tc.is_finite() {
        return Err(Error::NonPositiveTemperature(tc));
    }
    if !(th > tc) {
        return Err(Error::TemperatureOrder { th, tc });
    }
    Ok((1.0 - tc / th, tc / (th - tc)))
}
