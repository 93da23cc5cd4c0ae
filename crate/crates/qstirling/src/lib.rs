//! Numerical toolkit for quantum Stirling cycles of ideal gases in
//! d-dimensional box potentials (d = 1, 2, 3) with an insertable infinite
//! mid-plane barrier.
//!
//! The crate is organized in layers:
//!
//! - [`spectrum`] — single-particle energy levels of the open and split
//!   box, with degeneracy merging and truncation-cutoff selection;
//! - [`statistics`] — grand-canonical bookkeeping for Fermi–Dirac,
//!   Bose–Einstein, and Maxwell–Boltzmann gases: chemical potentials
//!   (closed-form and exactly solved), log partition functions, internal
//!   energies, and mean particle numbers, all in numerically stable form;
//! - [`cycle`] — the four-stroke Stirling cycle built from two isothermal
//!   barrier strokes and two isochoric thermalizations: work, heats,
//!   operating-mode classification, and efficiencies with Carnot bounds;
//! - [`sweep`] — deterministic, parallel grid drivers producing phase
//!   maps, ζ/ω temperature curves, and particle-number scans, with CSV
//!   and JSON emitters;
//! - [`oracle`] — slow, independent brute-force evaluators (explicit
//!   occupation enumeration and term-by-term series) plus a
//!   self-verification suite used to cross-check the fast paths;
//! - [`stable`] — scalar numerics shared by everything above
//!   (softplus, log1mexp, weighted log-sum-exp, stable occupations).
//!
//! Energies are expressed in units of the box scale α = ħ²π²/(2mL²) via
//! Ẽ = E/α, and temperatures absorb Boltzmann's constant (k_B = 1).
//! Sign conventions: W > 0 means net work is done *on* the working gas
//! over one cycle, and Qh, Qc > 0 mean heat flows *into* the gas from the
//! hot and cold baths respectively, so W + Qh + Qc = 0 exactly.

pub mod cycle;
pub mod error;
pub mod oracle;
pub mod spectrum;
pub mod stable;
pub mod statistics;
pub mod sweep;

pub use cycle::{
    carnot_limits, classify_mode, cop, engine_efficiency, log_relative_partition, omega,
    omega_slope, relative_partition, run_cycle, CycleResult, Mode, StirlingMachine,
    DEFAULT_MODE_TOL,
};
pub use error::{Error, Result};
pub use spectrum::{enumerate_levels, lattice_cutoff, level_energy, BoxConfig, Level};
pub use statistics::{
    bose_chemical_potential, chemical_potential, chemical_potential_with, fermi_energy,
    internal_energy, log_grand_partition, mean_particle_number, solve_mu_exact, thermo_point,
    GasSpec, MuPolicy, Species, ThermoPoint, DEFAULT_TAIL_TOL,
};
pub use sweep::{
    nsweep, run_sweep, write_json, write_nsweep_csv, write_sweep_csv, write_zeta_csv, zeta_curve,
    NsweepRow, OutputFormat, Spacing, SweepRow, SweepSpec, ZetaRow, NSWEEP_CSV_HEADER,
    SWEEP_CSV_HEADER, ZETA_CSV_HEADER,
};
