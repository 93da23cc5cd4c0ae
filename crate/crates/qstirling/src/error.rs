//! Error type shared across the library.

use thiserror::Error;

/// Errors reported by spectrum construction, statistical mechanics,
/// cycle evaluation, oracles, and sweep drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimension outside the supported set {1, 2, 3}.
    #[error("unsupported dimension {0}; must be 1, 2, or 3")]
    UnsupportedDimension(u32),

    /// The level-spacing scale must be strictly positive.
    #[error("alpha must be strictly positive, got {0}")]
    NonPositiveAlpha(f64),

    /// Temperatures must be strictly positive.
    #[error("temperature must be strictly positive, got {0}")]
    NonPositiveTemperature(f64),

    /// Quantum numbers are 1-based; zero is not a valid mode index.
    #[error("quantum numbers must be >= 1, got {0}")]
    InvalidQuantumNumber(u32),

    /// A quantum-number vector must have exactly `dim` entries.
    #[error("expected {expected} quantum numbers, got {got}")]
    DimensionMismatch { expected: u32, got: usize },

    /// Particle count must be strictly positive.
    #[error("particle count must be >= 1, got {0}")]
    InvalidParticleCount(u64),

    /// The per-axis cutoff must be at least 1 (and at least 2 with a barrier
    /// so the lattice is non-empty after the even merge).
    #[error("cutoff {0} too small to produce a non-empty spectrum")]
    CutoffTooSmall(u32),

    /// The tail tolerance controlling spectrum truncation must be in (0, 1).
    #[error("tail tolerance must be in (0, 1), got {0}")]
    InvalidTailTolerance(f64),

    /// Bose statistics require the chemical potential strictly below the
    /// lowest single-particle level.
    #[error("Bose chemical potential {mu} must lie strictly below the ground level {ground}")]
    BoseMuDomain { mu: f64, ground: f64 },

    /// The root finder could not bracket a solution.
    #[error("failed to bracket the chemical potential for N={target} in [{lo}, {hi}]")]
    BracketFailure { target: f64, lo: f64, hi: f64 },

    /// The root finder exhausted its iteration budget.
    #[error("chemical-potential solve did not converge after {0} iterations")]
    NonConvergence(u32),

    /// Cycle evaluation requires the hot temperature at or above the cold one.
    #[error("hot temperature {th} must be >= cold temperature {tc}")]
    TemperatureOrder { th: f64, tc: f64 },

    /// Brute-force fermion enumeration is capped to keep 2^K tractable.
    #[error("brute-force enumeration supports at most {max} modes, got {got}")]
    TooManyModes { max: usize, got: usize },

    /// An operation that needs at least one level received none.
    #[error("spectrum contains no levels")]
    EmptySpectrum,

    /// Efficiency/COP are only defined on their mode's sign domain.
    #[error("{0}")]
    EfficiencyDomain(&'static str),

    /// Operation not defined for the requested species.
    #[error("{0}")]
    UnsupportedSpecies(&'static str),

    /// Sweep grids need at least two steps per axis and ordered bounds.
    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),

    /// File I/O failure while writing results or reports.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
