//! Single-particle spectra for a particle in a d-dimensional box, with or
//! without an infinitely thin hard wall inserted at the box midpoint.
//!
//! Energies are dimensionless: Ẽ(n⃗) = (α/8)·Σᵢ mᵢ², where mᵢ = nᵢ without
//! the wall, and with the wall every odd quantum number merges up onto the
//! next even one (mᵢ = nᵢ + 1 for odd nᵢ). The merged spectrum is exactly
//! the even lattice {2,4,…}^d with multiplicity 2^d per lattice point.

use crate::error::{Error, Result};

/// Geometry of the box: dimension, level-spacing scale α, and whether the
/// mid-box wall is inserted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxConfig {
    /// Spatial dimension, restricted to 1, 2, or 3.
    pub dim: u32,
    /// Level-spacing scale; all energies and temperatures are multiples of α.
    pub alpha: f64,
    /// True when the mid-box wall is inserted (split box).
    pub barrier: bool,
}

impl BoxConfig {
    /// Validated constructor: `dim ∈ {1,2,3}`, `alpha > 0`.
    pub fn new(dim: u32, alpha: f64, barrier: bool) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::NonPositiveAlpha(alpha));
        }
        Ok(Self { dim, alpha, barrier })
    }

    /// Lowest single-particle energy: αd/8 open, αd/2 split.
    pub fn ground_energy(&self) -> f64 {
        if self.barrier {
            self.alpha * self.dim as f64 / 2.0
        } else {
            self.alpha * self.dim as f64 / 8.0
        }
    }

    /// Degeneracy of the lowest level: 1 open, 2^d split (every axis ground
    /// state is reachable from two pre-merge quantum numbers).
    pub fn ground_degeneracy(&self) -> u64 {
        if self.barrier {
            1u64 << self.dim
        } else {
            1
        }
    }
}

/// One distinct energy with its aggregated degeneracy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    /// Dimensionless energy (α units).
    pub energy: f64,
    /// Number of single-particle modes sharing this energy.
    pub degeneracy: u64,
}

/// Effective per-axis quantum number after the wall merge.
#[inline]
fn merged(n: u32, barrier: bool) -> u64 {
    if barrier {
        (n + (n & 1)) as u64
    } else {
        n as u64
    }
}

/// Energy of the mode with quantum numbers `n⃗` (all ≥ 1, length = dim).
pub fn level_energy(config: &BoxConfig, n: &[u32]) -> Result<f64> {
    if n.len() != config.dim as usize {
        return Err(Error::DimensionMismatch {
            expected: config.dim,
            got: n.len(),
        });
    }
    let mut key: u64 = 0;
    for &ni in n {
        if ni < 1 {
            return Err(Error::InvalidQuantumNumber(ni));
        }
        let m = merged(ni, config.barrier);
        key += m * m;
    }
    Ok(config.alpha * key as f64 / 8.0)
}

/// Materializes the spectrum over the lattice {1..cutoff}^d, merging equal
/// energies by their integer key Σ mᵢ² (never by floating comparison).
/// Returns levels sorted ascending by energy.
pub fn enumerate_levels(config: &BoxConfig, cutoff: u32) -> Result<Vec<Level>> {
    if cutoff < 2 {
        return Err(Error::CutoffTooSmall(cutoff));
    }
    // Per-axis squared effective quantum numbers for n = 1..=cutoff.
    let msq: Vec<u64> = (1..=cutoff).map(|n| {
        let m = merged(n, config.barrier);
        m * m
    }).collect();
    let max_axis = *msq.last().expect("cutoff >= 2 gives a non-empty axis");
    let max_key = (config.dim as u64 * max_axis) as usize;
    let mut histogram = vec![0u64; max_key + 1];
    match config.dim {
        1 => {
            for &a in &msq {
                histogram[a as usize] += 1;
            }
        }
        2 => {
            for &a in &msq {
                for &b in &msq {
                    histogram[(a + b) as usize] += 1;
                }
            }
        }
        3 => {
            for &a in &msq {
                for &b in &msq {
                    let ab = a + b;
                    for &c in &msq {
                        histogram[(ab + c) as usize] += 1;
                    }
                }
            }
        }
        d => return Err(Error::UnsupportedDimension(d)),
    }
    Ok(histogram
        .iter()
        .enumerate()
        .filter(|&(_, &count)| count > 0)
        .map(|(key, &count)| Level {
            energy: config.alpha * key as f64 / 8.0,
            degeneracy: count,
        })
        .collect())
}

/// Smallest per-axis quantum-number cutoff such that the largest omitted
/// single-mode Boltzmann weight exp(−(Ẽ(n_max+1,1,…,1) − μ)/T) falls below
/// `tail_tol`, plus a safety margin of 2.
pub fn lattice_cutoff(config: &BoxConfig, mu: f64, t: f64, tail_tol: f64) -> Result<u32> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::NonPositiveTemperature(t));
    }
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::InvalidTailTolerance(tail_tol));
    }
    let budget = mu.max(0.0) + t * (1.0 / tail_tol).ln();
    let n = (8.0 / config.alpha * budget).sqrt().ceil();
    // Never drop below the minimum enumerable lattice.
    Ok((n as u32 + 2).max(2))
}
