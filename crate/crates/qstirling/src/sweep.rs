//! Grid drivers and emitters: (Th, Tc) phase-map sweeps, ζ/ω temperature
//! curves, and particle-number efficiency scans, with CSV and JSON output.
//!
//! Each distinct temperature is evaluated once (ω, split-box energy,
//! open-box energy) and grid points are assembled from the cached
//! endpoints, so an S×S sweep costs O(S) thermodynamic evaluations.
//! Evaluation is parallel; emission order is fixed, so identical inputs
//! produce byte-identical files.

use crate::cycle::{assemble_cycle, CyclePoint, Mode, StirlingMachine};
use crate::error::{Error, Result};
use crate::statistics::{GasSpec, MuPolicy, Species, DEFAULT_TAIL_TOL};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Write;

/// Output format tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Temperature-grid spacing for curve commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl std::str::FromStr for Spacing {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lin" | "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(format!("unknown spacing '{other}' (expected lin or log)")),
        }
    }
}

fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_TOL
}

fn default_mu_policy() -> MuPolicy {
    MuPolicy::PaperApprox
}

/// Full description of a (Th, Tc) phase-map sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    pub species: Species,
    pub dim: u32,
    pub particles: u64,
    pub alpha: f64,
    pub th_min: f64,
    pub th_max: f64,
    pub th_steps: u32,
    pub tc_min: f64,
    pub tc_max: f64,
    pub tc_steps: u32,
    #[serde(default = "default_mu_policy")]
    pub mu_policy: MuPolicy,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default)]
    pub format: OutputFormat,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        validate_axis(self.th_min, self.th_max, self.th_steps)?;
        validate_axis(self.tc_min, self.tc_max, self.tc_steps)?;
        Ok(())
    }
}

fn validate_axis(min: f64, max: f64, steps: u32) -> Result<()> {
    if steps < 2 {
        return Err(Error::InvalidGrid(format!("steps must be >= 2, got {steps}")));
    }
    if !(min > 0.0) || !(max > min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need 0 < min < max, got min={min}, max={max}"
        )));
    }
    Ok(())
}

fn linear_axis(min: f64, max: f64, steps: u32) -> Vec<f64> {
    let n = steps as usize;
    (0..n)
        .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
        .collect()
}

fn log_axis(min: f64, max: f64, steps: u32) -> Vec<f64> {
    linear_axis(min.ln(), max.ln(), steps)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// One grid point of a phase-map sweep.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub species: Species,
    #[serde(rename = "d")]
    pub dim: u32,
    #[serde(rename = "N")]
    pub particles: u64,
    #[serde(rename = "Th")]
    pub th: f64,
    #[serde(rename = "Tc")]
    pub tc: f64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "Qh")]
    pub qh: f64,
    #[serde(rename = "Qc")]
    pub qc: f64,
    pub mode: Mode,
    pub eta: Option<f64>,
    pub eta_scaled: Option<f64>,
}

/// Evaluates every cached endpoint in parallel, preserving input order.
fn evaluate_points(machine: &StirlingMachine, temps: &[f64]) -> Result<Vec<CyclePoint>> {
    temps
        .par_iter()
        .map(|&t| machine.point(t))
        .collect::<Result<Vec<_>>>()
}

/// Runs the sweep: one row per admissible grid point (Tc ≤ Th), ordered
/// Th-major ascending then Tc ascending.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let gas = GasSpec::new(spec.species, spec.particles, spec.mu_policy)?;
    let machine = StirlingMachine::new(gas, spec.dim, spec.alpha, spec.tail_tol)?;

    let th_axis = linear_axis(spec.th_min, spec.th_max, spec.th_steps);
    let tc_axis = linear_axis(spec.tc_min, spec.tc_max, spec.tc_steps);

    // Deduplicate shared axis values so each temperature is computed once.
    let mut temps: Vec<f64> = th_axis.iter().chain(tc_axis.iter()).copied().collect();
    temps.sort_by(f64::total_cmp);
    temps.dedup();
    let points = evaluate_points(&machine, &temps)?;
    let index: HashMap<u64, usize> = temps
        .iter()
        .enumerate()
        .map(|(i, t)| (t.to_bits(), i))
        .collect();

    let mut rows = Vec::new();
    for &th in &th_axis {
        let hot = &points[index[&th.to_bits()]];
        for &tc in &tc_axis {
            if tc > th {
                continue;
            }
            let cold = &points[index[&tc.to_bits()]];
            let result = assemble_cycle(hot, cold);
            rows.push(SweepRow {
                species: spec.species,
                dim: spec.dim,
                particles: spec.particles,
                th,
                tc,
                w: result.w,
                qh: result.qh,
                qc: result.qc,
                mode: result.mode,
                eta: result.eta,
                eta_scaled: result.eta_scaled,
            });
        }
    }
    Ok(rows)
}

/// One point of a ζ/ω temperature curve.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ZetaRow {
    #[serde(rename = "T")]
    pub t: f64,
    /// ζ(T) = exp(ln ζ); underflows to 0 where ln ζ is very negative.
    pub zeta: f64,
    pub ln_zeta: f64,
    pub omega: f64,
    #[serde(rename = "domega_dT")]
    pub domega_dt: f64,
}

/// ζ, ln ζ, ω, and dω/dT on a temperature grid.
#[allow(clippy::too_many_arguments)]
pub fn zeta_curve(
    spec: &GasSpec,
    dim: u32,
    alpha: f64,
    t_min: f64,
    t_max: f64,
    points: u32,
    spacing: Spacing,
    tail_tol: f64,
) -> Result<Vec<ZetaRow>> {
    validate_axis(t_min, t_max, points)?;
    let machine = StirlingMachine::new(*spec, dim, alpha, tail_tol)?;
    let axis = match spacing {
        Spacing::Linear => linear_axis(t_min, t_max, points),
        Spacing::Log => log_axis(t_min, t_max, points),
    };
    axis.par_iter()
        .map(|&t| {
            let ln_zeta = machine.log_relative_partition(t)?;
            Ok(ZetaRow {
                t,
                zeta: ln_zeta.exp(),
                ln_zeta,
                omega: t * ln_zeta,
                domega_dt: machine.omega_slope(t, None)?,
            })
        })
        .collect()
}

/// One point of a particle-number efficiency scan.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NsweepRow {
    #[serde(rename = "N")]
    pub particles: u64,
    #[serde(rename = "Th")]
    pub th: f64,
    /// Efficiency over its Carnot bound; 0 where no efficiency is defined
    /// (this emitter's plotting convention).
    pub eta_scaled: f64,
}

/// Scaled-efficiency scan over particle numbers and hot-bath temperatures
/// at a fixed Tc/Th ratio.
#[allow(clippy::too_many_arguments)]
pub fn nsweep(
    species: Species,
    dim: u32,
    alpha: f64,
    mu_policy: MuPolicy,
    ratio: f64,
    th_min: f64,
    th_max: f64,
    th_steps: u32,
    n_list: &[u64],
    tail_tol: f64,
) -> Result<Vec<NsweepRow>> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidGrid(format!(
            "tc/th ratio must lie in (0, 1), got {ratio}"
        )));
    }
    if n_list.is_empty() {
        return Err(Error::InvalidGrid("particle list must not be empty".into()));
    }
    validate_axis(th_min, th_max, th_steps)?;
    let th_axis = linear_axis(th_min, th_max, th_steps);
    let tasks: Vec<(u64, f64)> = n_list
        .iter()
        .flat_map(|&n| th_axis.iter().map(move |&th| (n, th)))
        .collect();
    tasks
        .par_iter()
        .map(|&(n, th)| {
            let gas = GasSpec::new(species, n, mu_policy)?;
            let machine = StirlingMachine::new(gas, dim, alpha, tail_tol)?;
            let result = machine.run(th, ratio * th)?;
            Ok(NsweepRow {
                particles: n,
                th,
                eta_scaled: result.eta_scaled.unwrap_or(0.0),
            })
        })
        .collect()
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Fixed, versioned sweep CSV schema.
pub const SWEEP_CSV_HEADER: &str = "species,d,N,Th,Tc,W,Qh,Qc,mode,eta,eta_scaled";

/// Writes sweep rows as CSV (UTF-8, LF, '.' decimals, 17 significant
/// digits). No field can contain a comma or quote, so no quoting is needed.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> Result<()> {
    out.write_all(SWEEP_CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in rows {
        let line = format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.species.token(),
            r.dim,
            r.particles,
            fmt_float(r.th),
            fmt_float(r.tc),
            fmt_float(r.w),
            fmt_float(r.qh),
            fmt_float(r.qc),
            r.mode.token(),
            fmt_opt(r.eta),
            fmt_opt(r.eta_scaled),
        );
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// ζ-curve CSV schema.
pub const ZETA_CSV_HEADER: &str = "T,zeta,ln_zeta,omega,domega_dT";

pub fn write_zeta_csv<W: Write>(rows: &[ZetaRow], out: &mut W) -> Result<()> {
    out.write_all(ZETA_CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in rows {
        let line = format!(
            "{},{},{},{},{}\n",
            fmt_float(r.t),
            fmt_float(r.zeta),
            fmt_float(r.ln_zeta),
            fmt_float(r.omega),
            fmt_float(r.domega_dt),
        );
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// N-scan CSV schema.
pub const NSWEEP_CSV_HEADER: &str = "N,Th,eta_scaled";

pub fn write_nsweep_csv<W: Write>(rows: &[NsweepRow], out: &mut W) -> Result<()> {
    out.write_all(NSWEEP_CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in rows {
        let line = format!(
            "{},{},{}\n",
            r.particles,
            fmt_float(r.th),
            fmt_float(r.eta_scaled),
        );
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Writes any serializable row collection as a JSON array.
pub fn write_json<W: Write, T: Serialize>(rows: &[T], out: &mut W) -> Result<()> {
    serde_json::to_writer(&mut *out, rows)
        .map_err(|e| Error::Io(std::io::Error::new(std::io::ErrorKind::Other, e)))?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            species: Species::Fermi,
            dim: 1,
            particles: 20,
            alpha: 1.0,
            th_min: 0.1,
            th_max: 0.5,
            th_steps: 5,
            tc_min: 0.1,
            tc_max: 0.5,
            tc_steps: 5,
            mu_policy: MuPolicy::PaperApprox,
            tail_tol: DEFAULT_TAIL_TOL,
            format: OutputFormat::Csv,
        }
    }

    #[test]
    fn sweep_covers_the_lower_triangle_in_fixed_order() {
        let rows = run_sweep(&small_spec()).unwrap();
        // 5×5 grid, Tc ≤ Th triangle: 15 points.
        assert_eq!(rows.len(), 15);
        assert!(rows.iter().all(|r| r.tc <= r.th));
        // Th-major ascending, Tc ascending within.
        let mut sorted = rows.clone();
        sorted.sort_by(|a, b| a.th.total_cmp(&b.th).then(a.tc.total_cmp(&b.tc)));
        for (a, b) in rows.iter().zip(&sorted) {
            assert_eq!((a.th, a.tc), (b.th, b.tc));
        }
        // Diagonal rows do zero work; off-diagonal fermionic 1-D rows are
        // engines with first-law-consistent components.
        for r in &rows {
            let scale = 1f64.max(r.w.abs()).max(r.qh.abs()).max(r.qc.abs());
            assert!((r.w + r.qh + r.qc).abs() <= 1e-11 * scale);
            if r.tc == r.th {
                assert_eq!(r.mode, Mode::Indeterminate);
            } else {
                assert_eq!(r.mode, Mode::Engine);
            }
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = run_sweep(&small_spec()).unwrap();
        let b = run_sweep(&small_spec()).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        write_sweep_csv(&a, &mut buf_a).unwrap();
        write_sweep_csv(&b, &mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
    }

    #[test]
    fn sweep_validates_its_grid() {
        let mut bad = small_spec();
        bad.th_steps = 1;
        assert!(matches!(run_sweep(&bad), Err(Error::InvalidGrid(_))));
        let mut bad = small_spec();
        bad.tc_min = 0.0;
        assert!(matches!(run_sweep(&bad), Err(Error::InvalidGrid(_))));
        let mut bad = small_spec();
        bad.th_min = 0.6;
        bad.th_max = 0.2;
        assert!(matches!(run_sweep(&bad), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn csv_rows_round_trip_through_a_parser() {
        let rows = run_sweep(&small_spec()).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(SWEEP_CSV_HEADER));
        assert!(!text.contains('\r'));
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let parsed: Vec<csv::StringRecord> =
            reader.records().collect::<std::result::Result<_, _>>().unwrap();
        assert_eq!(parsed.len(), rows.len());
        for (rec, row) in parsed.iter().zip(&rows) {
            assert_eq!(&rec[0], row.species.token());
            let th: f64 = rec[3].parse().unwrap();
            let w: f64 = rec[5].parse().unwrap();
            // 17-significant-digit floats parse back bit-exact.
            assert_eq!(th.to_bits(), row.th.to_bits());
            assert_eq!(w.to_bits(), row.w.to_bits());
            let eta = &rec[9];
            match row.eta {
                None => assert!(eta.is_empty()),
                Some(v) => assert_eq!(eta.parse::<f64>().unwrap().to_bits(), v.to_bits()),
            }
        }
    }

    #[test]
    fn json_rows_use_null_for_absent_efficiencies() {
        let rows = run_sweep(&small_spec()).unwrap();
        let mut buf = Vec::new();
        write_json(&rows, &mut buf).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = value.as_array().unwrap();
        assert_eq!(arr.len(), rows.len());
        let diagonal = arr.iter().find(|v| v["mode"] == "Indeterminate").unwrap();
        assert!(diagonal["eta"].is_null());
        let engine = arr.iter().find(|v| v["mode"] == "Engine").unwrap();
        assert!(engine["eta"].is_number());
        assert!(engine["Th"].is_number() && engine["N"].is_number());
    }

    #[test]
    fn zeta_curve_spacings_and_content() {
        let gas = GasSpec::new(Species::Bose, 20, MuPolicy::PaperApprox).unwrap();
        let lin = zeta_curve(&gas, 2, 1.0, 0.01, 1.0, 10, Spacing::Linear, DEFAULT_TAIL_TOL).unwrap();
        assert_eq!(lin.len(), 10);
        assert_relative_eq!(lin[0].t, 0.01);
        assert_relative_eq!(lin[9].t, 1.0);
        for r in &lin {
            assert_relative_eq!(r.omega, r.t * r.ln_zeta, max_relative = 1e-15);
            assert_relative_eq!(r.zeta, r.ln_zeta.exp(), max_relative = 1e-15);
        }
        let log = zeta_curve(&gas, 2, 1.0, 0.01, 1.0, 10, Spacing::Log, DEFAULT_TAIL_TOL).unwrap();
        // Log spacing: constant ratio between consecutive temperatures.
        let ratio = log[1].t / log[0].t;
        for w in log.windows(2) {
            assert_relative_eq!(w[1].t / w[0].t, ratio, max_relative = 1e-10);
        }
    }

    #[test]
    fn nsweep_maps_absent_efficiency_to_zero() {
        // Bose 1-D consumes work at these temperatures (no engine rows), so
        // every eta_scaled lands on the 0 convention.
        let rows = nsweep(
            Species::Bose, 1, 1.0, MuPolicy::PaperApprox,
            0.5, 0.4, 0.8, 3, &[20], DEFAULT_TAIL_TOL,
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.eta_scaled == 0.0));
        // Fermi 1-D at low T is an engine: nonzero scaled efficiency.
        let rows = nsweep(
            Species::Fermi, 1, 1.0, MuPolicy::PaperApprox,
            0.5, 0.05, 0.2, 4, &[10, 20], DEFAULT_TAIL_TOL,
        )
        .unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].particles, 10);
        assert_eq!(rows[4].particles, 20);
        assert!(rows.iter().all(|r| r.eta_scaled > 0.99));
        let mut buf = Vec::new();
        write_nsweep_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with(NSWEEP_CSV_HEADER));
    }

    #[test]
    fn nsweep_validates_ratio() {
        for ratio in [0.0, 1.0, -0.5, 1.5] {
            assert!(nsweep(
                Species::Fermi, 1, 1.0, MuPolicy::PaperApprox,
                ratio, 0.1, 0.2, 2, &[20], DEFAULT_TAIL_TOL,
            )
            .is_err());
        }
    }
}
