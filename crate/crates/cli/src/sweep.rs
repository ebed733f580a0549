//! Seeded Monte-Carlo sweeps over random ensembles.
//!
//! Trial `i` uses seed `seed + i` (wrapping). Its shape `(n, dim)` comes
//! from stream 1 of a ChaCha20 generator keyed by that seed, and the
//! ensemble itself from the core generators with the same seed. Trials run
//! on the rayon pool and rows are emitted in trial order.

use std::fmt::Write as _;
use std::time::Instant;

use qdiscrim_core::bounds::{barnum_knill_upper, fidelity_lower, pairwise_fidelities};
use qdiscrim_core::ensemble::{random_mixed_ensemble, random_pure_ensemble};
use qdiscrim_core::measurement::{optimize_measurement, DEFAULT_CERT_TOL, DEFAULT_MAX_ITERS};
use qdiscrim_core::{Ensemble, OptimizationResult, PriorKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

pub const CSV_HEADER: &str = "seed,n,dim,lower,optimized,upper,min_fidelity,seconds";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StateKind {
    #[default]
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub trials: usize,
    pub n_range: (usize, usize),
    pub dim_range: (usize, usize),
    pub kind: StateKind,
    pub priors: PriorKind,
    pub seed: u64,
    pub optimize: bool,
    /// When false every `seconds` value is written as zero, making the
    /// whole output a pure function of the configuration.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            n_range: (2, 4),
            dim_range: (2, 4),
            kind: StateKind::Pure,
            priors: PriorKind::Uniform,
            seed: 0,
            optimize: false,
            timing: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Input("--trials must be at least 1".into()));
        }
        let (n0, n1) = self.n_range;
        if n0 < 2 || n0 > n1 {
            return Err(CliError::Input(format!(
                "state count range {n0}..={n1} must satisfy 2 <= n-min <= n-max"
            )));
        }
        let (d0, d1) = self.dim_range;
        if d0 < 1 || d0 > d1 {
            return Err(CliError::Input(format!(
                "dimension range {d0}..={d1} must satisfy 1 <= dim-min <= dim-max"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub seed: u64,
    pub n: usize,
    pub dim: usize,
    pub lower: f64,
    pub optimized: Option<f64>,
    pub upper: f64,
    pub min_fidelity: f64,
    pub seconds: f64,
    /// Whether the optimizer's dual gap met the certification tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
}

/// `(n, dim)` and the ensemble for one trial seed.
pub fn trial_instance(config: &SweepConfig, trial_seed: u64) -> (usize, usize, Ensemble) {
    let mut rng = ChaCha20Rng::seed_from_u64(trial_seed);
    rng.set_stream(1);
    let n = rng.random_range(config.n_range.0..=config.n_range.1);
    let dim = rng.random_range(config.dim_range.0..=config.dim_range.1);
    let e = match config.kind {
        StateKind::Pure => random_pure_ensemble(n, dim, config.priors, trial_seed),
        StateKind::Mixed => random_mixed_ensemble(n, dim, config.priors, trial_seed),
    };
    (n, dim, e)
}

fn run_trial(config: &SweepConfig, trial_seed: u64) -> Result<SweepRow, CliError> {
    let start = Instant::now();
    let (n, dim, e) = trial_instance(config, trial_seed);
    let lower = fidelity_lower(&e)?;
    let upper = barnum_knill_upper(&e)?;
    let fids = pairwise_fidelities(&e)?;
    let min_fidelity = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| fids[i][j])
        .fold(f64::INFINITY, f64::min);
    let opt = if config.optimize {
        Some(OptimizationResult::best_effort(optimize_measurement(
            &e,
            DEFAULT_MAX_ITERS,
            DEFAULT_CERT_TOL,
        ))?)
    } else {
        None
    };
    let seconds = if config.timing {
        (start.elapsed().as_secs_f64() * 1000.0).round() / 1000.0
    } else {
        0.0
    };
    Ok(SweepRow {
        seed: trial_seed,
        n,
        dim,
        lower,
        optimized: opt.as_ref().map(|r| r.error_probability),
        upper,
        min_fidelity,
        seconds,
        certified: opt.as_ref().map(|r| r.converged),
    })
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    config.validate()?;
    (0..config.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(config, config.seed.wrapping_add(i)))
        .collect()
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let optimized = r.optimized.map(float).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.3}",
            r.seed,
            r.n,
            r.dim,
            float(r.lower),
            optimized,
            float(r.upper),
            float(r.min_fidelity),
            r.seconds
        )
        .expect("writing to a String");
    }
    out
}

pub fn rows_to_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("finite values serialise") + "\n"
}

pub fn render(rows: &[SweepRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Json => rows_to_json(rows),
    }
}

/// Parses CSV written by [`rows_to_csv`]. The `certified` flag is not
/// stored in CSV and comes back as `None`.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(CliError::Input("missing or unexpected CSV header".into()));
    }
    let bad = |line: usize, what: &str| CliError::Input(format!("CSV line {}: bad {what}", line + 2));
    lines
        .enumerate()
        .map(|(k, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(bad(k, "field count"));
            }
            let num = |i: usize, name: &str| f[i].parse::<f64>().map_err(|_| bad(k, name));
            Ok(SweepRow {
                seed: f[0].parse().map_err(|_| bad(k, "seed"))?,
                n: f[1].parse().map_err(|_| bad(k, "n"))?,
                dim: f[2].parse().map_err(|_| bad(k, "dim"))?,
                lower: num(3, "lower")?,
                optimized: if f[4].is_empty() {
                    None
                } else {
                    Some(num(4, "optimized")?)
                },
                upper: num(5, "upper")?,
                min_fidelity: num(6, "min_fidelity")?,
                seconds: num(7, "seconds")?,
                certified: None,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SweepConfig::default().validate().is_ok());
        for bad in [
            SweepConfig {
                trials: 0,
                ..Default::default()
            },
            SweepConfig {
                n_range: (1, 3),
                ..Default::default()
            },
            SweepConfig {
                n_range: (4, 3),
                ..Default::default()
            },
            SweepConfig {
                dim_range: (0, 3),
                ..Default::default()
            },
            SweepConfig {
                dim_range: (3, 2),
                ..Default::default()
            },
        ] {
            assert!(matches!(bad.validate(), Err(CliError::Input(_))));
        }
    }

    #[test]
    fn rows_follow_trial_order_and_ranges() {
        let config = SweepConfig {
            trials: 20,
            seed: 40,
            n_range: (2, 5),
            dim_range: (1, 3),
            ..Default::default()
        };
        let rows = run_sweep(&config).unwrap();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.seed, 40 + i as u64);
            assert!((2..=5).contains(&r.n) && (1..=3).contains(&r.dim));
            assert!(r.optimized.is_none());
            assert!(r.lower <= r.upper + 1e-12);
        }
    }

    #[test]
    fn one_dimensional_states_are_identical() {
        let config = SweepConfig {
            trials: 3,
            dim_range: (1, 1),
            n_range: (3, 3),
            ..Default::default()
        };
        for r in run_sweep(&config).unwrap() {
            assert!((r.min_fidelity - 1.0).abs() < 1e-12);
            assert!((r.lower - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let config = SweepConfig {
            trials: 8,
            seed: 3,
            optimize: true,
            kind: StateKind::Mixed,
            ..Default::default()
        };
        let rows = run_sweep(&config).unwrap();
        let text = rows_to_csv(&rows);
        assert!(text.starts_with("seed,n,dim,lower,optimized,upper,min_fidelity,seconds\n"));
        let back = parse_csv(&text).unwrap();
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!((a.seed, a.n, a.dim), (b.seed, b.n, b.dim));
            assert_eq!(a.lower, b.lower);
            assert_eq!(a.optimized, b.optimized);
            assert_eq!(a.upper, b.upper);
            assert_eq!(a.min_fidelity, b.min_fidelity);
        }
    }

    #[test]
    fn untimed_output_is_reproducible() {
        let config = SweepConfig {
            trials: 10,
            seed: 1,
            timing: false,
            ..Default::default()
        };
        let a = render(&run_sweep(&config).unwrap(), OutputFormat::Csv);
        let b = render(&run_sweep(&config).unwrap(), OutputFormat::Csv);
        assert_eq!(a, b);
        assert!(a.lines().skip(1).all(|l| l.ends_with(",0.000")));
    }

    #[test]
    fn json_rows_mark_missing_optimum_as_null() {
        let rows = run_sweep(&SweepConfig {
            trials: 1,
            ..Default::default()
        })
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&rows_to_json(&rows)).unwrap();
        assert!(v[0]["optimized"].is_null());
        assert!(v[0].get("certified").is_none());
    }
}
