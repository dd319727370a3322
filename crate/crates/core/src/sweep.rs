//! Parameter grids over (θ, φ, α) and the rows the `sweep` command emits.
//!
//! Grid order is θ outermost, then φ, then α. Grid point `k` in that order
//! uses Monte Carlo stream family `k` (see [`crate::teleport`]), so output is
//! byte-identical for a given seed regardless of thread count.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qubit::{BlochQubit, EntangledChannel};
use crate::teleport::{closed_form_fidelity, CorrectionMap, Teleporter};

pub const CSV_HEADER: &str = "theta,phi,alpha,F_closed,F_protocol,F_mc,mc_stderr";

/// Evenly spaced samples `start..=stop`; `steps == 1` yields only `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        Self { start, stop, steps }
    }

    pub fn single(value: f64) -> Self {
        Self { start: value, stop: value, steps: 1 }
    }

    /// The last sample is `stop` exactly, not an accumulated approximation.
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub fn to_radians(self) -> Self {
        Self { start: self.start.to_radians(), stop: self.stop.to_radians(), steps: self.steps }
    }
}

/// Parses `START:STOP:STEPS` or a single value. Bounds accept plain numbers
/// or multiples of pi such as `pi`, `2pi`, `pi/2`, `3*pi/4`.
impl FromStr for AxisRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Self::single(parse_scalar(v)?)),
            [a, b, n] => {
                let steps = n.trim().parse::<usize>().map_err(|_| format!("invalid step count '{n}'"))?;
                Ok(Self::new(parse_scalar(a)?, parse_scalar(b)?, steps))
            }
            _ => Err(format!("expected START:STOP:STEPS or a single value, got '{s}'")),
        }
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
    }
}

/// A number, or `[k][*]pi[/d]`.
pub fn parse_scalar(s: &str) -> std::result::Result<f64, String> {
    let t: String = s.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid number '{s}'");
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let coeff = t[..pos].trim_end_matches('*');
    let k = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = &t[pos + 2..];
    let d = match rest {
        "" => 1.0,
        r => r.strip_prefix('/').and_then(|d| d.parse::<f64>().ok()).filter(|d| *d != 0.0).ok_or_else(bad)?,
    };
    Ok(k * PI / d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub theta: AxisRange,
    pub phi: AxisRange,
    pub alpha: AxisRange,
    pub shots: u64,
    pub seed: u64,
    pub correction: CorrectionMap,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theta: AxisRange::new(0.0, PI, 21),
            phi: AxisRange::single(0.0),
            alpha: AxisRange::new(0.1, std::f64::consts::FRAC_1_SQRT_2, 7),
            shots: 0,
            seed: 42,
            correction: CorrectionMap::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub input: BlochQubit,
    pub channel: EntangledChannel,
}

impl SweepConfig {
    /// Validates the axes and expands the grid in θ, φ, α order.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        for (parameter, axis) in [("theta", &self.theta), ("phi", &self.phi), ("alpha", &self.alpha)] {
            if axis.steps == 0 {
                return Err(Error::Domain { parameter, value: 0.0, bound: "steps must be >= 1" });
            }
        }
        let thetas = self.theta.values();
        let phis = self.phi.values();
        let alphas = self.alpha.values();
        let total = thetas.len() * phis.len() * alphas.len();
        if total > u32::MAX as usize {
            return Err(Error::Domain { parameter: "steps", value: total as f64, bound: "grid too large" });
        }
        let channels = alphas.iter().map(|&a| EntangledChannel::new(a)).collect::<Result<Vec<_>>>()?;
        let mut points = Vec::with_capacity(total);
        for &theta in &thetas {
            for &phi in &phis {
                let input = BlochQubit::new(theta, phi)?;
                for channel in &channels {
                    points.push(GridPoint { input, channel: *channel });
                }
            }
        }
        Ok(points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    #[serde(rename = "F_closed")]
    pub f_closed: f64,
    #[serde(rename = "F_protocol")]
    pub f_protocol: f64,
    #[serde(rename = "F_mc")]
    pub f_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
}

impl SweepRow {
    pub fn protocol_gap(&self) -> f64 {
        (self.f_closed - self.f_protocol).abs()
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let grid = config.grid()?;
    grid.par_iter()
        .enumerate()
        .map(|(k, p)| {
            let t = Teleporter::new(p.input, p.channel, config.correction);
            let (f_mc, mc_stderr) = if config.shots > 0 {
                let est = t.monte_carlo(config.shots, config.seed, k as u32)?;
                (Some(est.mean), Some(est.stderr))
            } else {
                (None, None)
            };
            Ok(SweepRow {
                theta: p.input.theta(),
                phi: p.input.phi(),
                alpha: p.channel.alpha(),
                f_closed: closed_form_fidelity(&p.input, &p.channel),
                f_protocol: t.average_fidelity(),
                f_mc,
                mc_stderr,
            })
        })
        .collect()
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    let opt = |x: Option<f64>| x.map(fmt_sig17).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_sig17(r.theta),
            fmt_sig17(r.phi),
            fmt_sig17(r.alpha),
            fmt_sig17(r.f_closed),
            fmt_sig17(r.f_protocol),
            opt(r.f_mc),
            opt(r.mc_stderr),
        )?;
    }
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)
}
