//! `catotto sweep`: d-Otto cycles along one parameter axis, written as CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use rayon::prelude::*;

use super::{svg, with_threads, CliError, CliResult};
use crate::protocol::d_otto_protocol;
use crate::state::thermal_qubit;
use crate::thermo::{run_cycle, FixedPointChoice, MIN_WORK};

pub const SWEEP_HEADER: &str = "d,omega_h,omega_c,beta_h,beta_c,Q_h,Q_c,W,eta,eta_carnot,engine_mode";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    #[value(name = "d")]
    D,
    #[value(name = "omega_ratio", alias = "omega-ratio")]
    OmegaRatio,
    #[value(name = "beta_ratio", alias = "beta-ratio")]
    BetaRatio,
    #[value(name = "beta_h_omega_h", alias = "beta-h-omega-h")]
    BetaHOmegaH,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SweepArgs {
    /// parameter to sweep
    #[arg(long)]
    pub vary: Variable,
    /// `from,to,steps` (inclusive, evenly spaced)
    #[arg(long)]
    pub range: Option<String>,
    /// explicit comma-separated values (integers for `d`)
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// ω_c/ω_h
    #[arg(long, default_value_t = 0.5)]
    pub omega_ratio: f64,
    /// β_c/β_h
    #[arg(long, default_value_t = 10.0)]
    pub beta_ratio: f64,
    /// β_h ω_h
    #[arg(long, default_value_t = 0.3)]
    pub beta_h_omega_h: f64,
    #[arg(long, short)]
    pub output: PathBuf,
    /// also write a work-vs-efficiency plot
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// One sweep point in ratio form (`ω_h = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub d: usize,
    pub omega_ratio: f64,
    pub beta_ratio: f64,
    pub beta_h_omega_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub omega_h: f64,
    pub omega_c: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub work: f64,
    pub eta: Option<f64>,
    pub eta_carnot: f64,
    pub engine: bool,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.d,
            fmt_f64(self.omega_h),
            fmt_f64(self.omega_c),
            fmt_f64(self.beta_h),
            fmt_f64(self.beta_c),
            fmt_f64(self.q_h),
            fmt_f64(self.q_c),
            fmt_f64(self.work),
            self.eta.map(fmt_f64).unwrap_or_default(),
            fmt_f64(self.eta_carnot),
            u8::from(self.engine),
        )
    }
}

fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("--range expects from,to,steps; got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let from: f64 = parts[0].parse().map_err(|_| bad())?;
    let to: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if steps == 0 || !from.is_finite() || !to.is_finite() {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    Ok((0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Expands the arguments into sweep points in output order.
pub fn sweep_points(args: &SweepArgs) -> CliResult<Vec<SweepPoint>> {
    let values = match (&args.values, &args.range) {
        (Some(v), None) => v.clone(),
        (None, Some(r)) => parse_range(r)?,
        _ => return Err(CliError::Usage("give exactly one of --values or --range".into())),
    };
    if values.is_empty() {
        return Err(CliError::Usage("empty sweep".into()));
    }
    let base = SweepPoint {
        d: args.d,
        omega_ratio: args.omega_ratio,
        beta_ratio: args.beta_ratio,
        beta_h_omega_h: args.beta_h_omega_h,
    };
    let mut points = Vec::with_capacity(values.len());
    for v in values {
        let mut p = base;
        match args.vary {
            Variable::D => {
                if v.fract() != 0.0 || v < 1.0 {
                    return Err(CliError::Usage(format!("d must be a positive integer, got {v}")));
                }
                p.d = v as usize;
            }
            Variable::OmegaRatio => p.omega_ratio = v,
            Variable::BetaRatio => p.beta_ratio = v,
            Variable::BetaHOmegaH => p.beta_h_omega_h = v,
        }
        validate_point(&p)?;
        points.push(p);
    }
    Ok(points)
}

fn validate_point(p: &SweepPoint) -> CliResult<()> {
    if p.d == 0 {
        return Err(CliError::Usage("d must be at least 1".into()));
    }
    if !(p.omega_ratio > 0.0 && p.omega_ratio.is_finite()) {
        return Err(CliError::Usage(format!(
            "omega_ratio must be positive, got {}",
            p.omega_ratio
        )));
    }
    if !(p.beta_h_omega_h > 0.0 && p.beta_h_omega_h.is_finite()) {
        return Err(CliError::Usage(format!(
            "beta_h_omega_h must be positive, got {}",
            p.beta_h_omega_h
        )));
    }
    if !(p.beta_ratio > 1.0 && p.beta_ratio.is_finite()) {
        return Err(CliError::Usage(format!(
            "beta_ratio must exceed 1, got {}",
            p.beta_ratio
        )));
    }
    Ok(())
}

/// Runs the d-Otto cycle at its max-work fixed point.
pub fn sweep_row(p: &SweepPoint) -> CliResult<SweepRow> {
    let beta_h = p.beta_h_omega_h;
    let beta_c = p.beta_ratio * beta_h;
    let hot = thermal_qubit(beta_h, 1.0)?;
    let cold = thermal_qubit(beta_c, p.omega_ratio)?;
    let proto = d_otto_protocol(p.d)?;
    let r = run_cycle(&proto, &hot, &cold, &FixedPointChoice::MaxWork).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(SweepRow {
        d: p.d,
        omega_h: 1.0,
        omega_c: p.omega_ratio,
        beta_h,
        beta_c,
        q_h: r.q_h,
        q_c: r.q_c,
        work: r.work,
        eta: r.eta,
        eta_carnot: r.eta_carnot,
        engine: r.work > MIN_WORK && r.q_h > 0.0,
    })
}

/// Evaluates all points in parallel; rows come back in point order.
pub fn sweep_rows(points: &[SweepPoint]) -> CliResult<Vec<SweepRow>> {
    points.par_iter().map(sweep_row).collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv());
    }
    out
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let points = sweep_points(args)?;
    let rows = with_threads(args.threads, || sweep_rows(&points))??;
    fs::write(&args.output, sweep_csv(&rows))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", args.output.display())))?;
    if let Some(path) = &args.svg {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.engine)
            .filter_map(|r| r.eta.map(|e| (r.work, e)))
            .collect();
        let doc = svg::line_plot(&pts, "W", "eta");
        fs::write(path, doc).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_inclusive() {
        assert_eq!(parse_range("0,1,3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("2,5,1").unwrap(), vec![2.0]);
        assert!(parse_range("0,1").is_err());
        assert!(parse_range("0,1,0").is_err());
    }

    #[test]
    fn csv_formatting() {
        let row = SweepRow {
            d: 2,
            omega_h: 1.0,
            omega_c: 0.5,
            beta_h: 0.3,
            beta_c: 3.0,
            q_h: 0.1,
            q_c: -0.025,
            work: 0.075,
            eta: None,
            eta_carnot: 0.9,
            engine: true,
        };
        let line = row.to_csv();
        assert_eq!(line.split(',').count(), SWEEP_HEADER.split(',').count());
        assert!(line.starts_with("2,1.0000000000000000e0,5.0000000000000000e-1,"));
        assert!(line.ends_with(",,9.0000000000000002e-1,1"));
    }

    #[test]
    fn efficiency_grows_with_d_inside_regime() {
        // ω_c = 0.5, β_c/β_h = 10: regime holds for d = 1..4
        let points: Vec<_> = (1..=4)
            .map(|d| SweepPoint {
                d,
                omega_ratio: 0.5,
                beta_ratio: 10.0,
                beta_h_omega_h: 0.1,
            })
            .collect();
        let rows = sweep_rows(&points).unwrap();
        assert!(rows.iter().all(|r| r.engine));
        for w in rows.windows(2) {
            assert!(w[1].eta.unwrap() > w[0].eta.unwrap());
        }
    }
}
