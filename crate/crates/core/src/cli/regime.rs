//! `catotto regime-map`: which catalyst dimensions run as an engine on a
//! grid of `(ω_c/ω_h, β_c/β_h)`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

use super::{CliError, CliResult};
use crate::state::thermal_qubit;
use crate::thermo::engine_regime;

pub const REGIME_HEADER: &str = "omega_ratio,beta_ratio,engine_dims";

#[derive(Debug, Clone, clap::Args)]
pub struct RegimeArgs {
    /// grid points per axis
    #[arg(long, default_value_t = 50)]
    pub resolution: usize,
    #[arg(long, default_value_t = 4)]
    pub d_max: usize,
    /// upper end of the β_c/β_h axis
    #[arg(long, default_value_t = 10.0)]
    pub beta_cap: f64,
    #[arg(long, short)]
    pub output: PathBuf,
}

/// Dimensions `d ≤ d_max` in the engine regime, with `β_h = ω_h = 1`.
pub fn engine_dims(omega_ratio: f64, beta_ratio: f64, d_max: usize) -> Vec<usize> {
    let (Ok(hot), Ok(cold)) = (thermal_qubit(1.0, 1.0), thermal_qubit(beta_ratio, omega_ratio)) else {
        return Vec::new();
    };
    (1..=d_max).filter(|&d| engine_regime(d, &hot, &cold)).collect()
}

/// Grid axes: `ω_c/ω_h = d_max·i/n` for `i = 1..=n` and `β_c/β_h` evenly
/// spaced over `[1, cap]`.
pub fn regime_axes(resolution: usize, d_max: usize, beta_cap: f64) -> (Vec<f64>, Vec<f64>) {
    let n = resolution;
    let omegas = (1..=n).map(|i| d_max as f64 * i as f64 / n as f64).collect();
    let betas = (0..n)
        .map(|j| 1.0 + (beta_cap - 1.0) * j as f64 / (n - 1) as f64)
        .collect();
    (omegas, betas)
}

pub fn regime_csv(resolution: usize, d_max: usize, beta_cap: f64) -> CliResult<String> {
    if resolution < 2 {
        return Err(CliError::Usage("--resolution must be at least 2".into()));
    }
    if d_max < 1 {
        return Err(CliError::Usage("--d-max must be at least 1".into()));
    }
    if !(beta_cap >= 1.0 && beta_cap.is_finite()) {
        return Err(CliError::Usage("--beta-cap must be at least 1".into()));
    }
    let (omegas, betas) = regime_axes(resolution, d_max, beta_cap);
    let cells: Vec<(f64, f64)> = omegas
        .iter()
        .flat_map(|&w| betas.iter().map(move |&b| (w, b)))
        .collect();
    let lines: Vec<String> = cells
        .par_iter()
        .map(|&(w, b)| {
            let dims: Vec<String> = engine_dims(w, b, d_max).iter().map(usize::to_string).collect();
            format!("{w:.16e},{b:.16e},{}", dims.join(";"))
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "{REGIME_HEADER}");
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    Ok(out)
}

pub fn cmd_regime_map(args: &RegimeArgs) -> CliResult<()> {
    let csv = regime_csv(args.resolution, args.d_max, args.beta_cap)?;
    fs::write(&args.output, csv).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", args.output.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_cell() {
        // interval (0.6, 2.4)
        assert_eq!(engine_dims(0.6, 4.0, 4), vec![1, 2]);
        assert!(engine_dims(0.6, 1.0, 4).is_empty());
    }

    #[test]
    fn equal_temperatures_row_is_empty() {
        let csv = regime_csv(5, 3, 6.0).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(REGIME_HEADER));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 25);
        for row in rows {
            let f: Vec<&str> = row.split(',').collect();
            if f[1].parse::<f64>().unwrap() == 1.0 {
                assert_eq!(f[2], "");
            }
        }
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(regime_csv(1, 3, 5.0).is_err());
        assert!(regime_csv(4, 0, 5.0).is_err());
    }
}
