use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use nagd_core::analysis::{fit_growth_rate, fit_rate, FitKind, ALGEBRAIC_WINDOW, EXPONENTIAL_WINDOW};
use nagd_core::dynamics::{simulate_modal, IntegratorConfig};
use nagd_core::spectral::{classify_eigenvalue, EigenTag};
use nagd_core::Complex64;
use rayon::prelude::*;

use crate::error::CliError;
use crate::metrics::clip_window;
use crate::output::{fmt_value, write_atomic};

pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n).map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.n - 1) as f64).collect()
    }
}

/// `a0:a1:na,b0:b1:nb` over `lambda = a + i b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a: Axis,
    pub b: Axis,
}

impl GridSpec {
    pub fn points(&self) -> usize {
        self.a.n.saturating_mul(self.b.n)
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| CliError::config(format!("--grid `{s}`: {m}"));
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(bad("expected a0:a1:na,b0:b1:nb"));
        }
        let axis = |p: &str| -> Result<Axis, CliError> {
            let f: Vec<&str> = p.split(':').collect();
            if f.len() != 3 {
                return Err(bad("each range is lo:hi:n"));
            }
            let lo: f64 = f[0].trim().parse().map_err(|_| bad("bad lower bound"))?;
            let hi: f64 = f[1].trim().parse().map_err(|_| bad("bad upper bound"))?;
            let n: usize = f[2].trim().parse().map_err(|_| bad("bad point count"))?;
            if !lo.is_finite() || !hi.is_finite() || n == 0 {
                return Err(bad("bounds must be finite and n at least 1"));
            }
            Ok(Axis { lo, hi, n })
        };
        let g = GridSpec { a: axis(parts[0])?, b: axis(parts[1])? };
        if g.points() > MAX_GRID_POINTS {
            return Err(bad(&format!("grid has {} points, limit is {MAX_GRID_POINTS}", g.points())));
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub class: EigenTag,
    pub predicted: f64,
    pub measured: Option<f64>,
}

/// Class and predicted rate of `lambda = a + i b`; with `measure`, the rate
/// fitted on a modal run from `y(1) = 1, y'(1) = 0`.
pub fn sweep_point(a: f64, b: f64, measure: bool) -> SweepRow {
    let lambda = Complex64::new(a, b);
    let c = classify_eigenvalue(lambda, 1e-9 * lambda.norm().max(1.0));
    let measured = measure.then(|| measure_rate(lambda, c.tag)).flatten();
    SweepRow { a, b, class: c.tag, predicted: c.rate, measured }
}

fn measure_rate(lambda: Complex64, tag: EigenTag) -> Option<f64> {
    let unstable = tag.is_unstable();
    let t_end = if unstable { EXPONENTIAL_WINDOW.1 } else { ALGEBRAIC_WINDOW.1 };
    let cfg = IntegratorConfig::new(1.0, t_end);
    let run = simulate_modal(lambda, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), &cfg).ok()?;
    let abs: Vec<f64> = run.y.iter().map(|y| y.norm()).collect();
    let last = *run.times.last()?;
    let fit = match tag {
        EigenTag::NegativeReal | EigenTag::StrictlyComplex => {
            fit_growth_rate(&run.times, &abs, clip_window(EXPONENTIAL_WINDOW, 1.0, last), false)
        }
        EigenTag::PositiveReal => fit_rate(&run.times, &abs, clip_window(ALGEBRAIC_WINDOW, 1.0, last), FitKind::AlgebraicLogLog, true),
        EigenTag::Zero => fit_rate(&run.times, &abs, clip_window(ALGEBRAIC_WINDOW, 1.0, last), FitKind::AlgebraicLogLog, false),
    };
    fit.ok().map(|f| f.slope)
}

pub fn sweep(grid: &GridSpec, measure: bool) -> Vec<SweepRow> {
    let a = grid.a.values();
    let b = grid.b.values();
    let pts: Vec<(f64, f64)> = a.iter().flat_map(|x| b.iter().map(move |y| (*x, *y))).collect();
    pts.into_par_iter().map(|(x, y)| sweep_point(x, y, measure)).collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("a,b,class,predicted,measured\n");
    for r in rows {
        let m = r.measured.map(fmt_value).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", fmt_value(r.a), fmt_value(r.b), r.class.name(), fmt_value(r.predicted), m);
    }
    out
}

pub fn write_sweep(rows: &[SweepRow], out_dir: &Path) -> Result<std::path::PathBuf, CliError> {
    let path = out_dir.join("sweep.csv");
    write_atomic(&path, sweep_csv(rows).as_bytes())?;
    Ok(path)
}
