//! Curve sets for the four strip-equation figures.
//!
//! 1. `g(r, t)` for `r = 1/8 .. 7/8` on `t in [0, 15]`, plus the line `2t`.
//! 2. `g(r, t)` for `r in {0, 1/2, 1}` on `t in [0, 26]`, plus the line `2t`.
//! 3. `-2(r-1) + f` and `-2t + g` for `r in {0, 1/2, 1}` on `[0, 26]`.
//! 4. their difference for `r in {0, 1/4, 1/2, 3/4, 1}` on `[0, 26]`.
//!
//! The strip functions need `r > 0`, so `r = 0` is sampled at [`R_ZERO_STANDIN`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::plot::PlotSeries;
use crate::quadrature::QuadratureConfig;
use crate::zeros::{curve_trace, grid, Functional};

pub const R_ZERO_STANDIN: f64 = 1e-3;

pub const DEFAULT_STEP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureCurve {
    pub figure: u8,
    /// `None` for the reference line `y = 2t`.
    pub r: Option<f64>,
    /// `f`, `g`, `f-diff`, `g-diff`, `difference` or `line-2t`.
    pub functional: String,
    pub note: Option<String>,
    pub series: PlotSeries,
}

impl FigureCurve {
    /// `fig<N>_<functional>[_r<r>]`.
    pub fn file_stem(&self) -> String {
        match self.r {
            Some(r) => format!("fig{}_{}_r{}", self.figure, self.functional, r),
            None => format!("fig{}_{}", self.figure, self.functional),
        }
    }
}

fn line_2t(figure: u8, t_max: f64, step: f64) -> FigureCurve {
    let mut series = PlotSeries::new("2t");
    series.points = grid(0.0, t_max, step).into_iter().map(|t| (t, 2.0 * t)).collect();
    FigureCurve {
        figure,
        r: None,
        functional: "line-2t".into(),
        note: None,
        series,
    }
}

fn strip_curve(
    figure: u8,
    r: f64,
    t_max: f64,
    step: f64,
    which: Functional,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<FigureCurve> {
    let (sampled, note) = if r == 0.0 {
        (R_ZERO_STANDIN, Some(format!("r = 0 sampled at r = {R_ZERO_STANDIN} (strip functions need r > 0)")))
    } else {
        (r, None)
    };
    let series = curve_trace(sampled, (0.0, t_max), step, which, cfg, exec)?;
    Ok(FigureCurve {
        figure,
        r: Some(r),
        functional: which.as_str().into(),
        note,
        series,
    })
}

/// All curves of one figure, sampled every `step` in `t`.
pub fn figure_curves(figure: u8, step: f64, cfg: &QuadratureConfig, exec: Execution) -> Result<Vec<FigureCurve>> {
    let mut out = Vec::new();
    match figure {
        1 => {
            for j in 1..=7 {
                out.push(strip_curve(1, j as f64 / 8.0, 15.0, step, Functional::G, cfg, exec)?);
            }
            out.push(line_2t(1, 15.0, step));
        }
        2 => {
            for r in [0.0, 0.5, 1.0] {
                out.push(strip_curve(2, r, 26.0, step, Functional::G, cfg, exec)?);
            }
            out.push(line_2t(2, 26.0, step));
        }
        3 => {
            for r in [0.0, 0.5, 1.0] {
                out.push(strip_curve(3, r, 26.0, step, Functional::FDiff, cfg, exec)?);
                out.push(strip_curve(3, r, 26.0, step, Functional::GDiff, cfg, exec)?);
            }
        }
        4 => {
            for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
                out.push(strip_curve(4, r, 26.0, step, Functional::Difference, cfg, exec)?);
            }
        }
        other => return Err(Error::domain(format!("figure must be 1-4, got {other}"))),
    }
    Ok(out)
}
