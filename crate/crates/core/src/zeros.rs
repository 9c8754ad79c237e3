//! Zero search on the critical strip.
//!
//! Each column of fixed `r` is sampled in `t`; sign changes of `g(r,t) - 2t`
//! are bracketed and located, the real-part residual `|f - 2(r-1)|` is
//! recorded, and the crossing seeds a Newton polish of `phi` with a
//! finite-difference derivative. Polished roots are then classified against
//! the eta series.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::phi::{f_fn, g_fn, phi, CriticalStripPoint};
use crate::plot::PlotSeries;
use crate::quadrature::QuadratureConfig;
use crate::zeta_eta::{eta_series_oracle, nearest_eta_trivial_zero};
use crate::{c64, Complex};

pub const MAX_REFINE_ITERATIONS: u32 = 50;

/// Distance to `1 + 2 pi i j / ln 2` below which a root is eta-trivial.
pub const ETA_TRIVIAL_RADIUS: f64 = 1e-6;

/// `|phi|` that still counts as a root when labelling spurious roots; the
/// quadrature noise of `phi` reaches ~1e-5 near `t = 25`.
pub const PHI_ROOT_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRegion {
    pub r_min: f64,
    pub r_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub r_step: f64,
}

impl ScanRegion {
    pub fn new(r: (f64, f64), t: (f64, f64)) -> Self {
        Self {
            r_min: r.0,
            r_max: r.1,
            t_min: t.0,
            t_max: t.1,
            t_step: 0.05,
            r_step: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.r_min, self.r_max, self.t_min, self.t_max, self.t_step, self.r_step]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::domain("scan region bounds must be finite"));
        }
        if !(self.r_min > 0.0 && self.r_max <= 1.0 && self.r_min <= self.r_max) {
            return Err(Error::domain(format!(
                "scan needs 0 < r_min <= r_max <= 1, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if !(self.t_min >= 0.0 && self.t_min < self.t_max) {
            return Err(Error::domain(format!(
                "scan needs 0 <= t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if !(self.t_step > 0.0 && self.r_step > 0.0) {
            return Err(Error::domain("scan steps must be positive"));
        }
        Ok(())
    }

    /// Column abscissae `r_min, r_min + r_step, ...`, always ending at `r_max`.
    pub fn columns(&self) -> Vec<f64> {
        grid(self.r_min, self.r_max, self.r_step)
    }

    fn contains(&self, r: f64, t: f64) -> bool {
        const SLACK: f64 = 1e-6;
        r >= self.r_min - SLACK && r <= self.r_max + SLACK && t >= self.t_min - SLACK && t <= self.t_max + SLACK
    }
}

/// `a, a + h, ...` up to and including `b` (the last step may be short).
pub fn grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h + 1e-9).floor() as usize;
    let mut xs: Vec<f64> = (0..=n).map(|i| a + i as f64 * h).collect();
    if b - xs[n] > 1e-9 * h.max(1.0) {
        xs.push(b);
    } else {
        xs[n] = b;
    }
    xs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    ZetaZero,
    EtaTrivial,
    SpuriousPhi,
    /// Refinement did not reach a root, or the eta residual sits between the
    /// zeta-zero and spurious thresholds.
    Unresolved,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::ZetaZero => "zeta-zero",
            Classification::EtaTrivial => "eta-trivial",
            Classification::SpuriousPhi => "spurious-phi",
            Classification::Unresolved => "unresolved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCandidate {
    pub r: f64,
    pub t: f64,
    /// `|f(r,t) - 2(r-1)|`
    pub residual_f: f64,
    /// `|g(r,t) - 2t|`
    pub residual_g: f64,
    pub abs_phi: f64,
    pub abs_eta: f64,
    pub classification: Classification,
    pub refinement_iterations: u32,
}

impl ZeroCandidate {
    pub fn k(&self) -> Complex {
        c64(self.r, self.t)
    }

    /// An unrefined candidate at `(r, t)`.
    pub fn seed(r: f64, t: f64) -> Self {
        Self {
            r,
            t,
            residual_f: f64::NAN,
            residual_g: f64::NAN,
            abs_phi: f64::NAN,
            abs_eta: f64::NAN,
            classification: Classification::Unresolved,
            refinement_iterations: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    pub quadrature: QuadratureConfig,
    /// `|phi|` target of the polish.
    pub phi_tol: f64,
    /// `|eta|` at or below which a root counts as a zeta zero.
    pub eta_tol: f64,
    pub execution: Execution,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            phi_tol: 1e-8,
            eta_tol: 1e-6,
            execution: Execution::Sequential,
        }
    }
}

/// A grid point whose evaluation failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub r: f64,
    pub t: f64,
    pub message: String,
}

/// Located crossing of `g(r,t) = 2t` within one column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub r: f64,
    pub t: f64,
    pub residual_f: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    /// Distinct refined roots inside the region, ordered by `(r, t)`.
    pub candidates: Vec<ZeroCandidate>,
    /// Every bracketed crossing, ordered by `(r, t)`.
    pub crossings: Vec<Crossing>,
    pub failures: Vec<PointFailure>,
}

impl ScanReport {
    pub fn with_class(&self, class: Classification) -> impl Iterator<Item = &ZeroCandidate> {
        self.candidates.iter().filter(move |c| c.classification == class)
    }
}

fn g_minus_2t(r: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(g_fn(CriticalStripPoint::new(r, t), cfg)?.value.re - 2.0 * t)
}

/// Samples of `g - 2t` along a column, with midpoints inserted (up to six
/// halvings) where neighbouring `g` values jump by more than 10.
fn sample_column(r: f64, region: &ScanRegion, cfg: &QuadratureConfig) -> (Vec<(f64, f64)>, Vec<PointFailure>) {
    const MAX_JUMP: f64 = 10.0;
    const MAX_DEPTH: u32 = 6;
    let mut failures = Vec::new();
    let mut eval = |t: f64| match g_minus_2t(r, t, cfg) {
        Ok(v) => Some(v),
        Err(e) => {
            failures.push(PointFailure {
                r,
                t,
                message: e.to_string(),
            });
            None
        }
    };
    let ts = grid(region.t_min, region.t_max, region.t_step);
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(ts.len());
    for &t in &ts {
        let Some(d) = eval(t) else { continue };
        if let Some(&(t0, d0)) = samples.last() {
            // Stack of pending right endpoints, refined left to right.
            let mut stack = vec![(t, d, 0u32)];
            let (mut lt, mut ld) = (t0, d0);
            while let Some((rt, rd, depth)) = stack.pop() {
                let jump = ((rd + 2.0 * rt) - (ld + 2.0 * lt)).abs();
                if jump > MAX_JUMP && depth < MAX_DEPTH {
                    let mid = 0.5 * (lt + rt);
                    stack.push((rt, rd, depth + 1));
                    if let Some(md) = eval(mid) {
                        stack.push((mid, md, depth + 1));
                    }
                } else {
                    samples.push((rt, rd));
                    (lt, ld) = (rt, rd);
                }
            }
        } else {
            samples.push((t, d));
        }
    }
    (samples, failures)
}

/// Illinois false position on `g - 2t` inside `[a, b]`.
fn locate(r: f64, (mut a, mut fa): (f64, f64), (mut b, mut fb): (f64, f64), cfg: &QuadratureConfig) -> Result<f64> {
    let mut side = 0i8;
    for _ in 0..60 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() <= 1e-10 * (1.0 + c.abs()) {
            return Ok(c);
        }
        let fc = g_minus_2t(r, c, cfg)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if (fc < 0.0) == (fb < 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

fn column_crossings(r: f64, region: &ScanRegion, cfg: &QuadratureConfig) -> (Vec<Crossing>, Vec<PointFailure>) {
    let (samples, mut failures) = sample_column(r, region, cfg);
    let mut crossings = Vec::new();
    // g(r, 0) = 0 identically, so an exact zero at t = 0 is not a crossing.
    let start = samples.iter().position(|&(t, d)| !(t == 0.0 && d == 0.0)).unwrap_or(samples.len());
    for w in samples[start..].windows(2) {
        let ((t0, d0), (t1, d1)) = (w[0], w[1]);
        if !((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) {
            continue;
        }
        let located = locate(r, (t0, d0), (t1, d1), cfg)
            .and_then(|t| Ok((t, f_fn(CriticalStripPoint::new(r, t), cfg)?.value.re)));
        match located {
            Ok((t, f)) => crossings.push(Crossing {
                r,
                t,
                residual_f: (f - 2.0 * (r - 1.0)).abs(),
            }),
            Err(e) => failures.push(PointFailure {
                r,
                t: 0.5 * (t0 + t1),
                message: e.to_string(),
            }),
        }
    }
    (crossings, failures)
}

/// Scans every column, refines each crossing, and keeps the distinct roots
/// that land inside the region.
pub fn scan(region: &ScanRegion, settings: &ScanSettings) -> Result<ScanReport> {
    region.validate()?;
    settings.quadrature.validate()?;
    let cfg = &settings.quadrature;
    let columns = region.columns();
    let per_column = settings.execution.map(&columns, |&r| column_crossings(r, region, cfg));
    let mut report = ScanReport::default();
    for (crossings, failures) in per_column {
        report.crossings.extend(crossings);
        report.failures.extend(failures);
    }
    let refined = settings.execution.map(&report.crossings, |c| {
        refine(&ZeroCandidate::seed(c.r, c.t), settings.phi_tol, settings).map_err(|e| (c.r, c.t, e))
    });
    for outcome in refined {
        match outcome {
            Ok(cand) => {
                if region.contains(cand.r, cand.t) {
                    report.candidates.push(cand);
                }
            }
            Err((r, t, e)) => report.failures.push(PointFailure {
                r,
                t,
                message: e.to_string(),
            }),
        }
    }
    report.candidates = dedupe(std::mem::take(&mut report.candidates));
    Ok(report)
}

/// Merges candidates closer than `1e-5`, keeping the smallest `|phi|`;
/// output ordered by `(t, r)`.
fn dedupe(mut cands: Vec<ZeroCandidate>) -> Vec<ZeroCandidate> {
    const SAME_ROOT: f64 = 1e-5;
    cands.sort_by(|a, b| a.abs_phi.total_cmp(&b.abs_phi).then(a.t.total_cmp(&b.t)).then(a.r.total_cmp(&b.r)));
    let mut kept: Vec<ZeroCandidate> = Vec::new();
    for c in cands {
        if kept.iter().all(|k| (k.k() - c.k()).norm() > SAME_ROOT) {
            kept.push(c);
        }
    }
    kept.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.r.total_cmp(&b.r)));
    kept
}

/// Polishes a candidate; see [`refine_with_trace`].
pub fn refine(candidate: &ZeroCandidate, tol: f64, settings: &ScanSettings) -> Result<ZeroCandidate> {
    Ok(refine_with_trace(candidate, tol, settings)?.0)
}

/// Newton iteration on `phi` with the forward-difference derivative
/// `(phi(k + h) - phi(k)) / h`, `h = 1e-6 (1 + |k|)`.
///
/// Converged when `|phi| <= tol` and the correction is below `1e-8`, or when
/// a correction below `1e-6` fails to halve `|phi|`: the iteration has reached
/// the quadrature noise of `phi` (about `1e-5` near `t = 25`, where the
/// integrand peaks around `1e9`), and the better of the two iterates is kept.
/// Without convergence the best iterate is kept and the iteration count is
/// [`MAX_REFINE_ITERATIONS`]. The trace holds `|phi|` at every accepted
/// iterate.
pub fn refine_with_trace(candidate: &ZeroCandidate, tol: f64, settings: &ScanSettings) -> Result<(ZeroCandidate, Vec<f64>)> {
    if !(tol >= 1e-8) {
        return Err(Error::domain(format!("refinement tolerance must be >= 1e-8, got {tol}")));
    }
    let cfg = &settings.quadrature;
    let mut k = candidate.k();
    let mut value = phi(k, cfg)?.value;
    let mut trace = vec![value.norm()];
    let mut best = (value.norm(), k);
    let mut iterations = MAX_REFINE_ITERATIONS;
    for it in 1..=MAX_REFINE_ITERATIONS {
        let h = 1e-6 * (1.0 + k.norm());
        let slope = (phi(k + h, cfg)?.value - value) / h;
        if slope.norm() == 0.0 || !slope.re.is_finite() {
            break;
        }
        let step = value / slope;
        if value.norm() <= tol && step.norm() < 1e-8 {
            iterations = it - 1;
            break;
        }
        // Damp steps that would leave the neighbourhood of the seed.
        let step = if step.norm() > 1.0 { step / step.norm() } else { step };
        let next = k - step;
        let next_value = phi(next, cfg)?.value;
        if step.norm() < 1e-6 && next_value.norm() > 0.5 * value.norm() {
            if next_value.norm() < best.0 {
                best = (next_value.norm(), next);
            }
            iterations = it;
            break;
        }
        k = next;
        value = next_value;
        trace.push(value.norm());
        if value.norm() < best.0 {
            best = (value.norm(), k);
        }
        if (k - candidate.k()).norm() > 5.0 {
            break;
        }
    }
    let mut out = evaluate_candidate(best.1, settings)?;
    out.refinement_iterations = iterations;
    Ok((out, trace))
}

/// Residuals and classification at `k`.
pub fn evaluate_candidate(k: Complex, settings: &ScanSettings) -> Result<ZeroCandidate> {
    let cfg = &settings.quadrature;
    let p = CriticalStripPoint::new(k.re, k.im);
    let abs_phi = phi(k, cfg)?.value.norm();
    let (residual_f, residual_g) = if p.r > 0.0 {
        (
            (f_fn(p, cfg)?.value.re - 2.0 * (p.r - 1.0)).abs(),
            (g_fn(p, cfg)?.value.re - 2.0 * p.t).abs(),
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    let abs_eta = if p.r > 0.0 {
        eta_series_oracle(k)?.norm()
    } else {
        f64::NAN
    };
    let classification = classify(k, abs_phi, abs_eta, settings);
    Ok(ZeroCandidate {
        r: p.r,
        t: p.t,
        residual_f,
        residual_g,
        abs_phi,
        abs_eta,
        classification,
        refinement_iterations: 0,
    })
}

fn classify(k: Complex, abs_phi: f64, abs_eta: f64, settings: &ScanSettings) -> Classification {
    if (k - nearest_eta_trivial_zero(k)).norm() < ETA_TRIVIAL_RADIUS {
        Classification::EtaTrivial
    } else if abs_eta <= settings.eta_tol {
        Classification::ZetaZero
    } else if abs_phi <= settings.phi_tol.max(PHI_ROOT_FLOOR) && abs_eta > 10.0 * settings.eta_tol {
        Classification::SpuriousPhi
    } else {
        Classification::Unresolved
    }
}

/// `t` of the eta-trivial point `1 + 2 pi i j / ln 2`.
pub fn eta_trivial_ordinate(j: i64) -> f64 {
    2.0 * PI * j as f64 / LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Functional {
    F,
    G,
    /// `-2(r-1) + f(r,t)`
    FDiff,
    /// `-2t + g(r,t)`
    GDiff,
    /// `-2(r-1) + f(r,t) + 2t - g(r,t)`
    Difference,
}

impl Functional {
    pub fn as_str(self) -> &'static str {
        match self {
            Functional::F => "f",
            Functional::G => "g",
            Functional::FDiff => "f-diff",
            Functional::GDiff => "g-diff",
            Functional::Difference => "difference",
        }
    }

    pub fn evaluate(self, r: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let p = CriticalStripPoint::new(r, t);
        let f = || Ok::<f64, Error>(f_fn(p, cfg)?.value.re);
        let g = || Ok::<f64, Error>(g_fn(p, cfg)?.value.re);
        Ok(match self {
            Functional::F => f()?,
            Functional::G => g()?,
            Functional::FDiff => f()? - 2.0 * (r - 1.0),
            Functional::GDiff => g()? - 2.0 * t,
            Functional::Difference => f()? - 2.0 * (r - 1.0) + 2.0 * t - g()?,
        })
    }
}

impl std::str::FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "f" => Functional::F,
            "g" => Functional::G,
            "f-diff" => Functional::FDiff,
            "g-diff" => Functional::GDiff,
            "difference" => Functional::Difference,
            other => return Err(Error::domain(format!("unknown functional '{other}'"))),
        })
    }
}

/// Samples one functional along `t` at fixed `r`; failed points become gaps.
pub fn curve_trace(
    r: f64,
    t_range: (f64, f64),
    step: f64,
    which: Functional,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<PlotSeries> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("curve_trace requires r > 0, got {r}")));
    }
    if !(step > 0.0) || !(t_range.0 < t_range.1) {
        return Err(Error::domain("curve_trace needs step > 0 and t_min < t_max"));
    }
    let ts = grid(t_range.0, t_range.1, step);
    let values = exec.map(&ts, |&t| which.evaluate(r, t, cfg));
    let mut series = PlotSeries::new(format!("{} r={r}", which.as_str()));
    for (t, v) in ts.into_iter().zip(values) {
        match v {
            Ok(y) if y.is_finite() => series.points.push((t, y)),
            _ => series.gaps.push(t),
        }
    }
    Ok(series)
}
