//! Adaptive quadrature for complex-valued integrands.
//!
//! The workhorse is a global adaptive Gauss-Kronrod 7/15 rule. Both rules are
//! open, so endpoint singularities are never sampled. Real and imaginary parts
//! share one subdivision tree: each panel is refined on the modulus of its
//! complex Kronrod-Gauss difference.
//!
//! Semi-infinite ranges are cut into panels of geometrically growing width
//! until the integrand has decayed below the tolerance, and integrals over
//! `[0, 1]` whose integrand is singular at `u = 1` can be taken with the tail
//! mapped through `w = -log(1 - u)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Panel budget for one finite-interval call.
    pub max_subdivisions: usize,
    /// Exponential decay rate assumed for semi-infinite tails.
    pub truncation_decay: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            truncation_decay: PI,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        if !(self.truncation_decay > 0.0) {
            return Err(Error::domain("truncation_decay must be positive"));
        }
        Ok(())
    }

    pub fn with_decay(mut self, decay: f64) -> Self {
        self.truncation_decay = decay;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// A value together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: Complex) -> Self {
        Self { value, error: 0.0 }
    }
}

impl From<QuadratureResult> for Estimate {
    fn from(r: QuadratureResult) -> Self {
        Self {
            value: r.value,
            error: r.error_estimate,
        }
    }
}

// Kronrod abscissae on [-1, 1] (positive half, centre last) and weights;
// the Gauss 7-point rule uses the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex,
    err: f64,
    resabs: f64,
}

fn eval<F: Fn(f64) -> Complex>(f: &F, x: f64) -> Result<Complex> {
    let v = f(x);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Integrand { abscissa: x })
    }
}

fn gk15<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval(f, centre)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = WGK[7] * fc.norm();
    let mut fv = [(Complex::zero(), Complex::zero()); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, centre - dx)?;
        let f2 = eval(f, centre + dx)?;
        fv[j] = (f1, f2);
        kronrod += (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j].0 - mean).norm() + (fv[j].1 - mean).norm());
    }
    let scale = half.abs();
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut err = ((kronrod - gauss) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && err < floor {
        err = floor;
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        err,
        resabs,
    })
}

struct Ranked(Panel);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    // Largest error first; ties go to the leftmost panel.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .err
            .total_cmp(&other.0.err)
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

fn sum_panels<'a>(panels: impl Iterator<Item = &'a Panel>) -> (Complex, f64, f64) {
    let mut sorted: Vec<&Panel> = panels.collect();
    sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
    sorted.iter().fold((Complex::zero(), 0.0, 0.0), |(v, e, r), p| {
        (v + p.value, e + p.err, r + p.resabs)
    })
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Succeeds when the summed panel error is below `max(abs_tol, rel_tol |I|)`,
/// or below the floating-point floor `100 eps sum|f|` when cancellation makes
/// the requested tolerance unreachable.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex,
{
    cfg.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
    }
    let first = gk15(&f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    heap.push(Ranked(first));
    let mut value = first.value;
    let mut err = first.err;
    let mut resabs = first.resabs;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        let floor = 100.0 * f64::EPSILON * resabs;
        if err <= tol.max(floor) || heap.is_empty() || heap.len() + frozen.len() >= cfg.max_subdivisions {
            let (v, e, r) = sum_panels(heap.iter().map(|p| &p.0).chain(frozen.iter()));
            let tol = cfg.abs_tol.max(cfg.rel_tol * v.norm());
            let floor = 100.0 * f64::EPSILON * r;
            if e <= tol.max(floor) {
                return Ok(QuadratureResult {
                    value: v,
                    error_estimate: e,
                    evaluations,
                });
            }
            return Err(Error::NonConvergence {
                value: v,
                error_estimate: e,
                evaluations,
            });
        }
        let Ranked(worst) = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Too narrow to bisect further.
            frozen.push(worst);
            continue;
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(Ranked(left));
        heap.push(Ranked(right));
    }
}

/// Integrates `f` over `[a, inf)` for integrands that eventually decay like
/// `exp(-d u)` with `d >= cfg.truncation_decay`.
///
/// The range is cut into panels of growing width. Integration stops once two
/// consecutive panels and the tail bound `|f(U)| / d` are all below a tenth of
/// the tolerance.
pub fn integrate_semi_infinite<F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex,
{
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::domain("semi-infinite lower limit must be finite"));
    }
    const MAX_PANELS: usize = 400;
    const MIN_PANELS: usize = 3;
    let decay = cfg.truncation_decay;
    let mut width = 2.0 / decay;
    let mut x = a;
    let mut total = Complex::zero();
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut quiet = 0;
    for n in 0..MAX_PANELS {
        let panel = integrate_finite(&f, x, x + width, cfg)?;
        total += panel.value;
        err += panel.error_estimate;
        evaluations += panel.evaluations + 1;
        x += width;
        let edge = eval(&f, x)?.norm();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.norm()) / 10.0;
        let tail = edge / decay;
        if panel.value.norm() <= tol && tail <= tol {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 2 && n + 1 >= MIN_PANELS {
            return Ok(QuadratureResult {
                value: total,
                error_estimate: err + tail,
                evaluations,
            });
        }
        width *= 1.25;
    }
    Err(Error::NonConvergence {
        value: total,
        error_estimate: f64::INFINITY,
        evaluations,
    })
}

/// A point of `[0, 1)` with `1 - u` and `log(1 - u)` carried at full
/// precision, which the forward computation from `u` loses near `u = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint {
    pub u: f64,
    pub one_minus_u: f64,
    pub log_one_minus_u: f64,
}

impl UnitPoint {
    pub fn from_u(u: f64) -> Self {
        Self {
            u,
            one_minus_u: 1.0 - u,
            log_one_minus_u: (-u).ln_1p(),
        }
    }

    /// The point with `-log(1 - u) = w`.
    pub fn from_log_tail(w: f64) -> Self {
        let y = (-w).exp();
        Self {
            u: -(-w).exp_m1(),
            one_minus_u: y,
            log_one_minus_u: -w,
        }
    }
}

/// Integrates `f` over `[0, 1]`, taking `[1 - split, 1]` through the change of
/// variables `w = -log(1 - u)`, which turns algebraic or logarithmic
/// singularities at `u = 1` into exponentially damped tails. `tail_decay` is
/// the decay rate of `f(u(w)) e^{-w}` in `w`.
pub fn integrate_unit_log_tail<F>(
    f: F,
    split: f64,
    tail_decay: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(UnitPoint) -> Complex,
{
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::domain("split must lie in (0, 1)"));
    }
    let head = integrate_finite(|u| f(UnitPoint::from_u(u)), 0.0, 1.0 - split, cfg)?;
    let tail_cfg = cfg.with_decay(tail_decay);
    let tail = integrate_semi_infinite(
        |w| {
            let p = UnitPoint::from_log_tail(w);
            f(p) * p.one_minus_u
        },
        -split.ln(),
        &tail_cfg,
    )?;
    Ok(QuadratureResult {
        value: head.value + tail.value,
        error_estimate: head.error_estimate + tail.error_estimate,
        evaluations: head.evaluations + tail.evaluations,
    })
}

/// `csch^2(pi u / 2)` for `u > 0`, overflow-free for large `u`.
pub fn csch_sq_weight(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::domain("csch_sq_weight requires u > 0"));
    }
    Ok(csch_sq(u))
}

#[inline]
pub(crate) fn csch_sq(u: f64) -> f64 {
    const SWITCH: f64 = 1.0;
    if u < SWITCH {
        let s = (0.5 * PI * u).sinh();
        1.0 / (s * s)
    } else {
        let e = (-PI * u).exp();
        let d = -(-PI * u).exp_m1();
        4.0 * e / (d * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use approx::assert_relative_eq;

    fn real<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> Complex {
        move |x| c64(f(x), 0.0)
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn finite_examples() {
        let r = integrate_finite(real(|u| u * u), 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(r.value.re, 1.0 / 3.0, epsilon = 1e-14);
        let r = integrate_finite(real(f64::ln), 0.0, 1.0, &cfg()).unwrap();
        assert_relative_eq!(r.value.re, -1.0, epsilon = 1e-10);
        let r = integrate_finite(real(f64::sin), 0.0, PI / 2.0, &cfg()).unwrap();
        assert_relative_eq!(r.value.re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn semi_infinite_examples() {
        let r = integrate_semi_infinite(real(|u| (-u).exp()), 0.0, &cfg().with_decay(1.0)).unwrap();
        assert_relative_eq!(r.value.re, 1.0, epsilon = 1e-11);
        let r = integrate_semi_infinite(real(|u| u * (-u * u).exp()), 0.0, &cfg().with_decay(1.0))
            .unwrap();
        assert_relative_eq!(r.value.re, 0.5, epsilon = 1e-11);
        let r = integrate_semi_infinite(real(|u| u * u * csch_sq(u)), 0.0, &cfg()).unwrap();
        assert_relative_eq!(r.value.re, 4.0 / (3.0 * PI), epsilon = 1e-11);
    }

    // Independent check of 4/(3 pi): integrate term by term using
    // csch^2(x) = 4 sum_{n>=1} n e^{-2 n x}, so that
    // int_0^inf u^2 csch^2(pi u / 2) du = 4 sum_n n * 2 / (pi n)^3.
    #[test]
    fn csch_moment_brute_force() {
        let sum: f64 = (1..2_000_000u64)
            .rev()
            .map(|n| 8.0 / (PI.powi(3) * (n as f64).powi(2)))
            .sum();
        assert_relative_eq!(sum, 4.0 / (3.0 * PI), max_relative = 1e-6);
    }

    #[test]
    fn csch_weight_examples() {
        let u = 1e-6;
        let lead = 4.0 / (PI * PI * u * u);
        assert!((csch_sq_weight(u).unwrap() - lead).abs() / lead <= 1e-9);
        // 1/sinh^2(pi), 30-digit reference.
        assert_relative_eq!(csch_sq_weight(2.0).unwrap(), 0.007_497_748_009_667_407_8, max_relative = 1e-13);
        let far = csch_sq_weight(50.0).unwrap();
        assert!(far > 0.0 && far.is_finite());
        assert_relative_eq!(far, 4.0 * (-50.0 * PI).exp(), max_relative = 1e-13);
        assert!(csch_sq_weight(0.0).is_err());
        assert!(csch_sq_weight(-1.0).is_err());
        // Both branches agree at the switch.
        let s = (0.5 * PI).sinh();
        assert_relative_eq!(csch_sq(1.0), 1.0 / (s * s), max_relative = 1e-14);
    }

    #[test]
    fn unit_log_tail_handles_endpoint_singularity() {
        // int_0^1 (1-u)^{-0.9} du = 10
        let r = integrate_unit_log_tail(|p| c64(p.one_minus_u.powf(-0.9), 0.0), 1e-3, 0.1, &cfg()).unwrap();
        assert_relative_eq!(r.value.re, 10.0, max_relative = 1e-10);
        // int_0^1 log(1-u)^2 du = 2
        let r = integrate_unit_log_tail(|p| c64(p.log_one_minus_u.powi(2), 0.0), 1e-3, 1.0, &cfg()).unwrap();
        assert_relative_eq!(r.value.re, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn additivity() {
        let f = real(|x: f64| (3.0 * x).cos() * (-x).exp() + x.powi(3));
        let ab = integrate_finite(&f, -1.0, 0.7, &cfg()).unwrap();
        let bc = integrate_finite(&f, 0.7, 2.5, &cfg()).unwrap();
        let ac = integrate_finite(&f, -1.0, 2.5, &cfg()).unwrap();
        let slack = 2.0 * (ab.error_estimate + bc.error_estimate + ac.error_estimate);
        assert!((ab.value + bc.value - ac.value).norm() <= slack.max(4.0 * f64::EPSILON * ac.value.norm()));
    }

    #[test]
    fn linearity_on_random_smooth_functions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (p, q): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..4.0));
            let (alpha, beta) = (c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), c64(rng.gen_range(-2.0..2.0), 0.0));
            let f = move |x: f64| c64((p * x).sin(), (q * x).cos());
            let g = move |x: f64| c64((-q * x * x).exp(), x * p);
            let lin = integrate_finite(|x| alpha * f(x) + beta * g(x), 0.0, 2.0, &cfg()).unwrap().value;
            let sep = alpha * integrate_finite(f, 0.0, 2.0, &cfg()).unwrap().value
                + beta * integrate_finite(g, 0.0, 2.0, &cfg()).unwrap().value;
            assert!((lin - sep).norm() <= 1e-12 * sep.norm().max(1.0));
        }
    }

    #[test]
    fn deterministic_bits() {
        let f = |x: f64| c64((5.0 * x).sin() / (1.0 + x * x), x.sqrt());
        let a = integrate_finite(f, 0.0, 3.0, &cfg()).unwrap();
        let b = integrate_finite(f, 0.0, 3.0, &cfg()).unwrap();
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn error_estimates_are_honest() {
        type Case = (Box<dyn Fn(f64) -> f64>, f64, f64, f64);
        let cases: Vec<Case> = vec![
            (Box::new(|x| x.exp()), 0.0, 1.0, std::f64::consts::E - 1.0),
            (Box::new(|x| 1.0 / (1.0 + x * x)), 0.0, 1.0, PI / 4.0),
            (Box::new(|x| x.sqrt()), 0.0, 1.0, 2.0 / 3.0),
            (Box::new(|x| 1.0 / x.sqrt()), 0.0, 1.0, 2.0),
            (Box::new(|x| x.ln()), 0.0, 1.0, -1.0),
            (Box::new(|x| (10.0 * x).sin()), 0.0, PI, 0.0 + (1.0 - (10.0 * PI).cos()) / 10.0),
            (Box::new(|x| x.ln() * x.ln()), 0.0, 1.0, 2.0),
            (Box::new(|x| (-x * x).exp()), -3.0, 3.0, PI.sqrt() * 0.999_977_909_503_001_4),
            (Box::new(|x| x.powi(7)), -1.0, 2.0, (256.0 - 1.0) / 8.0),
            (Box::new(|x| 1.0 / (1.0 + 25.0 * x * x)), -1.0, 1.0, 0.4 * 5.0_f64.atan()),
        ];
        for (i, (f, a, b, exact)) in cases.into_iter().enumerate() {
            let r = integrate_finite(|x| c64(f(x), 0.0), a, b, &cfg()).unwrap();
            let true_err = (r.value.re - exact).abs();
            assert!(
                true_err <= 10.0 * r.error_estimate.max(f64::EPSILON * exact.abs()),
                "case {i}: true {true_err:e} vs estimate {:e}",
                r.error_estimate
            );
        }
    }

    #[test]
    fn nan_is_reported_with_abscissa() {
        let r = integrate_finite(|x| c64(if x > 0.5 { f64::NAN } else { 1.0 }, 0.0), 0.0, 1.0, &cfg());
        match r {
            Err(Error::Integrand { abscissa }) => assert!(abscissa > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_carries_partial_result() {
        let tight = QuadratureConfig {
            max_subdivisions: 3,
            ..cfg()
        };
        match integrate_finite(|x| c64(x.powf(-0.99), 0.0), 0.0, 1.0, &tight) {
            Err(Error::NonConvergence { value, evaluations, .. }) => {
                assert!(value.re > 1.0);
                assert!(evaluations > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(integrate_finite(|_| Complex::zero(), 1.0, 0.0, &cfg()).is_err());
        let bad = QuadratureConfig { rel_tol: 0.0, ..cfg() };
        assert!(integrate_finite(|_| Complex::zero(), 0.0, 1.0, &bad).is_err());
    }
}
