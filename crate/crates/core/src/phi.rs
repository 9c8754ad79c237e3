//! The zeta cousin `phi(k)`, the function `h(k)` it comes from, the separated
//! strip equations `f(r, t)` and `g(r, t)`, the two functional relations that
//! tie `phi` to zeta, and the integer-order identities.
//!
//! All three of `phi`, `f` and `g` integrate against `csch^2(pi u / 2)` on
//! `[0, inf)`; `f` and `g` are written in `u = tan v` so the `sec^2 v`
//! Jacobian disappears. With `c(u) = ((1+iu)^k + (1-iu)^k) / 2`,
//!
//! * `phi(k) = 1 - k + (pi/2) int csch^2 (1 - c)`,
//! * `f(r, t) = 2 Re(phi + k - 1)` and `g(r, t) = 2 Im(phi + k - 1)`,
//!
//! which the tests check numerically rather than the code relying on it.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{csch_sq, integrate_semi_infinite, Estimate, QuadratureConfig};
use crate::special::{bernoulli_table, binomial, chebyshev_t, gamma_complex};
use crate::zeta_eta::{eta_integral, zeta_dirichlet_oracle, zeta_from_eta, ZetaValue};
use crate::{c64, Complex};

/// Below this the strip-equation integrands switch to their Taylor form.
const SERIES_CUTOFF: f64 = 1e-3;

const I: Complex = Complex::new(0.0, 1.0);

/// `k = r + i t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalStripPoint {
    pub r: f64,
    pub t: f64,
}

impl CriticalStripPoint {
    pub fn new(r: f64, t: f64) -> Self {
        Self { r, t }
    }

    pub fn k(&self) -> Complex {
        c64(self.r, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiEvaluation {
    pub k: Complex,
    pub phi: Complex,
    pub quadrature_error: f64,
}

/// Which closed form [`phi_special_value`] should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialKind {
    /// `phi(2n) = (2 - 2^{2n}) B_{2n}`
    Even,
    /// `phi(2n+1) = 0`
    Odd,
    /// `phi(-n) = 2n (1 - 2^{-(n+1)}) zeta(n+1)`
    Negative,
}

/// Two sides of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub lhs: Complex,
    pub rhs: Complex,
}

impl Comparison {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// `1 - c(u)`, formed as `-expm1(k L / 2) cos(k theta) + 2 sin^2(k theta / 2)`
/// with `L = log(1 + u^2)`, `theta = atan u`, so both terms keep full relative
/// accuracy as `u -> 0`.
fn one_minus_c(k: Complex, u: f64) -> Complex {
    let theta = u.atan();
    let half_l = 0.5 * u.mul_add(u, 0.0).ln_1p();
    let kt = k * theta;
    let s = (kt * 0.5).sin();
    -crate::special::expm1(k * half_l) * kt.cos() + 2.0 * s * s
}

fn phi_integrand(k: Complex, u: f64) -> Complex {
    one_minus_c(k, u) * csch_sq(u)
}

/// `phi(k) = 1 - k + (pi/2) int_0^inf csch^2(pi u/2) (1 - (1+u^2)^{k/2} cos(k atan u)) du`
pub fn phi(k: Complex, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::domain(format!("phi needs a finite argument, got {k}")));
    }
    let r = integrate_semi_infinite(|u| phi_integrand(k, u), 0.0, cfg)?;
    Ok(Estimate {
        value: 1.0 - k + 0.5 * PI * r.value,
        error: 0.5 * PI * r.error_estimate,
    })
}

pub fn evaluate_phi(k: Complex, cfg: &QuadratureConfig) -> Result<PhiEvaluation> {
    let e = phi(k, cfg)?;
    Ok(PhiEvaluation {
        k,
        phi: e.value,
        quadrature_error: e.error,
    })
}

/// `h(k) = int_0^1 [-i k (1-u)^{k-1} cot(pi u/2) + 2 (1 - pi^{-k} (pi + i log(1-u))^k) / u^2] du
///         - [-1 + 2 i k (1 + log(-i pi)) / pi]`
pub fn h_fn(k: Complex, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(k.re > 0.0) {
        return Err(Error::domain(format!("h requires Re(k) > 0, got {k}")));
    }
    let integral = eta_integral(k, 1.0, cfg)?;
    let log_minus_i_pi = c64(PI.ln(), -0.5 * PI);
    let value = k * integral.value + 1.0 - 2.0 * I * k * (1.0 + log_minus_i_pi) / PI;
    Ok(Estimate {
        value,
        error: k.norm() * integral.error_estimate,
    })
}

fn require_positive_r(p: CriticalStripPoint, what: &str) -> Result<()> {
    if p.r > 0.0 && p.r.is_finite() && p.t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} requires r > 0, got r = {}", p.r)))
    }
}

/// `1 - c(u)` to sixth order: `C(k,2) u^2 - C(k,4) u^4 + C(k,6) u^6`.
fn one_minus_c_series(k: Complex, u: f64) -> Complex {
    let u2 = u * u;
    u2 * (binomial(k, 2) - u2 * (binomial(k, 4) - u2 * binomial(k, 6)))
}

/// `(1 + u^2)^{r/2}` times the paired exponentials of the strip equations;
/// `v = atan u`, `log cos v = -log(1 + u^2) / 2`.
struct StripTerms {
    sec_r: f64,
    grow: f64,
    shrink: f64,
    tv: f64,
    rv: f64,
}

impl StripTerms {
    fn new(p: CriticalStripPoint, u: f64) -> Self {
        let v = u.atan();
        let log_cos = -0.5 * (u * u).ln_1p();
        Self {
            sec_r: (-p.r * log_cos).exp(),
            grow: (p.t * v).exp(),
            shrink: (-p.t * v).exp(),
            tv: p.t * log_cos,
            rv: p.r * v,
        }
    }
}

/// `f(r, t) = (pi/2) int_0^{pi/2} (sec v csch(pi tan v / 2))^2
///   (2 - sec^r v (e^{tv} cos(t log cos v + rv) + e^{-tv} cos(t log cos v - rv))) dv`
pub fn f_fn(p: CriticalStripPoint, cfg: &QuadratureConfig) -> Result<Estimate> {
    require_positive_r(p, "f")?;
    let k = p.k();
    let integrand = |u: f64| {
        let bracket = if u < SERIES_CUTOFF {
            2.0 * one_minus_c_series(k, u).re
        } else {
            let s = StripTerms::new(p, u);
            2.0 - s.sec_r * (s.grow * (s.tv + s.rv).cos() + s.shrink * (s.tv - s.rv).cos())
        };
        Complex::from(bracket * csch_sq(u))
    };
    strip_integral(integrand, cfg)
}

/// `g(r, t) = (pi/2) int_0^{pi/2} sec^{r+2} v csch^2(pi tan v / 2)
///   (e^{tv} sin(t log cos v + rv) + e^{-tv} sin(t log cos v - rv)) dv`
pub fn g_fn(p: CriticalStripPoint, cfg: &QuadratureConfig) -> Result<Estimate> {
    require_positive_r(p, "g")?;
    let k = p.k();
    let integrand = |u: f64| {
        let bracket = if u < SERIES_CUTOFF {
            2.0 * one_minus_c_series(k, u).im
        } else {
            let s = StripTerms::new(p, u);
            s.sec_r * (s.grow * (s.tv + s.rv).sin() + s.shrink * (s.tv - s.rv).sin())
        };
        Complex::from(bracket * csch_sq(u))
    };
    strip_integral(integrand, cfg)
}

fn strip_integral<F: Fn(f64) -> Complex>(integrand: F, cfg: &QuadratureConfig) -> Result<Estimate> {
    let r = integrate_semi_infinite(integrand, 0.0, cfg)?;
    Ok(Estimate {
        value: Complex::from(0.5 * PI * r.value.re),
        error: 0.5 * PI * r.error_estimate,
    })
}

/// `-(2 k! (2^{1-k} - 1) / pi^k) cos(pi k / 2) zeta(k)` against `phi(k)`.
/// `None` where zeta cannot be formed from eta.
pub fn fe_residual(k: Complex, cfg: &QuadratureConfig) -> Result<Option<Comparison>> {
    let zeta = match zeta_from_eta(k, cfg)? {
        ZetaValue::Defined(z) => z,
        ZetaValue::Undefined => return Ok(None),
    };
    let two_pow = ((1.0 - k) * LN_2).exp();
    let pi_pow = (k * PI.ln()).exp();
    let lhs = -2.0 * gamma_complex(k + 1.0)? * (two_pow - 1.0) / pi_pow * (k * (0.5 * PI)).cos() * zeta;
    let rhs = phi(k, cfg)?.value;
    Ok(Some(Comparison { lhs, rhs }))
}

/// `2 (k - 1) (1 - 2^{-k}) zeta(k)` against `phi(1 - k)`. `None` where zeta
/// cannot be formed from eta.
pub fn reflection_residual(k: Complex, cfg: &QuadratureConfig) -> Result<Option<Comparison>> {
    if (k - 1.0).norm() < 1e-12 {
        return Err(Error::Pole(k));
    }
    let zeta = match zeta_from_eta(k, cfg)? {
        ZetaValue::Defined(z) => z,
        ZetaValue::Undefined => return Ok(None),
    };
    let lhs = 2.0 * (k - 1.0) * (1.0 - (-k * LN_2).exp()) * zeta;
    let rhs = phi(1.0 - k, cfg)?.value;
    Ok(Some(Comparison { lhs, rhs }))
}

/// Largest `n` with `B_{2n}` in the exact table.
pub const MAX_EVEN_INDEX: u32 = 30;

/// Closed-form `phi` at integers.
pub fn phi_special_value(n: u32, kind: SpecialKind) -> Result<f64> {
    match kind {
        SpecialKind::Even => {
            if n > MAX_EVEN_INDEX {
                return Err(Error::domain(format!("even special values are tabulated up to n = {MAX_EVEN_INDEX}")));
            }
            let b = bernoulli_table(n as usize).even_f64(n as usize);
            Ok((2.0 - 2f64.powi(2 * n as i32)) * b)
        }
        SpecialKind::Odd => Ok(0.0),
        SpecialKind::Negative => {
            if n == 0 {
                return Err(Error::Pole(c64(1.0, 0.0)));
            }
            let nf = f64::from(n);
            let zeta = zeta_dirichlet_oracle(c64(nf + 1.0, 0.0))?.re;
            Ok(2.0 * nf * (1.0 - 2f64.powi(-(n as i32 + 1))) * zeta)
        }
    }
}

/// Closed-form `phi(k)` for any integer `k` (`k = 0` is the even case `n = 0`).
pub fn phi_at_integer(k: i64) -> Result<f64> {
    if k < 0 {
        phi_special_value(k.unsigned_abs() as u32, SpecialKind::Negative)
    } else if k % 2 == 0 {
        phi_special_value((k / 2) as u32, SpecialKind::Even)
    } else {
        phi_special_value((k / 2) as u32, SpecialKind::Odd)
    }
}

/// `phi(k) = 1 - k - (pi k! / 2) int_0^inf csch^2(pi u/2)
///   sum_{j=1}^{k div 2} (-1)^j u^{2j} / ((2j)! (k-2j)!) du`
pub fn phi_derivative_formula(k: u32, cfg: &QuadratureConfig) -> Result<Estimate> {
    let kf = f64::from(k);
    if k < 2 {
        return Ok(Estimate::exact(Complex::from(1.0 - kf)));
    }
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let coefs: Vec<f64> = (1..=k / 2)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign / (fact(2 * j) * fact(k - 2 * j))
        })
        .collect();
    let integrand = |u: f64| {
        let u2 = u * u;
        let poly = coefs.iter().rev().fold(0.0, |acc, c| (acc + c) * u2);
        Complex::from(poly * csch_sq(u))
    };
    let r = integrate_semi_infinite(integrand, 0.0, cfg)?;
    let scale = 0.5 * PI * fact(k);
    Ok(Estimate {
        value: Complex::from(1.0 - kf - scale * r.value.re),
        error: scale * r.error_estimate,
    })
}

/// `q(x)` and the truncated series it generates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratingComparison {
    pub x: f64,
    pub terms: u32,
    pub closed_form: f64,
    pub partial_sum: f64,
}

impl GeneratingComparison {
    pub fn residual(&self) -> f64 {
        (self.closed_form - self.partial_sum).abs()
    }
}

/// `q(x) = 2/(1-x) - 1/(1-x)^2 + (pi x^2 / (2(1-x))) int_0^inf csch^2(pi u/2) u^2 / ((1-x)^2 + (xu)^2) du`
/// next to `sum_{k=0}^{K} x^k phi(k)` (closed-form `phi` values).
pub fn generating_series_partial(x: f64, terms: u32, cfg: &QuadratureConfig) -> Result<GeneratingComparison> {
    if !(x.abs() < 1.0) {
        return Err(Error::domain(format!("generating function needs |x| < 1, got {x}")));
    }
    let y = 1.0 - x;
    let r = integrate_semi_infinite(
        |u| {
            let xu = x * u;
            Complex::from(u * u * csch_sq(u) / y.mul_add(y, xu * xu))
        },
        0.0,
        cfg,
    )?;
    let closed_form = 2.0 / y - 1.0 / (y * y) + PI * x * x / (2.0 * y) * r.value.re;
    let mut partial_sum = 0.0;
    for k in (0..=terms).rev() {
        partial_sum = partial_sum * x + phi_at_integer(i64::from(k))?;
    }
    Ok(GeneratingComparison {
        x,
        terms,
        closed_form,
        partial_sum,
    })
}

/// `cos(k theta) = T_k(cos theta)`: the Chebyshev form of the integer-order
/// integrand `(1+u^2)^{k/2} cos(k atan u) = (1+u^2)^{k/2} T_k(1/sqrt(1+u^2))`.
pub fn integer_order_kernel(k: usize, u: f64) -> f64 {
    let s = u.hypot(1.0);
    s.powi(k as i32) * chebyshev_t(k, 1.0 / s)
}
