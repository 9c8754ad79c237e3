//! Partial polylogarithm sums `E_k^m(n) = sum_{j=1}^{n} e^{mj} / j^k`, the
//! polylogarithm `Li_k(e^m)`, and their continuations in the order `k`.
//!
//! Each formula-based evaluator has a direct-summation counterpart
//! ([`partial_polylog_direct`], [`polylog_direct_series`]) that serves as its
//! oracle. Complex factorials `k!` and `(k-1)!` are `Gamma(k+1)` and
//! `Gamma(k)`.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_finite, integrate_semi_infinite, integrate_unit_log_tail, Estimate, QuadratureConfig, UnitPoint,
};
use crate::special::{expm1, harmonic, log1p, log_nonzero, pow_nonzero, recip_gamma};
use crate::zeta_eta::zeta_dirichlet_oracle;
use crate::{c64, Complex};

const TAIL_SPLIT: f64 = 1e-3;

/// `(m, k, n)`: exponent scale, order, and partial-sum length (`None` for the
/// full series).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolylogParams {
    pub m: Complex,
    pub k: Complex,
    pub n: Option<u64>,
}

impl PolylogParams {
    pub fn partial(m: Complex, k: Complex, n: u64) -> Self {
        Self { m, k, n: Some(n) }
    }

    pub fn full(m: Complex, k: Complex) -> Self {
        Self { m, k, n: None }
    }

    fn length(&self) -> Result<u64> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(Error::domain("partial sums need n >= 1")),
        }
    }
}

fn positive_integer(k: Complex) -> Option<u32> {
    (k.im == 0.0 && k.re >= 1.0 && k.re.fract() == 0.0 && k.re <= 170.0).then_some(k.re as u32)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `coth(m u / 2)` as `1 + 2 / expm1(m u)`. Near `u = 1` the exponent is split
/// as `expm1(m) e^{-m y} + expm1(-m y)` with `y = 1 - u` carried exactly.
fn coth_half(m: Complex, p: UnitPoint) -> Complex {
    let e = if p.u <= 0.5 {
        expm1(m * p.u)
    } else {
        let my = m * p.one_minus_u;
        expm1(m) * (-my).exp() + expm1(-my)
    };
    1.0 + 2.0 / e
}

/// `sum_{j=1}^{n} e^{mj} / j^k` by direct summation.
pub fn partial_polylog_direct(p: &PolylogParams) -> Result<Complex> {
    let n = p.length()?;
    Ok((1..=n)
        .rev()
        .map(|j| {
            let jf = j as f64;
            (p.m * jf - p.k * jf.ln()).exp()
        })
        .sum())
}

/// The closed form for positive integer `k`: exponential-sum and harmonic
/// terms plus one `coth` integral.
pub fn partial_polylog_formula(p: &PolylogParams, cfg: &QuadratureConfig) -> Result<Estimate> {
    let n = p.length()?;
    let k = positive_integer(p.k)
        .ok_or_else(|| Error::domain("partial_polylog_formula needs a positive integer k; use the continued form"))?;
    let m = p.m;
    let nf = n as f64;
    let n_k = nf.powi(k as i32);
    let mn = m * nf;
    let mut exp_sum = Complex::zero();
    let mut term = Complex::one();
    for j in 0..=k {
        exp_sum += term;
        term *= mn / f64::from(j + 1);
    }
    let mut value = (mn.exp() - exp_sum) / (2.0 * n_k);
    for j in 1..=k {
        value += m.powi((k - j) as i32) / factorial(k - j) * harmonic(n, j);
    }
    let mut error = 0.0;
    if m != Complex::zero() {
        let integrand = |u: f64| {
            let pt = UnitPoint::from_u(u);
            pt.one_minus_u.powi(k as i32 - 1) * expm1(mn * u) * coth_half(m, pt)
        };
        let r = integrate_finite(integrand, 0.0, 1.0, cfg)?;
        let scale = m.powi(k as i32) / (2.0 * factorial(k - 1));
        value += scale * r.value;
        error = scale.norm() * r.error_estimate;
    }
    Ok(Estimate { value, error })
}

/// `(1 + n u^{n+1} - (n+1) u^n) / (1 - u)^2 = sum_{q=1}^{n} q u^{q-1}`.
fn kernel(n: u64, u: f64, one_minus_u: f64) -> f64 {
    if one_minus_u >= 0.25 {
        let un = u.powf(n as f64);
        let nf = n as f64;
        (1.0 + nf * un * u - (nf + 1.0) * un) / (one_minus_u * one_minus_u)
    } else {
        (1..=n).rev().fold(0.0, |acc, q| acc * u + q as f64)
    }
}

/// Continuation of the partial sum to complex `k` with `Re k > 0`:
///
/// `e^{mn}/(2n^k) - A/(2 k!) - n m^k/k! + B/k! + m^k C / (2 (k-1)!)`
///
/// with `A = int_0^1 (m - log u / n)^k du`,
/// `B = int_0^1 (m - log u)^k (1 + n u^{n+1} - (n+1) u^n)/(1-u)^2 du` and
/// `C = int_0^1 (1-u)^{k-1} (e^{mnu} - 1) coth(mu/2) du`. `A` and `B` are
/// taken in `s = -log u`, where they become exponentially damped.
pub fn partial_polylog_continued(p: &PolylogParams, cfg: &QuadratureConfig) -> Result<Estimate> {
    let n = p.length()?;
    let (m, k) = (p.m, p.k);
    if !(k.re > 0.0) {
        return Err(Error::domain("partial_polylog_continued requires Re(k) > 0"));
    }
    let nf = n as f64;
    let unit_decay = cfg.with_decay(1.0);
    let a = integrate_semi_infinite(|s| pow_nonzero(m + s / nf, k) * (-s).exp(), 0.0, &unit_decay)?;
    let b = integrate_semi_infinite(
        |s| {
            let u = (-s).exp();
            let y = -(-s).exp_m1();
            pow_nonzero(m + s, k) * (kernel(n, u, y) * u)
        },
        0.0,
        &unit_decay,
    )?;
    let rg_k1 = recip_gamma(k + 1.0);
    let m_k = if m == Complex::zero() { Complex::zero() } else { pow_nonzero(m, k) };
    let mut value = (m * nf - k * nf.ln()).exp() * 0.5 - a.value * rg_k1 * 0.5 - m_k * nf * rg_k1 + b.value * rg_k1;
    let mut error = (a.error_estimate * 0.5 + b.error_estimate) * rg_k1.norm();
    if m != Complex::zero() {
        let mn = m * nf;
        let c = integrate_unit_log_tail(
            |pt| (pt.log_one_minus_u * (k - 1.0)).exp() * expm1(mn * pt.u) * coth_half(m, pt),
            TAIL_SPLIT,
            k.re,
            cfg,
        )?;
        let scale = m_k * recip_gamma(k) * 0.5;
        value += scale * c.value;
        error += scale.norm() * c.error_estimate;
    }
    Ok(Estimate { value, error })
}

/// Whether `(m, k)` lies in the convergence domain of the polylogarithm
/// formulas: everything except `Re m >= 0, |Im m| > 2 pi`, and on
/// `|Im m| = 2 pi` only `Re k > 1`.
pub fn domain_guard(m: Complex, k: Complex) -> bool {
    let two_pi = 2.0 * PI;
    if m.re < 0.0 {
        return true;
    }
    let im = m.im.abs();
    if (im - two_pi).abs() <= 1e-12 * two_pi {
        return k.re > 1.0;
    }
    im < two_pi
}

fn guard(m: Complex, k: Complex) -> Result<()> {
    if domain_guard(m, k) {
        Ok(())
    } else {
        Err(Error::domain(format!("(m, k) = ({m}, {k}) is outside the polylogarithm convergence domain")))
    }
}

/// `(1 - u) cot(pi u)`, accurate at both ends of `(0, 1)`.
fn one_minus_u_cot_pi_u(p: UnitPoint) -> f64 {
    if p.u <= 0.5 {
        p.one_minus_u / (PI * p.u).tan()
    } else {
        -p.one_minus_u / (PI * p.one_minus_u).tan()
    }
}

/// `Li_k(e^m)` for integer `k >= 1` from the zeta-sum formula.
pub fn polylog_integer_formula(m: Complex, k: u32, cfg: &QuadratureConfig) -> Result<Estimate> {
    if k == 0 {
        return Err(Error::domain("polylog_integer_formula needs k >= 1"));
    }
    let kc = c64(f64::from(k), 0.0);
    guard(m, kc)?;
    if m == Complex::zero() {
        return if k == 1 {
            Err(Error::domain("Li_1(1) diverges"))
        } else {
            Ok(Estimate::exact(zeta_dirichlet_oracle(kc)?))
        };
    }
    let ki = k as i32;
    let mut value = -m.powi(ki) / (2.0 * factorial(k)) - m.powi(ki - 1) / factorial(k - 1) * log_nonzero(-m / (2.0 * PI));
    for j in 2..=k {
        value += m.powi(ki - j as i32) / factorial(k - j) * zeta_dirichlet_oracle(c64(f64::from(j), 0.0))?;
    }
    let two_pi_over_m = 2.0 * PI / m;
    let integrand =
        |pt: UnitPoint| pt.one_minus_u.powi(ki - 1) * coth_half(m, pt) - two_pi_over_m * one_minus_u_cot_pi_u(pt);
    let r = integrate_unit_log_tail(integrand, TAIL_SPLIT, f64::from(k).min(1.0), cfg)?;
    let scale = m.powi(ki) / (2.0 * factorial(k - 1));
    value -= scale * r.value;
    Ok(Estimate {
        value,
        error: scale.norm() * r.error_estimate,
    })
}

/// `Log(m - L) - Log(m)` for `L = log(1-u) <= 0`, computed through
/// `log1p(-L/m)` and shifted onto the branch of the principal difference.
fn log_ratio(m: Complex, l: f64) -> Complex {
    let naive = log_nonzero(m - l) - log_nonzero(m);
    let accurate = log1p(-l / m);
    let turns = ((naive.im - accurate.im) / (2.0 * PI)).round();
    accurate + c64(0.0, 2.0 * PI * turns)
}

/// Continued polylogarithm for `Re k > 0`:
///
/// `Li_k(e^m) = -m^k/(2 k!) - m^{k-1} (1 + log(-m)) / (k-1)!
///   - m^k / (2 (k-1)!) int_0^1 (1-u)^{k-1} coth(mu/2) + 2 (1 - m^{-k} (m - log(1-u))^k) / (k u^2) du`
pub fn polylog_continued(m: Complex, k: Complex, cfg: &QuadratureConfig) -> Result<Estimate> {
    if !(k.re > 0.0) {
        return Err(Error::domain("polylog_continued requires Re(k) > 0"));
    }
    guard(m, k)?;
    if m == Complex::zero() {
        return Err(Error::domain("polylog_continued is singular at m = 0"));
    }
    let integrand = |pt: UnitPoint| {
        let first = (pt.log_one_minus_u * (k - 1.0)).exp() * coth_half(m, pt);
        let ratio = log_ratio(m, pt.log_one_minus_u);
        let second = -2.0 * expm1(k * ratio) / (k * pt.u * pt.u);
        first + second
    };
    let r = integrate_unit_log_tail(integrand, TAIL_SPLIT, k.re.min(1.0), cfg)?;
    let m_k = pow_nonzero(m, k);
    let rg_k = recip_gamma(k);
    let scale = m_k * rg_k * 0.5;
    let value = -m_k * rg_k / k * 0.5 - m_k / m * rg_k * (1.0 + log_nonzero(-m)) - scale * r.value;
    Ok(Estimate {
        value,
        error: scale.norm() * r.error_estimate,
    })
}

/// `sum_{j>=1} e^{mj} / j^k` summed until the geometric tail bound is below
/// double precision; requires `Re m < 0`.
pub fn polylog_direct_series(m: Complex, k: Complex) -> Result<Complex> {
    if !(m.re < 0.0) {
        return Err(Error::domain("the direct polylogarithm series needs Re(m) < 0"));
    }
    const MAX_TERMS: u64 = 50_000_000;
    let ratio = m.re.exp();
    let mut terms = Vec::new();
    let mut sum = Complex::zero();
    for j in 1..=MAX_TERMS {
        let jf = j as f64;
        let term = (m * jf - k * jf.ln()).exp();
        sum += term;
        terms.push(term);
        let tail = term.norm() * ratio / (1.0 - ratio);
        if tail <= 1e-17 * sum.norm().max(1e-300) {
            // Re-add smallest terms first.
            return Ok(terms.iter().rev().sum());
        }
    }
    Err(Error::domain("direct polylogarithm series did not converge"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta_eta::eta_series_oracle;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn real(x: f64) -> Complex {
        c64(x, 0.0)
    }

    // 30-digit mpmath values.
    const PARTIAL_M1_K2_N10: f64 = 0.408_754_087_020_271_19;
    const LI2_INV_E: f64 = 0.408_754_287_348_896_27;

    #[test]
    fn direct_examples() {
        let v = partial_polylog_direct(&PolylogParams::partial(real(0.0), real(2.0), 3)).unwrap();
        assert_relative_eq!(v.re, 49.0 / 36.0, epsilon = 1e-15);
        let v = partial_polylog_direct(&PolylogParams::partial(real(2f64.ln()), real(1.0), 2)).unwrap();
        assert_relative_eq!(v.re, 4.0, epsilon = 1e-14);
        let v = partial_polylog_direct(&PolylogParams::partial(real(-1.0), real(2.0), 10)).unwrap();
        assert_relative_eq!(v.re, PARTIAL_M1_K2_N10, epsilon = 1e-15);
        assert!(partial_polylog_direct(&PolylogParams::full(real(-1.0), real(2.0))).is_err());
    }

    #[test]
    fn formula_examples() {
        let p = PolylogParams::partial(real(-1.0), real(2.0), 10);
        let v = partial_polylog_formula(&p, &cfg()).unwrap().value;
        assert!((v - real(PARTIAL_M1_K2_N10)).norm() <= 1e-9 * PARTIAL_M1_K2_N10);
        let p = PolylogParams::partial(c64(0.0, PI / 3.0), real(3.0), 5);
        let v = partial_polylog_formula(&p, &cfg()).unwrap().value;
        let d = partial_polylog_direct(&p).unwrap();
        assert!((v - d).norm() <= 1e-9 * d.norm(), "{v} vs {d}");
        let m = c64(0.4, -1.3);
        let v = partial_polylog_formula(&PolylogParams::partial(m, real(1.0), 1), &cfg()).unwrap().value;
        assert!((v - m.exp()).norm() <= 1e-12);
        let v = partial_polylog_formula(&PolylogParams::partial(real(0.0), real(3.0), 4), &cfg()).unwrap().value;
        assert_relative_eq!(v.re, harmonic(4, 3), epsilon = 1e-15);
        assert!(partial_polylog_formula(&PolylogParams::partial(real(-1.0), real(1.5), 3), &cfg()).is_err());
    }

    #[test]
    fn continued_examples() {
        let p = PolylogParams::partial(real(-1.0), real(2.0), 10);
        let v = partial_polylog_continued(&p, &cfg()).unwrap().value;
        assert!((v - real(PARTIAL_M1_K2_N10)).norm() <= 1e-8, "{v}");
        let p = PolylogParams::partial(real(2.0), real(0.5), 1);
        let v = partial_polylog_continued(&p, &cfg()).unwrap().value;
        assert!((v - real(2f64.exp())).norm() <= 1e-8 * 2f64.exp(), "{v}");
        assert!(partial_polylog_continued(&PolylogParams::partial(real(-1.0), real(0.0), 3), &cfg()).is_err());
    }

    #[test]
    fn continued_partial_sum_at_non_integer_order() {
        // The direct sum is entire in k, so the continuation must reproduce it.
        for m in [real(-0.5), c64(-0.5, 0.3), c64(0.2, -1.0)] {
            for k in [c64(1.5, 0.7), c64(0.4, 0.0), c64(2.3, -1.1)] {
                let p = PolylogParams::partial(m, k, 6);
                let v = partial_polylog_continued(&p, &cfg()).unwrap().value;
                let d = partial_polylog_direct(&p).unwrap();
                assert!((v - d).norm() <= 1e-8 * (1.0 + d.norm()), "m = {m}, k = {k}: {v} vs {d}");
            }
        }
    }

    #[test]
    fn integer_formula_examples() {
        let v = polylog_integer_formula(real(-1.0), 2, &cfg()).unwrap().value;
        assert!((v - real(LI2_INV_E)).norm() <= 1e-10, "{v}");
        let want = -(1.0 - (-0.3f64).exp()).ln();
        let v = polylog_integer_formula(real(-0.3), 1, &cfg()).unwrap().value;
        assert!((v - real(want)).norm() <= 1e-10, "{v}");
        let v = polylog_integer_formula(c64(0.0, PI), 2, &cfg()).unwrap().value;
        assert!((v - real(-PI * PI / 12.0)).norm() <= 1e-10, "{v}");
        assert!(polylog_integer_formula(c64(1.0, 7.0), 2, &cfg()).is_err());
    }

    #[test]
    fn continued_examples_full() {
        let v = polylog_continued(real(-1.0), real(2.0), &cfg()).unwrap().value;
        assert!((v - real(LI2_INV_E)).norm() <= 1e-8, "{v}");
        let eta = eta_series_oracle(real(1.5)).unwrap();
        let v = polylog_continued(c64(0.0, PI), real(1.5), &cfg()).unwrap().value;
        assert!((v + eta).norm() <= 1e-8, "{v} vs {}", -eta);
        let want = -(1.0 - (-0.3f64).exp()).ln();
        let v = polylog_continued(real(-0.3), real(1.0), &cfg()).unwrap().value;
        assert!((v - real(want)).norm() <= 1e-8, "{v}");
        assert!(polylog_continued(real(-1.0), real(-0.5), &cfg()).is_err());
        assert!(polylog_continued(c64(1.0, 7.0), real(2.0), &cfg()).is_err());
    }

    #[test]
    fn domain_guard_examples() {
        assert!(!domain_guard(c64(1.0, 7.0), real(2.0)));
        assert!(domain_guard(real(-1.0), real(0.5)));
        assert!(domain_guard(c64(0.0, 2.0 * PI), real(1.5)));
        assert!(!domain_guard(c64(0.0, 2.0 * PI), real(0.5)));
        assert!(domain_guard(c64(0.0, -2.0 * PI), real(1.5)));
        assert!(domain_guard(c64(-1.0, 20.0), real(0.5)));
    }

    #[test]
    fn continued_matches_direct_on_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2020);
        for _ in 0..50 {
            let m = c64(rng.gen_range(-3.0..-0.05), rng.gen_range(-3.0..3.0));
            let n = rng.gen_range(1..=40u64);
            for k in 1..=4 {
                let p = PolylogParams::partial(m, real(k as f64), n);
                let c = partial_polylog_continued(&p, &cfg()).unwrap().value;
                let d = partial_polylog_direct(&p).unwrap();
                assert!((c - d).norm() <= 1e-8 * (1.0 + d.norm()), "m = {m}, n = {n}, k = {k}: {c} vs {d}");
            }
        }
    }

    #[test]
    fn continuation_matches_integer_formula() {
        for m in [real(-2.0), real(-1.0), real(-0.5), c64(0.0, PI / 2.0), c64(0.0, PI)] {
            for k in 2..=4u32 {
                let a = polylog_continued(m, real(f64::from(k)), &cfg()).unwrap().value;
                let b = polylog_integer_formula(m, k, &cfg()).unwrap().value;
                assert!((a - b).norm() <= 1e-8, "m = {m}, k = {k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn continued_matches_direct_series() {
        for m in [real(-0.2), real(-1.0), c64(-0.5, 2.0), c64(-2.0, -5.0), c64(-0.1, 3.0)] {
            for k in [real(0.3), real(1.0), c64(1.5, 0.7), c64(2.5, -1.2), real(4.0)] {
                let a = polylog_continued(m, k, &cfg()).unwrap().value;
                let b = polylog_direct_series(m, k).unwrap();
                assert!((a - b).norm() <= 1e-8, "m = {m}, k = {k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn partial_sums_approach_full_series() {
        for k in [1.0, 2.0, 2.5] {
            let m = real(-1.0);
            let n = 200;
            let part = partial_polylog_continued(&PolylogParams::partial(m, real(k), n), &cfg()).unwrap().value;
            let full = polylog_continued(m, real(k), &cfg()).unwrap().value;
            let bound = (m.re * (n + 1) as f64).exp() * 10.0;
            assert!((part - full).norm() <= bound.max(1e-8), "k = {k}: {part} vs {full}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let m = c64(-0.7, 1.2);
        let k = c64(1.4, 0.6);
        let a = polylog_continued(m.conj(), k.conj(), &cfg()).unwrap().value;
        let b = polylog_continued(m, k, &cfg()).unwrap().value.conj();
        assert!((a - b).norm() <= 1e-10);
        let p = PolylogParams::partial(m, k, 7);
        let pc = PolylogParams::partial(m.conj(), k.conj(), 7);
        let a = partial_polylog_continued(&pc, &cfg()).unwrap().value;
        let b = partial_polylog_continued(&p, &cfg()).unwrap().value.conj();
        assert!((a - b).norm() <= 1e-10);
        let a = polylog_integer_formula(m.conj(), 3, &cfg()).unwrap().value;
        let b = polylog_integer_formula(m, 3, &cfg()).unwrap().value.conj();
        assert!((a - b).norm() <= 1e-10);
        let pi = PolylogParams::partial(m, real(3.0), 7);
        let pci = PolylogParams::partial(m.conj(), real(3.0), 7);
        let a = partial_polylog_formula(&pci, &cfg()).unwrap().value;
        let b = partial_polylog_formula(&pi, &cfg()).unwrap().value.conj();
        assert!((a - b).norm() <= 1e-10);
    }

    // int_0^1 -(2 pi / m)(1-u) cot(pi u) + 2/(m u) du = 2 log(2 pi) / m
    #[test]
    fn cotangent_simplification_identity() {
        for m in [real(1.0), real(-2.0), c64(0.0, 1.0)] {
            let r = integrate_finite(
                |u| {
                    let pt = UnitPoint::from_u(u);
                    -2.0 * PI / m * one_minus_u_cot_pi_u(pt) + 2.0 / (m * u)
                },
                0.0,
                1.0,
                &cfg(),
            )
            .unwrap();
            let want = 2.0 * (2.0 * PI).ln() / m;
            assert!((r.value - want).norm() <= 1e-9, "m = {m}");
        }
    }
}
