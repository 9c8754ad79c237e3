//! Dirichlet eta from the continued polylogarithm at `m = i pi`, zeta from eta
//! on the right half-plane, and two independent series oracles.
//!
//! Sign convention: `eta(k) = sum_{j>=1} (-1)^{j-1} j^{-k}`, so
//! `eta(k) = -Li_k(-1)` and `zeta(k) = eta(k) / (1 - 2^{1-k})`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_unit_log_tail, Estimate, QuadratureConfig, QuadratureResult, UnitPoint};
use crate::special::{expm1, log1p, pow_nonzero, recip_gamma};
use crate::{c64, Complex};

/// `|2^{1-k} - 1|` below this marks an eta-exceptional point.
pub const EXCEPTIONAL_THRESHOLD: f64 = 1e-12;

/// Where the eta integral switches to the `w = -log(1-u)` tail.
pub(crate) const TAIL_SPLIT: f64 = 1e-3;

const I: Complex = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ZetaValue {
    Defined(Complex),
    /// `2^{1-k} = 1`: eta vanishes with its multiplier and the quotient is
    /// undefined.
    Undefined,
}

impl ZetaValue {
    pub fn defined(self) -> Option<Complex> {
        match self {
            ZetaValue::Defined(z) => Some(z),
            ZetaValue::Undefined => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaEvaluation {
    pub k: Complex,
    pub eta: Complex,
    pub zeta: ZetaValue,
    pub quadrature_error: f64,
}

fn require_right_half_plane(k: Complex, what: &str) -> Result<()> {
    if k.re > 0.0 && k.re.is_finite() && k.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} requires Re(k) > 0, got {k}")))
    }
}

/// `-s i (1-u)^{k-1} cot(pi u / 2) + 2 (1 - (1 + s i log(1-u) / pi)^k) / (k u^2)`
/// with `s = sign` selecting `m = s i pi`. For `s = 1` the power is the
/// familiar `pi^{-k} (pi + i log(1-u))^k`.
///
/// The two terms each blow up like `2/(pi u)` at `u = 0` with opposite signs;
/// the second is formed through `expm1`/`log1p` so that their sum keeps full
/// relative accuracy.
pub(crate) fn eta_integrand(k: Complex, sign: f64, p: UnitPoint) -> Complex {
    let cot = if p.u <= 0.5 {
        1.0 / (0.5 * PI * p.u).tan()
    } else {
        (0.5 * PI * p.one_minus_u).tan()
    };
    let first = -sign * I * ((k - 1.0) * p.log_one_minus_u).exp() * cot;
    let z = log1p(sign * I * (p.log_one_minus_u / PI));
    let second = -2.0 * expm1(k * z) / (k * p.u * p.u);
    first + second
}

/// The integral over `[0, 1]` in the eta formula for `m = sign * i pi`.
pub(crate) fn eta_integral(k: Complex, sign: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    integrate_unit_log_tail(|p| eta_integrand(k, sign, p), TAIL_SPLIT, 1.0, cfg)
}

/// `eta(k)` for `Re k > 0` through the continued polylogarithm at `m = i pi`.
///
/// `(i pi)^k / Gamma(k)` grows like `e^{pi |Im k|}` in the lower half-plane,
/// so there the mirror point `m = -i pi` (the same `e^m = -1`) is used.
pub fn eta_formula(k: Complex, cfg: &QuadratureConfig) -> Result<Estimate> {
    require_right_half_plane(k, "eta_formula")?;
    let sign = if k.im < 0.0 { -1.0 } else { 1.0 };
    let m = c64(0.0, sign * PI);
    let m_k = pow_nonzero(m, k);
    let rg_k = recip_gamma(k);
    let rg_k1 = rg_k / k;
    // log(-m) = ln pi - s i pi/2
    let log_term = 1.0 + c64(PI.ln(), -sign * 0.5 * PI);
    let integral = eta_integral(k, sign, cfg)?;
    let scale = m_k * rg_k * 0.5;
    let li = -m_k * rg_k1 * 0.5 - m_k / m * rg_k * log_term - scale * integral.value;
    Ok(Estimate {
        value: -li,
        error: scale.norm() * integral.error_estimate,
    })
}

/// Accelerated alternating series for eta (Cohen, Rodriguez Villegas and
/// Zagier, algorithm 1). Independent of any quadrature.
pub fn eta_series_oracle(k: Complex) -> Result<Complex> {
    require_right_half_plane(k, "eta_series_oracle")?;
    let growth = 15.0 * std::f64::consts::LN_10 + (1.0 + 2.0 * k.im.abs()).ln() + 0.5 * PI * k.im.abs();
    let n = ((growth / (3.0 + 8f64.sqrt()).ln()).ceil() as usize).max(50);
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let nf = n as f64;
    let mut b = -1.0;
    let mut c = -d;
    let mut s = Complex::new(0.0, 0.0);
    for j in 0..n {
        c = b - c;
        let a = (-k * ((j + 1) as f64).ln()).exp();
        s += a * c;
        let jf = j as f64;
        b *= (jf + nf) * (jf - nf) / ((jf + 0.5) * (jf + 1.0));
    }
    Ok(s / d)
}

/// True when `2^{1-k}` is within [`EXCEPTIONAL_THRESHOLD`] of 1.
pub fn is_eta_exceptional(k: Complex) -> bool {
    (two_pow_one_minus(k) - 1.0).norm() < EXCEPTIONAL_THRESHOLD
}

/// The eta-trivial zero `1 + 2 pi i j / ln 2` nearest to `k`.
pub fn nearest_eta_trivial_zero(k: Complex) -> Complex {
    let spacing = 2.0 * PI / LN_2;
    c64(1.0, (k.im / spacing).round() * spacing)
}

fn two_pow_one_minus(k: Complex) -> Complex {
    ((1.0 - k) * LN_2).exp()
}

/// `zeta(k) = eta(k) / (1 - 2^{1-k})` on `Re k > 0`, with eta from
/// [`eta_formula`].
pub fn zeta_from_eta(k: Complex, cfg: &QuadratureConfig) -> Result<ZetaValue> {
    Ok(evaluate_eta(k, cfg)?.zeta)
}

/// Eta and the zeta value derived from it.
pub fn evaluate_eta(k: Complex, cfg: &QuadratureConfig) -> Result<EtaEvaluation> {
    let eta = eta_formula(k, cfg)?;
    let zeta = zeta_from_eta_value(k, eta.value);
    Ok(EtaEvaluation {
        k,
        eta: eta.value,
        zeta,
        quadrature_error: eta.error,
    })
}

pub(crate) fn zeta_from_eta_value(k: Complex, eta: Complex) -> ZetaValue {
    if is_eta_exceptional(k) {
        ZetaValue::Undefined
    } else {
        ZetaValue::Defined(eta / (1.0 - two_pow_one_minus(k)))
    }
}

// B_{2i} / (2i)! for i = 1..=10.
const EM_COEF: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

/// Dirichlet series for zeta with an Euler-Maclaurin tail, for `Re k > 1.05`.
pub fn zeta_dirichlet_oracle(k: Complex) -> Result<Complex> {
    if !(k.re > 1.05) {
        return Err(Error::domain(format!(
            "zeta_dirichlet_oracle requires Re(k) > 1.05, got {k}"
        )));
    }
    let n = (40.0_f64).max(2.0 * k.im.abs()).ceil() as u64;
    let nf = n as f64;
    let ln_n = nf.ln();
    let head: Complex = (1..n).rev().map(|j| (-k * (j as f64).ln()).exp()).sum();
    let n_pow = (-k * ln_n).exp();
    let mut tail = n_pow * nf / (k - 1.0) + n_pow * 0.5;
    // Rising factorial k (k+1) ... (k+2i-2) times N^{-k-2i+1}.
    let mut rising = k;
    let mut power = n_pow / nf;
    for (i, coef) in EM_COEF.iter().enumerate() {
        let term = rising * power * *coef;
        tail += term;
        let base = (2 * i + 1) as f64;
        rising *= (k + base) * (k + base + 1.0);
        power /= nf * nf;
    }
    Ok(head + tail)
}
