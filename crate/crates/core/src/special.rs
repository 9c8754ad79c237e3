//! Complex elementary and special functions shared by the evaluators.
//!
//! All logarithms and powers use the principal branch, `arg` in `(-pi, pi]`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{c64, Complex};

const I: Complex = Complex::new(0.0, 1.0);

/// Principal logarithm `ln|z| + i arg z` with `arg z` in `(-pi, pi]`.
pub fn log_principal(z: Complex) -> Result<Complex> {
    if z == Complex::zero() {
        return Err(Error::domain("log of zero"));
    }
    Ok(log_nonzero(z))
}

// atan2 returns -pi for a negative real axis carrying a negative zero.
#[inline]
pub(crate) fn log_nonzero(z: Complex) -> Complex {
    let mut arg = z.im.atan2(z.re);
    if arg == -PI {
        arg = PI;
    }
    c64(z.norm().ln(), arg)
}

/// Principal power `exp(k log z)`, with `0^k = 0` for `Re k > 0`.
pub fn pow_principal(z: Complex, k: Complex) -> Result<Complex> {
    if z == Complex::zero() {
        return if k.re > 0.0 {
            Ok(Complex::zero())
        } else {
            Err(Error::domain("0^k requires Re(k) > 0"))
        };
    }
    Ok(pow_nonzero(z, k))
}

#[inline]
pub(crate) fn pow_nonzero(z: Complex, k: Complex) -> Complex {
    if k.im == 0.0 && k.re.fract() == 0.0 && k.re.abs() <= 64.0 {
        // Exact for small integer exponents; agrees with the principal branch.
        return z.powi(k.re as i32);
    }
    (k * log_nonzero(z)).exp()
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex) -> Complex {
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    let em1 = z.re.exp_m1();
    c64(em1 * c - 2.0 * half * half, (em1 + 1.0) * s)
}

/// Principal `log(1 + z)` without cancellation for small `|z|`.
pub fn log1p(z: Complex) -> Complex {
    if z.norm() > 0.5 {
        return log_nonzero(1.0 + z);
    }
    let x = z.re;
    let y = z.im;
    c64(0.5 * (x * (2.0 + x) + y * y).ln_1p(), y.atan2(1.0 + x))
}

// Godfrey's Lanczos set, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

/// Complex gamma function by the Lanczos approximation, with the reflection
/// formula on `Re z < 1/2`.
pub fn gamma_complex(z: Complex) -> Result<Complex> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole(z));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex) -> Complex {
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return PI / (s * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut series = Complex::from(LANCZOS_COEF[0]);
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let log_part = (z + 0.5) * log_nonzero(t) - t + log_nonzero(series);
    (2.0 * PI).sqrt() * log_part.exp()
}

/// `1 / Gamma(z)`, entire; zero at the non-positive integers.
pub fn recip_gamma(z: Complex) -> Complex {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Complex::zero();
    }
    1.0 / gamma_unchecked(z)
}

/// Exact Bernoulli numbers `B_0 ..= B_{2N}` (convention `B_1 = -1/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    /// `B_n`; panics when `n` is beyond the table.
    pub fn get(&self, n: usize) -> &BigRational {
        &self.values[n]
    }

    /// `B_{2n}` as a double.
    pub fn even_f64(&self, n: usize) -> f64 {
        self.values[2 * n].to_f64().unwrap_or(f64::NAN)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// `sum_{j=0}^{n} C(n+1, j) B_j`, which vanishes for `n >= 1`.
    pub fn recurrence_residual(&self, n: usize) -> BigRational {
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for j in 0..=n {
            acc += BigRational::from_integer(binom.clone()) * &self.values[j];
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        acc
    }
}

/// Builds `B_0 ..= B_{2N}` from `sum_{j=0}^{n} C(n+1, j) B_j = 0`.
pub fn bernoulli_table(n_even: usize) -> BernoulliTable {
    let top = 2 * n_even;
    let mut values: Vec<BigRational> = Vec::with_capacity(top + 1);
    values.push(BigRational::one());
    for n in 1..=top {
        if n > 1 && n % 2 == 1 {
            values.push(BigRational::zero());
            continue;
        }
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in values.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * b;
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        values.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    BernoulliTable { values }
}

/// Chebyshev polynomial of the first kind via the three-term recurrence.
pub fn chebyshev_t(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized harmonic number `H_j(n) = sum_{q=1}^{n} q^{-j}`.
pub fn harmonic(n: u64, j: u32) -> f64 {
    (1..=n).rev().map(|q| (q as f64).powi(-(j as i32))).sum()
}

/// Generalized binomial coefficient `C(k, n)` for complex `k`.
pub fn binomial(k: Complex, n: u32) -> Complex {
    let mut acc = Complex::one();
    for j in 0..n {
        acc *= (k - j as f64) / (j + 1) as f64;
    }
    acc
}

/// `i^k` on the principal branch, i.e. `exp(i pi k / 2)`.
pub fn i_pow(k: Complex) -> Complex {
    (I * (0.5 * PI) * k).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn log_examples() {
        let l = log_principal(c64(-1.0, 0.0)).unwrap();
        assert_eq!(l, c64(0.0, PI));
        let l = log_principal(c64(-1.0, -0.0)).unwrap();
        assert_eq!(l.im, PI);
        let l = log_principal(c64(std::f64::consts::E, 0.0)).unwrap();
        assert_relative_eq!(l.re, 1.0, epsilon = 1e-15);
        let l = log_principal(c64(0.0, -PI)).unwrap();
        assert_relative_eq!(l.re, PI.ln(), epsilon = 1e-15);
        assert_relative_eq!(l.im, -PI / 2.0, epsilon = 1e-15);
        assert!(log_principal(Complex::zero()).is_err());
    }

    #[test]
    fn pow_examples() {
        let p = pow_principal(c64(-1.0, 0.0), c64(0.5, 0.0)).unwrap();
        assert!((p - I).norm() < 1e-15);
        assert_eq!(pow_principal(c64(2.0, 0.0), c64(3.0, 0.0)).unwrap(), c64(8.0, 0.0));
        assert_eq!(pow_principal(c64(1.0, 1.0), c64(2.0, 0.0)).unwrap(), c64(0.0, 2.0));
        assert_eq!(pow_principal(Complex::zero(), c64(0.3, 1.0)).unwrap(), Complex::zero());
        assert!(pow_principal(Complex::zero(), c64(0.0, 1.0)).is_err());
    }

    #[test]
    fn expm1_log1p_small_arguments() {
        let z = c64(1e-12, -3e-12);
        assert!(close(expm1(z), z + z * z / 2.0, 1e-14));
        assert!(close(log1p(z), z - z * z / 2.0, 1e-14));
        let z = c64(0.3, -0.2);
        assert!(close(expm1(z), z.exp() - 1.0, 1e-14));
        assert!(close(log1p(z), (1.0 + z).ln(), 1e-14));
    }

    #[test]
    fn gamma_examples() {
        assert_relative_eq!(gamma_complex(c64(5.0, 0.0)).unwrap().re, 24.0, max_relative = 1e-13);
        assert_relative_eq!(
            gamma_complex(c64(0.5, 0.0)).unwrap().re,
            PI.sqrt(),
            max_relative = 1e-13
        );
        assert!(matches!(gamma_complex(c64(-3.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma_complex(Complex::zero()), Err(Error::Pole(_))));
    }

    // Reference values from a 25-digit mpmath evaluation.
    #[test]
    fn gamma_against_high_precision() {
        let cases = [
            (c64(1.0, 1.0), c64(0.498_015_668_118_356_04, -0.154_949_828_301_810_69)),
            (
                c64(0.5, 14.134_725),
                c64(-1.445_553_843_760_696_4e-10, -5.522_788_768_774_065_6e-10),
            ),
            (c64(3.5, -20.0), c64(4.198_959_038_476_193_2e-10, -1.888_306_635_209_834_9e-10)),
            (c64(-2.5, 0.3), c64(-0.613_822_997_437_741_49, -0.211_232_614_937_041_78)),
            (c64(1.5, 30.0), c64(-6.018_295_341_719_139_3e-20, -2.502_761_620_752_505e-19)),
            (c64(0.25, 0.0), c64(3.625_609_908_221_908_3, 0.0)),
            (c64(-0.5, -7.0), c64(1.614_628_001_894_653e-6, 5.770_326_879_719_359_4e-6)),
        ];
        for (z, want) in cases {
            let got = gamma_complex(z).unwrap();
            assert!(close(got, want, 1e-12), "gamma({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn bernoulli_examples() {
        let t = bernoulli_table(30);
        assert_eq!(t.len(), 61);
        assert_eq!(*t.get(0), BigRational::one());
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(*t.get(1), r(-1, 2));
        assert_eq!(*t.get(2), r(1, 6));
        assert_eq!(*t.get(4), r(-1, 30));
        assert_eq!(*t.get(6), r(1, 42));
        assert_eq!(*t.get(18), r(43867, 798));
        assert!(t.get(7).is_zero());
        for n in 1..=60 {
            assert!(t.recurrence_residual(n).is_zero(), "residual at n = {n}");
        }
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_t(0, 0.7), 1.0);
        assert_eq!(chebyshev_t(1, 0.3), 0.3);
        assert_relative_eq!(chebyshev_t(3, 0.5), -1.0, epsilon = 1e-15);
        for k in 0..=20 {
            for theta in [0.1_f64, 0.5, 1.0, 1.4] {
                let got = chebyshev_t(k, theta.cos());
                assert!((got - (k as f64 * theta).cos()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_relative_eq!(harmonic(3, 1), 11.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(harmonic(3, 2), 49.0 / 36.0, epsilon = 1e-15);
        assert_eq!(harmonic(0, 5), 0.0);
    }

    fn arb_complex() -> impl Strategy<Value = Complex> {
        (-50.0..50.0_f64, -50.0..50.0_f64)
            .prop_filter("nonzero", |(a, b)| a.abs() + b.abs() > 1e-6)
            .prop_map(|(a, b)| c64(a, b))
    }

    fn arb_gamma_arg() -> impl Strategy<Value = Complex> {
        (-5.0..5.0_f64, -10.0..10.0_f64)
            .prop_filter("away from poles", |(a, b)| {
                b.abs() > 1e-3 || (a - a.round()).abs() > 1e-3 || *a > 0.5
            })
            .prop_map(|(a, b)| c64(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn pow_identity_exponents(z in arb_complex()) {
            prop_assert_eq!(pow_principal(z, Complex::one()).unwrap(), z);
            prop_assert_eq!(pow_principal(z, Complex::zero()).unwrap(), Complex::one());
        }

        #[test]
        fn gamma_recurrence(z in arb_gamma_arg()) {
            let lhs = gamma_complex(z + 1.0).unwrap();
            let rhs = z * gamma_complex(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm());
        }

        #[test]
        fn gamma_conjugate_symmetry(z in arb_gamma_arg()) {
            let a = gamma_complex(z.conj()).unwrap();
            let b = gamma_complex(z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-14 * b.norm());
        }
    }
}
