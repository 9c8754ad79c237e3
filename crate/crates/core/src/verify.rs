//! Named identity suites: each case evaluates both sides of an identity and
//! compares the residual with a fixed tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::phi::{fe_residual, generating_series_partial, phi, reflection_residual, Comparison};
use crate::polylog::{partial_polylog_continued, partial_polylog_direct, polylog_continued, polylog_direct_series, PolylogParams};
use crate::quadrature::QuadratureConfig;
use crate::zeta_eta::{eta_formula, eta_series_oracle, zeta_dirichlet_oracle, zeta_from_eta, ZetaValue};
use crate::{c64, Complex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fe,
    Reflection,
    SpecialValues,
    OracleEta,
    OraclePolylog,
    Generating,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Fe,
        Suite::Reflection,
        Suite::SpecialValues,
        Suite::OracleEta,
        Suite::OraclePolylog,
        Suite::Generating,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Fe => "fe",
            Suite::Reflection => "reflection",
            Suite::SpecialValues => "special-values",
            Suite::OracleEta => "oracle-eta",
            Suite::OraclePolylog => "oracle-polylog",
            Suite::Generating => "generating",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The identity is undefined at this input.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub label: String,
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
    pub detail: Option<String>,
}

impl Case {
    fn judge(label: String, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            label,
            residual,
            tolerance,
            status,
            detail: None,
        }
    }

    fn failed(label: String, tolerance: f64, err: Error) -> Self {
        Self {
            label,
            residual: f64::INFINITY,
            tolerance,
            status: Status::Fail,
            detail: Some(err.to_string()),
        }
    }

    fn from_result(label: String, tolerance: f64, r: Result<f64>) -> Self {
        match r {
            Ok(res) => Self::judge(label, res, tolerance),
            Err(e) => Self::failed(label, tolerance, e),
        }
    }

    fn from_comparison(label: String, tolerance: f64, r: Result<Option<Comparison>>) -> Self {
        match r {
            Ok(Some(c)) => Self::judge(label, c.residual(), tolerance),
            Ok(None) => Self {
                label,
                residual: f64::NAN,
                tolerance,
                status: Status::Skipped,
                detail: Some("undefined point".into()),
            },
            Err(e) => Self::failed(label, tolerance, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.status == Status::Fail)
    }

    /// Largest residual among evaluated cases.
    pub fn max_residual(&self) -> f64 {
        self.cases
            .iter()
            .filter(|c| c.status != Status::Skipped)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

fn fmt_k(k: Complex) -> String {
    if k.im == 0.0 {
        format!("{}", k.re)
    } else {
        format!("{}{:+}i", k.re, k.im)
    }
}

pub const FE_TOL: f64 = 1e-6;
pub const REFLECTION_TOL: f64 = 1e-6;
pub const SPECIAL_TOL: f64 = 1e-8;
pub const ETA_TOL: f64 = 1e-7;
pub const ZETA_TOL: f64 = 1e-8;
pub const POLYLOG_TOL: f64 = 1e-8;
pub const GENERATING_TOL: f64 = 1e-9;

/// `r + it` for `r in {0.25, 0.5, 0.75, 2}`, `t in {0, 1, 5, 10, 14.1347}`.
pub fn fe_grid() -> Vec<Complex> {
    let mut ks = Vec::new();
    for r in [0.25, 0.5, 0.75, 2.0] {
        for t in [0.0, 1.0, 5.0, 10.0, 14.1347] {
            ks.push(c64(r, t));
        }
    }
    ks
}

pub fn reflection_points() -> Vec<Complex> {
    vec![c64(2.0, 0.0), c64(3.0, 0.0), c64(4.0, 0.0), c64(0.5, 5.0), c64(1.5, 2.0)]
}

/// `r + it` for `r in {0.1, 0.25, 0.5, 0.75, 1, 1.5}`, `t in {0, 1, 5, 10, 14.1347, 20}`.
pub fn eta_grid() -> Vec<Complex> {
    let mut ks = Vec::new();
    for r in [0.1, 0.25, 0.5, 0.75, 1.0, 1.5] {
        for t in [0.0, 1.0, 5.0, 10.0, 14.1347, 20.0] {
            ks.push(c64(r, t));
        }
    }
    ks
}

pub fn zeta_points() -> Vec<Complex> {
    vec![c64(1.5, 0.0), c64(2.0, 0.0), c64(2.5, 0.0), c64(3.0, 0.0), c64(4.0, 0.0), c64(2.0, 3.0)]
}

/// Integer points of `phi` with their closed forms.
pub fn special_value_table() -> Vec<(i64, f64)> {
    let zeta4 = PI.powi(4) / 90.0;
    vec![
        (0, 1.0),
        (2, -1.0 / 3.0),
        (4, 7.0 / 15.0),
        (6, -31.0 / 21.0),
        (1, 0.0),
        (3, 0.0),
        (5, 0.0),
        (-1, PI * PI / 4.0),
        (-3, 6.0 * (15.0 / 16.0) * zeta4),
    ]
}

/// `(m, n)` pairs with `Re m in (-3, -0.05)`, `Im m in (-3, 3)`, `n in 1..=40`.
pub fn random_partial_params(count: usize, seed: u64) -> Vec<(Complex, u64)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (c64(rng.gen_range(-3.0..-0.05), rng.gen_range(-3.0..3.0)), rng.gen_range(1..=40u64)))
        .collect()
}

pub fn direct_series_points() -> Vec<(Complex, Complex)> {
    let ms = [c64(-0.2, 0.0), c64(-1.0, 0.0), c64(-0.5, 2.0), c64(-2.0, -5.0), c64(-0.1, 3.0)];
    let ks = [c64(0.3, 0.0), c64(1.0, 0.0), c64(1.5, 0.7), c64(2.5, -1.2), c64(4.0, 0.0)];
    ms.iter().flat_map(|&m| ks.iter().map(move |&k| (m, k))).collect()
}

pub const GENERATING_POINTS: [f64; 3] = [0.1, 0.2, 0.25];
pub const GENERATING_TERMS: u32 = 16;

pub const POLYLOG_SEED: u64 = 2020;

/// Runs one suite; evaluation errors become failing cases.
pub fn run_suite(suite: Suite, cfg: &QuadratureConfig, exec: Execution) -> SuiteReport {
    let cases = match suite {
        Suite::Fe => exec.map(&fe_grid(), |&k| Case::from_comparison(format!("FE k={}", fmt_k(k)), FE_TOL, fe_residual(k, cfg))),
        Suite::Reflection => exec.map(&reflection_points(), |&k| {
            Case::from_comparison(format!("reflection k={}", fmt_k(k)), REFLECTION_TOL, reflection_residual(k, cfg))
        }),
        Suite::SpecialValues => exec.map(&special_value_table(), |&(k, want)| {
            let got = phi(c64(k as f64, 0.0), cfg).map(|e| (e.value - want).norm());
            Case::from_result(format!("phi({k}) = {want:.12}"), SPECIAL_TOL, got)
        }),
        Suite::OracleEta => {
            let mut cases = exec.map(&eta_grid(), |&k| {
                let r = eta_formula(k, cfg).and_then(|e| Ok((e.value - eta_series_oracle(k)?).norm()));
                Case::from_result(format!("eta k={}", fmt_k(k)), ETA_TOL, r)
            });
            cases.extend(exec.map(&zeta_points(), |&k| {
                let r = zeta_from_eta(k, cfg).and_then(|z| match z {
                    ZetaValue::Defined(z) => Ok((z - zeta_dirichlet_oracle(k)?).norm()),
                    ZetaValue::Undefined => Err(Error::Undefined(format!("zeta({k}) from eta"))),
                });
                Case::from_result(format!("zeta k={}", fmt_k(k)), ZETA_TOL, r)
            }));
            cases
        }
        Suite::OraclePolylog => {
            let params: Vec<(Complex, u64, u32)> = random_partial_params(50, POLYLOG_SEED)
                .into_iter()
                .flat_map(|(m, n)| (1..=4).map(move |k| (m, n, k)))
                .collect();
            let mut cases = exec.map(&params, |&(m, n, k)| {
                let p = PolylogParams::partial(m, c64(f64::from(k), 0.0), n);
                let r = partial_polylog_continued(&p, cfg).and_then(|c| {
                    let d = partial_polylog_direct(&p)?;
                    Ok((c.value - d).norm() / (1.0 + d.norm()))
                });
                Case::from_result(format!("E m={} k={k} n={n}", fmt_k(m)), POLYLOG_TOL, r)
            });
            cases.extend(exec.map(&direct_series_points(), |&(m, k)| {
                let r = polylog_continued(m, k, cfg).and_then(|c| {
                    let d = polylog_direct_series(m, k)?;
                    Ok((c.value - d).norm() / (1.0 + d.norm()))
                });
                Case::from_result(format!("Li m={} k={}", fmt_k(m), fmt_k(k)), POLYLOG_TOL, r)
            }));
            cases
        }
        Suite::Generating => exec.map(&GENERATING_POINTS, |&x| {
            let r = generating_series_partial(x, GENERATING_TERMS, cfg).map(|g| g.residual());
            Case::from_result(format!("q({x}) vs sum_{{k<={GENERATING_TERMS}}}"), GENERATING_TOL, r)
        }),
    };
    SuiteReport { suite, cases }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn special_values_suite_passes() {
        let r = run_suite(Suite::SpecialValues, &QuadratureConfig::default(), Execution::Sequential);
        assert_eq!(r.cases.len(), 9);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn generating_suite_reports_the_asymptotic_gap() {
        let r = run_suite(Suite::Generating, &QuadratureConfig::default(), Execution::Sequential);
        let status: Vec<Status> = r.cases.iter().map(|c| c.status).collect();
        assert_eq!(status, vec![Status::Pass, Status::Fail, Status::Fail]);
    }

    #[test]
    fn grids_have_stated_sizes() {
        assert_eq!(fe_grid().len(), 20);
        assert_eq!(eta_grid().len(), 36);
        assert_eq!(random_partial_params(50, POLYLOG_SEED).len(), 50);
    }
}
