use zeta_cousin::verify::{run_suite, Status, Suite};
use zeta_cousin::{Execution, QuadratureConfig};

fn check(suite: Suite) {
    let report = run_suite(suite, &QuadratureConfig::default(), Execution::Parallel(4));
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "{suite}: {failures:#?}");
    assert!(report.cases.iter().all(|c| c.status == Status::Pass), "{suite}: skipped cases");
}

#[test]
fn functional_equation() {
    check(Suite::Fe);
}

#[test]
fn reflection() {
    check(Suite::Reflection);
}

#[test]
fn special_values() {
    check(Suite::SpecialValues);
}

#[test]
fn eta_and_zeta_oracles() {
    check(Suite::OracleEta);
}

#[test]
fn polylog_oracles() {
    check(Suite::OraclePolylog);
}

#[test]
fn parallel_and_sequential_reports_agree() {
    let cfg = QuadratureConfig::default();
    let a = run_suite(Suite::Reflection, &cfg, Execution::Sequential);
    let b = run_suite(Suite::Reflection, &cfg, Execution::Parallel(3));
    assert_eq!(a, b);
}
