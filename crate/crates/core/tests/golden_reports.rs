//! Reports pinned for the five reference models. Set `UPDATE_GOLDEN=1` to
//! rewrite the files after an intended change.

use std::path::PathBuf;

use sasaki_core::models::{build_alekseevsky, build_symmetric, example_model, SasakiModel, SymmetricFamily, Variant};
use sasaki_core::scalars::{QSqrt2, Scalar};
use sasaki_core::suite::{run_suite, CheckReport, SuiteConfig};

fn q(v: i64) -> QSqrt2 {
    QSqrt2::from_i64(v)
}

fn models() -> Vec<(&'static str, SasakiModel<QSqrt2>)> {
    vec![
        ("s7-parallel", build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(1), q(2)).unwrap()),
        ("s7-generic", build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(2), q(1)).unwrap()),
        ("aloff-wallach", example_model("aloff-wallach", q(2), q(1)).unwrap()),
        ("su21", example_model("su21", q(1), q(-1)).unwrap()),
        ("t1", build_alekseevsky(2, 1, q(1), q(-1)).unwrap()),
    ]
}

#[test]
fn reports_match_golden_files() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, m) in models() {
        let report = run_suite(&m, &SuiteConfig::default()).without_timings();
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::write(&path, serde_json::to_string_pretty(&report).unwrap() + "\n").unwrap();
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let pinned: CheckReport = serde_json::from_str(&text).unwrap();
        for (a, b) in pinned.checks.iter().zip(&report.checks) {
            assert_eq!(a, b, "{name}: {}", a.id);
        }
        assert_eq!(pinned, report, "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let (_, m) = models().swap_remove(0);
    let a = run_suite(&m, &SuiteConfig::default()).without_timings();
    let b = run_suite(&m, &SuiteConfig::default()).without_timings();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
