use sasaki_core::models::{build_alekseevsky, build_symmetric, example_model, SasakiModel, SymmetricFamily, Variant};
use sasaki_core::scalars::{QSqrt2, Scalar};
use sasaki_core::suite::{run_suite, SuiteConfig};

fn q(v: i64) -> QSqrt2 {
    QSqrt2::from_i64(v)
}

fn golden() -> Vec<(&'static str, SasakiModel<QSqrt2>)> {
    vec![
        ("s7 (1,2)", build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(1), q(2)).unwrap()),
        ("s7 (2,1)", build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(2), q(1)).unwrap()),
        ("aloff-wallach (2,1)", example_model("aloff-wallach", q(2), q(1)).unwrap()),
        ("su21 (1,-1)", example_model("su21", q(1), q(-1)).unwrap()),
        ("sp11 (1,-1)", build_symmetric(SymmetricFamily::Sp, 1, Variant::Noncompact, q(1), q(-1)).unwrap()),
        ("so n=3 (2,1)", build_symmetric(SymmetricFamily::So, 3, Variant::Compact, q(2), q(1)).unwrap()),
        ("t1 (1,-1)", build_alekseevsky(2, 1, q(1), q(-1)).unwrap()),
    ]
}

#[test]
fn golden_models_pass() {
    for (name, m) in golden() {
        let r = run_suite(&m, &SuiteConfig::default());
        assert!(r.all_pass(), "{name}\n{}", r.render_text());
        for c in &r.checks {
            if let Some(res) = &c.residual {
                assert_eq!(res, "0", "{name} {}", c.id);
            }
        }
    }
}

/// Outside the golden set the exact backend either passes everything or
/// reports the frame radical as not representable, never a wrong value.
#[test]
fn wider_models() {
    use sasaki_core::models::h_deform;
    let mut ms: Vec<(String, SasakiModel<QSqrt2>)> = vec![];
    for (a, d) in [(1, 3), (1, 1), (2, 5)] {
        ms.push((format!("sp1 ({a},{d})"), build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(a), q(d)).unwrap()));
    }
    ms.push(("su1 nc (1,-2)".into(), build_symmetric(SymmetricFamily::Su, 1, Variant::Noncompact, q(1), q(-2)).unwrap()));
    ms.push(("sp0 (1,1)".into(), build_symmetric(SymmetricFamily::Sp, 0, Variant::Compact, q(1), q(1)).unwrap()));
    for (qq, l) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        ms.push((format!("alek q={qq} l={l}"), build_alekseevsky(qq, l, q(1), q(-1)).unwrap()));
    }
    let base = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(1), q(1)).unwrap();
    ms.push(("deformed".into(), h_deform(&base, q(4), q(0), q(2)).unwrap()));
    for (name, m) in ms {
        let r = run_suite(&m, &SuiteConfig::default());
        for c in r.failures() {
            let radical = c.detail.as_deref().map_or(false, |d| d.contains("not representable"));
            assert!(radical && c.residual.is_none(), "{name}: {} {:?} {:?}", c.id, c.residual, c.witness);
        }
    }
}

#[test]
fn float_backend_generic_parameters() {
    let m = build_alekseevsky(2, 1, 1.0f64, -1.0).unwrap();
    assert!(run_suite(&m, &SuiteConfig::default()).all_pass());
    let m = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, 1.0f64, 3.0).unwrap();
    let r = run_suite(&m, &SuiteConfig::default());
    assert!(r.all_pass(), "{}", r.render_text());
    let v = r.get("base.scalar").unwrap().value.clone().unwrap();
    assert!((v.parse::<f64>().unwrap() - 144.0).abs() < 1e-9, "{v}");
}

#[test]
fn flipped_constant_isolates_jacobi_triple() {
    use sasaki_core::faults::{inject, Fault};
    use sasaki_core::suite::Status;
    let m = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(2), q(1)).unwrap();
    let (i, j, k, c) = m.algebra.entries().into_iter().find(|e| e.0 < e.1).unwrap();
    let by = -2 * c.to_f64() as i64;
    let bad = inject(&m, &Fault::StructureConstant { i, j, k, by });
    assert_eq!(bad.algebra.coeff(i, j, k), -c);
    let r = run_suite(&bad, &SuiteConfig::default());
    let e = r.get("algebra.jacobi").unwrap();
    assert_eq!(e.status, Status::Fail);
    let w = e.witness.clone().unwrap();
    println!("{w}");
    assert!(w.contains('(') || w.contains('['), "{w}");
}
