use proptest::prelude::*;

use sasaki_core::liealg::LieAlgebra;
use sasaki_core::linalg::dot;
use sasaki_core::models::{build_alekseevsky, build_symmetric, h_deform, SasakiModel, SymmetricFamily, Variant};
use sasaki_core::scalars::{QSqrt2, Scalar};
use sasaki_core::serial;
use sasaki_core::suite::{run_suite, Status, SuiteConfig};

fn arb_q() -> impl Strategy<Value = QSqrt2> {
    (-20i64..20, 1i64..12, -20i64..20, 1i64..12).prop_map(|(an, ad, bn, bd)| QSqrt2::from_parts(an, ad, bn, bd))
}

fn arb_small() -> impl Strategy<Value = QSqrt2> {
    (-3i64..4, 1i64..3).prop_map(|(n, d)| QSqrt2::frac(n, d))
}

fn sphere() -> SasakiModel<QSqrt2> {
    build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, QSqrt2::from_i64(2), QSqrt2::one()).unwrap()
}

fn t1_algebra() -> LieAlgebra<QSqrt2> {
    build_alekseevsky(2, 1, QSqrt2::one(), QSqrt2::from_i64(-1)).unwrap().algebra
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(x in arb_q(), y in arb_q(), z in arb_q()) {
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        prop_assert_eq!(x.clone() - x.clone(), QSqrt2::zero());
        if !x.is_zero() {
            prop_assert_eq!(x.clone() * x.inv().unwrap(), QSqrt2::one());
        }
    }

    #[test]
    fn order_is_compatible(x in arb_q(), y in arb_q()) {
        prop_assert!((x.clone() * x.clone()).signum() >= 0);
        prop_assert_eq!((x.clone() - y.clone()).signum(), -(y.clone() - x.clone()).signum());
        if (x.clone() - y.clone()).signum() > 0 {
            prop_assert!(x.to_f64() >= y.to_f64());
        }
    }

    #[test]
    fn text_round_trip(x in arb_q()) {
        prop_assert_eq!(QSqrt2::parse_text(&x.to_text()).unwrap(), x.clone());
        prop_assert_eq!(<f64 as Scalar>::parse_text(&x.to_f64().to_text()).unwrap(), x.to_f64());
    }

    #[test]
    fn squares_have_roots(x in arb_q()) {
        let r = (x.clone() * x.clone()).sqrt_if_representable().unwrap();
        prop_assert_eq!(r.clone() * r.clone(), x.clone() * x.clone());
        prop_assert!(r.signum() >= 0);
    }

    #[test]
    fn bracket_bilinear_and_antisymmetric(
        x in prop::collection::vec(arb_small(), 20),
        y in prop::collection::vec(arb_small(), 20),
        z in prop::collection::vec(arb_small(), 20),
        s in arb_small(),
    ) {
        let alg = t1_algebra();
        let xy = alg.bracket(&x, &y);
        let yx = alg.bracket(&y, &x);
        prop_assert_eq!(xy.iter().zip(&yx).map(|(a, b)| a.clone() + b.clone()).collect::<Vec<_>>(), vec![QSqrt2::zero(); 20]);
        let sx_z: Vec<QSqrt2> = x.iter().zip(&z).map(|(a, b)| s.clone() * a.clone() + b.clone()).collect();
        let lhs = alg.bracket(&sx_z, &y);
        let zy = alg.bracket(&z, &y);
        let rhs: Vec<QSqrt2> = xy.iter().zip(&zy).map(|(a, b)| s.clone() * a.clone() + b.clone()).collect();
        prop_assert_eq!(lhs, rhs);
        // Jacobi on random elements
        let j1 = alg.bracket(&x, &alg.bracket(&y, &z));
        let j2 = alg.bracket(&y, &alg.bracket(&z, &x));
        let j3 = alg.bracket(&z, &alg.bracket(&x, &y));
        let sum: Vec<QSqrt2> = (0..20).map(|i| j1[i].clone() + j2[i].clone() + j3[i].clone()).collect();
        prop_assert_eq!(sum, vec![QSqrt2::zero(); 20]);
    }

    #[test]
    fn killing_form_is_invariant(
        x in prop::collection::vec(arb_small(), 10),
        y in prop::collection::vec(arb_small(), 10),
        z in prop::collection::vec(arb_small(), 10),
    ) {
        let alg = sphere().algebra;
        let k = alg.killing();
        let kf = |a: &[QSqrt2], b: &[QSqrt2]| dot(a, &k.apply(b));
        prop_assert_eq!(kf(&alg.bracket(&x, &y), &z), kf(&x, &alg.bracket(&y, &z)));
    }

    #[test]
    fn deformation_inverts(a in 1i64..6, ad in 1i64..4, c in prop::sample::select(vec![-3i64, -1, 1, 2, 5])) {
        let m = sphere();
        let a = QSqrt2::frac(a, ad);
        let c = QSqrt2::from_i64(c);
        let b = c.clone() * c.clone() - a.clone();
        let d = h_deform(&m, a.clone(), b.clone(), c.clone()).unwrap();
        prop_assert_eq!(d.alpha.clone(), m.alpha.clone() * c.clone() * a.inv().unwrap());
        prop_assert_eq!(d.delta.clone(), m.delta.clone() * c.inv().unwrap());
        let (ai, ci) = (a.inv().unwrap(), c.inv().unwrap());
        let bi = ci.clone() * ci.clone() - ai.clone();
        let back = h_deform(&d, ai, bi, ci).unwrap();
        prop_assert_eq!(&back.g, &m.g);
        prop_assert_eq!(&back.xi, &m.xi);
        prop_assert_eq!(&back.eta, &m.eta);
        prop_assert_eq!(&back.phi, &m.phi);
        let r = run_suite(&d, &SuiteConfig::default());
        for id in ["structure.compatibility", "structure.d_eta", "reeb.brackets", "torsion.reeb"] {
            prop_assert_eq!(r.get(id).unwrap().status, Status::Pass, "{}", id);
        }
    }

    #[test]
    fn serialization_round_trip(a in 1i64..6, c in prop::sample::select(vec![-2i64, 1, 3])) {
        let m = h_deform(&sphere(), QSqrt2::from_i64(a), QSqrt2::from_i64(c * c - a), QSqrt2::from_i64(c)).unwrap();
        let back: SasakiModel<QSqrt2> = serial::from_json(&serial::to_json(&m)).unwrap();
        prop_assert_eq!(back, m);
    }
}
