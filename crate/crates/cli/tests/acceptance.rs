//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are always printed; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;

use sasaki_core::clifford::build_even_clifford;
use sasaki_core::faults::{inject, standard_faults, Fault};
use sasaki_core::geometry::{self, Context};
use sasaki_core::models::{
    build_alekseevsky, build_symmetric, example_model, h_deform, SasakiModel, SymmetricFamily, Variant,
};
use sasaki_core::scalars::{QSqrt2, Scalar};
use sasaki_core::serial;
use sasaki_core::suite::{run_suite, CheckReport, Status, SuiteConfig, CHECKS};

type Q = QSqrt2;

fn q(v: i64) -> Q {
    Q::from_i64(v)
}

struct Golden {
    name: &'static str,
    model: SasakiModel<Q>,
    report: CheckReport,
}

fn golden() -> Vec<Golden> {
    let sym = |f, n, v, a, d| build_symmetric(f, n, v, q(a), q(d)).unwrap();
    let models = vec![
        ("S7 (1,2)", sym(SymmetricFamily::Sp, 1, Variant::Compact, 1, 2)),
        ("S7 (2,1)", sym(SymmetricFamily::Sp, 1, Variant::Compact, 2, 1)),
        ("Aloff-Wallach (2,1)", example_model("aloff-wallach", q(2), q(1)).unwrap()),
        ("SU(2,1)/S1 (1,-1)", example_model("su21", q(1), q(-1)).unwrap()),
        ("Sp(1,1)/Sp(1) (1,-1)", sym(SymmetricFamily::Sp, 1, Variant::Noncompact, 1, -1)),
        ("SO n=3 (2,1)", sym(SymmetricFamily::So, 3, Variant::Compact, 2, 1)),
        ("T(1) (1,-1)", build_alekseevsky(2, 1, q(1), q(-1)).unwrap()),
    ];
    models
        .into_iter()
        .map(|(name, model)| {
            let report = run_suite(&model, &SuiteConfig::default());
            Golden { name, model, report }
        })
        .collect()
}

/// Every listed check passes with literal residual 0 on every golden model.
fn exact_zero(gs: &[Golden], ids: &[&str], allow_skip: bool) -> Result<String, String> {
    for g in gs {
        for id in ids {
            let c = g.report.get(id).ok_or_else(|| format!("{id} missing"))?;
            match c.status {
                Status::Pass if c.residual.as_deref() == Some("0") => {}
                Status::Skipped if allow_skip => {}
                _ => return Err(format!("{}: {id} {:?} residual {:?} {:?}", g.name, c.status, c.residual, c.witness)),
            }
        }
    }
    Ok(format!("{} checks x {} models, residual 0", ids.len(), gs.len()))
}

fn c1(gs: &[Golden]) -> Result<String, String> {
    exact_zero(
        gs,
        &[
            "algebra.jacobi",
            "grading.subalgebra",
            "grading.reductive",
            "grading.brackets",
            "structure.metric",
            "structure.compatibility",
            "structure.quaternionic",
            "structure.d_eta",
            "structure.equivariance",
        ],
        false,
    )
}

fn c2(gs: &[Golden]) -> Result<String, String> {
    exact_zero(gs, &["reeb.brackets"], false)
}

fn c3(gs: &[Golden]) -> Result<String, String> {
    exact_zero(gs, &["torsion.closed_form", "torsion.form", "torsion.reeb"], false)?;
    let mut seen = Vec::new();
    for g in gs {
        let m = &g.model;
        let ctx = Context::new(m).map_err(|e| e.to_string())?;
        let t = geometry::torsion_of(&ctx, &geometry::canonical_nomizu(&ctx));
        let got = geometry::tensor12_apply(&t, &m.xi[0], &m.xi[1]);
        let coef = q(2) * (m.delta.clone() - q(4) * m.alpha.clone());
        let want: Vec<Q> = m.xi[2].iter().map(|x| coef.clone() * x.clone()).collect();
        if got != want {
            return Err(format!("{}: T(xi1,xi2) = {got:?}", g.name));
        }
        seen.push(format!("{} {}", g.name, coef.to_text()));
    }
    Ok(format!("T(xi1,xi2) = 2(delta-4alpha) xi3: {}", seen.join(", ")))
}

fn c4(gs: &[Golden]) -> Result<String, String> {
    exact_zero(
        gs,
        &["lc.torsion_free", "lc.metric", "canonical.metric", "canonical.phi", "canonical.xi", "canonical.torsion_parallel"],
        false,
    )
}

fn c5(gs: &[Golden]) -> Result<String, String> {
    exact_zero(gs, &["canonical.cases"], false)?;
    for g in gs {
        let symmetric = g.model.provenance.is_symmetric_base();
        for id in ["lc.symmetric_cases", "canonical.symmetric_cases"] {
            let c = g.report.get(id).unwrap();
            let ok = if symmetric { c.status == Status::Pass && c.residual.as_deref() == Some("0") } else { c.status == Status::Skipped };
            if !ok {
                return Err(format!("{}: {id} {:?}", g.name, c.status));
            }
        }
    }
    Ok("case formulas on all models; symmetric-base formulas on the 6 symmetric models".into())
}

fn c6(gs: &[Golden]) -> Result<String, String> {
    exact_zero(gs, &["curvature.vanishing", "curvature.vertical", "curvature.mixed", "curvature.horizontal"], false)?;
    // R(xi1,xi2,xi1,xi2) = -4 alpha beta, including the generic sphere
    let s7 = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(1), q(3)).unwrap();
    let mut models: Vec<(&str, &SasakiModel<Q>)> = gs.iter().map(|g| (g.name, &g.model)).collect();
    models.push(("S7 (1,3)", &s7));
    let mut generic = String::new();
    for (name, m) in models {
        let ctx = Context::new(m).map_err(|e| e.to_string())?;
        let r = geometry::curvature(&ctx, &geometry::canonical_nomizu(&ctx));
        let v = r.eval(&m.xi[0], &m.xi[1], &m.xi[0], &m.xi[1]);
        let want = -(q(4) * m.alpha.clone() * m.beta());
        if v != want {
            return Err(format!("{name}: R(xi1,xi2,xi1,xi2) = {v}, expected {want}"));
        }
        if name == "S7 (1,3)" {
            if v != q(-8) {
                return Err(format!("S7 (1,3) gives {v}"));
            }
            generic = v.to_text();
        }
        if m.beta().is_zero() {
            // parallel: every component with a vertical slot vanishes
            let dm = ctx.dm;
            for a in 0..dm {
                for b in 0..dm {
                    for c in 0..dm {
                        for d in 0..dm {
                            let vertical = [a, b, c, d].iter().any(|&i| ctx.is_vertical(i));
                            if vertical && !r.at(a, b, c, d).is_zero() {
                                return Err(format!("{name}: parallel R({a},{b},{c},{d}) = {}", r.at(a, b, c, d)));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("R(xi1,xi2,xi1,xi2) = -4 alpha beta everywhere ({generic} at (1,3)); parallel S7 has no vertical curvature; sign factor +1"))
}

fn c7(gs: &[Golden]) -> Result<String, String> {
    exact_zero(gs, &["ricci.closed_form"], false)?;
    let m = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(1), q(1)).unwrap();
    let ctx = Context::new(&m).map_err(|e| e.to_string())?;
    let ric = geometry::ricci(&ctx, &geometry::curvature(&ctx, &geometry::levi_civita_nomizu(&ctx)));
    if ric != m.g.scale(&q(6)) {
        return Err(format!("3-Sasaki S7 Ricci {ric:?}"));
    }
    Ok("closed form on all models; 3-Sasaki S7 gives Ric = 6g".into())
}

fn c8(gs: &[Golden]) -> Result<String, String> {
    exact_zero(gs, &["oneill.a_formula", "oneill.t_vanishes", "oneill.a_norm", "base.scalar"], false)?;
    let s7 = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, q(1), q(1)).unwrap();
    let r = run_suite(&s7, &SuiteConfig::default());
    let scal = |r: &CheckReport| r.get("base.scalar").and_then(|c| c.value.clone()).unwrap_or_default();
    let t1 = gs.iter().find(|g| g.name.starts_with("T(1)")).unwrap();
    let (a, b) = (scal(&r), scal(&t1.report));
    if a != "48" || b != "-384" {
        return Err(format!("scal_N {a} on S7 (1,1), {b} on T(1)"));
    }
    let a2 = t1.report.get("oneill.a_norm").and_then(|c| c.value.clone()).unwrap_or_default();
    Ok(format!("scal_N = 48 on S7 (1,1), -384 on T(1); sum |A|^2 = {a2} on T(1)"))
}

fn c9(gs: &[Golden]) -> Result<String, String> {
    for qq in 0..3 {
        let rep = build_even_clifford::<Q>(qq).map_err(|e| e.to_string())?;
        if !rep.relation_residual().is_zero() {
            return Err(format!("q={qq} relation residual {}", rep.relation_residual()));
        }
    }
    let t1 = gs.iter().find(|g| g.name.starts_with("T(1)")).unwrap();
    exact_zero(std::slice::from_ref(t1), &["clifford.relations", "clifford.pi"], false)?;
    let detail = t1.report.get("clifford.pi").and_then(|c| c.detail.clone()).unwrap_or_default();
    Ok(format!("relations at q=0,1,2; Pi equivariant, b > 0, permutation independent, invariant; {detail}"))
}

fn c10(gs: &[Golden]) -> Result<String, String> {
    let t1 = gs.iter().find(|g| g.name.starts_with("T(1)")).unwrap();
    let mut out = Vec::new();
    for id in ["alekseevsky.matrix_model", "alekseevsky.projections"] {
        let c = t1.report.get(id).unwrap();
        if c.status != Status::Pass || c.residual.as_deref() != Some("0") {
            return Err(format!("{id} {:?} {:?}", c.status, c.witness));
        }
        out.push(c.detail.clone().unwrap_or_else(|| id.to_string()));
    }
    Ok(out.join("; "))
}

const STRUCTURE: [&str; 6] =
    ["structure.metric", "structure.compatibility", "structure.quaternionic", "structure.d_eta", "structure.equivariance", "reeb.brackets"];

fn tensors_equal(a: &SasakiModel<Q>, b: &SasakiModel<Q>) -> bool {
    a.alpha == b.alpha && a.delta == b.delta && a.algebra == b.algebra && a.xi == b.xi && a.eta == b.eta && a.phi == b.phi && a.g == b.g
}

fn deform_inverse(a: &Q, b: &Q, c: &Q) -> (Q, Q, Q) {
    let ai = a.inv().unwrap();
    let ci = c.inv().unwrap();
    let bi = -(b.clone() * ai.clone() * ci.clone() * ci.clone());
    (ai, bi, ci)
}

fn c11(gs: &[Golden]) -> Result<String, String> {
    let mut count = 0;
    for g in gs {
        let m = &g.model;
        let mut params: Vec<(Q, Q, Q, bool)> = vec![(q(4), q(0), q(2), false), (Q::frac(1, 4), Q::frac(3, 4), q(-1), false)];
        if m.alpha.signum() * m.delta.signum() > 0 {
            // a = alpha delta, c = delta, b = c^2 - a
            let a = m.alpha.clone() * m.delta.clone();
            let c = m.delta.clone();
            params.push((a.clone(), c.clone() * c.clone() - a, c, true));
        }
        for (a, b, c, normalizing) in params {
            let d = h_deform(m, a.clone(), b.clone(), c.clone()).map_err(|e| format!("{}: {e}", g.name))?;
            let wa = m.alpha.clone() * c.clone() * a.inv().unwrap();
            let wd = m.delta.clone() * c.inv().unwrap();
            if d.alpha != wa || d.delta != wd {
                return Err(format!("{}: deformed to ({}, {})", g.name, d.alpha, d.delta));
            }
            if normalizing && (d.alpha != q(1) || d.delta != q(1)) {
                return Err(format!("{}: positive normalization gave ({}, {})", g.name, d.alpha, d.delta));
            }
            let r = run_suite(&d, &SuiteConfig::default());
            for id in STRUCTURE.iter().chain(["algebra.jacobi"].iter()) {
                let e = r.get(id).unwrap();
                if e.status != Status::Pass {
                    return Err(format!("{} deformed by ({a},{b},{c}): {id} {:?} {:?}", g.name, e.status, e.witness));
                }
            }
            let (ai, bi, ci) = deform_inverse(&a, &b, &c);
            let back = h_deform(&d, ai, bi, ci).map_err(|e| e.to_string())?;
            if !tensors_equal(&back, m) {
                return Err(format!("{}: inverse deformation does not restore the tensors", g.name));
            }
            count += 1;
        }
    }
    Ok(format!("{count} deformations pass the structure checks with (alpha c/a, delta/c) and invert exactly; positive models land on (1,1)"))
}

fn cli_exit(model: &SasakiModel<Q>) -> Option<i32> {
    let dir = tempfile::tempdir().ok()?;
    let path = dir.path().join("faulty.json");
    std::fs::write(&path, serial::to_json(model)).ok()?;
    Command::new(env!("CARGO_BIN_EXE_sasaki")).arg("verify").arg(&path).output().ok()?.status.code()
}

fn c12(gs: &[Golden]) -> Result<String, String> {
    let mut failed_somewhere: BTreeMap<&str, usize> = CHECKS.iter().map(|c| (c.id, 0)).collect();
    let mut vacuous = Vec::new();
    let mut runs = 0;
    for g in gs {
        let mut pending: Vec<&str> =
            g.report.checks.iter().filter(|c| c.status == Status::Pass).map(|c| c.id.as_str()).collect();
        for f in standard_faults(&g.model) {
            let r = run_suite(&inject(&g.model, &f), &SuiteConfig::default());
            runs += 1;
            pending.retain(|id| {
                let e = r.get(id).unwrap();
                let failed = e.status == Status::Fail && e.residual.as_deref().map_or(false, |x| x != "0");
                if failed {
                    *failed_somewhere.get_mut(id).unwrap() += 1;
                }
                !failed
            });
        }
        for id in pending {
            // [h, h] lies in h automatically when h is one-dimensional
            if id == "grading.subalgebra" && g.model.grading.h.len() <= 1 {
                vacuous.push(format!("{} {id}", g.name));
            } else {
                return Err(format!("{}: no fault makes {id} fail", g.name));
            }
        }
        let flip = Fault::StructureConstant { i: g.model.grading.v[0], j: g.model.grading.v[1], k: g.model.grading.v[2], by: 1 };
        match cli_exit(&inject(&g.model, &flip)) {
            Some(1) => {}
            other => return Err(format!("{}: verify on a faulty file exited with {other:?}", g.name)),
        }
    }
    if let Some((id, _)) = failed_somewhere.iter().find(|(_, n)| **n == 0) {
        return Err(format!("{id} never fails"));
    }
    Ok(format!(
        "all {} checks fail under single-entry faults ({runs} faulty runs, CLI exit 1); vacuous with dim h = 1: {}",
        CHECKS.len(),
        vacuous.join(", ")
    ))
}

fn main() {
    let t = std::time::Instant::now();
    let gs = golden();
    let criteria: [(&str, fn(&[Golden]) -> Result<String, String>); 12] = [
        ("construction validity", c1),
        ("Reeb brackets", c2),
        ("torsion", c3),
        ("connection axioms", c4),
        ("Nomizu case formulas", c5),
        ("curvature", c6),
        ("Ricci", c7),
        ("submersion", c8),
        ("Clifford layer", c9),
        ("T(1) cross-check", c10),
        ("deformation", c11),
        ("fault sensitivity", c12),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f(&gs) {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass ({:.1}s)", criteria.len() - failures, criteria.len(), t.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
