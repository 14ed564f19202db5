//! Verification suite: runs every identity on one model and collects a
//! `CheckReport`. Checks never abort the run; a failing or erroring check is
//! just a report entry.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::clifford::{build_even_clifford, wedge_pairs, CliffordRep};
use crate::geometry::{self, Context, Curvature, GeometryError, Nomizu, Residual};
use crate::linalg::{axpy, dot, unit, Matrix};
use crate::models::{alekseevsky_layout, build_symmetric, vector_in_layout, wedge_in_layout, perm_sign, Provenance, SasakiModel, SymmetricFamily, Variant};
use crate::oracles;
use crate::scalars::{Backend, QSqrt2, Scalar, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub description: String,
    /// The identity being tested, written out.
    pub identity: String,
    pub status: Status,
    /// Maximal absolute deviation, in the scalar text format.
    pub residual: Option<String>,
    pub residual_f64: Option<f64>,
    pub scale: Option<f64>,
    /// Location of the worst deviation.
    pub witness: Option<String>,
    /// Computed quantity for checks that measure one.
    pub value: Option<String>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub id: String,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub provenance: Provenance,
    pub backend: Backend,
    pub alpha: String,
    pub delta: String,
    pub dim_g: usize,
    pub dim_m: usize,
    pub n: usize,
    pub tolerance: f64,
    pub calibration: Vec<String>,
    pub checks: Vec<CheckEntry>,
    /// Wall time per check, kept apart from the entries so that the entries
    /// stay deterministic.
    #[serde(default)]
    pub timings: Vec<Timing>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| matches!(c.status, Status::Pass | Status::Skipped))
    }

    pub fn failures(&self) -> Vec<&CheckEntry> {
        self.checks.iter().filter(|c| matches!(c.status, Status::Fail | Status::Error)).collect()
    }

    pub fn get(&self, id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Report without timings, for comparisons.
    pub fn without_timings(&self) -> CheckReport {
        CheckReport { timings: Vec::new(), ..self.clone() }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let p = &self.provenance;
        s.push_str(&format!(
            "model {} n={} variant={:?} alpha={} delta={} backend={}\n",
            p.family, self.n, p.variant, self.alpha, self.delta, self.backend
        ));
        if let Some(note) = &p.note {
            s.push_str(&format!("note: {note}\n"));
        }
        s.push_str(&format!("dim g = {}, dim m = {}\n", self.dim_g, self.dim_m));
        for c in &self.calibration {
            s.push_str(&format!("calibration: {c}\n"));
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
                Status::Error => "ERR ",
            };
            s.push_str(&format!("{tag} {:<28} {}", c.id, c.identity));
            if let Some(r) = &c.residual {
                s.push_str(&format!("  residual={r}"));
            }
            if let Some(v) = &c.value {
                s.push_str(&format!("  value={v}"));
            }
            if let Some(w) = &c.witness {
                if c.status == Status::Fail {
                    s.push_str(&format!("  at {w}"));
                }
            }
            if let Some(d) = &c.detail {
                s.push_str(&format!("  ({d})"));
            }
            s.push('\n');
        }
        let fails = self.failures().len();
        s.push_str(&format!("{} checks, {} failing\n", self.checks.len(), fails));
        s
    }
}

pub struct CheckSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub identity: &'static str,
}

macro_rules! check_spec {
    ($id:expr, $d:expr, $i:expr) => {
        CheckSpec { id: $id, description: $d, identity: $i }
    };
}

/// Canonical check list, in execution order.
pub const CHECKS: &[CheckSpec] = &[
    check_spec!("algebra.jacobi", "Jacobi identity of the structure constants", "[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0"),
    check_spec!("algebra.realization", "matrix realization reproduces the structure constants", "[M_i, M_j] = sum_k c_ij^k M_k"),
    check_spec!("grading.subalgebra", "isotropy is a subalgebra", "[h,h] in h"),
    check_spec!("grading.reductive", "m is an h-module", "[h,m] in m"),
    check_spec!("grading.brackets", "bracket pattern of V and H", "[V,V] in V, [V,H] in H, [H,H]_H = 0 over symmetric bases"),
    check_spec!("structure.metric", "metric is symmetric and positive definite", "g = g^T > 0"),
    check_spec!("structure.compatibility", "almost contact metric relations", "eta_i(xi_j) = d_ij, phi_i^2 = -1 + xi_i eta_i, g(phi_i x, phi_i y) = g(x,y) - eta_i(x) eta_i(y), eta_i = g(xi_i, .)"),
    check_spec!("structure.quaternionic", "quaternionic relations of the three structures", "phi_i phi_j = phi_k + xi_i eta_j, phi_i xi_j = xi_k, eta_i o phi_j = eta_k"),
    check_spec!("structure.d_eta", "structure equation of the contact forms", "d eta_i = 2 alpha Phi_i + 2 (alpha - delta) eta_j ^ eta_k"),
    check_spec!("structure.equivariance", "h-invariance of the structure tensors", "ad(h) xi_i = 0, [ad(h), phi_i] = 0, ad(h)^T g + g ad(h) = 0"),
    check_spec!("reeb.brackets", "Reeb brackets", "[xi_i, xi_j] = 2 delta xi_k"),
    check_spec!("lc.torsion_free", "Levi-Civita map has no torsion", "Lambda^g_x y - Lambda^g_y x - [x,y]_m = 0"),
    check_spec!("lc.metric", "Levi-Civita map is metric", "g(Lambda^g_x y, z) + g(y, Lambda^g_x z) = 0"),
    check_spec!("lc.symmetric_cases", "Levi-Civita map over a symmetric base", "Lambda^g = [.,.]/2 on VxV and HxH, (1 - alpha/delta)[.,.] on VxH, (alpha/delta)[.,.] on HxV"),
    check_spec!("canonical.cases", "case formulas of the canonical Nomizu map", "Lambda_x y in H (x,y in H); beta/(2 delta)[x,y] (V,V); [x,y] - 2 alpha sum eta_i(x) phi_i y (V,H); 0 (H,V)"),
    check_spec!("canonical.symmetric_cases", "canonical map over a symmetric base", "Lambda_x = 0 for x in H, Lambda_x = beta/(2 delta) ad(x)_m for x in V"),
    check_spec!("torsion.closed_form", "torsion of the canonical map equals the closed form", "T(x,y) = 2 alpha sum (eta_i(y) phi_i x - eta_i(x) phi_i y + Phi_i(x,y) xi_i) - 2 (alpha - delta) sum_cyc eta_ij(x,y) xi_k"),
    check_spec!("torsion.form", "torsion 3-form in both closed forms, totally skew", "T = 2 alpha sum eta_i ^ Phi_i - 2 (alpha - delta) eta_123 = 2 alpha sum eta_i ^ Phi_i^H + 2 (delta - 4 alpha) eta_123"),
    check_spec!("torsion.reeb", "vertical torsion", "T(xi_1, xi_2) = 2 (delta - 4 alpha) xi_3"),
    check_spec!("canonical.metric", "canonical connection is metric", "nabla g = 0"),
    check_spec!("canonical.phi", "derivative of the structures", "nabla_x phi_i = beta (eta_k(x) phi_j - eta_j(x) phi_k)"),
    check_spec!("canonical.xi", "derivative of Reeb fields and forms", "nabla_x xi_i = beta (eta_k(x) xi_j - eta_j(x) xi_k), same for eta_i"),
    check_spec!("canonical.torsion_parallel", "parallel torsion", "nabla T = 0"),
    check_spec!("curvature.vanishing", "vanishing curvature components", "R(X,xi_i,Y,xi_j) = R(X,Y,Z,xi_i) = R(xi_i,xi_j,xi_k,X) = 0"),
    check_spec!("curvature.vertical", "vertical curvature", "R(xi_i,xi_j,xi_k,xi_l) = -4 alpha beta (d_ik d_jl - d_il d_jk)"),
    check_spec!("curvature.mixed", "mixed curvature", "R(xi_i,xi_j,X,Y) = 2 alpha beta Phi_k(X,Y)"),
    check_spec!("curvature.horizontal", "horizontal curvature identity, polarized in Z", "R(X,Y,Z,phi_i Z) + R(X,Y,phi_j Z,phi_k Z) = 2 alpha beta Phi_i(X,Y) |Z|^2"),
    check_spec!("ricci.closed_form", "Ricci tensor of the metric", "Ric = 2 alpha (2 delta (n+2) - 3 alpha) g + 2 (alpha - delta)((2n+3) alpha - delta) g|V"),
    check_spec!("oneill.a_formula", "O'Neill A tensor", "A_x y = -alpha sum Phi_i(x,y) xi_i = [x,y]_V / 2"),
    check_spec!("oneill.t_vanishes", "O'Neill T tensor vanishes", "(Lambda^g_U V)_H = 0, (Lambda^g_U X)_V = 0"),
    check_spec!("oneill.a_norm", "norm of A over an adapted frame", "sum |A_{e_a} e_b|^2 = 12 n alpha^2"),
    check_spec!("base.scalar", "scalar curvature of the base", "sum Ric(e_a,e_a) + 2 sum |A|^2 = 16 n (n+2) alpha delta"),
    check_spec!("base.qk_holonomy", "holonomy of the base inside sp(n) + sp(1)", "[R_N(x,y), phi_i] in span(phi_j, phi_k)"),
    check_spec!("alekseevsky.projections", "vertical projections of brackets", "table of [x,y]_V over the named basis"),
    check_spec!("clifford.relations", "even Clifford algebra relations", "(e_a e_b)^2 = -s_a s_b, products compose"),
    check_spec!("clifford.pi", "equivariant map Pi and the form b", "Pi equivariant, b > 0, b independent of the even permutation, q = 2 table up to scale"),
    check_spec!("alekseevsky.matrix_model", "explicit 10x10 matrix model", "structure constants of the matrices match the built algebra"),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub tolerance: Tolerance,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { tolerance: Tolerance::default() }
    }
}

enum Outcome<S> {
    Measured { res: Residual<S>, value: Option<String>, detail: Option<String> },
    Skipped(String),
    Error(String),
}

impl<S: Scalar> Outcome<S> {
    fn res(res: Residual<S>) -> Self {
        Outcome::Measured { res, value: None, detail: None }
    }
}

/// Shared intermediate results: Nomizu maps, curvature and Ricci.
struct Computed<'a, S> {
    ctx: Context<'a, S>,
    lc: Nomizu<S>,
    can: Nomizu<S>,
    r_can: Curvature<S>,
    r_lc: Curvature<S>,
    ric: Matrix<S>,
    frame: Result<Vec<Vec<S>>, GeometryError>,
}

/// Sign conventions fixed by calibration on exact sphere models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Calibration {
    pub curvature_sign: i64,
    pub ricci_sign: i64,
}

/// Runs the vertical-curvature identity on the generic sphere (alpha, delta) =
/// (1, 3) and the Einstein constant on the 3-Sasaki sphere to fix the global
/// signs of `R` and `Ric`.
pub fn calibrate() -> Calibration {
    let one = QSqrt2::one();
    let m = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, one.clone(), QSqrt2::from_i64(3))
        .expect("sphere model");
    let ctx = Context::new(&m).expect("sphere metric");
    let can = geometry::canonical_nomizu(&ctx);
    let r = geometry::curvature(&ctx, &can);
    let v = r.eval(&m.xi[0], &m.xi[1], &m.xi[0], &m.xi[1]);
    let expected = -(QSqrt2::from_i64(4) * m.alpha.clone() * m.beta());
    let curvature_sign = if v == expected {
        1
    } else if v == -expected {
        -1
    } else {
        0
    };
    let m = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, one.clone(), one).expect("sphere model");
    let ctx = Context::new(&m).expect("sphere metric");
    let lc = geometry::levi_civita_nomizu(&ctx);
    let ric = geometry::ricci(&ctx, &geometry::curvature(&ctx, &lc));
    let six = m.g.scale(&QSqrt2::from_i64(6));
    let ricci_sign = if ric == six {
        1
    } else if ric.scale(&QSqrt2::from_i64(-1)) == six {
        -1
    } else {
        0
    };
    Calibration { curvature_sign, ricci_sign }
}

fn signed<S: Scalar>(mut r: Curvature<S>, sign: i64) -> Curvature<S> {
    if sign < 0 {
        for x in r.data.iter_mut() {
            *x = -x.clone();
        }
    }
    r
}

pub fn run_suite<S: Scalar>(m: &SasakiModel<S>, config: &SuiteConfig) -> CheckReport {
    let cal = calibrate();
    let mut calibration = vec![format!(
        "curvature R(x,y) = [L_x,L_y] - L_[x,y]_m - ad([x,y]_h), sign factor {}",
        cal.curvature_sign
    )];
    calibration.push(format!("Ricci Ric(y,z) = tr(x -> R(x,y)z), sign factor {}", cal.ricci_sign));
    calibration.push(format!("spin lift e_a ^ e_b -> {}/{} e_a e_b", crate::clifford::SPIN_FACTOR.0, crate::clifford::SPIN_FACTOR.1));

    let mut timings = Vec::new();
    let t0 = Instant::now();
    let computed = Context::new(m).map(|ctx| {
        let lc = geometry::levi_civita_nomizu(&ctx);
        let can = geometry::canonical_nomizu(&ctx);
        let r_can = signed(geometry::curvature(&ctx, &can), cal.curvature_sign);
        let r_lc = signed(geometry::curvature(&ctx, &lc), cal.curvature_sign);
        let mut ric = geometry::ricci(&ctx, &r_lc);
        if cal.ricci_sign < 0 {
            ric = ric.scale(&S::from_i64(-1));
        }
        let frame = geometry::adapted_frame(&ctx, &config.tolerance);
        Computed { ctx, lc, can, r_can, r_lc, ric, frame }
    });
    timings.push(Timing { id: "setup".into(), millis: t0.elapsed().as_secs_f64() * 1e3 });

    let mut checks = Vec::new();
    for spec in CHECKS {
        let t = Instant::now();
        let outcome = match &computed {
            Ok(c) => run_check(spec.id, m, c),
            Err(e) => match spec.id {
                "algebra.jacobi" | "algebra.realization" | "grading.subalgebra" | "grading.reductive" => {
                    run_pre_context(spec.id, m)
                }
                _ => Outcome::Error(format!("{e}")),
            },
        };
        timings.push(Timing { id: spec.id.into(), millis: t.elapsed().as_secs_f64() * 1e3 });
        checks.push(entry(spec, outcome, &config.tolerance));
    }
    let _ = &computed.as_ref().map(|c| &c.r_lc);
    CheckReport {
        provenance: m.provenance.clone(),
        backend: S::BACKEND,
        alpha: m.alpha.to_text(),
        delta: m.delta.to_text(),
        dim_g: m.algebra.dim(),
        dim_m: m.dim_m(),
        n: m.n(),
        tolerance: config.tolerance.rel,
        calibration,
        checks,
        timings,
    }
}

fn entry<S: Scalar>(spec: &CheckSpec, outcome: Outcome<S>, tol: &Tolerance) -> CheckEntry {
    let mut e = CheckEntry {
        id: spec.id.into(),
        description: spec.description.into(),
        identity: spec.identity.into(),
        status: Status::Skipped,
        residual: None,
        residual_f64: None,
        scale: None,
        witness: None,
        value: None,
        detail: None,
    };
    match outcome {
        Outcome::Measured { res, value, detail } => {
            e.status = if res.passes(tol) { Status::Pass } else { Status::Fail };
            e.residual = Some(res.value.to_text());
            e.residual_f64 = Some(res.value.to_f64());
            e.scale = Some(res.scale);
            e.witness = res.witness;
            e.value = value;
            e.detail = detail;
        }
        Outcome::Skipped(why) => e.detail = Some(why),
        Outcome::Error(why) => {
            e.status = Status::Error;
            e.detail = Some(why);
        }
    }
    e
}

fn run_pre_context<S: Scalar>(id: &str, m: &SasakiModel<S>) -> Outcome<S> {
    match id {
        "algebra.jacobi" => check_jacobi(m),
        "algebra.realization" => check_realization(m),
        "grading.subalgebra" => check_closure(m, &m.grading.h, &m.grading.h, "h"),
        "grading.reductive" => check_closure(m, &m.grading.m(), &m.grading.h, "m"),
        _ => unreachable!(),
    }
}

fn run_check<S: Scalar>(id: &str, m: &SasakiModel<S>, c: &Computed<S>) -> Outcome<S> {
    match id {
        "algebra.jacobi" | "algebra.realization" | "grading.subalgebra" | "grading.reductive" => {
            run_pre_context(id, m)
        }
        "grading.brackets" => check_grading_brackets(c),
        "structure.metric" => check_metric(c),
        "structure.compatibility" => check_compatibility(c),
        "structure.quaternionic" => check_quaternionic(c),
        "structure.d_eta" => check_d_eta(c),
        "structure.equivariance" => check_equivariance(c),
        "reeb.brackets" => check_reeb(c),
        "lc.torsion_free" => check_torsion_free(c),
        "lc.metric" => Outcome::res(metric_derivative(c, &c.lc)),
        "lc.symmetric_cases" => check_lc_symmetric(c),
        "canonical.cases" => check_canonical_cases(c),
        "canonical.symmetric_cases" => check_canonical_symmetric(c),
        "torsion.closed_form" => check_torsion_closed(c),
        "torsion.form" => check_torsion_form(c),
        "torsion.reeb" => check_torsion_reeb(c),
        "canonical.metric" => Outcome::res(metric_derivative(c, &c.can)),
        "canonical.phi" => check_nabla_phi(c),
        "canonical.xi" => check_nabla_xi(c),
        "canonical.torsion_parallel" => check_nabla_torsion(c),
        "curvature.vanishing" => check_curv_vanishing(c),
        "curvature.vertical" => check_curv_vertical(c),
        "curvature.mixed" => check_curv_mixed(c),
        "curvature.horizontal" => check_curv_horizontal(c),
        "ricci.closed_form" => check_ricci(c),
        "oneill.a_formula" => check_a_formula(c),
        "oneill.t_vanishes" => check_t_vanishes(c),
        "oneill.a_norm" => check_a_norm(c),
        "base.scalar" => check_base_scalar(c),
        "base.qk_holonomy" => match geometry::qk_holonomy_check(&c.ctx) {
            Ok(r) => Outcome::res(r),
            Err(GeometryError::NotSymmetricBase) => Outcome::Skipped("not a symmetric base".into()),
            Err(e) => Outcome::Error(e.to_string()),
        },
        "alekseevsky.projections" => check_projections(c),
        "clifford.relations" => check_clifford_relations(m),
        "clifford.pi" => check_clifford_pi(m),
        "alekseevsky.matrix_model" => check_matrix_model(m),
        other => Outcome::Error(format!("unknown check {other}")),
    }
}

fn label<S: Scalar>(c: &Computed<S>, a: usize) -> String {
    let idx = c.ctx.model.grading.m()[a];
    c.ctx.model.algebra.labels()[idx].clone()
}

fn zero<S: Scalar>() -> S {
    S::zero()
}

fn check_jacobi<S: Scalar>(m: &SasakiModel<S>) -> Outcome<S> {
    let (v, w) = m.algebra.jacobi_residual();
    let labels = m.algebra.labels();
    let res = Residual {
        scale: v.to_f64().abs().max(max_structure_constant(m)),
        witness: w.map(|(i, j, k)| format!("({}, {}, {})", labels[i], labels[j], labels[k])),
        value: v,
    };
    Outcome::res(res)
}

fn max_structure_constant<S: Scalar>(m: &SasakiModel<S>) -> f64 {
    let s = m.algebra.entries().iter().map(|e| e.3.to_f64().abs()).fold(0.0, f64::max);
    s * s
}

fn check_realization<S: Scalar>(m: &SasakiModel<S>) -> Outcome<S> {
    match m.algebra.realization_residual() {
        None => Outcome::Skipped("no matrix realization stored".into()),
        Some(v) => Outcome::res(Residual { scale: max_structure_constant(m).sqrt(), witness: None, value: v }),
    }
}

/// `[acting, sub]` must stay in `sub`.
fn check_closure<S: Scalar>(m: &SasakiModel<S>, sub: &[usize], acting: &[usize], name: &str) -> Outcome<S> {
    let mut res = Residual::default();
    let labels = m.algebra.labels();
    for &a in acting {
        for &s in sub {
            for (k, v) in m.algebra.bracket_basis(a, s) {
                if !sub.contains(k) {
                    res.observe(v, &zero(), || format!("[{}, {}] has a {} component outside {name}", labels[a], labels[s], labels[*k]));
                } else {
                    res.scale = res.scale.max(v.to_f64().abs());
                }
            }
        }
    }
    Outcome::res(res)
}

fn check_grading_brackets<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let sym = ctx.model.provenance.is_symmetric_base();
    let mut res = Residual::default();
    for a in 0..ctx.dm {
        for b in 0..ctx.dm {
            let (va, vb) = (ctx.is_vertical(a), ctx.is_vertical(b));
            for (r, v) in ctx.br_m[a][b].iter().enumerate() {
                let must_vanish = match (va, vb) {
                    (true, true) => !ctx.is_vertical(r),
                    (true, false) | (false, true) => ctx.is_vertical(r),
                    (false, false) => sym && !ctx.is_vertical(r),
                };
                if must_vanish {
                    res.observe(v, &zero(), || format!("[{}, {}] component {}", label(c, a), label(c, b), label(c, r)));
                } else {
                    res.scale = res.scale.max(v.to_f64().abs());
                }
            }
            if va {
                for (t, v) in ctx.br_h[a][b].iter().enumerate() {
                    res.observe(v, &zero(), || format!("[{}, {}] has h component {t}", label(c, a), label(c, b)));
                }
            }
        }
    }
    Outcome::res(res)
}

fn check_metric<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let g = &c.ctx.model.g;
    let mut res = Residual::default();
    for r in 0..g.rows {
        for s in 0..g.cols {
            res.observe(&g[(r, s)], &g[(s, r)], || format!("g({}, {}) not symmetric", label(c, r), label(c, s)));
        }
    }
    if !g.is_positive_definite() {
        res.value = S::one();
        res.witness = Some("g is not positive definite".into());
    }
    Outcome::res(res)
}

fn observe_matrix<S: Scalar>(res: &mut Residual<S>, c: &Computed<S>, lhs: &Matrix<S>, rhs: &Matrix<S>, what: &str) {
    for r in 0..lhs.rows {
        for s in 0..lhs.cols {
            res.observe(&lhs[(r, s)], &rhs[(r, s)], || format!("{what} entry ({}, {})", label(c, r), label(c, s)));
        }
    }
}

fn outer<S: Scalar>(u: &[S], v: &[S]) -> Matrix<S> {
    let mut m = Matrix::zeros(u.len(), v.len());
    for (r, a) in u.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (s, b) in v.iter().enumerate() {
            m[(r, s)] = a.mul_ref(b);
        }
    }
    m
}

fn check_compatibility<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let m = c.ctx.model;
    let dm = c.ctx.dm;
    let mut res = Residual::default();
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { S::one() } else { S::zero() };
            res.observe(&dot(&m.eta[i], &m.xi[j]), &d, || format!("eta_{}(xi_{})", i + 1, j + 1));
        }
        let phi = &m.phi[i];
        res.observe_vec(&phi.apply(&m.xi[i]), &vec![S::zero(); dm], |t| format!("phi_{0} xi_{0} component {t}", i + 1));
        res.observe_vec(&phi.apply_left(&m.eta[i]), &vec![S::zero(); dm], |t| format!("eta_{0} o phi_{0} component {t}", i + 1));
        let sq = phi.mul(phi);
        let expect = Matrix::identity(dm).scale(&S::from_i64(-1)).add(&outer(&m.xi[i], &m.eta[i]));
        observe_matrix(&mut res, c, &sq, &expect, &format!("phi_{0}^2 = -1 + xi_{0} eta_{0}", i + 1));
        let lhs = phi.transpose().mul(&m.g).mul(phi);
        let rhs = m.g.sub(&outer(&m.eta[i], &m.eta[i]));
        observe_matrix(&mut res, c, &lhs, &rhs, &format!("g(phi_{0}., phi_{0}.)", i + 1));
        res.observe_vec(&m.g.apply_left(&m.xi[i]), &m.eta[i], |t| format!("eta_{} = g(xi, .) component {t}", i + 1));
    }
    Outcome::res(res)
}

fn check_quaternionic<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let m = c.ctx.model;
    let mut res = Residual::default();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let lhs = m.phi[i].mul(&m.phi[j]);
        let rhs = m.phi[k].add(&outer(&m.xi[i], &m.eta[j]));
        observe_matrix(&mut res, c, &lhs, &rhs, &format!("phi_{}phi_{}", i + 1, j + 1));
        let lhs = m.phi[j].mul(&m.phi[i]);
        let rhs = m.phi[k].scale(&S::from_i64(-1)).add(&outer(&m.xi[j], &m.eta[i]));
        observe_matrix(&mut res, c, &lhs, &rhs, &format!("phi_{}phi_{}", j + 1, i + 1));
        res.observe_vec(&m.phi[i].apply(&m.xi[j]), &m.xi[k], |t| format!("phi_{}xi_{} component {t}", i + 1, j + 1));
        let neg: Vec<S> = m.xi[k].iter().map(|x| -x.clone()).collect();
        res.observe_vec(&m.phi[j].apply(&m.xi[i]), &neg, |t| format!("phi_{}xi_{} component {t}", j + 1, i + 1));
        res.observe_vec(&m.phi[j].apply_left(&m.eta[i]), &m.eta[k], |t| format!("eta_{} o phi_{} component {t}", i + 1, j + 1));
        let neg: Vec<S> = m.eta[k].iter().map(|x| -x.clone()).collect();
        res.observe_vec(&m.phi[i].apply_left(&m.eta[j]), &neg, |t| format!("eta_{} o phi_{} component {t}", j + 1, i + 1));
    }
    Outcome::res(res)
}

fn wedge1<S: Scalar>(ctx: &Context<S>, i: usize, j: usize, x: &[S], y: &[S]) -> S {
    ctx.eta(i, x).mul_ref(&ctx.eta(j, y)) - ctx.eta(i, y).mul_ref(&ctx.eta(j, x))
}

fn check_d_eta<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let two_a = S::from_i64(2) * m.alpha.clone();
    let c2 = S::from_i64(2) * (m.alpha.clone() - m.delta.clone());
    let mut res = Residual::default();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        for a in 0..ctx.dm {
            for b in 0..ctx.dm {
                let (x, y) = (ctx.e(a), ctx.e(b));
                let lhs = -ctx.eta(i, &ctx.br_m[a][b]);
                let rhs = two_a.mul_ref(&ctx.fund_form(i, &x, &y)) + c2.mul_ref(&wedge1(ctx, j, k, &x, &y));
                res.observe(&lhs, &rhs, || format!("d eta_{}({}, {})", i + 1, label(c, a), label(c, b)));
            }
        }
    }
    Outcome::res(res)
}

fn check_equivariance<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let labels = m.algebra.labels();
    let mut res = Residual::default();
    let zero_v = vec![S::zero(); ctx.dm];
    let zero_m = Matrix::zeros(ctx.dm, ctx.dm);
    for (t, ad) in ctx.ad_h.iter().enumerate() {
        let h = &labels[m.grading.h[t]];
        for i in 0..3 {
            res.observe_vec(&ad.apply(&m.xi[i]), &zero_v, |r| format!("ad({h}) xi_{} component {r}", i + 1));
            res.observe_vec(&ad.apply_left(&m.eta[i]), &zero_v, |r| format!("eta_{} o ad({h}) component {r}", i + 1));
            observe_matrix(&mut res, c, &ad.commutator(&m.phi[i]), &zero_m, &format!("[ad({h}), phi_{}]", i + 1));
        }
        let skew = ad.transpose().mul(&m.g).add(&m.g.mul(ad));
        observe_matrix(&mut res, c, &skew, &zero_m, &format!("g-skewness of ad({h})"));
    }
    Outcome::res(res)
}

fn check_reeb<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let mut res = Residual::default();
    let two_d = S::from_i64(2) * m.delta.clone();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let br = ctx.bracket_m(&m.xi[i], &m.xi[j]);
        let expect = crate::linalg::scale_vec(&two_d, &m.xi[k]);
        res.observe_vec(&br, &expect, |t| format!("[xi_{}, xi_{}] component {t}", i + 1, j + 1));
        let bh = ctx.bracket_h(&m.xi[i], &m.xi[j]);
        res.observe_vec(&bh, &vec![S::zero(); bh.len()], |t| format!("[xi_{}, xi_{}] h component {t}", i + 1, j + 1));
    }
    Outcome::res(res)
}

fn check_torsion_free<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let t = geometry::torsion_of(&c.ctx, &c.lc);
    let mut res = Residual::default();
    let zero_v = vec![S::zero(); c.ctx.dm];
    for a in 0..c.ctx.dm {
        for b in 0..c.ctx.dm {
            res.observe_vec(&t[a][b], &zero_v, |r| format!("T({}, {}) component {}", label(c, a), label(c, b), label(c, r)));
        }
    }
    Outcome::res(res)
}

/// `Lambda_x^T g + g Lambda_x = 0` for every basis direction.
fn metric_derivative<S: Scalar>(c: &Computed<S>, lambda: &Nomizu<S>) -> Residual<S> {
    let g = &c.ctx.model.g;
    let zero_m = Matrix::zeros(c.ctx.dm, c.ctx.dm);
    let mut res = Residual::default();
    for (a, l) in lambda.iter().enumerate() {
        let d = l.transpose().mul(g).add(&g.mul(l));
        observe_matrix(&mut res, c, &d, &zero_m, &format!("(nabla_{} g)", label(c, a)));
    }
    res
}

fn not_symmetric<S: Scalar>(c: &Computed<S>) -> Option<Outcome<S>> {
    if c.ctx.model.provenance.is_symmetric_base() {
        None
    } else {
        Some(Outcome::Skipped("not a symmetric base".into()))
    }
}

fn check_lc_symmetric<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    if let Some(o) = not_symmetric(c) {
        return o;
    }
    let ctx = &c.ctx;
    let m = ctx.model;
    let half = S::frac(1, 2);
    let ratio = match m.alpha.div(&m.delta) {
        Ok(r) => r,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let one_minus = S::one() - ratio.clone();
    let mut res = Residual::default();
    for a in 0..ctx.dm {
        for b in 0..ctx.dm {
            let f = match (ctx.is_vertical(a), ctx.is_vertical(b)) {
                (true, true) | (false, false) => &half,
                (true, false) => &one_minus,
                (false, true) => &ratio,
            };
            let expect = crate::linalg::scale_vec(f, &ctx.br_m[a][b]);
            res.observe_vec(&c.lc[a].col(b), &expect, |r| format!("Lambda^g_{} {} component {}", label(c, a), label(c, b), label(c, r)));
        }
    }
    Outcome::res(res)
}

fn check_canonical_cases<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let b2d = match m.beta().div(&(S::from_i64(2) * m.delta.clone())) {
        Ok(r) => r,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let two_a = S::from_i64(2) * m.alpha.clone();
    let mut res = Residual::default();
    for a in 0..ctx.dm {
        for b in 0..ctx.dm {
            let got = c.can[a].col(b);
            let at = |r: usize| format!("Lambda_{} {} component {}", label(c, a), label(c, b), label(c, r));
            match (ctx.is_vertical(a), ctx.is_vertical(b)) {
                (false, false) => {
                    for r in ctx.v_range() {
                        res.observe(&got[r], &zero(), || at(r));
                    }
                }
                (true, true) => {
                    let expect = crate::linalg::scale_vec(&b2d, &ctx.br_m[a][b]);
                    res.observe_vec(&got, &expect, at);
                }
                (true, false) => {
                    let mut expect = ctx.br_m[a][b].clone();
                    let x = ctx.e(a);
                    for i in 0..3 {
                        let coef = -(ctx.eta(i, &x).mul_ref(&two_a));
                        crate::linalg::axpy(&mut expect, &coef, &m.phi[i].col(b));
                    }
                    res.observe_vec(&got, &expect, at);
                }
                (false, true) => {
                    res.observe_vec(&got, &vec![S::zero(); ctx.dm], at);
                }
            }
        }
    }
    Outcome::res(res)
}

fn check_canonical_symmetric<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    if let Some(o) = not_symmetric(c) {
        return o;
    }
    let ctx = &c.ctx;
    let m = ctx.model;
    let b2d = match m.beta().div(&(S::from_i64(2) * m.delta.clone())) {
        Ok(r) => r,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let mut res = Residual::default();
    for a in 0..ctx.dm {
        for b in 0..ctx.dm {
            let expect = if ctx.is_vertical(a) {
                crate::linalg::scale_vec(&b2d, &ctx.br_m[a][b])
            } else {
                vec![S::zero(); ctx.dm]
            };
            res.observe_vec(&c.can[a].col(b), &expect, |r| format!("Lambda_{} {} component {}", label(c, a), label(c, b), label(c, r)));
        }
    }
    Outcome::res(res)
}

fn check_torsion_closed<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let of = geometry::torsion_of(&c.ctx, &c.can);
    let closed = geometry::canonical_torsion(&c.ctx);
    let mut res = Residual::default();
    for a in 0..c.ctx.dm {
        for b in 0..c.ctx.dm {
            res.observe_vec(&of[a][b], &closed[a][b], |r| format!("T({}, {}) component {}", label(c, a), label(c, b), label(c, r)));
        }
    }
    Outcome::res(res)
}

/// `(eta ^ Phi)(x,y,z) = eta(x)Phi(y,z) - eta(y)Phi(x,z) + eta(z)Phi(x,y)`.
fn eta_wedge_form<S: Scalar>(eta: &[S], phi: &Matrix<S>, a: usize, b: usize, cc: usize) -> S {
    eta[a].mul_ref(&phi[(b, cc)]) - eta[b].mul_ref(&phi[(a, cc)]) + eta[cc].mul_ref(&phi[(a, b)])
}

fn eta123<S: Scalar>(eta: &[Vec<S>], a: usize, b: usize, c: usize) -> S {
    let m = Matrix::from_rows(vec![
        vec![eta[0][a].clone(), eta[0][b].clone(), eta[0][c].clone()],
        vec![eta[1][a].clone(), eta[1][b].clone(), eta[1][c].clone()],
        vec![eta[2][a].clone(), eta[2][b].clone(), eta[2][c].clone()],
    ]);
    let d = |i: usize, j: usize| m[(i, j)].clone();
    d(0, 0) * (d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1)) - d(0, 1) * (d(1, 0) * d(2, 2) - d(1, 2) * d(2, 0))
        + d(0, 2) * (d(1, 0) * d(2, 1) - d(1, 1) * d(2, 0))
}

fn check_torsion_form<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let dm = ctx.dm;
    let t = geometry::torsion_of(ctx, &c.can);
    // Phi_i as matrices, Phi_i(x,y) = g(x, phi_i y)
    let phis: Vec<Matrix<S>> = m.phi.iter().map(|p| m.g.mul(p)).collect();
    let phis_h: Vec<Matrix<S>> = (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let w = outer(&m.eta[j], &m.eta[k]).sub(&outer(&m.eta[k], &m.eta[j]));
            phis[i].add(&w)
        })
        .collect();
    let two_a = S::from_i64(2) * m.alpha.clone();
    let c1 = -(S::from_i64(2) * (m.alpha.clone() - m.delta.clone()));
    let c2 = S::from_i64(2) * (m.delta.clone() - S::from_i64(4) * m.alpha.clone());
    let mut res = Residual::default();
    for a in 0..dm {
        for b in 0..dm {
            let low = m.g.apply_left(&t[a][b]);
            for cc in 0..dm {
                let e = eta123(&m.eta, a, b, cc);
                let mut f1 = c1.mul_ref(&e);
                let mut f2 = c2.mul_ref(&e);
                for i in 0..3 {
                    f1 += two_a.mul_ref(&eta_wedge_form(&m.eta[i], &phis[i], a, b, cc));
                    f2 += two_a.mul_ref(&eta_wedge_form(&m.eta[i], &phis_h[i], a, b, cc));
                }
                let at = |w: &str| format!("{w} at ({}, {}, {})", label(c, a), label(c, b), label(c, cc));
                res.observe(&low[cc], &f1, || at("first form"));
                res.observe(&low[cc], &f2, || at("horizontal form"));
                let swapped = m.g.apply_left(&t[a][cc])[b].clone();
                res.observe(&low[cc], &(-swapped), || at("skewness"));
            }
        }
    }
    Outcome::res(res)
}

fn check_torsion_reeb<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let t = geometry::torsion_of(ctx, &c.can);
    let got = geometry::tensor12_apply(&t, &m.xi[0], &m.xi[1]);
    let coef = S::from_i64(2) * (m.delta.clone() - S::from_i64(4) * m.alpha.clone());
    let expect = crate::linalg::scale_vec(&coef, &m.xi[2]);
    let mut res = Residual::default();
    res.observe_vec(&got, &expect, |r| format!("T(xi_1, xi_2) component {}", label(c, r)));
    let val = ctx.g(&got, &m.xi[2]);
    Outcome::Measured { res, value: Some(format!("g(T(xi_1,xi_2),xi_3) = {}", val.to_text())), detail: None }
}

fn check_nabla_phi<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let beta = m.beta();
    let mut res = Residual::default();
    for a in 0..ctx.dm {
        let x = ctx.e(a);
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let d = c.can[a].commutator(&m.phi[i]);
            let expect = m.phi[j]
                .scale(&ctx.eta(k, &x))
                .sub(&m.phi[k].scale(&ctx.eta(j, &x)))
                .scale(&beta);
            observe_matrix(&mut res, c, &d, &expect, &format!("nabla_{} phi_{}", label(c, a), i + 1));
        }
    }
    Outcome::res(res)
}

fn check_nabla_xi<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let beta = m.beta();
    let mut res = Residual::default();
    for a in 0..ctx.dm {
        let x = ctx.e(a);
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let (ek, ej) = (ctx.eta(k, &x).mul_ref(&beta), ctx.eta(j, &x).mul_ref(&beta));
            let got = c.can[a].apply(&m.xi[i]);
            let mut expect = crate::linalg::scale_vec(&ek, &m.xi[j]);
            crate::linalg::axpy(&mut expect, &-ej.clone(), &m.xi[k]);
            res.observe_vec(&got, &expect, |r| format!("nabla_{} xi_{} component {}", label(c, a), i + 1, label(c, r)));
            // (nabla_x eta)(y) = -eta(Lambda_x y)
            let got: Vec<S> = c.can[a].apply_left(&m.eta[i]).into_iter().map(|v| -v).collect();
            let mut expect = crate::linalg::scale_vec(&ek, &m.eta[j]);
            crate::linalg::axpy(&mut expect, &-ej, &m.eta[k]);
            res.observe_vec(&got, &expect, |r| format!("nabla_{} eta_{} component {}", label(c, a), i + 1, label(c, r)));
        }
    }
    Outcome::res(res)
}

fn check_nabla_torsion<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let dm = ctx.dm;
    let t = geometry::torsion_of(ctx, &c.can);
    let zero_v = vec![S::zero(); dm];
    let mut res = Residual::default();
    for a in 0..dm {
        let l = &c.can[a];
        for b in 0..dm {
            for cc in 0..dm {
                let mut d = l.apply(&t[b][cc]);
                let lb = l.col(b);
                let lc = l.col(cc);
                let t1 = geometry::tensor12_apply(&t, &lb, &ctx.e(cc));
                let t2 = geometry::tensor12_apply(&t, &ctx.e(b), &lc);
                for r in 0..dm {
                    d[r] = d[r].clone() - &t1[r] - &t2[r];
                }
                res.observe_vec(&d, &zero_v, |r| {
                    format!("(nabla_{} T)({}, {}) component {}", label(c, a), label(c, b), label(c, cc), label(c, r))
                });
            }
        }
    }
    Outcome::res(res)
}

fn check_curv_vanishing<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let r = &c.r_can;
    let hr: Vec<usize> = ctx.h_range().collect();
    let mut res = Residual::default();
    for &x in &hr {
        let ex = ctx.e(x);
        for i in 0..3 {
            for &y in &hr {
                let ey = ctx.e(y);
                for j in 0..3 {
                    let v = r.eval(&ex, &m.xi[i], &ey, &m.xi[j]);
                    res.observe(&v, &zero(), || format!("R({}, xi_{}, {}, xi_{})", label(c, x), i + 1, label(c, y), j + 1));
                }
                for &z in &hr {
                    let v = r.eval(&ex, &ey, &ctx.e(z), &m.xi[i]);
                    res.observe(&v, &zero(), || format!("R({}, {}, {}, xi_{})", label(c, x), label(c, y), label(c, z), i + 1));
                }
            }
            for j in 0..3 {
                for k in 0..3 {
                    let v = r.eval(&m.xi[i], &m.xi[j], &m.xi[k], &ex);
                    res.observe(&v, &zero(), || format!("R(xi_{}, xi_{}, xi_{}, {})", i + 1, j + 1, k + 1, label(c, x)));
                }
            }
        }
    }
    Outcome::res(res)
}

fn check_curv_vertical<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let m = c.ctx.model;
    let coef = -(S::from_i64(4) * m.alpha.clone() * m.beta());
    let kd = |a: usize, b: usize| if a == b { 1 } else { 0 };
    let mut res = Residual::default();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let v = c.r_can.eval(&m.xi[i], &m.xi[j], &m.xi[k], &m.xi[l]);
                    let e = coef.mul_ref(&S::from_i64(kd(i, k) * kd(j, l) - kd(i, l) * kd(j, k)));
                    res.observe(&v, &e, || format!("R(xi_{}, xi_{}, xi_{}, xi_{})", i + 1, j + 1, k + 1, l + 1));
                }
            }
        }
    }
    let v = c.r_can.eval(&m.xi[0], &m.xi[1], &m.xi[0], &m.xi[1]);
    Outcome::Measured { res, value: Some(format!("R(xi_1,xi_2,xi_1,xi_2) = {}", v.to_text())), detail: None }
}

fn check_curv_mixed<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let coef = S::from_i64(2) * m.alpha.clone() * m.beta();
    let mut res = Residual::default();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        for x in ctx.h_range() {
            for y in ctx.h_range() {
                let (ex, ey) = (ctx.e(x), ctx.e(y));
                let v = c.r_can.eval(&m.xi[i], &m.xi[j], &ex, &ey);
                let e = coef.mul_ref(&ctx.fund_form(k, &ex, &ey));
                res.observe(&v, &e, || format!("R(xi_{}, xi_{}, {}, {})", i + 1, j + 1, label(c, x), label(c, y)));
            }
        }
    }
    Outcome::res(res)
}

/// Polarization in `Z` of the horizontal identity:
/// `Q = M + M^T + N + N^T` with `M = B phi_i`, `N = phi_j^T B phi_k`,
/// `B(z,w) = R(x,y,z,w)`, must equal `4 alpha beta Phi_i(x,y) g` on `H x H`.
fn check_curv_horizontal<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let coef = S::from_i64(4) * m.alpha.clone() * m.beta();
    let hr: Vec<usize> = ctx.h_range().collect();
    let phit: Vec<Matrix<S>> = m.phi.iter().map(|p| p.transpose()).collect();
    let mut res = Residual::default();
    for &x in &hr {
        for &y in &hr {
            let b = c.r_can.slice(x, y);
            let skip = b.is_zero() && (0..3).all(|i| ctx.fund_form(i, &ctx.e(x), &ctx.e(y)).is_zero());
            if skip {
                continue;
            }
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                let mm = b.mul(&m.phi[i]);
                let nn = phit[j].mul(&b).mul(&m.phi[k]);
                let q = mm.add(&mm.transpose()).add(&nn).add(&nn.transpose());
                let f = coef.mul_ref(&ctx.fund_form(i, &ctx.e(x), &ctx.e(y)));
                for &z in &hr {
                    for &w in &hr {
                        let e = f.mul_ref(&m.g[(z, w)]);
                        res.observe(&q[(z, w)], &e, || {
                            format!("i={}, X={}, Y={}, Z={}, Z'={}", i + 1, label(c, x), label(c, y), label(c, z), label(c, w))
                        });
                    }
                }
            }
        }
    }
    Outcome::res(res)
}

fn check_ricci<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let expect = geometry::ricci_expected(c.ctx.model);
    let mut res = Residual::default();
    observe_matrix(&mut res, c, &c.ric, &expect, "Ric");
    Outcome::res(res)
}

fn check_a_formula<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let m = ctx.model;
    let mut res = Residual::default();
    let half = S::frac(1, 2);
    for a in ctx.h_range() {
        for b in ctx.h_range() {
            let (x, y) = (ctx.e(a), ctx.e(b));
            let got = geometry::oneill_a(ctx, &c.lc, &x, &y);
            let mut e1 = vec![S::zero(); ctx.dm];
            for i in 0..3 {
                let f = -(m.alpha.mul_ref(&ctx.fund_form(i, &x, &y)));
                crate::linalg::axpy(&mut e1, &f, &m.xi[i]);
            }
            let mut e2 = vec![S::zero(); ctx.dm];
            for r in ctx.v_range() {
                e2[r] = ctx.br_m[a][b][r].mul_ref(&half);
            }
            res.observe_vec(&got, &e1, |r| format!("A_{} {} component {}", label(c, a), label(c, b), label(c, r)));
            res.observe_vec(&got, &e2, |r| format!("A_{} {} vs bracket, component {}", label(c, a), label(c, b), label(c, r)));
        }
    }
    Outcome::res(res)
}

fn check_t_vanishes<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let ctx = &c.ctx;
    let mut res = Residual::default();
    for u in ctx.v_range() {
        for b in 0..ctx.dm {
            let col = c.lc[u].col(b);
            let range: Vec<usize> = if ctx.is_vertical(b) { ctx.h_range().collect() } else { ctx.v_range().collect() };
            for r in range {
                res.observe(&col[r], &zero(), || format!("Lambda^g_{} {} component {}", label(c, u), label(c, b), label(c, r)));
            }
        }
    }
    Outcome::res(res)
}

fn check_a_norm<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let frame = match &c.frame {
        Ok(f) => f,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let m = c.ctx.model;
    let got = geometry::a_norm_sq(&c.ctx, &c.lc, frame);
    let e = S::from_i64(12 * m.n() as i64) * m.alpha.clone() * m.alpha.clone();
    let mut res = Residual::default();
    res.observe(&got, &e, || "sum |A|^2".into());
    Outcome::Measured { res, value: Some(got.to_text()), detail: Some(format!("expected {}", e.to_text())) }
}

fn check_base_scalar<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let frame = match &c.frame {
        Ok(f) => f,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let m = c.ctx.model;
    let got = geometry::base_scalar(&c.ctx, &c.lc, &c.ric, frame);
    let e = geometry::base_scalar_expected(m);
    let mut res = Residual::default();
    res.observe(&got, &e, || "scal_N".into());
    Outcome::Measured { res, value: Some(got.to_text()), detail: Some(format!("expected {}", e.to_text())) }
}

fn alekseevsky_params<S: Scalar>(m: &SasakiModel<S>) -> Option<(usize, usize)> {
    if m.provenance.family == "alekseevsky" {
        Some((m.provenance.q.unwrap_or(0), m.provenance.l.unwrap_or(0)))
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Role {
    Sigma(usize),
    D,
    EhSigma(usize),
    E(usize),
    EhE(usize, usize),
    W(usize),
    Iso,
}

/// Expected `sigma` coefficients of `[x, y]_V` for two named basis vectors.
fn expected_projection<S: Scalar>(x: Role, y: Role, pi_v: &dyn Fn(usize, usize) -> [S; 3]) -> [S; 3] {
    use Role::*;
    let mut out = [S::zero(), S::zero(), S::zero()];
    let third = |i: usize, j: usize| 3 - i - j;
    match (x, y) {
        (Sigma(i), Sigma(j)) if i != j => out[third(i, j)] = S::from_i64(2 * perm_sign(i, j, third(i, j))),
        (D, EhSigma(i)) => out[i] = S::from_i64(-1),
        (EhSigma(i), D) => out[i] = S::one(),
        (EhSigma(i), EhSigma(j)) if i != j => out[third(i, j)] = S::from_i64(-2 * perm_sign(i, j, third(i, j))),
        (E(l), EhE(l2, i)) if l == l2 => out[i] = S::from_i64(-1),
        (EhE(l2, i), E(l)) if l == l2 => out[i] = S::one(),
        (EhE(l, i), EhE(l2, j)) if l == l2 && i != j => {
            out[third(i, j)] = S::frac(-perm_sign(i, j, third(i, j)), 2)
        }
        (W(r), W(s)) => out = pi_v(r, s),
        _ => {}
    }
    out
}

fn check_projections<S: Scalar>(c: &Computed<S>) -> Outcome<S> {
    let m = c.ctx.model;
    let Some((q, l)) = alekseevsky_params(m) else {
        return Outcome::Skipped("not an Alekseevsky model".into());
    };
    let lay = alekseevsky_layout(q, l);
    if m.algebra.dim() != lay.dim || m.algebra.labels() != lay.labels().as_slice() {
        return Outcome::Error("basis does not follow the Alekseevsky layout".into());
    }
    let rep: CliffordRep<S> = match build_even_clifford(q) {
        Ok(r) => r,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let pi = match rep.solve_pi() {
        Ok(p) => p,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let mut roles = vec![Role::Iso; lay.dim];
    for i in 0..3 {
        roles[lay.sigma[i]] = Role::Sigma(i);
        roles[lay.eh_sigma[i]] = Role::EhSigma(i);
    }
    roles[lay.d] = Role::D;
    for li in 0..q {
        roles[lay.e[li]] = Role::E(li);
        for i in 0..3 {
            roles[lay.eh_e[li][i]] = Role::EhE(li, i);
        }
    }
    for (r, &w) in lay.w.iter().enumerate() {
        roles[w] = Role::W(r);
    }
    // [w, w'] = -Pi(w, w'); eh_i has vertical part -sigma_i, e_l has none
    let pi_v = |r: usize, s: usize| -> [S; 3] { [pi.get(r, s, 0), pi.get(r, s, 1), pi.get(r, s, 2)] };
    let m_idx = m.grading.m();
    let sig_pos: Vec<usize> = lay.sigma.iter().map(|&s| m_idx.iter().position(|&x| x == s).unwrap()).collect();
    let mut res = Residual::default();
    let mut entries = 0usize;
    for a in 0..c.ctx.dm {
        for b in 0..c.ctx.dm {
            let (ra, rb) = (roles[m_idx[a]], roles[m_idx[b]]);
            let expect = expected_projection::<S>(ra, rb, &pi_v);
            for t in 0..3 {
                let got = &c.ctx.br_m[a][b][sig_pos[t]];
                if !expect[t].is_zero() {
                    entries += 1;
                }
                res.observe(got, &expect[t], || format!("[{}, {}]_V sigma{} coefficient", label(c, a), label(c, b), t + 1));
            }
        }
    }
    Outcome::Measured { res, value: None, detail: Some(format!("{entries} nonzero table entries")) }
}

fn check_clifford_relations<S: Scalar>(m: &SasakiModel<S>) -> Outcome<S> {
    let Some((q, l)) = alekseevsky_params(m) else {
        return Outcome::Skipped("not an Alekseevsky model".into());
    };
    let rep: CliffordRep<S> = match build_even_clifford(q) {
        Ok(r) => r,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let mut res = Residual::default();
    res.observe(&rep.relation_residual(), &zero(), || "Clifford relations".into());
    let (h, rank) = rep.spin_lift_homomorphism_residual();
    res.observe(&h, &zero(), || "spin lift homomorphism".into());
    let wanted = (3 + q) * (2 + q) / 2;
    if rank != wanted {
        res.observe(&S::one(), &zero(), || format!("spin lift rank {rank}, expected {wanted}"));
    }
    // the model acts on each spinor block through the spin lift
    let lay = alekseevsky_layout(q, l);
    let alg = &m.algebra;
    let labels = alg.labels();
    for (a, b) in wedge_pairs(q) {
        let x = wedge_in_layout::<S>(&lay, a, b);
        let rho = rep.spin_lift_basis(a, b);
        for (s, &ws) in lay.w.iter().enumerate() {
            let got = alg.bracket(&x, &unit(alg.dim(), ws));
            let mut want = vec![S::zero(); alg.dim()];
            for t in 0..4 {
                want[lay.w[4 * (s / 4) + t]] = rho[(t, s % 4)].clone();
            }
            res.observe_vec(&got, &want, |k| format!("[e{}^e{}, {}] coefficient of {}", a + 1, b + 1, labels[ws], labels[k]));
        }
    }
    Outcome::res(res)
}

fn check_clifford_pi<S: Scalar>(m: &SasakiModel<S>) -> Outcome<S> {
    let Some((q, l)) = alekseevsky_params(m) else {
        return Outcome::Skipped("not an Alekseevsky model".into());
    };
    if l == 0 {
        return Outcome::Skipped("no spinor module".into());
    }
    let rep: CliffordRep<S> = match build_even_clifford(q) {
        Ok(r) => r,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let pi = match rep.solve_pi() {
        Ok(p) => p,
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let mut res = Residual::default();
    res.observe(&rep.equivariance_residual(&pi), &zero(), || "equivariance of Pi".into());
    let b = rep.b_form(&pi, (0, 1, 2));
    if !b.is_positive_definite() {
        res.observe(&S::one(), &zero(), || "b not positive definite".into());
    }
    for perm in [(1, 2, 0), (2, 0, 1)] {
        let bp = rep.b_form(&pi, perm);
        res.observe_vec(&bp.data, &b.data, |t| format!("b for permutation {:?}, entry {t}", perm));
    }
    let bt = b.transpose();
    res.observe_vec(&b.data, &bt.data, |t| format!("b symmetry, entry {t}"));
    // invariance under spin(3) + spin(q)
    for (a, c) in crate::clifford::wedge_pairs(q).into_iter().filter(|&(a, c)| (a < 3) == (c < 3)) {
        let rho = rep.spin_lift_basis(a, c);
        let inv = rho.transpose().mul(&b).add(&b.mul(&rho));
        res.observe_vec(&inv.data, &vec![S::zero(); 16], |t| format!("b invariance under e{}^e{}, entry {t}", a + 1, c + 1));
    }
    // the model brackets W x W with -Pi
    let lay = alekseevsky_layout(q, l);
    let alg = &m.algebra;
    let labels = alg.labels();
    for r in 0..4 {
        for s in r + 1..4 {
            let got = alg.bracket(&unit(alg.dim(), lay.w[r]), &unit(alg.dim(), lay.w[s]));
            let mut want = vec![S::zero(); alg.dim()];
            for u in 0..3 + q {
                axpy(&mut want, &-pi.get(r, s, u), &vector_in_layout::<S>(&lay, u));
            }
            res.observe_vec(&got, &want, |k| format!("[E{}, E{}] coefficient of {}", r + 1, s + 1, labels[k]));
        }
    }
    let mut detail = None;
    if q == 2 {
        let table = oracles::pi_table_q2::<S>();
        // one positive global scale
        let (r0, s0, u0) = (0, 1, 2);
        let scale = match table.get(r0, s0, u0).div(&pi.get(r0, s0, u0)) {
            Ok(s) => s,
            Err(e) => return Outcome::Error(e.to_string()),
        };
        if scale.signum() <= 0 {
            res.observe(&S::one(), &zero(), || "scale to the table is not positive".into());
        }
        let scaled = pi.scale(&scale);
        let mut nonzero = 0;
        for r in 0..4 {
            for s in 0..4 {
                for u in 0..5 {
                    let t = table.get(r, s, u);
                    if r < s && !t.is_zero() {
                        nonzero += 1;
                    }
                    res.observe(&scaled.get(r, s, u), &t, || format!("Pi(E{}, E{}) component {u}", r + 1, s + 1));
                }
            }
        }
        detail = Some(format!("{nonzero} nonzero table coefficients, scale {}", scale.to_text()));
    }
    Outcome::Measured { res, value: None, detail }
}

fn check_matrix_model<S: Scalar>(m: &SasakiModel<S>) -> Outcome<S> {
    match alekseevsky_params(m) {
        Some((2, 1)) => {}
        _ => return Outcome::Skipped("only for q = 2, l = 1".into()),
    }
    match oracles::matrix_model_residual(m) {
        Ok((res, detail)) => Outcome::Measured { res, value: None, detail: Some(detail) },
        Err(e) => Outcome::Error(e),
    }
}
