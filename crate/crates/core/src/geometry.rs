//! Invariant connections and curvature of a reductive model at the origin.
//!
//! A Nomizu map is stored as one `m x m` matrix per basis vector `e_a` of
//! `m`: column `b` of `lambda[a]` is `Lambda_{e_a} e_b`. Curvature uses
//! `R(x,y)z = [Lambda_x, Lambda_y] z - Lambda_{[x,y]_m} z - [[x,y]_h, z]`
//! and is lowered as `R(x,y,z,w) = g(R(x,y)z, w)`; Ricci is
//! `Ric(y,z) = tr(x -> R(x,y)z)`.

use std::cmp::Ordering;

use thiserror::Error;

use crate::linalg::{dot, Matrix};
use crate::models::SasakiModel;
use crate::scalars::{Scalar, ScalarError, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("metric is singular")]
    SingularMetric,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("adapted frame incomplete: found {found} of {expected} vectors")]
    FrameIncomplete { found: usize, expected: usize },
    #[error("model does not fiber over a symmetric base")]
    NotSymmetricBase,
}

/// Running maximum of deviations with the location of the worst one.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<S> {
    pub value: S,
    pub scale: f64,
    pub witness: Option<String>,
}

impl<S: Scalar> Default for Residual<S> {
    fn default() -> Self {
        Residual { value: S::zero(), scale: 0.0, witness: None }
    }
}

impl<S: Scalar> Residual<S> {
    pub fn observe(&mut self, lhs: &S, rhs: &S, at: impl FnOnce() -> String) {
        self.scale = self.scale.max(lhs.to_f64().abs()).max(rhs.to_f64().abs());
        let dev = (lhs.clone() - rhs).abs();
        if dev.cmp_value(&self.value) == Ordering::Greater {
            self.value = dev;
            self.witness = Some(at());
        }
    }

    pub fn observe_vec(&mut self, lhs: &[S], rhs: &[S], at: impl Fn(usize) -> String) {
        for (t, (a, b)) in lhs.iter().zip(rhs).enumerate() {
            self.observe(a, b, || at(t));
        }
    }

    pub fn merge(&mut self, other: Residual<S>) {
        self.scale = self.scale.max(other.scale);
        if other.value.cmp_value(&self.value) == Ordering::Greater {
            self.value = other.value;
            self.witness = other.witness;
        }
    }

    pub fn passes(&self, tol: &Tolerance) -> bool {
        tol.accepts(&self.value, self.scale)
    }
}

/// Nomizu map, `lambda[a]` is the matrix of `Lambda_{e_a}` on `m`.
pub type Nomizu<S> = Vec<Matrix<S>>;

/// Vector-valued 2-tensor: `t[a][b]` is a vector of `m`.
pub type Tensor12<S> = Vec<Vec<Vec<S>>>;

/// Precomputed brackets of the basis of `m`.
pub struct Context<'a, S> {
    pub model: &'a SasakiModel<S>,
    pub dm: usize,
    /// `[e_a, e_b]_m`
    pub br_m: Tensor12<S>,
    /// `[e_a, e_b]_h` in the coordinates of `Grading::h`
    pub br_h: Tensor12<S>,
    /// `ad(h_t)` restricted and projected to `m`
    pub ad_h: Vec<Matrix<S>>,
    pub g_inv: Matrix<S>,
    /// inverse of the transpose of `g`, used to raise the first slot
    pub gt_inv: Matrix<S>,
}

impl<'a, S: Scalar> Context<'a, S> {
    pub fn new(model: &'a SasakiModel<S>) -> Result<Self, GeometryError> {
        let dm = model.dim_m();
        let m_idx = model.grading.m();
        let alg = &model.algebra;
        let h_idx = &model.grading.h;
        let mut br_m = vec![vec![vec![S::zero(); dm]; dm]; dm];
        let mut br_h = vec![vec![vec![S::zero(); h_idx.len()]; dm]; dm];
        let m_pos = inverse_index(&m_idx, alg.dim());
        let h_pos = inverse_index(h_idx, alg.dim());
        for a in 0..dm {
            for b in 0..dm {
                for (k, c) in alg.bracket_basis(m_idx[a], m_idx[b]) {
                    if let Some(p) = m_pos[*k] {
                        br_m[a][b][p] = c.clone();
                    } else if let Some(p) = h_pos[*k] {
                        br_h[a][b][p] = c.clone();
                    }
                }
            }
        }
        let mut ad_h = Vec::new();
        for &t in h_idx {
            let mut m = Matrix::<S>::zeros(dm, dm);
            for b in 0..dm {
                for (k, c) in alg.bracket_basis(t, m_idx[b]) {
                    if let Some(p) = m_pos[*k] {
                        m[(p, b)] = c.clone();
                    }
                }
            }
            ad_h.push(m);
        }
        let g_inv = model.g.inverse().ok_or(GeometryError::SingularMetric)?;
        let gt_inv = model.g.transpose().inverse().ok_or(GeometryError::SingularMetric)?;
        Ok(Context { model, dm, br_m, br_h, ad_h, g_inv, gt_inv })
    }

    pub fn g(&self, x: &[S], y: &[S]) -> S {
        dot(&self.model.g.apply_left(x), y)
    }

    pub fn e(&self, a: usize) -> Vec<S> {
        crate::linalg::unit(self.dm, a)
    }

    /// `[x, y]_m` for vectors of `m`.
    pub fn bracket_m(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dm];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa.mul_ref(yb);
                crate::linalg::axpy(&mut out, &c, &self.br_m[a][b]);
            }
        }
        out
    }

    pub fn bracket_h(&self, x: &[S], y: &[S]) -> Vec<S> {
        let nh = self.model.grading.h.len();
        let mut out = vec![S::zero(); nh];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa.mul_ref(yb);
                crate::linalg::axpy(&mut out, &c, &self.br_h[a][b]);
            }
        }
        out
    }

    /// `Phi_i(x, y) = g(x, phi_i y)`
    pub fn fund_form(&self, i: usize, x: &[S], y: &[S]) -> S {
        self.g(x, &self.model.phi[i].apply(y))
    }

    pub fn eta(&self, i: usize, x: &[S]) -> S {
        dot(&self.model.eta[i], x)
    }

    pub fn is_vertical(&self, a: usize) -> bool {
        a < self.model.grading.v.len()
    }

    pub fn v_range(&self) -> std::ops::Range<usize> {
        self.model.v_coords()
    }

    pub fn h_range(&self) -> std::ops::Range<usize> {
        self.model.h_coords()
    }
}

fn inverse_index(idx: &[usize], dim: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; dim];
    for (p, &i) in idx.iter().enumerate() {
        out[i] = Some(p);
    }
    out
}

pub fn nomizu_apply<S: Scalar>(lambda: &Nomizu<S>, x: &[S], y: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); y.len()];
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        let v = lambda[a].apply(y);
        crate::linalg::axpy(&mut out, xa, &v);
    }
    out
}

/// Matrix of `Lambda_x` for a general vector `x`.
pub fn nomizu_matrix<S: Scalar>(lambda: &Nomizu<S>, x: &[S]) -> Matrix<S> {
    let dm = x.len();
    let mut out = Matrix::zeros(dm, dm);
    for (a, xa) in x.iter().enumerate() {
        if !xa.is_zero() {
            out = out.add(&lambda[a].scale(xa));
        }
    }
    out
}

/// Levi-Civita Nomizu map `Lambda_x y = [x,y]_m / 2 + U(x,y)` with
/// `2 g(U(x,y), z) = g([z,x]_m, y) + g(x, [z,y]_m)`.
pub fn levi_civita_nomizu<S: Scalar>(ctx: &Context<S>) -> Nomizu<S> {
    let dm = ctx.dm;
    let half = S::frac(1, 2);
    let gm = &ctx.model.g;
    let mut lambda = vec![Matrix::<S>::zeros(dm, dm); dm];
    // gz[z][x] = g([e_z, e_x]_m, .) as a row vector
    let gz: Vec<Vec<Vec<S>>> =
        (0..dm).map(|z| (0..dm).map(|x| gm.apply_left(&ctx.br_m[z][x])).collect()).collect();
    for a in 0..dm {
        for b in 0..dm {
            let w: Vec<S> = (0..dm)
                .map(|z| {
                    let mut s = gz[z][a][b].clone();
                    // g(e_a, [e_z, e_b]_m)
                    let row = gm.row(a);
                    s += dot(row, &ctx.br_m[z][b]);
                    s.mul_ref(&half)
                })
                .collect();
            let u = ctx.gt_inv.apply(&w);
            for r in 0..dm {
                let v = ctx.br_m[a][b][r].mul_ref(&half) + &u[r];
                lambda[a][(r, b)] = v;
            }
        }
    }
    lambda
}

/// Closed-form torsion of the canonical connection:
/// `T(X,Y) = 2 alpha sum_i [eta_i(Y) phi_i X - eta_i(X) phi_i Y + Phi_i(X,Y) xi_i]
///          - 2(alpha - delta) sum_cyc (eta_i ^ eta_j)(X,Y) xi_k`.
pub fn canonical_torsion<S: Scalar>(ctx: &Context<S>) -> Tensor12<S> {
    let m = ctx.model;
    let dm = ctx.dm;
    let two_a = S::from_i64(2) * m.alpha.clone();
    let c2 = S::from_i64(2) * (m.alpha.clone() - m.delta.clone());
    let mut t = vec![vec![vec![S::zero(); dm]; dm]; dm];
    for a in 0..dm {
        for b in 0..dm {
            let (x, y) = (ctx.e(a), ctx.e(b));
            let mut v = vec![S::zero(); dm];
            for i in 0..3 {
                let ey = ctx.eta(i, &y);
                let ex = ctx.eta(i, &x);
                crate::linalg::axpy(&mut v, &ey.mul_ref(&two_a), &m.phi[i].col(a));
                crate::linalg::axpy(&mut v, &(-ex.mul_ref(&two_a)), &m.phi[i].col(b));
                let f = ctx.fund_form(i, &x, &y);
                crate::linalg::axpy(&mut v, &f.mul_ref(&two_a), &m.xi[i]);
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                let wedge = ctx.eta(i, &x).mul_ref(&ctx.eta(j, &y)) - ctx.eta(j, &x).mul_ref(&ctx.eta(i, &y));
                crate::linalg::axpy(&mut v, &(-wedge.mul_ref(&c2)), &m.xi[k]);
            }
            t[a][b] = v;
        }
    }
    t
}

/// `Lambda^g + T/2`.
pub fn canonical_nomizu<S: Scalar>(ctx: &Context<S>) -> Nomizu<S> {
    let mut lambda = levi_civita_nomizu(ctx);
    let t = canonical_torsion(ctx);
    let half = S::frac(1, 2);
    for a in 0..ctx.dm {
        for b in 0..ctx.dm {
            for r in 0..ctx.dm {
                let v = t[a][b][r].mul_ref(&half);
                lambda[a][(r, b)] += v;
            }
        }
    }
    lambda
}

/// `T(x,y) = Lambda_x y - Lambda_y x - [x,y]_m` on basis pairs.
pub fn torsion_of<S: Scalar>(ctx: &Context<S>, lambda: &Nomizu<S>) -> Tensor12<S> {
    let dm = ctx.dm;
    let mut t = vec![vec![vec![S::zero(); dm]; dm]; dm];
    for a in 0..dm {
        for b in 0..dm {
            t[a][b] = (0..dm)
                .map(|r| lambda[a][(r, b)].clone() - &lambda[b][(r, a)] - &ctx.br_m[a][b][r])
                .collect();
        }
    }
    t
}

pub fn tensor12_apply<S: Scalar>(t: &Tensor12<S>, x: &[S], y: &[S]) -> Vec<S> {
    let dm = x.len();
    let mut out = vec![S::zero(); dm];
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            crate::linalg::axpy(&mut out, &xa.mul_ref(yb), &t[a][b]);
        }
    }
    out
}

/// Lowered curvature `R(e_a, e_b, e_c, e_d)` stored densely.
#[derive(Clone, Debug)]
pub struct Curvature<S> {
    pub dm: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Curvature<S> {
    pub fn at(&self, a: usize, b: usize, c: usize, d: usize) -> &S {
        let n = self.dm;
        &self.data[((a * n + b) * n + c) * n + d]
    }

    /// Multilinear evaluation on arbitrary vectors.
    pub fn eval(&self, x: &[S], y: &[S], z: &[S], w: &[S]) -> S {
        let nz = |v: &[S]| -> Vec<(usize, S)> {
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
        };
        let (xs, ys, zs, ws) = (nz(x), nz(y), nz(z), nz(w));
        let mut s = S::zero();
        for (a, xa) in &xs {
            for (b, yb) in &ys {
                let xy = xa.mul_ref(yb);
                for (c, zc) in &zs {
                    let xyz = xy.mul_ref(zc);
                    for (d, wd) in &ws {
                        let r = self.at(*a, *b, *c, *d);
                        if !r.is_zero() {
                            s += xyz.mul_ref(wd).mul_ref(r);
                        }
                    }
                }
            }
        }
        s
    }

    /// Matrix `B(z,w) = R(x, y, z, w)` for basis vectors `x = e_a`, `y = e_b`.
    pub fn slice(&self, a: usize, b: usize) -> Matrix<S> {
        let n = self.dm;
        let start = (a * n + b) * n * n;
        Matrix { rows: n, cols: n, data: self.data[start..start + n * n].to_vec() }
    }
}

/// Endomorphism `R(e_a, e_b)` of `m`.
fn curvature_endo<S: Scalar>(ctx: &Context<S>, lambda: &Nomizu<S>, a: usize, b: usize) -> Matrix<S> {
    let mut r = lambda[a].mul(&lambda[b]).sub(&lambda[b].mul(&lambda[a]));
    let lm = nomizu_matrix(lambda, &ctx.br_m[a][b]);
    r = r.sub(&lm);
    for (t, c) in ctx.br_h[a][b].iter().enumerate() {
        if !c.is_zero() {
            r = r.sub(&ctx.ad_h[t].scale(c));
        }
    }
    r
}

pub fn curvature<S: Scalar>(ctx: &Context<S>, lambda: &Nomizu<S>) -> Curvature<S> {
    let n = ctx.dm;
    let mut data = vec![S::zero(); n * n * n * n];
    let g = &ctx.model.g;
    for a in 0..n {
        for b in a + 1..n {
            let r = curvature_endo(ctx, lambda, a, b);
            // R(a,b,c,d) = sum_r r[r][c] g[r][d]  =  (r^T g)[c][d]
            let low = r.transpose().mul(g);
            for c in 0..n {
                for d in 0..n {
                    let v = &low[(c, d)];
                    if v.is_zero() {
                        continue;
                    }
                    data[((a * n + b) * n + c) * n + d] = v.clone();
                    data[((b * n + a) * n + c) * n + d] = -v.clone();
                }
            }
        }
    }
    Curvature { dm: n, data }
}

/// `Ric(y, z) = sum_{a,b} g^{ab} R(e_a, y, z, e_b)`.
pub fn ricci<S: Scalar>(ctx: &Context<S>, r: &Curvature<S>) -> Matrix<S> {
    let n = ctx.dm;
    let mut ric = Matrix::zeros(n, n);
    for y in 0..n {
        for z in 0..n {
            let mut s = S::zero();
            for a in 0..n {
                for b in 0..n {
                    let gi = &ctx.g_inv[(a, b)];
                    if gi.is_zero() {
                        continue;
                    }
                    s.add_mul(gi, r.at(a, y, z, b));
                }
            }
            ric[(y, z)] = s;
        }
    }
    ric
}

/// Orthonormal frame of `H` made of quadruples `(e, phi_1 e, phi_2 e, phi_3 e)`,
/// each seeded by the first horizontal basis vector orthogonal to the earlier
/// quadruples (or its orthogonal projection when there is none).
pub fn adapted_frame<S: Scalar>(ctx: &Context<S>, tol: &Tolerance) -> Result<Vec<Vec<S>>, GeometryError> {
    let m = ctx.model;
    let expected = m.grading.hh.len();
    let mut frame: Vec<Vec<S>> = Vec::new();
    let gscale = m.g.max_abs_f64();
    while frame.len() < expected {
        let orth = ctx.h_range().map(|a| ctx.e(a)).find(|v| {
            frame.iter().all(|f| ctx.g(v, f).is_negligible(gscale, tol.rel)) && !ctx.g(v, v).is_negligible(gscale, tol.rel)
        });
        let seed = match orth {
            Some(v) => v,
            None => {
                let mut found = None;
                for a in ctx.h_range() {
                    let mut v = ctx.e(a);
                    for f in &frame {
                        let c = ctx.g(&v, f);
                        crate::linalg::axpy(&mut v, &-c, f);
                    }
                    if !ctx.g(&v, &v).is_negligible(gscale, tol.rel) {
                        found = Some(v);
                        break;
                    }
                }
                match found {
                    Some(v) => v,
                    None => return Err(GeometryError::FrameIncomplete { found: frame.len(), expected }),
                }
            }
        };
        let norm = ctx.g(&seed, &seed).sqrt_if_representable()?;
        let e = crate::linalg::scale_vec(&norm.inv()?, &seed);
        let quad = [e.clone(), m.phi[0].apply(&e), m.phi[1].apply(&e), m.phi[2].apply(&e)];
        frame.extend(quad);
    }
    frame.truncate(expected);
    Ok(frame)
}

/// O'Neill tensor on horizontal vectors, read off as the vertical part of
/// the Levi-Civita Nomizu map.
pub fn oneill_a<S: Scalar>(ctx: &Context<S>, lc: &Nomizu<S>, x: &[S], y: &[S]) -> Vec<S> {
    let mut v = nomizu_apply(lc, x, y);
    for r in ctx.h_range() {
        v[r] = S::zero();
    }
    v
}

/// `sum_{a,b} |A_{e_a} e_b|^2` over a frame of `H`.
pub fn a_norm_sq<S: Scalar>(ctx: &Context<S>, lc: &Nomizu<S>, frame: &[Vec<S>]) -> S {
    let mut s = S::zero();
    for x in frame {
        for y in frame {
            let a = oneill_a(ctx, lc, x, y);
            s += ctx.g(&a, &a);
        }
    }
    s
}

/// Scalar curvature of the base computed through the submersion:
/// `sum_a Ric(e_a, e_a) + 2 sum |A|^2` over an adapted frame.
pub fn base_scalar<S: Scalar>(
    ctx: &Context<S>,
    lc: &Nomizu<S>,
    ric: &Matrix<S>,
    frame: &[Vec<S>],
) -> S {
    let mut s = S::zero();
    for e in frame {
        s += dot(&ric.apply_left(e), e);
    }
    s + S::from_i64(2) * a_norm_sq(ctx, lc, frame)
}

/// Expected `scal_N = 16 n (n+2) alpha delta`.
pub fn base_scalar_expected<S: Scalar>(m: &SasakiModel<S>) -> S {
    let n = m.n() as i64;
    S::from_i64(16 * n * (n + 2)) * m.alpha.clone() * m.delta.clone()
}

/// Expected Ricci tensor
/// `2 alpha (2 delta (n+2) - 3 alpha) g + 2 (alpha - delta)((2n+3) alpha - delta) g|V`.
pub fn ricci_expected<S: Scalar>(m: &SasakiModel<S>) -> Matrix<S> {
    let n = m.n() as i64;
    let (a, d) = (m.alpha.clone(), m.delta.clone());
    let c1 = S::from_i64(2) * a.clone() * (S::from_i64(2 * (n + 2)) * d.clone() - S::from_i64(3) * a.clone());
    let c2 = S::from_i64(2) * (a.clone() - d.clone()) * (S::from_i64(2 * n + 3) * a - d);
    let dm = m.dim_m();
    let nv = m.grading.v.len();
    let mut out = m.g.scale(&c1);
    for r in 0..nv.min(dm) {
        for s in 0..nv.min(dm) {
            let v = m.g[(r, s)].mul_ref(&c2);
            out[(r, s)] += v;
        }
    }
    out
}

/// Curvature endomorphism of the symmetric base on `H`:
/// `R_N(x, y) = -ad([x, y])|_H`.
pub fn base_curvature_endo<S: Scalar>(ctx: &Context<S>, a: usize, b: usize) -> Matrix<S> {
    let hr: Vec<usize> = ctx.h_range().collect();
    let nh = hr.len();
    let mut out = Matrix::zeros(nh, nh);
    let brm = &ctx.br_m[a][b];
    let brh = &ctx.br_h[a][b];
    for (col, &c) in hr.iter().enumerate() {
        let mut v = vec![S::zero(); ctx.dm];
        for (t, coef) in brm.iter().enumerate() {
            if !coef.is_zero() && ctx.is_vertical(t) {
                crate::linalg::axpy(&mut v, coef, &ctx.br_m[t][c]);
            }
        }
        for (t, coef) in brh.iter().enumerate() {
            if !coef.is_zero() {
                crate::linalg::axpy(&mut v, coef, &ctx.ad_h[t].col(c));
            }
        }
        for (row, &r) in hr.iter().enumerate() {
            out[(row, col)] = -v[r].clone();
        }
    }
    out
}

fn restrict_h<S: Scalar>(ctx: &Context<S>, m: &Matrix<S>) -> Matrix<S> {
    let hr: Vec<usize> = ctx.h_range().collect();
    let nh = hr.len();
    let mut out = Matrix::zeros(nh, nh);
    for (i, &r) in hr.iter().enumerate() {
        for (j, &c) in hr.iter().enumerate() {
            out[(i, j)] = m[(r, c)].clone();
        }
    }
    out
}

/// Quaternion-Kaehler holonomy test: every `[R_N(x,y), phi_i|H]` must lie in
/// the span of `phi_j|H, phi_k|H`. The residual is the distance to the
/// least-squares fit.
pub fn qk_holonomy_check<S: Scalar>(ctx: &Context<S>) -> Result<Residual<S>, GeometryError> {
    if !ctx.model.provenance.is_symmetric_base() {
        return Err(GeometryError::NotSymmetricBase);
    }
    let phis: Vec<Matrix<S>> = ctx.model.phi.iter().map(|p| restrict_h(ctx, p)).collect();
    let mut res = Residual::default();
    let hr: Vec<usize> = ctx.h_range().collect();
    for (ia, &a) in hr.iter().enumerate() {
        for &b in &hr[ia + 1..] {
            let rn = base_curvature_endo(ctx, a, b);
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                let c = rn.commutator(&phis[i]);
                let fit = project_span(&c, &phis[j], &phis[k]);
                res.observe_vec(&c.data, &fit.data, |t| format!("x=e{a}, y=e{b}, i={}, entry {t}", i + 1));
            }
        }
    }
    Ok(res)
}

/// Orthogonal projection (Frobenius) of `c` onto the span of `p` and `q`.
fn project_span<S: Scalar>(c: &Matrix<S>, p: &Matrix<S>, q: &Matrix<S>) -> Matrix<S> {
    let pp = dot(&p.data, &p.data);
    let pq = dot(&p.data, &q.data);
    let qq = dot(&q.data, &q.data);
    let cp = dot(&c.data, &p.data);
    let cq = dot(&c.data, &q.data);
    let gram = Matrix::from_rows(vec![vec![pp, pq.clone()], vec![pq, qq]]);
    let rhs = vec![cp, cq];
    match gram.solve(&rhs) {
        Some(x) => p.scale(&x[0]).add(&q.scale(&x[1])),
        None => Matrix::zeros(c.rows, c.cols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_symmetric, SymmetricFamily, Variant};
    use crate::scalars::QSqrt2;

    #[test]
    fn sphere_ricci_and_scalar() {
        let m = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, QSqrt2::one(), QSqrt2::one()).unwrap();
        let ctx = Context::new(&m).unwrap();
        let lc = levi_civita_nomizu(&ctx);
        let r = curvature(&ctx, &lc);
        let ric = ricci(&ctx, &r);
        assert_eq!(ric, m.g.scale(&QSqrt2::from_i64(6)));
        let frame = adapted_frame(&ctx, &Tolerance::default()).unwrap();
        assert_eq!(base_scalar(&ctx, &lc, &ric, &frame), QSqrt2::from_i64(48));
    }
}
