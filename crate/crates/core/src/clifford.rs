//! Even Clifford algebra representations `Cl^0(3,q)` on `W = R^4` for
//! `q = 0, 1, 2`, the spin lift of `so(3,q)` and the bracket `Pi`.
//!
//! Generators of `R^{3,q}` are ordered `eh1, eh2, eh3, e1, .., eq`; the
//! hatted ones have signature `+1`, the others `-1`. In the chosen
//! matrices a generator squares to minus its signature, so
//! `(e_a e_b)(e_b e_c) = -sign(b) e_a e_c`.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::liealg::LieAlgebra;
use crate::scalars::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("no even Clifford representation tabulated for q = {0}")]
    Unsupported(usize),
    #[error("no nonzero equivariant map Lambda^2 W -> R^(3,q)")]
    NoSolution,
    #[error("bilinear form b is degenerate or indefinite")]
    Degenerate,
    #[error("b computed from ({0}) differs from b computed from (1,2,3)")]
    PermutationMismatch(String),
}

/// Global factor of the spin lift `e_a ^ e_b -> SPIN_FACTOR * e_a e_b`.
/// It is the unique sign making the lift a Lie algebra map for the
/// action `(u ^ v)(w) = <v,w> u - <u,w> v` (see `spin_lift_is_homomorphism`).
pub const SPIN_FACTOR: (i64, i64) = (-1, 2);

pub fn generator_labels(q: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=3).map(|i| format!("eh{i}")).collect();
    v.extend((1..=q).map(|l| format!("e{l}")));
    v
}

pub fn signature(q: usize, a: usize) -> i64 {
    assert!(a < 3 + q);
    if a < 3 {
        1
    } else {
        -1
    }
}

/// Pairs `a < b` indexing the basis `e_a ^ e_b` of `so(3,q)`.
pub fn wedge_pairs(q: usize) -> Vec<(usize, usize)> {
    let n = 3 + q;
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push((a, b));
        }
    }
    out
}

pub fn wedge_labels(q: usize) -> Vec<String> {
    let g = generator_labels(q);
    wedge_pairs(q).into_iter().map(|(a, b)| format!("{}^{}", g[a], g[b])).collect()
}

#[derive(Clone, Debug)]
pub struct CliffordRep<S> {
    pub q: usize,
    products: BTreeMap<(usize, usize), Matrix<S>>,
}

fn quat_left(q: [i64; 4]) -> [[i64; 4]; 4] {
    // left multiplication by q = q0 + q1 i + q2 j + q3 k on basis (1, i, j, k)
    let [a, b, c, d] = q;
    [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]]
}

fn mat4<S: Scalar>(m: [[i64; 4]; 4]) -> Matrix<S> {
    Matrix::from_rows(m.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
}

fn complex2<S: Scalar>(re: [[i64; 2]; 2], im: [[i64; 2]; 2]) -> Matrix<S> {
    let r = Matrix::from_rows(re.iter().map(|x| x.iter().map(|&v| S::from_i64(v)).collect()).collect());
    let i = Matrix::from_rows(im.iter().map(|x| x.iter().map(|&v| S::from_i64(v)).collect()).collect());
    crate::liealg::realify_complex(&r, &i)
}

/// The tabulated representation for `q in {0,1,2}`.
pub fn build_even_clifford<S: Scalar>(q: usize) -> Result<CliffordRep<S>, CliffordError> {
    let (h1, h2, h3, l1, l2) = (0, 1, 2, 3, 4);
    let mut t: Vec<((usize, usize), Matrix<S>)> = Vec::new();
    match q {
        0 => {
            t.push(((h1, h2), mat4(quat_left([0, 1, 0, 0]))));
            t.push(((h2, h3), mat4(quat_left([0, 0, 1, 0]))));
            t.push(((h3, h1), mat4(quat_left([0, 0, 0, 1]))));
        }
        1 => {
            let z = [[0, 0], [0, 0]];
            t.push(((h1, h2), complex2(z, [[1, 0], [0, -1]])));
            t.push(((h2, h3), complex2(z, [[0, 1], [1, 0]])));
            t.push(((h3, h1), complex2([[0, -1], [1, 0]], z)));
            t.push(((h3, l1), complex2([[1, 0], [0, -1]], z)));
            t.push(((h1, l1), complex2([[0, 1], [1, 0]], z)));
            t.push(((h2, l1), complex2(z, [[0, 1], [-1, 0]])));
        }
        2 => {
            t.push(((h1, h2), mat4([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])));
            t.push(((h2, h3), mat4([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])));
            t.push(((h3, h1), mat4([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])));
            t.push(((l1, l2), mat4([[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]])));
            t.push(((h3, l1), mat4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])));
            t.push(((h1, l1), mat4([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])));
            t.push(((h2, l1), mat4([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])));
            t.push(((h3, l2), mat4([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]])));
            t.push(((h1, l2), mat4([[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])));
            t.push(((h2, l2), mat4([[0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]])));
        }
        _ => return Err(CliffordError::Unsupported(q)),
    }
    let mut products = BTreeMap::new();
    for ((a, b), m) in t {
        if a < b {
            products.insert((a, b), m);
        } else {
            products.insert((b, a), m.scale(&-S::one()));
        }
    }
    Ok(CliffordRep { q, products })
}

impl<S: Scalar> CliffordRep<S> {
    pub fn n_generators(&self) -> usize {
        3 + self.q
    }

    pub fn dim_w(&self) -> usize {
        4
    }

    /// Square of a single generator in this representation.
    pub fn square(&self, a: usize) -> i64 {
        -signature(self.q, a)
    }

    /// The matrix of `e_a e_b`.
    pub fn gen2(&self, a: usize, b: usize) -> Matrix<S> {
        if a == b {
            return Matrix::identity(4).scale(&S::from_i64(self.square(a)));
        }
        if a < b {
            self.products[&(a, b)].clone()
        } else {
            self.products[&(b, a)].scale(&-S::one())
        }
    }

    /// Largest deviation from the defining relations of the even
    /// Clifford algebra on products of two generators.
    pub fn relation_residual(&self) -> S {
        let n = self.n_generators();
        let id = Matrix::<S>::identity(4);
        let mut worst: Vec<S> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let ab = self.gen2(a, b);
                let sq = ab.mul(&ab);
                let expect = id.scale(&S::from_i64(-signature(self.q, a) * signature(self.q, b)));
                worst.extend(sq.sub(&expect).data);
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    let lhs = ab.mul(&self.gen2(b, c));
                    let rhs = self.gen2(a, c).scale(&S::from_i64(self.square(b)));
                    worst.extend(lhs.sub(&rhs).data);
                    for d in 0..n {
                        if d == a || d == b || d == c {
                            continue;
                        }
                        let cd = self.gen2(c, d);
                        worst.extend(ab.mul(&cd).sub(&cd.mul(&ab)).data);
                    }
                }
            }
        }
        crate::scalars::residual_norm(&worst)
    }

    /// Matrix of `e_a ^ e_b` acting on `R^{3,q}`.
    pub fn so_action_basis(&self, a: usize, b: usize) -> Matrix<S> {
        let n = self.n_generators();
        let mut m = Matrix::zeros(n, n);
        m[(a, b)] = S::from_i64(signature(self.q, b));
        m[(b, a)] = S::from_i64(-signature(self.q, a));
        m
    }

    /// Matrix on `R^{3,q}` of a combination of the `wedge_pairs` basis.
    pub fn so_action(&self, x: &[S]) -> Matrix<S> {
        let n = self.n_generators();
        let mut m = Matrix::zeros(n, n);
        for (c, (a, b)) in x.iter().zip(wedge_pairs(self.q)) {
            if !c.is_zero() {
                m = m.add(&self.so_action_basis(a, b).scale(c));
            }
        }
        m
    }

    /// `so(3,q)` in the `wedge_pairs` basis with the commutator bracket of
    /// its action on `R^{3,q}`.
    pub fn so_algebra(&self) -> LieAlgebra<S> {
        let pairs = wedge_pairs(self.q);
        let mats: Vec<Matrix<S>> = pairs.iter().map(|&(a, b)| self.so_action_basis(a, b)).collect();
        let mut alg = LieAlgebra::from_matrix_basis(mats, wedge_labels(self.q), Default::default())
            .expect("so(3,q) closes");
        alg.realization = None;
        alg
    }

    pub fn spin_factor() -> S {
        S::frac(SPIN_FACTOR.0, SPIN_FACTOR.1)
    }

    /// Lift of `x` (coordinates in the `wedge_pairs` basis) to `W`.
    pub fn spin_lift(&self, x: &[S]) -> Matrix<S> {
        let mut m = Matrix::zeros(4, 4);
        let f = Self::spin_factor();
        for (c, (a, b)) in x.iter().zip(wedge_pairs(self.q)) {
            if !c.is_zero() {
                m = m.add(&self.gen2(a, b).scale(&c.mul_ref(&f)));
            }
        }
        m
    }

    pub fn spin_lift_basis(&self, a: usize, b: usize) -> Matrix<S> {
        self.gen2(a, b).scale(&Self::spin_factor())
    }

    /// Residual of `lift([x,y]) = [lift x, lift y]` over basis pairs, and
    /// the rank of the lift (full rank means injective).
    pub fn spin_lift_homomorphism_residual(&self) -> (S, usize) {
        let alg = self.so_algebra();
        let d = alg.dim();
        let mut devs = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let ei = crate::linalg::unit::<S>(d, i);
                let ej = crate::linalg::unit::<S>(d, j);
                let lhs = self.spin_lift(&alg.bracket(&ei, &ej));
                let rhs = self.spin_lift(&ei).commutator(&self.spin_lift(&ej));
                devs.extend(lhs.sub(&rhs).data);
            }
        }
        let flat = Matrix {
            rows: d,
            cols: 16,
            data: (0..d).flat_map(|i| self.spin_lift(&crate::linalg::unit::<S>(d, i)).data).collect(),
        };
        (crate::scalars::residual_norm(&devs), flat.rank())
    }

    /// Index of a pair of `W` basis vectors in the antisymmetric storage.
    fn w_pairs() -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for r in 0..4 {
            for s in r + 1..4 {
                v.push((r, s));
            }
        }
        v
    }

    /// Space of `so(3,q)`-equivariant maps `Lambda^2 W -> R^{3,q}`, each as
    /// a `4 x 4 x (3+q)` array.
    pub fn equivariant_maps(&self) -> Vec<PiMap<S>> {
        let n = self.n_generators();
        let pairs = Self::w_pairs();
        let np = pairs.len();
        let unknown = |p: usize, u: usize| p * n + u;
        let pidx = |r: usize, s: usize| pairs.iter().position(|&x| x == (r, s));
        // coefficient of unknown(pair(a,b), u) in Pi(E_a, E_b)_u, with sign
        let entry = |a: usize, b: usize| -> Option<(usize, i64)> {
            match a.cmp(&b) {
                std::cmp::Ordering::Less => Some((pidx(a, b).unwrap(), 1)),
                std::cmp::Ordering::Greater => Some((pidx(b, a).unwrap(), -1)),
                std::cmp::Ordering::Equal => None,
            }
        };
        let mut rows: Vec<Vec<S>> = Vec::new();
        for (a, b) in wedge_pairs(self.q) {
            let rho = self.spin_lift_basis(a, b);
            let act = self.so_action_basis(a, b);
            for &(r, s) in &pairs {
                for v in 0..n {
                    let mut row = vec![S::zero(); np * n];
                    // Pi(rho E_r, E_s)_v + Pi(E_r, rho E_s)_v
                    for t in 0..4 {
                        let c = &rho[(t, r)];
                        if !c.is_zero() {
                            if let Some((p, sg)) = entry(t, s) {
                                row[unknown(p, v)] += c.clone() * S::from_i64(sg);
                            }
                        }
                        let c = &rho[(t, s)];
                        if !c.is_zero() {
                            if let Some((p, sg)) = entry(r, t) {
                                row[unknown(p, v)] += c.clone() * S::from_i64(sg);
                            }
                        }
                    }
                    // - (act Pi(E_r,E_s))_v
                    let p = pidx(r, s).unwrap();
                    for u in 0..n {
                        let c = &act[(v, u)];
                        if !c.is_zero() {
                            row[unknown(p, u)] -= c;
                        }
                    }
                    rows.push(row);
                }
            }
        }
        let m = Matrix::from_rows(rows);
        m.nullspace()
            .into_iter()
            .map(|sol| {
                let mut pi = PiMap::zero(n);
                for (p, &(r, s)) in pairs.iter().enumerate() {
                    for u in 0..n {
                        pi.set(r, s, u, sol[unknown(p, u)].clone());
                    }
                }
                pi
            })
            .collect()
    }

    /// The equivariant `Pi`, normalized so that `b(E1,E1) = 1`; fails unless
    /// `b` is positive definite and independent of the even permutation.
    pub fn solve_pi(&self) -> Result<PiMap<S>, CliffordError> {
        let sols = self.equivariant_maps();
        for cand in &sols {
            let b = self.b_form(cand, (0, 1, 2));
            let b11 = b[(0, 0)].clone();
            if b11.is_zero() {
                continue;
            }
            let pi = cand.scale(&b11.inv().unwrap());
            let b = self.b_form(&pi, (0, 1, 2));
            if !b.is_positive_definite() {
                continue;
            }
            for perm in [(1, 2, 0), (2, 0, 1)] {
                let bp = self.b_form(&pi, perm);
                if crate::scalars::residual_norm(&bp.sub(&b).data).is_negligible(1.0, crate::scalars::DEFAULT_TOL) {
                    continue;
                }
                return Err(CliffordError::PermutationMismatch(format!("{},{},{}", perm.0 + 1, perm.1 + 1, perm.2 + 1)));
            }
            return Ok(pi);
        }
        if sols.is_empty() {
            Err(CliffordError::NoSolution)
        } else {
            Err(CliffordError::Degenerate)
        }
    }

    /// `b(s,t) = <eh_i, Pi(eh_j eh_k s, t)>` for an even permutation `(i,j,k)`
    /// of `(0,1,2)`.
    pub fn b_form(&self, pi: &PiMap<S>, (i, j, k): (usize, usize, usize)) -> Matrix<S> {
        let rho = self.gen2(j, k);
        let mut b = Matrix::zeros(4, 4);
        for s in 0..4 {
            for t in 0..4 {
                let mut v = S::zero();
                for u in 0..4 {
                    let c = &rho[(u, s)];
                    if !c.is_zero() {
                        v.add_mul(c, &pi.get(u, t, i));
                    }
                }
                b[(s, t)] = v;
            }
        }
        b
    }

    /// Equivariance residual of a candidate `Pi`.
    pub fn equivariance_residual(&self, pi: &PiMap<S>) -> S {
        let n = self.n_generators();
        let mut devs = Vec::new();
        for (a, b) in wedge_pairs(self.q) {
            let rho = self.spin_lift_basis(a, b);
            let act = self.so_action_basis(a, b);
            for r in 0..4 {
                for s in 0..4 {
                    for v in 0..n {
                        let mut x = S::zero();
                        for t in 0..4 {
                            x.add_mul(&rho[(t, r)], &pi.get(t, s, v));
                            x.add_mul(&rho[(t, s)], &pi.get(r, t, v));
                        }
                        for u in 0..n {
                            x -= act[(v, u)].mul_ref(&pi.get(r, s, u));
                        }
                        devs.push(x);
                    }
                }
            }
        }
        crate::scalars::residual_norm(&devs)
    }

    pub fn to_json(&self, pi: Option<&PiMap<S>>) -> Value {
        let g = generator_labels(self.q);
        let mut prods = serde_json::Map::new();
        for ((a, b), m) in &self.products {
            let rows: Vec<Vec<String>> = (0..4).map(|i| m.row(i).iter().map(|x| x.to_text()).collect()).collect();
            prods.insert(format!("{}{}", g[*a], g[*b]), json!(rows));
        }
        let mut out = json!({ "q": self.q, "generators": g, "gen2": prods });
        if let Some(pi) = pi {
            out["pi"] = pi.to_json(self.q);
        }
        out
    }
}

/// Antisymmetric bilinear map `W x W -> R^{3,q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiMap<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> PiMap<S> {
    pub fn zero(n: usize) -> Self {
        PiMap { n, data: vec![S::zero(); 16 * n] }
    }

    pub fn get(&self, r: usize, s: usize, u: usize) -> S {
        self.data[(r * 4 + s) * self.n + u].clone()
    }

    /// Sets `Pi(E_r, E_s)_u` and the antisymmetric partner.
    pub fn set(&mut self, r: usize, s: usize, u: usize, v: S) {
        self.data[(s * 4 + r) * self.n + u] = -v.clone();
        self.data[(r * 4 + s) * self.n + u] = v;
    }

    pub fn value(&self, r: usize, s: usize) -> Vec<S> {
        (0..self.n).map(|u| self.get(r, s, u)).collect()
    }

    pub fn scale(&self, c: &S) -> Self {
        PiMap { n: self.n, data: self.data.iter().map(|x| x.mul_ref(c)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_json(&self, q: usize) -> Value {
        let g = generator_labels(q);
        let mut m = serde_json::Map::new();
        for r in 0..4 {
            for s in r + 1..4 {
                let mut comps = serde_json::Map::new();
                for (u, lab) in g.iter().enumerate() {
                    let v = self.get(r, s, u);
                    if !v.is_zero() {
                        comps.insert(lab.clone(), json!(v.to_text()));
                    }
                }
                m.insert(format!("E{}^E{}", r + 1, s + 1), Value::Object(comps));
            }
        }
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::QSqrt2;

    #[test]
    fn tables_satisfy_relations() {
        for q in 0..=2 {
            let rep = build_even_clifford::<QSqrt2>(q).unwrap();
            assert!(rep.relation_residual().is_zero(), "q = {q}");
        }
        assert_eq!(build_even_clifford::<QSqrt2>(3).unwrap_err(), CliffordError::Unsupported(3));
    }

    #[test]
    fn flipped_entry_breaks_relations() {
        let mut rep = build_even_clifford::<QSqrt2>(2).unwrap();
        let m = rep.products.get_mut(&(0, 1)).unwrap();
        let (r, c) = (0..16).map(|t| (t / 4, t % 4)).find(|&(r, c)| !m[(r, c)].is_zero()).unwrap();
        m[(r, c)] = -m[(r, c)].clone();
        assert!(!rep.relation_residual().is_zero());
    }

    #[test]
    fn spin_lift_sign_is_forced() {
        for q in 0..=2 {
            let rep = build_even_clifford::<QSqrt2>(q).unwrap();
            let (res, rank) = rep.spin_lift_homomorphism_residual();
            assert!(res.is_zero(), "q = {q}: {res}");
            assert_eq!(rank, wedge_pairs(q).len());
        }
    }

    #[test]
    fn pi_spaces() {
        for q in 0..=2 {
            let rep = build_even_clifford::<QSqrt2>(q).unwrap();
            assert_eq!(rep.equivariant_maps().len(), 1, "q = {q}");
            let pi = rep.solve_pi().unwrap();
            assert!(rep.equivariance_residual(&pi).is_zero());
        }
    }
}
