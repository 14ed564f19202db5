//! Finite-dimensional real Lie algebras given by sparse structure constants.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalars::{residual_norm, Scalar, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("commutator of basis elements {0} and {1} is not in their span")]
    NotClosed(usize, usize),
    #[error("matrix basis is linearly dependent")]
    LinearlyDependentBasis,
}

/// `[e_i, e_j] = sum_k c[i][j][k] e_k`, stored densely by pair with sparse
/// right-hand sides. Both orders of every pair are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<S> {
    dim: usize,
    labels: Vec<String>,
    table: Vec<Vec<(usize, S)>>,
    pub realization: Option<Vec<Matrix<S>>>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Build from entries `(i, j, k, c)`. Each unordered pair may be given in
    /// either order; if both orders are present they must be negatives.
    pub fn from_structure_constants(
        dim: usize,
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, S)>,
    ) -> Result<Self, LieError> {
        if labels.len() != dim {
            return Err(LieError::SchemaViolation(format!("{} labels for dimension {}", labels.len(), dim)));
        }
        let mut given: BTreeMap<(usize, usize, usize), S> = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(LieError::SchemaViolation(format!("index out of range in ({i},{j},{k})")));
            }
            if i == j {
                if !c.is_zero() {
                    return Err(LieError::SchemaViolation(format!("nonzero diagonal entry ({i},{i},{k})")));
                }
                continue;
            }
            if given.insert((i, j, k), c).is_some() {
                return Err(LieError::SchemaViolation(format!("duplicate entry ({i},{j},{k})")));
            }
        }
        let mut canon: BTreeMap<(usize, usize, usize), S> = BTreeMap::new();
        for ((i, j, k), c) in &given {
            let (a, b, v) = if i < j { (*i, *j, c.clone()) } else { (*j, *i, -c.clone()) };
            match canon.get(&(a, b, k.clone())) {
                Some(prev) if *prev != v => {
                    return Err(LieError::SchemaViolation(format!(
                        "entries ({i},{j},{k}) and ({j},{i},{k}) are not antisymmetric"
                    )))
                }
                _ => {
                    canon.insert((a, b, *k), v);
                }
            }
        }
        let mut table = vec![Vec::new(); dim * dim];
        for ((i, j, k), c) in canon {
            if c.is_zero() {
                continue;
            }
            table[j * dim + i].push((k, -c.clone()));
            table[i * dim + j].push((k, c));
        }
        Ok(LieAlgebra { dim, labels, table, realization: None })
    }

    /// Structure constants of the span of `mats` under the commutator.
    pub fn from_matrix_basis(mats: Vec<Matrix<S>>, labels: Vec<String>, tol: Tolerance) -> Result<Self, LieError> {
        let k = mats.len();
        if labels.len() != k {
            return Err(LieError::SchemaViolation("label count differs from basis size".into()));
        }
        if k == 0 {
            return Self::from_structure_constants(0, labels, Vec::new());
        }
        let (r, c) = (mats[0].rows, mats[0].cols);
        if mats.iter().any(|m| m.rows != r || m.cols != c) {
            return Err(LieError::SchemaViolation("matrices of different shapes".into()));
        }
        let n2 = r * c;
        // rows of bt are the flattened matrices; its pivot columns pick
        // k independent matrix positions
        let bt = Matrix { rows: k, cols: n2, data: mats.iter().flat_map(|m| m.data.iter().cloned()).collect() };
        let (_, pivots) = bt.rref();
        if pivots.len() < k {
            return Err(LieError::LinearlyDependentBasis);
        }
        let mut sq = Matrix::<S>::zeros(k, k);
        for (row, &p) in pivots.iter().enumerate() {
            for (col, m) in mats.iter().enumerate() {
                sq[(row, col)] = m.data[p].clone();
            }
        }
        let sq_inv = sq.inverse().ok_or(LieError::LinearlyDependentBasis)?;
        let scale = mats.iter().map(|m| m.max_abs_f64()).fold(1.0, f64::max);
        let mut entries = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let comm = mats[i].commutator(&mats[j]);
                let rhs: Vec<S> = pivots.iter().map(|&p| comm.data[p].clone()).collect();
                let x = sq_inv.apply(&rhs);
                let mut recon = Matrix::<S>::zeros(r, c);
                for (t, xt) in x.iter().enumerate() {
                    if !xt.is_zero() {
                        recon = recon.add(&mats[t].scale(xt));
                    }
                }
                let res = residual_norm(&recon.sub(&comm).data);
                if !tol.accepts(&res, scale * scale) {
                    return Err(LieError::NotClosed(i, j));
                }
                for (t, xt) in x.into_iter().enumerate() {
                    let keep = match S::BACKEND {
                        crate::scalars::Backend::Exact => !xt.is_zero(),
                        crate::scalars::Backend::Float => !xt.is_negligible(scale, tol.rel),
                    };
                    if keep {
                        entries.push((i, j, t, xt));
                    }
                }
            }
        }
        let mut alg = Self::from_structure_constants(k, labels, entries)?;
        alg.realization = Some(mats);
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `[e_i, e_j]` as sparse `(k, coefficient)` pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.table[i * self.dim + j]
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> S {
        self.bracket_basis(i, j).iter().find(|(t, _)| *t == k).map_or_else(S::zero, |(_, c)| c.clone())
    }

    /// Canonical entries with `i < j`, sorted.
    pub fn entries(&self) -> Vec<(usize, usize, usize, S)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let mut row: Vec<_> = self.bracket_basis(i, j).to_vec();
                row.sort_by_key(|(k, _)| *k);
                for (k, c) in row {
                    out.push((i, j, k, c));
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let xy = xi.mul_ref(yj);
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k].add_mul(&xy, c);
                }
            }
        }
        out
    }

    /// Matrix of `ad x`; column `j` holds `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[S]) -> Matrix<S> {
        let mut m = Matrix::<S>::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, c) in self.bracket_basis(i, j) {
                    m[(*k, j)].add_mul(xi, c);
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix<S> {
        let mut m = Matrix::<S>::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.bracket_basis(i, j) {
                m[(*k, j)] = c.clone();
            }
        }
        m
    }

    /// Killing form `tr(ad e_i ad e_j)`.
    pub fn killing(&self) -> Matrix<S> {
        let d = self.dim;
        let ads: Vec<Matrix<S>> = (0..d).map(|i| self.ad_basis(i)).collect();
        let mut kf = Matrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let mut t = S::zero();
                for a in 0..d {
                    for b in 0..d {
                        let x = &ads[i][(a, b)];
                        if !x.is_zero() {
                            t.add_mul(x, &ads[j][(b, a)]);
                        }
                    }
                }
                kf[(j, i)] = t.clone();
                kf[(i, j)] = t;
            }
        }
        kf
    }

    /// Largest Jacobiator entry over basis triples, with a witness triple.
    pub fn jacobi_residual(&self) -> (S, Option<(usize, usize, usize)>) {
        let d = self.dim;
        let mut worst = S::zero();
        let mut witness = None;
        let e = |i: usize| crate::linalg::unit::<S>(d, i);
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let a = self.bracket(&e(i), &self.bracket(&e(j), &e(k)));
                    let b = self.bracket(&e(j), &self.bracket(&e(k), &e(i)));
                    let c = self.bracket(&e(k), &self.bracket(&e(i), &e(j)));
                    let s: Vec<S> = (0..d).map(|t| a[t].clone() + &b[t] + &c[t]).collect();
                    let r = residual_norm(&s);
                    if r.cmp_value(&worst) == std::cmp::Ordering::Greater {
                        worst = r;
                        witness = Some((i, j, k));
                    }
                }
            }
        }
        (worst, witness)
    }

    /// Checks `[e_a, e_s]` lies in the coordinate span of `sub` for all
    /// `a` in `acting` and `s` in `sub`. Returns a witness `(a, s, k)` with
    /// a component outside the span.
    pub fn is_invariant(&self, sub: &[usize], acting: &[usize]) -> Result<(), (usize, usize, usize)> {
        for &a in acting {
            for &s in sub {
                for (k, c) in self.bracket_basis(a, s) {
                    if !c.is_zero() && !sub.contains(k) {
                        return Err((a, s, *k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether the stored realization satisfies the structure constants.
    pub fn realization_residual(&self) -> Option<S> {
        let mats = self.realization.as_ref()?;
        let mut worst = S::zero();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let comm = mats[i].commutator(&mats[j]);
                let mut recon = Matrix::zeros(comm.rows, comm.cols);
                for (k, c) in self.bracket_basis(i, j) {
                    recon = recon.add(&mats[*k].scale(c));
                }
                let r = residual_norm(&recon.sub(&comm).data);
                if r.cmp_value(&worst) == std::cmp::Ordering::Greater {
                    worst = r;
                }
            }
        }
        Some(worst)
    }

    /// Same algebra with every structure constant mapped by `f`.
    pub fn map_entries(&self, mut f: impl FnMut(usize, usize, usize, S) -> S) -> Self {
        let entries: Vec<_> = self.entries().into_iter().map(|(i, j, k, c)| (i, j, k, f(i, j, k, c))).collect();
        Self::from_structure_constants(self.dim, self.labels.clone(), entries).expect("canonical entries are valid")
    }

    /// Same algebra in the basis `b_i = sum_r p[r][i] e_r`.
    pub fn change_basis(&self, p: &Matrix<S>, labels: Vec<String>) -> Result<Self, LieError> {
        let d = self.dim;
        if p.rows != d || p.cols != d {
            return Err(LieError::SchemaViolation("basis change has wrong shape".into()));
        }
        let pinv = p.inverse().ok_or(LieError::LinearlyDependentBasis)?;
        let cols: Vec<Vec<S>> = (0..d).map(|i| p.col(i)).collect();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let br = pinv.apply(&self.bracket(&cols[i], &cols[j]));
                for (k, c) in br.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        Self::from_structure_constants(d, labels, entries)
    }

    pub fn relabel(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
    }
}

/// Realify a complex matrix given by real and imaginary parts:
/// `a + ib` becomes the real block matrix with 2x2 blocks `[[a, -b], [b, a]]`.
pub fn realify_complex<S: Scalar>(re: &Matrix<S>, im: &Matrix<S>) -> Matrix<S> {
    let (r, c) = (re.rows, re.cols);
    let mut out = Matrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let a = &re[(i, j)];
            let b = &im[(i, j)];
            out[(2 * i, 2 * j)] = a.clone();
            out[(2 * i, 2 * j + 1)] = -b.clone();
            out[(2 * i + 1, 2 * j)] = b.clone();
            out[(2 * i + 1, 2 * j + 1)] = a.clone();
        }
    }
    out
}

/// Structure constants and a realization of a complex dual: the generators
/// listed in `imaginary` are multiplied by `i`, all matrices realified as
/// `M -> [[M, 0], [0, M]]` or `i M -> [[0, -M], [M, 0]]`.
pub fn complexified_realization<S: Scalar>(mats: &[Matrix<S>], imaginary: &[bool]) -> Vec<Matrix<S>> {
    mats.iter()
        .zip(imaginary)
        .map(|(m, &im)| {
            let n = m.rows;
            let mut out = Matrix::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    let v = &m[(i, j)];
                    if im {
                        out[(i, n + j)] = -v.clone();
                        out[(n + i, j)] = v.clone();
                    } else {
                        out[(i, j)] = v.clone();
                        out[(n + i, n + j)] = v.clone();
                    }
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::QSqrt2;

    fn so3() -> LieAlgebra<QSqrt2> {
        let one = QSqrt2::one();
        LieAlgebra::from_structure_constants(
            3,
            vec!["x".into(), "y".into(), "z".into()],
            vec![(0, 1, 2, one.clone()), (1, 2, 0, one.clone()), (2, 0, 1, one)],
        )
        .unwrap()
    }

    #[test]
    fn antisymmetry_enforced() {
        let one = QSqrt2::one();
        let bad = LieAlgebra::from_structure_constants(
            2,
            vec!["a".into(), "b".into()],
            vec![(0, 1, 0, one.clone()), (1, 0, 0, one.clone())],
        );
        assert!(matches!(bad, Err(LieError::SchemaViolation(_))));
        let ok = LieAlgebra::from_structure_constants(
            2,
            vec!["a".into(), "b".into()],
            vec![(0, 1, 0, one.clone()), (1, 0, 0, -one)],
        )
        .unwrap();
        assert_eq!(ok.coeff(1, 0, 0), -QSqrt2::one());
    }

    #[test]
    fn so3_basics() {
        let g = so3();
        assert!(g.jacobi_residual().0.is_zero());
        let k = g.killing();
        assert_eq!(k[(0, 0)], QSqrt2::from_i64(-2));
        assert!(k[(0, 1)].is_zero());
        assert_eq!(g.ad_basis(0).trace(), QSqrt2::zero());
        assert!(g.is_invariant(&[0], &[0]).is_ok());
        assert_eq!(g.is_invariant(&[0], &[1]), Err((1, 0, 2)));
    }

    #[test]
    fn matrix_basis_errors() {
        let a = Matrix::<QSqrt2>::from_i64(&[&[0, 1], &[0, 0]]);
        let b = Matrix::<QSqrt2>::from_i64(&[&[0, 0], &[1, 0]]);
        let r = LieAlgebra::from_matrix_basis(vec![a.clone(), b], vec!["e".into(), "f".into()], Tolerance::default());
        assert_eq!(r.unwrap_err(), LieError::NotClosed(0, 1));
        let r = LieAlgebra::from_matrix_basis(vec![a.clone(), a.scale(&QSqrt2::from_i64(2))], vec!["e".into(), "f".into()], Tolerance::default());
        assert_eq!(r.unwrap_err(), LieError::LinearlyDependentBasis);
    }
}
