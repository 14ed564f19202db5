//! Small dense linear algebra over a [`Scalar`] backend.

use std::ops::{Index, IndexMut};

use crate::scalars::{Scalar, DEFAULT_TOL};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![S::zero(); self.rows];
        for i in 0..self.rows {
            for (j, x) in v.iter().enumerate() {
                out[i].add_mul(&self[(i, j)], x);
            }
        }
        out
    }

    /// Row vector times matrix, `v^T M`.
    pub fn apply_left(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![S::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j].add_mul(x, &self[(i, j)]);
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul_ref(s)).collect() }
    }

    pub fn commutator(&self, o: &Matrix<S>) -> Matrix<S> {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Reduced row echelon form and pivot columns. Exact backends pick the
    /// first nonzero pivot; floats use partial pivoting with a relative
    /// zero threshold.
    pub fn rref(&self) -> (Matrix<S>, Vec<usize>) {
        let mut m = self.clone();
        let thresh = DEFAULT_TOL * m.max_abs_f64().max(1.0);
        let weight_ok = |x: &S| match S::BACKEND {
            crate::scalars::Backend::Exact => !x.is_zero(),
            crate::scalars::Backend::Float => x.pivot_weight() > thresh,
        };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for i in r..m.rows {
                let x = &m[(i, c)];
                if weight_ok(x) {
                    let w = x.pivot_weight();
                    if best.map_or(true, |(_, bw)| w > bw) {
                        best = Some((i, w));
                    }
                    if S::BACKEND == crate::scalars::Backend::Exact {
                        break;
                    }
                }
            }
            let Some((p, _)) = best else {
                for i in r..m.rows {
                    m[(i, c)] = S::zero();
                }
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m[(r, j)].mul_ref(&inv);
                m[(r, j)] = v;
            }
            let prow: Vec<S> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    if !prow[j].is_zero() {
                        let d = f.mul_ref(&prow[j]);
                        m[(i, j)] -= d;
                    }
                }
                m[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solve `self * x = b`; `None` when inconsistent. Free variables are 0.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<S>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Positive definiteness of a symmetric matrix via the signs of the
    /// pivots of symmetric Gaussian elimination.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.rows;
        let mut m = self.clone();
        for k in 0..n {
            let p = m[(k, k)].clone();
            if p.signum() <= 0 || p.is_negligible(1.0, DEFAULT_TOL) {
                return false;
            }
            let inv = p.inv().unwrap();
            for i in k + 1..n {
                let f = m[(i, k)].mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let d = f.mul_ref(&m[(k, j)]);
                    m[(i, j)] -= d;
                }
            }
        }
        true
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut s = S::zero();
    for (x, y) in a.iter().zip(b) {
        s.add_mul(x, y);
    }
    s
}

pub fn axpy<S: Scalar>(y: &mut [S], a: &S, x: &[S]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        yi.add_mul(a, xi);
    }
}

pub fn scale_vec<S: Scalar>(a: &S, x: &[S]) -> Vec<S> {
    x.iter().map(|v| a.mul_ref(v)).collect()
}

pub fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::QSqrt2;

    #[test]
    fn nullspace_and_solve() {
        let m = Matrix::<QSqrt2>::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.apply(&ns[0]).iter().all(|x| x.is_zero()));
        let b = vec![QSqrt2::from_i64(6), QSqrt2::from_i64(12), QSqrt2::from_i64(2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        let bad = vec![QSqrt2::from_i64(1), QSqrt2::from_i64(1), QSqrt2::from_i64(1)];
        assert!(m.solve(&bad).is_none());
    }

    #[test]
    fn inverse_float_and_exact() {
        let m = Matrix::<f64>::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        assert!((id[(0, 0)] - 1.0).abs() < 1e-12 && id[(0, 1)].abs() < 1e-12);
        let e = Matrix::<QSqrt2>::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(e.mul(&e.inverse().unwrap()), Matrix::identity(2));
        assert!(e.is_positive_definite());
        assert!(!Matrix::<QSqrt2>::from_i64(&[&[1, 2], &[2, 1]]).is_positive_definite());
    }
}
