//! Homogeneous models `G/H` of 3-(alpha, delta)-Sasaki manifolds: the
//! algebra `g = h + m`, the grading `m = V + H`, and the invariant tensors
//! `xi_i, eta_i, phi_i, g` written in coordinates of `m`.
//!
//! Coordinates on `m` list the vertical basis vectors first and then the
//! horizontal ones, in the order of `Grading::v` followed by `Grading::hh`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{build_even_clifford, wedge_pairs, CliffordError, CliffordRep};
use crate::linalg::Matrix;
use crate::liealg::{complexified_realization, realify_complex, LieAlgebra, LieError};
use crate::scalars::{Scalar, ScalarError, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parameter sign mismatch: {0}")]
    ParameterSignMismatch(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error("unknown example model {0:?}")]
    UnknownExample(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetricFamily {
    Sp,
    Su,
    So,
}

impl SymmetricFamily {
    pub fn name(self) -> &'static str {
        match self {
            SymmetricFamily::Sp => "sp",
            SymmetricFamily::Su => "su",
            SymmetricFamily::So => "so",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            SymmetricFamily::Sp => 0,
            SymmetricFamily::Su => 1,
            SymmetricFamily::So => 3,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Some(SymmetricFamily::Sp),
            "su" => Some(SymmetricFamily::Su),
            "so" => Some(SymmetricFamily::So),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Compact,
    Noncompact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// `sp`, `su`, `so`, `alekseevsky`, `aloff-wallach` or `su21`
    pub family: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Provenance {
    pub fn is_symmetric_base(&self) -> bool {
        self.family != "alekseevsky"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubGrading {
    pub h0: Vec<usize>,
    pub h1: Vec<usize>,
    pub w: Vec<usize>,
}

/// Index sets into the algebra basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grading {
    pub h: Vec<usize>,
    pub v: Vec<usize>,
    pub hh: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub: Option<SubGrading>,
}

impl Grading {
    /// Algebra indices of the `m` coordinates, in coordinate order.
    pub fn m(&self) -> Vec<usize> {
        self.v.iter().chain(&self.hh).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SasakiModel<S> {
    pub provenance: Provenance,
    pub alpha: S,
    pub delta: S,
    pub algebra: LieAlgebra<S>,
    pub grading: Grading,
    pub xi: Vec<Vec<S>>,
    pub eta: Vec<Vec<S>>,
    pub phi: Vec<Matrix<S>>,
    pub g: Matrix<S>,
}

impl<S: Scalar> SasakiModel<S> {
    pub fn dim_m(&self) -> usize {
        self.grading.v.len() + self.grading.hh.len()
    }

    pub fn n(&self) -> usize {
        self.grading.hh.len() / 4
    }

    /// `beta = 2(delta - 2 alpha)`
    pub fn beta(&self) -> S {
        S::from_i64(2) * (self.delta.clone() - S::from_i64(2) * self.alpha.clone())
    }

    /// Coordinates on `m` that belong to `V`.
    pub fn v_coords(&self) -> std::ops::Range<usize> {
        0..self.grading.v.len()
    }

    /// Coordinates on `m` that belong to `H`.
    pub fn h_coords(&self) -> std::ops::Range<usize> {
        self.grading.v.len()..self.dim_m()
    }

    /// Position in `m` coordinates of an algebra index.
    pub fn m_position(&self, alg_index: usize) -> Option<usize> {
        self.grading.m().iter().position(|&i| i == alg_index)
    }

    /// Embed `m` coordinates into the algebra.
    pub fn embed(&self, x: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.algebra.dim()];
        for (c, &i) in x.iter().zip(self.grading.m().iter()) {
            out[i] = c.clone();
        }
        out
    }

    /// Project algebra coordinates to `m`, dropping `h`.
    pub fn project_m(&self, x: &[S]) -> Vec<S> {
        self.grading.m().iter().map(|&i| x[i].clone()).collect()
    }

    pub fn project_h(&self, x: &[S]) -> Vec<S> {
        self.grading.h.iter().map(|&i| x[i].clone()).collect()
    }

    /// Validate shapes and index sets.
    pub fn validate_shapes(&self) -> Result<(), String> {
        let d = self.algebra.dim();
        let mut seen = vec![false; d];
        for &i in self.grading.h.iter().chain(&self.grading.v).chain(&self.grading.hh) {
            if i >= d {
                return Err(format!("grading index {i} out of range"));
            }
            if seen[i] {
                return Err(format!("grading index {i} repeated"));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err("grading does not cover the algebra basis".into());
        }
        if self.grading.v.len() != 3 {
            return Err("vertical part must have dimension 3".into());
        }
        if self.grading.hh.len() % 4 != 0 {
            return Err("horizontal part must have dimension divisible by 4".into());
        }
        if let Some(sub) = &self.grading.sub {
            let mut all: Vec<usize> = sub.h0.iter().chain(&sub.h1).chain(&sub.w).copied().collect();
            all.sort_unstable();
            let mut hh = self.grading.hh.clone();
            hh.sort_unstable();
            if all != hh {
                return Err("sub-grading does not partition the horizontal part".into());
            }
        }
        let m = self.dim_m();
        if self.xi.len() != 3 || self.eta.len() != 3 || self.phi.len() != 3 {
            return Err("expected three xi, eta and phi".into());
        }
        if self.xi.iter().chain(&self.eta).any(|v| v.len() != m) {
            return Err("xi/eta have wrong length".into());
        }
        if self.phi.iter().chain(std::iter::once(&self.g)).any(|p| p.rows != m || p.cols != m) {
            return Err("phi/g have wrong shape".into());
        }
        Ok(())
    }
}

fn nonzero<S: Scalar>(x: &S, what: &str) -> Result<(), ModelError> {
    if x.is_zero() {
        Err(ModelError::InvalidParameters(format!("{what} must be nonzero")))
    } else {
        Ok(())
    }
}

fn qmul(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

const QUAT_UNITS: [[i64; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

/// Matrix on `H = R^4` (basis 1, i, j, k) of `x -> u x` or `x -> x u`.
fn quat_matrix<S: Scalar>(u: [i64; 4], left: bool) -> Matrix<S> {
    let mut m = Matrix::zeros(4, 4);
    for (c, e) in QUAT_UNITS.iter().enumerate() {
        let img = if left { qmul(u, *e) } else { qmul(*e, u) };
        for r in 0..4 {
            m[(r, c)] = S::from_i64(img[r]);
        }
    }
    m
}

fn quat_conj(u: [i64; 4]) -> [i64; 4] {
    [u[0], -u[1], -u[2], -u[3]]
}

/// Realify a quaternionic matrix given by entries `(row, col, q)`.
fn quat_block_matrix<S: Scalar>(size: usize, entries: &[(usize, usize, [i64; 4])]) -> Matrix<S> {
    let mut m = Matrix::zeros(4 * size, 4 * size);
    for &(r, c, q) in entries {
        let b = quat_matrix::<S>(q, true);
        for i in 0..4 {
            for j in 0..4 {
                m[(4 * r + i, 4 * c + j)] += &b[(i, j)];
            }
        }
    }
    m
}

/// Complex matrix from entries `(row, col, re, im)`, realified.
fn complex_matrix<S: Scalar>(size: usize, entries: &[(usize, usize, i64, i64)]) -> Matrix<S> {
    let mut re = Matrix::<S>::zeros(size, size);
    let mut im = Matrix::<S>::zeros(size, size);
    for &(r, c, a, b) in entries {
        re[(r, c)] += S::from_i64(a);
        im[(r, c)] += S::from_i64(b);
    }
    realify_complex(&re, &im)
}

const UNIT_NAMES: [&str; 4] = ["1", "i", "j", "k"];

/// Realized compact basis `[h | sigma_1..3 | H]`, labels and `dim h`.
struct CompactBasis<S> {
    mats: Vec<Matrix<S>>,
    labels: Vec<String>,
    dim_h: usize,
}

fn sp_basis<S: Scalar>(n: usize) -> CompactBasis<S> {
    let size = n + 1;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    let imag = &QUAT_UNITS[1..];
    for p in 1..=n {
        for (u, name) in imag.iter().zip(&UNIT_NAMES[1..]) {
            mats.push(quat_block_matrix(size, &[(p, p, *u)]));
            labels.push(format!("h{p}{p}_{name}"));
        }
    }
    for p in 1..=n {
        for r in p + 1..=n {
            mats.push(quat_block_matrix(size, &[(p, r, [1, 0, 0, 0]), (r, p, [-1, 0, 0, 0])]));
            labels.push(format!("h{p}{r}_1"));
            for (u, name) in imag.iter().zip(&UNIT_NAMES[1..]) {
                mats.push(quat_block_matrix(size, &[(p, r, *u), (r, p, *u)]));
                labels.push(format!("h{p}{r}_{name}"));
            }
        }
    }
    let dim_h = mats.len();
    for (s, u) in imag.iter().enumerate() {
        mats.push(quat_block_matrix(size, &[(0, 0, *u)]));
        labels.push(format!("sigma{}", s + 1));
    }
    for p in 1..=n {
        for (u, name) in QUAT_UNITS.iter().zip(UNIT_NAMES) {
            let minus_conj = quat_conj(*u).map(|x| -x);
            mats.push(quat_block_matrix(size, &[(0, p, *u), (p, 0, minus_conj)]));
            labels.push(format!("x{p}_{name}"));
        }
    }
    CompactBasis { mats, labels, dim_h }
}

fn su_basis<S: Scalar>(n: usize) -> CompactBasis<S> {
    let size = n + 2;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for p in 0..n {
        let c = 2 + p;
        mats.push(complex_matrix(size, &[(0, 0, 0, -1), (1, 1, 0, -1), (c, c, 0, 2)]));
        labels.push(format!("h{}", p + 1));
    }
    for p in 0..n {
        for r in p + 1..n {
            let (a, b) = (2 + p, 2 + r);
            mats.push(complex_matrix(size, &[(a, b, 1, 0), (b, a, -1, 0)]));
            labels.push(format!("h{}{}_re", p + 1, r + 1));
            mats.push(complex_matrix(size, &[(a, b, 0, 1), (b, a, 0, 1)]));
            labels.push(format!("h{}{}_im", p + 1, r + 1));
        }
    }
    let dim_h = mats.len();
    mats.push(complex_matrix(size, &[(0, 0, 0, 1), (1, 1, 0, -1)]));
    mats.push(complex_matrix(size, &[(0, 1, -1, 0), (1, 0, 1, 0)]));
    mats.push(complex_matrix(size, &[(0, 1, 0, -1), (1, 0, 0, -1)]));
    labels.extend(["sigma1", "sigma2", "sigma3"].map(String::from));
    for p in 0..n {
        let c = 2 + p;
        mats.push(complex_matrix(size, &[(0, c, 1, 0), (c, 0, -1, 0)]));
        mats.push(complex_matrix(size, &[(0, c, 0, 1), (c, 0, 0, 1)]));
        mats.push(complex_matrix(size, &[(1, c, 1, 0), (c, 1, -1, 0)]));
        mats.push(complex_matrix(size, &[(1, c, 0, -1), (c, 1, 0, -1)]));
        for k in 1..=4 {
            labels.push(format!("x{}_{k}", p + 1));
        }
    }
    CompactBasis { mats, labels, dim_h }
}

fn so_basis<S: Scalar>(n: usize) -> CompactBasis<S> {
    let size = n + 4;
    let embed4 = |b: &Matrix<S>| {
        let mut m = Matrix::<S>::zeros(size, size);
        for i in 0..4 {
            for j in 0..4 {
                m[(n + i, n + j)] = b[(i, j)].clone();
            }
        }
        m
    };
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for p in 0..n {
        for r in p + 1..n {
            let mut m = Matrix::<S>::zeros(size, size);
            m[(p, r)] = S::one();
            m[(r, p)] = -S::one();
            mats.push(m);
            labels.push(format!("h{}{}", p + 1, r + 1));
        }
    }
    for (u, name) in QUAT_UNITS[1..].iter().zip(&UNIT_NAMES[1..]) {
        mats.push(embed4(&quat_matrix(*u, false)));
        labels.push(format!("r_{name}"));
    }
    let dim_h = mats.len();
    for (s, u) in QUAT_UNITS[1..].iter().enumerate() {
        mats.push(embed4(&quat_matrix(*u, true)));
        labels.push(format!("sigma{}", s + 1));
    }
    for p in 0..n {
        for (a, name) in UNIT_NAMES.iter().enumerate() {
            let mut m = Matrix::<S>::zeros(size, size);
            m[(n + a, p)] = S::one();
            m[(p, n + a)] = -S::one();
            mats.push(m);
            labels.push(format!("x{}_{name}", p + 1));
        }
    }
    CompactBasis { mats, labels, dim_h }
}

fn compact_basis<S: Scalar>(family: SymmetricFamily, n: usize) -> CompactBasis<S> {
    match family {
        SymmetricFamily::Sp => sp_basis(n),
        SymmetricFamily::Su => su_basis(n),
        SymmetricFamily::So => so_basis(n),
    }
}

/// Contiguous grading `[h | V | H]`.
fn block_grading(dim_h: usize, dim: usize) -> Grading {
    Grading {
        h: (0..dim_h).collect(),
        v: (dim_h..dim_h + 3).collect(),
        hh: (dim_h + 3..dim).collect(),
        sub: None,
    }
}

/// Negate `c[i][j][k]` for `i, j` horizontal and `k` in `h + V`.
pub fn noncompact_dual<S: Scalar>(alg: &LieAlgebra<S>, grading: &Grading) -> LieAlgebra<S> {
    alg.map_entries(|i, j, k, c| {
        if grading.hh.contains(&i) && grading.hh.contains(&j) && !grading.hh.contains(&k) {
            -c
        } else {
            c
        }
    })
}

/// Tensors of the construction over a symmetric base, read off from the
/// Killing form of `alg`: `g|V = -kappa/(4 delta^2 (n+2))`,
/// `g|H = -kappa/(8 alpha delta (n+2))`, `xi_i = delta sigma_i`,
/// `phi_i|V = ad(xi_i)/(2 delta)`, `phi_i|H = ad(xi_i)/delta`.
fn symmetric_model<S: Scalar>(
    alg: LieAlgebra<S>,
    grading: Grading,
    provenance: Provenance,
    alpha: S,
    delta: S,
) -> Result<SasakiModel<S>, ModelError> {
    let n = grading.hh.len() / 4;
    let m_idx = grading.m();
    let dm = m_idx.len();
    let kappa = alg.killing();
    let np2 = S::from_i64(n as i64 + 2);
    let cv = -(S::from_i64(4) * delta.clone() * delta.clone() * np2.clone()).inv()?;
    let ch = -(S::from_i64(8) * alpha.clone() * delta.clone() * np2).inv()?;
    let nv = grading.v.len();
    let mut g = Matrix::<S>::zeros(dm, dm);
    for a in 0..dm {
        for b in 0..dm {
            let (va, vb) = (a < nv, b < nv);
            if va != vb {
                continue;
            }
            let k = &kappa[(m_idx[a], m_idx[b])];
            g[(a, b)] = k.mul_ref(if va { &cv } else { &ch });
        }
    }
    let mut xi = Vec::new();
    let mut phi = Vec::new();
    let half = S::frac(1, 2);
    for s in 0..3 {
        let mut x = vec![S::zero(); dm];
        x[s] = delta.clone();
        xi.push(x);
        let ad = alg.ad_basis(grading.v[s]);
        let mut p = Matrix::<S>::zeros(dm, dm);
        for (col, &cj) in m_idx.iter().enumerate() {
            for (row, &ri) in m_idx.iter().enumerate() {
                let v = &ad[(ri, cj)];
                if v.is_zero() {
                    continue;
                }
                p[(row, col)] = if col < nv { v.mul_ref(&half) } else { v.clone() };
            }
        }
        phi.push(p);
    }
    let eta = xi.iter().map(|x| g.apply_left(x)).collect();
    Ok(SasakiModel { provenance, alpha, delta, algebra: alg, grading, xi, eta, phi, g })
}

fn check_sign(alpha: &impl Scalar, delta: &impl Scalar, variant: Variant) -> Result<(), ModelError> {
    let sa = alpha.signum() * delta.signum();
    match (variant, sa) {
        (Variant::Compact, 1) | (Variant::Noncompact, -1) => Ok(()),
        (Variant::Compact, _) => Err(ModelError::ParameterSignMismatch("compact variant needs alpha*delta > 0".into())),
        (Variant::Noncompact, _) => {
            Err(ModelError::ParameterSignMismatch("noncompact variant needs alpha*delta < 0".into()))
        }
    }
}

/// Model over a compact or noncompact symmetric quaternionic Kaehler base
/// `Sp(n+1)/Sp(n)Sp(1)`, `SU(n+2)/S(U(n)U(2))`, `SO(n+4)/SO(n)SO(4)` or
/// their duals.
pub fn build_symmetric<S: Scalar>(
    family: SymmetricFamily,
    n: usize,
    variant: Variant,
    alpha: S,
    delta: S,
) -> Result<SasakiModel<S>, ModelError> {
    nonzero(&alpha, "alpha")?;
    nonzero(&delta, "delta")?;
    if n < family.min_n() {
        return Err(ModelError::InvalidParameters(format!(
            "family {} needs n >= {}",
            family.name(),
            family.min_n()
        )));
    }
    check_sign(&alpha, &delta, variant)?;
    let basis = compact_basis::<S>(family, n);
    let dim = basis.mats.len();
    let grading = block_grading(basis.dim_h, dim);
    let compact = LieAlgebra::from_matrix_basis(basis.mats.clone(), basis.labels.clone(), Tolerance::default())?;
    let alg = match variant {
        Variant::Compact => compact,
        Variant::Noncompact => {
            let mut dual = noncompact_dual(&compact, &grading);
            let flags: Vec<bool> = (0..dim).map(|i| grading.hh.contains(&i)).collect();
            dual.realization = Some(complexified_realization(&basis.mats, &flags));
            dual
        }
    };
    let provenance = Provenance { family: family.name().into(), n, q: None, l: None, variant, note: None };
    symmetric_model(alg, grading, provenance, alpha, delta)
}

/// Explicit matrix models: `aloff-wallach` (`SU(3)/S^1`, compact) and
/// `su21` (`SU(2,1)/S^1`). Basis `h, sigma_1..3, e1..e4` with
/// `h = diag(-i,-i,2i)`.
pub fn example_model<S: Scalar>(name: &str, alpha: S, delta: S) -> Result<SasakiModel<S>, ModelError> {
    nonzero(&alpha, "alpha")?;
    nonzero(&delta, "delta")?;
    let dual = match name {
        "aloff-wallach" => false,
        "su21" => true,
        other => return Err(ModelError::UnknownExample(other.to_string())),
    };
    check_sign(&alpha, &delta, if dual { Variant::Noncompact } else { Variant::Compact })?;
    let m = |e: &[(usize, usize, i64, i64)]| complex_matrix::<S>(3, e);
    let mut mats = vec![
        m(&[(0, 0, 0, -1), (1, 1, 0, -1), (2, 2, 0, 2)]),
        m(&[(0, 0, 0, 1), (1, 1, 0, -1)]),
        m(&[(0, 1, -1, 0), (1, 0, 1, 0)]),
        m(&[(0, 1, 0, -1), (1, 0, 0, -1)]),
    ];
    // the four horizontal generators, multiplied by i for the dual
    let horiz: [[(usize, usize, i64, i64); 2]; 4] = [
        [(0, 2, 1, 0), (2, 0, -1, 0)],
        [(0, 2, 0, 1), (2, 0, 0, 1)],
        [(1, 2, 1, 0), (2, 1, -1, 0)],
        [(1, 2, 0, -1), (2, 1, 0, -1)],
    ];
    for e in horiz {
        let e: Vec<_> = if dual { e.iter().map(|&(r, c, a, b)| (r, c, -b, a)).collect() } else { e.to_vec() };
        mats.push(m(&e));
    }
    let labels: Vec<String> = ["h", "sigma1", "sigma2", "sigma3", "e1", "e2", "e3", "e4"].map(String::from).to_vec();
    let alg = LieAlgebra::from_matrix_basis(mats, labels, Tolerance::default())?;
    let grading = block_grading(1, 8);
    let provenance = Provenance {
        family: name.to_string(),
        n: 1,
        q: None,
        l: None,
        variant: if dual { Variant::Noncompact } else { Variant::Compact },
        note: None,
    };
    symmetric_model(alg, grading, provenance, alpha, delta)
}

/// Positions of the named basis elements of an Alekseevsky model.
#[derive(Debug, Clone, PartialEq)]
pub struct AlekseevskyLayout {
    pub q: usize,
    pub l: usize,
    /// `e_a ^ e_b` with `3 <= a < b`, spanning `so(q)`
    pub h: Vec<usize>,
    pub sigma: [usize; 3],
    pub d: usize,
    /// `eh_i + sigma_i`
    pub eh_sigma: [usize; 3],
    /// `e_l` for each negative generator
    pub e: Vec<usize>,
    /// `eh_i ^ e_l`, indexed `[l][i]`
    pub eh_e: Vec<[usize; 3]>,
    pub w: Vec<usize>,
    pub dim: usize,
}

pub fn alekseevsky_layout(q: usize, l: usize) -> AlekseevskyLayout {
    let nh = q * q.saturating_sub(1) / 2;
    let h: Vec<usize> = (0..nh).collect();
    let sigma = [nh, nh + 1, nh + 2];
    let d = nh + 3;
    let eh_sigma = [nh + 4, nh + 5, nh + 6];
    let mut next = nh + 7;
    let mut e = Vec::new();
    let mut eh_e = Vec::new();
    for _ in 0..q {
        e.push(next);
        eh_e.push([next + 1, next + 2, next + 3]);
        next += 4;
    }
    let w: Vec<usize> = (next..next + 4 * l).collect();
    AlekseevskyLayout { q, l, h, sigma, d, eh_sigma, e, eh_e, w, dim: next + 4 * l }
}

impl AlekseevskyLayout {
    pub fn labels(&self) -> Vec<String> {
        let mut v = vec![String::new(); self.dim];
        let mut k = 0;
        for a in 0..self.q {
            for b in a + 1..self.q {
                v[self.h[k]] = format!("e{}^e{}", a + 1, b + 1);
                k += 1;
            }
        }
        for i in 0..3 {
            v[self.sigma[i]] = format!("sigma{}", i + 1);
            v[self.eh_sigma[i]] = format!("eh{}+sigma{}", i + 1, i + 1);
        }
        v[self.d] = "D".into();
        for (li, &ei) in self.e.iter().enumerate() {
            v[ei] = format!("e{}", li + 1);
            for i in 0..3 {
                v[self.eh_e[li][i]] = format!("eh{}^e{}", i + 1, li + 1);
            }
        }
        for (r, &wi) in self.w.iter().enumerate() {
            v[wi] = format!("E{}", r + 1);
        }
        v
    }

    pub fn grading(&self) -> Grading {
        let h0: Vec<usize> = std::iter::once(self.d).chain(self.eh_sigma).collect();
        let h1: Vec<usize> = self.e.iter().zip(&self.eh_e).flat_map(|(&e, t)| std::iter::once(e).chain(*t)).collect();
        let hh: Vec<usize> = h0.iter().chain(&h1).chain(&self.w).copied().collect();
        Grading { h: self.h.clone(), v: self.sigma.to_vec(), hh, sub: Some(SubGrading { h0, h1, w: self.w.clone() }) }
    }
}

/// Indexing of the ambient algebra `so(3,q) + R^{3,q} + R D + l W`.
struct Ambient {
    nw: usize,
    ng: usize,
}

impl Ambient {
    fn so(&self, p: usize) -> usize {
        p
    }
    fn v(&self, a: usize) -> usize {
        self.nw + a
    }
    fn d(&self) -> usize {
        self.nw + self.ng
    }
    fn w(&self, r: usize) -> usize {
        self.nw + self.ng + 1 + r
    }
}

/// `sigma_i = 2 eh_k ^ eh_j` for even `(i,j,k)` in the wedge basis.
fn sigma_in_wedges<S: Scalar>(q: usize, i: usize) -> Vec<S> {
    let pairs = wedge_pairs(q);
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let mut v = vec![S::zero(); pairs.len()];
    let (a, b, s) = if k < j { (k, j, 2) } else { (j, k, -2) };
    let p = pairs.iter().position(|&x| x == (a, b)).unwrap();
    v[p] = S::from_i64(s);
    v
}

/// `[w, w'] = -Pi(w, w')`: with `b > 0` and `phi_i|W = rho(sigma_i)` this is
/// the sign for which the contact equation holds on `W x W`.
fn ambient_algebra<S: Scalar>(rep: &CliffordRep<S>, pi: &crate::clifford::PiMap<S>, l: usize) -> LieAlgebra<S> {
    let q = rep.q;
    let pairs = wedge_pairs(q);
    let amb = Ambient { nw: pairs.len(), ng: 3 + q };
    let dim = amb.nw + amb.ng + 1 + 4 * l;
    let so = rep.so_algebra();
    let mut entries = Vec::new();
    for (pi_idx, &(a, b)) in pairs.iter().enumerate() {
        for pj in pi_idx + 1..pairs.len() {
            for (k, c) in so.bracket_basis(pi_idx, pj) {
                entries.push((amb.so(pi_idx), amb.so(pj), amb.so(*k), c.clone()));
            }
        }
        let act = rep.so_action_basis(a, b);
        for u in 0..amb.ng {
            for t in 0..amb.ng {
                let c = &act[(t, u)];
                if !c.is_zero() {
                    entries.push((amb.so(pi_idx), amb.v(u), amb.v(t), c.clone()));
                }
            }
        }
        let rho = rep.spin_lift_basis(a, b);
        for s in 0..4 * l {
            for t in 0..4 {
                let c = &rho[(t, s % 4)];
                if !c.is_zero() {
                    entries.push((amb.so(pi_idx), amb.w(s), amb.w(4 * (s / 4) + t), c.clone()));
                }
            }
        }
    }
    for u in 0..amb.ng {
        entries.push((amb.d(), amb.v(u), amb.v(u), S::one()));
    }
    for s in 0..4 * l {
        entries.push((amb.d(), amb.w(s), amb.w(s), S::frac(1, 2)));
    }
    for blk in 0..l {
        for r in 0..4 {
            for s in r + 1..4 {
                for u in 0..amb.ng {
                    let c = pi.get(r, s, u);
                    if !c.is_zero() {
                        entries.push((amb.w(4 * blk + r), amb.w(4 * blk + s), amb.v(u), -c));
                    }
                }
            }
        }
    }
    let labels = (0..dim).map(|i| format!("x{i}")).collect();
    LieAlgebra::from_structure_constants(dim, labels, entries).expect("ambient entries are canonical")
}

/// The wedge `e_a ^ e_b` (`a < b`) of `so(3,q)` written in the model basis.
pub fn wedge_in_layout<S: Scalar>(lay: &AlekseevskyLayout, a: usize, b: usize) -> Vec<S> {
    let mut v = vec![S::zero(); lay.dim];
    if b < 3 {
        // e_j ^ e_k = +-1/2 sigma_i with sigma_i = 2 e_k ^ e_j for even (i,j,k)
        let i = 3 - a - b;
        v[lay.sigma[i]] = S::frac(if a == (i + 1) % 3 { -1 } else { 1 }, 2);
    } else if a < 3 {
        v[lay.eh_e[b - 3][a]] = S::one();
    } else {
        let mut k = 0;
        for x in 0..lay.q {
            for y in x + 1..lay.q {
                if (x + 3, y + 3) == (a, b) {
                    v[lay.h[k]] = S::one();
                }
                k += 1;
            }
        }
    }
    v
}

/// The basis vector `u` of `R^{3,q}` in the model basis: `eh_i` is
/// `(eh_i + sigma_i) - sigma_i`.
pub fn vector_in_layout<S: Scalar>(lay: &AlekseevskyLayout, u: usize) -> Vec<S> {
    let mut v = vec![S::zero(); lay.dim];
    if u < 3 {
        v[lay.eh_sigma[u]] = S::one();
        v[lay.sigma[u]] = -S::one();
    } else {
        v[lay.e[u - 3]] = S::one();
    }
    v
}

/// Sign of the permutation `(i, j, k)` of `(0, 1, 2)`; zero if not a permutation.
pub fn perm_sign(i: usize, j: usize, k: usize) -> i64 {
    if i == j || j == k || i == k {
        return 0;
    }
    if (i + 1) % 3 == j && (j + 1) % 3 == k {
        1
    } else {
        -1
    }
}

/// Model fibering over the Alekseevsky space built from `Cl^0(3,q)` with
/// `l` copies of the spinor module `W`.
pub fn build_alekseevsky<S: Scalar>(q: usize, l: usize, alpha: S, delta: S) -> Result<SasakiModel<S>, ModelError> {
    nonzero(&alpha, "alpha")?;
    nonzero(&delta, "delta")?;
    if q > 2 {
        return Err(ModelError::Clifford(CliffordError::Unsupported(q)));
    }
    if l > 1 {
        return Err(ModelError::InvalidParameters("only l in {0, 1} is supported".into()));
    }
    check_sign(&alpha, &delta, Variant::Noncompact)?;
    let rep = build_even_clifford::<S>(q)?;
    let pi = rep.solve_pi()?;
    let amb_alg = ambient_algebra(&rep, &pi, l);
    let pairs = wedge_pairs(q);
    let amb = Ambient { nw: pairs.len(), ng: 3 + q };
    let lay = alekseevsky_layout(q, l);
    let dim = lay.dim;
    let wedge = |a: usize, b: usize| -> (usize, i64) {
        if a < b {
            (pairs.iter().position(|&x| x == (a, b)).unwrap(), 1)
        } else {
            (pairs.iter().position(|&x| x == (b, a)).unwrap(), -1)
        }
    };
    let mut p = Matrix::<S>::zeros(dim, dim);
    let mut k = 0;
    for a in 0..q {
        for b in a + 1..q {
            p[(amb.so(wedge(3 + a, 3 + b).0), lay.h[k])] = S::one();
            k += 1;
        }
    }
    for i in 0..3 {
        let s = sigma_in_wedges::<S>(q, i);
        for (t, c) in s.iter().enumerate() {
            if !c.is_zero() {
                p[(amb.so(t), lay.sigma[i])] = c.clone();
                p[(amb.so(t), lay.eh_sigma[i])] = c.clone();
            }
        }
        p[(amb.v(i), lay.eh_sigma[i])] = S::one();
    }
    p[(amb.d(), lay.d)] = S::one();
    for li in 0..q {
        p[(amb.v(3 + li), lay.e[li])] = S::one();
        for i in 0..3 {
            let (t, s) = wedge(i, 3 + li);
            p[(amb.so(t), lay.eh_e[li][i])] = S::from_i64(s);
        }
    }
    for (r, &wi) in lay.w.iter().enumerate() {
        p[(amb.w(r), wi)] = S::one();
    }
    let alg = amb_alg.change_basis(&p, lay.labels())?;
    let grading = lay.grading();
    let m_idx = grading.m();
    let dm = m_idx.len();
    let pos = |alg_index: usize| m_idx.iter().position(|&x| x == alg_index).unwrap();

    let ad = alpha.clone() * delta.clone();
    let mut g = Matrix::<S>::zeros(dm, dm);
    let inv_d2 = (delta.clone() * delta.clone()).inv()?;
    let inv_m_ad = (-ad.clone()).inv()?;
    let inv_m_4ad = (-(S::from_i64(4) * ad.clone())).inv()?;
    for i in 0..3 {
        g[(pos(lay.sigma[i]), pos(lay.sigma[i]))] = inv_d2.clone();
        g[(pos(lay.eh_sigma[i]), pos(lay.eh_sigma[i]))] = inv_m_ad.clone();
    }
    g[(pos(lay.d), pos(lay.d))] = inv_m_4ad.clone();
    for li in 0..q {
        g[(pos(lay.e[li]), pos(lay.e[li]))] = inv_m_ad.clone();
        for i in 0..3 {
            g[(pos(lay.eh_e[li][i]), pos(lay.eh_e[li][i]))] = inv_m_4ad.clone();
        }
    }
    if l == 1 {
        let b = rep.b_form(&pi, (0, 1, 2));
        let c = (-(S::from_i64(2) * ad.clone())).inv()?;
        for r in 0..4 {
            for s in 0..4 {
                g[(pos(lay.w[r]), pos(lay.w[s]))] = b[(r, s)].mul_ref(&c);
            }
        }
    }

    let half = S::frac(1, 2);
    let mut phi = Vec::new();
    for i in 0..3 {
        let mut f = Matrix::<S>::zeros(dm, dm);
        for j in 0..3 {
            if j == i {
                continue;
            }
            let k = 3 - i - j;
            let sg = S::from_i64(perm_sign(i, j, k));
            f[(pos(lay.sigma[k]), pos(lay.sigma[j]))] = sg.clone();
            f[(pos(lay.eh_sigma[k]), pos(lay.eh_sigma[j]))] = sg.clone();
            for li in 0..q {
                f[(pos(lay.eh_e[li][k]), pos(lay.eh_e[li][j]))] = sg.clone();
            }
        }
        f[(pos(lay.eh_sigma[i]), pos(lay.d))] = half.clone();
        f[(pos(lay.d), pos(lay.eh_sigma[i]))] = S::from_i64(-2);
        for li in 0..q {
            f[(pos(lay.eh_e[li][i]), pos(lay.e[li]))] = S::from_i64(2);
            f[(pos(lay.e[li]), pos(lay.eh_e[li][i]))] = -half.clone();
        }
        if l == 1 {
            let rho = rep.spin_lift(&sigma_in_wedges::<S>(q, i));
            for r in 0..4 {
                for s in 0..4 {
                    f[(pos(lay.w[r]), pos(lay.w[s]))] = rho[(r, s)].clone();
                }
            }
        }
        phi.push(f);
    }
    let xi: Vec<Vec<S>> = (0..3)
        .map(|i| {
            let mut x = vec![S::zero(); dm];
            x[pos(lay.sigma[i])] = delta.clone();
            x
        })
        .collect();
    let eta = xi.iter().map(|x| g.apply_left(x)).collect();
    let provenance = Provenance {
        family: "alekseevsky".into(),
        n: (dm - 3) / 4,
        q: Some(q),
        l: Some(l),
        variant: Variant::Noncompact,
        note: None,
    };
    Ok(SasakiModel { provenance, alpha, delta, algebra: alg, grading, xi, eta, phi, g })
}

/// H-homothetic deformation `eta' = c eta`, `xi' = xi/c`, `phi' = phi`,
/// `g' = a g + b sum eta_i (x) eta_i`; requires `a > 0` and `c^2 = a + b`.
/// The result has parameters `alpha' = alpha c / a`, `delta' = delta / c`.
pub fn h_deform<S: Scalar>(m: &SasakiModel<S>, a: S, b: S, c: S) -> Result<SasakiModel<S>, ModelError> {
    if a.signum() <= 0 {
        return Err(ModelError::InvalidParameters("deformation needs a > 0".into()));
    }
    nonzero(&c, "c")?;
    let lhs = c.clone() * c.clone();
    let rhs = a.clone() + b.clone();
    let dev = (lhs - rhs).abs();
    if !dev.is_negligible(1.0, crate::scalars::DEFAULT_TOL) {
        return Err(ModelError::InvalidParameters("deformation needs c^2 = a + b".into()));
    }
    let cinv = c.inv()?;
    let mut out = m.clone();
    out.xi = m.xi.iter().map(|x| crate::linalg::scale_vec(&cinv, x)).collect();
    out.eta = m.eta.iter().map(|x| crate::linalg::scale_vec(&c, x)).collect();
    let dm = m.dim_m();
    let mut g = m.g.scale(&a);
    for e in &m.eta {
        for r in 0..dm {
            if e[r].is_zero() {
                continue;
            }
            for s in 0..dm {
                let v = b.mul_ref(&e[r]).mul_ref(&e[s]);
                g[(r, s)] += v;
            }
        }
    }
    out.g = g;
    out.alpha = m.alpha.mul_ref(&c).div(&a)?;
    out.delta = m.delta.div(&c)?;
    let note = format!("H-deformed (a={}, b={}, c={})", a.to_text(), b.to_text(), c.to_text());
    out.provenance.note = Some(match &m.provenance.note {
        Some(prev) => format!("{prev}; {note}"),
        None => note,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::QSqrt2;

    fn qs(v: i64) -> QSqrt2 {
        QSqrt2::from_i64(v)
    }

    #[test]
    fn dimensions() {
        let m = build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, qs(1), qs(1)).unwrap();
        assert_eq!((m.algebra.dim(), m.dim_m(), m.n()), (10, 7, 1));
        let m = build_symmetric(SymmetricFamily::Su, 2, Variant::Compact, qs(1), qs(1)).unwrap();
        assert_eq!((m.algebra.dim(), m.dim_m()), (15, 11));
        let m = build_symmetric(SymmetricFamily::So, 3, Variant::Compact, qs(2), qs(1)).unwrap();
        assert_eq!((m.algebra.dim(), m.dim_m()), (21, 15));
        let m = build_alekseevsky(2, 1, qs(1), qs(-1)).unwrap();
        assert_eq!((m.algebra.dim(), m.dim_m(), m.n()), (20, 19, 4));
        let m = build_alekseevsky(0, 0, qs(1), qs(-1)).unwrap();
        assert_eq!(m.dim_m(), 7);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            build_symmetric(SymmetricFamily::Su, 0, Variant::Compact, qs(1), qs(1)),
            Err(ModelError::InvalidParameters(_))
        ));
        assert!(build_symmetric(SymmetricFamily::So, 2, Variant::Compact, qs(1), qs(1)).is_err());
        assert!(matches!(
            build_symmetric(SymmetricFamily::Sp, 1, Variant::Compact, qs(1), qs(-1)),
            Err(ModelError::ParameterSignMismatch(_))
        ));
        assert!(build_symmetric(SymmetricFamily::Sp, 1, Variant::Noncompact, qs(1), qs(1)).is_err());
        assert!(build_alekseevsky(0, 0, qs(1), qs(1)).is_err());
        assert!(build_alekseevsky(0, 2, qs(1), qs(-1)).is_err());
        assert!(matches!(
            build_alekseevsky(3, 0, qs(1), qs(-1)),
            Err(ModelError::Clifford(CliffordError::Unsupported(3)))
        ));
    }

    #[test]
    fn killing_normalisation() {
        for (fam, n) in [(SymmetricFamily::Sp, 1), (SymmetricFamily::Su, 1), (SymmetricFamily::So, 3), (SymmetricFamily::Sp, 2)] {
            let m = build_symmetric(fam, n, Variant::Compact, qs(1), qs(1)).unwrap();
            let k = m.algebra.killing();
            for s in &m.grading.v {
                assert_eq!(k[(*s, *s)], qs(-4 * (n as i64 + 2)), "{fam:?} {n}");
            }
        }
        let aw = example_model("aloff-wallach", qs(2), qs(1)).unwrap();
        assert_eq!(aw.algebra.killing()[(4, 4)], qs(-12));
    }

    #[test]
    fn realizations_consistent() {
        for variant in [Variant::Compact, Variant::Noncompact] {
            let (a, d) = if variant == Variant::Compact { (1, 1) } else { (1, -1) };
            for (fam, n) in [(SymmetricFamily::Sp, 1), (SymmetricFamily::Su, 1), (SymmetricFamily::So, 3)] {
                let m = build_symmetric(fam, n, variant, qs(a), qs(d)).unwrap();
                assert!(m.algebra.realization_residual().unwrap().is_zero(), "{fam:?} {variant:?}");
            }
        }
    }

    #[test]
    fn examples_match_su_family() {
        let aw = example_model("aloff-wallach", qs(2), qs(1)).unwrap();
        let su = build_symmetric(SymmetricFamily::Su, 1, Variant::Compact, qs(2), qs(1)).unwrap();
        assert_eq!(aw.algebra.entries(), su.algebra.entries());
        assert_eq!((aw.g.clone(), aw.phi.clone()), (su.g.clone(), su.phi.clone()));
        let d = example_model("su21", qs(1), qs(-1)).unwrap();
        let su = build_symmetric(SymmetricFamily::Su, 1, Variant::Noncompact, qs(1), qs(-1)).unwrap();
        assert_eq!(d.algebra.entries(), su.algebra.entries());
        // g(e1*, e1*) = -1/(2 alpha delta)
        assert_eq!(d.g[(3, 3)], QSqrt2::from_parts(1, 2, 0, 1));
        assert_eq!(aw.g[(3, 3)], QSqrt2::from_parts(1, 4, 0, 1));
    }
}
