//! Deliberate single-entry corruptions of a model, used to show that every
//! check can fail.

use std::fmt;

use crate::liealg::LieAlgebra;
use crate::models::SasakiModel;
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Fault {
    /// Add `by` to `c[i][j][k]` (and `-by` to `c[j][i][k]`).
    StructureConstant { i: usize, j: usize, k: usize, by: i64 },
    /// Add `by` to one entry of the matrix realizing basis element `basis`.
    Realization { basis: usize, row: usize, col: usize, by: i64 },
    Phi { i: usize, row: usize, col: usize, by: i64 },
    /// Replace `phi_i` by `-phi_i`.
    NegatePhi { i: usize },
    Metric { row: usize, col: usize, by: i64 },
    Xi { i: usize, at: usize, by: i64 },
    Eta { i: usize, at: usize, by: i64 },
    Alpha { by: i64 },
    Delta { by: i64 },
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::StructureConstant { i, j, k, by } => write!(f, "c[{i}][{j}][{k}] += {by}"),
            Fault::Realization { basis, row, col, by } => write!(f, "realization[{basis}][{row}][{col}] += {by}"),
            Fault::Phi { i, row, col, by } => write!(f, "phi{}[{row}][{col}] += {by}", i + 1),
            Fault::NegatePhi { i } => write!(f, "phi{} -> -phi{}", i + 1, i + 1),
            Fault::Metric { row, col, by } => write!(f, "g[{row}][{col}] += {by}"),
            Fault::Xi { i, at, by } => write!(f, "xi{}[{at}] += {by}", i + 1),
            Fault::Eta { i, at, by } => write!(f, "eta{}[{at}] += {by}", i + 1),
            Fault::Alpha { by } => write!(f, "alpha += {by}"),
            Fault::Delta { by } => write!(f, "delta += {by}"),
        }
    }
}

fn perturb_constant<S: Scalar>(alg: &LieAlgebra<S>, i: usize, j: usize, k: usize, by: &S) -> LieAlgebra<S> {
    let mut entries: Vec<_> = alg.entries().into_iter().filter(|(a, b, _, _)| a < b).collect();
    let (a, b, d) = if i < j { (i, j, by.clone()) } else { (j, i, -by.clone()) };
    match entries.iter_mut().find(|(x, y, z, _)| (*x, *y, *z) == (a, b, k)) {
        Some(e) => e.3 += d,
        None => entries.push((a, b, k, d)),
    }
    let mut out = LieAlgebra::from_structure_constants(alg.dim(), alg.labels().to_vec(), entries)
        .expect("perturbed entries stay canonical");
    out.realization = alg.realization.clone();
    out
}

/// The model with `fault` applied. Indices out of range panic.
pub fn inject<S: Scalar>(m: &SasakiModel<S>, fault: &Fault) -> SasakiModel<S> {
    let mut out = m.clone();
    let s = |by: i64| S::from_i64(by);
    match *fault {
        Fault::StructureConstant { i, j, k, by } => {
            assert!(i != j, "diagonal structure constants are zero");
            out.algebra = perturb_constant(&m.algebra, i, j, k, &s(by));
        }
        Fault::Realization { basis, row, col, by } => {
            let mats = out.algebra.realization.as_mut().expect("model has a realization");
            mats[basis][(row, col)] += s(by);
        }
        Fault::Phi { i, row, col, by } => out.phi[i][(row, col)] += s(by),
        Fault::NegatePhi { i } => out.phi[i] = m.phi[i].scale(&s(-1)),
        Fault::Metric { row, col, by } => out.g[(row, col)] += s(by),
        Fault::Xi { i, at, by } => out.xi[i][at] += s(by),
        Fault::Eta { i, at, by } => out.eta[i][at] += s(by),
        Fault::Alpha { by } => out.alpha += s(by),
        Fault::Delta { by } => out.delta += s(by),
    }
    out
}

/// A fixed list of faults that together make every applicable check fail
/// on the built-in models. Entries are chosen from the model's grading so
/// the list adapts to each family.
pub fn standard_faults<S: Scalar>(m: &SasakiModel<S>) -> Vec<Fault> {
    let gr = &m.grading;
    let v = &gr.v;
    let hh = &gr.hh;
    let mut out = vec![
        Fault::StructureConstant { i: v[0], j: v[1], k: v[2], by: 1 },
        Fault::StructureConstant { i: v[0], j: v[1], k: hh[0], by: 1 },
        Fault::StructureConstant { i: hh[0], j: hh[1], k: v[0], by: 1 },
        Fault::StructureConstant { i: v[0], j: hh[0], k: hh[1], by: 1 },
        Fault::NegatePhi { i: 0 },
        Fault::Phi { i: 0, row: 3, col: 4, by: 1 },
        Fault::Phi { i: 0, row: 0, col: 3, by: 1 },
        Fault::Metric { row: 3, col: 3, by: 1 },
        Fault::Metric { row: 0, col: 0, by: 1 },
        Fault::Metric { row: 3, col: 4, by: 1 },
        Fault::Xi { i: 0, at: 0, by: 1 },
        Fault::Eta { i: 0, at: 0, by: 1 },
        Fault::Alpha { by: 1 },
        Fault::Delta { by: 1 },
    ];
    if let Some(&h0) = gr.h.first() {
        out.push(Fault::StructureConstant { i: h0, j: hh[0], k: h0, by: 1 });
        out.push(Fault::StructureConstant { i: h0, j: hh[0], k: hh[0], by: 1 });
        out.push(Fault::StructureConstant { i: hh[0], j: hh[1], k: h0, by: 1 });
        if gr.h.len() > 1 {
            out.push(Fault::StructureConstant { i: h0, j: gr.h[1], k: hh[0], by: 1 });
        }
    }
    if m.algebra.realization.is_some() {
        out.push(Fault::Realization { basis: 0, row: 0, col: 0, by: 1 });
    }
    if let Some(sub) = &gr.sub {
        if let (Some(&w0), Some(&w1)) = (sub.w.first(), sub.w.get(1)) {
            out.push(Fault::StructureConstant { i: w0, j: w1, k: v[0], by: 1 });
            out.push(Fault::StructureConstant { i: v[0], j: w0, k: w1, by: 1 });
        }
        if let (Some(&a), Some(&b)) = (sub.h1.get(1), sub.h1.get(2)) {
            out.push(Fault::StructureConstant { i: a, j: b, k: v[2], by: 1 });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_alekseevsky;
    use crate::scalars::QSqrt2;

    #[test]
    fn structure_constant_fault_is_antisymmetric() {
        let m = build_alekseevsky(0, 0, QSqrt2::one(), QSqrt2::from_i64(-1)).unwrap();
        let f = inject(&m, &Fault::StructureConstant { i: 1, j: 0, k: 2, by: 1 });
        let before = m.algebra.coeff(0, 1, 2);
        assert_eq!(f.algebra.coeff(0, 1, 2), before.clone() - QSqrt2::one());
        assert_eq!(f.algebra.coeff(1, 0, 2), -(before - QSqrt2::one()));
    }
}
