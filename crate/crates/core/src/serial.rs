//! JSON model files and tensor dumps. Scalars are written as text
//! (`"1/2+3*sqrt2"` on the exact backend, shortest round-trip decimals on
//! floats) so that files reproduce models exactly.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::geometry::{self, Context, GeometryError, Nomizu};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::models::{Grading, Provenance, SasakiModel};
use crate::scalars::{Backend, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SerialError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema violation at {path:?}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("unknown scalar format at {path:?}: {text:?}")]
    UnknownScalarFormat { path: String, text: String },
}

fn violation(path: &str, message: impl Into<String>) -> SerialError {
    SerialError::SchemaViolation { path: path.to_string(), message: message.into() }
}

fn scalar_text<S: Scalar>(x: &S) -> Value {
    Value::String(x.to_text())
}

fn vec_value<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(scalar_text).collect())
}

fn matrix_value<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows).map(|r| vec_value(m.row(r))).collect())
}

pub fn model_to_value<S: Scalar>(m: &SasakiModel<S>) -> Value {
    let alg = &m.algebra;
    // one entry per unordered pair, i < j
    let c: Vec<Value> = alg
        .entries()
        .into_iter()
        .filter(|(i, j, _, _)| i < j)
        .map(|(i, j, k, v)| json!([i, j, k, v.to_text()]))
        .collect();
    let mut algebra = Map::new();
    algebra.insert("dim".into(), json!(alg.dim()));
    algebra.insert("labels".into(), json!(alg.labels()));
    algebra.insert("c".into(), Value::Array(c));
    if let Some(real) = &alg.realization {
        algebra.insert("realization".into(), Value::Array(real.iter().map(matrix_value).collect()));
    }
    json!({
        "backend": S::BACKEND,
        "provenance": m.provenance,
        "alpha": m.alpha.to_text(),
        "delta": m.delta.to_text(),
        "algebra": Value::Object(algebra),
        "grading": m.grading,
        "xi": Value::Array(m.xi.iter().map(|v| vec_value(v)).collect()),
        "eta": Value::Array(m.eta.iter().map(|v| vec_value(v)).collect()),
        "phi": Value::Array(m.phi.iter().map(matrix_value).collect()),
        "g": matrix_value(&m.g),
    })
}

pub fn to_json<S: Scalar>(m: &SasakiModel<S>) -> String {
    serde_json::to_string_pretty(&model_to_value(m)).expect("model values serialize")
}

pub fn parse_json(text: &str) -> Result<Value, SerialError> {
    serde_json::from_str(text).map_err(|e| SerialError::Json(e.to_string()))
}

/// Backend recorded in a model file; files without the field are exact.
pub fn backend_of(v: &Value) -> Result<Backend, SerialError> {
    match v.get("backend") {
        None => Ok(Backend::Exact),
        Some(b) => serde_json::from_value(b.clone()).map_err(|e| violation("/backend", e.to_string())),
    }
}

pub fn from_json<S: Scalar>(text: &str) -> Result<SasakiModel<S>, SerialError> {
    model_from_value(&parse_json(text)?)
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, SerialError> {
    v.get(key).ok_or_else(|| violation(&format!("{path}/{key}"), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, SerialError> {
    v.as_array().ok_or_else(|| violation(path, "expected an array"))
}

fn index(v: &Value, path: &str) -> Result<usize, SerialError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| violation(path, "expected a nonnegative integer"))
}

fn scalar<S: Scalar>(v: &Value, path: &str) -> Result<S, SerialError> {
    let text = match v {
        Value::String(s) => s.clone(),
        // bare JSON numbers are accepted as decimal text
        Value::Number(n) => n.to_string(),
        _ => return Err(violation(path, "expected a scalar string")),
    };
    S::parse_text(&text).map_err(|_| SerialError::UnknownScalarFormat { path: path.to_string(), text })
}

fn vector<S: Scalar>(v: &Value, path: &str, len: usize) -> Result<Vec<S>, SerialError> {
    let a = array(v, path)?;
    if a.len() != len {
        return Err(violation(path, format!("expected {len} entries, found {}", a.len())));
    }
    a.iter().enumerate().map(|(i, x)| scalar(x, &format!("{path}/{i}"))).collect()
}

fn vectors<S: Scalar>(v: &Value, path: &str, count: usize, len: usize) -> Result<Vec<Vec<S>>, SerialError> {
    let a = array(v, path)?;
    if a.len() != count {
        return Err(violation(path, format!("expected {count} entries, found {}", a.len())));
    }
    a.iter().enumerate().map(|(i, x)| vector(x, &format!("{path}/{i}"), len)).collect()
}

fn matrix<S: Scalar>(v: &Value, path: &str, rows: usize, cols: usize) -> Result<Matrix<S>, SerialError> {
    Ok(Matrix::from_rows(vectors(v, path, rows, cols)?))
}

fn square_matrix<S: Scalar>(v: &Value, path: &str) -> Result<Matrix<S>, SerialError> {
    let n = array(v, path)?.len();
    matrix(v, path, n, n)
}

fn algebra_from_value<S: Scalar>(v: &Value) -> Result<LieAlgebra<S>, SerialError> {
    let p = "/algebra";
    let dim = index(field(v, p, "dim")?, "/algebra/dim")?;
    let labels: Vec<String> = serde_json::from_value(field(v, p, "labels")?.clone())
        .map_err(|e| violation("/algebra/labels", e.to_string()))?;
    if labels.len() != dim {
        return Err(violation("/algebra/labels", format!("{} labels for dimension {dim}", labels.len())));
    }
    let mut seen: BTreeMap<(usize, usize, usize), (S, usize)> = BTreeMap::new();
    let mut entries = Vec::new();
    for (t, e) in array(field(v, p, "c")?, "/algebra/c")?.iter().enumerate() {
        let ep = format!("/algebra/c/{t}");
        let a = array(e, &ep)?;
        if a.len() != 4 {
            return Err(violation(&ep, "expected [i, j, k, scalar]"));
        }
        let (i, j, k) = (index(&a[0], &format!("{ep}/0"))?, index(&a[1], &format!("{ep}/1"))?, index(&a[2], &format!("{ep}/2"))?);
        if i >= dim || j >= dim || k >= dim {
            return Err(violation(&ep, format!("index out of range for dimension {dim}")));
        }
        let c: S = scalar(&a[3], &format!("{ep}/3"))?;
        if i == j {
            if !c.is_zero() {
                return Err(violation(&ep, "nonzero bracket of a basis element with itself"));
            }
            continue;
        }
        let (key, val) = if i < j { ((i, j, k), c.clone()) } else { ((j, i, k), -c.clone()) };
        if let Some((prev, at)) = seen.get(&key) {
            let message = if *prev == val {
                format!("duplicates entry {at}")
            } else {
                format!("c[{i}][{j}][{k}] is not minus c[{j}][{i}][{k}] (entry {at})")
            };
            return Err(violation(&ep, message));
        }
        seen.insert(key, (val, t));
        entries.push((i, j, k, c));
    }
    let mut alg =
        LieAlgebra::from_structure_constants(dim, labels, entries).map_err(|e| violation("/algebra/c", e.to_string()))?;
    if let Some(r) = v.get("realization") {
        let rp = "/algebra/realization";
        let mats = array(r, rp)?;
        if mats.len() != dim {
            return Err(violation(rp, format!("expected {dim} matrices, found {}", mats.len())));
        }
        let mut out = Vec::with_capacity(dim);
        for (i, m) in mats.iter().enumerate() {
            let mp = format!("{rp}/{i}");
            let rows = array(m, &mp)?.len();
            let cols = match array(m, &mp)?.first() {
                Some(row) => array(row, &format!("{mp}/0"))?.len(),
                None => 0,
            };
            out.push(matrix(m, &mp, rows, cols)?);
        }
        if let Some(first) = out.first() {
            if let Some(i) = out.iter().position(|m| m.rows != first.rows || m.cols != first.cols) {
                return Err(violation(&format!("{rp}/{i}"), "matrices of different shapes"));
            }
        }
        alg.realization = Some(out);
    }
    Ok(alg)
}

pub fn model_from_value<S: Scalar>(v: &Value) -> Result<SasakiModel<S>, SerialError> {
    if !v.is_object() {
        return Err(violation("", "expected an object"));
    }
    let backend = backend_of(v)?;
    if backend == Backend::Float && S::BACKEND == Backend::Exact {
        return Err(violation("/backend", format!("file uses the {backend} backend, requested {}", S::BACKEND)));
    }
    let provenance: Provenance = serde_json::from_value(field(v, "", "provenance")?.clone())
        .map_err(|e| violation("/provenance", e.to_string()))?;
    let alpha = scalar(field(v, "", "alpha")?, "/alpha")?;
    let delta = scalar(field(v, "", "delta")?, "/delta")?;
    let algebra = algebra_from_value(field(v, "", "algebra")?)?;
    let grading: Grading =
        serde_json::from_value(field(v, "", "grading")?.clone()).map_err(|e| violation("/grading", e.to_string()))?;
    let g: Matrix<S> = square_matrix(field(v, "", "g")?, "/g")?;
    let dm = g.rows;
    if dm != grading.v.len() + grading.hh.len() {
        return Err(violation("/g", format!("size {dm} differs from the grading's m of size {}", grading.v.len() + grading.hh.len())));
    }
    let xi = vectors(field(v, "", "xi")?, "/xi", 3, dm)?;
    let eta = vectors(field(v, "", "eta")?, "/eta", 3, dm)?;
    let phis = array(field(v, "", "phi")?, "/phi")?;
    if phis.len() != 3 {
        return Err(violation("/phi", "expected three matrices"));
    }
    let phi = phis.iter().enumerate().map(|(i, p)| matrix(p, &format!("/phi/{i}"), dm, dm)).collect::<Result<_, _>>()?;
    let m = SasakiModel { provenance, alpha, delta, algebra, grading, xi, eta, phi, g };
    m.validate_shapes().map_err(|e| violation("/grading", e))?;
    Ok(m)
}

/// Flat row-major dump of a tensor with its shape and per-axis labels.
pub fn tensor_dump<S: Scalar>(name: &str, shape: &[usize], axis_labels: &[Vec<String>], data: &[S]) -> Value {
    debug_assert_eq!(shape.iter().product::<usize>(), data.len());
    json!({
        "name": name,
        "backend": S::BACKEND,
        "shape": shape,
        "order": "row-major",
        "labels": axis_labels,
        "data": data.iter().map(|x| x.to_text()).collect::<Vec<_>>(),
    })
}

/// Metric, structure tensors, both Nomizu maps, the canonical torsion, both
/// curvature tensors and the Ricci tensor as named dumps over `m`.
pub fn tensor_dumps<S: Scalar>(m: &SasakiModel<S>) -> Result<Vec<(String, Value)>, GeometryError> {
    let ctx = Context::new(m)?;
    let dm = ctx.dm;
    let labels: Vec<String> = m.grading.m().iter().map(|&i| m.algebra.labels()[i].clone()).collect();
    let axes = |k: usize| vec![labels.clone(); k];
    let mut out = Vec::new();
    let mut push = |name: &str, shape: &[usize], data: Vec<S>| {
        out.push((name.to_string(), tensor_dump(name, shape, &axes(shape.len()), &data)));
    };
    push("g", &[dm, dm], m.g.data.clone());
    let mut phi = Vec::new();
    for p in &m.phi {
        phi.extend(p.data.iter().cloned());
    }
    let mut phi_dump = tensor_dump("phi", &[3, dm, dm], &[vec!["phi1".into(), "phi2".into(), "phi3".into()], labels.clone(), labels.clone()], &phi);
    phi_dump["index"] = json!("phi[i][r][c] is component r of phi_i applied to basis vector c");
    let lc = geometry::levi_civita_nomizu(&ctx);
    let can = geometry::canonical_nomizu(&ctx);
    // [x][y][r]: component r of Lambda_x y
    let nomizu = |l: &Nomizu<S>| -> Vec<S> {
        let mut v = Vec::with_capacity(dm * dm * dm);
        for a in 0..dm {
            for b in 0..dm {
                for r in 0..dm {
                    v.push(l[a][(r, b)].clone());
                }
            }
        }
        v
    };
    push("nomizu_levi_civita", &[dm, dm, dm], nomizu(&lc));
    push("nomizu_canonical", &[dm, dm, dm], nomizu(&can));
    let t = geometry::torsion_of(&ctx, &can);
    push("torsion_canonical", &[dm, dm, dm], t.iter().flat_map(|row| row.iter().flat_map(|v| v.iter().cloned())).collect());
    for (name, l) in [("curvature_canonical", &can), ("curvature_levi_civita", &lc)] {
        let r = geometry::curvature(&ctx, l);
        let mut v = Vec::with_capacity(dm.pow(4));
        for a in 0..dm {
            for b in 0..dm {
                for c in 0..dm {
                    for d in 0..dm {
                        v.push(r.at(a, b, c, d).clone());
                    }
                }
            }
        }
        push(name, &[dm, dm, dm, dm], v);
        if name == "curvature_levi_civita" {
            push("ricci_levi_civita", &[dm, dm], geometry::ricci(&ctx, &r).data);
        }
    }
    out.insert(1, ("phi".into(), phi_dump));
    for (name, v) in out.iter_mut() {
        let index = match name.as_str() {
            "nomizu_levi_civita" | "nomizu_canonical" => "[x][y][r] is component r of Lambda_x y",
            "torsion_canonical" => "[x][y][r] is component r of T(x, y)",
            "curvature_canonical" | "curvature_levi_civita" => "[a][b][c][d] is g(R(e_a, e_b) e_c, e_d)",
            _ => continue,
        };
        v["index"] = json!(index);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::example_model;
    use crate::scalars::QSqrt2;

    fn aw() -> SasakiModel<QSqrt2> {
        example_model("aloff-wallach", QSqrt2::from_i64(2), QSqrt2::one()).unwrap()
    }

    #[test]
    fn round_trip_aloff_wallach() {
        let m = aw();
        let back: SasakiModel<QSqrt2> = from_json(&to_json(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn antisymmetry_violation_is_rejected() {
        let mut v = model_to_value(&aw());
        let c = v["algebra"]["c"].as_array_mut().unwrap();
        let first = c[0].clone();
        let (i, j, k) = (first[0].clone(), first[1].clone(), first[2].clone());
        c.push(json!([j, i, k, first[3].clone()]));
        let n = c.len() - 1;
        match model_from_value::<QSqrt2>(&v) {
            Err(SerialError::SchemaViolation { path, .. }) => assert_eq!(path, format!("/algebra/c/{n}")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_scalar_reports_its_path() {
        let mut v = model_to_value(&aw());
        v["g"][1][1] = json!("1/2+3*sqrt3");
        match model_from_value::<QSqrt2>(&v) {
            Err(SerialError::UnknownScalarFormat { path, .. }) => assert_eq!(path, "/g/1/1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_field_and_wrong_shape() {
        let mut v = model_to_value(&aw());
        v.as_object_mut().unwrap().remove("xi");
        assert!(matches!(model_from_value::<QSqrt2>(&v), Err(SerialError::SchemaViolation { path, .. }) if path == "/xi"));
        let mut v = model_to_value(&aw());
        v["phi"][2].as_array_mut().unwrap().pop();
        assert!(matches!(model_from_value::<QSqrt2>(&v), Err(SerialError::SchemaViolation { path, .. }) if path == "/phi/2"));
    }

    #[test]
    fn exact_file_loads_on_floats() {
        let m: SasakiModel<f64> = from_json(&to_json(&aw())).unwrap();
        assert_eq!(m.alpha, 2.0);
        let err = from_json::<QSqrt2>(&to_json(&m)).unwrap_err();
        assert!(matches!(err, SerialError::SchemaViolation { path, .. } if path == "/backend"));
    }
}
