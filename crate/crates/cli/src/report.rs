//! JSON encoding of results. Numbers are written as strings.

use neron::exact_linalg::{FiniteAbelianGroup, IntMatrix, LatticeSubgroup, RatMatrix};
use neron::fibers::{FiberPoint, SemiTorusFiber};
use neron::monodromy::Cocycle;
use neron::normal_functions::{CurveCohomologyClass, NormalFunctionExpr};
use neron::{BigInt, Complex64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::family::{format_complex, format_float, format_rational};

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub tolerance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub result: Value,
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }
}

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn count(x: usize) -> Value {
    Value::String(x.to_string())
}

pub fn ints(v: &[BigInt]) -> Value {
    v.iter().map(int).collect()
}

pub fn float(x: f64) -> Value {
    Value::String(format_float(x))
}

pub fn complex(z: Complex64) -> Value {
    json!(format_complex(z))
}

pub fn complexes(v: &[Complex64]) -> Value {
    v.iter().map(|z| complex(*z)).collect()
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    (0..m.rows()).map(|i| ints(&m.row(i))).collect()
}

pub fn rat_matrix(m: &RatMatrix) -> Value {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| Value::String(format_rational(x))).collect::<Value>())
        .collect()
}

pub fn group(g: &FiniteAbelianGroup) -> Value {
    json!({
        "free_rank": count(g.free_rank()),
        "torsion": ints(g.torsion()),
        "display": g.to_string(),
    })
}

pub fn lattice(l: &LatticeSubgroup) -> Value {
    json!({
        "rank": count(l.rank()),
        "basis": l.basis_vectors().iter().map(|v| ints(v)).collect::<Value>(),
    })
}

pub fn fiber(f: &SemiTorusFiber) -> Value {
    json!({
        "dim": count(f.dim()),
        "lattice_rank": count(f.lattice_images().ncols()),
        "discrete": f.is_discrete(),
        "real_type": f.real_type().map(|(t, r)| vec![count(t), count(r)]),
        "compact": f.is_compact(),
        "point": f.is_point(),
    })
}

pub fn point(p: &FiberPoint) -> Value {
    complexes(&p.coords)
}

pub fn class(c: &CurveCohomologyClass) -> Value {
    json!({
        "coords": ints(&c.coords),
        "group": group(&c.group),
        "torsion": c.torsion,
        "zero": c.is_zero(),
    })
}

pub fn cocycle(c: &Cocycle) -> Value {
    json!({ "lambda1": ints(&c.lambda1), "lambda2": ints(&c.lambda2) })
}

pub fn normal_function(nf: &NormalFunctionExpr) -> Value {
    let sigma: serde_json::Map<String, Value> = nf
        .sigma()
        .iter()
        .map(|(k, c)| (k.to_string(), complexes(c)))
        .collect();
    json!({
        "sigma": sigma,
        "ell": nf.ell().iter().map(|x| Value::String(format_rational(x))).collect::<Value>(),
    })
}
