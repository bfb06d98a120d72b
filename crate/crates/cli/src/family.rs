//! JSON family files.
//!
//! Every number is a string: integers in decimal, rationals as `"a/b"`,
//! complex numbers as `["re", "im"]`.

use std::collections::BTreeMap;

use neron::exact_linalg::IntMatrix;
use neron::hodge_limits::HodgeFiltrationStep;
use neron::{BigInt, BigRational, Complex64};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    monodromy: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f0: Option<Vec<Vec<[String; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normal_function: Option<NormalFunctionFile>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct NormalFunctionFile {
    #[serde(default)]
    sigma: BTreeMap<String, Vec<[String; 2]>>,
    ell: Vec<String>,
}

/// `σ(t) = Σ c_k t^k`, `ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFunctionSpec {
    pub sigma: BTreeMap<i64, Vec<Complex64>>,
    pub ell: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub label: Option<String>,
    pub monodromy: Vec<IntMatrix>,
    /// Columns spanning `F⁰`.
    pub f0: Option<Vec<Vec<Complex64>>>,
    pub weight: i64,
    pub normal_function: Option<NormalFunctionSpec>,
}

pub const DEFAULT_WEIGHT: i64 = -1;

impl FamilySpec {
    pub fn rank(&self) -> usize {
        self.monodromy[0].rows()
    }

    pub fn f0_step(&self, tol: f64) -> Result<Option<HodgeFiltrationStep>, CliError> {
        self.f0
            .as_ref()
            .map(|cols| {
                HodgeFiltrationStep::from_columns(self.rank(), cols, tol)
                    .map_err(|e| CliError::Validation(format!("f0: {e}")))
            })
            .transpose()
    }
}

fn schema(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Schema(format!("{path}: {msg}"))
}

fn parse_int(s: &str, path: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse()
        .map_err(|_| schema(path, format!("expected a decimal integer, found {s:?}")))
}

fn parse_float(s: &str, path: &str) -> Result<f64, CliError> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(schema(path, format!("expected a finite decimal number, found {s:?}"))),
    }
}

fn parse_complex(pair: &[String; 2], path: &str) -> Result<Complex64, CliError> {
    Ok(Complex64::new(
        parse_float(&pair[0], &format!("{path}[0]"))?,
        parse_float(&pair[1], &format!("{path}[1]"))?,
    ))
}

pub fn parse_rational(s: &str, path: &str) -> Result<BigRational, CliError> {
    let bad = || schema(path, format!("expected an integer or \"a/b\", found {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shortest string that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:?}")
}

pub fn format_complex(z: Complex64) -> [String; 2] {
    [format_float(z.re), format_float(z.im)]
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn parse_family(text: &str) -> Result<FamilySpec, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: FamilyFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(&path, e.into_inner())
    })?;
    let spec = from_file(file)?;
    validate(&spec)?;
    Ok(spec)
}

fn from_file(file: FamilyFile) -> Result<FamilySpec, CliError> {
    let mut monodromy = Vec::with_capacity(file.monodromy.len());
    for (m, rows) in file.monodromy.iter().enumerate() {
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .iter()
                .enumerate()
                .map(|(j, x)| parse_int(x, &format!("monodromy[{m}][{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            parsed.push(row);
        }
        let cols = parsed.first().map_or(0, Vec::len);
        if parsed.iter().any(|r| r.len() != cols) {
            return Err(validation(format!("monodromy[{m}]: rows have different lengths")));
        }
        let matrix = IntMatrix::from_rows_vec(&parsed).map_err(|e| validation(format!("monodromy[{m}]: {e}")))?;
        monodromy.push(matrix);
    }
    let f0 = file
        .f0
        .as_ref()
        .map(|cols| {
            cols.iter()
                .enumerate()
                .map(|(j, col)| {
                    col.iter()
                        .enumerate()
                        .map(|(i, z)| parse_complex(z, &format!("f0[{j}][{i}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let weight = match &file.weight {
        Some(w) => i64::try_from(parse_int(w, "weight")?).map_err(|_| schema("weight", "out of range"))?,
        None => DEFAULT_WEIGHT,
    };
    let normal_function = file
        .normal_function
        .as_ref()
        .map(|nf| -> Result<NormalFunctionSpec, CliError> {
            let mut sigma = BTreeMap::new();
            for (k, coeffs) in &nf.sigma {
                let path = format!("normal_function.sigma.{k}");
                let power: i64 = k
                    .trim()
                    .parse()
                    .map_err(|_| schema(&path, "keys must be integer powers of t"))?;
                let coeffs = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, z)| parse_complex(z, &format!("{path}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                if sigma.insert(power, coeffs).is_some() {
                    return Err(schema(&path, "duplicate power"));
                }
            }
            let ell = nf
                .ell
                .iter()
                .enumerate()
                .map(|(i, x)| parse_rational(x, &format!("normal_function.ell[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(NormalFunctionSpec { sigma, ell })
        })
        .transpose()?;
    Ok(FamilySpec {
        label: file.label,
        monodromy,
        f0,
        weight,
        normal_function,
    })
}

pub fn validate(spec: &FamilySpec) -> Result<(), CliError> {
    match spec.monodromy.len() {
        1 | 2 => {}
        k => return Err(validation(format!("monodromy: expected one or two matrices, found {k}"))),
    }
    let n = spec.monodromy[0].rows();
    for (m, t) in spec.monodromy.iter().enumerate() {
        if !t.is_square() {
            return Err(validation(format!("monodromy[{m}]: matrix is {}x{}, not square", t.rows(), t.cols())));
        }
        if t.rows() != n {
            return Err(validation(format!("monodromy[{m}]: size {} differs from {n}", t.rows())));
        }
        let det = t.determinant().map_err(|e| validation(format!("monodromy[{m}]: {e}")))?;
        if !det.abs().is_one() {
            return Err(validation(format!("monodromy[{m}]: determinant {det}, not unimodular")));
        }
    }
    if let [a, b] = &spec.monodromy[..] {
        if a * b != b * a {
            return Err(validation("monodromy: the two matrices do not commute"));
        }
    }
    if spec.weight != DEFAULT_WEIGHT {
        return Err(validation(format!("weight: only weight -1 is supported, found {}", spec.weight)));
    }
    if let Some(cols) = &spec.f0 {
        if cols.is_empty() {
            return Err(validation("f0: at least one column is required"));
        }
        if let Some(j) = cols.iter().position(|c| c.len() != n) {
            return Err(validation(format!("f0[{j}]: expected {n} entries")));
        }
        spec.f0_step(1e-9)?;
    }
    if let Some(nf) = &spec.normal_function {
        if nf.ell.len() != n {
            return Err(validation(format!("normal_function.ell: expected {n} entries")));
        }
        if let Some((k, _)) = nf.sigma.iter().find(|(_, c)| c.len() != n) {
            return Err(validation(format!("normal_function.sigma.{k}: expected {n} entries")));
        }
    }
    Ok(())
}

fn to_file(spec: &FamilySpec) -> FamilyFile {
    FamilyFile {
        label: spec.label.clone(),
        monodromy: spec
            .monodromy
            .iter()
            .map(|t| {
                (0..t.rows())
                    .map(|i| t.row(i).iter().map(ToString::to_string).collect())
                    .collect()
            })
            .collect(),
        f0: spec
            .f0
            .as_ref()
            .map(|cols| cols.iter().map(|c| c.iter().map(|z| format_complex(*z)).collect()).collect()),
        weight: (spec.weight != DEFAULT_WEIGHT).then(|| spec.weight.to_string()),
        normal_function: spec.normal_function.as_ref().map(|nf| NormalFunctionFile {
            sigma: nf
                .sigma
                .iter()
                .map(|(k, c)| (k.to_string(), c.iter().map(|z| format_complex(*z)).collect()))
                .collect(),
            ell: nf.ell.iter().map(format_rational).collect(),
        }),
    }
}

pub fn emit_family(spec: &FamilySpec) -> String {
    let mut out = serde_json::to_string_pretty(&to_file(spec)).expect("family files serialize");
    out.push('\n');
    out
}
