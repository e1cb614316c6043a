//! JSON file formats for fans and weight data.
//!
//! Fan file:
//!
//! ```json
//! { "dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "maximal_cones": [[0,1],[0,2],[1,2]] }
//! ```
//!
//! Weight data file:
//!
//! ```json
//! { "dim": 2, "fixed_points": [ { "id": "0-1", "weights": [[1,0],[0,1]] } ] }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{Fan, FanError};
use crate::lattice::{primitive, LatticeMatrix, LatticeVector};
use crate::toric::{ToricError, WeightBasis, WeightData};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Syntax(String),
    #[error("ray {index} has {got} entries, expected {dim}")]
    RayLength { index: usize, got: usize, dim: usize },
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("entry does not fit in a 64-bit integer")]
    Overflow,
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    dim: usize,
    rays: Vec<Vec<i64>>,
    maximal_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightFile {
    dim: usize,
    fixed_points: Vec<WeightRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightRecord {
    id: String,
    weights: Vec<Vec<i64>>,
}

/// Parses a fan file. Non-primitive rays are replaced by their primitive
/// generator and reported in the returned warnings.
pub fn parse_fan(text: &str) -> Result<(Fan, Vec<String>), IoError> {
    let file: FanFile = serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))?;
    let mut warnings = Vec::new();
    let mut rays = Vec::with_capacity(file.rays.len());
    for (index, r) in file.rays.iter().enumerate() {
        if r.len() != file.dim {
            return Err(IoError::RayLength { index, got: r.len(), dim: file.dim });
        }
        let v = LatticeVector::from_i64(r);
        let p = primitive(&v).map_err(|_| IoError::ZeroRay(index))?;
        if p != v {
            warnings.push(format!("ray {index} {v} is not primitive; replaced by {p}"));
        }
        rays.push(p);
    }
    let fan = Fan::new(file.dim, rays, file.maximal_cones)?;
    Ok((fan, warnings))
}

pub fn fan_to_string(f: &Fan) -> Result<String, IoError> {
    let rays = f
        .rays()
        .iter()
        .map(|r| r.to_i64().ok_or(IoError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    let file = FanFile { dim: f.dim(), rays, maximal_cones: f.maximal_cones().to_vec() };
    Ok(compact_json(&file))
}

pub fn parse_weight_data(text: &str) -> Result<WeightData, IoError> {
    let file: WeightFile = serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))?;
    let mut bases = Vec::with_capacity(file.fixed_points.len());
    for rec in file.fixed_points {
        if rec.weights.iter().any(|w| w.len() != file.dim) {
            return Err(ToricError::Shape {
                id: rec.id,
                expected: file.dim,
                got: rec.weights.len(),
                dim: file.dim,
            }
            .into());
        }
        let rows: Vec<&[i64]> = rec.weights.iter().map(Vec::as_slice).collect();
        let m = if rows.is_empty() { LatticeMatrix::zeros(0, file.dim) } else { LatticeMatrix::from_i64(&rows) };
        bases.push(WeightBasis::new(rec.id, m)?);
    }
    Ok(WeightData::new(file.dim, bases)?)
}

pub fn weight_data_to_string(w: &WeightData) -> Result<String, IoError> {
    let fixed_points = w
        .bases()
        .iter()
        .map(|b| {
            Ok(WeightRecord { id: b.id.clone(), weights: b.matrix().to_i64().ok_or(IoError::Overflow)? })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(compact_json(&WeightFile { dim: w.dim(), fixed_points }))
}

/// Pretty JSON with integer vectors kept on one line.
fn compact_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("plain data serializes");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let flat = |v: &Value| match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    };
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(a) if !flat(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(o) => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(k).expect("string key"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("scalar")),
    }
}
