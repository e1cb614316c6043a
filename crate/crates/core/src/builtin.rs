//! Library of standard smooth complete fans.

use std::str::FromStr;

use thiserror::Error;

use crate::fan::{Fan, FanError};
use crate::lattice::LatticeVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("unknown builtin fan `{0}` (expected cp1, cpn, hirzebruch)")]
    UnknownBuiltin(String),
    #[error("bad parameter for `{name}`: {reason}")]
    BadParam { name: String, reason: String },
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// The fan of the projective line: rays `(1)` and `(-1)`.
pub fn cp1() -> Fan {
    Fan::new(1, vec![LatticeVector::from_i64(&[1]), LatticeVector::from_i64(&[-1])], vec![
        vec![0],
        vec![1],
    ])
    .expect("cp1 is well formed")
}

/// Projective space: rays `e_1, …, e_k, -(e_1 + … + e_k)`, all `k`-subsets maximal.
pub fn cpn(k: usize) -> Result<Fan, BuiltinError> {
    if k == 0 {
        return Err(BuiltinError::BadParam { name: "cpn".into(), reason: "k must be at least 1".into() });
    }
    let mut rays: Vec<LatticeVector> = (0..k)
        .map(|i| LatticeVector::from_i64(&(0..k).map(|j| i64::from(i == j)).collect::<Vec<_>>()))
        .collect();
    rays.push(LatticeVector::from_i64(&vec![-1; k]));
    Ok(Fan::new(k, rays, k_subsets(k + 1, k))?)
}

/// Hirzebruch surface: rays `(1,0), (0,1), (-1,a), (0,-1)` in cyclic order.
pub fn hirzebruch(a: u32) -> Fan {
    let a = i64::from(a);
    let rays = [[1, 0], [0, 1], [-1, a], [0, -1]]
        .iter()
        .map(|r| LatticeVector::from_i64(r))
        .collect();
    Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
        .expect("hirzebruch fans are well formed")
}

/// A named builtin with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Cp1,
    Cpn(usize),
    Hirzebruch(u32),
}

impl Builtin {
    /// Parses `name` plus its optional parameter, e.g. `("cpn", Some("3"))`.
    pub fn parse(name: &str, param: Option<&str>) -> Result<Builtin, BuiltinError> {
        let bad = |reason: String| BuiltinError::BadParam { name: name.to_string(), reason };
        let number = |p: Option<&str>| -> Result<i64, BuiltinError> {
            let p = p.ok_or_else(|| bad("missing parameter".into()))?;
            i64::from_str(p).map_err(|_| bad(format!("`{p}` is not an integer")))
        };
        match name {
            "cp1" => match param {
                None => Ok(Builtin::Cp1),
                Some(p) => Err(bad(format!("cp1 takes no parameter, got `{p}`"))),
            },
            "cpn" => {
                let k = number(param)?;
                if k < 1 {
                    return Err(bad("k must be at least 1".into()));
                }
                Ok(Builtin::Cpn(k as usize))
            }
            "hirzebruch" => {
                let a = number(param)?;
                if a < 0 {
                    return Err(bad("a must be nonnegative".into()));
                }
                let a = u32::try_from(a).map_err(|_| bad("a is too large".into()))?;
                Ok(Builtin::Hirzebruch(a))
            }
            other => Err(BuiltinError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn build(self) -> Result<Fan, BuiltinError> {
        match self {
            Builtin::Cp1 => Ok(cp1()),
            Builtin::Cpn(k) => cpn(k),
            Builtin::Hirzebruch(a) => Ok(hirzebruch(a)),
        }
    }

    pub fn name(self) -> String {
        match self {
            Builtin::Cp1 => "cp1".into(),
            Builtin::Cpn(k) => format!("cpn({k})"),
            Builtin::Hirzebruch(a) => format!("hirzebruch({a})"),
        }
    }
}

/// A builtin fan followed by a sequence of star subdivisions of maximal cones.
pub fn subdivided(base: Builtin, cones: &[Vec<usize>]) -> Result<Fan, BuiltinError> {
    let mut fan = base.build()?;
    for c in cones {
        fan = fan.star_subdivide(c)?;
    }
    Ok(fan)
}

/// The complete builtins used throughout the test corpus.
pub fn standard_library() -> Vec<(String, Fan)> {
    let mut out = vec![("cp1".to_string(), cp1())];
    for k in 2..=4 {
        out.push((format!("cpn({k})"), cpn(k).expect("k >= 1")));
    }
    for a in 0..=3 {
        out.push((format!("hirzebruch({a})"), hirzebruch(a)));
    }
    out
}

/// All `k`-element subsets of `0..n` in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
