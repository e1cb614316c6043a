//! Double description for pointed polyhedral cones over exact integers.
//!
//! Input is an inequality system `⟨a_i, x⟩ ≥ 0` together with equations
//! `⟨e_j, x⟩ = 0`; output is the set of primitive extreme rays.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::{self, content, dot, LatticeMatrix, LatticeVector};

/// Extreme rays of `{x ∈ Q^n : A·x ≥ 0, E·x = 0}`, sorted, each primitive.
///
/// Returns `None` when the cone contains a line. The zero cone yields an
/// empty list.
pub fn extreme_rays(
    n: usize,
    inequalities: &[Vec<BigInt>],
    equations: &[Vec<BigInt>],
) -> Option<Vec<LatticeVector>> {
    // Work inside the lattice L = ker E with coordinates y, x = Bᵀ·y.
    let basis = lattice::right_kernel(&LatticeMatrix::from_rows(equations.to_vec(), n));
    let d = basis.nrows();
    if d == 0 {
        return Some(Vec::new());
    }
    let ineqs: Vec<Vec<BigInt>> = inequalities
        .iter()
        .map(|a| basis.rows().iter().map(|b| dot(a, b)).collect::<Vec<_>>())
        .filter(|a: &Vec<BigInt>| a.iter().any(|x| !x.is_zero()))
        .collect();
    if lattice::rank(&ineqs) < d {
        return None;
    }

    let rays = double_description(d, &ineqs);
    let out: BTreeSet<LatticeVector> = rays
        .into_iter()
        .map(|y| {
            let x: Vec<BigInt> = (0..n)
                .map(|j| basis.rows().iter().zip(&y).map(|(b, c)| &b[j] * c).sum())
                .collect();
            normalize(x)
        })
        .map(LatticeVector::new)
        .collect();
    Some(out.into_iter().collect())
}

fn normalize(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = content(&v);
    if !g.is_zero() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Incremental double description for a full-rank system in dimension `d`.
fn double_description(d: usize, ineqs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    // Initial simplicial cone from d independent rows.
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for (i, a) in ineqs.iter().enumerate() {
        rows.push(a.clone());
        if lattice::rank(&rows) == rows.len() {
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        } else {
            rows.pop();
        }
    }
    let k = LatticeMatrix::from_rows(rows, d);
    let kinv = lattice::rational_inverse(
        &k.rows()
            .iter()
            .map(|r| r.iter().cloned().map(num_rational::BigRational::from_integer).collect())
            .collect::<Vec<_>>(),
    )
    .expect("chosen rows are independent");
    let mut rays: Vec<Vec<BigInt>> = (0..d)
        .map(|j| {
            let col: Vec<_> = kinv.iter().map(|r| r[j].clone()).collect();
            normalize(lattice::clear_denominators(&col))
        })
        .collect();
    let mut processed: Vec<Vec<BigInt>> = chosen.iter().map(|&i| ineqs[i].clone()).collect();

    for (i, a) in ineqs.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in rays.iter().zip(&vals) {
            if !vp.is_positive() {
                continue;
            }
            for (q, vq) in rays.iter().zip(&vals) {
                if !vq.is_negative() || !adjacent(d, &processed, p, q) {
                    continue;
                }
                let combo: Vec<BigInt> =
                    p.iter().zip(q).map(|(x, y)| vp * y - vq * x).collect();
                next.push(normalize(combo));
            }
        }
        processed.push(a.clone());
        next.sort();
        next.dedup();
        rays = next;
    }
    rays
}

/// Algebraic adjacency test: the constraints tight at both rays have rank d − 2.
fn adjacent(d: usize, constraints: &[Vec<BigInt>], p: &[BigInt], q: &[BigInt]) -> bool {
    let tight: Vec<Vec<BigInt>> = constraints
        .iter()
        .filter(|a| dot(a, p).is_zero() && dot(a, q).is_zero())
        .cloned()
        .collect();
    d >= 2 && lattice::rank(&tight) == d - 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[i64]]) -> Vec<Vec<BigInt>> {
        r.iter().map(|x| x.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn vecs(r: &[&[i64]]) -> Vec<LatticeVector> {
        let mut v: Vec<_> = r.iter().map(|x| LatticeVector::from_i64(x)).collect();
        v.sort();
        v
    }

    #[test]
    fn quadrant() {
        let rays = extreme_rays(2, &rows(&[&[1, 0], &[0, 1]]), &[]).unwrap();
        assert_eq!(rays, vecs(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn square_pyramid() {
        // cone over the square with vertices (±1, ±1, 1)
        let ineqs = rows(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]);
        let rays = extreme_rays(3, &ineqs, &[]).unwrap();
        assert_eq!(rays, vecs(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]));
    }

    #[test]
    fn with_equation() {
        // x3 = 0, x1 ≥ 0, x2 ≥ 0, x1 ≤ x2 ... intersection of two planar cones
        let ineqs = rows(&[&[1, 0, 0], &[0, 1, 0], &[-1, 1, 0]]);
        let rays = extreme_rays(3, &ineqs, &rows(&[&[0, 0, 1]])).unwrap();
        assert_eq!(rays, vecs(&[&[0, 1, 0], &[1, 1, 0]]));
    }

    #[test]
    fn zero_and_lines() {
        let r = extreme_rays(2, &rows(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]), &[]).unwrap();
        assert!(r.is_empty());
        assert!(extreme_rays(2, &rows(&[&[1, 0]]), &[]).is_none());
    }
}
