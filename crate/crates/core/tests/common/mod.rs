//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the crate's lattice or polyhedral code; the
//! oracles work from raw integer rays with plain rational elimination.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricfan::builtin;
use toricfan::fan::{Axiom, Fan};
use toricfan::LatticeVector;

pub type Q = BigRational;

pub fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

pub fn rays_i64(f: &Fan) -> Vec<Vec<i64>> {
    f.rays().iter().map(|r| r.to_i64().expect("small rays")).collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = &factor * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(m: &[Vec<Q>]) -> usize {
    rref(&mut m.to_vec()).len()
}

pub fn rank_i64(m: &[Vec<i64>]) -> usize {
    rank_q(&m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
}

/// Basis of `{y : A y = 0}` for `A` with `cols` columns.
pub fn null_space(a: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Integer multiple of a rational vector with coprime entries.
pub fn primitive_q(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn det_i64(m: &[Vec<i64>]) -> BigInt {
    // Laplace expansion; only used on tiny matrices
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let term = BigInt::from(m[0][j]) * det_i64(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Rows `gens` form part of a lattice basis iff the gcd of all maximal minors is 1.
pub fn unimodular_by_minors(gens: &[Vec<i64>], dim: usize) -> bool {
    let k = gens.len();
    if k > dim {
        return false;
    }
    let g = subsets_of_size(dim, k).iter().fold(BigInt::zero(), |acc, cols| {
        let sub: Vec<Vec<i64>> = gens.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        acc.gcd(&det_i64(&sub))
    });
    g.is_one()
}

/// Primitive extreme rays of `pos(A) ∩ pos(B)`, found as minimal-support
/// nonnegative solutions of `Aᵀλ = Bᵀμ`.
pub fn brute_intersection(a: &[Vec<i64>], b: &[Vec<i64>], dim: usize) -> BTreeSet<Vec<BigInt>> {
    let cols: Vec<Vec<Q>> = a
        .iter()
        .map(|g| g.iter().map(|&x| q(x)).collect())
        .chain(b.iter().map(|g| g.iter().map(|&x| -q(x)).collect()))
        .collect();
    let total = cols.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << total) {
        let support: Vec<usize> = (0..total).filter(|i| mask >> i & 1 == 1).collect();
        let sys: Vec<Vec<Q>> = (0..dim).map(|r| support.iter().map(|&c| cols[c][r].clone()).collect()).collect();
        let ns = null_space(&sys, support.len());
        if ns.len() != 1 {
            continue;
        }
        let mut y = ns.into_iter().next().unwrap();
        if y.iter().any(Q::is_zero) {
            continue;
        }
        if y[0].is_negative() {
            y.iter_mut().for_each(|x| *x = -x.clone());
        }
        if y.iter().any(Q::is_negative) {
            continue;
        }
        // point x = Σ λ_i a_i over the A-part of the support
        let mut x = vec![Q::zero(); dim];
        for (pos, &c) in support.iter().enumerate() {
            if c < a.len() {
                for r in 0..dim {
                    x[r] += &y[pos] * q(a[c][r]);
                }
            }
        }
        if x.iter().all(Q::is_zero) {
            continue;
        }
        out.insert(primitive_q(&x));
    }
    out
}

/// Violated axioms found by checking every pair of cones of the face closure.
pub fn brute_validate(dim: usize, rays: &[Vec<i64>], maximal: &[Vec<usize>]) -> BTreeSet<Axiom> {
    let mut bad = BTreeSet::new();
    let used: BTreeSet<usize> = maximal.iter().flatten().copied().collect();
    if used.len() != rays.len() {
        bad.insert(Axiom::FaceClosure);
    }
    for c in maximal {
        let gens: Vec<Vec<i64>> = c.iter().map(|&i| rays[i].clone()).collect();
        if !unimodular_by_minors(&gens, dim) {
            bad.insert(Axiom::Unimodular);
        }
    }
    let mut closure: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in maximal {
        for mask in 0u32..(1 << c.len()) {
            closure.insert((0..c.len()).filter(|i| mask >> i & 1 == 1).map(|i| c[i]).collect());
        }
    }
    let cones: Vec<&Vec<usize>> = closure.iter().collect();
    for (x, s) in cones.iter().enumerate() {
        for t in &cones[x + 1..] {
            let a: Vec<Vec<i64>> = s.iter().map(|&i| rays[i].clone()).collect();
            let b: Vec<Vec<i64>> = t.iter().map(|&i| rays[i].clone()).collect();
            let got = brute_intersection(&a, &b, dim);
            let want: BTreeSet<Vec<BigInt>> = s
                .iter()
                .filter(|i| t.contains(i))
                .map(|&i| rays[i].iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            if got != want {
                bad.insert(Axiom::Intersection);
            }
        }
    }
    bad
}

/// Coefficients of `v` on the generators of a cone, if `v` lies in their span.
pub fn span_coefficients(gens: &[Vec<i64>], v: &[Q]) -> Option<Vec<Q>> {
    let dim = v.len();
    let k = gens.len();
    let mut aug: Vec<Vec<Q>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Q> = gens.iter().map(|g| q(g[r])).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| aug[i][k].clone()).collect())
}

pub fn in_relative_interior(gens: &[Vec<i64>], v: &[Q]) -> bool {
    span_coefficients(gens, v).is_some_and(|c| c.iter().all(Q::is_positive))
}

pub fn in_cone(gens: &[Vec<i64>], v: &[Q]) -> bool {
    span_coefficients(gens, v).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
}

/// Integer matrix product.
pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect())
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// A named instance for the validator comparison.
pub struct Instance {
    pub name: String,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub maximal: Vec<Vec<usize>>,
}

impl Instance {
    pub fn of(name: impl Into<String>, f: &Fan) -> Self {
        Self { name: name.into(), dim: f.dim(), rays: rays_i64(f), maximal: f.maximal_cones().to_vec() }
    }

    pub fn build(&self) -> Option<Fan> {
        let rays = self.rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        Fan::new(self.dim, rays, self.maximal.clone()).ok()
    }
}

pub fn random_primitive(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 1 {
            return v;
        }
    }
}

/// Builtins, star-subdivision iterates and mutated fans in dimension at most 3.
pub fn validator_corpus(seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Instance> = builtin::standard_library().iter().map(|(n, f)| Instance::of(n, f)).collect();

    let small: Vec<(String, Fan)> = builtin::standard_library().into_iter().filter(|(_, f)| f.dim() <= 3).collect();
    let mut iterates = Vec::new();
    for (name, f) in small.iter().filter(|(_, f)| f.dim() >= 2) {
        let mut g = f.clone();
        for depth in 1..=3 {
            let cones = g.maximal_cones();
            let pick = cones[rng.gen_range(0..cones.len())].clone();
            g = g.star_subdivide(&pick).expect("maximal cone");
            let label = format!("{name}/sub{depth}");
            out.push(Instance::of(&label, &g));
            iterates.push((label, g.clone()));
        }
    }

    let bases: Vec<(String, Fan)> = small.into_iter().chain(iterates).collect();
    let mut mutated = 0;
    while mutated < 40 {
        let (name, f) = &bases[rng.gen_range(0..bases.len())];
        let mut inst = Instance::of(format!("{name}/mut{mutated}"), f);
        match rng.gen_range(0..5) {
            0 => {
                let i = rng.gen_range(0..inst.rays.len());
                inst.rays[i] = random_primitive(&mut rng, inst.dim, 3);
            }
            1 => {
                let k = rng.gen_range(1..=inst.dim);
                let mut c: Vec<usize> = (0..inst.rays.len()).collect();
                while c.len() > k {
                    c.remove(rng.gen_range(0..c.len()));
                }
                inst.maximal.push(c);
            }
            2 => {
                inst.rays.push(random_primitive(&mut rng, inst.dim, 3));
            }
            3 => {
                let i = rng.gen_range(0..inst.rays.len());
                let j = rng.gen_range(0..inst.dim);
                inst.rays[i][j] += if rng.gen_bool(0.5) { 1 } else { -1 };
                let g = inst.rays[i].iter().fold(0i64, |acc, &x| acc.gcd(&x));
                if g == 0 {
                    continue;
                }
                inst.rays[i].iter_mut().for_each(|x| *x /= g);
            }
            _ => {
                let i = rng.gen_range(0..inst.maximal.len());
                inst.maximal.remove(i);
            }
        }
        if inst.build().is_some() {
            out.push(inst);
            mutated += 1;
        }
    }
    out
}

/// Complete fans with some maximal cones removed, or made lower dimensional.
pub fn incomplete_corpus() -> Vec<(String, Fan)> {
    let drop = |name: &str, f: &Fan, k: usize| {
        let mut cones = f.maximal_cones().to_vec();
        cones.remove(k);
        let rays: Vec<LatticeVector> = f.rays().to_vec();
        (format!("{name} minus cone {k}"), Fan::new(f.dim(), rays, cones).expect("subfan"))
    };
    let cp2 = builtin::cpn(2).unwrap();
    let cp3 = builtin::cpn(3).unwrap();
    let h1 = builtin::hirzebruch(1);
    let sub = cp2.star_subdivide(&[0, 1]).unwrap();
    let quadrant = Fan::new(2, vec![LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[0, 1])], vec![vec![0, 1]])
        .unwrap();
    let rays_only = Fan::new(2, cp2.rays().to_vec(), vec![vec![0], vec![1], vec![2]]).unwrap();
    vec![
        drop("cp1", &builtin::cp1(), 0),
        drop("cp2", &cp2, 1),
        drop("cp3", &cp3, 2),
        drop("hirzebruch(1)", &h1, 0),
        drop("cp2/sub", &sub, 3),
        ("quadrant".into(), quadrant),
        ("cp2 rays only".into(), rays_only),
    ]
}

/// Star-subdivision iterates of builtins (complete, valid).
pub fn subdivision_corpus() -> Vec<(String, Fan)> {
    let cp2 = builtin::cpn(2).unwrap();
    let cp3 = builtin::cpn(3).unwrap();
    let h2 = builtin::hirzebruch(2);
    let a = cp2.star_subdivide(&[0, 1]).unwrap();
    let b = a.star_subdivide(&a.maximal_cones()[0].clone()).unwrap();
    let c = cp3.star_subdivide(&[0, 1, 2]).unwrap();
    let d = c.star_subdivide(&c.maximal_cones()[1].clone()).unwrap();
    let e = h2.star_subdivide(&[1, 2]).unwrap();
    vec![
        ("cp2/{0,1}".into(), a),
        ("cp2/{0,1}/first".into(), b),
        ("cp3/{0,1,2}".into(), c),
        ("cp3/{0,1,2}/second".into(), d),
        ("hirzebruch(2)/{1,2}".into(), e),
    ]
}
