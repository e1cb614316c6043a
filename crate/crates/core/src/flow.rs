//! The curves `c(r) = exp(-rJξ)·q` in chart coordinates.
//!
//! In the chart of a fixed point with weights `α_1, …, α_n` the complexified
//! torus acts diagonally, so a direction `ξ` (with optional angular part `v`)
//! moves coordinate `j` along `z_j(r) = exp(2πr(⟨ξ,α_j⟩ + i⟨v,α_j⟩))·z_j(0)`.
//! Pairings are exact rationals; only the exponential is floating point.
//!
//! [`track`] integrates the same ODE numerically and follows the trajectory
//! across charts. It switches chart when a coordinate leaves the closed unit
//! polydisc, preferring a neighbouring chart that contains the predicted
//! limit stratum.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::fan::{is_subset, ConeIndices, Fan};
use crate::toric::{chart_label, Atlas, ToricError, WeightBasis};

/// Time standing in for `r → -∞`.
pub const LIMIT_TIME: f64 = -10.0;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_STEP: f64 = 1e-3;
/// Slack on the unit polydisc before a chart switch is triggered.
pub const SWITCH_EPSILON: f64 = 1e-9;
/// Upper bound on `|rate|·h` for a single RK4 step.
pub const MAX_RATE_STEP: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("fan is not complete")]
    NotComplete,
    #[error("start point has a zero coordinate; it must lie in the open orbit")]
    ZeroCoordinateStart,
    #[error("state became non-finite at r = {0}")]
    NonFiniteState(f64),
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("chart {0:?} is not a fixed point of the fan")]
    UnknownChart(ConeIndices),
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Toric(#[from] ToricError),
}

/// A Lie algebra direction `ξ` plus an optional angular part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction {
    pub xi: Vec<BigRational>,
    pub angular: Option<Vec<BigRational>>,
}

impl Direction {
    pub fn new(xi: Vec<BigRational>) -> Self {
        Self { xi, angular: None }
    }

    pub fn with_angular(xi: Vec<BigRational>, angular: Vec<BigRational>) -> Self {
        Self { xi, angular: Some(angular) }
    }

    pub fn from_i64(xi: &[i64]) -> Self {
        Self::new(crate::cone::rational_vector(xi))
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    fn negated(&self) -> Direction {
        Direction {
            xi: self.xi.iter().map(|x| -x).collect(),
            angular: self.angular.as_ref().map(|v| v.iter().map(|x| -x).collect()),
        }
    }

    /// Exact pairings `(⟨ξ,α_j⟩, ⟨v,α_j⟩)` with each weight.
    pub fn pairings(&self, weights: &WeightBasis) -> Vec<(BigRational, BigRational)> {
        weights
            .weights()
            .iter()
            .map(|a| {
                let real = a.pair_rational(&self.xi);
                let imag = self
                    .angular
                    .as_ref()
                    .map_or_else(BigRational::zero, |v| a.pair_rational(v));
                (real, imag)
            })
            .collect()
    }

    /// Growth rates `2π(⟨ξ,α_j⟩ + i⟨v,α_j⟩)` of the chart coordinates.
    pub fn rates(&self, weights: &WeightBasis) -> Vec<Complex64> {
        self.pairings(weights)
            .into_iter()
            .map(|(re, im)| Complex64::new(2.0 * PI * to_f64(&re), 2.0 * PI * to_f64(&im)))
            .collect()
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational converts to f64")
}

/// Complex coordinates in the chart of a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub chart: ConeIndices,
    pub coords: Vec<Complex64>,
}

impl ChartPoint {
    pub fn new(chart: ConeIndices, coords: Vec<Complex64>) -> Self {
        Self { chart, coords }
    }

    /// The base point: every coordinate equal to 1.
    pub fn ones(chart: ConeIndices) -> Self {
        let n = chart.len();
        Self { chart, coords: vec![Complex64::new(1.0, 0.0); n] }
    }

    pub fn from_real(chart: ConeIndices, coords: &[f64]) -> Self {
        Self { chart, coords: coords.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn max_modulus(&self) -> f64 {
        max_modulus(&self.coords)
    }
}

fn max_modulus(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// The cone whose relative interior contains `ξ`: the stratum the curve
/// approaches as `r → -∞`. `None` when `ξ` is outside the support.
pub fn limit_stratum(f: &Fan, xi: &[BigRational]) -> Option<ConeIndices> {
    f.support_contains(xi)
}

/// Closed form of the curve at time `r`.
pub fn curve_point(weights: &WeightBasis, q: &ChartPoint, d: &Direction, r: f64) -> ChartPoint {
    let coords = d
        .rates(weights)
        .iter()
        .zip(&q.coords)
        .map(|(rate, z)| (rate * r).exp() * z)
        .collect();
    ChartPoint { chart: q.chart.clone(), coords }
}

fn step_count(r_final: f64, step: f64, rates: &[Complex64]) -> usize {
    let peak = rates.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let by_step = (r_final.abs() / step).ceil();
    let by_rate = (r_final.abs() * peak / MAX_RATE_STEP).ceil();
    by_step.max(by_rate).max(1.0) as usize
}

fn rk4_step(z: &[Complex64], rates: &[Complex64], h: f64) -> Vec<Complex64> {
    let field = |y: &[Complex64]| -> Vec<Complex64> { y.iter().zip(rates).map(|(y, l)| l * y).collect() };
    let axpy = |y: &[Complex64], k: &[Complex64], a: f64| -> Vec<Complex64> {
        y.iter().zip(k).map(|(y, k)| y + k * a).collect()
    };
    let k1 = field(z);
    let k2 = field(&axpy(z, &k1, h / 2.0));
    let k3 = field(&axpy(z, &k2, h / 2.0));
    let k4 = field(&axpy(z, &k3, h));
    (0..z.len())
        .map(|j| z[j] + (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0))
        .collect()
}

/// Classical RK4 for the chart-level ODE `ż_j = rate_j·z_j` from `r = 0` to `r_final`.
///
/// `step` is an upper bound; the step is further reduced so that
/// `|rate·h| ≤ MAX_RATE_STEP` for every coordinate.
pub fn integrate(
    weights: &WeightBasis,
    q: &ChartPoint,
    d: &Direction,
    r_final: f64,
    step: f64,
) -> Result<ChartPoint, FlowError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(FlowError::BadStep(step));
    }
    if r_final == 0.0 {
        return Ok(q.clone());
    }
    let rates = d.rates(weights);
    let n = step_count(r_final, step, &rates);
    let h = r_final / n as f64;
    let mut z = q.coords.clone();
    for k in 1..=n {
        z = rk4_step(&z, &rates, h);
        if z.iter().any(|c| !c.is_finite()) {
            return Err(FlowError::NonFiniteState(h * k as f64));
        }
    }
    Ok(ChartPoint { chart: q.chart.clone(), coords: z })
}

/// A piece of a trajectory that stays in one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub chart: ConeIndices,
    /// `(r, coordinates)` samples in this chart.
    pub samples: Vec<(f64, Vec<Complex64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub segments: Vec<Segment>,
    /// Stratum the trajectory is expected to approach.
    pub target: Option<ConeIndices>,
}

impl Trajectory {
    pub fn endpoint(&self) -> ChartPoint {
        let seg = self.segments.last().expect("trajectories are nonempty");
        let (_, z) = seg.samples.last().expect("segments are nonempty");
        ChartPoint { chart: seg.chart.clone(), coords: z.clone() }
    }

    pub fn charts(&self) -> Vec<&ConeIndices> {
        self.segments.iter().map(|s| &s.chart).collect()
    }

    /// Line records `r,chart,re(z_1),im(z_1),…`, keeping every `every`-th sample
    /// plus the first and last of each segment.
    pub fn to_records(&self, every: usize) -> String {
        let every = every.max(1);
        let mut out = String::new();
        for seg in &self.segments {
            let label = chart_label(&seg.chart);
            let last = seg.samples.len() - 1;
            for (i, (r, z)) in seg.samples.iter().enumerate() {
                if i % every != 0 && i != last {
                    continue;
                }
                write!(out, "{r},{label}").unwrap();
                for c in z {
                    write!(out, ",{:e},{:e}", c.re, c.im).unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Follows the trajectory from `start` until `r_final` with the default step.
pub fn track(f: &Fan, start: &ChartPoint, d: &Direction, r_final: f64) -> Result<Trajectory, FlowError> {
    Tracker::new(f)?.track(start, d, r_final)
}

/// Chart-switching integrator over the atlas of a complete fan.
#[derive(Debug, Clone)]
pub struct Tracker<'a> {
    fan: &'a Fan,
    atlas: Atlas,
    pub step: f64,
}

impl<'a> Tracker<'a> {
    pub fn new(fan: &'a Fan) -> Result<Self, FlowError> {
        if !fan.is_complete_facet().complete {
            return Err(FlowError::NotComplete);
        }
        Ok(Self { fan, atlas: Atlas::new(fan)?, step: DEFAULT_STEP })
    }

    pub fn atlas(&self) -> &Atlas {
        &self.atlas
    }

    pub fn track(&self, start: &ChartPoint, d: &Direction, r_final: f64) -> Result<Trajectory, FlowError> {
        let n = self.fan.dim();
        if start.coords.len() != n || d.dim() != n {
            return Err(FlowError::Dimension { expected: n, got: start.coords.len().min(d.dim()) });
        }
        if start.coords.iter().any(|c| c.is_zero() || !c.is_finite()) {
            return Err(FlowError::ZeroCoordinateStart);
        }
        if self.atlas.weights(&start.chart).is_none() {
            return Err(FlowError::UnknownChart(start.chart.clone()));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(FlowError::BadStep(self.step));
        }
        // r → -∞ approaches the stratum of ξ, r → +∞ the stratum of -ξ
        let target = if r_final <= 0.0 {
            limit_stratum(self.fan, &d.xi)
        } else {
            limit_stratum(self.fan, &d.negated().xi)
        };

        let rates: Vec<(ConeIndices, Vec<Complex64>)> = self
            .atlas
            .charts()
            .map(|c| (c.clone(), d.rates(self.atlas.weights(c).expect("chart exists"))))
            .collect();
        let all_rates: Vec<Complex64> = rates.iter().flat_map(|(_, r)| r.iter().copied()).collect();
        let steps = if r_final == 0.0 { 0 } else { step_count(r_final, self.step, &all_rates) };
        let h = if steps == 0 { 0.0 } else { r_final / steps as f64 };
        let rates_of = |c: &ConeIndices| -> &[Complex64] {
            &rates.iter().find(|(k, _)| k == c).expect("chart exists").1
        };

        let mut chart = start.chart.clone();
        let mut z = start.coords.clone();
        let mut segments = vec![Segment { chart: chart.clone(), samples: vec![(0.0, z.clone())] }];
        for k in 1..=steps {
            let r = if k == steps { r_final } else { h * k as f64 };
            z = rk4_step(&z, rates_of(&chart), h);
            if z.iter().any(|c| !c.is_finite()) {
                return Err(FlowError::NonFiniteState(r));
            }
            let settled = target.as_ref().is_some_and(|t| is_subset(t, &chart));
            if !settled && max_modulus(&z) > 1.0 + SWITCH_EPSILON {
                if let Some((next, w)) = self.next_chart(&chart, &z, target.as_deref()) {
                    chart = next;
                    z = w;
                    segments.push(Segment { chart: chart.clone(), samples: Vec::new() });
                }
            }
            segments.last_mut().expect("nonempty").samples.push((r, z.clone()));
        }
        Ok(Trajectory { segments, target })
    }

    fn next_chart(
        &self,
        current: &ConeIndices,
        z: &[Complex64],
        target: Option<&[usize]>,
    ) -> Option<(ConeIndices, Vec<Complex64>)> {
        let n = self.fan.dim();
        let mapped: Vec<(ConeIndices, Vec<Complex64>, f64)> = self
            .atlas
            .charts()
            .filter(|c| *c != current)
            .filter_map(|c| {
                let w = self.atlas.transition(current, c).ok()?.apply(z);
                w.iter().all(|x| x.is_finite()).then(|| {
                    let m = max_modulus(&w);
                    (c.clone(), w, m)
                })
            })
            .collect();
        let best = |it: Vec<&(ConeIndices, Vec<Complex64>, f64)>| {
            it.into_iter()
                .min_by(|a, b| a.2.total_cmp(&b.2))
                .map(|(c, w, _)| (c.clone(), w.clone()))
        };
        let adjacent_to_target: Vec<_> = mapped
            .iter()
            .filter(|(c, _, _)| {
                target.is_some_and(|t| is_subset(t, c))
                    && c.iter().filter(|i| current.binary_search(i).is_ok()).count() + 1 == n
            })
            .collect();
        if !adjacent_to_target.is_empty() {
            return best(adjacent_to_target);
        }
        best(mapped.iter().filter(|(_, _, m)| *m <= 1.0 + SWITCH_EPSILON).collect())
    }
}

/// Numerical confirmation that the curve through `start` converges into the
/// stratum predicted by the cone containing `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub predicted_stratum: Option<ConeIndices>,
    /// Rays of the final chart whose coordinate has modulus at most `tol`.
    pub observed_stratum: ConeIndices,
    pub numeric_limit: ChartPoint,
    /// Largest modulus among the coordinates that should vanish.
    pub residual: f64,
    pub converged: bool,
    pub chart_switches: usize,
}

pub fn verify_limit(f: &Fan, xi: &[BigRational], start: &ChartPoint, tol: f64) -> Result<LimitReport, FlowError> {
    let d = Direction::new(xi.to_vec());
    let traj = track(f, start, &d, LIMIT_TIME)?;
    Ok(limit_report(&traj, tol))
}

pub(crate) fn limit_report(traj: &Trajectory, tol: f64) -> LimitReport {
    let end = traj.endpoint();
    let observed: ConeIndices = end
        .chart
        .iter()
        .zip(&end.coords)
        .filter(|(_, z)| z.norm() <= tol)
        .map(|(&i, _)| i)
        .collect();
    let predicted = traj.target.clone();
    let residual = match &predicted {
        Some(p) => end
            .chart
            .iter()
            .zip(&end.coords)
            .filter(|(i, _)| p.contains(i))
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max),
        None => f64::INFINITY,
    };
    let converged = predicted
        .as_ref()
        .is_some_and(|p| is_subset(p, &end.chart) && *p == observed && residual <= tol);
    LimitReport {
        predicted_stratum: predicted,
        observed_stratum: observed,
        numeric_limit: end,
        residual,
        converged,
        chart_switches: traj.segments.len() - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::cone::rational_vector;
    use crate::lattice::LatticeMatrix;
    use crate::toric::{isotropy_weights, transition};

    fn std_weights() -> WeightBasis {
        WeightBasis::new("std", LatticeMatrix::identity(2)).unwrap()
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn limit_stratum_examples() {
        let cp2 = builtin::cpn(2).unwrap();
        assert_eq!(limit_stratum(&cp2, &rational_vector(&[2, 1])), Some(vec![0, 1]));
        assert_eq!(limit_stratum(&cp2, &rational_vector(&[1, -1])), Some(vec![0, 2]));
        assert_eq!(limit_stratum(&cp2, &rational_vector(&[0, 0])), Some(vec![]));
    }

    #[test]
    fn curve_point_examples() {
        let q = ChartPoint::ones(vec![0, 1]);
        let p = curve_point(&std_weights(), &q, &Direction::from_i64(&[1, 2]), -1.0);
        assert!(close(p.coords[0], Complex64::new((-2.0 * PI).exp(), 0.0), 1e-15));
        assert!(close(p.coords[1], Complex64::new((-4.0 * PI).exp(), 0.0), 1e-15));

        assert_eq!(curve_point(&std_weights(), &q, &Direction::from_i64(&[3, -1]), 0.0), q);

        let rot = Direction::with_angular(rational_vector(&[0, 0]), rational_vector(&[1, 0]));
        let p = curve_point(&std_weights(), &q, &rot, 0.25);
        assert!((p.coords[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((p.coords[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn integrate_examples() {
        let q = ChartPoint::ones(vec![0, 1]);
        let d = Direction::from_i64(&[1, 2]);
        let exact = curve_point(&std_weights(), &q, &d, -1.0);
        let num = integrate(&std_weights(), &q, &d, -1.0, 1e-3).unwrap();
        for (a, b) in num.coords.iter().zip(&exact.coords) {
            assert!(close(*a, *b, 1e-8));
        }
        assert_eq!(integrate(&std_weights(), &q, &d, 0.0, 1e-3).unwrap(), q);

        let d = Direction::from_i64(&[1, -1]);
        let exact = curve_point(&std_weights(), &q, &d, -3.0);
        let num = integrate(&std_weights(), &q, &d, -3.0, 1e-3).unwrap();
        assert!(exact.coords[1].norm() > 1e8);
        for (a, b) in num.coords.iter().zip(&exact.coords) {
            assert!(close(*a, *b, 1e-6));
        }
        assert!(matches!(integrate(&std_weights(), &q, &d, -1.0, 0.0), Err(FlowError::BadStep(_))));
    }

    #[test]
    fn integrate_overflow_is_reported() {
        let q = ChartPoint::ones(vec![0, 1]);
        let d = Direction::from_i64(&[0, -200]);
        assert!(matches!(
            integrate(&std_weights(), &q, &d, -1.0, 1e-3),
            Err(FlowError::NonFiniteState(_))
        ));
    }

    #[test]
    fn track_stays_in_chart() {
        let cp2 = builtin::cpn(2).unwrap();
        let t = track(&cp2, &ChartPoint::ones(vec![0, 1]), &Direction::from_i64(&[2, 1]), -10.0).unwrap();
        assert_eq!(t.segments.len(), 1);
        let end = t.endpoint();
        assert_eq!(end.chart, vec![0, 1]);
        assert!(end.max_modulus() < 1e-6);
    }

    #[test]
    fn track_switches_chart() {
        let cp2 = builtin::cpn(2).unwrap();
        let t = track(&cp2, &ChartPoint::ones(vec![0, 1]), &Direction::from_i64(&[1, -1]), -10.0).unwrap();
        let end = t.endpoint();
        assert!(is_subset(&[0, 2], &end.chart));
        assert!(t.segments.len() >= 2);
        assert!(end.max_modulus() < 1e-6);
    }

    #[test]
    fn cp1_two_fixed_points() {
        let cp1 = builtin::cp1();
        let start = ChartPoint::from_real(vec![0], &[2.0]);
        let a = track(&cp1, &start, &Direction::from_i64(&[1]), -10.0).unwrap().endpoint();
        assert_eq!(a.chart, vec![0]);
        assert!(a.coords[0].norm() < 1e-6);
        let b = track(&cp1, &start, &Direction::from_i64(&[-1]), -10.0).unwrap().endpoint();
        assert_eq!(b.chart, vec![1]);
        assert!(b.coords[0].norm() < 1e-6);
    }

    #[test]
    fn track_rejects_bad_input() {
        let cp2 = builtin::cpn(2).unwrap();
        let d = Direction::from_i64(&[1, 1]);
        let zero = ChartPoint::from_real(vec![0, 1], &[0.0, 1.0]);
        assert_eq!(track(&cp2, &zero, &d, -1.0).unwrap_err(), FlowError::ZeroCoordinateStart);
        let quad = crate::fan::Fan::new(
            2,
            vec![crate::LatticeVector::from_i64(&[1, 0]), crate::LatticeVector::from_i64(&[0, 1])],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert_eq!(track(&quad, &ChartPoint::ones(vec![0, 1]), &d, -1.0).unwrap_err(), FlowError::NotComplete);
        assert!(matches!(
            track(&cp2, &ChartPoint::ones(vec![0]), &d, -1.0),
            Err(FlowError::Dimension { .. })
        ));
    }

    #[test]
    fn verify_limit_examples() {
        let cp2 = builtin::cpn(2).unwrap();
        let start = ChartPoint::ones(vec![0, 1]);
        let r = verify_limit(&cp2, &rational_vector(&[2, 1]), &start, 1e-6).unwrap();
        assert!(r.converged);
        assert_eq!(r.predicted_stratum, Some(vec![0, 1]));

        let r = verify_limit(&cp2, &rational_vector(&[1, 0]), &start, 1e-6).unwrap();
        assert!(r.converged);
        assert_eq!(r.observed_stratum, vec![0]);
        assert!(r.numeric_limit.coords[0].norm() < 1e-6);
        assert!((r.numeric_limit.coords[1] - Complex64::new(1.0, 0.0)).norm() < 1e-9);

        let r = verify_limit(&cp2, &rational_vector(&[0, 0]), &start, 1e-6).unwrap();
        assert!(r.converged);
        assert_eq!(r.observed_stratum, Vec::<usize>::new());
        assert_eq!(r.numeric_limit, start);
    }

    #[test]
    fn forward_time_uses_negated_direction() {
        let cp1 = builtin::cp1();
        let start = ChartPoint::from_real(vec![0], &[0.5]);
        let t = track(&cp1, &start, &Direction::from_i64(&[1]), 10.0).unwrap();
        assert_eq!(t.target, Some(vec![1]));
        assert_eq!(t.endpoint().chart, vec![1]);
    }

    #[test]
    fn angular_part_only_rotates() {
        let cp2 = builtin::cpn(2).unwrap();
        let w = isotropy_weights(&cp2, &[1, 2]).unwrap();
        let q = ChartPoint::from_real(vec![1, 2], &[0.5, 0.25]);
        let d = Direction::with_angular(rational_vector(&[0, 0]), rational_vector(&[1, 3]));
        let p = curve_point(&w, &q, &d, 0.37);
        for (a, b) in p.coords.iter().zip(&q.coords) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn records_format() {
        let cp1 = builtin::cp1();
        let t = track(&cp1, &ChartPoint::from_real(vec![0], &[2.0]), &Direction::from_i64(&[-1]), -1.0).unwrap();
        let rec = t.to_records(100);
        let first = rec.lines().next().unwrap();
        assert_eq!(first.split(',').count(), 4);
        assert!(first.starts_with("0,0,"));
        assert!(rec.lines().any(|l| l.split(',').nth(1) == Some("1")));
    }

    #[test]
    fn transition_matches_closed_form() {
        // the chart-σ curve mapped to chart τ is the chart-τ curve
        let f = builtin::hirzebruch(2);
        let d = Direction::from_i64(&[1, -2]);
        let (s, t) = (vec![0, 1], vec![1, 2]);
        let ws = isotropy_weights(&f, &s).unwrap();
        let wt = isotropy_weights(&f, &t).unwrap();
        let m = transition(&f, &s, &t).unwrap();
        let q = ChartPoint::from_real(s.clone(), &[0.7, 1.3]);
        let qt = ChartPoint::new(t.clone(), m.apply(&q.coords));
        let a = m.apply(&curve_point(&ws, &q, &d, -0.4).coords);
        let b = curve_point(&wt, &qt, &d, -0.4).coords;
        for (x, y) in a.iter().zip(&b) {
            assert!(close(*x, *y, 1e-12));
        }
    }
}
