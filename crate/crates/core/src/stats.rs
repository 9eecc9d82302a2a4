//! Position distributions, spread, and the σ(t) regression.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::WalkConfig;
use crate::error::{Result, WalkError};
use crate::evolve;
use crate::lattice::{LatticePoint, WalkState};

/// Probability mass over lattice points, ordered lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    dim: usize,
    masses: BTreeMap<LatticePoint, f64>,
}

impl Distribution {
    /// Collects `(point, mass)` pairs; repeated points accumulate.
    pub fn from_masses<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, f64)>,
    {
        let mut masses = BTreeMap::new();
        for (p, m) in entries {
            if p.dim() != dim {
                return Err(WalkError::Config(format!(
                    "point {p} does not have dimension {dim}"
                )));
            }
            if !(m >= 0.0) {
                return Err(WalkError::Config(format!("negative or NaN mass {m} at {p}")));
            }
            *masses.entry(p).or_insert(0.0) += m;
        }
        Ok(Distribution { dim, masses })
    }

    pub fn point_mass(point: LatticePoint) -> Self {
        let dim = point.dim();
        Distribution {
            dim,
            masses: BTreeMap::from([(point, 1.0)]),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mass(&self, point: &[i64]) -> f64 {
        self.masses
            .get(&LatticePoint(point.to_vec()))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, f64)> {
        self.masses.iter().map(|(p, &m)| (p, m))
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    /// Smallest and largest coordinate along each axis over positive-mass points.
    pub fn support_bounds(&self) -> Vec<(i64, i64)> {
        let mut bounds = vec![(i64::MAX, i64::MIN); self.dim];
        for (p, m) in self.iter() {
            if m > 0.0 {
                for (b, &x) in bounds.iter_mut().zip(p.coords()) {
                    b.0 = b.0.min(x);
                    b.1 = b.1.max(x);
                }
            }
        }
        bounds
    }

    /// Mass-weighted `Σ_i` of (per-axis variance).
    fn covariance_trace(&self) -> f64 {
        let mut first = vec![0.0; self.dim];
        let mut second = 0.0;
        for (p, m) in self.iter() {
            for (f, &x) in first.iter_mut().zip(p.coords()) {
                *f += m * x as f64;
            }
            second += m * p.coords().iter().map(|&x| (x * x) as f64).sum::<f64>();
        }
        second - first.iter().map(|f| f * f).sum::<f64>()
    }
}

/// `P(x) = Σ_mu |ψ(x, mu)|²` over the reachable sites with nonzero mass.
pub fn position_distribution(state: &WalkState) -> Distribution {
    let masses = state
        .sites()
        .map(|(p, amps)| (p, amps.iter().map(|a| a.norm_sqr()).sum::<f64>()))
        .filter(|(_, m)| *m > 0.0)
        .collect();
    Distribution {
        dim: state.dim(),
        masses,
    }
}

/// Standard deviation `sqrt(E‖x‖² - ‖E x‖²)`, the root of the covariance trace.
pub fn sigma(dist: &Distribution) -> f64 {
    dist.covariance_trace().max(0.0).sqrt()
}

/// Same as `sigma(&position_distribution(state))` without materializing the map.
pub fn sigma_of_state(state: &WalkState) -> f64 {
    let dim = state.dim();
    let t = state.steps() as i64;
    let side = state.side();
    let mut first = vec![0.0; dim];
    let mut second = 0.0;
    for (site, m) in state.active_sites().zip(state.active_masses()) {
        if m == 0.0 {
            continue;
        }
        let mut rest = site;
        for axis in (0..dim).rev() {
            let x = (2 * (rest % side) as i64 - t) as f64;
            rest /= side;
            first[axis] += m * x;
            second += m * x * x;
        }
    }
    let var = second - first.iter().map(|f| f * f).sum::<f64>();
    var.max(0.0).sqrt()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SigmaSeries {
    /// `(t, σ(t))`, strictly increasing in `t`.
    pub samples: Vec<(usize, f64)>,
}

impl SigmaSeries {
    pub fn push(&mut self, t: usize, sigma: f64) {
        debug_assert!(self.samples.last().is_none_or(|&(last, _)| last < t));
        self.samples.push((t, sigma));
    }
}

/// Runs the walk and records σ after every step.
pub fn sigma_series(config: &WalkConfig) -> Result<SigmaSeries> {
    let mut series = SigmaSeries::default();
    evolve::run(config, |t, state| series.push(t, sigma_of_state(state)))?;
    Ok(series)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the fit residuals.
    pub stderr_slope: f64,
    pub t_min: usize,
    pub t_max: usize,
    pub points: usize,
}

/// Ordinary least squares of σ on `t` over samples with `t >= t_min`.
pub fn regress_sigma(series: &SigmaSeries, t_min: usize) -> Result<RegressionResult> {
    let pts: Vec<(f64, f64)> = series
        .samples
        .iter()
        .filter(|(t, _)| *t >= t_min)
        .map(|&(t, s)| (t as f64, s))
        .collect();
    let n = pts.len();
    if n < 3 {
        return Err(WalkError::TooFewPoints {
            needed: 3,
            got: n,
            t_min,
        });
    }
    let nf = n as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_s = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_s)).sum();
    let slope = sxy / sxx;
    let intercept = mean_s - slope * mean_t;
    let ssr: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let stderr_slope = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(RegressionResult {
        slope,
        intercept,
        stderr_slope,
        t_min,
        t_max: series.samples.last().map_or(0, |s| s.0),
        points: n,
    })
}

/// Sums out every coordinate except `axis` (0-based).
pub fn marginal(dist: &Distribution, axis: usize) -> Result<Distribution> {
    if axis >= dist.dim {
        return Err(WalkError::Axis {
            axis,
            dim: dist.dim,
        });
    }
    Distribution::from_masses(
        1,
        dist.iter()
            .map(|(p, m)| (LatticePoint(vec![p.coords()[axis]]), m)),
    )
}

/// `½ Σ_x |a(x) - b(x)|` over the union of supports.
pub fn total_variation(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.dim != b.dim {
        return Err(WalkError::DimensionMismatch {
            coin: a.dim,
            state: b.dim,
        });
    }
    let mut sum = 0.0;
    for (p, m) in a.iter() {
        sum += (m - b.masses.get(p).copied().unwrap_or(0.0)).abs();
    }
    for (p, m) in b.iter() {
        if !a.masses.contains_key(p) {
            sum += m;
        }
    }
    Ok(0.5 * sum)
}

/// `max_x |P(x) - P(-x)|`.
pub fn symmetry_defect(dist: &Distribution) -> f64 {
    dist.iter()
        .map(|(p, m)| {
            let mirrored = dist.masses.get(&p.negated()).copied().unwrap_or(0.0);
            (m - mirrored).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CoinSpec;
    use crate::lattice::StandardState;
    use proptest::prelude::*;

    fn dist1(pairs: &[(i64, f64)]) -> Distribution {
        Distribution::from_masses(1, pairs.iter().map(|&(x, m)| (LatticePoint(vec![x]), m))).unwrap()
    }

    fn product(a: &Distribution, b: &Distribution) -> Distribution {
        let mut out = Vec::new();
        for (p, m) in a.iter() {
            for (q, n) in b.iter() {
                let mut coords = p.0.clone();
                coords.extend_from_slice(&q.0);
                out.push((LatticePoint(coords), m * n));
            }
        }
        Distribution::from_masses(a.dim() + b.dim(), out).unwrap()
    }

    #[test]
    fn localized_distribution() {
        let cfg = WalkConfig::new(3, CoinSpec::Dft, StandardState::AllPlus, 0);
        let s = evolve::run(&cfg, |_, _| {}).unwrap();
        let d = position_distribution(&s);
        assert_eq!(d, Distribution::point_mass(LatticePoint::origin(3)));
    }

    #[test]
    fn hadamard_two_and_three_steps() {
        let mut cfg = WalkConfig::new(1, CoinSpec::Hadamard, StandardState::AllPlus, 2);
        let d = position_distribution(&evolve::run(&cfg, |_, _| {}).unwrap());
        for (x, m) in [(-2, 0.25), (0, 0.5), (2, 0.25)] {
            assert!((d.mass(&[x]) - m).abs() < 1e-15);
        }
        cfg.steps = 3;
        let d = position_distribution(&evolve::run(&cfg, |_, _| {}).unwrap());
        for (x, m) in [(3, 0.125), (1, 0.625), (-1, 0.125), (-3, 0.125)] {
            assert!((d.mass(&[x]) - m).abs() < 1e-15);
        }
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn sigma_examples() {
        let one = dist1(&[(1, 0.5), (-1, 0.5)]);
        assert_eq!(sigma(&one), 1.0);
        let mut prod = one.clone();
        for d in 2..=4 {
            prod = product(&prod, &one);
            assert!((sigma(&prod) - (d as f64).sqrt()).abs() < 1e-15);
        }
        assert_eq!(sigma(&Distribution::point_mass(LatticePoint::origin(2))), 0.0);
    }

    #[test]
    fn sigma_of_state_matches_distribution() {
        for (dim, coin) in [(1, CoinSpec::Hadamard), (2, CoinSpec::Dft), (3, CoinSpec::Grover)] {
            let cfg = WalkConfig::new(dim, coin, StandardState::SymmetricProduct, 12);
            evolve::run(&cfg, |_, s| {
                let a = sigma_of_state(s);
                let b = sigma(&position_distribution(s));
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            })
            .unwrap();
        }
    }

    #[test]
    fn first_sigma_sample() {
        let cfg = WalkConfig::new(1, CoinSpec::Hadamard, StandardState::AllMinus, 5);
        let s = sigma_series(&cfg).unwrap();
        assert_eq!(s.samples.len(), 5);
        assert!((s.samples[0].1 - 1.0).abs() < 1e-15);
        assert_eq!(s.samples[0].0, 1);
    }

    #[test]
    fn regression_on_exact_line() {
        let series = SigmaSeries {
            samples: (1..=50).map(|t| (t, 2.0 * t as f64)).collect(),
        };
        let r = regress_sigma(&series, 10).unwrap();
        assert!((r.slope - 2.0).abs() < 1e-13);
        assert!(r.intercept.abs() < 1e-11);
        assert!(r.stderr_slope < 1e-12);
        assert_eq!((r.points, r.t_min, r.t_max), (41, 10, 50));
    }

    #[test]
    fn regression_stderr_matches_textbook() {
        // residuals ±1 alternate on t = 0..4: textbook s_b = sqrt(SSR/(n-2)/Sxx)
        let series = SigmaSeries {
            samples: vec![(0, 1.0), (1, 0.0), (2, 1.0), (3, 0.0), (4, 1.0)],
        };
        let r = regress_sigma(&series, 0).unwrap();
        assert!(r.slope.abs() < 1e-15);
        // mean 0.6; residuals 0.4,-0.6,0.4,-0.6,0.4 → SSR = 1.2; Sxx = 10
        assert!((r.stderr_slope - (1.2f64 / 3.0 / 10.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn regression_needs_points() {
        let series = SigmaSeries {
            samples: vec![(9, 1.0), (10, 2.0), (11, 3.0)],
        };
        assert!(matches!(
            regress_sigma(&series, 10),
            Err(WalkError::TooFewPoints { got: 2, .. })
        ));
    }

    #[test]
    fn marginal_of_product() {
        let p = dist1(&[(1, 0.25), (-1, 0.75)]);
        let q = dist1(&[(2, 0.5), (0, 0.3), (-2, 0.2)]);
        let pq = product(&p, &q);
        let m0 = marginal(&pq, 0).unwrap();
        assert!(total_variation(&m0, &p).unwrap() < 1e-15);
        let m1 = marginal(&pq, 1).unwrap();
        assert!(total_variation(&m1, &q).unwrap() < 1e-15);
        assert!((m1.total() - 1.0).abs() < 1e-15);
        assert!(matches!(marginal(&pq, 2), Err(WalkError::Axis { .. })));
    }

    #[test]
    fn total_variation_examples() {
        let a = dist1(&[(0, 1.0)]);
        assert_eq!(total_variation(&a, &a).unwrap(), 0.0);
        assert_eq!(total_variation(&a, &dist1(&[(4, 1.0)])).unwrap(), 1.0);
        assert_eq!(total_variation(&a, &dist1(&[(0, 0.5), (2, 0.5)])).unwrap(), 0.5);
        let b = Distribution::point_mass(LatticePoint::origin(2));
        assert!(total_variation(&a, &b).is_err());
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(symmetry_defect(&Distribution::point_mass(LatticePoint::origin(2))), 0.0);
        assert!((symmetry_defect(&dist1(&[(1, 0.25), (-1, 0.75)])) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn support_bounds() {
        let d = dist1(&[(-3, 0.5), (5, 0.5), (7, 0.0)]);
        assert_eq!(d.support_bounds(), vec![(-3, 5)]);
    }

    proptest! {
        #[test]
        fn sigma_squared_adds_over_products(
            pm in proptest::collection::vec(0.01f64..1.0, 1..6),
            qm in proptest::collection::vec(0.01f64..1.0, 1..6),
            shift in -5i64..5,
        ) {
            let norm = |v: &[f64]| v.iter().sum::<f64>();
            let (ps, qs) = (norm(&pm), norm(&qm));
            let p = dist1(&pm.iter().enumerate().map(|(i, m)| (i as i64 * 2 + shift, m / ps)).collect::<Vec<_>>());
            let q = dist1(&qm.iter().enumerate().map(|(i, m)| (-(i as i64) * 3, m / qs)).collect::<Vec<_>>());
            let lhs = sigma(&product(&p, &q)).powi(2);
            let rhs = sigma(&p).powi(2) + sigma(&q).powi(2);
            prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs));
        }

        #[test]
        fn total_variation_is_a_bounded_metric(
            am in proptest::collection::vec(0.01f64..1.0, 1..8),
            bm in proptest::collection::vec(0.01f64..1.0, 1..8),
        ) {
            let a = dist1(&am.iter().enumerate().map(|(i, m)| (i as i64, m / am.iter().sum::<f64>())).collect::<Vec<_>>());
            let b = dist1(&bm.iter().enumerate().map(|(i, m)| (i as i64 - 2, m / bm.iter().sum::<f64>())).collect::<Vec<_>>());
            let ab = total_variation(&a, &b).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
            prop_assert!((ab - total_variation(&b, &a).unwrap()).abs() < 1e-15);
        }
    }
}
