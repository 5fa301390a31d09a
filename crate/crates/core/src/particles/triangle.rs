//! The lazy `1/c` random walk on the triangle grid `T_n`.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::markov::absorbing::absorption_analysis;
use crate::markov::grids::{chi, triangle_index, triangle_points, triangle_step, Point, TRIANGLE_STEPS};
use crate::markov::network::ChainSpec;
use crate::markov::resistance::{parallel_samples, Estimate};
use crate::{Error, Result};

/// Each existing neighbour is taken with probability `1/c`; the walk stays
/// put with the remaining mass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleWalkConfig {
    pub n: usize,
    pub c: f64,
}

impl TriangleWalkConfig {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("triangle size must be at least 1".into()));
        }
        if c.is_nan() || c < TRIANGLE_STEPS.len() as f64 {
            return Err(Error::Config(format!("laziness denominator {c} below 6")));
        }
        Ok(Self { n, c })
    }

    pub fn step<R: Rng + ?Sized>(&self, p: Point, rng: &mut R) -> Point {
        let r = rng.random::<f64>() * self.c;
        if r < TRIANGLE_STEPS.len() as f64 {
            if let Some(q) = triangle_step(self.n, p, TRIANGLE_STEPS[r as usize]) {
                return q;
            }
        }
        p
    }

    /// Transition matrix over [`triangle_points`].
    pub fn chain(&self) -> ChainSpec {
        let pts = triangle_points(self.n);
        let mut p = DMatrix::zeros(pts.len(), pts.len());
        for (i, &pt) in pts.iter().enumerate() {
            let mut stay = 1.0;
            for d in TRIANGLE_STEPS {
                if let Some(q) = triangle_step(self.n, pt, d) {
                    p[(i, triangle_index(self.n, q).expect("in T_n"))] += 1.0 / self.c;
                    stay -= 1.0 / self.c;
                }
            }
            p[(i, i)] += stay;
        }
        ChainSpec::new(p).expect("rows sum to one")
    }
}

/// The three corners `(0,0)`, `(n,0)`, `(0,n)`.
pub fn corners(n: usize) -> Vec<Point> {
    vec![(0, 0), (n, 0), (0, n)]
}

fn check_points(cfg: &TriangleWalkConfig, pts: &[Point]) -> Result<()> {
    match pts.iter().find(|p| triangle_index(cfg.n, **p).is_none()) {
        Some(p) => Err(Error::InvalidState(format!("{p:?} is not a point of T_{}", cfg.n))),
        None => Ok(()),
    }
}

/// Monte Carlo estimate of the steps from `start` until the walk first enters
/// `targets`.
pub fn triangle_hitting_time(
    cfg: &TriangleWalkConfig,
    start: Point,
    targets: &[Point],
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    check_points(cfg, &[start])?;
    check_points(cfg, targets)?;
    if targets.is_empty() {
        return Err(Error::Unreachable(triangle_index(cfg.n, start).expect("checked")));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let samples = parallel_samples(trials, seed, |r| {
        let mut p = start;
        let mut t = 0u64;
        while !targets.contains(&p) {
            p = cfg.step(p, r);
            t += 1;
        }
        t as f64
    });
    Ok(Estimate::from_samples(&samples))
}

/// Exact expected hitting times of `targets` from every point, indexed like
/// [`triangle_points`].
pub fn triangle_hitting_times_exact(cfg: &TriangleWalkConfig, targets: &[Point]) -> Result<Vec<f64>> {
    check_points(cfg, targets)?;
    let absorbing: Vec<usize> = targets
        .iter()
        .map(|&p| triangle_index(cfg.n, p).expect("checked"))
        .collect();
    let a = absorption_analysis(&cfg.chain(), &absorbing)?;
    Ok(a.times.iter().copied().collect())
}

/// `4n · χ_k · (8 ln²k + 6(ln k + 1))`: expected corner hitting time bound
/// for the `1/(4n)` walk on `T_k`.
pub fn first_redundancy_bound(n: usize, k: usize) -> f64 {
    4.0 * n as f64 * chi(k) as f64 * crate::markov::resistance::triangle_bound(k)
}
