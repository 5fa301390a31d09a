//! Effective resistance by potential solves on the grounded Laplacian.

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grids::{self, triangle_index};
use super::network::Network;
use crate::{rng, Error, Result};

/// Relative residual accepted from a potential solve.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Largest triangle side handled by [`triangle_resistance_check`] by default.
pub const TRIANGLE_EXACT_LIMIT: usize = 60;

/// Cholesky factor of the Laplacian with one vertex removed.
pub struct GroundedLaplacian<'a> {
    net: &'a Network,
    ground: usize,
    factor: CscCholesky<f64>,
}

impl<'a> GroundedLaplacian<'a> {
    pub fn new(net: &'a Network, ground: usize) -> Result<Self> {
        net.check_vertex(ground)?;
        if net.len() < 2 {
            return Err(Error::InvalidNetwork("need at least two vertices".into()));
        }
        let dim = net.len() - 1;
        let idx = |x: usize| (x != ground).then(|| if x < ground { x } else { x - 1 });
        let mut coo = CooMatrix::new(dim, dim);
        for e in net.edges().iter().filter(|e| !e.is_loop()) {
            let (a, b) = (idx(e.u), idx(e.v));
            if let Some(a) = a {
                coo.push(a, a, e.conductance);
            }
            if let Some(b) = b {
                coo.push(b, b, e.conductance);
            }
            if let (Some(a), Some(b)) = (a, b) {
                coo.push(a, b, -e.conductance);
                coo.push(b, a, -e.conductance);
            }
        }
        let factor = CscCholesky::factor(&CscMatrix::from(&coo))
            .map_err(|e| Error::Singular(format!("grounded Laplacian: {e}")))?;
        Ok(Self { net, ground, factor })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Potentials for net current `current[x]` injected at each vertex; the
    /// ground absorbs the balance and sits at potential zero. Columns are
    /// independent right-hand sides.
    pub fn potentials(&self, current: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let n = self.net.len();
        if current.nrows() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: current.nrows(),
            });
        }
        let g = self.ground;
        let reduced = current.clone().remove_row(g);
        let solved = self.factor.solve(&reduced);
        let phi = solved.insert_row(g, 0.0);
        self.check_residual(current, &phi)?;
        Ok(phi)
    }

    fn check_residual(&self, current: &DMatrix<f64>, phi: &DMatrix<f64>) -> Result<()> {
        let g = self.ground;
        for col in 0..current.ncols() {
            let mut r: Vec<f64> = current.column(col).iter().map(|c| -c).collect();
            for e in self.net.edges().iter().filter(|e| !e.is_loop()) {
                let flow = e.conductance * (phi[(e.u, col)] - phi[(e.v, col)]);
                r[e.u] += flow;
                r[e.v] -= flow;
            }
            r[g] = 0.0;
            let norm_b = current.column(col).norm().max(f64::MIN_POSITIVE);
            let norm_r = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm_r > RESIDUAL_TOL * norm_b {
                return Err(Error::Singular(format!(
                    "residual {norm_r:e} exceeds {RESIDUAL_TOL:e}·{norm_b:e}"
                )));
            }
        }
        Ok(())
    }

    /// `R(x ↔ ground)` for every `x`.
    pub fn resistances_to_ground(&self) -> Result<Vec<f64>> {
        const BLOCK: usize = 256;
        let n = self.net.len();
        let mut out = vec![0.0; n];
        let others: Vec<usize> = (0..n).filter(|&x| x != self.ground).collect();
        for chunk in others.chunks(BLOCK) {
            let mut b = DMatrix::zeros(n, chunk.len());
            for (j, &x) in chunk.iter().enumerate() {
                b[(x, j)] = 1.0;
            }
            let phi = self.potentials(&b)?;
            for (j, &x) in chunk.iter().enumerate() {
                out[x] = phi[(x, j)];
            }
        }
        Ok(out)
    }
}

/// `R(s ↔ t)`: the potential at `s` when a unit current enters at `s` and
/// leaves at a grounded `t`.
pub fn effective_resistance(net: &Network, s: usize, t: usize) -> Result<f64> {
    net.check_vertex(s)?;
    net.check_vertex(t)?;
    if s == t {
        return Ok(0.0);
    }
    let lap = GroundedLaplacian::new(net, t)?;
    let mut b = DMatrix::zeros(net.len(), 1);
    b[(s, 0)] = 1.0;
    Ok(lap.potentials(&b)?[(s, 0)])
}

/// `R(o ↔ t)` for every `t`.
pub fn resistances_from(net: &Network, o: usize) -> Result<Vec<f64>> {
    if net.len() == 1 {
        net.check_vertex(o)?;
        return Ok(vec![0.0]);
    }
    GroundedLaplacian::new(net, o)?.resistances_to_ground()
}

/// `t_{a↔b} = c_G · R(a ↔ b)`.
pub fn commute_time(net: &Network, a: usize, b: usize) -> Result<f64> {
    Ok(net.total_conductance() * effective_resistance(net, a, b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub trials: u64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            se: (var / k).sqrt(),
            trials: samples.len() as u64,
        }
    }

    /// `|mean − value| ≤ z · se`.
    pub fn within(&self, value: f64, z: f64) -> bool {
        (self.mean - value).abs() <= z * self.se
    }
}

/// Number of independent generator streams used by Monte Carlo estimators.
pub const MC_CHUNKS: u64 = 64;

/// Runs `trials` samples split over [`MC_CHUNKS`] streams of `seed`; the
/// result does not depend on the thread count.
pub fn parallel_samples<F>(trials: u64, seed: u64, sample: F) -> Vec<f64>
where
    F: Fn(&mut rng::Rng) -> f64 + Sync,
{
    (0..MC_CHUNKS)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let count = trials / MC_CHUNKS + u64::from(chunk < trials % MC_CHUNKS);
            let mut r = rng::stream(seed, chunk);
            (0..count).map(|_| sample(&mut r)).collect::<Vec<_>>()
        })
        .collect()
}

/// One step of the weighted random walk from `x`.
pub fn walk_step<R: Rng + ?Sized>(net: &Network, x: usize, rng: &mut R) -> usize {
    let inc = net.incident(x);
    let total = net.vertex_conductance(x);
    let mut u = rng.random::<f64>() * total;
    for &i in inc {
        let e = net.edges()[i];
        if u < e.conductance {
            return e.other(x);
        }
        u -= e.conductance;
    }
    net.edges()[*inc.last().expect("connected vertex")].other(x)
}

/// Steps until the walk from `from` first visits `to` (zero if equal).
pub fn hitting_steps<R: Rng + ?Sized>(net: &Network, from: usize, to: usize, rng: &mut R) -> u64 {
    let mut x = from;
    let mut t = 0;
    while x != to {
        x = walk_step(net, x, rng);
        t += 1;
    }
    t
}

/// Mean of `τ_{a→b} + τ_{b→a}` over independent walks started at `a`.
pub fn commute_time_mc(net: &Network, a: usize, b: usize, trials: u64, seed: u64) -> Result<Estimate> {
    net.check_vertex(a)?;
    net.check_vertex(b)?;
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let samples = parallel_samples(trials, seed, |r| {
        (hitting_steps(net, a, b, r) + hitting_steps(net, b, a, r)) as f64
    });
    Ok(Estimate::from_samples(&samples))
}

/// `R(s ↔ t)` does not drop when the resistances of `edges` are multiplied by
/// `factor`, for each pair in `pairs`.
pub fn rayleigh_check(net: &Network, edges: &[usize], factor: f64, pairs: &[(usize, usize)]) -> Result<bool> {
    if factor.is_nan() || factor < 1.0 {
        return Err(Error::Config(format!("inflation factor {factor} below 1")));
    }
    if let Some(&i) = edges.iter().find(|&&i| i >= net.edges().len()) {
        return Err(Error::InvalidNetwork(format!("edge index {i} out of range")));
    }
    let inflated = net.map_conductances(|i, c| if edges.contains(&i) { c / factor } else { c })?;
    for &(s, t) in pairs {
        let before = effective_resistance(net, s, t)?;
        let after = effective_resistance(&inflated, s, t)?;
        if after < before * (1.0 - 1e-12) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `8 ln²n + 6(ln n + 1)`.
pub fn triangle_bound(n: usize) -> f64 {
    let l = (n as f64).ln();
    8.0 * l * l + 6.0 * (l + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleResistance {
    pub n: usize,
    /// `R(o ↔ t)` indexed like [`grids::triangle_points`].
    pub resistances: Vec<f64>,
    pub max: f64,
    pub argmax: (usize, usize),
    pub bound: f64,
}

impl TriangleResistance {
    pub fn holds(&self) -> bool {
        self.max <= self.bound
    }
}

/// Exact `R(o ↔ t)` on unit `T_n` for all `t`, with the logarithmic bound.
pub fn triangle_resistance_check(n: usize) -> Result<TriangleResistance> {
    triangle_resistance_check_with_limit(n, TRIANGLE_EXACT_LIMIT)
}

pub fn triangle_resistance_check_with_limit(n: usize, limit: usize) -> Result<TriangleResistance> {
    if n < 2 {
        return Err(Error::InvalidNetwork(format!("triangle side {n} below 2")));
    }
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }
    let net = grids::triangle_grid(n)?;
    let o = triangle_index(n, (0, 0)).expect("origin");
    let resistances = resistances_from(&net, o)?;
    let points = grids::triangle_points(n);
    let (arg, &max) = resistances
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    Ok(TriangleResistance {
        n,
        resistances,
        max,
        argmax: points[arg],
        bound: triangle_bound(n),
    })
}

/// Largest relative deviation of `R(s ↔ t; 1/r) / (r · R(s ↔ t; 1))` from one
/// over `pairs`, for an even network with uniform resistance `r`.
pub fn even_scaling_deviation(unit: &Network, r: f64, pairs: &[(usize, usize)]) -> Result<f64> {
    if !unit.is_even() {
        return Err(Error::InvalidNetwork("network is not even".into()));
    }
    let scaled = unit.scaled(1.0 / r)?;
    let mut worst: f64 = 0.0;
    for &(s, t) in pairs {
        let base = effective_resistance(unit, s, t)?;
        let got = effective_resistance(&scaled, s, t)?;
        if base > 0.0 {
            worst = worst.max((got / (r * base) - 1.0).abs());
        } else {
            worst = worst.max(got.abs());
        }
    }
    Ok(worst)
}

/// `R` between opposite corners of unit `B_n`.
pub fn square_corner_resistance(n: usize) -> Result<f64> {
    let net = grids::square_grid(n)?;
    effective_resistance(&net, 0, n * n - 1)
}

/// `[ln(n)/2, 2 ln(n)]`.
pub fn square_bracket(n: usize) -> (f64, f64) {
    let l = (n as f64).ln();
    (l / 2.0, 2.0 * l)
}
