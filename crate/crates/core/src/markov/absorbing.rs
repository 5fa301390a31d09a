//! Absorbing-chain analysis and the redundancy trial chain.

use nalgebra::{DMatrix, DVector};
use num::{BigInt, BigRational, One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::network::ChainSpec;
use super::resistance::{parallel_samples, Estimate};
use crate::{Error, Result};

/// State order of [`trial_chain`].
pub const TRIAL_STATES: [&str; 5] = ["G", "F", "S", "M", "B"];
pub const G: usize = 0;
pub const F: usize = 1;
pub const S: usize = 2;
pub const M: usize = 3;
pub const B: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Absorption {
    pub absorbing: Vec<usize>,
    /// `hit[(x, j)]`: probability that the chain from `x` is absorbed in `absorbing[j]`.
    pub hit: DMatrix<f64>,
    /// Expected steps to absorption from each state (zero on absorbing states).
    pub times: DVector<f64>,
}

impl Absorption {
    pub fn hit_probability(&self, from: usize, target: usize) -> Option<f64> {
        let j = self.absorbing.iter().position(|&a| a == target)?;
        Some(self.hit[(from, j)])
    }
}

/// States that cannot reach `absorbing` along positive transitions.
fn unreachable(len: usize, positive: impl Fn(usize, usize) -> bool, absorbing: &[usize]) -> Option<usize> {
    let mut reach = vec![false; len];
    let mut stack: Vec<usize> = absorbing.to_vec();
    for &a in absorbing {
        reach[a] = true;
    }
    while let Some(y) = stack.pop() {
        for (x, r) in reach.iter_mut().enumerate() {
            if !*r && positive(x, y) {
                *r = true;
                stack.push(x);
            }
        }
    }
    reach.iter().position(|r| !r)
}

fn check_absorbing(len: usize, absorbing: &[usize]) -> Result<Vec<usize>> {
    if absorbing.is_empty() {
        return Err(Error::InvalidState("absorbing set is empty".into()));
    }
    if let Some(&a) = absorbing.iter().find(|&&a| a >= len) {
        return Err(Error::VertexOutOfRange { vertex: a, n: len });
    }
    Ok((0..len).filter(|x| !absorbing.contains(x)).collect())
}

/// First-step analysis by a dense LU solve of `(I − Q) [H τ] = [R 1]`.
pub fn absorption_analysis(chain: &ChainSpec, absorbing: &[usize]) -> Result<Absorption> {
    let p = chain.matrix();
    let len = chain.len();
    let transient = check_absorbing(len, absorbing)?;
    if let Some(x) = unreachable(len, |x, y| p[(x, y)] > 0.0, absorbing) {
        return Err(Error::Unreachable(x));
    }
    let t = transient.len();
    let a = absorbing.len();
    let mut hit = DMatrix::zeros(len, a);
    let mut times = DVector::zeros(len);
    for (j, &s) in absorbing.iter().enumerate() {
        hit[(s, j)] = 1.0;
    }
    if t > 0 {
        let mut lhs = DMatrix::identity(t, t);
        let mut rhs = DMatrix::zeros(t, a + 1);
        for (i, &x) in transient.iter().enumerate() {
            for (k, &y) in transient.iter().enumerate() {
                lhs[(i, k)] -= p[(x, y)];
            }
            for (j, &s) in absorbing.iter().enumerate() {
                rhs[(i, j)] = p[(x, s)];
            }
            rhs[(i, a)] = 1.0;
        }
        let sol = lhs
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singular("I − Q".into()))?;
        let residual = (&lhs * &sol - &rhs).norm();
        if residual > 1e-10 * rhs.norm() {
            return Err(Error::Singular(format!("absorption residual {residual:e}")));
        }
        for (i, &x) in transient.iter().enumerate() {
            for j in 0..a {
                hit[(x, j)] = sol[(i, j)];
            }
            times[x] = sol[(i, a)];
        }
    }
    Ok(Absorption {
        absorbing: absorbing.to_vec(),
        hit,
        times,
    })
}

/// Transition matrix of the trial chain with exact entries.
pub fn trial_matrix_exact(n: usize, b_reachable: bool) -> Result<Vec<Vec<BigRational>>> {
    if n < 2 {
        return Err(Error::Config(format!("trial chain needs n ≥ 2, got {n}")));
    }
    let r = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let n = n as i64;
    let mut p = vec![vec![BigRational::zero(); 5]; 5];
    p[G][G] = BigRational::one();
    p[B][B] = BigRational::one();
    p[S][F] = r(1, 2);
    p[S][M] = r(1, 2);
    p[F][G] = r(1, n);
    p[F][S] = r(n - 1, n);
    if b_reachable {
        p[M][B] = r(1, n);
        p[M][S] = r(n - 1, n);
    } else {
        p[M][S] = BigRational::one();
    }
    Ok(p)
}

/// Five-state trial chain on `[G, F, S, M, B]`.
pub fn trial_chain(n: usize) -> Result<ChainSpec> {
    trial_chain_with(n, true)
}

/// Trial chain; with `b_reachable = false` the move branch always returns to `S`.
pub fn trial_chain_with(n: usize, b_reachable: bool) -> Result<ChainSpec> {
    use num::ToPrimitive;
    let exact = trial_matrix_exact(n, b_reachable)?;
    let p = DMatrix::from_fn(5, 5, |i, j| exact[i][j].to_f64().expect("finite"));
    ChainSpec::with_labels(p, TRIAL_STATES.iter().map(|s| s.to_string()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactAbsorption {
    pub absorbing: Vec<usize>,
    pub hit: Vec<Vec<BigRational>>,
    pub times: Vec<BigRational>,
}

/// [`absorption_analysis`] in exact rational arithmetic (Gauss–Jordan).
pub fn absorption_analysis_exact(p: &[Vec<BigRational>], absorbing: &[usize]) -> Result<ExactAbsorption> {
    let len = p.len();
    if p.iter().any(|row| row.len() != len) {
        return Err(Error::InvalidState("transition matrix is not square".into()));
    }
    let transient = check_absorbing(len, absorbing)?;
    if let Some(x) = unreachable(len, |x, y| !p[x][y].is_zero(), absorbing) {
        return Err(Error::Unreachable(x));
    }
    let t = transient.len();
    let a = absorbing.len();
    // augmented [I − Q | R | 1]
    let mut aug: Vec<Vec<BigRational>> = transient
        .iter()
        .map(|&x| {
            let mut row: Vec<BigRational> = transient
                .iter()
                .map(|&y| {
                    let id = if x == y { BigRational::one() } else { BigRational::zero() };
                    id - &p[x][y]
                })
                .collect();
            row.extend(absorbing.iter().map(|&s| p[x][s].clone()));
            row.push(BigRational::one());
            row
        })
        .collect();
    for col in 0..t {
        let pivot = (col..t)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::Singular("I − Q".into()))?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..t {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (v, pv) in aug[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &factor * pv;
                }
            }
        }
    }
    let mut hit = vec![vec![BigRational::zero(); a]; len];
    let mut times = vec![BigRational::zero(); len];
    for (j, &s) in absorbing.iter().enumerate() {
        hit[s][j] = BigRational::one();
    }
    for (i, &x) in transient.iter().enumerate() {
        for j in 0..a {
            hit[x][j] = aug[i][t + j].clone();
        }
        times[x] = aug[i][t + a].clone();
    }
    Ok(ExactAbsorption {
        absorbing: absorbing.to_vec(),
        hit,
        times,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub n: usize,
    pub p_good: f64,
    pub absorption_time: f64,
    /// Expected absorption time from `S` when `B` is unreachable.
    pub f_s: f64,
}

pub fn trial_summary(n: usize) -> Result<TrialSummary> {
    let full = absorption_analysis(&trial_chain(n)?, &[G, B])?;
    let no_b = absorption_analysis(&trial_chain_with(n, false)?, &[G, B])?;
    Ok(TrialSummary {
        n,
        p_good: full.hit_probability(S, G).expect("G is absorbing"),
        absorption_time: full.times[S],
        f_s: no_b.times[S],
    })
}

/// Number of trials, each started at `S`, until one is absorbed in `G`.
pub fn sample_retries<R: Rng + ?Sized>(n: usize, rng: &mut R) -> u64 {
    let q = 1.0 / n as f64;
    let mut trials = 1;
    loop {
        // each visit to S picks F or M, which then absorbs with probability 1/n
        let flip = rng.random_bool(0.5);
        if rng.random_bool(q) {
            if flip {
                return trials;
            }
            trials += 1;
        }
    }
}

/// Monte Carlo mean of [`sample_retries`].
pub fn simulate_retries(n: usize, runs: u64, seed: u64) -> Result<Estimate> {
    if n < 2 || runs == 0 {
        return Err(Error::Config("need n ≥ 2 and at least one run".into()));
    }
    Ok(Estimate::from_samples(&parallel_samples(runs, seed, |r| {
        sample_retries(n, r) as f64
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_stochastic() {
        for n in [2, 10, 100] {
            let c = trial_chain(n).unwrap();
            for row in c.matrix().row_iter() {
                assert!((row.sum() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn success_probability_is_half() {
        let s = trial_summary(10).unwrap();
        assert!((s.p_good - 0.5).abs() < 1e-12);
        assert!((s.f_s - 40.0).abs() < 1e-9);
    }

    #[test]
    fn exact_route() {
        for n in [2, 10, 100] {
            let e = absorption_analysis_exact(&trial_matrix_exact(n, true).unwrap(), &[G, B]).unwrap();
            assert_eq!(e.hit[S][0], BigRational::new(1.into(), 2.into()));
            let e = absorption_analysis_exact(&trial_matrix_exact(n, false).unwrap(), &[G, B]).unwrap();
            assert_eq!(e.times[S], BigRational::from_integer(BigInt::from(4 * n)));
        }
    }

    #[test]
    fn single_absorbing_state() {
        let p = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0, 0.3, 0.7]);
        let a = absorption_analysis(&ChainSpec::new(p).unwrap(), &[0]).unwrap();
        for x in 0..3 {
            assert!((a.hit[(x, 0)] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unreachable_absorbing_set() {
        let p = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.5, 0.5, 0.0, 0.5, 0.5]);
        assert!(matches!(
            absorption_analysis(&ChainSpec::new(p).unwrap(), &[0]),
            Err(Error::Unreachable(1))
        ));
    }

    #[test]
    fn retries_average_two() {
        let est = simulate_retries(10, 20_000, 3).unwrap();
        assert!(est.mean <= 2.0 + 3.0 * est.se);
        assert!(est.within(2.0, 4.0));
    }
}
