//! RLS trajectories at a fixed cardinality, coupled to the particle system
//! and the fixed arc process of a tracked triple.
//!
//! Flips are rejected so the level never changes; swaps follow the elitist
//! rule. Every accepted swap is replayed on the weights, the particles and
//! the tracker, and the three views are cross-checked against the set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fixed_arc::{delta_class, fixed_arc_neighborhood, FixedArcTracker, DELTAS};
use super::{particle_step, particles_from_weights, source_gap};
use crate::adjacency::{set_from_weights, weights_redundant, AdjacencyWeights};
use crate::graph::Solution;
use crate::rls::{Move, Search, SwapMode};
use crate::rng;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    /// Starting gaps, anchored at vertex 0.
    pub weights: Vec<usize>,
    /// Particle ids of the tracked triple.
    pub triple: [usize; 3],
    pub swap: SwapMode,
    pub max_iters: u64,
    /// Steps between full consistency checks against the set.
    pub check_every: u64,
}

impl CouplingConfig {
    /// `n = 30` at level 12: gaps `(3,2)` six times, six particles on the
    /// odd nodes of `C_12`, tracking particles 0, 1 and 2.
    pub fn standard() -> Self {
        Self {
            weights: [3, 2].repeat(6),
            triple: [0, 1, 2],
            swap: SwapMode::FromSet,
            max_iters: 50_000_000,
            check_every: 4096,
        }
    }

    pub fn start(&self) -> Result<AdjacencyWeights> {
        AdjacencyWeights::new(self.weights.clone(), 0)
    }

    pub fn n(&self) -> usize {
        self.weights.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }
}

/// Per-neighbour rate of the fixed arc process under `cfg.swap`.
pub fn expected_rate(cfg: &CouplingConfig) -> f64 {
    match cfg.swap {
        SwapMode::FromSet => 1.0 / (4 * cfg.k()) as f64,
        SwapMode::FromVertices => 1.0 / (4 * cfg.n()) as f64,
    }
}

/// Fixed arc transitions by displacement class (see [`DELTAS`]), counted
/// only from irredundant states outside the target set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionCounts {
    /// Steps in which the displacement was available.
    pub opportunities: [u64; 6],
    /// Steps in which it happened.
    pub hits: [u64; 6],
}

impl TransitionCounts {
    pub fn merge(mut self, other: &Self) -> Self {
        for c in 0..DELTAS.len() {
            self.opportunities[c] += other.opportunities[c];
            self.hits[c] += other.hits[c];
        }
        self
    }

    pub fn frequency(&self, class: usize) -> Option<f64> {
        (self.opportunities[class] > 0).then(|| self.hits[class] as f64 / self.opportunities[class] as f64)
    }

    /// Classes whose frequency is more than `z` binomial standard errors
    /// from `p`.
    pub fn deviations(&self, p: f64, z: f64) -> Vec<usize> {
        (0..DELTAS.len())
            .filter(|&c| {
                let Some(f) = self.frequency(c) else { return false };
                let se = (p * (1.0 - p) / self.opportunities[c] as f64).sqrt();
                (f - p).abs() > z * se
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingRun {
    /// First iteration with a redundant set.
    pub t_redundant: Option<u64>,
    /// First iteration with the tracked triple in the target set.
    pub t_arc: Option<u64>,
    pub iterations: u64,
    pub counts: TransitionCounts,
}

impl CouplingRun {
    /// `T ≤ T_A`; `None` when the run hit the cap first.
    pub fn dominated(&self) -> Option<bool> {
        let t_arc = self.t_arc?;
        Some(self.t_redundant.is_some_and(|t| t <= t_arc))
    }
}

fn check_consistency(search: &Search, w: &AdjacencyWeights, s: &super::ParticleState) -> Result<()> {
    let d = search.solution().support();
    if set_from_weights(w).1 != d || !s.matches(w) {
        return Err(Error::InvalidState(format!(
            "coupled views disagree: set {d}, weights {w}"
        )));
    }
    Ok(())
}

/// One coupled trajectory, run until the triple enters the target set or
/// the cap is reached.
pub fn couple<R: rand::Rng + ?Sized>(cfg: &CouplingConfig, rng: &mut R) -> Result<CouplingRun> {
    let mut w = cfg.start()?;
    let (g, d) = set_from_weights(&w);
    let mut search = Search::new(g, &Solution::from_set(g.n(), &d)?, cfg.swap)?;
    let mut particles = particles_from_weights(&w);
    let mut tracker = FixedArcTracker::new(&particles, cfg.triple)?;
    let rate = expected_rate(cfg);
    let k = w.k();

    let mut counts = TransitionCounts::default();
    let mut t_redundant = weights_redundant(&w).then_some(0);
    let mut t_arc = tracker.state().in_target().then_some(0);
    let mut t = 0;
    while t_arc.is_none() && t < cfg.max_iters {
        t += 1;
        let before = tracker.state();
        let counted = t_redundant.is_none();
        if counted {
            for (next, _) in fixed_arc_neighborhood(&before, rate)?.moves {
                let c = delta_class(&before, &next).expect("neighbours are one step away");
                counts.opportunities[c] += 1;
            }
        }

        if let mv @ Move::Swap { from, direction, .. } = search.propose(rng) {
            if search.accept(mv) {
                let j = w.member_index(from).expect("swap source is a member");
                w = w.move_member(j, direction)?;
                let source = source_gap(k, j, direction);
                let coin = particles.multiplicity(source) == 2 && rng.random_bool(0.5);
                let (next, mover) = particle_step(&particles, source, direction, coin)?;
                tracker.observe(&particles, &next, mover, direction)?;
                particles = next;
            }
        }

        let after = tracker.state();
        if counted && after != before {
            counts.hits[delta_class(&before, &after).expect("one step")] += 1;
        }
        if t_redundant.is_none() && weights_redundant(&w) {
            t_redundant = Some(t);
        }
        if after.in_target() {
            t_arc = Some(t);
        }
        if t % cfg.check_every == 0 {
            check_consistency(&search, &w, &particles)?;
        }
    }
    check_consistency(&search, &w, &particles)?;
    Ok(CouplingRun {
        t_redundant,
        t_arc,
        iterations: t,
        counts,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingSummary {
    pub runs: Vec<CouplingRun>,
    pub counts: TransitionCounts,
    pub expected_rate: f64,
}

impl CouplingSummary {
    /// Runs in which the triple reached the target set before the set
    /// became redundant.
    pub fn violations(&self) -> usize {
        self.runs.iter().filter(|r| r.dominated() == Some(false)).count()
    }

    pub fn capped(&self) -> usize {
        self.runs.iter().filter(|r| r.t_arc.is_none()).count()
    }
}

/// `runs` independent trajectories, run `i` on stream `i` of `seed`.
pub fn couple_many(cfg: &CouplingConfig, runs: u64, seed: u64) -> Result<CouplingSummary> {
    let runs = (0..runs)
        .into_par_iter()
        .map(|i| couple(cfg, &mut rng::stream(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let counts = runs
        .iter()
        .fold(TransitionCounts::default(), |acc, r| acc.merge(&r.counts));
    Ok(CouplingSummary {
        runs,
        counts,
        expected_rate: expected_rate(cfg),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_start() {
        let cfg = CouplingConfig::standard();
        assert_eq!((cfg.n(), cfg.k()), (30, 12));
        let w = cfg.start().unwrap();
        assert!(!weights_redundant(&w));
        let t = FixedArcTracker::new(&particles_from_weights(&w), cfg.triple).unwrap();
        assert_eq!((t.state().x, t.state().y), (8, 2));
    }

    #[test]
    fn single_run_is_consistent() {
        let cfg = CouplingConfig {
            check_every: 1,
            ..CouplingConfig::standard()
        };
        let run = couple(&cfg, &mut rng::stream(5, 0)).unwrap();
        assert_eq!(run.dominated(), Some(true));
        assert!(run.t_redundant.is_some());
    }

    #[test]
    fn replay_is_deterministic() {
        let cfg = CouplingConfig::standard();
        let a = couple_many(&cfg, 8, 3).unwrap();
        let b = couple_many(&cfg, 8, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations(), 0);
        assert!(a.counts.hits.iter().sum::<u64>() > 0);
    }

    #[test]
    fn vertex_swaps_scale_the_rate() {
        let cfg = CouplingConfig {
            swap: SwapMode::FromVertices,
            ..CouplingConfig::standard()
        };
        assert_eq!(expected_rate(&cfg), 1.0 / 120.0);
        let s = couple_many(&cfg, 40, 9).unwrap();
        assert_eq!(s.violations(), 0);
        assert!(s.counts.deviations(s.expected_rate, 4.0).is_empty(), "{:?}", s.counts);
    }
}
