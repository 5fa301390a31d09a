//! Adjacency particle systems and the processes built on them.
//!
//! A gap of weight 1 hosts two particles, a gap of weight 2 hosts one and a
//! gap of weight 3 hosts none. When a member moves, the gap that grows loses
//! a particle to the gap that shrinks; with two candidates a fair coin picks
//! which one.

pub mod coupling;
pub mod fixed_arc;
pub mod triangle;

use serde::{Deserialize, Serialize};

use crate::adjacency::AdjacencyWeights;
use crate::graph::Direction;
use crate::{Error, Result};

pub use fixed_arc::{fixed_arc_neighborhood, fixed_arc_step, ArcEvent, FixedArcState, FixedArcTracker, Role};
pub use triangle::TriangleWalkConfig;

/// Particles on the dual cycle `C_k`; `positions[id]` is the node of particle `id`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParticleState {
    k: usize,
    positions: Vec<usize>,
}

impl ParticleState {
    pub fn new(k: usize, positions: Vec<usize>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidState(format!("particle cycle needs k ≥ 2, got {k}")));
        }
        let mut counts = vec![0usize; k];
        for &p in &positions {
            if p >= k {
                return Err(Error::VertexOutOfRange { vertex: p, n: k });
            }
            counts[p] += 1;
            if counts[p] > 2 {
                return Err(Error::InvalidState(format!("node {p} hosts more than two particles")));
            }
        }
        Ok(Self { k, positions })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn multiplicity(&self, node: usize) -> usize {
        self.positions.iter().filter(|&&p| p == node).count()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.k];
        for &p in &self.positions {
            c[p] += 1;
        }
        c
    }

    /// Particle ids at `node`, ascending.
    pub fn occupants(&self, node: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.positions[i] == node).collect()
    }

    /// Multiplicities equal `3 − w` node by node.
    pub fn matches(&self, w: &AdjacencyWeights) -> bool {
        self.k == w.k() && self.counts().iter().zip(w.weights()).all(|(c, w)| c + w == 3)
    }

    /// Counterclockwise distance from node `a` to node `b`.
    pub fn ccw_distance(&self, a: usize, b: usize) -> usize {
        (a + self.k - b) % self.k
    }

    /// Clockwise distance from node `a` to node `b`.
    pub fn cw_distance(&self, a: usize, b: usize) -> usize {
        (b + self.k - a) % self.k
    }
}

/// Ids are assigned in node order.
pub fn particles_from_weights(w: &AdjacencyWeights) -> ParticleState {
    let positions = w
        .weights()
        .iter()
        .enumerate()
        .flat_map(|(node, &wt)| std::iter::repeat_n(node, 3 - wt))
        .collect();
    ParticleState {
        k: w.k(),
        positions,
    }
}

/// Some pair of adjacent nodes jointly hosts at least three particles.
pub fn particles_redundant(s: &ParticleState) -> bool {
    let c = s.counts();
    (0..s.k).any(|i| c[i] + c[(i + 1) % s.k] >= 3)
}

/// Move one particle from `source` to its neighbour in `dir`.
///
/// With two particles at `source`, `coin = false` moves the lower id and
/// `coin = true` the higher. Returns the new state and the id that moved.
pub fn particle_step(s: &ParticleState, source: usize, dir: Direction, coin: bool) -> Result<(ParticleState, usize)> {
    if source >= s.k {
        return Err(Error::VertexOutOfRange { vertex: source, n: s.k });
    }
    let occ = s.occupants(source);
    let target = dir.advance(source, s.k);
    let id = match occ.as_slice() {
        [] => return Err(Error::IllegalMove(format!("node {source} hosts no particle"))),
        [p] => *p,
        [lo, hi] => {
            if coin {
                *hi
            } else {
                *lo
            }
        }
        _ => unreachable!("multiplicity is at most two"),
    };
    if s.multiplicity(target) >= 2 {
        return Err(Error::IllegalMove(format!("node {target} already hosts two particles")));
    }
    let mut next = s.clone();
    next.positions[id] = target;
    Ok((next, id))
}

/// Gap that loses a particle when member `j` moves in `dir`.
pub fn source_gap(k: usize, j: usize, dir: Direction) -> usize {
    match dir {
        Direction::Clockwise => (j + k - 1) % k,
        Direction::Counterclockwise => j,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ws: &[usize]) -> AdjacencyWeights {
        AdjacencyWeights::new(ws.to_vec(), 0).unwrap()
    }

    #[test]
    fn from_weights() {
        let s = particles_from_weights(&w(&[2, 1, 2, 3]));
        assert_eq!(s.len(), 4);
        assert_eq!(s.positions(), &[0, 1, 1, 2]);
        assert_eq!(particles_from_weights(&w(&[3, 3, 3])).len(), 0);
        let s = particles_from_weights(&w(&[2, 2, 2]));
        assert_eq!(s.counts(), vec![1, 1, 1]);
    }

    #[test]
    fn redundancy() {
        assert!(particles_redundant(&particles_from_weights(&w(&[1, 2, 3, 2]))));
        // on k = 3 every pair of nodes is adjacent, yet each pair hosts only two
        assert!(!particles_redundant(&particles_from_weights(&w(&[2, 2, 2]))));
        assert!(!particles_redundant(&particles_from_weights(&w(&[3, 3, 3]))));
    }

    #[test]
    fn single_particle_relocates() {
        let s = particles_from_weights(&w(&[2, 3, 3]));
        let (t, id) = particle_step(&s, 0, Direction::Clockwise, true).unwrap();
        assert_eq!(id, 0);
        assert_eq!(t.positions(), &[1]);
    }

    #[test]
    fn coin_picks_the_particle() {
        let s = particles_from_weights(&w(&[1, 3, 3]));
        let (a, ida) = particle_step(&s, 0, Direction::Counterclockwise, false).unwrap();
        let (b, idb) = particle_step(&s, 0, Direction::Counterclockwise, true).unwrap();
        assert_eq!((ida, idb), (0, 1));
        assert_eq!(a.positions(), &[2, 0]);
        assert_eq!(b.positions(), &[0, 2]);
    }

    #[test]
    fn illegal_steps() {
        let s = particles_from_weights(&w(&[3, 1, 3]));
        assert!(matches!(particle_step(&s, 0, Direction::Clockwise, false), Err(Error::IllegalMove(_))));
        let s = particles_from_weights(&w(&[2, 1, 3]));
        assert!(matches!(particle_step(&s, 0, Direction::Clockwise, false), Err(Error::IllegalMove(_))));
    }

    #[test]
    fn follows_weight_moves() {
        let a = w(&[2, 3, 2, 3, 2]);
        let s = particles_from_weights(&a);
        for j in 0..a.k() {
            for dir in Direction::BOTH {
                let Ok(b) = a.move_member(j, dir) else { continue };
                for coin in [false, true] {
                    let (t, _) = particle_step(&s, source_gap(a.k(), j, dir), dir, coin).unwrap();
                    assert!(t.matches(&b), "{a} -> {b}");
                }
            }
        }
    }

    #[test]
    fn multiplicity_is_checked() {
        assert!(ParticleState::new(3, vec![0, 0, 0]).is_err());
        assert!(ParticleState::new(3, vec![0, 0, 1]).is_ok());
        assert!(ParticleState::new(3, vec![3]).is_err());
    }
}
