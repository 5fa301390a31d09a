//! Gap representation of dominating sets.
//!
//! For members `v_0 < v_1 < … < v_{k-1}` of a dominating set, gap `i` is the
//! clockwise distance from `v_i` to `v_{i+1}` (indices mod `k`). Each gap is
//! a node of the dual cycle `C_k` with weight in `{1, 2, 3}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{CycleGraph, Direction, VertexSet};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdjacencyWeights {
    weights: Vec<usize>,
    anchor: usize,
}

impl AdjacencyWeights {
    pub fn new(weights: Vec<usize>, anchor: usize) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidWeights(format!(
                "need at least two gaps, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(1..=3).contains(*w)) {
            return Err(Error::InvalidWeights(format!("weight {w} outside 1..=3")));
        }
        let n: usize = weights.iter().sum();
        if n < 3 {
            return Err(Error::CycleTooSmall(n));
        }
        if anchor >= n {
            return Err(Error::VertexOutOfRange { vertex: anchor, n });
        }
        Ok(Self { weights, anchor })
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn n(&self) -> usize {
        self.weights.iter().sum()
    }

    pub fn graph(&self) -> CycleGraph {
        CycleGraph::new(self.n()).expect("validated on construction")
    }

    /// Vertex `v_j`, the member between gap `j-1` and gap `j`.
    pub fn member(&self, j: usize) -> usize {
        let offset: usize = self.weights[..j].iter().sum();
        (self.anchor + offset) % self.n()
    }

    /// Index `j` with `v_j = v`.
    pub fn member_index(&self, v: usize) -> Option<usize> {
        let n = self.n();
        let mut at = self.anchor;
        for (j, w) in self.weights.iter().enumerate() {
            if at == v {
                return Some(j);
            }
            at = (at + w) % n;
        }
        None
    }

    /// Shrink gap `gap` by one and grow its neighbour in `toward` by one.
    ///
    /// This moves the member shared by the two gaps into the shrinking gap.
    pub fn apply_move(&self, gap: usize, toward: Direction) -> Result<Self> {
        let k = self.k();
        if gap >= k {
            return Err(Error::IllegalMove(format!("gap {gap} out of range for k = {k}")));
        }
        let other = toward.advance(gap, k);
        if self.weights[gap] < 2 || self.weights[other] > 2 {
            return Err(Error::IllegalMove(format!(
                "shrinking gap {gap} (weight {}) into gap {other} (weight {})",
                self.weights[gap], self.weights[other]
            )));
        }
        let n = self.n();
        let mut weights = self.weights.clone();
        weights[gap] -= 1;
        weights[other] += 1;
        let anchor = match toward {
            Direction::Clockwise if gap == k - 1 => (self.anchor + n - 1) % n,
            Direction::Counterclockwise if gap == 0 => (self.anchor + 1) % n,
            _ => self.anchor,
        };
        Ok(Self { weights, anchor })
    }

    /// Move member `v_j` one step in `dir`.
    pub fn move_member(&self, j: usize, dir: Direction) -> Result<Self> {
        let k = self.k();
        match dir {
            Direction::Clockwise => self.apply_move(j, Direction::Counterclockwise),
            Direction::Counterclockwise => self.apply_move((j + k - 1) % k, Direction::Clockwise),
        }
    }

    /// Equality of the cyclic sequences up to rotation; anchors are ignored.
    pub fn rotation_eq(&self, other: &Self) -> bool {
        let k = self.k();
        k == other.k()
            && (0..k).any(|r| (0..k).all(|i| self.weights[(i + r) % k] == other.weights[i]))
    }
}

/// Consecutive clockwise gaps of `d`, starting at its smallest vertex.
pub fn weights_from_set(g: &CycleGraph, d: &VertexSet) -> Result<AdjacencyWeights> {
    if !g.dominates(d)? {
        return Err(Error::NotDominating);
    }
    if d.len() < 2 {
        return Err(Error::InvalidWeights(format!(
            "need at least two members, got {}",
            d.len()
        )));
    }
    let v = d.as_slice();
    let weights: Vec<usize> = (0..v.len())
        .map(|i| g.cw_gap(v[i], v[(i + 1) % v.len()]))
        .collect();
    AdjacencyWeights::new(weights, v[0])
}

pub fn set_from_weights(w: &AdjacencyWeights) -> (CycleGraph, VertexSet) {
    let g = w.graph();
    (g, (0..w.k()).map(|j| w.member(j)).collect())
}

/// Some cyclically adjacent pair of gaps sums to at most 3.
pub fn weights_redundant(w: &AdjacencyWeights) -> bool {
    let k = w.k();
    (0..k).any(|i| w.weights[i] + w.weights[(i + 1) % k] <= 3)
}

impl fmt::Display for AdjacencyWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "w=({})@{},n={}", ws.join(","), self.anchor, self.n())
    }
}

impl FromStr for AdjacencyWeights {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected w=(a,b,...)@anchor,n=N, got {s:?}"));
        let rest = s.trim().strip_prefix("w=(").ok_or_else(bad)?;
        let (list, rest) = rest.split_once(")@").ok_or_else(bad)?;
        let (anchor, n) = rest.split_once(",n=").ok_or_else(bad)?;
        let weights = list
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let anchor = anchor.parse::<usize>().map_err(|_| bad())?;
        let n = n.parse::<usize>().map_err(|_| bad())?;
        let w = Self::new(weights, anchor)?;
        if w.n() != n {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {}, declared n = {n}",
                w.n()
            )));
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ws: &[usize], anchor: usize) -> AdjacencyWeights {
        AdjacencyWeights::new(ws.to_vec(), anchor).unwrap()
    }

    fn c(n: usize) -> CycleGraph {
        CycleGraph::new(n).unwrap()
    }

    #[test]
    fn from_set_examples() {
        let a = weights_from_set(&c(8), &[1, 2, 4, 7].into()).unwrap();
        assert_eq!(a.weights(), &[1, 2, 3, 2]);
        assert_eq!(a.anchor(), 1);
        // the figure lists 2,1,2,3
        assert!(a.rotation_eq(&w(&[2, 1, 2, 3], 0)));
        assert_eq!(weights_from_set(&c(9), &[0, 3, 6].into()).unwrap().weights(), &[3, 3, 3]);
        assert_eq!(weights_from_set(&c(6), &[0, 2, 4].into()).unwrap().weights(), &[2, 2, 2]);
        assert!(matches!(
            weights_from_set(&c(9), &[0, 4].into()),
            Err(Error::NotDominating)
        ));
    }

    #[test]
    fn validation() {
        assert!(AdjacencyWeights::new(vec![3], 0).is_err());
        assert!(AdjacencyWeights::new(vec![4, 2], 0).is_err());
        assert!(AdjacencyWeights::new(vec![2, 2], 4).is_err());
        assert!(AdjacencyWeights::new(vec![1, 2], 0).is_ok());
    }

    #[test]
    fn redundancy_criterion() {
        assert!(weights_redundant(&w(&[1, 2, 3, 2], 0)));
        assert!(!weights_redundant(&w(&[2, 2, 2], 0)));
        assert!(!weights_redundant(&w(&[3, 3, 3], 0)));
        assert!(weights_redundant(&w(&[3, 1, 1], 0)));
    }

    #[test]
    fn moves() {
        let m = w(&[2, 2, 2], 0).apply_move(0, Direction::Clockwise).unwrap();
        assert_eq!(m.weights(), &[1, 3, 2]);
        assert_eq!(set_from_weights(&m).1, VertexSet::from([0, 1, 4]));

        let base = w(&[1, 3, 3], 0);
        assert_eq!(base.apply_move(1, Direction::Counterclockwise).unwrap().weights(), &[2, 2, 3]);
        assert_eq!(base.apply_move(2, Direction::Clockwise).unwrap().weights(), &[2, 3, 2]);

        let full = w(&[3, 3, 3], 0);
        for gap in 0..3 {
            for dir in Direction::BOTH {
                assert!(matches!(full.apply_move(gap, dir), Err(Error::IllegalMove(_))));
            }
        }
    }

    #[test]
    fn moves_through_the_anchor() {
        // member v_0 = 0 moves counterclockwise to vertex 5
        let m = w(&[2, 2, 2], 0).apply_move(2, Direction::Clockwise).unwrap();
        assert_eq!(m.anchor(), 5);
        assert_eq!(set_from_weights(&m).1, VertexSet::from([5, 2, 4]));
        // and clockwise to vertex 1
        let m = w(&[2, 2, 2], 0).apply_move(0, Direction::Counterclockwise).unwrap();
        assert_eq!(m.anchor(), 1);
        assert_eq!(set_from_weights(&m).1, VertexSet::from([1, 2, 4]));
    }

    #[test]
    fn member_moves_match_set_swaps() {
        let a = w(&[3, 2, 3, 2], 0);
        let (g, d) = set_from_weights(&a);
        for j in 0..a.k() {
            let v = a.member(j);
            assert_eq!(a.member_index(v), Some(j));
            for dir in Direction::BOTH {
                let Ok(moved) = a.move_member(j, dir) else { continue };
                let mut swapped = d.clone();
                swapped.remove(v);
                swapped.insert(g.step(v, dir));
                assert_eq!(set_from_weights(&moved).1, swapped);
            }
        }
    }

    #[test]
    fn prefix_sums() {
        assert_eq!(set_from_weights(&w(&[2, 2, 2], 0)).1, VertexSet::from([0, 2, 4]));
        assert_eq!(set_from_weights(&w(&[3, 3, 3], 0)).1, VertexSet::from([0, 3, 6]));
        let (g, d) = set_from_weights(&w(&[1, 2, 3, 2], 1));
        assert_eq!(g.n(), 8);
        assert_eq!(d, VertexSet::from([1, 2, 4, 7]));
    }

    #[test]
    fn text_form() {
        let a = w(&[2, 2, 2], 0);
        assert_eq!(a.to_string(), "w=(2,2,2)@0,n=6");
        assert_eq!("w=(2,2,2)@0,n=6".parse::<AdjacencyWeights>().unwrap(), a);
        assert!("w=(2,2,2)@0,n=7".parse::<AdjacencyWeights>().is_err());
        assert!("(2,2,2)".parse::<AdjacencyWeights>().is_err());
    }

    #[test]
    fn rotation_equality_is_not_reflection() {
        assert!(w(&[1, 2, 3], 0).rotation_eq(&w(&[3, 1, 2], 0)));
        assert!(!w(&[1, 2, 3], 0).rotation_eq(&w(&[3, 2, 1], 0)));
    }
}
