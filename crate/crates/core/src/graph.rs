//! Cycle graphs and the domination vocabulary on them.
//!
//! Vertices of `C_n` are `0..n`; vertex `i` is adjacent to `i ± 1 (mod n)`.
//! The clockwise direction is `+1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[serde(rename = "cw")]
    Clockwise,
    #[serde(rename = "ccw")]
    Counterclockwise,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Clockwise, Direction::Counterclockwise];

    pub fn opposite(self) -> Self {
        match self {
            Direction::Clockwise => Direction::Counterclockwise,
            Direction::Counterclockwise => Direction::Clockwise,
        }
    }

    /// Move one step from `i` on a cycle of length `len`.
    pub fn advance(self, i: usize, len: usize) -> usize {
        match self {
            Direction::Clockwise => (i + 1) % len,
            Direction::Counterclockwise => (i + len - 1) % len,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Clockwise => "cw",
            Direction::Counterclockwise => "ccw",
        })
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(a: [usize; N]) -> Self {
        a.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Bit-vector search state; `S(y)` is the set of one bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    bits: Vec<bool>,
}

impl Solution {
    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_set(n: usize, s: &VertexSet) -> Result<Self> {
        let mut bits = vec![false; n];
        for v in s.iter() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            bits[v] = true;
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn flip(&mut self, v: usize) {
        self.bits[v] = !self.bits[v];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `|y|_1`.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `|y|_0`.
    pub fn zeros_count(&self) -> usize {
        self.len() - self.ones()
    }

    /// `S(y)`.
    pub fn support(&self) -> VertexSet {
        VertexSet(
            self.bits
                .iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i))
                .collect(),
        )
    }
}

impl FromStr for Solution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Induced path in `C_n`: `length` edges starting at `start`, going clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub start: usize,
    pub length: usize,
}

impl Arc {
    pub fn new(g: &CycleGraph, start: usize, length: usize) -> Result<Self> {
        g.check_vertex(start)?;
        if length == 0 || length >= g.n() {
            return Err(Error::InvalidState(format!(
                "arc length {length} outside 1..={}",
                g.n() - 1
            )));
        }
        Ok(Self { start, length })
    }

    /// The `length + 1` vertices of the arc in clockwise order.
    pub fn vertices(&self, g: &CycleGraph) -> impl Iterator<Item = usize> {
        let (start, n) = (self.start, g.n());
        (0..=self.length).map(move |i| (start + i) % n)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Movability {
    pub clockwise: bool,
    pub counterclockwise: bool,
    pub free: bool,
}

/// Longest arc (in edges) that can witness redundancy: four consecutive vertices.
pub const DENSE_ARC_MAX_EDGES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleGraph {
    n: usize,
}

impl CycleGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::CycleTooSmall(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    fn check_len(&self, y: &Solution) -> Result<()> {
        if y.len() == self.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.n,
                found: y.len(),
            })
        }
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        s.iter().try_for_each(|v| self.check_vertex(v))
    }

    pub fn step(&self, v: usize, dir: Direction) -> usize {
        dir.advance(v, self.n)
    }

    /// Number of clockwise steps from `u` to `v`.
    pub fn cw_gap(&self, u: usize, v: usize) -> usize {
        (v + self.n - u) % self.n
    }

    /// Hop distance in `C_n`.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        let d = self.cw_gap(u, v);
        d.min(self.n - d)
    }

    /// `N[v]` as `[v-1, v, v+1]`.
    pub fn closed(&self, v: usize) -> [usize; 3] {
        [
            self.step(v, Direction::Counterclockwise),
            v,
            self.step(v, Direction::Clockwise),
        ]
    }

    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.closed(v).into_iter().collect())
    }

    fn covered_by(&self, s: &VertexSet, w: usize) -> bool {
        self.closed(w).iter().any(|&u| s.contains(u))
    }

    /// `|{v : N[v] ∩ S(y) = ∅}|`.
    pub fn uncovered_count(&self, y: &Solution) -> Result<usize> {
        self.check_len(y)?;
        Ok((0..self.n)
            .filter(|&v| !self.closed(v).iter().any(|&u| y.get(u)))
            .count())
    }

    pub fn is_dominating(&self, y: &Solution) -> Result<bool> {
        Ok(self.uncovered_count(y)? == 0)
    }

    pub fn dominates(&self, s: &VertexSet) -> Result<bool> {
        self.check_set(s)?;
        Ok((0..self.n).all(|w| self.covered_by(s, w)))
    }

    /// `pn(v, S) = N[v] \ N[S \ {v}]`.
    pub fn private_neighborhood(&self, s: &VertexSet, v: usize) -> Result<VertexSet> {
        self.check_set(s)?;
        self.check_vertex(v)?;
        if !s.contains(v) {
            return Err(Error::NotMember(v));
        }
        Ok(self
            .closed(v)
            .into_iter()
            .filter(|&w| !self.closed(w).iter().any(|&u| u != v && s.contains(u)))
            .collect())
    }

    /// `R(S)`: members with an empty private neighbourhood.
    pub fn redundant_vertices(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        let mut out = VertexSet::new();
        for v in s.iter() {
            if self.private_neighborhood(s, v)?.is_empty() {
                out.0.push(v);
            }
        }
        Ok(out)
    }

    pub fn is_minimal_dominating(&self, s: &VertexSet) -> Result<bool> {
        if !self.dominates(s)? {
            return Err(Error::NotDominating);
        }
        Ok(self.redundant_vertices(s)?.is_empty())
    }

    /// First arc by `(start, length)` with at most [`DENSE_ARC_MAX_EDGES`]
    /// edges that contains at least three members of `s`.
    pub fn find_dense_arc(&self, s: &VertexSet) -> Result<Option<Arc>> {
        self.check_set(s)?;
        let max_len = DENSE_ARC_MAX_EDGES.min(self.n - 1);
        for start in 0..self.n {
            let mut count = usize::from(s.contains(start));
            for length in 1..=max_len {
                count += usize::from(s.contains((start + length) % self.n));
                if count >= 3 {
                    return Ok(Some(Arc { start, length }));
                }
            }
        }
        Ok(None)
    }

    /// Nearest member of `d` strictly clockwise of `v`.
    pub fn cw_member(&self, d: &VertexSet, v: usize) -> Option<usize> {
        (1..self.n)
            .map(|i| (v + i) % self.n)
            .find(|&u| d.contains(u))
    }

    /// Nearest member of `d` strictly counterclockwise of `v`.
    pub fn ccw_member(&self, d: &VertexSet, v: usize) -> Option<usize> {
        (1..self.n)
            .map(|i| (v + self.n - i) % self.n)
            .find(|&u| d.contains(u))
    }

    /// Movability of `v ∈ d`. Distances are measured along the cycle towards
    /// the clockwise and counterclockwise member neighbours.
    pub fn movability(&self, d: &VertexSet, v: usize) -> Result<Movability> {
        self.check_set(d)?;
        self.check_vertex(v)?;
        if !d.contains(v) {
            return Err(Error::NotMember(v));
        }
        if d.len() < 2 {
            return Err(Error::InvalidState(
                "movability needs at least two members".into(),
            ));
        }
        let cw = self.cw_member(d, v).expect("at least two members");
        let ccw = self.ccw_member(d, v).expect("at least two members");
        let to_cw = self.cw_gap(v, cw);
        let to_ccw = self.cw_gap(ccw, v);
        Ok(Movability {
            counterclockwise: to_cw <= 2,
            clockwise: to_ccw <= 2,
            free: to_cw + to_ccw <= 3,
        })
    }

    /// Graphviz rendering with the members of `s` filled.
    pub fn to_dot(&self, s: &VertexSet) -> String {
        let mut out = format!("graph C{} {{\n", self.n);
        for v in 0..self.n {
            if s.contains(v) {
                out.push_str(&format!("  {v} [style=filled];\n"));
            }
        }
        for v in 0..self.n {
            out.push_str(&format!("  {v} -- {};\n", (v + 1) % self.n));
        }
        out.push_str("}\n");
        out
    }
}
