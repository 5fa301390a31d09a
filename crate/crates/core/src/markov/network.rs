use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Absolute tolerance on detailed balance per state pair.
pub const REVERSIBILITY_TOL: f64 = 1e-9;

/// Row-sum tolerance of a transition matrix.
pub const STOCHASTIC_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub conductance: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn resistance(&self) -> f64 {
        1.0 / self.conductance
    }

    /// The endpoint opposite `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Connected undirected multigraph with positive conductances.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    vertices: usize,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl Network {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidNetwork("no vertices".into()));
        }
        let mut incident = vec![Vec::new(); vertices];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({}, {}) references a vertex outside 0..{vertices}",
                    e.u, e.v
                )));
            }
            if !(e.conductance.is_finite() && e.conductance > 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({}, {}) has conductance {}",
                    e.u, e.v, e.conductance
                )));
            }
            incident[e.u].push(i);
            if !e.is_loop() {
                incident[e.v].push(i);
            }
        }
        let net = Self {
            vertices,
            edges,
            incident,
        };
        if !net.connected() {
            return Err(Error::InvalidNetwork("graph is not connected".into()));
        }
        Ok(net)
    }

    /// All edges with conductance one.
    pub fn unit(vertices: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::uniform(vertices, pairs, 1.0)
    }

    pub fn uniform(
        vertices: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        conductance: f64,
    ) -> Result<Self> {
        let edges = pairs
            .into_iter()
            .map(|(u, v)| Edge { u, v, conductance })
            .collect();
        Self::new(vertices, edges)
    }

    /// Parse lines `u v conductance`; blank lines and `#` comments are skipped.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut vertices = 0;
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: {line:?}", no + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [u, v, c] = fields[..] else {
                return Err(bad("expected `u v conductance`"));
            };
            let u: usize = u.parse().map_err(|_| bad("bad vertex"))?;
            let v: usize = v.parse().map_err(|_| bad("bad vertex"))?;
            let conductance: f64 = c.parse().map_err(|_| bad("bad conductance"))?;
            vertices = vertices.max(u + 1).max(v + 1);
            edges.push(Edge { u, v, conductance });
        }
        Self::new(vertices, edges)
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &i in &self.incident[x] {
                let y = self.edges[i].other(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices == 0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Indices of edges at `x`; a loop is listed once.
    pub fn incident(&self, x: usize) -> &[usize] {
        &self.incident[x]
    }

    /// `c(x)`; a loop contributes its conductance once.
    pub fn vertex_conductance(&self, x: usize) -> f64 {
        self.incident[x]
            .iter()
            .map(|&i| self.edges[i].conductance)
            .sum()
    }

    /// `c_G = Σ_x c(x)`.
    pub fn total_conductance(&self) -> f64 {
        (0..self.vertices).map(|x| self.vertex_conductance(x)).sum()
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.vertices {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: x,
                n: self.vertices,
            })
        }
    }

    /// Every conductance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.map_conductances(|_, c| c * factor)
    }

    pub fn map_conductances(&self, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| Edge {
                conductance: f(i, e.conductance),
                ..*e
            })
            .collect();
        Self::new(self.vertices, edges)
    }

    /// Non-loop edges all share one conductance.
    pub fn is_even(&self) -> bool {
        let mut cs = self.edges.iter().filter(|e| !e.is_loop()).map(|e| e.conductance);
        match cs.next() {
            None => true,
            Some(c0) => cs.all(|c| (c - c0).abs() <= 1e-12 * c0.abs()),
        }
    }
}

/// A finite chain given by its row-stochastic transition matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    p: DMatrix<f64>,
    labels: Vec<String>,
}

impl ChainSpec {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        let labels = (0..p.nrows()).map(|i| i.to_string()).collect();
        Self::with_labels(p, labels)
    }

    pub fn with_labels(p: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        if !p.is_square() || p.nrows() == 0 {
            return Err(Error::InvalidState(format!(
                "transition matrix is {}x{}",
                p.nrows(),
                p.ncols()
            )));
        }
        if labels.len() != p.nrows() {
            return Err(Error::LengthMismatch {
                expected: p.nrows(),
                found: labels.len(),
            });
        }
        for (i, row) in p.row_iter().enumerate() {
            if row.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                return Err(Error::InvalidState(format!("row {i} has a negative entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidState(format!("row {i} sums to {sum}")));
            }
        }
        Ok(Self { p, labels })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.p.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Weighted random walk: `P(x, y) = c(x, y) / c(x)`.
pub fn walk_from_network(net: &Network) -> ChainSpec {
    let n = net.len();
    let mut p = DMatrix::zeros(n, n);
    for e in net.edges() {
        p[(e.u, e.v)] += e.conductance;
        if !e.is_loop() {
            p[(e.v, e.u)] += e.conductance;
        }
    }
    for x in 0..n {
        let cx = net.vertex_conductance(x);
        p.row_mut(x).iter_mut().for_each(|v| *v /= cx);
    }
    ChainSpec::new(p).expect("rows of a weighted walk are stochastic")
}

/// Network with `c(x, y) = π(x) P(x, y)`, loops included.
pub fn network_from_chain(chain: &ChainSpec, pi: &[f64]) -> Result<Network> {
    let p = chain.matrix();
    let n = chain.len();
    if pi.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: pi.len(),
        });
    }
    if pi.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
        return Err(Error::InvalidState("pi must be strictly positive".into()));
    }
    let mut edges = Vec::new();
    for x in 0..n {
        let loop_c = pi[x] * p[(x, x)];
        if loop_c > 0.0 {
            edges.push(Edge {
                u: x,
                v: x,
                conductance: loop_c,
            });
        }
        for y in x + 1..n {
            let fwd = pi[x] * p[(x, y)];
            let bwd = pi[y] * p[(y, x)];
            let gap = (fwd - bwd).abs();
            if gap > REVERSIBILITY_TOL {
                return Err(Error::NotReversible { x, y, gap });
            }
            if fwd > 0.0 {
                edges.push(Edge {
                    u: x,
                    v: y,
                    conductance: fwd,
                });
            }
        }
    }
    Network::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Network::unit(0, []).is_err());
        assert!(Network::unit(3, [(0, 1)]).is_err());
        assert!(Network::unit(2, [(0, 2)]).is_err());
        assert!(Network::new(2, vec![Edge { u: 0, v: 1, conductance: 0.0 }]).is_err());
        assert!(Network::unit(1, [(0, 0)]).is_ok());
        // loops do not connect anything
        assert!(Network::unit(2, [(0, 0), (1, 1)]).is_err());
    }

    #[test]
    fn vertex_conductances_count_loops_once() {
        let net = Network::unit(2, [(0, 1), (0, 0)]).unwrap();
        assert_eq!(net.vertex_conductance(0), 2.0);
        assert_eq!(net.vertex_conductance(1), 1.0);
        assert_eq!(net.total_conductance(), 3.0);
    }

    #[test]
    fn triangle_walk() {
        let p = walk_from_network(&Network::unit(3, [(0, 1), (1, 2), (2, 0)]).unwrap());
        for x in 0..3 {
            for y in 0..3 {
                let want = if x == y { 0.0 } else { 0.5 };
                assert_eq!(p.matrix()[(x, y)], want);
            }
        }
    }

    #[test]
    fn star_walk() {
        let net = Network::new(
            3,
            vec![
                Edge { u: 0, v: 1, conductance: 1.0 },
                Edge { u: 0, v: 2, conductance: 3.0 },
            ],
        )
        .unwrap();
        let p = walk_from_network(&net);
        assert_eq!(p.matrix()[(0, 1)], 0.25);
        assert_eq!(p.matrix()[(0, 2)], 0.75);
        assert_eq!(p.matrix()[(1, 0)], 1.0);
    }

    #[test]
    fn two_state_chain() {
        let chain = ChainSpec::new(DMatrix::from_row_slice(2, 2, &[0.7, 0.3, 0.3, 0.7])).unwrap();
        let net = network_from_chain(&chain, &[0.5, 0.5]).unwrap();
        let edge = net.edges().iter().find(|e| !e.is_loop()).unwrap();
        assert!((edge.conductance - 0.15).abs() < 1e-15);
        for x in 0..2 {
            assert!((net.vertex_conductance(x) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn non_reversible_cycle_rejected() {
        let chain = ChainSpec::new(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
        ))
        .unwrap();
        let third = 1.0 / 3.0;
        assert!(matches!(
            network_from_chain(&chain, &[third; 3]),
            Err(Error::NotReversible { .. })
        ));
    }

    #[test]
    fn chain_validation() {
        assert!(ChainSpec::new(DMatrix::from_row_slice(1, 2, &[0.5, 0.5])).is_err());
        assert!(ChainSpec::new(DMatrix::from_row_slice(2, 2, &[0.5, 0.4, 0.0, 1.0])).is_err());
        assert!(ChainSpec::new(DMatrix::from_row_slice(2, 2, &[1.5, -0.5, 0.0, 1.0])).is_err());
    }

    #[test]
    fn edge_list_parsing() {
        let net = Network::from_edge_list("# square\n0 1 1\n1 2 2.5\n2 3 1\n3 0 1 # closing\n\n").unwrap();
        assert_eq!(net.len(), 4);
        assert_eq!(net.edges()[1].conductance, 2.5);
        assert!(Network::from_edge_list("0 1").is_err());
        assert!(Network::from_edge_list("0 x 1").is_err());
    }
}
