use nalgebra::{DMatrix, DVector};

use super::network::Network;
use crate::{Error, Result};

/// Edge flow; entry `i` is the value on edge `i` oriented from `u` to `v`.
///
/// The reverse orientation carries the negated value, so antisymmetry holds by
/// construction. Loops must carry zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Flow {
    values: Vec<f64>,
}

impl Flow {
    pub fn new(net: &Network, values: Vec<f64>) -> Result<Self> {
        if values.len() != net.edges().len() {
            return Err(Error::LengthMismatch {
                expected: net.edges().len(),
                found: values.len(),
            });
        }
        if net.edges().iter().zip(&values).any(|(e, &v)| e.is_loop() && v != 0.0) {
            return Err(Error::InvalidState("flow on a loop must be zero".into()));
        }
        Ok(Self { values })
    }

    pub fn zero(net: &Network) -> Self {
        Self {
            values: vec![0.0; net.edges().len()],
        }
    }

    /// Unit flow along a vertex path, using the first edge joining each step.
    pub fn along_path(net: &Network, path: &[usize]) -> Result<Self> {
        let mut f = Self::zero(net);
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let i = net
                .incident(a)
                .iter()
                .copied()
                .find(|&i| {
                    let e = net.edges()[i];
                    !e.is_loop() && e.other(a) == b
                })
                .ok_or_else(|| Error::InvalidState(format!("no edge between {a} and {b}")))?;
            f.values[i] += if net.edges()[i].u == a { 1.0 } else { -1.0 };
        }
        Ok(f)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `div θ(x) = Σ_y θ(xy)`.
    pub fn divergence(&self, net: &Network) -> Vec<f64> {
        let mut div = vec![0.0; net.len()];
        for (e, &v) in net.edges().iter().zip(&self.values) {
            div[e.u] += v;
            div[e.v] -= v;
        }
        div
    }

    /// Divergence 1 at `s`, −1 at `t`, 0 elsewhere, within `tol`.
    pub fn is_unit_flow(&self, net: &Network, s: usize, t: usize, tol: f64) -> bool {
        self.divergence(net).iter().enumerate().all(|(x, &d)| {
            let want = if x == s && s != t {
                1.0
            } else if x == t && s != t {
                -1.0
            } else {
                0.0
            };
            (d - want).abs() <= tol
        })
    }
}

/// `Σ_e θ(e)² r(e)` over undirected edges.
pub fn flow_energy(net: &Network, f: &Flow) -> f64 {
    net.edges()
        .iter()
        .zip(f.values())
        .map(|(e, &v)| v * v * e.resistance())
        .sum()
}

/// Minimum energy over unit flows from `s` to `t`.
///
/// Unit flows form the affine space `θ0 + span(cycles)`, with `θ0` routed
/// along a spanning tree and one fundamental cycle per non-tree edge. The
/// energy is a positive definite quadratic in the cycle coordinates and is
/// minimised through its normal equations. This never touches the Laplacian,
/// so it serves as an independent check of the potential solve.
pub fn thomson_minimum(net: &Network, s: usize, t: usize) -> Result<(f64, Flow)> {
    net.check_vertex(s)?;
    net.check_vertex(t)?;
    let m = net.edges().len();
    if s == t {
        return Ok((0.0, Flow::zero(net)));
    }
    // BFS tree from s, with `to_root[x]` the unit flow from s to x along it.
    let mut to_root: Vec<Option<DVector<f64>>> = vec![None; net.len()];
    let mut tree_edge = vec![false; m];
    to_root[s] = Some(DVector::zeros(m));
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &i in net.incident(x) {
            let e = net.edges()[i];
            let y = e.other(x);
            if e.is_loop() || to_root[y].is_some() {
                continue;
            }
            let mut p = to_root[x].clone().expect("visited");
            p[i] += if e.u == x { 1.0 } else { -1.0 };
            to_root[y] = Some(p);
            tree_edge[i] = true;
            queue.push_back(y);
        }
    }
    let path = |x: usize| to_root[x].as_ref().expect("network is connected");
    let theta0 = path(t).clone();

    let cycles: Vec<DVector<f64>> = net
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, e)| !tree_edge[*i] && !e.is_loop())
        .map(|(i, e)| {
            let mut c = path(e.u) - path(e.v);
            c[i] += 1.0;
            c
        })
        .collect();

    let r = DVector::from_iterator(m, net.edges().iter().map(|e| e.resistance()));
    let theta = if cycles.is_empty() {
        theta0
    } else {
        let c = DMatrix::from_columns(&cycles);
        let rc = DMatrix::from_diagonal(&r) * &c;
        let normal = c.transpose() * &rc;
        let rhs = -(rc.transpose() * &theta0);
        let z = normal
            .cholesky()
            .ok_or_else(|| Error::Singular("cycle-space normal equations".into()))?
            .solve(&rhs);
        theta0 + c * z
    };
    let flow = Flow::new(net, theta.iter().copied().collect())?;
    Ok((flow_energy(net, &flow), flow))
}
