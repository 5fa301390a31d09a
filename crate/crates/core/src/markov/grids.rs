//! Triangle and square grid networks.

use super::network::Network;
use crate::{Error, Result};

/// Lattice point `(x, y)`.
pub type Point = (usize, usize);

/// Unit steps and same-diagonal steps of the triangle grid.
pub const TRIANGLE_STEPS: [(isize, isize); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// `χ_n = (n+1)(n+2)/2`.
pub fn chi(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidNetwork("grid size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Points of `T_n` ordered by `x`, then `y`.
pub fn triangle_points(n: usize) -> Vec<Point> {
    (0..=n).flat_map(|x| (0..=n - x).map(move |y| (x, y))).collect()
}

/// Position of `p` in [`triangle_points`].
pub fn triangle_index(n: usize, (x, y): Point) -> Option<usize> {
    (x + y <= n).then(|| x * (n + 1) - x * x.saturating_sub(1) / 2 + y)
}

pub fn triangle_step(n: usize, (x, y): Point, (dx, dy): (isize, isize)) -> Option<Point> {
    let nx = x.checked_add_signed(dx)?;
    let ny = y.checked_add_signed(dy)?;
    (nx + ny <= n).then_some((nx, ny))
}

/// Unit-conductance `T_n`; vertex ids follow [`triangle_points`].
pub fn triangle_grid(n: usize) -> Result<Network> {
    triangle_grid_with(n, 1.0)
}

/// `T_n` as an even network with the given conductance.
pub fn triangle_grid_with(n: usize, conductance: f64) -> Result<Network> {
    check_size(n)?;
    let mut pairs = Vec::new();
    for p in triangle_points(n) {
        let i = triangle_index(n, p).expect("point of T_n");
        // each undirected edge once, from its endpoint with the larger x or y
        for d in [(1, 0), (0, 1), (1, -1)] {
            if let Some(q) = triangle_step(n, p, d) {
                pairs.push((i, triangle_index(n, q).expect("point of T_n")));
            }
        }
    }
    Network::uniform(chi(n), pairs, conductance)
}

/// Unit-conductance `n × n` lattice `B_n`; vertex `(z, w)` has id `z·n + w`.
pub fn square_grid(n: usize) -> Result<Network> {
    check_size(n)?;
    let mut pairs = Vec::new();
    for z in 0..n {
        for w in 0..n {
            let i = z * n + w;
            if z + 1 < n {
                pairs.push((i, i + n));
            }
            if w + 1 < n {
                pairs.push((i, i + 1));
            }
        }
    }
    Network::unit(n * n, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_values() {
        assert_eq!(chi(1), 3);
        assert_eq!(chi(4), 15);
        assert_eq!(triangle_grid(4).unwrap().len(), 15);
        assert!(triangle_grid(0).is_err());
    }

    #[test]
    fn triangle_index_is_position() {
        for n in 1..8 {
            for (i, &p) in triangle_points(n).iter().enumerate() {
                assert_eq!(triangle_index(n, p), Some(i));
            }
            assert_eq!(triangle_index(n, (n, 1)), None);
        }
    }

    #[test]
    fn triangle_degrees() {
        let net = triangle_grid(4).unwrap();
        let deg = |p| net.incident(triangle_index(4, p).unwrap()).len();
        assert_eq!(deg((0, 0)), 2);
        assert_eq!(deg((4, 0)), 2);
        assert_eq!(deg((0, 4)), 2);
        assert_eq!(deg((1, 1)), 6);
        assert_eq!(deg((2, 0)), 4);
        assert_eq!(net.edges().len(), 3 * 4 * 5 / 2);
    }

    #[test]
    fn square_grid_shape() {
        let net = square_grid(3).unwrap();
        assert_eq!(net.len(), 9);
        assert_eq!(net.incident(0).len(), 2);
        assert_eq!(net.incident(4).len(), 4);
        assert_eq!(net.edges().len(), 12);
    }
}
