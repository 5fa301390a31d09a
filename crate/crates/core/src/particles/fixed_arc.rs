//! The fixed arc process: distances of two tracked particles from a pivot.
//!
//! `x` is the counterclockwise distance from `p1` to `p2`, `y` the clockwise
//! distance from `p1` to `p3`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ParticleState;
use crate::graph::Direction;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedArcState {
    pub x: usize,
    pub y: usize,
    pub k: usize,
}

/// Which boundary of the state space a state sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcCase {
    /// All three tracked particles on distinct nodes.
    Inner,
    /// `x + y = k`: `p2` and `p3` share a node.
    KBorder,
    /// `x = 0`: `p1` and `p2` share a node.
    ZeroX,
    /// `y = 0`: `p1` and `p3` share a node.
    ZeroY,
}

/// The six possible displacements of `(x, y)`.
pub const DELTAS: [(isize, isize); 6] = [(1, -1), (-1, 1), (1, 0), (-1, 0), (0, 1), (0, -1)];

pub fn delta_class(from: &FixedArcState, to: &FixedArcState) -> Option<usize> {
    let d = (to.x as isize - from.x as isize, to.y as isize - from.y as isize);
    DELTAS.iter().position(|&e| e == d)
}

impl FixedArcState {
    pub fn new(x: usize, y: usize, k: usize) -> Result<Self> {
        let s = Self { x, y, k };
        if k < 3 {
            return Err(Error::InvalidState(format!("fixed arc process needs k ≥ 3, got {k}")));
        }
        if x + y > k || (x, y) == (0, 0) || (x, y) == (0, k) || (x, y) == (k, 0) {
            return Err(Error::InvalidState(format!("{s} is not a fixed arc state")));
        }
        Ok(s)
    }

    pub fn case(&self) -> ArcCase {
        if self.x == 0 {
            ArcCase::ZeroX
        } else if self.y == 0 {
            ArcCase::ZeroY
        } else if self.x + self.y == self.k {
            ArcCase::KBorder
        } else {
            ArcCase::Inner
        }
    }

    pub fn in_target(&self) -> bool {
        target_set(self.k).contains(&(self.x, self.y))
    }

    fn shifted(&self, dx: isize, dy: isize) -> Result<Self> {
        let bad = || Error::InvalidState(format!("{self} shifted by ({dx}, {dy}) leaves the state space"));
        let x = self.x.checked_add_signed(dx).ok_or_else(bad)?;
        let y = self.y.checked_add_signed(dy).ok_or_else(bad)?;
        Self::new(x, y, self.k).map_err(|_| bad())
    }
}

impl fmt::Display for FixedArcState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// States in which the tracked triple forms an arc with three particles on
/// two adjacent nodes.
pub fn target_set(k: usize) -> [(usize, usize); 6] {
    [(0, 1), (1, 0), (k - 1, 0), (k - 1, 1), (0, k - 1), (1, k - 1)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    P1,
    P2,
    P3,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::P1, Role::P2, Role::P3];
}

/// A move of the particle holding `role` (before relabelling).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcEvent {
    pub role: Role,
    pub direction: Direction,
}

/// Successor of `a` under `ev`, with co-located particles relabelled.
pub fn fixed_arc_step(a: &FixedArcState, ev: ArcEvent) -> Result<FixedArcState> {
    use Direction::{Clockwise as Cw, Counterclockwise as Ccw};
    use Role::*;
    let (dx, dy) = match (a.case(), ev.role, ev.direction) {
        (_, P1, Cw) if matches!(a.case(), ArcCase::Inner | ArcCase::KBorder) => (1, -1),
        (_, P1, Ccw) if matches!(a.case(), ArcCase::Inner | ArcCase::KBorder) => (-1, 1),
        (ArcCase::KBorder, P2 | P3, Cw) => (-1, 0),
        (ArcCase::KBorder, P2 | P3, Ccw) => (0, -1),
        // the mover towards p3 becomes p1, the stayer p2
        (ArcCase::ZeroX, P1 | P2, Cw) => (1, -1),
        // the mover away from p3 becomes p2
        (ArcCase::ZeroX, P1 | P2, Ccw) => (1, 0),
        // the mover towards p2 becomes p1, the stayer p3
        (ArcCase::ZeroY, P1 | P3, Ccw) => (-1, 1),
        // the mover away from p2 becomes p3
        (ArcCase::ZeroY, P1 | P3, Cw) => (0, 1),
        (_, P2, Ccw) => (1, 0),
        (_, P2, Cw) => (-1, 0),
        (_, P3, Cw) => (0, 1),
        (_, P3, Ccw) => (0, -1),
        (_, P1, _) => unreachable!("p1 on a zero border is handled above"),
    };
    a.shifted(dx, dy)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub moves: Vec<(FixedArcState, f64)>,
    pub self_loop: f64,
}

/// Distinct successors of `a`, each reached with probability `per_move`; the
/// remaining mass stays put.
pub fn fixed_arc_neighborhood(a: &FixedArcState, per_move: f64) -> Result<Neighborhood> {
    FixedArcState::new(a.x, a.y, a.k)?;
    let mut next: Vec<FixedArcState> = Role::ALL
        .into_iter()
        .flat_map(|role| Direction::BOTH.map(|direction| ArcEvent { role, direction }))
        .filter_map(|ev| fixed_arc_step(a, ev).ok())
        .collect();
    next.sort();
    next.dedup();
    let self_loop = 1.0 - per_move * next.len() as f64;
    if !(0.0..=1.0).contains(&per_move) || self_loop < 0.0 {
        return Err(Error::InvalidState(format!(
            "move probability {per_move} leaves no valid self-loop"
        )));
    }
    Ok(Neighborhood {
        moves: next.into_iter().map(|s| (s, per_move)).collect(),
        self_loop,
    })
}

/// Follows the tracked triple through an adjacency particle sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedArcTracker {
    labels: [usize; 3],
    state: FixedArcState,
}

impl FixedArcTracker {
    /// Tracks `triple`; `p1` is the smallest id whose two partners sit on
    /// different nodes. A partner sharing `p1`'s node becomes `p2`.
    pub fn new(s: &ParticleState, triple: [usize; 3]) -> Result<Self> {
        if triple.iter().any(|&p| p >= s.len()) {
            return Err(Error::InvalidState(format!("triple {triple:?} references a missing particle")));
        }
        let mut sorted = triple;
        sorted.sort_unstable();
        if sorted[0] == sorted[1] || sorted[1] == sorted[2] {
            return Err(Error::InvalidState(format!("triple {triple:?} repeats a particle")));
        }
        let pos = s.positions();
        let p1 = sorted
            .into_iter()
            .find(|&p| {
                let others: Vec<usize> = sorted.into_iter().filter(|&q| q != p).collect();
                pos[others[0]] != pos[others[1]]
            })
            .expect("at most two particles share a node");
        let others: Vec<usize> = sorted.into_iter().filter(|&q| q != p1).collect();
        let ccw = |q: usize| s.ccw_distance(pos[p1], pos[q]);
        let (p2, p3) = if pos[others[0]] == pos[p1] {
            (others[0], others[1])
        } else if pos[others[1]] == pos[p1] || ccw(others[1]) < ccw(others[0]) {
            (others[1], others[0])
        } else {
            (others[0], others[1])
        };
        let labels = [p1, p2, p3];
        let state = Self::measure(s, labels)?;
        Ok(Self { labels, state })
    }

    /// Tracks explicit labels `[p1, p2, p3]`.
    pub fn with_labels(s: &ParticleState, labels: [usize; 3]) -> Result<Self> {
        if labels.iter().any(|&p| p >= s.len()) {
            return Err(Error::InvalidState(format!("labels {labels:?} reference a missing particle")));
        }
        let state = Self::measure(s, labels)?;
        Ok(Self { labels, state })
    }

    fn measure(s: &ParticleState, [p1, p2, p3]: [usize; 3]) -> Result<FixedArcState> {
        let pos = s.positions();
        FixedArcState::new(
            s.ccw_distance(pos[p1], pos[p2]),
            s.cw_distance(pos[p1], pos[p3]),
            s.k(),
        )
    }

    pub fn state(&self) -> FixedArcState {
        self.state
    }

    /// Particle ids labelled `p1`, `p2`, `p3`.
    pub fn labels(&self) -> [usize; 3] {
        self.labels
    }

    /// Update after particle `mover` moved one node in `dir`, taking `before`
    /// to `after`. Returns the event seen by the tracked triple, if any.
    ///
    /// The new state is derived twice, from the transition rules and from
    /// the particle positions, and the two must agree.
    pub fn observe(
        &mut self,
        before: &ParticleState,
        after: &ParticleState,
        mover: usize,
        dir: Direction,
    ) -> Result<Option<ArcEvent>> {
        let pos = before.positions();
        let role = match self.labels.iter().position(|&p| p == mover) {
            Some(r) => r,
            None => {
                let shared: Vec<usize> = (0..3).filter(|&r| pos[self.labels[r]] == pos[mover]).collect();
                match shared[..] {
                    [] => return Ok(None),
                    [r] => {
                        self.labels[r] = mover;
                        r
                    }
                    _ => return Err(Error::InvalidState("three particles share a node".into())),
                }
            }
        };
        let ev = ArcEvent {
            role: Role::ALL[role],
            direction: dir,
        };
        let expected = fixed_arc_step(&self.state, ev)?;

        let labels = self.labels;
        let [a, b, c] = labels.map(|p| pos[p]);
        let other = |r: usize| labels[r];
        match (role, dir) {
            (1 | 2, _) if b == c && a != b => {
                let stayer = other(3 - role);
                self.labels[1..].copy_from_slice(&match dir {
                    Direction::Clockwise => [mover, stayer],
                    Direction::Counterclockwise => [stayer, mover],
                });
            }
            (0 | 1, _) if a == b => {
                let stayer = other(1 - role);
                let [p1, p2] = match dir {
                    Direction::Clockwise => [mover, stayer],
                    Direction::Counterclockwise => [stayer, mover],
                };
                self.labels[0] = p1;
                self.labels[1] = p2;
            }
            (0 | 2, _) if a == c => {
                let stayer = other(2 - role);
                let [p1, p3] = match dir {
                    Direction::Counterclockwise => [mover, stayer],
                    Direction::Clockwise => [stayer, mover],
                };
                self.labels[0] = p1;
                self.labels[2] = p3;
            }
            _ => {}
        }
        let measured = Self::measure(after, self.labels)?;
        if measured != expected {
            return Err(Error::InvalidState(format!(
                "tracker drift: rules give {expected}, positions give {measured}"
            )));
        }
        self.state = expected;
        Ok(Some(ev))
    }
}
