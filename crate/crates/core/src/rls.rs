//! Random Local Search with flip and swap operators.
//!
//! Per iteration the generator is consumed in this order:
//!
//! 1. operator coin (`true` selects flip);
//! 2. flip: the vertex, uniform on `0..n`;
//! 3. swap: `u` (uniform on the members, or on `0..n` in
//!    [`SwapMode::FromVertices`]), then, only if `u` is a member, the
//!    neighbour coin (`true` selects the clockwise neighbour).
//!
//! The candidate is accepted iff its scalar fitness does not exceed the
//! current one.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{CycleGraph, Direction, Solution};
use crate::Result;

/// Iterations between two trajectory summaries.
pub const SUMMARY_EVERY: u64 = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fitness {
    pub uncovered: usize,
    pub cardinality: usize,
    pub scalar: u64,
}

impl Fitness {
    pub fn new(n: usize, uncovered: usize, cardinality: usize) -> Self {
        Self {
            uncovered,
            cardinality,
            scalar: uncovered as u64 * (n as u64 + 1) + cardinality as u64,
        }
    }

    pub fn feasible(&self) -> bool {
        self.uncovered == 0
    }
}

pub fn fitness(g: &CycleGraph, y: &Solution) -> Result<Fitness> {
    Ok(Fitness::new(g.n(), g.uncovered_count(y)?, y.ones()))
}

/// Each bit independently one with probability 1/2, drawn in vertex order.
pub fn random_init<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Solution {
    Solution::from_bits((0..n).map(|_| rng.random_bool(0.5)).collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapMode {
    /// `u` uniform on `S(x)`, as in the pseudocode.
    #[default]
    FromSet,
    /// `u` uniform on `V`; a non-member `u` is a no-op.
    FromVertices,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    Flip,
    Swap,
    SwapNoop,
}

/// A proposed mutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Flip(usize),
    /// Member `from` hands its bit to the non-member neighbour `to`.
    Swap { from: usize, to: usize, direction: Direction },
    SwapNoop,
}

impl Move {
    pub fn operator(&self) -> Operator {
        match self {
            Move::Flip(_) => Operator::Flip,
            Move::Swap { .. } => Operator::Swap,
            Move::SwapNoop => Operator::SwapNoop,
        }
    }

    pub fn touched(&self) -> Vec<usize> {
        match *self {
            Move::Flip(v) => vec![v],
            Move::Swap { from, to, .. } => vec![from, to],
            Move::SwapNoop => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEvent {
    pub iteration: u64,
    pub operator: Operator,
    pub touched: Vec<usize>,
    pub accepted: bool,
    pub fitness_after: Fitness,
}

/// Incrementally maintained search state.
#[derive(Clone, Debug)]
pub struct Search {
    g: CycleGraph,
    bits: Vec<bool>,
    cover: Vec<u8>,
    uncovered: usize,
    members: Vec<usize>,
    slot: Vec<usize>,
    mode: SwapMode,
}

const ABSENT: usize = usize::MAX;

impl Search {
    pub fn new(g: CycleGraph, x: &Solution, mode: SwapMode) -> Result<Self> {
        g.uncovered_count(x)?;
        let n = g.n();
        let mut s = Self {
            g,
            bits: vec![false; n],
            cover: vec![0; n],
            uncovered: n,
            members: Vec::new(),
            slot: vec![ABSENT; n],
            mode,
        };
        for v in 0..n {
            if x.get(v) {
                s.flip(v);
            }
        }
        Ok(s)
    }

    pub fn graph(&self) -> &CycleGraph {
        &self.g
    }

    pub fn get(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }

    pub fn fitness(&self) -> Fitness {
        Fitness::new(self.g.n(), self.uncovered, self.members.len())
    }

    pub fn solution(&self) -> Solution {
        Solution::from_bits(self.bits.clone())
    }

    fn flip(&mut self, v: usize) {
        let add = !self.bits[v];
        self.bits[v] = add;
        if add {
            self.slot[v] = self.members.len();
            self.members.push(v);
        } else {
            let i = self.slot[v];
            self.members.swap_remove(i);
            if let Some(&moved) = self.members.get(i) {
                self.slot[moved] = i;
            }
            self.slot[v] = ABSENT;
        }
        for w in self.g.closed(v) {
            if add {
                if self.cover[w] == 0 {
                    self.uncovered -= 1;
                }
                self.cover[w] += 1;
            } else {
                self.cover[w] -= 1;
                if self.cover[w] == 0 {
                    self.uncovered += 1;
                }
            }
        }
    }

    fn apply(&mut self, mv: Move) {
        match mv {
            Move::Flip(v) => self.flip(v),
            Move::Swap { from, to, .. } => {
                self.flip(from);
                self.flip(to);
            }
            Move::SwapNoop => {}
        }
    }

    /// Draw a mutation without applying it.
    pub fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Move {
        let n = self.g.n();
        if rng.random_bool(0.5) {
            return Move::Flip(rng.random_range(0..n));
        }
        let u = match self.mode {
            SwapMode::FromSet => {
                if self.members.is_empty() {
                    return Move::SwapNoop;
                }
                self.members[rng.random_range(0..self.members.len())]
            }
            SwapMode::FromVertices => {
                let u = rng.random_range(0..n);
                if !self.bits[u] {
                    return Move::SwapNoop;
                }
                u
            }
        };
        let direction = if rng.random_bool(0.5) {
            Direction::Clockwise
        } else {
            Direction::Counterclockwise
        };
        let v = self.g.step(u, direction);
        if self.bits[v] {
            Move::SwapNoop
        } else {
            Move::Swap {
                from: u,
                to: v,
                direction,
            }
        }
    }

    /// Apply `mv` and keep it iff `keep(before, after)`; returns whether it was kept.
    pub fn apply_if(&mut self, mv: Move, keep: impl FnOnce(&Fitness, &Fitness) -> bool) -> bool {
        if mv == Move::SwapNoop {
            return false;
        }
        let before = self.fitness();
        self.apply(mv);
        if keep(&before, &self.fitness()) {
            true
        } else {
            // every move is an involution
            self.apply(mv);
            false
        }
    }

    /// Apply `mv` under the elitist acceptance rule.
    pub fn accept(&mut self, mv: Move) -> bool {
        self.apply_if(mv, |before, after| after.scalar <= before.scalar)
    }

    /// One iteration; `iteration` is stamped onto the event.
    pub fn step<R: Rng + ?Sized>(&mut self, iteration: u64, rng: &mut R) -> StepEvent {
        let mv = self.propose(rng);
        let accepted = self.accept(mv);
        StepEvent {
            iteration,
            operator: mv.operator(),
            touched: mv.touched(),
            accepted,
            fitness_after: self.fitness(),
        }
    }
}

/// Functional single step: returns the next state and its event.
pub fn step<R: Rng + ?Sized>(
    g: &CycleGraph,
    x: &Solution,
    mode: SwapMode,
    rng: &mut R,
) -> Result<(Solution, StepEvent)> {
    let mut s = Search::new(*g, x, mode)?;
    let ev = s.step(1, rng);
    Ok((s.solution(), ev))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stop {
    pub max_iters: u64,
    /// Stop once the state dominates with at most this many members.
    pub target_cardinality: Option<usize>,
    pub target_feasible: bool,
}

impl Stop {
    pub fn feasible(max_iters: u64) -> Self {
        Self {
            max_iters,
            target_cardinality: None,
            target_feasible: true,
        }
    }

    pub fn cardinality(k: usize, max_iters: u64) -> Self {
        Self {
            max_iters,
            target_cardinality: Some(k),
            target_feasible: false,
        }
    }

    fn reached(&self, f: &Fitness) -> bool {
        f.feasible()
            && (self.target_feasible || self.target_cardinality.is_some_and(|k| f.cardinality <= k))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventLog {
    Off,
    #[default]
    Accepted,
    Full,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub swap: SwapMode,
    pub log: EventLog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub iteration: u64,
    pub fitness: Fitness,
}

/// First iterations at which phase conditions held.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoints {
    pub first_feasible: Option<u64>,
    /// Dominating with at most `⌊n/2⌋` members.
    pub first_half: Option<u64>,
    /// Dominating with `⌈n/3⌉` members.
    pub first_optimal: Option<u64>,
    /// First iteration at which a dominating set of each size was held.
    pub levels: BTreeMap<usize, u64>,
}

impl Checkpoints {
    fn observe(&mut self, n: usize, t: u64, f: &Fitness) {
        if !f.feasible() {
            return;
        }
        self.first_feasible.get_or_insert(t);
        self.levels.entry(f.cardinality).or_insert(t);
        if f.cardinality <= n / 2 {
            self.first_half.get_or_insert(t);
        }
        if f.cardinality <= n.div_ceil(3) {
            self.first_optimal.get_or_insert(t);
        }
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        match name {
            "first_feasible" => self.first_feasible,
            "first_half" => self.first_half,
            "first_optimal" => self.first_optimal,
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: usize,
    pub seed: Option<u64>,
    pub initial: Fitness,
    pub events: Vec<StepEvent>,
    pub summaries: Vec<Summary>,
    pub checkpoints: Checkpoints,
    pub iterations: u64,
    /// The iteration cap ended the run before a target was reached.
    pub capped: bool,
    pub final_state: Solution,
    pub final_fitness: Fitness,
}

pub fn run<R: Rng + ?Sized>(
    g: &CycleGraph,
    x0: &Solution,
    stop: &Stop,
    opts: &RunOptions,
    rng: &mut R,
) -> Result<Trajectory> {
    let mut s = Search::new(*g, x0, opts.swap)?;
    let n = g.n();
    let initial = s.fitness();
    let mut checkpoints = Checkpoints::default();
    checkpoints.observe(n, 0, &initial);
    let mut events = Vec::new();
    let mut summaries = Vec::new();
    let mut t = 0;
    let mut done = stop.reached(&initial);
    while !done && t < stop.max_iters {
        t += 1;
        let ev = s.step(t, rng);
        if ev.accepted {
            checkpoints.observe(n, t, &ev.fitness_after);
            done = stop.reached(&ev.fitness_after);
        }
        if t % SUMMARY_EVERY == 0 {
            summaries.push(Summary {
                iteration: t,
                fitness: ev.fitness_after,
            });
        }
        match opts.log {
            EventLog::Full => events.push(ev),
            EventLog::Accepted if ev.accepted => events.push(ev),
            _ => {}
        }
    }
    log::debug!("n={n} finished after {t} iterations (target reached: {done})");
    Ok(Trajectory {
        n,
        seed: None,
        initial,
        events,
        summaries,
        checkpoints,
        iterations: t,
        capped: !done,
        final_state: s.solution(),
        final_fitness: s.fitness(),
    })
}

/// Random initialisation and run on the stream of `seed`.
pub fn run_seeded(g: &CycleGraph, seed: u64, stop: &Stop, opts: &RunOptions) -> Result<Trajectory> {
    let mut rng = crate::rng::stream(seed, 0);
    let x0 = random_init(g.n(), &mut rng);
    let mut traj = run(g, &x0, stop, opts, &mut rng)?;
    traj.seed = Some(seed);
    Ok(traj)
}
