use cyclerls::adjacency::{set_from_weights, weights_from_set, weights_redundant};
use cyclerls::markov::network::{network_from_chain, walk_from_network, Edge};
use cyclerls::markov::{effective_resistance, Network};
use cyclerls::oracle::mask_dominates;
use cyclerls::particles::{
    fixed_arc_neighborhood, particle_step, particles_from_weights, particles_redundant, source_gap, FixedArcState,
};
use cyclerls::rls::{fitness, run, EventLog, RunOptions, Stop, SwapMode};
use cyclerls::{rng, AdjacencyWeights, CycleGraph, Direction, Solution, VertexSet};
use proptest::prelude::*;

/// A dominating set of some `C_n`, `5 ≤ n ≤ 40`.
fn dominating() -> impl Strategy<Value = (CycleGraph, VertexSet)> {
    (5usize..=40)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n)))
        .prop_map(|(n, bits)| {
            let g = CycleGraph::new(n).unwrap();
            let mut d: VertexSet = bits.iter().enumerate().filter(|b| *b.1).map(|b| b.0).collect();
            // patch coverage gaps greedily
            for v in 0..n {
                if !g.closed(v).iter().any(|&u| d.contains(u)) {
                    d.insert(g.step(v, Direction::Clockwise));
                }
            }
            if d.len() < 2 {
                d.insert((d.as_slice()[0] + n / 2) % n);
            }
            (g, d)
        })
}

fn weights() -> impl Strategy<Value = AdjacencyWeights> {
    proptest::collection::vec(1usize..=3, 3..=16)
        .prop_filter("cycle needs n ≥ 3", |w| w.iter().sum::<usize>() >= 3)
        .prop_map(|w| AdjacencyWeights::new(w, 0).unwrap())
}

fn dir(cw: bool) -> Direction {
    if cw {
        Direction::Clockwise
    } else {
        Direction::Counterclockwise
    }
}

proptest! {
    #[test]
    fn domination_is_superhereditary(n in 3usize..=40, a in any::<u64>(), b in any::<u64>()) {
        let full = (1u64 << n) - 1;
        let (a, b) = (a & full, b & full);
        if mask_dominates(n, a) {
            prop_assert!(mask_dominates(n, a | b));
        }
    }

    #[test]
    fn weights_round_trip((g, d) in dominating()) {
        let w = weights_from_set(&g, &d).unwrap();
        prop_assert_eq!(w.n(), g.n());
        prop_assert_eq!(set_from_weights(&w).1, d.clone());
        let text = w.to_string();
        prop_assert_eq!(text.parse::<AdjacencyWeights>().unwrap(), w);
        let s = Solution::from_set(g.n(), &d).unwrap();
        prop_assert_eq!(s.to_string().parse::<Solution>().unwrap(), s);
    }

    #[test]
    fn redundancy_criteria_agree((g, d) in dominating()) {
        let w = weights_from_set(&g, &d).unwrap();
        let redundant = !g.redundant_vertices(&d).unwrap().is_empty();
        prop_assert_eq!(weights_redundant(&w), redundant);
        prop_assert_eq!(particles_redundant(&particles_from_weights(&w)), redundant);
        prop_assert_eq!(g.find_dense_arc(&d).unwrap().is_some(), redundant);
    }

    #[test]
    fn member_moves_commute_with_swaps((g, d) in dominating(), pick in any::<usize>(), cw in any::<bool>()) {
        let w = weights_from_set(&g, &d).unwrap();
        let j = pick % w.k();
        let v = w.member(j);
        let to = g.step(v, dir(cw));
        let mut swapped = d.clone();
        swapped.remove(v);
        let legal = swapped.insert(to) && g.dominates(&swapped).unwrap();
        match w.move_member(j, dir(cw)) {
            Ok(moved) => {
                prop_assert!(legal);
                prop_assert_eq!(set_from_weights(&moved).1, swapped);
            }
            Err(_) => prop_assert!(!legal),
        }
    }

    #[test]
    fn particles_are_conserved(w in weights(), moves in proptest::collection::vec((any::<usize>(), any::<bool>(), any::<bool>()), 0..60)) {
        let mut w = w;
        let mut s = particles_from_weights(&w);
        let count = s.len();
        for (pick, cw, coin) in moves {
            let j = pick % w.k();
            let Ok(next) = w.move_member(j, dir(cw)) else { continue };
            let (t, _) = particle_step(&s, source_gap(w.k(), j, dir(cw)), dir(cw), coin).unwrap();
            w = next;
            s = t;
            prop_assert_eq!(s.len(), count);
            prop_assert!(s.matches(&w));
        }
    }

    #[test]
    fn accepted_fitness_never_worsens(n in 3usize..=60, seed in any::<u64>(), vertices in any::<bool>()) {
        let g = CycleGraph::new(n).unwrap();
        let opts = RunOptions {
            swap: if vertices { SwapMode::FromVertices } else { SwapMode::FromSet },
            log: EventLog::Full,
        };
        let mut r = rng::stream(seed, 0);
        let x0 = Solution::zeros(n);
        let t = run(&g, &x0, &Stop::cardinality(n.div_ceil(3), 3_000), &opts, &mut r).unwrap();
        let mut last = t.initial.scalar;
        for ev in &t.events {
            prop_assert!(ev.fitness_after.scalar <= last);
            last = ev.fitness_after.scalar;
        }
        prop_assert_eq!(fitness(&g, &t.final_state).unwrap(), t.final_fitness);
    }

    #[test]
    fn fixed_arc_mass_is_one(k in 3usize..=30, x in 0usize..=30, y in 0usize..=30) {
        let Ok(a) = FixedArcState::new(x, y, k) else { return Ok(()) };
        let p = 1.0 / (4 * k) as f64;
        let nb = fixed_arc_neighborhood(&a, p).unwrap();
        let total: f64 = nb.moves.iter().map(|m| m.1).sum::<f64>() + nb.self_loop;
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(nb.moves.len() <= 6);
        prop_assert!(nb.moves.iter().all(|(s, _)| s.x + s.y <= k));
    }
}

/// Connected network on `v` vertices: a random spanning tree plus extra edges.
fn network() -> impl Strategy<Value = Network> {
    (2usize..=9)
        .prop_flat_map(|v| {
            (
                Just(v),
                proptest::collection::vec((any::<usize>(), 0.1f64..10.0), v - 1),
                proptest::collection::vec((any::<usize>(), any::<usize>(), 0.1f64..10.0), 0..8),
            )
        })
        .prop_map(|(v, tree, extra)| {
            let mut edges: Vec<Edge> = tree
                .iter()
                .enumerate()
                .map(|(i, &(p, c))| Edge { u: p % (i + 1), v: i + 1, conductance: c })
                .collect();
            edges.extend(extra.iter().map(|&(a, b, c)| Edge { u: a % v, v: b % v, conductance: c }));
            Network::new(v, edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resistance_is_a_metric(net in network(), a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let n = net.len();
        let (a, b, c) = (a % n, b % n, c % n);
        let ab = effective_resistance(&net, a, b).unwrap();
        let bc = effective_resistance(&net, b, c).unwrap();
        let ac = effective_resistance(&net, a, c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9 * (1.0 + ab + bc));
        prop_assert!((ab - effective_resistance(&net, b, a).unwrap()).abs() <= 1e-10 * (1.0 + ab));
    }

    #[test]
    fn detailed_balance_round_trip(net in network()) {
        let p = walk_from_network(&net);
        let total: f64 = (0..net.len()).map(|x| net.vertex_conductance(x)).sum();
        let pi: Vec<f64> = (0..net.len()).map(|x| net.vertex_conductance(x) / total).collect();
        let back = walk_from_network(&network_from_chain(&p, &pi).unwrap());
        let diff = (p.matrix() - back.matrix()).abs().max();
        prop_assert!(diff <= 1e-12, "max entry difference {diff:e}");
    }
}
