#![allow(dead_code)]

use indstab::graph_matching::Graph;
use indstab::matching::Matching;
use indstab::model::{random_game, Game, GenParams, PlayerId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn pid(i: usize) -> PlayerId {
    PlayerId::new(i)
}

pub fn game(text: &str) -> Game {
    indstab::model::parse_instance(text).unwrap()
}

pub fn cyclic3() -> Game {
    game("roommate 3\n1: 2 3\n2: 3 1\n3: 1 2\n")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform-ish random matching: shuffle, then pair consecutive players with
/// probability `pair_prob`.
pub fn random_matching(n: usize, pair_prob: f64, rng: &mut ChaCha8Rng) -> Matching {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    let mut k = 0;
    while k + 1 < n {
        if rng.gen_bool(pair_prob) {
            pairs.push((PlayerId::from_index(order[k]), PlayerId::from_index(order[k + 1])));
            k += 2;
        } else {
            k += 1;
        }
    }
    Matching::from_pairs(n, &pairs).unwrap()
}

/// Random roommate or marriage game with at most `max_n` players.
pub fn random_any_game(max_n: usize, rng: &mut ChaCha8Rng) -> Game {
    let seed = rng.gen();
    let tie_probability = [0.0, 0.3, 0.6][rng.gen_range(0..3)];
    let acceptability_probability = [0.3, 0.6, 1.0][rng.gen_range(0..3)];
    let mutual = rng.gen_bool(0.2);
    let complete = rng.gen_bool(0.2);
    let base = if rng.gen_bool(0.5) {
        GenParams::roommate(rng.gen_range(1..=max_n), seed)
    } else {
        let men = rng.gen_range(0..=max_n / 2);
        let women = rng.gen_range(0..=max_n - men);
        GenParams::marriage(men, women, seed)
    };
    random_game(&GenParams {
        tie_probability,
        acceptability_probability,
        mutual,
        complete,
        ..base
    })
    .unwrap()
}

pub fn random_graph(n: usize, edge_prob: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Largest matching by trying every subset of edges.
pub fn brute_max_matching(g: &Graph) -> usize {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    fn go(edges: &[(usize, usize)], used: &mut Vec<bool>) -> usize {
        let Some((&(u, v), rest)) = edges.split_first() else {
            return 0;
        };
        let skip = go(rest, used);
        if used[u] || used[v] {
            return skip;
        }
        used[u] = true;
        used[v] = true;
        let take = 1 + go(rest, used);
        used[u] = false;
        used[v] = false;
        skip.max(take)
    }
    go(&edges, &mut vec![false; g.vertex_count()])
}

/// Every graph with at most three edges and no isolated vertices, up to
/// isomorphism, plus two graphs with isolated vertices.
pub fn small_graph_corpus() -> Vec<(&'static str, Graph)> {
    let g = |n: usize, e: &[(usize, usize)]| Graph::from_edges(n, e).unwrap();
    vec![
        ("K1", g(1, &[])),
        ("K2", g(2, &[(0, 1)])),
        ("K2+K1", g(3, &[(0, 1)])),
        ("P3", g(3, &[(0, 1), (1, 2)])),
        ("2K2", g(4, &[(0, 1), (2, 3)])),
        ("P4", g(4, &[(0, 1), (1, 2), (2, 3)])),
        ("K1,3", g(4, &[(0, 1), (0, 2), (0, 3)])),
        ("K3", g(3, &[(0, 1), (1, 2), (0, 2)])),
        ("P3+K2", g(5, &[(0, 1), (1, 2), (3, 4)])),
        ("3K2", g(6, &[(0, 1), (2, 3), (4, 5)])),
    ]
}
