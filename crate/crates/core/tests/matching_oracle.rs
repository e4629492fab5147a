use hiersurf::matching::{matching_weight, min_weight_perfect_matching, WeightedEdge};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exhaustive minimum over all perfect matchings of a complete weight table.
fn brute_force(n: usize, w: &[Vec<Option<i64>>]) -> Option<i64> {
    fn go(free: &mut Vec<usize>, w: &[Vec<Option<i64>>]) -> Option<i64> {
        if free.is_empty() {
            return Some(0);
        }
        let a = free.remove(0);
        let mut best: Option<i64> = None;
        for i in 0..free.len() {
            let b = free.remove(i);
            if let Some(wab) = w[a][b] {
                if let Some(rest) = go(free, w) {
                    let total = wab + rest;
                    best = Some(best.map_or(total, |x: i64| x.min(total)));
                }
            }
            free.insert(i, b);
        }
        free.insert(0, a);
        best
    }
    let mut free: Vec<usize> = (0..n).collect();
    go(&mut free, w)
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize, density: f64) -> (Vec<WeightedEdge>, Vec<Vec<Option<i64>>>) {
    let mut edges = Vec::new();
    let mut table = vec![vec![None; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < density {
                let w = rng.gen_range(0..50);
                edges.push((a, b, w));
                table[a][b] = Some(w);
                table[b][a] = Some(w);
            }
        }
    }
    (edges, table)
}

#[test]
fn eight_node_instances_match_exhaustive_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (edges, table) = random_instance(&mut rng, 8, 1.0);
        let pairs = min_weight_perfect_matching(8, &edges).unwrap();
        assert_eq!(matching_weight(&edges, &pairs), brute_force(8, &table));
    }
}

#[test]
fn sparse_instances_agree_on_feasibility_and_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..500 {
        let n = 2 * rng.gen_range(1..6);
        let (edges, table) = random_instance(&mut rng, n, 0.45);
        let expect = brute_force(n, &table);
        match min_weight_perfect_matching(n, &edges) {
            Ok(pairs) => {
                assert_eq!(pairs.len(), n / 2);
                assert_eq!(matching_weight(&edges, &pairs), expect);
            }
            Err(_) => assert_eq!(expect, None),
        }
    }
}
