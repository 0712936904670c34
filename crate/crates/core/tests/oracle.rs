mod common;

use common::*;
use saw_core::{
    builtin, count_bridges, count_k_extendable, count_saws, count_saws_two_point, mean_square_displacement, EnumOptions,
    GraphOracle,
};

fn opts() -> EnumOptions {
    EnumOptions::default().with_workers(2)
}

const N: usize = 8;

// Frozen reference counts σ_1.. produced by the naive enumerator.
const SQUARE: &[u64] = &[4, 12, 36, 100, 284, 780, 2172, 5916, 16268, 44100, 120292, 324932];
const HONEYCOMB: &[u64] = &[3, 6, 12, 24, 48, 90, 174, 336, 648, 1218, 2328, 4416];
const TRIANGULAR: &[u64] = &[6, 30, 138, 618, 2730, 11946, 51882, 224130];
const CUBIC: &[u64] = &[6, 30, 150, 726, 3534, 16926, 81390];
const SQUARE_BRIDGES: &[u64] = &[1, 3, 7, 17, 41, 101, 251, 631, 1591, 4029];

fn with_zero(v: &[u64]) -> Vec<u64> {
    std::iter::once(1).chain(v.iter().copied()).collect()
}

#[test]
fn frozen_series_match_naive() {
    for (name, want) in [("zd2", SQUARE), ("hexagonal", HONEYCOMB), ("triangular", TRIANGULAR), ("zd3", CUBIC)] {
        let g = builtin(name).unwrap();
        let n = want.len().min(9);
        let naive = naive_saws(&g, n);
        assert_eq!(big(&naive), big_u64(&with_zero(&want[..n])), "{}", name);
        let fast = count_saws(&g, want.len(), &opts()).unwrap();
        assert_eq!(fast.counts, big_u64(&with_zero(want)), "{}", name);
    }
    let g = builtin("zd2").unwrap();
    let p = g.as_periodic().unwrap();
    let mut want = vec![0u64];
    want.extend_from_slice(SQUARE_BRIDGES);
    assert_eq!(big(&naive_bridges(p, 0, 10)), big_u64(&want));
    assert_eq!(count_bridges(&g, 0, 10, &opts()).unwrap().counts, big_u64(&want));
}

#[test]
fn walk_counts_agree_on_every_builtin() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        let naive = naive_saws(&g, N);
        let fast = count_saws(&g, N, &opts()).unwrap();
        assert_eq!(fast.counts, big(&naive), "{}", name);
        for r in g.representatives() {
            let naive = naive_counts(&g, &r, N).counts;
            let fast = saw_core::count_saws_from(&g, &r, N, &opts()).unwrap();
            assert_eq!(fast.counts, big(&naive), "{} from {}", name, r);
        }
    }
}

#[test]
fn two_point_counts_agree() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        let n = 6;
        let naive = naive_counts(&g, &g.root(), n);
        let mut targets: Vec<_> = naive.ends.keys().cloned().collect();
        targets.sort();
        for w in targets.iter().step_by(targets.len() / 5 + 1) {
            let fast = count_saws_two_point(&g, w, n, &opts()).unwrap();
            assert_eq!(fast.counts, big(&naive.ends[w]), "{} -> {}", name, w);
        }
    }
}

#[test]
fn bridges_agree() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        let Some(p) = g.as_periodic() else { continue };
        for axis in 0..p.dim() {
            let naive = naive_bridges(p, axis, N);
            let fast = count_bridges(&g, axis, N, &opts()).unwrap();
            assert_eq!(fast.counts, big(&naive), "{} axis {}", name, axis);
        }
    }
}

#[test]
fn extendable_counts_agree() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        for k in [0, 1, 3] {
            let naive = naive_extendable(&g, 6, k);
            let fast = count_k_extendable(&g, 6, k, &opts()).unwrap();
            assert_eq!(fast.counts, big(&naive), "{} k={}", name, k);
        }
    }
}

#[test]
fn displacement_sums_agree() {
    for name in BUILTINS {
        let g = builtin(name).unwrap();
        let naive = naive_squared_distance_sums(&g, 7);
        let fast = mean_square_displacement(&g, 7, &opts()).unwrap();
        assert_eq!(fast.squared_distance_sums, big(&naive), "{}", name);
        assert_eq!(fast.counts, big(&naive_saws(&g, 7)), "{}", name);
    }
}

#[test]
fn fallback_walker_agrees_with_naive() {
    let mut o = opts();
    o.max_ball_vertices = 8;
    for name in ["zd2", "ladder", "cubic_tree", "bridge3"] {
        let g = builtin(name).unwrap();
        let fast = count_saws(&g, 7, &o).unwrap();
        assert_eq!(fast.counts, big(&naive_saws(&g, 7)), "{}", name);
        let ext = count_k_extendable(&g, 5, 2, &o).unwrap();
        assert_eq!(ext.counts, big(&naive_extendable(&g, 5, 2)), "{}", name);
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let g = builtin("triangular").unwrap();
    let one = count_saws(&g, 7, &EnumOptions::default().with_workers(1)).unwrap();
    for w in [2, 3, 8] {
        let mut o = EnumOptions::default().with_workers(w);
        for depth in [1, 3, 6] {
            o.split_depth = depth;
            assert_eq!(count_saws(&g, 7, &o).unwrap().counts, one.counts);
        }
    }
}
