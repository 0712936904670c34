//! Naive reference enumerator. Uses only `GraphOracle::neighbors`, a hash
//! set of visited vertices and plain recursion, so it shares no code with the
//! ball/CSR search engine.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use saw_core::{GraphOracle, PeriodicGraph, VertexKey};

pub struct Naive {
    pub counts: Vec<u128>,
    pub ends: HashMap<VertexKey, Vec<u128>>,
}

fn walk<G: GraphOracle + ?Sized>(
    g: &G,
    path: &mut Vec<VertexKey>,
    seen: &mut HashSet<VertexKey>,
    weight: u128,
    n_max: usize,
    visit: &mut dyn FnMut(&[VertexKey], u128),
) {
    visit(path, weight);
    if path.len() > n_max {
        return;
    }
    let here = path.last().unwrap().clone();
    for nb in g.neighbors(&here) {
        if seen.contains(&nb.key) {
            continue;
        }
        seen.insert(nb.key.clone());
        path.push(nb.key.clone());
        walk(g, path, seen, weight * nb.multiplicity as u128, n_max, visit);
        path.pop();
        seen.remove(&nb.key);
    }
}

/// Calls `visit(path, weight)` for every self-avoiding walk of length
/// 0..=n_max from `start`; `weight` is the product of edge multiplicities.
pub fn for_each_walk<G: GraphOracle + ?Sized>(
    g: &G,
    start: &VertexKey,
    n_max: usize,
    visit: &mut dyn FnMut(&[VertexKey], u128),
) {
    let mut path = vec![start.clone()];
    let mut seen = HashSet::from([start.clone()]);
    walk(g, &mut path, &mut seen, 1, n_max, visit);
}

pub fn naive_counts<G: GraphOracle + ?Sized>(g: &G, start: &VertexKey, n_max: usize) -> Naive {
    let mut counts = vec![0u128; n_max + 1];
    let mut ends: HashMap<VertexKey, Vec<u128>> = HashMap::new();
    for_each_walk(g, start, n_max, &mut |p, w| {
        let n = p.len() - 1;
        counts[n] += w;
        ends.entry(p[n].clone()).or_insert_with(|| vec![0; n_max + 1])[n] += w;
    });
    Naive { counts, ends }
}

pub fn naive_saws<G: GraphOracle + ?Sized>(g: &G, n_max: usize) -> Vec<u128> {
    naive_counts(g, &g.root(), n_max).counts
}

/// Walks of length n that extend to some self-avoiding walk of length n + k.
pub fn naive_extendable<G: GraphOracle + ?Sized>(g: &G, n_max: usize, k: usize) -> Vec<u128> {
    let mut out = vec![0u128; n_max + 1];
    for_each_walk(g, &g.root(), n_max, &mut |p, w| {
        let mut seen: HashSet<VertexKey> = p.iter().cloned().collect();
        if extends(g, p.last().unwrap(), &mut seen, k) {
            out[p.len() - 1] += w;
        }
    });
    out
}

fn extends<G: GraphOracle + ?Sized>(g: &G, v: &VertexKey, seen: &mut HashSet<VertexKey>, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    for nb in g.neighbors(v) {
        if seen.insert(nb.key.clone()) {
            let ok = extends(g, &nb.key, seen, k - 1);
            seen.remove(&nb.key);
            if ok {
                return true;
            }
        }
    }
    false
}

pub fn naive_bridges(p: &PeriodicGraph, axis: usize, n_max: usize) -> Vec<u128> {
    let root = p.root();
    let h0 = p.height(&root, axis);
    let mut out = vec![0u128; n_max + 1];
    for_each_walk(p, &root, n_max, &mut |path, w| {
        let n = path.len() - 1;
        if n == 0 || path[n].cell() != root.cell() {
            return;
        }
        let hn = p.height(&path[n], axis);
        if path[1..].iter().all(|v| {
            let h = p.height(v, axis);
            h > h0 && h <= hn
        }) {
            out[n] += w;
        }
    });
    out
}

/// Graph distances from `start` out to `radius`, by breadth-first search.
pub fn distances<G: GraphOracle + ?Sized>(g: &G, start: &VertexKey, radius: usize) -> HashMap<VertexKey, usize> {
    let mut d = HashMap::from([(start.clone(), 0usize)]);
    let mut q = VecDeque::from([start.clone()]);
    while let Some(v) = q.pop_front() {
        let dv = d[&v];
        if dv == radius {
            continue;
        }
        for nb in g.neighbors(&v) {
            if !d.contains_key(&nb.key) {
                d.insert(nb.key.clone(), dv + 1);
                q.push_back(nb.key);
            }
        }
    }
    d
}

/// Σ over n-step walks of (graph distance of the end from the root)².
pub fn naive_squared_distance_sums<G: GraphOracle + ?Sized>(g: &G, n_max: usize) -> Vec<u128> {
    let root = g.root();
    let d = distances(g, &root, n_max);
    let mut out = vec![0u128; n_max + 1];
    for_each_walk(g, &root, n_max, &mut |p, w| {
        let r = d[p.last().unwrap()] as u128;
        out[p.len() - 1] += w * r * r;
    });
    out
}

pub fn big(v: &[u128]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

pub fn big_u64(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

/// Built-in selectors exercised by the oracle comparisons.
pub const BUILTINS: &[&str] = &[
    "zd1",
    "zd2",
    "zd3",
    "ladder",
    "bridge2",
    "bridge3",
    "bridge4",
    "hexagonal",
    "triangular",
    "square_octagon",
    "three_twelve",
    "cubic_tree",
    "hex_semi_fisher",
];
