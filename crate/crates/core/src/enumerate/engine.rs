//! Depth-first walk enumeration over a materialized ball.
//!
//! Work is split at a fixed prefix depth: every self-avoiding prefix of that
//! length becomes an independent task, tasks run on a dedicated thread pool,
//! and per-task integer tallies are summed exactly. The result is therefore
//! identical for any worker count.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::EnumError;
use crate::graph::Ball;

const CHECK_EVERY: u64 = 1 << 16;

/// Compact adjacency for enumeration: parallel edges to the same target are
/// merged into one weighted arc, loops and out-of-ball targets are dropped.
pub(crate) struct WalkGraph {
    off: Vec<u32>,
    arcs: Vec<(u32, u32)>,
    pub(crate) depth: Vec<u32>,
}

impl WalkGraph {
    pub(crate) fn from_ball(ball: &Ball) -> Self {
        let mut off = Vec::with_capacity(ball.len() + 1);
        let mut arcs = Vec::new();
        off.push(0);
        for i in 0..ball.len() as u32 {
            let start = arcs.len();
            for e in ball.edges(i) {
                let Some(t) = e.target else { continue };
                if t == i {
                    continue;
                }
                match arcs[start..].iter_mut().find(|(x, _)| *x == t) {
                    Some((_, m)) => *m += e.multiplicity,
                    None => arcs.push((t, e.multiplicity)),
                }
            }
            off.push(arcs.len() as u32);
        }
        WalkGraph {
            off,
            arcs,
            depth: ball.depths().to_vec(),
        }
    }

    #[inline]
    fn arcs(&self, v: u32) -> &[(u32, u32)] {
        &self.arcs[self.off[v as usize] as usize..self.off[v as usize + 1] as usize]
    }

    fn len(&self) -> usize {
        self.depth.len()
    }
}

#[derive(Clone)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }
    #[inline]
    fn get(&self, i: u32) -> bool {
        self.0[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: u32) {
        self.0[(i >> 6) as usize] |= 1 << (i & 63);
    }
    #[inline]
    fn clear(&mut self, i: u32) {
        self.0[(i >> 6) as usize] &= !(1 << (i & 63));
    }
}

/// Pruning and counting rule threaded through the search.
pub(crate) trait Rule: Sync {
    type State: Copy + Send + Sync;
    fn start(&self, root: u32) -> Self::State;
    /// State after stepping onto `v`; `None` prunes the branch.
    fn enter(&self, s: Self::State, v: u32) -> Option<Self::State>;
    /// Whether the walk ending at `v` in state `s` is recorded.
    fn record(&self, s: Self::State, v: u32) -> bool;
}

/// Every self-avoiding walk is counted.
pub(crate) struct AllWalks;

impl Rule for AllWalks {
    type State = ();
    fn start(&self, _: u32) {}
    #[inline]
    fn enter(&self, _: (), _: u32) -> Option<()> {
        Some(())
    }
    #[inline]
    fn record(&self, _: (), _: u32) -> bool {
        true
    }
}

/// Bridges: every vertex after the first lies strictly above the start and
/// the end is at the maximum height seen so far, in the root's orbit class.
pub(crate) struct Bridges {
    pub(crate) height: Vec<f64>,
    pub(crate) end_ok: Vec<bool>,
    pub(crate) start: f64,
}

impl Rule for Bridges {
    type State = f64;
    fn start(&self, root: u32) -> f64 {
        self.height[root as usize]
    }
    #[inline]
    fn enter(&self, top: f64, v: u32) -> Option<f64> {
        let h = self.height[v as usize];
        (h > self.start).then_some(if h > top { h } else { top })
    }
    #[inline]
    fn record(&self, top: f64, v: u32) -> bool {
        self.end_ok[v as usize] && self.height[v as usize] >= top
    }
}

/// What to accumulate per walk length.
#[derive(Clone, Copy, Default)]
pub(crate) struct TallySpec {
    pub(crate) target: Option<u32>,
    pub(crate) squared_depth: bool,
}

#[derive(Clone)]
pub(crate) struct Tally {
    pub(crate) counts: Vec<u128>,
    pub(crate) hits: Vec<u128>,
    pub(crate) sq: Vec<u128>,
}

impl Tally {
    fn new(n: usize, spec: TallySpec) -> Self {
        Tally {
            counts: vec![0; n + 1],
            hits: if spec.target.is_some() { vec![0; n + 1] } else { Vec::new() },
            sq: if spec.squared_depth { vec![0; n + 1] } else { Vec::new() },
        }
    }

    #[inline]
    fn add(&mut self, spec: TallySpec, depth: &[u32], len: usize, v: u32, w: u128) -> Result<(), EnumError> {
        self.counts[len] = self.counts[len].checked_add(w).ok_or(EnumError::Overflow)?;
        if spec.target == Some(v) {
            self.hits[len] = self.hits[len].checked_add(w).ok_or(EnumError::Overflow)?;
        }
        if spec.squared_depth {
            let d = depth[v as usize] as u128;
            let x = w.checked_mul(d * d).ok_or(EnumError::Overflow)?;
            self.sq[len] = self.sq[len].checked_add(x).ok_or(EnumError::Overflow)?;
        }
        Ok(())
    }
}

/// Exact per-length totals.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Totals {
    pub(crate) counts: Vec<BigUint>,
    pub(crate) hits: Vec<BigUint>,
    pub(crate) sq: Vec<BigUint>,
}

impl Totals {
    fn new(n: usize, spec: TallySpec) -> Self {
        let z = || vec![BigUint::default(); n + 1];
        Totals {
            counts: z(),
            hits: if spec.target.is_some() { z() } else { Vec::new() },
            sq: if spec.squared_depth { z() } else { Vec::new() },
        }
    }

    fn absorb(&mut self, t: &Tally) {
        for (a, &b) in self.counts.iter_mut().zip(&t.counts) {
            *a += b;
        }
        for (a, &b) in self.hits.iter_mut().zip(&t.hits) {
            *a += b;
        }
        for (a, &b) in self.sq.iter_mut().zip(&t.sq) {
            *a += b;
        }
    }
}

pub(crate) struct Limits<'a> {
    pub(crate) workers: usize,
    pub(crate) split_depth: usize,
    pub(crate) deadline: Option<Instant>,
    pub(crate) abort: &'a AtomicBool,
}

impl Limits<'_> {
    fn expired(&self) -> bool {
        if self.abort.load(Ordering::Relaxed) {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.abort.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }
}

fn cap_error() -> EnumError {
    EnumError::CapExceeded {
        reason: "wall-clock deadline".into(),
        completed: Vec::new(),
    }
}

/// Runs `f` over `tasks` on `workers` threads, preserving task order.
pub(crate) fn run_tasks<T: Sync, R: Send>(
    workers: usize,
    tasks: &[T],
    f: impl Fn(&T) -> R + Sync + Send,
) -> Vec<R> {
    if workers <= 1 || tasks.len() <= 1 {
        return tasks.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| tasks.par_iter().map(&f).collect()),
        Err(_) => tasks.iter().map(f).collect(),
    }
}

struct PrefixNode<S> {
    v: u32,
    parent: usize,
    len: usize,
    weight: u128,
    state: S,
}

fn path_of<S>(nodes: &[PrefixNode<S>], mut i: usize) -> Vec<u32> {
    let mut p = vec![nodes[i].v];
    while i != 0 {
        i = nodes[i].parent;
        p.push(nodes[i].v);
    }
    p
}

/// Prefix tree of all rule-admissible walks of length <= `depth`.
fn prefix_tree<R: Rule>(g: &WalkGraph, rule: &R, root: u32, depth: usize) -> Result<Vec<PrefixNode<R::State>>, EnumError> {
    let mut nodes = vec![PrefixNode {
        v: root,
        parent: 0,
        len: 0,
        weight: 1,
        state: rule.start(root),
    }];
    let mut visited = BitSet::new(g.len());
    visited.set(root);
    // explicit preorder DFS so children follow their parent in `nodes`
    fn grow<R: Rule>(
        g: &WalkGraph,
        rule: &R,
        depth: usize,
        at: usize,
        visited: &mut BitSet,
        nodes: &mut Vec<PrefixNode<R::State>>,
    ) -> Result<(), EnumError> {
        let (v, len, weight, state) = {
            let n = &nodes[at];
            (n.v, n.len, n.weight, n.state)
        };
        if len == depth {
            return Ok(());
        }
        for &(t, m) in g.arcs(v) {
            if visited.get(t) {
                continue;
            }
            let Some(s) = rule.enter(state, t) else { continue };
            let weight = weight.checked_mul(m as u128).ok_or(EnumError::Overflow)?;
            nodes.push(PrefixNode {
                v: t,
                parent: at,
                len: len + 1,
                weight,
                state: s,
            });
            let child = nodes.len() - 1;
            visited.set(t);
            grow(g, rule, depth, child, visited, nodes)?;
            visited.clear(t);
        }
        Ok(())
    }
    grow(g, rule, depth, 0, &mut visited, &mut nodes)?;
    Ok(nodes)
}

struct Walker<'a, R: Rule> {
    g: &'a WalkGraph,
    rule: &'a R,
    spec: TallySpec,
    n_max: usize,
    visited: BitSet,
    tally: Tally,
    nodes: u64,
    limits: &'a Limits<'a>,
}

impl<R: Rule> Walker<'_, R> {
    fn dfs(&mut self, v: u32, len: usize, weight: u128, state: R::State) -> Result<(), EnumError> {
        self.nodes += 1;
        if self.nodes % CHECK_EVERY == 0 && self.limits.expired() {
            return Err(cap_error());
        }
        let g = self.g;
        for &(t, m) in g.arcs(v) {
            if self.visited.get(t) {
                continue;
            }
            let Some(s) = self.rule.enter(state, t) else { continue };
            let w = if m == 1 {
                weight
            } else {
                weight.checked_mul(m as u128).ok_or(EnumError::Overflow)?
            };
            if self.rule.record(s, t) {
                self.tally.add(self.spec, &g.depth, len + 1, t, w)?;
            }
            if len + 1 < self.n_max {
                self.visited.set(t);
                let r = self.dfs(t, len + 1, w, s);
                self.visited.clear(t);
                r?;
            }
        }
        Ok(())
    }
}

/// Counts rule-admissible walks of every length `0..=n_max` from `root`.
/// The length-0 walk is recorded when `count_root` is set.
pub(crate) fn enumerate<R: Rule>(
    g: &WalkGraph,
    rule: &R,
    root: u32,
    n_max: usize,
    spec: TallySpec,
    count_root: bool,
    limits: &Limits<'_>,
) -> Result<Totals, EnumError> {
    let d = limits.split_depth.clamp(1, n_max.max(1));
    let nodes = prefix_tree(g, rule, root, d)?;
    let mut head = Tally::new(n_max, spec);
    for (i, n) in nodes.iter().enumerate() {
        if (i > 0 || count_root) && rule.record(n.state, n.v) {
            head.add(spec, &g.depth, n.len, n.v, n.weight)?;
        }
    }
    let tasks: Vec<usize> = if d < n_max {
        (0..nodes.len()).filter(|&i| nodes[i].len == d).collect()
    } else {
        Vec::new()
    };
    let results = run_tasks(limits.workers, &tasks, |&i| {
        let node = &nodes[i];
        let mut w = Walker {
            g,
            rule,
            spec,
            n_max,
            visited: BitSet::new(g.len()),
            tally: Tally::new(n_max, spec),
            nodes: 0,
            limits,
        };
        for v in path_of(&nodes, i) {
            w.visited.set(v);
        }
        w.dfs(node.v, node.len, node.weight, node.state).map(|_| w.tally)
    });
    let mut totals = Totals::new(n_max, spec);
    totals.absorb(&head);
    for r in results {
        totals.absorb(&r?);
    }
    Ok(totals)
}

struct Extender<'a> {
    g: &'a WalkGraph,
    n_max: usize,
    k: usize,
    limit: usize,
    visited: BitSet,
    counts: Vec<u128>,
    nodes: u64,
    limits: &'a Limits<'a>,
}

impl Extender<'_> {
    /// Returns the greatest total length any extension of the current walk
    /// reaches, capped at `n_max + k`; records walks of length <= n_max that
    /// extend by `k` more steps.
    fn dfs(&mut self, v: u32, len: usize, weight: u128) -> Result<usize, EnumError> {
        self.nodes += 1;
        if self.nodes % CHECK_EVERY == 0 && self.limits.expired() {
            return Err(cap_error());
        }
        let mut reach = len;
        if len < self.limit {
            let g = self.g;
            for &(t, m) in g.arcs(v) {
                if self.visited.get(t) {
                    continue;
                }
                let w = weight.checked_mul(m as u128).ok_or(EnumError::Overflow)?;
                self.visited.set(t);
                let r = self.dfs(t, len + 1, w);
                self.visited.clear(t);
                reach = reach.max(r?);
                if len >= self.n_max && reach == self.limit {
                    break;
                }
            }
        }
        if len <= self.n_max && reach >= len + self.k {
            self.counts[len] = self.counts[len].checked_add(weight).ok_or(EnumError::Overflow)?;
        }
        Ok(reach)
    }
}

/// Counts walks of each length `0..=n_max` that extend to length `+k`.
pub(crate) fn enumerate_extendable(
    g: &WalkGraph,
    root: u32,
    n_max: usize,
    k: usize,
    limits: &Limits<'_>,
) -> Result<Vec<BigUint>, EnumError> {
    let limit = n_max + k;
    let d = limits.split_depth.clamp(1, n_max.max(1));
    let nodes = prefix_tree(g, &AllWalks, root, d)?;
    let is_task = |i: usize| nodes[i].len == d && d < limit;
    let tasks: Vec<usize> = (0..nodes.len()).filter(|&i| is_task(i)).collect();
    let results = run_tasks(limits.workers, &tasks, |&i| {
        let node = &nodes[i];
        let mut e = Extender {
            g,
            n_max,
            k,
            limit,
            visited: BitSet::new(g.len()),
            counts: vec![0; n_max + 1],
            nodes: 0,
            limits,
        };
        for v in path_of(&nodes, i) {
            e.visited.set(v);
        }
        e.dfs(node.v, node.len, node.weight).map(|r| (r, e.counts))
    });
    let mut totals = vec![BigUint::default(); n_max + 1];
    let mut reach: Vec<usize> = nodes.iter().map(|n| n.len).collect();
    for (&i, r) in tasks.iter().zip(results) {
        let (r, counts) = r?;
        reach[i] = r;
        for (a, b) in totals.iter_mut().zip(counts) {
            *a += b;
        }
    }
    for i in (1..nodes.len()).rev() {
        let p = nodes[i].parent;
        reach[p] = reach[p].max(reach[i]);
    }
    for (i, n) in nodes.iter().enumerate() {
        if !is_task(i) && n.len <= n_max && reach[i] >= n.len + k {
            totals[n.len] += n.weight;
        }
    }
    Ok(totals)
}
