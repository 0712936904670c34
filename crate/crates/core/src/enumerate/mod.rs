//! Exact self-avoiding walk counts: plain, endpoint-constrained, k-extendable,
//! bridges and mean-square displacement.
//!
//! On multigraphs a walk is a sequence of edges, so parallel edges give
//! distinct walks: a step along a bundle of `m` parallel edges multiplies the
//! weight by `m`. Directed edges are followed forwards only and loops are
//! never used.

mod engine;
mod fallback;

use std::sync::atomic::AtomicBool;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{EnumError, GraphError};
use crate::graph::{materialize_ball_capped, Ball, GraphOracle, VertexKey, DEFAULT_BALL_CAP};
use engine::{enumerate, enumerate_extendable, AllWalks, Bridges, Limits, TallySpec, WalkGraph};

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "SAWCOUNT_WORKERS";

#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub workers: usize,
    /// Prefix length at which the search tree is cut into parallel tasks.
    pub split_depth: usize,
    pub max_ball_vertices: usize,
    pub deadline: Option<Instant>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        let workers = std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&w| w > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        EnumOptions {
            workers,
            split_depth: 4,
            max_ball_vertices: DEFAULT_BALL_CAP,
            deadline: None,
        }
    }
}

impl EnumOptions {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

pub(crate) fn big_strings<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesOptions {
    pub directed_respected: bool,
    pub multi_edge_counting: bool,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            directed_respected: true,
            multi_edge_counting: true,
        }
    }
}

/// Whether counts come from one root or are the maximum over orbit classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesScope {
    Root,
    MaxOverClasses,
}

/// `counts[n]` is the exact number of n-step self-avoiding walks from `root`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SawSeries {
    pub graph_id: String,
    pub root: VertexKey,
    #[serde(serialize_with = "big_strings")]
    pub counts: Vec<BigUint>,
    pub options: SeriesOptions,
    pub scope: SeriesScope,
    /// The oracle claims vertex-transitivity.
    pub transitive: bool,
    /// Set for k-extendable counts.
    pub extendable_k: Option<usize>,
}

impl SawSeries {
    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.counts[n]
    }

    /// `n,sigma_n` lines for n >= 1 with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,sigma_n\n");
        for (n, c) in self.counts.iter().enumerate().skip(1) {
            s.push_str(&format!("{},{}\n", n, c));
        }
        s
    }

    /// Elementwise maximum, used to combine series from different roots.
    fn max_with(&mut self, other: &SawSeries) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            if b > a {
                *a = b.clone();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoPointSeries {
    pub graph_id: String,
    pub from: VertexKey,
    pub to: VertexKey,
    #[serde(serialize_with = "big_strings")]
    pub counts: Vec<BigUint>,
}

/// Bridge counts along a lattice axis; `counts[0]` is 0 and `counts[n] = b_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeSeries {
    pub graph_id: String,
    pub axis: usize,
    #[serde(serialize_with = "big_strings")]
    pub counts: Vec<BigUint>,
}

impl BridgeSeries {
    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Σ over n-step walks of weight · ‖π‖², alongside the walk counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisplacementSeries {
    pub graph_id: String,
    #[serde(serialize_with = "big_strings")]
    pub counts: Vec<BigUint>,
    #[serde(serialize_with = "big_strings")]
    pub squared_distance_sums: Vec<BigUint>,
}

impl DisplacementSeries {
    /// Exact ⟨‖π‖²⟩_n, or `None` when there are no n-step walks.
    pub fn mean(&self, n: usize) -> Option<BigRational> {
        let c = &self.counts[n];
        if c.is_zero() {
            return None;
        }
        Some(BigRational::new(
            BigInt::from(self.squared_distance_sums[n].clone()),
            BigInt::from(c.clone()),
        ))
    }

    pub fn means(&self) -> Vec<Option<BigRational>> {
        (0..self.counts.len()).map(|n| self.mean(n)).collect()
    }
}

fn ball_for<G: GraphOracle + ?Sized>(
    g: &G,
    root: &VertexKey,
    radius: usize,
    opts: &EnumOptions,
) -> Result<Option<Ball>, EnumError> {
    match materialize_ball_capped(g, root, radius, opts.max_ball_vertices) {
        Ok(b) => Ok(Some(b)),
        Err(GraphError::BallCap { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn ball_required<G: GraphOracle + ?Sized>(
    g: &G,
    root: &VertexKey,
    radius: usize,
    opts: &EnumOptions,
) -> Result<Ball, EnumError> {
    materialize_ball_capped(g, root, radius, opts.max_ball_vertices).map_err(|e| match e {
        GraphError::BallCap { cap, reached, .. } => EnumError::CapExceeded {
            reason: format!("ball cap of {} vertices hit at radius {}", cap, reached + 1),
            completed: Vec::new(),
        },
        other => other.into(),
    })
}

fn series<G: GraphOracle + ?Sized>(g: &G, root: &VertexKey, counts: Vec<BigUint>) -> SawSeries {
    SawSeries {
        graph_id: g.name(),
        root: root.clone(),
        counts,
        options: SeriesOptions::default(),
        scope: SeriesScope::Root,
        transitive: g.meta().claimed_transitive,
        extendable_k: None,
    }
}

fn extendable_counts<G: GraphOracle + ?Sized>(
    g: &G,
    root: &VertexKey,
    n_max: usize,
    k: usize,
    opts: &EnumOptions,
) -> Result<Vec<BigUint>, EnumError> {
    let abort = AtomicBool::new(false);
    let limits = Limits {
        workers: opts.workers.max(1),
        split_depth: opts.split_depth,
        deadline: opts.deadline,
        abort: &abort,
    };
    match ball_for(g, root, n_max + k, opts)? {
        Some(ball) => {
            let wg = WalkGraph::from_ball(&ball);
            if k == 0 {
                let t = enumerate(&wg, &AllWalks, 0, n_max, TallySpec::default(), true, &limits)?;
                Ok(t.counts)
            } else {
                enumerate_extendable(&wg, 0, n_max, k, &limits)
            }
        }
        None => fallback::oracle_extendable(g, root, n_max, k, &limits),
    }
}

/// σ_0..σ_{n_max} from an explicit root.
pub fn count_saws_from<G: GraphOracle + ?Sized>(
    g: &G,
    root: &VertexKey,
    n_max: usize,
    opts: &EnumOptions,
) -> Result<SawSeries, EnumError> {
    if n_max == 0 {
        return Err(EnumError::ZeroLength);
    }
    if opts.deadline.is_none() {
        return Ok(series(g, root, extendable_counts(g, root, n_max, 0, opts)?));
    }
    // Under a deadline, lengthen in stages so an abort still leaves a
    // complete prefix behind.
    let mut done: Vec<BigUint> = vec![BigUint::from(1u32)];
    let mut n = n_max.min(opts.split_depth.max(1));
    loop {
        match extendable_counts(g, root, n, 0, opts) {
            Ok(c) => done = c,
            Err(EnumError::CapExceeded { reason, .. }) => {
                return Err(EnumError::CapExceeded {
                    reason,
                    completed: done,
                })
            }
            Err(e) => return Err(e),
        }
        if n == n_max {
            return Ok(series(g, root, done));
        }
        n = (n + 2).min(n_max);
    }
}

/// σ_0..σ_{n_max} from the oracle's root.
pub fn count_saws<G: GraphOracle + ?Sized>(g: &G, n_max: usize, opts: &EnumOptions) -> Result<SawSeries, EnumError> {
    count_saws_from(g, &g.root(), n_max, opts)
}

/// Series suited to upper bounds: the root series for transitive oracles,
/// otherwise the elementwise maximum over all orbit representatives.
pub fn count_saws_for_bounds<G: GraphOracle + ?Sized>(
    g: &G,
    n_max: usize,
    opts: &EnumOptions,
) -> Result<SawSeries, EnumError> {
    let mut s = count_saws(g, n_max, opts)?;
    if g.meta().claimed_transitive {
        return Ok(s);
    }
    let root = g.root();
    for r in g.representatives().iter().filter(|r| **r != root) {
        s.max_with(&count_saws_from(g, r, n_max, opts)?);
    }
    s.scope = SeriesScope::MaxOverClasses;
    Ok(s)
}

/// σ_n(root, w) for n = 0..=n_max.
pub fn count_saws_two_point<G: GraphOracle + ?Sized>(
    g: &G,
    w: &VertexKey,
    n_max: usize,
    opts: &EnumOptions,
) -> Result<TwoPointSeries, EnumError> {
    if n_max == 0 {
        return Err(EnumError::ZeroLength);
    }
    let root = g.root();
    let ball = ball_required(g, &root, n_max, opts)?;
    let target = ball
        .index_of(w)
        .ok_or_else(|| EnumError::Unreachable(w.to_string()))?;
    let wg = WalkGraph::from_ball(&ball);
    let abort = AtomicBool::new(false);
    let limits = Limits {
        workers: opts.workers.max(1),
        split_depth: opts.split_depth,
        deadline: opts.deadline,
        abort: &abort,
    };
    let spec = TallySpec {
        target: Some(target),
        squared_depth: false,
    };
    let t = enumerate(&wg, &AllWalks, 0, n_max, spec, true, &limits)?;
    Ok(TwoPointSeries {
        graph_id: g.name(),
        from: root,
        to: w.clone(),
        counts: t.hits,
    })
}

/// Number of n-step walks that extend to (n+k)-step walks. Decreases to the
/// forward-extendable count as k grows; `k = 0` gives plain counts.
pub fn count_k_extendable<G: GraphOracle + ?Sized>(
    g: &G,
    n_max: usize,
    k: usize,
    opts: &EnumOptions,
) -> Result<SawSeries, EnumError> {
    if n_max == 0 {
        return Err(EnumError::ZeroLength);
    }
    let root = g.root();
    let mut s = series(g, &root, extendable_counts(g, &root, n_max, k, opts)?);
    s.extendable_k = Some(k);
    Ok(s)
}

/// Bridge counts b_1..b_{n_max} along lattice `axis`.
///
/// The height of vertex `(c, t)` is `t[axis] + pos[c][axis]`. A bridge is a
/// walk `π_0..π_n` with `h(π_0) < h(π_i) <= h(π_n)` for all `i >= 1` whose end
/// lies in the root's cell class, so that bridges concatenate by translation
/// and `b_{m+n} >= b_m b_n`.
pub fn count_bridges<G: GraphOracle + ?Sized>(
    g: &G,
    axis: usize,
    n_max: usize,
    opts: &EnumOptions,
) -> Result<BridgeSeries, EnumError> {
    let p = g.as_periodic().ok_or(GraphError::NotPeriodic)?;
    if axis >= p.dim() {
        return Err(GraphError::InvalidSpec(format!("axis {} out of range for dim {}", axis, p.dim())).into());
    }
    if n_max == 0 {
        return Err(EnumError::ZeroLength);
    }
    let root = p.root();
    let ball = ball_required(p, &root, n_max, opts)?;
    let wg = WalkGraph::from_ball(&ball);
    let rule = Bridges {
        height: ball.keys().iter().map(|k| p.height(k, axis)).collect(),
        end_ok: ball.keys().iter().map(|k| k.cell() == root.cell()).collect(),
        start: p.height(&root, axis),
    };
    let abort = AtomicBool::new(false);
    let limits = Limits {
        workers: opts.workers.max(1),
        split_depth: opts.split_depth,
        deadline: opts.deadline,
        abort: &abort,
    };
    let t = enumerate(&wg, &rule, 0, n_max, TallySpec::default(), false, &limits)?;
    Ok(BridgeSeries {
        graph_id: g.name(),
        axis,
        counts: t.counts,
    })
}

/// Exact ⟨‖π‖²⟩_n under the uniform (edge-sequence) measure, with ‖π‖ the
/// graph distance between the endpoints.
pub fn mean_square_displacement<G: GraphOracle + ?Sized>(
    g: &G,
    n_max: usize,
    opts: &EnumOptions,
) -> Result<DisplacementSeries, EnumError> {
    if n_max == 0 {
        return Err(EnumError::ZeroLength);
    }
    let root = g.root();
    let ball = ball_required(g, &root, n_max, opts)?;
    let wg = WalkGraph::from_ball(&ball);
    let abort = AtomicBool::new(false);
    let limits = Limits {
        workers: opts.workers.max(1),
        split_depth: opts.split_depth,
        deadline: opts.deadline,
        abort: &abort,
    };
    let spec = TallySpec {
        target: None,
        squared_depth: true,
    };
    let t = enumerate(&wg, &AllWalks, 0, n_max, spec, true, &limits)?;
    Ok(DisplacementSeries {
        graph_id: g.name(),
        counts: t.counts,
        squared_distance_sums: t.sq,
    })
}

/// Σ_{n<=N} σ_n x^n, summed exactly over the binary value of `x` and rounded once.
pub fn generating_function_partial(s: &SawSeries, x: f64) -> f64 {
    let Some(xr) = BigRational::from_float(x) else {
        return f64::NAN;
    };
    let mut pow = BigRational::from_integer(BigInt::from(1));
    let mut acc = BigRational::zero();
    for c in &s.counts {
        acc += &pow * BigRational::from_integer(BigInt::from(c.clone()));
        pow *= &xr;
    }
    acc.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin, TreeOracle};

    fn ints(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    fn opts() -> EnumOptions {
        EnumOptions::default().with_workers(2)
    }

    #[test]
    fn square_lattice_first_terms() {
        let s = count_saws(&builtin("zd2").unwrap(), 6, &opts()).unwrap();
        assert_eq!(ints(&s.counts), vec![1, 4, 12, 36, 100, 284, 780]);
        assert_eq!(s.to_csv().lines().nth(1), Some("1,4"));
    }

    #[test]
    fn ladder_and_bridge_graph() {
        let s = count_saws(&builtin("ladder").unwrap(), 2, &opts()).unwrap();
        assert_eq!(ints(&s.counts), vec![1, 3, 6]);
        let b = count_saws(&builtin("bridge(4)").unwrap(), 4, &opts()).unwrap();
        // 3^ceil(n/2) + 3^floor(n/2)
        assert_eq!(ints(&b.counts), vec![2 - 1, 4, 6, 12, 18]);
    }

    #[test]
    fn two_point_examples() {
        let g = builtin("zd2").unwrap();
        let w = VertexKey::periodic(0, &[1, 0]);
        let t = count_saws_two_point(&g, &w, 3, &opts()).unwrap();
        assert_eq!(ints(&t.counts), vec![0, 1, 0, 2]);
        let far = VertexKey::periodic(0, &[5, 0]);
        assert!(matches!(
            count_saws_two_point(&g, &far, 3, &opts()),
            Err(EnumError::Unreachable(_))
        ));
    }

    #[test]
    fn bridges_on_square_lattice() {
        let b = count_bridges(&builtin("zd2").unwrap(), 0, 6, &opts()).unwrap();
        assert_eq!(b.counts[1], BigUint::from(1u32));
        assert_eq!(b.counts[2], BigUint::from(3u32));
        assert!(b.counts[6] >= &b.counts[2] * &b.counts[4]);
        assert!(matches!(
            count_bridges(&TreeOracle::new(3), 0, 3, &opts()),
            Err(EnumError::Graph(GraphError::NotPeriodic))
        ));
    }

    #[test]
    fn k_zero_matches_plain() {
        let g = builtin("hexagonal").unwrap();
        let a = count_saws(&g, 8, &opts()).unwrap();
        let b = count_k_extendable(&g, 8, 0, &opts()).unwrap();
        assert_eq!(a.counts, b.counts);
    }

    #[test]
    fn fallback_agrees_with_ball() {
        let g = builtin("triangular").unwrap();
        let small = EnumOptions {
            max_ball_vertices: 10,
            ..opts()
        };
        assert_eq!(
            count_saws(&g, 5, &small).unwrap().counts,
            count_saws(&g, 5, &opts()).unwrap().counts
        );
        assert_eq!(
            count_k_extendable(&g, 4, 2, &small).unwrap().counts,
            count_k_extendable(&g, 4, 2, &opts()).unwrap().counts
        );
    }

    #[test]
    fn expired_deadline_reports_prefix() {
        let g = builtin("zd2").unwrap();
        let o = EnumOptions {
            deadline: Some(Instant::now()),
            split_depth: 2,
            ..opts()
        };
        match count_saws(&g, 30, &o) {
            Err(EnumError::CapExceeded { completed, .. }) => {
                assert!(!completed.is_empty());
                assert_eq!(completed[0], BigUint::from(1u32));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn generating_function_examples() {
        let s = count_saws(&builtin("zd2").unwrap(), 2, &opts()).unwrap();
        assert_eq!(generating_function_partial(&s, 0.25), 2.75);
        let mut one = s.clone();
        one.counts.truncate(1);
        assert_eq!(generating_function_partial(&one, 123.0), 1.0);
    }

    #[test]
    fn zero_length_rejected() {
        assert_eq!(
            count_saws(&builtin("zd2").unwrap(), 0, &opts()).unwrap_err(),
            EnumError::ZeroLength
        );
    }
}
