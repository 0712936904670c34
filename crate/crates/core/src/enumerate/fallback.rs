//! Enumeration straight off the oracle, for graphs whose ball would exceed the
//! materialization cap (trees, free groups). The visited set is a hash set of
//! keys on the current path.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::engine::{run_tasks, Limits};
use crate::error::EnumError;
use crate::graph::{GraphOracle, VertexKey};

struct OracleWalker<'a, G: ?Sized> {
    g: &'a G,
    n_max: usize,
    k: usize,
    on_path: HashSet<VertexKey>,
    counts: Vec<u128>,
    nodes: u64,
    limits: &'a Limits<'a>,
}

impl<G: GraphOracle + ?Sized> OracleWalker<'_, G> {
    fn dfs(&mut self, v: &VertexKey, len: usize, weight: u128) -> Result<usize, EnumError> {
        self.nodes += 1;
        if self.nodes % 4096 == 0 && self.limits.deadline.is_some_and(|d| std::time::Instant::now() > d) {
            return Err(EnumError::CapExceeded {
                reason: "wall-clock deadline".into(),
                completed: Vec::new(),
            });
        }
        let limit = self.n_max + self.k;
        let mut reach = len;
        if len < limit {
            for n in self.g.neighbors(v) {
                if self.on_path.contains(&n.key) {
                    continue;
                }
                let w = weight
                    .checked_mul(n.multiplicity as u128)
                    .ok_or(EnumError::Overflow)?;
                self.on_path.insert(n.key.clone());
                let r = self.dfs(&n.key, len + 1, w);
                self.on_path.remove(&n.key);
                reach = reach.max(r?);
                if len >= self.n_max && reach == limit {
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

/// Counts walks of length `0..=n_max` from `root` that extend by `k` steps;
/// `k = 0` gives plain self-avoiding walk counts.
pub(crate) fn oracle_extendable<G: GraphOracle + ?Sized>(
    g: &G,
    root: &VertexKey,
    n_max: usize,
    k: usize,
    limits: &Limits<'_>,
) -> Result<Vec<BigUint>, EnumError> {
    let first: Vec<_> = g
        .neighbors(root)
        .into_iter()
        .filter(|n| &n.key != root)
        .collect();
    let results = run_tasks(limits.workers, &first, |n| {
        let mut w = OracleWalker {
            g,
            n_max,
            k,
            on_path: HashSet::from([root.clone(), n.key.clone()]),
            counts: vec![0; n_max + 1],
            nodes: 0,
            limits,
        };
        w.dfs(&n.key, 1, n.multiplicity as u128).map(|r| (r, w.counts))
    });
    let mut totals = vec![BigUint::default(); n_max + 1];
    let mut reach = 0;
    for r in results {
        let (r, counts) = r?;
        reach = reach.max(r);
        for (a, b) in totals.iter_mut().zip(counts) {
            *a += b;
        }
    }
    if reach >= k {
        totals[0] += 1u32;
    }
    Ok(totals)
}
