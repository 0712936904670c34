//! Local transitivity check: rooted balls around every orbit representative
//! must be isomorphic. Passing is necessary for vertex-transitivity, not
//! sufficient; global transitivity is never certified here.

use std::collections::HashMap;

use serde::Serialize;

use super::ball::{materialize_ball_capped, Ball};
use super::GraphOracle;
use crate::error::GraphError;

pub const ISO_BALL_CAP: usize = 4096;
const SEARCH_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitivityReport {
    pub radius: usize,
    pub representatives: usize,
    pub pass: bool,
    /// Why the check failed (first offending representative).
    pub witness: Option<String>,
}

struct Local {
    depth: Vec<u32>,
    /// (full degree, in-ball out-degree) with multiplicity
    sig: Vec<(u32, u32)>,
    out: Vec<Vec<(u32, u32)>>,
    inc: Vec<Vec<(u32, u32)>>,
    mult: HashMap<(u32, u32), u32>,
}

impl Local {
    fn new(b: &Ball) -> Self {
        let n = b.len();
        let mut mult: HashMap<(u32, u32), u32> = HashMap::new();
        let mut sig = Vec::with_capacity(n);
        for i in 0..n as u32 {
            let mut full = 0;
            let mut inside = 0;
            for e in b.edges(i) {
                full += e.multiplicity;
                if let Some(t) = e.target {
                    inside += e.multiplicity;
                    *mult.entry((i, t)).or_insert(0) += e.multiplicity;
                }
            }
            sig.push((full, inside));
        }
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut pairs: Vec<_> = mult.iter().map(|(&k, &m)| (k, m)).collect();
        pairs.sort();
        for ((a, c), m) in pairs {
            out[a as usize].push((c, m));
            inc[c as usize].push((a, m));
        }
        Local {
            depth: b.depths().to_vec(),
            sig,
            out,
            inc,
            mult,
        }
    }

    fn shell_profile(&self) -> Vec<Vec<(u32, u32)>> {
        let r = self.depth.iter().copied().max().unwrap_or(0) as usize;
        let mut p = vec![Vec::new(); r + 1];
        for (i, &d) in self.depth.iter().enumerate() {
            p[d as usize].push(self.sig[i]);
        }
        for s in &mut p {
            s.sort();
        }
        p
    }
}

struct Search<'a> {
    a: &'a Local,
    b: &'a Local,
    parent: Vec<u32>,
    fwd: Vec<u32>,
    back: Vec<u32>,
    steps: u64,
}

const UNSET: u32 = u32::MAX;

impl Search<'_> {
    fn consistent(&self, i: u32, cand: u32) -> bool {
        for (outgoing, adj_a, adj_b) in [(true, &self.a.out, &self.b.out), (false, &self.a.inc, &self.b.inc)] {
            let mut sum_a = 0;
            for &(j, m) in &adj_a[i as usize] {
                let fj = if j == i { cand } else { self.fwd[j as usize] };
                if fj == UNSET {
                    continue;
                }
                let key = if outgoing { (cand, fj) } else { (fj, cand) };
                if self.b.mult.get(&key).copied().unwrap_or(0) != m {
                    return false;
                }
                sum_a += m;
            }
            let sum_b: u32 = adj_b[cand as usize]
                .iter()
                .filter(|&&(j, _)| j == cand || self.back[j as usize] != UNSET)
                .map(|&(_, m)| m)
                .sum();
            if sum_a != sum_b {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, i: u32) -> Option<bool> {
        let n = self.a.depth.len() as u32;
        if i == n {
            return Some(true);
        }
        self.steps += 1;
        if self.steps > SEARCH_BUDGET {
            return None;
        }
        let p = self.parent[i as usize];
        let fp = self.fwd[p as usize];
        let cands: Vec<u32> = self.b.out[fp as usize].iter().map(|&(c, _)| c).collect();
        for c in cands {
            if self.back[c as usize] != UNSET
                || self.b.depth[c as usize] != self.a.depth[i as usize]
                || self.b.sig[c as usize] != self.a.sig[i as usize]
                || !self.consistent(i, c)
            {
                continue;
            }
            self.fwd[i as usize] = c;
            self.back[c as usize] = i;
            match self.extend(i + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.fwd[i as usize] = UNSET;
            self.back[c as usize] = UNSET;
        }
        Some(false)
    }
}

/// Outcome of a rooted isomorphism search between two balls.
fn rooted_isomorphic(a: &Local, b: &Local) -> Result<Option<bool>, String> {
    if a.sig[0] != b.sig[0] {
        return Err(format!("degree mismatch at center: {} vs {}", a.sig[0].0, b.sig[0].0));
    }
    if a.depth.len() != b.depth.len() {
        return Err(format!("ball sizes differ: {} vs {}", a.depth.len(), b.depth.len()));
    }
    let (pa, pb) = (a.shell_profile(), b.shell_profile());
    if let Some(d) = (0..pa.len()).find(|&d| pa[d] != pb[d]) {
        return Err(format!("degree profile differs at distance {}", d));
    }
    // breadth-first parent of each vertex of `a` (indices are in BFS order)
    let n = a.depth.len();
    let mut parent = vec![0u32; n];
    for i in 1..n {
        parent[i] = a.inc[i]
            .iter()
            .map(|&(j, _)| j)
            .find(|&j| a.depth[j as usize] + 1 == a.depth[i])
            .unwrap_or(0);
    }
    let mut s = Search {
        a,
        b,
        parent,
        fwd: vec![UNSET; n],
        back: vec![UNSET; n],
        steps: 0,
    };
    s.fwd[0] = 0;
    s.back[0] = 0;
    if !s.consistent(0, 0) {
        return Ok(Some(false));
    }
    Ok(s.extend(1))
}

pub fn local_transitivity_check<G: GraphOracle + ?Sized>(
    g: &G,
    radius: usize,
) -> Result<TransitivityReport, GraphError> {
    if radius == 0 {
        return Err(GraphError::InvalidSpec("transitivity check needs radius >= 1".into()));
    }
    let reps = g.representatives();
    let locals = reps
        .iter()
        .map(|r| {
            materialize_ball_capped(g, r, radius, ISO_BALL_CAP)
                .map(|b| Local::new(&b))
                .map_err(|e| match e {
                    GraphError::BallCap { cap, .. } => GraphError::IsoTooLarge { size: cap + 1, cap },
                    other => other,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = TransitivityReport {
        radius,
        representatives: reps.len(),
        pass: true,
        witness: None,
    };
    for (k, other) in locals.iter().enumerate().skip(1) {
        let verdict = match rooted_isomorphic(&locals[0], other) {
            Err(why) => Some(why),
            Ok(Some(true)) => None,
            Ok(Some(false)) => Some("no rooted isomorphism exists".to_string()),
            Ok(None) => Some("search budget exhausted (inconclusive)".to_string()),
        };
        if let Some(why) = verdict {
            report.pass = false;
            report.witness = Some(format!("{} vs {}: {}", reps[0], reps[k], why));
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::spec::{EdgeSpec, PeriodicGraphSpec};
    use crate::graph::{builtin, PeriodicGraph};

    #[test]
    fn lattices_pass() {
        for name in ["zd2", "hexagonal", "ladder", "square_octagon", "three_twelve", "bridge4"] {
            let r = local_transitivity_check(&builtin(name).unwrap(), 3).unwrap();
            assert!(r.pass, "{}: {:?}", name, r.witness);
        }
    }

    #[test]
    fn semi_fisher_lattice_fails() {
        let r = local_transitivity_check(&builtin("hex_semi_fisher").unwrap(), 2).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn degree_mismatch_witness() {
        // ladder plus a directed long rail on cell 1: out-degrees 3 and 4
        let mut s = PeriodicGraphSpec::new("mixed", 1, 2);
        s.add_edge(EdgeSpec::undirected(0, 0, &[1]))
            .add_edge(EdgeSpec::undirected(0, 1, &[0]))
            .add_edge(EdgeSpec::undirected(1, 1, &[1]))
            .add_edge(EdgeSpec::directed(1, 1, &[2], 1));
        let g = PeriodicGraph::new(s).unwrap();
        let r = local_transitivity_check(&g, 1).unwrap();
        assert!(!r.pass);
        assert!(r.witness.unwrap().contains("degree mismatch"));
    }

    #[test]
    fn radius_zero_rejected() {
        assert!(local_transitivity_check(&builtin("zd2").unwrap(), 0).is_err());
    }
}
