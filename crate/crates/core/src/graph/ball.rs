use std::collections::{HashMap, VecDeque};

use super::{GraphOracle, VertexKey};
use crate::error::GraphError;

/// Default cap on materialized ball size.
pub const DEFAULT_BALL_CAP: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallEdge {
    /// `None` when the neighbor lies outside the ball.
    pub target: Option<u32>,
    pub multiplicity: u32,
    pub edge_id: u32,
}

/// All vertices within graph distance `radius` of `center`, with dense
/// indices assigned in breadth-first order and the full out-neighbor list of
/// every member (targets outside the ball are kept as `None`).
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: VertexKey,
    pub radius: usize,
    keys: Vec<VertexKey>,
    index: HashMap<VertexKey, u32>,
    offsets: Vec<usize>,
    edges: Vec<BallEdge>,
    dist: Vec<u32>,
}

pub fn materialize_ball<G: GraphOracle + ?Sized>(g: &G, radius: usize) -> Result<Ball, GraphError> {
    materialize_ball_capped(g, &g.root(), radius, DEFAULT_BALL_CAP)
}

pub fn materialize_ball_capped<G: GraphOracle + ?Sized>(
    g: &G,
    center: &VertexKey,
    radius: usize,
    cap: usize,
) -> Result<Ball, GraphError> {
    let mut keys = vec![center.clone()];
    let mut index = HashMap::from([(center.clone(), 0u32)]);
    let mut dist = vec![0u32];
    let mut offsets = vec![0usize];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0u32]);
    while let Some(i) = queue.pop_front() {
        let d = dist[i as usize];
        for n in g.neighbors(&keys[i as usize]) {
            let target = match index.get(&n.key) {
                Some(&j) => Some(j),
                None if (d as usize) < radius => {
                    if keys.len() >= cap {
                        return Err(GraphError::BallCap {
                            cap,
                            radius,
                            reached: d as usize,
                        });
                    }
                    let j = keys.len() as u32;
                    index.insert(n.key.clone(), j);
                    keys.push(n.key);
                    dist.push(d + 1);
                    queue.push_back(j);
                    Some(j)
                }
                None => None,
            };
            edges.push(BallEdge {
                target,
                multiplicity: n.multiplicity,
                edge_id: n.edge_id,
            });
        }
        offsets.push(edges.len());
    }
    Ok(Ball {
        center: center.clone(),
        radius,
        keys,
        index,
        offsets,
        edges,
        dist,
    })
}

impl Ball {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: u32) -> &VertexKey {
        &self.keys[i as usize]
    }

    pub fn keys(&self) -> &[VertexKey] {
        &self.keys
    }

    pub fn index_of(&self, v: &VertexKey) -> Option<u32> {
        self.index.get(v).copied()
    }

    /// Distance from the center, exact for every member.
    pub fn depth(&self, i: u32) -> u32 {
        self.dist[i as usize]
    }

    pub fn depths(&self) -> &[u32] {
        &self.dist
    }

    pub fn edges(&self, i: u32) -> &[BallEdge] {
        &self.edges[self.offsets[i as usize]..self.offsets[i as usize + 1]]
    }

    /// Number of members at each distance `0..=radius`.
    pub fn shell_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.radius + 1];
        for &d in &self.dist {
            s[d as usize] += 1;
        }
        s
    }

    /// Graph distance between two members. Certified whenever
    /// `d(center,v) + d(center,w) <= radius`: every shortest v–w path then
    /// stays inside the ball.
    pub fn graph_distance(&self, v: &VertexKey, w: &VertexKey) -> Result<usize, GraphError> {
        let a = self
            .index_of(v)
            .ok_or_else(|| GraphError::OutsideBall(v.to_string()))?;
        let b = self
            .index_of(w)
            .ok_or_else(|| GraphError::OutsideBall(w.to_string()))?;
        let sum = (self.dist[a as usize] + self.dist[b as usize]) as usize;
        if sum > self.radius {
            return Err(GraphError::DistanceNotCertified {
                sum,
                radius: self.radius,
            });
        }
        let mut seen = vec![u32::MAX; self.len()];
        seen[a as usize] = 0;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                return Ok(seen[x as usize] as usize);
            }
            for e in self.edges(x) {
                if let Some(t) = e.target {
                    if seen[t as usize] == u32::MAX {
                        seen[t as usize] = seen[x as usize] + 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        // unreachable for certified pairs
        Err(GraphError::DistanceNotCertified {
            sum,
            radius: self.radius,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin, TreeOracle};

    #[test]
    fn square_lattice_ball_sizes() {
        let g = builtin("zd2").unwrap();
        assert_eq!(materialize_ball(&g, 0).unwrap().len(), 1);
        assert_eq!(materialize_ball(&g, 1).unwrap().len(), 5);
        assert_eq!(materialize_ball(&g, 2).unwrap().len(), 13);
    }

    #[test]
    fn cubic_tree_shells() {
        let b = materialize_ball(&TreeOracle::new(3), 3).unwrap();
        assert_eq!(b.shell_sizes(), vec![1, 3, 6, 12]);
        assert_eq!(b.len(), 22);
    }

    #[test]
    fn cap_reports_reached_radius() {
        let g = builtin("zd2").unwrap();
        match materialize_ball_capped(&g, &g.root(), 10, 20) {
            Err(GraphError::BallCap { reached, .. }) => assert_eq!(reached, 2),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn distances() {
        let g = builtin("zd2").unwrap();
        let b = materialize_ball(&g, 6).unwrap();
        let o = VertexKey::periodic(0, &[0, 0]);
        let w = VertexKey::periodic(0, &[2, 3]);
        assert_eq!(b.graph_distance(&o, &w).unwrap(), 5);
        assert_eq!(b.graph_distance(&w, &w).unwrap_err(), GraphError::DistanceNotCertified { sum: 10, radius: 6 });
        let far = VertexKey::periodic(0, &[7, 0]);
        assert!(matches!(b.graph_distance(&o, &far), Err(GraphError::OutsideBall(_))));

        let hex = builtin("hexagonal").unwrap();
        let hb = materialize_ball(&hex, 2).unwrap();
        assert_eq!(hb.graph_distance(&hex.root(), &hex.root()).unwrap(), 0);
    }
}
