use std::collections::{HashSet, VecDeque};

use super::spec::{Direction, PeriodicGraphSpec};
use super::{GraphOracle, Neighbor, OracleMeta, VertexKey};
use crate::error::GraphError;

/// One outgoing half-edge of a cell vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub target: usize,
    pub offset: Vec<i64>,
    pub multiplicity: u32,
    /// `2 * line + 1` when the edge line is traversed from `v` to `u`.
    pub edge_id: u32,
}

impl HalfEdge {
    pub fn line(&self) -> usize {
        (self.edge_id / 2) as usize
    }

    pub fn is_reverse(&self) -> bool {
        self.edge_id % 2 == 1
    }

    pub fn is_loop(&self, from: usize) -> bool {
        self.target == from && self.offset.iter().all(|&x| x == 0)
    }
}

/// Neighbor oracle over a validated [`PeriodicGraphSpec`].
#[derive(Clone, Debug)]
pub struct PeriodicGraph {
    spec: PeriodicGraphSpec,
    half_edges: Vec<Vec<HalfEdge>>,
    meta: OracleMeta,
}

impl PeriodicGraph {
    pub fn new(spec: PeriodicGraphSpec) -> Result<Self, GraphError> {
        spec.validate()?;
        let k = spec.cells();
        let mut half_edges: Vec<Vec<HalfEdge>> = vec![Vec::new(); k];
        let mut directed = false;
        for (line, e) in spec.edges.iter().enumerate() {
            half_edges[e.u].push(HalfEdge {
                target: e.v,
                offset: e.offset.clone(),
                multiplicity: e.multiplicity,
                edge_id: 2 * line as u32,
            });
            match e.direction {
                Direction::Undirected => half_edges[e.v].push(HalfEdge {
                    target: e.u,
                    offset: e.offset.iter().map(|x| -x).collect(),
                    multiplicity: e.multiplicity,
                    edge_id: 2 * line as u32 + 1,
                }),
                Direction::Directed => directed = true,
            }
        }
        for hs in &mut half_edges {
            hs.sort_by(|a, b| {
                (a.target, &a.offset, a.edge_id).cmp(&(b.target, &b.offset, b.edge_id))
            });
        }
        let simple = half_edges.iter().enumerate().all(|(c, hs)| {
            hs.iter().all(|h| h.multiplicity == 1 && !h.is_loop(c))
                && hs
                    .windows(2)
                    .all(|w| (w[0].target, &w[0].offset) != (w[1].target, &w[1].offset))
        });
        let meta = OracleMeta {
            is_directed: directed,
            claimed_transitive: spec.claims_transitive(),
            simple,
            coloring: spec
                .has_coloring()
                .then(|| spec.cell.iter().map(|c| c.color).collect()),
            infinite: false,
        };
        let mut g = PeriodicGraph {
            spec,
            half_edges,
            meta,
        };
        g.meta.infinite = g.root_component_infinite();
        Ok(g)
    }

    pub fn spec(&self) -> &PeriodicGraphSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn cells(&self) -> usize {
        self.spec.cells()
    }

    /// Half-edges leaving cell vertex `c`, in neighbor order.
    pub fn half_edges(&self, c: usize) -> &[HalfEdge] {
        &self.half_edges[c]
    }

    /// Height functional `t[axis] + pos[cell][axis]`; translation by a lattice
    /// vector shifts it by an integer.
    pub fn height(&self, v: &VertexKey, axis: usize) -> f64 {
        v.translate()[axis] as f64 + self.spec.cell[v.cell()].position[axis]
    }

    /// The root reaches infinitely many vertices iff it reaches two translates
    /// of one cell vertex; otherwise at most one vertex per cell is reachable,
    /// so the search stops after `cells + 1` visits.
    fn root_component_infinite(&self) -> bool {
        let root = self.root();
        let mut first: Vec<Option<VertexKey>> = vec![None; self.cells()];
        first[0] = Some(root.clone());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for n in self.neighbors(&v) {
                match &first[n.key.cell()] {
                    Some(k) if *k != n.key => return true,
                    Some(_) => {}
                    None => {
                        first[n.key.cell()] = Some(n.key.clone());
                        stack.push(n.key);
                    }
                }
            }
        }
        false
    }

    /// Confirms that the root reaches every cell vertex at the zero translate
    /// and the root's translates by every ±unit vector within `radius` steps.
    /// Translations are automorphisms, so this implies (strong) connectivity.
    pub fn check_connected(&self, radius: usize) -> Result<(), GraphError> {
        let d = self.dim();
        let mut wanted: HashSet<VertexKey> = (0..self.cells())
            .map(|c| VertexKey::periodic(c, &vec![0; d]))
            .collect();
        for i in 0..d {
            for s in [-1i64, 1] {
                let mut t = vec![0; d];
                t[i] = s;
                wanted.insert(VertexKey::periodic(0, &t));
            }
        }
        let root = self.root();
        let mut seen = HashSet::from([root.clone()]);
        let mut queue = VecDeque::from([(root, 0usize)]);
        wanted.retain(|k| !seen.contains(k));
        while let Some((v, dist)) = queue.pop_front() {
            if wanted.is_empty() {
                return Ok(());
            }
            if dist == radius {
                continue;
            }
            for n in self.neighbors(&v) {
                if seen.insert(n.key.clone()) {
                    wanted.remove(&n.key);
                    queue.push_back((n.key, dist + 1));
                }
            }
        }
        if wanted.is_empty() {
            return Ok(());
        }
        let mut missing: Vec<_> = wanted.into_iter().collect();
        missing.sort();
        Err(GraphError::Disconnected {
            radius,
            detail: format!("unreached {:?}", missing),
        })
    }
}

impl GraphOracle for PeriodicGraph {
    fn name(&self) -> String {
        self.spec.name.clone()
    }

    fn root(&self) -> VertexKey {
        VertexKey::periodic(0, &vec![0; self.dim()])
    }

    fn neighbors(&self, v: &VertexKey) -> Vec<Neighbor> {
        let t = v.translate();
        self.half_edges[v.cell()]
            .iter()
            .map(|h| {
                let tr: Vec<i64> = t.iter().zip(&h.offset).map(|(a, b)| a + b).collect();
                Neighbor {
                    key: VertexKey::periodic(h.target, &tr),
                    multiplicity: h.multiplicity,
                    edge_id: h.edge_id,
                }
            })
            .collect()
    }

    fn meta(&self) -> &OracleMeta {
        &self.meta
    }

    fn representatives(&self) -> Vec<VertexKey> {
        (0..self.cells())
            .map(|c| VertexKey::periodic(c, &vec![0; self.dim()]))
            .collect()
    }

    fn as_periodic(&self) -> Option<&PeriodicGraph> {
        Some(self)
    }
}
