//! Finite descriptions of infinite, locally finite graphs.
//!
//! Every graph is exposed through [`GraphOracle`]: a root vertex, a canonical
//! [`VertexKey`] per vertex, and a deterministic neighbor list. Walk
//! enumeration only ever touches a bounded neighborhood of the root, which is
//! materialized on demand as a [`Ball`].

mod ball;
pub mod builtin;
mod iso;
mod periodic;
pub mod spec;
mod tree;

use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

pub use ball::{materialize_ball, materialize_ball_capped, Ball, BallEdge, DEFAULT_BALL_CAP};
pub use builtin::{builtin, builtin_spec, Builtin, KnownMu, BUILTIN_NAMES};
pub use iso::{local_transitivity_check, TransitivityReport, ISO_BALL_CAP};
pub use periodic::{HalfEdge, PeriodicGraph};
pub use spec::{parse_edge, CellVertex, Color, Direction, EdgeSpec, PeriodicGraphSpec};
pub use tree::TreeOracle;

/// Canonical vertex label. Equal vertices have equal keys.
///
/// Periodic graphs use `[cell, t_1, .., t_d]`; Cayley graphs use the group
/// normal form; trees use the reduced path label from the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexKey(pub SmallVec<[i64; 4]>);

impl VertexKey {
    pub fn new(parts: &[i64]) -> Self {
        VertexKey(SmallVec::from_slice(parts))
    }

    pub fn periodic(cell: usize, translate: &[i64]) -> Self {
        let mut v = SmallVec::with_capacity(translate.len() + 1);
        v.push(cell as i64);
        v.extend_from_slice(translate);
        VertexKey(v)
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    /// Cell index of a periodic key.
    pub fn cell(&self) -> usize {
        self.0[0] as usize
    }

    /// Translate vector of a periodic key.
    pub fn translate(&self) -> &[i64] {
        &self.0[1..]
    }
}

impl fmt::Debug for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, "]")
    }
}

/// One outgoing edge bundle: `multiplicity` parallel edges to `key`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub key: VertexKey,
    pub multiplicity: u32,
    pub edge_id: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OracleMeta {
    pub is_directed: bool,
    pub claimed_transitive: bool,
    /// No loops and no parallel edges anywhere.
    pub simple: bool,
    /// Cell colors as declared, when the graph carries a coloring.
    pub coloring: Option<Vec<Color>>,
    /// Walks from the root can be arbitrarily long.
    pub infinite: bool,
}

/// Uniform read-only view of a locally finite graph.
pub trait GraphOracle: Send + Sync {
    fn name(&self) -> String;

    fn root(&self) -> VertexKey;

    /// Out-neighbors of `v` in the fixed enumeration order. Loops may appear;
    /// self-avoiding walks never use them.
    fn neighbors(&self, v: &VertexKey) -> Vec<Neighbor>;

    fn meta(&self) -> &OracleMeta;

    /// One vertex from each orbit class the graph knows about. For periodic
    /// graphs these are the cell vertices at the zero translate.
    fn representatives(&self) -> Vec<VertexKey> {
        vec![self.root()]
    }

    fn as_periodic(&self) -> Option<&PeriodicGraph> {
        None
    }

    /// Number of usable (non-loop) out-edges at `v`, counted with multiplicity.
    fn degree_of(&self, v: &VertexKey) -> usize {
        self.neighbors(v)
            .iter()
            .filter(|n| &n.key != v)
            .map(|n| n.multiplicity as usize)
            .sum()
    }

    /// Maximum usable degree over the representatives; the Δ of a regular graph.
    fn degree(&self) -> usize {
        self.representatives()
            .iter()
            .map(|v| self.degree_of(v))
            .max()
            .unwrap_or(0)
    }

    fn is_regular(&self) -> bool {
        let reps = self.representatives();
        let d0 = self.degree_of(&reps[0]);
        reps.iter().all(|v| self.degree_of(v) == d0)
    }
}

impl<T: GraphOracle + ?Sized> GraphOracle for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn root(&self) -> VertexKey {
        (**self).root()
    }
    fn neighbors(&self, v: &VertexKey) -> Vec<Neighbor> {
        (**self).neighbors(v)
    }
    fn meta(&self) -> &OracleMeta {
        (**self).meta()
    }
    fn representatives(&self) -> Vec<VertexKey> {
        (**self).representatives()
    }
    fn as_periodic(&self) -> Option<&PeriodicGraph> {
        (**self).as_periodic()
    }
}
