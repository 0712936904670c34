//! Spec-to-spec constructions: Fisher and semi-Fisher triangulation,
//! directed quotients by a translation subgroup, and edge augmentation.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::GraphError;
use crate::graph::{Color, Direction, EdgeSpec, GraphOracle, PeriodicGraph, PeriodicGraphSpec, VertexKey};

fn fail(msg: impl Into<String>) -> GraphError {
    GraphError::Transform(msg.into())
}

fn undirected_only(g: &PeriodicGraph) -> Result<(), GraphError> {
    if g.meta().is_directed {
        return Err(fail("input has directed edges"));
    }
    Ok(())
}

/// Half-edge index (in neighbor order) carrying each edge end, keyed by
/// `(cell, edge_id)`.
fn half_edge_slots(g: &PeriodicGraph) -> HashMap<(usize, u32), usize> {
    let mut slots = HashMap::new();
    for c in 0..g.cells() {
        for (i, h) in g.half_edges(c).iter().enumerate() {
            slots.insert((c, h.edge_id), i);
        }
    }
    slots
}

/// Replaces the cubic cell vertices selected by `blow_up` with triangles.
/// Corner `i` of vertex `u` takes over the `i`-th half-edge of `u` in
/// neighbor order.
fn triangulate(g: &PeriodicGraph, blow_up: &[bool], name: String) -> PeriodicGraphSpec {
    let spec = g.spec();
    let mut first = Vec::with_capacity(spec.cells());
    let mut k = 0;
    for &b in blow_up {
        first.push(k);
        k += if b { 3 } else { 1 };
    }
    let mut out = PeriodicGraphSpec::new(name, spec.dim, k);
    for (u, cv) in spec.cell.iter().enumerate() {
        if blow_up[u] {
            for (i, h) in g.half_edges(u).iter().enumerate() {
                let tp = &spec.cell[h.target].position;
                let p: Vec<f64> = (0..spec.dim)
                    .map(|a| {
                        let p0 = cv.position[a];
                        p0 + (tp[a] + h.offset[a] as f64 - p0) / 3.0
                    })
                    .collect();
                out.set_position(first[u] + i, &p);
            }
            let c = first[u];
            out.add_edge(EdgeSpec::undirected(c, c + 1, &vec![0; spec.dim]))
                .add_edge(EdgeSpec::undirected(c + 1, c + 2, &vec![0; spec.dim]))
                .add_edge(EdgeSpec::undirected(c, c + 2, &vec![0; spec.dim]));
        } else {
            out.set_position(first[u], &cv.position).set_color(first[u], cv.color);
        }
    }
    let slots = half_edge_slots(g);
    let end = |c: usize, id: u32| if blow_up[c] { first[c] + slots[&(c, id)] } else { first[c] };
    for (line, e) in spec.edges.iter().enumerate() {
        let id = 2 * line as u32;
        out.add_edge(EdgeSpec::undirected(end(e.u, id), end(e.v, id + 1), &e.offset).with_multiplicity(e.multiplicity));
    }
    out
}

/// Fisher transform: every vertex of a simple cubic graph becomes a triangle.
///
/// The output does not claim transitivity; the Fisher graph of a transitive
/// cubic graph is transitive only when the input is also arc-transitive.
pub fn fisher_transform(spec: &PeriodicGraphSpec) -> Result<PeriodicGraphSpec, GraphError> {
    let g = PeriodicGraph::new(spec.clone())?;
    undirected_only(&g)?;
    if !g.meta().simple {
        return Err(fail("input is not simple"));
    }
    for c in 0..g.cells() {
        let d = g.half_edges(c).len();
        if d != 3 {
            return Err(fail(format!("not cubic: cell vertex {} has degree {}", c, d)));
        }
    }
    Ok(triangulate(&g, &vec![true; g.cells()], format!("fisher({})", spec.name)))
}

/// Fisher transform at the black vertices of a properly 2-coloured graph.
/// White vertices keep their colour; triangle corners are uncoloured.
pub fn semi_fisher_transform(spec: &PeriodicGraphSpec) -> Result<PeriodicGraphSpec, GraphError> {
    let g = PeriodicGraph::new(spec.clone())?;
    undirected_only(&g)?;
    if let Some(c) = spec.cell.iter().position(|c| c.color == Color::None) {
        return Err(fail(format!("cell vertex {} has no colour", c)));
    }
    for e in &spec.edges {
        let (a, b) = (spec.cell[e.u].color, spec.cell[e.v].color);
        if a == b {
            return Err(fail(format!("improper colouring: edge {}-{} joins two {:?} vertices", e.u, e.v, a)));
        }
    }
    let black: Vec<bool> = spec.cell.iter().map(|c| c.color == Color::Black).collect();
    if !black.contains(&true) {
        return Ok(spec.clone());
    }
    for (c, _) in black.iter().enumerate().filter(|(_, b)| **b) {
        let hs = g.half_edges(c);
        if hs.len() != 3 || hs.iter().any(|h| h.multiplicity != 1) {
            return Err(fail(format!("black cell vertex {} does not have 3 simple edges", c)));
        }
    }
    Ok(triangulate(&g, &black, format!("semifisher({})", spec.name)))
}

fn check_axis(spec: &PeriodicGraphSpec, axis: usize, m: i64) -> Result<(), GraphError> {
    if axis >= spec.dim {
        return Err(fail(format!("axis {} out of range for dim {}", axis, spec.dim)));
    }
    if m < 1 {
        return Err(fail(format!("modulus must be >= 1, got {}", m)));
    }
    Ok(())
}

fn drop_axis(v: &[i64], axis: usize) -> Vec<i64> {
    v.iter().enumerate().filter(|&(i, _)| i != axis).map(|(_, &x)| x).collect()
}

/// Directed quotient by the translations `m·e_axis`.
///
/// The translate coordinate along `axis` is folded into the cell: cell
/// vertex `c` at residue `r` becomes `r * k + c`. Every half-edge becomes a
/// directed edge, and parallel half-edges between the same orbits are
/// aggregated, so multiplicities equal `|∂v ∩ w̄|`.
pub fn quotient_translation(spec: &PeriodicGraphSpec, axis: usize, m: i64) -> Result<PeriodicGraphSpec, GraphError> {
    check_axis(spec, axis, m)?;
    let g = PeriodicGraph::new(spec.clone())?;
    let k = spec.cells();
    let mu = m as usize;
    let mut out = PeriodicGraphSpec::new(format!("{}/{}e{}", spec.name, m, axis), spec.dim - 1, k * mu);
    out.transitive = k == 1;
    for r in 0..mu {
        for (c, cv) in spec.cell.iter().enumerate() {
            out.set_position(r * k + c, &drop_axis_f(&cv.position, axis)).set_color(r * k + c, cv.color);
        }
    }
    let mut agg: BTreeMap<(usize, usize, Vec<i64>), u32> = BTreeMap::new();
    for r in 0..m {
        for c in 0..k {
            for h in g.half_edges(c) {
                let r2 = (r + h.offset[axis]).rem_euclid(m);
                let key = (r as usize * k + c, r2 as usize * k + h.target, drop_axis(&h.offset, axis));
                *agg.entry(key).or_insert(0) += h.multiplicity;
            }
        }
    }
    for ((u, v, o), mult) in agg {
        out.add_edge(EdgeSpec::directed(u, v, &o, mult));
    }
    Ok(out)
}

fn drop_axis_f(v: &[f64], axis: usize) -> Vec<f64> {
    v.iter().enumerate().filter(|&(i, _)| i != axis).map(|(_, &x)| x).collect()
}

/// True when every directed edge `(a, b, o, m)` is matched by `(b, a, -o, m)`
/// after aggregation; undirected edges are symmetric by definition.
pub fn multiplicities_symmetric(spec: &PeriodicGraphSpec) -> bool {
    let mut agg: HashMap<(usize, usize, Vec<i64>), u32> = HashMap::new();
    for e in spec.edges.iter().filter(|e| e.direction == Direction::Directed) {
        *agg.entry((e.u, e.v, e.offset.clone())).or_insert(0) += e.multiplicity;
    }
    agg.iter().all(|((a, b, o), m)| {
        let back = (*b, *a, o.iter().map(|x| -x).collect::<Vec<_>>());
        agg.get(&back) == Some(m)
    })
}

/// Shortest self-avoiding walk whose distinct endpoints lie in one orbit of
/// the translations `m·e_axis`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitWalkCertificate {
    pub length: usize,
    pub witness: Vec<VertexKey>,
    /// L = 1 or L = 2: the degenerate cases of the quotient inequality.
    pub degenerate: bool,
}

/// Finds L by breadth-first search from every cell vertex. A shortest walk
/// between two vertices never repeats a vertex, so the first orbit-closing
/// vertex reached gives a shortest self-avoiding witness.
pub fn shortest_same_orbit(
    spec: &PeriodicGraphSpec,
    axis: usize,
    m: i64,
    max_len: usize,
) -> Result<OrbitWalkCertificate, GraphError> {
    check_axis(spec, axis, m)?;
    let g = PeriodicGraph::new(spec.clone())?;
    let mut best: Option<Vec<VertexKey>> = None;
    for c in 0..g.cells() {
        let start = VertexKey::periodic(c, &vec![0; spec.dim]);
        let limit = best.as_ref().map_or(max_len, |w| w.len() - 1);
        if let Some(path) = bfs_orbit(&g, &start, axis, m, limit) {
            if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                best = Some(path);
            }
        }
    }
    let witness = best.ok_or_else(|| fail(format!("no orbit-closing walk of length <= {}", max_len)))?;
    let length = witness.len() - 1;
    Ok(OrbitWalkCertificate {
        length,
        witness,
        degenerate: length <= 2,
    })
}

fn bfs_orbit(g: &PeriodicGraph, start: &VertexKey, axis: usize, m: i64, limit: usize) -> Option<Vec<VertexKey>> {
    let same_orbit = |v: &VertexKey| {
        v.cell() == start.cell()
            && v.translate()
                .iter()
                .enumerate()
                .all(|(i, &x)| if i == axis { x != 0 && x % m == 0 } else { x == 0 })
    };
    let mut parent: HashMap<VertexKey, VertexKey> = HashMap::new();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        if d == limit {
            continue;
        }
        for n in g.neighbors(&v) {
            if !seen.insert(n.key.clone()) {
                continue;
            }
            parent.insert(n.key.clone(), v.clone());
            if same_orbit(&n.key) {
                let mut path = vec![n.key.clone()];
                while let Some(p) = parent.get(path.last().expect("nonempty")) {
                    path.push(p.clone());
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back((n.key, d + 1));
        }
    }
    None
}

/// Adds offset edges to a periodic graph. An edge already present is an
/// error unless `parallel` is set, in which case its multiplicity grows.
pub fn augment_edges(
    spec: &PeriodicGraphSpec,
    new_edges: &[EdgeSpec],
    parallel: bool,
) -> Result<PeriodicGraphSpec, GraphError> {
    if new_edges.is_empty() {
        return Err(fail("no edges to add"));
    }
    let mut out = spec.clone();
    out.name = format!("{}+{}", spec.name, new_edges.len());
    out.transitive = false;
    for e in new_edges {
        match out.edges.iter_mut().find(|x| x.same_edge(e)) {
            Some(x) if parallel => x.multiplicity += e.multiplicity,
            Some(_) => {
                return Err(fail(format!(
                    "edge {}-{} {:?} already present (request parallel edges explicitly)",
                    e.u, e.v, e.offset
                )))
            }
            None => {
                out.add_edge(e.clone());
            }
        }
    }
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{count_saws, EnumOptions};
    use crate::graph::builtin_spec;

    fn degrees(spec: &PeriodicGraphSpec) -> Vec<usize> {
        let g = PeriodicGraph::new(spec.clone()).unwrap();
        (0..g.cells()).map(|c| g.degree_of(&VertexKey::periodic(c, &vec![0; spec.dim]))).collect()
    }

    fn counts(spec: &PeriodicGraphSpec, n: usize) -> Vec<num_bigint::BigUint> {
        let g = PeriodicGraph::new(spec.clone()).unwrap();
        count_saws(&g, n, &EnumOptions::default().with_workers(1)).unwrap().counts
    }

    #[test]
    fn fisher_of_honeycomb_is_three_twelve() {
        let f = fisher_transform(&builtin_spec("hexagonal").unwrap()).unwrap();
        assert_eq!(f.cells(), 6);
        assert_eq!(f.edges.len(), 3 + 6);
        assert!(degrees(&f).iter().all(|&d| d == 3));
        assert_eq!(counts(&f, 10), counts(&builtin_spec("three_twelve").unwrap(), 10));
        let want = builtin_spec("three_twelve").unwrap();
        for (a, b) in f.cell.iter().zip(&want.cell) {
            assert!(a.position.iter().zip(&b.position).all(|(x, y)| (x - y).abs() < 1e-12));
        }
    }

    #[test]
    fn fisher_preconditions() {
        assert!(fisher_transform(&builtin_spec("zd2").unwrap()).is_err());
        let q = quotient_translation(&builtin_spec("hexagonal").unwrap(), 0, 3).unwrap();
        assert!(fisher_transform(&q).is_err());
        let twice = fisher_transform(&fisher_transform(&builtin_spec("hexagonal").unwrap()).unwrap()).unwrap();
        assert_eq!(twice.cells(), 18);
        assert!(degrees(&twice).iter().all(|&d| d == 3));
    }

    #[test]
    fn fisher_ladder_has_triangles() {
        let f = fisher_transform(&builtin_spec("ladder").unwrap()).unwrap();
        assert_eq!(f.cells(), 6);
        assert!(degrees(&f).iter().all(|&d| d == 3));
        // girth 3: a neighbor of the root is also reached in two steps
        let g = PeriodicGraph::new(f).unwrap();
        let closing = g
            .neighbors(&g.root())
            .iter()
            .filter(|n| {
                let t = crate::enumerate::count_saws_two_point(&g, &n.key, 2, &EnumOptions::default()).unwrap();
                t.counts[2] == 1u32.into()
            })
            .count();
        assert_eq!(closing, 2);
    }

    #[test]
    fn semi_fisher_of_honeycomb() {
        let s = semi_fisher_transform(&builtin_spec("hexagonal").unwrap()).unwrap();
        assert_eq!(s.cells(), 4);
        assert_eq!(counts(&s, 10), counts(&builtin_spec("hex_semi_fisher").unwrap(), 10));
        assert_eq!(degrees(&s), vec![3, 3, 3, 3]);
    }

    #[test]
    fn semi_fisher_preconditions() {
        let mut all_white = builtin_spec("hexagonal").unwrap();
        all_white.set_color(0, Color::White);
        assert!(semi_fisher_transform(&all_white).is_err());
        let mut blacks = builtin_spec("hexagonal").unwrap();
        blacks.set_color(1, Color::Black);
        assert!(semi_fisher_transform(&blacks).is_err());
        assert!(semi_fisher_transform(&builtin_spec("zd2").unwrap()).is_err());
    }

    #[test]
    fn semi_fisher_without_black_is_identity() {
        // a proper colouring with no black vertex leaves no room for edges
        let mut lone = PeriodicGraphSpec::new("lone", 1, 1);
        lone.set_color(0, Color::White);
        assert_eq!(semi_fisher_transform(&lone).unwrap(), lone);
    }

    #[test]
    fn cylinder_quotients() {
        let z2 = builtin_spec("zd2").unwrap();
        let q = quotient_translation(&z2, 0, 3).unwrap();
        assert_eq!((q.dim, q.cells()), (1, 3));
        assert!(degrees(&q).iter().all(|&d| d == 4));
        assert!(multiplicities_symmetric(&q));
        let q2 = quotient_translation(&z2, 0, 2).unwrap();
        let to_other: u32 = q2
            .edges
            .iter()
            .filter(|e| e.u == 0 && e.v == 1 && e.offset == vec![0])
            .map(|e| e.multiplicity)
            .sum();
        assert_eq!(to_other, 2);
    }

    #[test]
    fn line_collapses_to_loops() {
        let q = quotient_translation(&builtin_spec("zd1").unwrap(), 0, 1).unwrap();
        assert_eq!((q.dim, q.cells()), (0, 1));
        assert_eq!(q.edges, vec![EdgeSpec::directed(0, 0, &[], 2)]);
        let g = PeriodicGraph::new(q).unwrap();
        assert_eq!(g.degree_of(&g.root()), 0);
    }

    #[test]
    fn orbit_lengths() {
        let z2 = builtin_spec("zd2").unwrap();
        for m in 1..=4 {
            let c = shortest_same_orbit(&z2, 0, m, 20).unwrap();
            assert_eq!(c.length, m as usize);
            assert_eq!(c.degenerate, m <= 2);
            assert_eq!(c.witness.len(), m as usize + 1);
        }
        assert!(shortest_same_orbit(&z2, 0, 9, 4).is_err());
        assert!(quotient_translation(&z2, 2, 3).is_err());
        assert!(quotient_translation(&z2, 0, 0).is_err());
    }

    #[test]
    fn augmentation() {
        let z2 = builtin_spec("zd2").unwrap();
        let t = augment_edges(&z2, &[EdgeSpec::undirected(0, 0, &[1, 1])], false).unwrap();
        assert_eq!(degrees(&t), vec![6]);
        assert_eq!(counts(&t, 6), counts(&builtin_spec("triangular").unwrap(), 6));
        assert!(augment_edges(&z2, &[], false).is_err());
        assert!(augment_edges(&z2, &[EdgeSpec::undirected(0, 0, &[-1, 0])], false).is_err());
        let p = augment_edges(&z2, &[EdgeSpec::undirected(0, 0, &[1, 0])], true).unwrap();
        assert_eq!(degrees(&p), vec![6]);
        assert!(!PeriodicGraph::new(p).unwrap().meta().simple);
        let l = augment_edges(&builtin_spec("ladder").unwrap(), &[EdgeSpec::undirected(0, 1, &[1])], false).unwrap();
        assert_eq!(degrees(&l), vec![4, 4]);
    }
}
