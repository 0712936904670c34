//! Named graphs with known structure.
//!
//! | name | graph | degree |
//! |---|---|---|
//! | `zd(d)` / `zdD` | hypercubic lattice Z^d | 2d |
//! | `ladder` | two-rail ladder | 3 |
//! | `bridge(D)` / `bridgeD` | Z with every other edge replaced by D−1 parallel edges | D |
//! | `hexagonal` | honeycomb, bipartite colored | 3 |
//! | `triangular` | Z² plus the (1,1) diagonals | 6 |
//! | `square_octagon` | Archimedean (4,8²) | 3 |
//! | `three_twelve` | Archimedean (3,12²) | 3 |
//! | `cubic_tree` | 3-regular tree | 3 |
//! | `hex_semi_fisher` | honeycomb with triangles at the black vertices | 3 |

use super::spec::{Color, EdgeSpec, PeriodicGraphSpec};
use super::{GraphOracle, Neighbor, OracleMeta, PeriodicGraph, TreeOracle, VertexKey};
use crate::error::GraphError;
use crate::estimate::{fisher_forward, semi_fisher_solve};

pub const BUILTIN_NAMES: &[&str] = &[
    "zd(d)",
    "ladder",
    "bridge(D)",
    "hexagonal",
    "triangular",
    "square_octagon",
    "three_twelve",
    "cubic_tree",
    "hex_semi_fisher",
];

/// A built-in graph together with its literature value of μ, when known.
#[derive(Clone, Debug)]
pub enum Builtin {
    Periodic(PeriodicGraph),
    Tree(TreeOracle),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KnownMu {
    pub value: f64,
    pub source: &'static str,
}

/// Parses `zd(2)`, `zd2`, `bridge(4)`, `bridge4` and the fixed names.
pub fn builtin(name: &str) -> Result<Builtin, GraphError> {
    let n = name.trim().to_ascii_lowercase();
    if n == "cubic_tree" {
        return Ok(Builtin::Tree(TreeOracle::new(3)));
    }
    let spec = builtin_spec(&n)?;
    Ok(Builtin::Periodic(PeriodicGraph::new(spec)?))
}

fn parametrised(n: &str, prefix: &str) -> Option<Result<usize, GraphError>> {
    let rest = n.strip_prefix(prefix)?;
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    Some(
        inner
            .parse::<usize>()
            .map_err(|_| GraphError::UnknownBuiltin(n.to_string())),
    )
}

/// Periodic specification of a built-in (every built-in except the tree).
pub fn builtin_spec(name: &str) -> Result<PeriodicGraphSpec, GraphError> {
    let n = name.trim().to_ascii_lowercase();
    if let Some(d) = parametrised(&n, "zd") {
        let d = d?;
        if d == 0 {
            return Err(GraphError::UnknownBuiltin(n));
        }
        return Ok(zd(d));
    }
    if let Some(delta) = parametrised(&n, "bridge") {
        return bridge(delta?);
    }
    match n.as_str() {
        "ladder" => Ok(ladder()),
        "hexagonal" => Ok(hexagonal()),
        "triangular" => Ok(triangular()),
        "square_octagon" => Ok(square_octagon()),
        "three_twelve" => Ok(three_twelve()),
        "hex_semi_fisher" => Ok(hex_semi_fisher()),
        _ => Err(GraphError::UnknownBuiltin(n)),
    }
}

fn zd(d: usize) -> PeriodicGraphSpec {
    let mut s = PeriodicGraphSpec::new(format!("zd{}", d), d, 1);
    for i in 0..d {
        let mut o = vec![0; d];
        o[i] = 1;
        s.add_edge(EdgeSpec::undirected(0, 0, &o));
    }
    s
}

fn ladder() -> PeriodicGraphSpec {
    let mut s = PeriodicGraphSpec::new("ladder", 1, 2);
    s.transitive = true;
    s.add_edge(EdgeSpec::undirected(0, 1, &[0]))
        .add_edge(EdgeSpec::undirected(0, 0, &[1]))
        .add_edge(EdgeSpec::undirected(1, 1, &[1]));
    s
}

fn bridge(delta: usize) -> Result<PeriodicGraphSpec, GraphError> {
    if delta < 2 {
        return Err(GraphError::BridgeDegree(delta));
    }
    let mut s = PeriodicGraphSpec::new(format!("bridge{}", delta), 1, 2);
    s.transitive = true;
    s.set_position(1, &[0.5]);
    s.add_edge(EdgeSpec::undirected(0, 1, &[0]).with_multiplicity(delta as u32 - 1))
        .add_edge(EdgeSpec::undirected(1, 0, &[1]));
    Ok(s)
}

fn hexagonal() -> PeriodicGraphSpec {
    let mut s = PeriodicGraphSpec::new("hexagonal", 2, 2);
    s.transitive = true;
    s.set_color(0, Color::Black).set_color(1, Color::White);
    s.set_position(1, &[1.0 / 3.0, 1.0 / 3.0]);
    s.add_edge(EdgeSpec::undirected(0, 1, &[0, 0]))
        .add_edge(EdgeSpec::undirected(0, 1, &[-1, 0]))
        .add_edge(EdgeSpec::undirected(0, 1, &[0, -1]));
    s
}

fn triangular() -> PeriodicGraphSpec {
    let mut s = PeriodicGraphSpec::new("triangular", 2, 1);
    s.add_edge(EdgeSpec::undirected(0, 0, &[1, 0]))
        .add_edge(EdgeSpec::undirected(0, 0, &[0, 1]))
        .add_edge(EdgeSpec::undirected(0, 0, &[1, 1]));
    s
}

/// Squares centred on lattice points with corners W, S, E, N; E joins the W
/// corner of the square to the right and N the S corner of the square above.
fn square_octagon() -> PeriodicGraphSpec {
    let (w, so, e, n) = (0, 1, 2, 3);
    let mut s = PeriodicGraphSpec::new("square_octagon", 2, 4);
    s.transitive = true;
    s.set_position(w, &[-0.25, 0.0])
        .set_position(so, &[0.0, -0.25])
        .set_position(e, &[0.25, 0.0])
        .set_position(n, &[0.0, 0.25]);
    s.add_edge(EdgeSpec::undirected(w, so, &[0, 0]))
        .add_edge(EdgeSpec::undirected(so, e, &[0, 0]))
        .add_edge(EdgeSpec::undirected(e, n, &[0, 0]))
        .add_edge(EdgeSpec::undirected(n, w, &[0, 0]))
        .add_edge(EdgeSpec::undirected(e, w, &[1, 0]))
        .add_edge(EdgeSpec::undirected(n, so, &[0, 1]));
    s
}

/// Honeycomb with each vertex blown up into a triangle. Corners a0..a2 sit
/// around the black honeycomb vertex and b0..b2 around the white one.
fn three_twelve() -> PeriodicGraphSpec {
    let mut s = PeriodicGraphSpec::new("three_twelve", 2, 6);
    s.transitive = true;
    let ninth = 1.0 / 9.0;
    let pos = [
        [-2.0 * ninth, ninth],
        [ninth, -2.0 * ninth],
        [ninth, ninth],
        [2.0 * ninth, 2.0 * ninth],
        [2.0 * ninth, 5.0 * ninth],
        [5.0 * ninth, 2.0 * ninth],
    ];
    for (i, p) in pos.iter().enumerate() {
        s.set_position(i, p);
    }
    for base in [0, 3] {
        s.add_edge(EdgeSpec::undirected(base, base + 1, &[0, 0]))
            .add_edge(EdgeSpec::undirected(base, base + 2, &[0, 0]))
            .add_edge(EdgeSpec::undirected(base + 1, base + 2, &[0, 0]));
    }
    s.add_edge(EdgeSpec::undirected(2, 3, &[0, 0]))
        .add_edge(EdgeSpec::undirected(0, 5, &[-1, 0]))
        .add_edge(EdgeSpec::undirected(1, 4, &[0, -1]));
    s
}

/// Honeycomb with triangles at the black vertices only. Quasi-transitive:
/// the white vertex and the triangle corners lie in different orbits.
fn hex_semi_fisher() -> PeriodicGraphSpec {
    let mut s = PeriodicGraphSpec::new("hex_semi_fisher", 2, 4);
    let ninth = 1.0 / 9.0;
    s.set_position(0, &[-2.0 * ninth, ninth])
        .set_position(1, &[ninth, -2.0 * ninth])
        .set_position(2, &[ninth, ninth])
        .set_position(3, &[1.0 / 3.0, 1.0 / 3.0]);
    s.set_color(3, Color::White);
    s.add_edge(EdgeSpec::undirected(0, 1, &[0, 0]))
        .add_edge(EdgeSpec::undirected(0, 2, &[0, 0]))
        .add_edge(EdgeSpec::undirected(1, 2, &[0, 0]))
        .add_edge(EdgeSpec::undirected(0, 3, &[-1, 0]))
        .add_edge(EdgeSpec::undirected(1, 3, &[0, -1]))
        .add_edge(EdgeSpec::undirected(2, 3, &[0, 0]));
    s
}

impl Builtin {
    pub fn periodic_spec(&self) -> Option<&PeriodicGraphSpec> {
        match self {
            Builtin::Periodic(p) => Some(p.spec()),
            Builtin::Tree(_) => None,
        }
    }

    /// Exact μ where it is known in closed form or via an exact relation.
    pub fn known_mu(&self) -> Option<KnownMu> {
        let hex = (2.0 + 2f64.sqrt()).sqrt();
        let name = self.name();
        let v = match name.as_str() {
            "ladder" => KnownMu {
                value: (1.0 + 5f64.sqrt()) / 2.0,
                source: "golden mean (Fibonacci correspondence)",
            },
            "hexagonal" => KnownMu {
                value: hex,
                source: "sqrt(2+sqrt(2)) (Duminil-Copin–Smirnov)",
            },
            "cubic_tree" => KnownMu {
                value: 2.0,
                source: "regular tree: Δ−1",
            },
            "zd1" => KnownMu {
                value: 1.0,
                source: "line",
            },
            "three_twelve" => KnownMu {
                value: fisher_forward(hex).ok()?.mu_next,
                source: "Fisher relation x^2+x^3 = 1/mu(hexagonal)",
            },
            "hex_semi_fisher" => KnownMu {
                value: semi_fisher_solve(hex).ok()?.mu_tilde,
                source: "semi-Fisher relation x^3+x^4 = mu(hexagonal)^-2",
            },
            _ => {
                let delta = name.strip_prefix("bridge")?.parse::<f64>().ok()?;
                KnownMu {
                    value: (delta - 1.0).sqrt(),
                    source: "bridge graph: sqrt(Δ−1)",
                }
            }
        };
        Some(v)
    }
}

impl GraphOracle for Builtin {
    fn name(&self) -> String {
        match self {
            Builtin::Periodic(p) => p.name(),
            Builtin::Tree(t) => t.name(),
        }
    }
    fn root(&self) -> VertexKey {
        match self {
            Builtin::Periodic(p) => p.root(),
            Builtin::Tree(t) => t.root(),
        }
    }
    fn neighbors(&self, v: &VertexKey) -> Vec<Neighbor> {
        match self {
            Builtin::Periodic(p) => p.neighbors(v),
            Builtin::Tree(t) => t.neighbors(v),
        }
    }
    fn meta(&self) -> &OracleMeta {
        match self {
            Builtin::Periodic(p) => p.meta(),
            Builtin::Tree(t) => t.meta(),
        }
    }
    fn representatives(&self) -> Vec<VertexKey> {
        match self {
            Builtin::Periodic(p) => p.representatives(),
            Builtin::Tree(t) => t.representatives(),
        }
    }
    fn as_periodic(&self) -> Option<&PeriodicGraph> {
        match self {
            Builtin::Periodic(p) => Some(p),
            Builtin::Tree(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_table() {
        let table = [
            ("zd(1)", 2),
            ("zd(2)", 4),
            ("zd3", 6),
            ("ladder", 3),
            ("hexagonal", 3),
            ("triangular", 6),
            ("square_octagon", 3),
            ("three_twelve", 3),
            ("bridge(2)", 2),
            ("bridge(4)", 4),
            ("bridge7", 7),
            ("cubic_tree", 3),
            ("hex_semi_fisher", 3),
        ];
        for (name, deg) in table {
            let g = builtin(name).unwrap();
            assert_eq!(g.degree(), deg, "{}", name);
            assert!(g.is_regular(), "{}", name);
            if let Some(p) = g.as_periodic() {
                p.check_connected(8).unwrap();
            }
        }
    }

    #[test]
    fn bridge_graph_neighbors() {
        let g = builtin("bridge(4)").unwrap();
        let mut mults: Vec<u32> = g.neighbors(&g.root()).iter().map(|n| n.multiplicity).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 3]);
        assert!(!g.meta().simple);
    }

    #[test]
    fn bad_names() {
        assert_eq!(
            builtin("nosuch").unwrap_err(),
            GraphError::UnknownBuiltin("nosuch".into())
        );
        assert_eq!(builtin("bridge(1)").unwrap_err(), GraphError::BridgeDegree(1));
        assert!(builtin("zd(x)").is_err());
    }

    #[test]
    fn colorings() {
        assert!(builtin("hexagonal").unwrap().meta().coloring.is_some());
        assert!(builtin("hex_semi_fisher").unwrap().meta().coloring.is_some());
        assert!(builtin("zd2").unwrap().meta().coloring.is_none());
    }
}
