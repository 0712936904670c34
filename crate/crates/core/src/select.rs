//! Graph selectors: a built-in name, a spec file, or a group description.

use std::path::Path;

use crate::cayley::{cayley_graph, parse_group, CayleyGraph};
use crate::error::SelectError;
use crate::graph::{builtin, Builtin, GraphOracle, KnownMu, Neighbor, OracleMeta, PeriodicGraph, PeriodicGraphSpec, VertexKey};

const GROUP_KINDS: &[&str] = &["abelian", "free", "finite"];

#[derive(Clone, Debug)]
pub enum AnyGraph {
    Builtin(Builtin),
    Spec(PeriodicGraph),
    Cayley(CayleyGraph),
}

/// Resolves `sel` as a group description (first word `abelian`, `free` or
/// `finite`), then as an existing spec file, then as a built-in name.
pub fn resolve_graph(sel: &str) -> Result<AnyGraph, SelectError> {
    let sel = sel.trim();
    let first = sel.split_whitespace().next().unwrap_or("");
    if GROUP_KINDS.contains(&first) {
        let group = parse_group(sel, Path::new("."))?;
        return Ok(AnyGraph::Cayley(cayley_graph(group)?));
    }
    let path = Path::new(sel);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| SelectError::Io {
            path: sel.to_string(),
            msg: e.to_string(),
        })?;
        return Ok(AnyGraph::Spec(PeriodicGraph::new(PeriodicGraphSpec::parse(&text)?)?));
    }
    Ok(AnyGraph::Builtin(builtin(sel)?))
}

impl AnyGraph {
    pub fn known_mu(&self) -> Option<KnownMu> {
        match self {
            AnyGraph::Builtin(b) => b.known_mu(),
            _ => None,
        }
    }

    pub fn spec(&self) -> Option<&PeriodicGraphSpec> {
        self.as_periodic().map(|p| p.spec())
    }

    pub fn spec_hash(&self) -> Option<String> {
        self.spec().map(|s| s.content_hash())
    }

    fn inner(&self) -> &dyn GraphOracle {
        match self {
            AnyGraph::Builtin(b) => b,
            AnyGraph::Spec(p) => p,
            AnyGraph::Cayley(c) => c,
        }
    }
}

impl GraphOracle for AnyGraph {
    fn name(&self) -> String {
        self.inner().name()
    }
    fn root(&self) -> VertexKey {
        self.inner().root()
    }
    fn neighbors(&self, v: &VertexKey) -> Vec<Neighbor> {
        self.inner().neighbors(v)
    }
    fn meta(&self) -> &OracleMeta {
        self.inner().meta()
    }
    fn representatives(&self) -> Vec<VertexKey> {
        self.inner().representatives()
    }
    fn as_periodic(&self) -> Option<&PeriodicGraph> {
        self.inner().as_periodic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        assert!(matches!(resolve_graph("zd2").unwrap(), AnyGraph::Builtin(_)));
        assert!(matches!(resolve_graph("free k=2").unwrap(), AnyGraph::Cayley(_)));
        assert!(resolve_graph("nosuch").is_err());
        assert!(resolve_graph("abelian d=x").is_err());
        let path = std::env::temp_dir().join(format!("sel-{}.graph", std::process::id()));
        std::fs::write(&path, crate::graph::builtin_spec("ladder").unwrap().to_text()).unwrap();
        let g = resolve_graph(path.to_str().unwrap()).unwrap();
        assert_eq!(g.name(), "ladder");
        assert!(g.spec_hash().is_some() && g.known_mu().is_none());
        std::fs::remove_file(path).ok();
    }
}
