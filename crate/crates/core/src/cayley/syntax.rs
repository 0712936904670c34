//! Text syntax for group models.
//!
//! ```text
//! abelian d=<d> [quot=<v1;v2;...>] [gens=<v1;v2;...>]
//! free k=<k>
//! finite table=<file> gens=<i,j,...>
//! ```
//!
//! Vectors are comma-separated integers. Abelian generators default to the
//! unit vectors and their negatives. A table file holds one row of the
//! multiplication table per line; `#` starts a comment.

use std::collections::HashMap;
use std::path::Path;

use super::{GroupKind, GroupModel};
use crate::error::GroupError;

fn syntax(msg: impl Into<String>) -> GroupError {
    GroupError::Syntax(msg.into())
}

fn ints(s: &str) -> Result<Vec<i64>, GroupError> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| syntax(format!("bad integer `{}`", x))))
        .collect()
}

fn vectors(s: &str) -> Result<Vec<Vec<i64>>, GroupError> {
    s.split(';').filter(|x| !x.trim().is_empty()).map(ints).collect()
}

fn count(fields: &HashMap<&str, &str>, key: &str) -> Result<usize, GroupError> {
    let v = fields.get(key).ok_or_else(|| syntax(format!("missing `{}=`", key)))?;
    v.parse().map_err(|_| syntax(format!("bad value for `{}`: `{}`", key, v)))
}

/// Parses a multiplication table.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>, GroupError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<usize>().map_err(|_| GroupError::BadTable(format!("bad entry `{}`", x))))
                .collect()
        })
        .collect()
}

/// Parses a group description; `table=` paths are resolved against `base`.
pub fn parse_group(text: &str, base: &Path) -> Result<GroupModel, GroupError> {
    let mut words = text.split_whitespace();
    let kind = words.next().ok_or_else(|| syntax("empty group description"))?;
    let mut fields = HashMap::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| syntax(format!("expected key=value, got `{}`", w)))?;
        let allowed: &[&str] = match kind {
            "abelian" => &["d", "quot", "gens"],
            "free" => &["k"],
            "finite" => &["table", "gens"],
            _ => &[],
        };
        if !allowed.contains(&k) {
            return Err(syntax(format!("unexpected key `{}` for `{}`", k, kind)));
        }
        fields.insert(k, v);
    }
    match kind {
        "abelian" => {
            let d = count(&fields, "d")?;
            let mut g = match fields.get("gens") {
                Some(s) => GroupModel::new(GroupKind::free_abelian(d), &vectors(s)?)?,
                None => GroupModel::standard_abelian(d),
            };
            for rho in vectors(fields.get("quot").copied().unwrap_or(""))? {
                g = g.add_relator_abelian(&rho)?;
            }
            Ok(g)
        }
        "free" => Ok(GroupModel::standard_free(count(&fields, "k")?)),
        "finite" => {
            let file = fields.get("table").ok_or_else(|| syntax("missing `table=`"))?;
            let text = std::fs::read_to_string(base.join(file))
                .map_err(|e| GroupError::BadTable(format!("{}: {}", file, e)))?;
            let kind = GroupKind::finite(parse_table(&text)?)?;
            let gens = ints(fields.get("gens").ok_or_else(|| syntax("missing `gens=`"))?)?;
            let gens: Vec<Vec<i64>> = gens.into_iter().map(|x| vec![x]).collect();
            GroupModel::new(kind, &gens)
        }
        other => Err(syntax(format!("unknown group kind `{}` (abelian, free, finite)", other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexKey;

    #[test]
    fn abelian_forms() {
        let g = parse_group("abelian d=2", Path::new(".")).unwrap();
        assert_eq!(g.generators.len(), 4);
        let q = parse_group("abelian d=2 quot=3,0", Path::new(".")).unwrap();
        assert_eq!(q.normal_form(&[4, 1]).unwrap(), VertexKey::new(&[1, 1]));
        let t = parse_group("abelian d=2 gens=1,0;-1,0;0,1;0,-1;1,1;-1,-1", Path::new(".")).unwrap();
        assert_eq!(t.generators.len(), 6);
    }

    #[test]
    fn finite_from_file() {
        let dir = std::env::temp_dir().join(format!("sawgroup-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("c3.txt"), "# C3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        let g = parse_group("finite table=c3.txt gens=1,2", &dir).unwrap();
        assert_eq!(g.generators.len(), 2);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn errors() {
        for bad in ["", "cyclic n=3", "abelian", "abelian d=x", "free k=2 d=1", "abelian d=2 quot=1,a"] {
            assert!(parse_group(bad, Path::new(".")).is_err(), "{}", bad);
        }
    }
}
