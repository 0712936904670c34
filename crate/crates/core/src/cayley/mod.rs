//! Cayley graphs of groups with terminating normal forms: finitely generated
//! abelian groups (integer lattice reduction), free groups (free reduction)
//! and finite groups given by a multiplication table.

mod syntax;

use std::collections::BTreeMap;

use crate::error::GroupError;
use crate::graph::{GraphOracle, Neighbor, OracleMeta, VertexKey};

pub use syntax::{parse_group, parse_table};

/// Group elements are stored in normal form: an integer vector for abelian
/// groups, a freely reduced word (letter `±(i+1)` for generator `i` and its
/// inverse) for free groups, and a single table index for finite groups.
pub type Element = VertexKey;

#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    /// `Z^d` modulo the lattice spanned by `quotient` (kept in echelon form).
    FreeAbelian { d: usize, quotient: Vec<Vec<i64>> },
    Free { k: usize },
    Finite { table: Vec<Vec<usize>>, identity: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupModel {
    pub kind: GroupKind,
    /// Generator list in normal form; repeated entries give parallel edges.
    pub generators: Vec<Element>,
}

/// Integer row echelon basis of the lattice spanned by `rows`: pivots are
/// positive, pivot columns strictly increase, entries left of a pivot vanish.
fn echelon(rows: &[Vec<i64>], d: usize) -> Vec<Vec<i64>> {
    let mut rest: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut out = Vec::new();
    for col in 0..d {
        loop {
            let mut live: Vec<usize> = (0..rest.len()).filter(|&i| rest[i][col] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            live.sort_by_key(|&i| rest[i][col].abs());
            let p = live[0];
            let pivot = rest[p].clone();
            for &i in &live[1..] {
                let q = rest[i][col] / pivot[col];
                for (x, y) in rest[i].iter_mut().zip(&pivot) {
                    *x -= q * y;
                }
            }
        }
        if let Some(i) = rest.iter().position(|r| r[col] != 0) {
            let mut r = rest.swap_remove(i);
            if r[col] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
        rest.retain(|r| r.iter().any(|&x| x != 0));
    }
    out
}

fn reduce_word(word: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn check_table(table: &[Vec<usize>]) -> Result<usize, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::BadTable("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::BadTable(format!("row {} has {} entries, expected {}", i, row.len(), n)));
        }
        let mut seen = vec![false; n];
        for &x in row {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(GroupError::BadTable(format!("row {} is not a permutation", i)));
            }
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| GroupError::BadTable("no identity element".into()))?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(GroupError::BadTable(format!("not associative at ({}, {}, {})", a, b, c)));
                }
            }
        }
    }
    Ok(identity)
}

impl GroupKind {
    pub fn free_abelian(d: usize) -> Self {
        GroupKind::FreeAbelian { d, quotient: Vec::new() }
    }

    pub fn finite(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let identity = check_table(&table)?;
        Ok(GroupKind::Finite { table, identity })
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupKind::FreeAbelian { d, .. } => VertexKey::new(&vec![0; *d]),
            GroupKind::Free { .. } => VertexKey::new(&[]),
            GroupKind::Finite { identity, .. } => VertexKey::new(&[*identity as i64]),
        }
    }

    /// Normal form of a raw representative: any integer vector, any word, or
    /// a table index.
    pub fn normal_form(&self, raw: &[i64]) -> Result<Element, GroupError> {
        match self {
            GroupKind::FreeAbelian { d, quotient } => {
                if raw.len() != *d {
                    return Err(GroupError::BadElement(format!("expected {} coordinates, got {:?}", d, raw)));
                }
                let mut x = raw.to_vec();
                for row in quotient {
                    let j = row.iter().position(|&v| v != 0).expect("nonzero row");
                    let q = x[j].div_euclid(row[j]);
                    for (a, b) in x.iter_mut().zip(row) {
                        *a -= q * b;
                    }
                }
                Ok(VertexKey::new(&x))
            }
            GroupKind::Free { k } => {
                if let Some(&l) = raw.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > *k) {
                    return Err(GroupError::BadElement(format!("letter {} outside a free group of rank {}", l, k)));
                }
                Ok(VertexKey::new(&reduce_word(raw)))
            }
            GroupKind::Finite { table, .. } => match raw {
                [x] if (*x as usize) < table.len() && *x >= 0 => Ok(VertexKey::new(raw)),
                _ => Err(GroupError::BadElement(format!("{:?} is not an element of a group of order {}", raw, table.len()))),
            },
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match self {
            GroupKind::FreeAbelian { .. } => {
                let s: Vec<i64> = a.parts().iter().zip(b.parts()).map(|(x, y)| x + y).collect();
                self.normal_form(&s).expect("same dimension")
            }
            GroupKind::Free { .. } => {
                let w: Vec<i64> = a.parts().iter().chain(b.parts()).copied().collect();
                VertexKey::new(&reduce_word(&w))
            }
            GroupKind::Finite { table, .. } => {
                VertexKey::new(&[table[a.parts()[0] as usize][b.parts()[0] as usize] as i64])
            }
        }
    }

    pub fn inverse(&self, a: &Element) -> Element {
        match self {
            GroupKind::FreeAbelian { .. } => {
                let v: Vec<i64> = a.parts().iter().map(|x| -x).collect();
                self.normal_form(&v).expect("same dimension")
            }
            GroupKind::Free { .. } => {
                let w: Vec<i64> = a.parts().iter().rev().map(|x| -x).collect();
                VertexKey::new(&w)
            }
            GroupKind::Finite { table, identity } => {
                let x = a.parts()[0] as usize;
                let inv = (0..table.len()).find(|&y| table[x][y] == *identity).expect("latin square");
                VertexKey::new(&[inv as i64])
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            GroupKind::FreeAbelian { d, quotient } if quotient.is_empty() => format!("Z^{}", d),
            GroupKind::FreeAbelian { d, quotient } => {
                let rows: Vec<String> = quotient
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                format!("Z^{}/<{}>", d, rows.join(";"))
            }
            GroupKind::Free { k } => format!("F{}", k),
            GroupKind::Finite { table, .. } => format!("G{}", table.len()),
        }
    }
}

fn sorted(mut v: Vec<Element>) -> Vec<Element> {
    v.sort();
    v
}

impl GroupModel {
    /// Validates `S = S⁻¹` (as a multiset) and `id ∉ S`.
    pub fn new(kind: GroupKind, raw_gens: &[Vec<i64>]) -> Result<Self, GroupError> {
        let generators = raw_gens
            .iter()
            .map(|g| kind.normal_form(g))
            .collect::<Result<Vec<_>, _>>()?;
        let id = kind.identity();
        if generators.contains(&id) {
            return Err(GroupError::IdentityGenerator);
        }
        let m = GroupModel { kind, generators };
        m.check_inverse_closed()?;
        Ok(m)
    }

    /// `Z^d` with the unit vectors and their negatives.
    pub fn standard_abelian(d: usize) -> Self {
        let mut gens = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut v = vec![0; d];
                v[i] = s;
                gens.push(v);
            }
        }
        GroupModel::new(GroupKind::free_abelian(d), &gens).expect("standard generators")
    }

    /// Free group on `k` letters with generators `a_i^{±1}`.
    pub fn standard_free(k: usize) -> Self {
        let gens: Vec<Vec<i64>> = (1..=k as i64).flat_map(|i| [vec![i], vec![-i]]).collect();
        GroupModel::new(GroupKind::Free { k }, &gens).expect("standard generators")
    }

    fn check_inverse_closed(&self) -> Result<(), GroupError> {
        let inv = sorted(self.generators.iter().map(|g| self.kind.inverse(g)).collect());
        let gens = sorted(self.generators.clone());
        if let Some(g) = gens.iter().find(|g| gens.iter().filter(|x| x == g).count() != inv.iter().filter(|x| x == g).count()) {
            return Err(GroupError::NotInverseClosed(g.to_string()));
        }
        Ok(())
    }

    pub fn identity(&self) -> Element {
        self.kind.identity()
    }

    pub fn normal_form(&self, raw: &[i64]) -> Result<Element, GroupError> {
        self.kind.normal_form(raw)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.kind.mul(a, b)
    }

    pub fn inverse(&self, a: &Element) -> Element {
        self.kind.inverse(a)
    }

    /// Product of the generators with the given indices.
    pub fn eval(&self, word: &[usize]) -> Element {
        word.iter()
            .fold(self.identity(), |acc, &i| self.mul(&acc, &self.generators[i]))
    }

    /// Adds `w` and `w⁻¹` (once if `w` is an involution) to the generators.
    pub fn add_generator(&self, raw: &[i64]) -> Result<GroupModel, GroupError> {
        let w = self.normal_form(raw)?;
        if w == self.identity() {
            return Err(GroupError::IdentityGenerator);
        }
        if self.generators.contains(&w) {
            return Err(GroupError::AlreadyGenerator(w.to_string()));
        }
        let mut out = self.clone();
        let inv = self.inverse(&w);
        out.generators.push(w.clone());
        if inv != w {
            out.generators.push(inv);
        }
        Ok(out)
    }

    /// Quotient of an abelian model by one more relator. Generators that
    /// collapse onto each other become parallel edges, and generators that
    /// collapse to the identity become loops.
    pub fn add_relator_abelian(&self, rho: &[i64]) -> Result<GroupModel, GroupError> {
        let GroupKind::FreeAbelian { d, quotient } = &self.kind else {
            return Err(GroupError::NotAbelian);
        };
        if rho.len() != *d {
            return Err(GroupError::BadElement(format!("relator {:?} has the wrong length", rho)));
        }
        if self.normal_form(rho)? == self.identity() {
            return Err(GroupError::TrivialRelator);
        }
        let mut rows = quotient.clone();
        rows.push(rho.to_vec());
        let kind = GroupKind::FreeAbelian {
            d: *d,
            quotient: echelon(&rows, *d),
        };
        let generators = self
            .generators
            .iter()
            .map(|g| kind.normal_form(g.parts()).expect("same dimension"))
            .collect();
        Ok(GroupModel { kind, generators })
    }

    pub fn describe(&self) -> String {
        self.kind.describe()
    }
}

/// Cayley graph as a neighbor oracle rooted at the identity.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    group: GroupModel,
    name: String,
    meta: OracleMeta,
}

impl CayleyGraph {
    pub fn group(&self) -> &GroupModel {
        &self.group
    }
}

/// Builds the Cayley graph `g ~ g·s`. Distinct generators with equal
/// products give parallel edges; an involution gives a single edge.
pub fn cayley_graph(group: GroupModel) -> Result<CayleyGraph, GroupError> {
    group.check_inverse_closed()?;
    let mut c = CayleyGraph {
        name: format!("cayley({})", group.describe()),
        group,
        meta: OracleMeta {
            is_directed: false,
            claimed_transitive: true,
            simple: true,
            coloring: None,
            infinite: false,
        },
    };
    let id = c.group.identity();
    let ns = c.neighbors(&id);
    c.meta.simple = ns.iter().all(|n| n.multiplicity == 1 && n.key != id);
    c.meta.infinite = match &c.group.kind {
        GroupKind::FreeAbelian { d, quotient } => {
            let mut rows = quotient.clone();
            rows.extend(c.group.generators.iter().map(|g| g.parts().to_vec()));
            echelon(&rows, *d).len() > quotient.len()
        }
        GroupKind::Free { .. } => !c.group.generators.is_empty(),
        GroupKind::Finite { .. } => false,
    };
    Ok(c)
}

impl GraphOracle for CayleyGraph {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn root(&self) -> VertexKey {
        self.group.identity()
    }

    fn neighbors(&self, v: &VertexKey) -> Vec<Neighbor> {
        let mut by_key: BTreeMap<VertexKey, (u32, u32)> = BTreeMap::new();
        for (i, s) in self.group.generators.iter().enumerate() {
            let e = by_key.entry(self.group.mul(v, s)).or_insert((0, i as u32));
            e.0 += 1;
        }
        by_key
            .into_iter()
            .map(|(key, (multiplicity, edge_id))| Neighbor {
                key,
                multiplicity,
                edge_id,
            })
            .collect()
    }

    fn meta(&self) -> &OracleMeta {
        &self.meta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_reduces() {
        let e = echelon(&[vec![4, 6], vec![6, 4]], 2);
        assert_eq!(e.len(), 2);
        assert!(e[0][0] > 0 && e[1][0] == 0 && e[1][1] > 0);
        // determinant is preserved up to sign: |16 - 36| = 20
        assert_eq!(e[0][0] * e[1][1], 20);
    }

    #[test]
    fn abelian_normal_forms() {
        let z2 = GroupModel::standard_abelian(2).add_relator_abelian(&[3, 0]).unwrap();
        assert_eq!(z2.normal_form(&[-1, 5]).unwrap(), VertexKey::new(&[2, 5]));
        assert_eq!(z2.inverse(&VertexKey::new(&[1, 1])), VertexKey::new(&[2, -1]));
    }

    #[test]
    fn free_reduction() {
        let f = GroupModel::standard_free(2);
        let a = f.normal_form(&[1, 2, -2, -1, 1]).unwrap();
        assert_eq!(a, VertexKey::new(&[1]));
        assert!(f.normal_form(&[3]).is_err());
        let w = f.normal_form(&[1, 2]).unwrap();
        assert_eq!(f.mul(&w, &f.inverse(&w)), f.identity());
    }

    #[test]
    fn finite_tables() {
        let c3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = GroupModel::new(GroupKind::finite(c3).unwrap(), &[vec![1], vec![2]]).unwrap();
        assert_eq!(g.inverse(&VertexKey::new(&[1])), VertexKey::new(&[2]));
        assert!(GroupKind::finite(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(GroupKind::finite(vec![vec![1, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn generator_validation() {
        assert_eq!(
            GroupModel::new(GroupKind::free_abelian(1), &[vec![1]]).unwrap_err(),
            GroupError::NotInverseClosed("[1]".into())
        );
        assert_eq!(
            GroupModel::new(GroupKind::free_abelian(1), &[vec![0]]).unwrap_err(),
            GroupError::IdentityGenerator
        );
        let z2 = GroupModel::standard_abelian(2);
        let t = z2.add_generator(&[1, 1]).unwrap();
        assert_eq!(t.generators.len(), 6);
        assert!(matches!(t.add_generator(&[-1, -1]), Err(GroupError::AlreadyGenerator(_))));
        assert_eq!(z2.add_relator_abelian(&[0, 0]).unwrap_err(), GroupError::TrivialRelator);
        assert_eq!(GroupModel::standard_free(1).add_relator_abelian(&[1]).unwrap_err(), GroupError::NotAbelian);
    }

    #[test]
    fn involutions_give_single_edges() {
        let c2 = GroupModel::new(GroupKind::finite(vec![vec![0, 1], vec![1, 0]]).unwrap(), &[vec![1]]).unwrap();
        let g = cayley_graph(c2).unwrap();
        assert_eq!(g.degree_of(&g.root()), 1);
    }

    #[test]
    fn collisions_and_loops() {
        // Z/2 with generators ±1: both land on 1
        let z = GroupModel::standard_abelian(1).add_relator_abelian(&[2]).unwrap();
        let g = cayley_graph(z).unwrap();
        let ns = g.neighbors(&g.root());
        assert_eq!((ns.len(), ns[0].multiplicity), (1, 2));
        assert!(!g.meta().simple);
        let trivial = GroupModel::standard_abelian(2)
            .add_relator_abelian(&[1, 0])
            .unwrap()
            .add_relator_abelian(&[0, 1])
            .unwrap();
        let g = cayley_graph(trivial).unwrap();
        assert_eq!(g.degree_of(&g.root()), 0);
        assert_eq!(g.neighbors(&g.root())[0].key, g.root());
    }
}
