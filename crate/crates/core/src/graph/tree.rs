use super::{GraphOracle, Neighbor, OracleMeta, VertexKey};

/// The infinite Δ-regular tree, realised as the Cayley graph of the free
/// product of Δ copies of Z/2: a vertex is a word with no letter repeated
/// twice in a row, and letter `s` either extends the word or cancels it.
#[derive(Clone, Debug)]
pub struct TreeOracle {
    degree: usize,
    meta: OracleMeta,
}

impl TreeOracle {
    pub fn new(degree: usize) -> Self {
        TreeOracle {
            degree,
            meta: OracleMeta {
                is_directed: false,
                claimed_transitive: true,
                simple: true,
                coloring: None,
                infinite: degree >= 2,
            },
        }
    }
}

impl GraphOracle for TreeOracle {
    fn name(&self) -> String {
        if self.degree == 3 {
            "cubic_tree".into()
        } else {
            format!("tree{}", self.degree)
        }
    }

    fn root(&self) -> VertexKey {
        VertexKey::new(&[])
    }

    fn neighbors(&self, v: &VertexKey) -> Vec<Neighbor> {
        let last = v.0.last().copied();
        (0..self.degree as i64)
            .map(|s| {
                let mut key = v.clone();
                if last == Some(s) {
                    key.0.pop();
                } else {
                    key.0.push(s);
                }
                Neighbor {
                    key,
                    multiplicity: 1,
                    edge_id: s as u32,
                }
            })
            .collect()
    }

    fn meta(&self) -> &OracleMeta {
        &self.meta
    }
}
