use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::maps::{Arborescence, Constellation};

/// A rooted constellation with an arborescence toward an arbitrary vertex `v0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePointedConstellation {
    constellation: Constellation,
    arborescence: Arborescence,
}

impl TreePointedConstellation {
    pub fn new(constellation: Constellation, arborescence: Arborescence) -> Result<Self> {
        if constellation.root().is_none() {
            return Err(Error::Structural("tree-pointed constellations are rooted".into()));
        }
        arborescence.validate(&constellation)?;
        Ok(TreePointedConstellation { constellation, arborescence })
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn arborescence(&self) -> &Arborescence {
        &self.arborescence
    }

    pub fn pointed_vertex(&self) -> usize {
        self.arborescence.root_vertex()
    }

    /// `p_t − [type(v0) = t]`, which is also the number of type-t tree edges.
    pub fn reduced_type(&self) -> Vec<usize> {
        let mut p = self.constellation.type_vector();
        p[self.constellation.vertex_type(self.pointed_vertex())] -= 1;
        p
    }

    pub fn is_tree_rooted(&self) -> bool {
        self.constellation.root_vertex() == Some(self.pointed_vertex())
    }

    /// Relabels hyperedges canonically from the root.
    pub fn canonical(&self) -> Self {
        let (c, vmap, beta) = self.constellation.canonical_rooted().expect("rooted");
        TreePointedConstellation { arborescence: self.arborescence.remap(&vmap, &beta), constellation: c }
    }
}

/// A rooted, vertex-labelled constellation with an arborescence toward its root
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeRootedConstellation {
    constellation: Constellation,
    arborescence: Arborescence,
}

impl TreeRootedConstellation {
    pub fn new(constellation: Constellation, arborescence: Arborescence) -> Result<Self> {
        let root_vertex = constellation
            .root_vertex()
            .ok_or_else(|| Error::Structural("tree-rooted constellations are rooted".into()))?;
        if constellation.labels().is_none() {
            return Err(Error::Structural("tree-rooted constellations here are vertex-labelled".into()));
        }
        if arborescence.root_vertex() != root_vertex {
            return Err(Error::Structural("the arborescence must point to the root vertex".into()));
        }
        constellation.validate()?;
        arborescence.validate(&constellation)?;
        Ok(TreeRootedConstellation { constellation, arborescence })
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn arborescence(&self) -> &Arborescence {
        &self.arborescence
    }

    pub fn labels(&self) -> &[usize] {
        self.constellation.labels().expect("labelled")
    }

    pub fn vertex_with_label(&self, t: usize, label: usize) -> Option<usize> {
        self.constellation.vertex_with_label(t, label)
    }

    pub fn vertex_compositions(&self) -> Vec<Vec<usize>> {
        self.constellation.vertex_compositions().expect("labelled")
    }

    pub fn canonical(&self) -> Self {
        let (c, vmap, beta) = self.constellation.canonical_rooted().expect("rooted");
        TreeRootedConstellation { arborescence: self.arborescence.remap(&vmap, &beta), constellation: c }
    }

    pub fn is_canonical(&self) -> bool {
        self.constellation.is_canonical_rooted()
    }

    pub fn to_tree_pointed(&self) -> TreePointedConstellation {
        TreePointedConstellation {
            constellation: self.constellation.clone().without_labels(),
            arborescence: self.arborescence.clone(),
        }
    }
}

fn serialize_tree<S: Serializer>(c: &Constellation, a: &Arborescence, s: S) -> std::result::Result<S::Ok, S::Error> {
    let edges: std::collections::BTreeMap<String, [usize; 2]> = (0..c.vertex_count())
        .filter_map(|v| a.parent_hyperedge(v).map(|h| (format!("{}", v + 1), [h + 1, c.vertex_type(v) + 1])))
        .collect();
    let mut m = s.serialize_map(Some(3))?;
    m.serialize_entry("constellation", c)?;
    m.serialize_entry("arborescence", &edges)?;
    m.serialize_entry("root_vertex", &(a.root_vertex() + 1))?;
    m.end()
}

impl Serialize for TreeRootedConstellation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_tree(&self.constellation, &self.arborescence, s)
    }
}

impl Serialize for TreePointedConstellation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_tree(&self.constellation, &self.arborescence, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    #[test]
    fn pointing_at_the_root_vertex_is_tree_rooted() {
        let id = Permutation::identity(1);
        let c = Constellation::from_permutations(&[id.clone(), id.clone(), id]).unwrap().with_root(0).unwrap();
        let root_vertex = c.root_vertex().unwrap();
        for v0 in 0..3 {
            let a = Arborescence::enumerate(&c, v0).pop().unwrap();
            let tp = TreePointedConstellation::new(c.clone(), a).unwrap();
            assert_eq!(tp.is_tree_rooted(), v0 == root_vertex);
            assert_eq!(tp.reduced_type().iter().sum::<usize>(), 2);
        }
        let a = Arborescence::enumerate(&c, root_vertex).pop().unwrap();
        let labelled = c.with_labels(vec![0, 0, 0]).unwrap();
        let t = TreeRootedConstellation::new(labelled, a).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["root_vertex"], 3);
        assert_eq!(json["arborescence"]["1"], serde_json::json!([1, 1]));
    }
}
