use crate::error::{Error, Result};
use crate::maps::Constellation;
use crate::perm::Permutation;

/// A spanning tree oriented toward `root_vertex`. Each other vertex `v` of type
/// `t` stores the hyperedge `h` whose type-t edge joins `v` to its parent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arborescence {
    root_vertex: usize,
    parent: Vec<Option<usize>>,
}

impl Arborescence {
    pub fn new(root_vertex: usize, parent: Vec<Option<usize>>) -> Self {
        Arborescence { root_vertex, parent }
    }

    pub fn root_vertex(&self) -> usize {
        self.root_vertex
    }

    /// Parent hyperedge of `v`, `None` for the root.
    pub fn parent_hyperedge(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn parent_vertex(&self, c: &Constellation, v: usize) -> Option<usize> {
        self.parent[v].map(|h| c.edge_endpoints(h, c.vertex_type(v)).1)
    }

    /// Tree edges as `(hyperedge, type)` pairs, ordered by child vertex.
    pub fn edges(&self, c: &Constellation) -> Vec<(usize, usize)> {
        (0..self.parent.len())
            .filter_map(|v| self.parent[v].map(|h| (h, c.vertex_type(v))))
            .collect()
    }

    pub fn contains_edge(&self, c: &Constellation, h: usize, t: usize) -> bool {
        self.parent[c.vertex_at(t, h)] == Some(h)
    }

    /// Vertices visited from `v` up to the root, both included.
    pub fn path_to_root(&self, c: &Constellation, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent_vertex(c, cur) {
            path.push(p);
            cur = p;
            if path.len() > self.parent.len() {
                break;
            }
        }
        path
    }

    pub fn validate(&self, c: &Constellation) -> Result<()> {
        let count = c.vertex_count();
        if self.parent.len() != count || self.root_vertex >= count {
            return Err(Error::Structural("arborescence size does not match the constellation".into()));
        }
        for v in 0..count {
            match (v == self.root_vertex, self.parent[v]) {
                (true, Some(_)) => return Err(Error::Structural("the root has a parent edge".into())),
                (false, None) => {
                    return Err(Error::Structural(format!("vertex {} has no parent edge", v + 1)))
                }
                (false, Some(h)) => {
                    if h >= c.n() || c.vertex_at(c.vertex_type(v), h) != v {
                        return Err(Error::Structural(format!(
                            "parent edge of vertex {} is not incident to it",
                            v + 1
                        )));
                    }
                }
                (true, None) => {}
            }
        }
        for v in 0..count {
            let path = self.path_to_root(c, v);
            if *path.last().unwrap() != self.root_vertex {
                return Err(Error::Structural(format!("vertex {} does not reach the root", v + 1)));
            }
        }
        Ok(())
    }

    /// The same tree after renaming vertices by `vmap` and hyperedges by `beta`.
    pub fn remap(&self, vmap: &[usize], beta: &Permutation) -> Self {
        let mut parent = vec![None; self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            parent[vmap[v]] = p.map(|h| beta.apply(h));
        }
        Arborescence { root_vertex: vmap[self.root_vertex], parent }
    }

    /// Every `v0`-arborescence of `c`, in lexicographic order of parent choices.
    pub fn enumerate(c: &Constellation, v0: usize) -> Vec<Arborescence> {
        let count = c.vertex_count();
        let mut out = Vec::new();
        let mut parent = vec![None; count];
        fn rec(c: &Constellation, v0: usize, v: usize, parent: &mut Vec<Option<usize>>, out: &mut Vec<Arborescence>) {
            if v == parent.len() {
                let a = Arborescence { root_vertex: v0, parent: parent.clone() };
                if a.validate(c).is_ok() {
                    out.push(a);
                }
                return;
            }
            if v == v0 {
                rec(c, v0, v + 1, parent, out);
                return;
            }
            for &h in c.rotation(v) {
                parent[v] = Some(h);
                rec(c, v0, v + 1, parent, out);
            }
            parent[v] = None;
        }
        rec(c, v0, 0, &mut parent, &mut out);
        out
    }
}
