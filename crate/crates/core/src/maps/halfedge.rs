use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::Constellation;
use crate::perm::Permutation;
use crate::subset::TypeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexColor {
    Black,
    White,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfEdge {
    pub vertex: usize,
    /// Next half-edge clockwise around `vertex`.
    pub next: usize,
    /// `None` marks a bud.
    pub twin: Option<usize>,
    #[serde(rename = "type")]
    pub ty: usize,
}

/// A map given by half-edges with black and white vertices and typed edges
/// and buds. Black vertices come first in the vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfEdgeMap {
    k: usize,
    half_edges: Vec<HalfEdge>,
    vertex_color: Vec<VertexColor>,
}

/// Index of the pair `(t, i)` among `[k] × [n]`.
#[inline]
pub fn key(k: usize, t: usize, i: usize) -> usize {
    i * k + t
}

#[inline]
pub fn unkey(k: usize, x: usize) -> (usize, usize) {
    (x % k, x / k)
}

impl HalfEdgeMap {
    pub fn new(k: usize, half_edges: Vec<HalfEdge>, vertex_color: Vec<VertexColor>) -> Result<Self> {
        let m = HalfEdgeMap { k, half_edges, vertex_color };
        m.validate()?;
        Ok(m)
    }

    /// The standard layout on `n` black vertices of degree `k`.
    ///
    /// Half-edge `i·k + t` is the type-t half-edge of black vertex `i`, and
    /// `n·k + key(t, i)` is the white half-edge of type `t` labelled `i`. The two
    /// are twins unless `t ∈ buds[i]`, in which case both are buds. `white_next`
    /// is the clockwise successor on white half-edges, as a map on keys.
    pub fn from_layout(k: usize, buds: &[TypeSet], white_next: &[usize]) -> Self {
        let n = buds.len();
        let nk = n * k;
        let mut white_vertex = vec![usize::MAX; nk];
        let mut next_vertex = n;
        for start in 0..nk {
            if white_vertex[start] != usize::MAX {
                continue;
            }
            let mut x = start;
            while white_vertex[x] == usize::MAX {
                white_vertex[x] = next_vertex;
                x = white_next[x];
            }
            next_vertex += 1;
        }
        let mut half_edges = Vec::with_capacity(2 * nk);
        for i in 0..n {
            for t in 0..k {
                half_edges.push(HalfEdge {
                    vertex: i,
                    next: key(k, (t + 1) % k, i),
                    twin: (!buds[i].contains(t)).then_some(nk + key(k, t, i)),
                    ty: t,
                });
            }
        }
        for x in 0..nk {
            let (t, i) = unkey(k, x);
            half_edges.push(HalfEdge {
                vertex: white_vertex[x],
                next: nk + white_next[x],
                twin: (!buds[i].contains(t)).then_some(x),
                ty: t,
            });
        }
        let mut vertex_color = vec![VertexColor::Black; n];
        vertex_color.resize(next_vertex, VertexColor::White);
        HalfEdgeMap { k, half_edges, vertex_color }
    }

    /// The dual-constellation: one black vertex per hyperedge (same number), one
    /// white vertex per white face, one edge across each edge of `c`.
    pub fn dual(c: &Constellation) -> Self {
        let k = c.k();
        let perms = c.to_permutations();
        let mut white_next = vec![0; c.n() * k];
        for h in 0..c.n() {
            for (t, p) in perms.iter().enumerate() {
                white_next[key(k, t, h)] = key(k, (t + k - 1) % k, p.apply(h));
            }
        }
        Self::from_layout(k, &vec![TypeSet::EMPTY; c.n()], &white_next)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn half_edge(&self, h: usize) -> &HalfEdge {
        &self.half_edges[h]
    }

    pub fn vertex_colors(&self) -> &[VertexColor] {
        &self.vertex_color
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_color.len()
    }

    pub fn black_vertex_count(&self) -> usize {
        self.vertex_color.iter().filter(|&&c| c == VertexColor::Black).count()
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges.iter().filter(|h| h.twin.is_some()).count() / 2
    }

    pub fn bud_count(&self) -> usize {
        self.half_edges.iter().filter(|h| h.twin.is_none()).count()
    }

    pub fn is_bud(&self, h: usize) -> bool {
        self.half_edges[h].twin.is_none()
    }

    pub fn color_of(&self, h: usize) -> VertexColor {
        self.vertex_color[self.half_edges[h].vertex]
    }

    /// One step along a face: cross the edge (a bud is crossed in place), then
    /// turn to the next half-edge clockwise.
    #[inline]
    pub fn face_step(&self, h: usize) -> usize {
        let he = &self.half_edges[h];
        self.half_edges[he.twin.unwrap_or(h)].next
    }

    /// The orbit of `face_step` through `start`.
    pub fn face_from(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut h = self.face_step(start);
        while h != start {
            out.push(h);
            h = self.face_step(h);
        }
        out
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.half_edges.len()];
        let mut out = Vec::new();
        for start in 0..self.half_edges.len() {
            if !seen[start] {
                let face = self.face_from(start);
                for &h in &face {
                    seen[h] = true;
                }
                out.push(face);
            }
        }
        out
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// Genus from `V − E + F = 2 − 2g`; buds do not change the surface.
    pub fn genus(&self) -> Result<usize> {
        let chi = self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64;
        if chi > 2 || chi.rem_euclid(2) != 0 {
            return Err(Error::Structural(format!("Euler characteristic {chi} is impossible")));
        }
        Ok(((2 - chi) / 2) as usize)
    }

    /// Checks the rotation, twin and typing rules shared by dual-constellations
    /// and nebulas.
    pub fn validate(&self) -> Result<()> {
        let m = self.half_edges.len();
        let mut seen = vec![false; m];
        for (h, he) in self.half_edges.iter().enumerate() {
            if he.next >= m || seen[he.next] {
                return Err(Error::Structural(format!("next is not a permutation at half-edge {h}")));
            }
            seen[he.next] = true;
            let nx = &self.half_edges[he.next];
            if nx.vertex != he.vertex {
                return Err(Error::Structural(format!("next leaves the vertex at half-edge {h}")));
            }
            if he.vertex >= self.vertex_color.len() || he.ty >= self.k {
                return Err(Error::Structural(format!("half-edge {h} has a bad vertex or type")));
            }
            let expected = match self.vertex_color[he.vertex] {
                VertexColor::Black => (he.ty + 1) % self.k,
                VertexColor::White => (he.ty + self.k - 1) % self.k,
            };
            if nx.ty != expected {
                return Err(Error::Structural(format!("types do not follow the rotation at half-edge {h}")));
            }
            if let Some(tw) = he.twin {
                let other = self.half_edges.get(tw).ok_or_else(|| Error::Structural("twin out of range".into()))?;
                if other.twin != Some(h) || tw == h {
                    return Err(Error::Structural(format!("twin is not an involution at half-edge {h}")));
                }
                if other.ty != he.ty || self.vertex_color[other.vertex] == self.vertex_color[he.vertex] {
                    return Err(Error::Structural(format!("edge at half-edge {h} breaks the typing rules")));
                }
            }
        }
        for v in 0..self.vertex_color.len() {
            let degree = self.half_edges.iter().filter(|he| he.vertex == v).count();
            if self.vertex_color[v] == VertexColor::Black && degree != self.k {
                return Err(Error::Structural(format!("black vertex {v} has degree {degree}")));
            }
            if degree == 0 {
                return Err(Error::Structural(format!("vertex {v} is isolated")));
            }
        }
        Ok(())
    }

    /// For a closed map whose black vertices are `0..n`, the constellation it is
    /// dual to, with hyperedge `x` dual to black vertex `x`.
    pub fn to_constellation(&self) -> Result<Constellation> {
        if self.bud_count() > 0 {
            return Err(Error::Structural("a map with buds is not a dual-constellation".into()));
        }
        self.validate()?;
        let n = self.black_vertex_count();
        if self.vertex_color[..n].iter().any(|&c| c != VertexColor::Black) {
            return Err(Error::Structural("black vertices must be numbered first".into()));
        }
        let mut slot = vec![vec![usize::MAX; self.k]; n];
        for (h, he) in self.half_edges.iter().enumerate() {
            if he.vertex < n {
                slot[he.vertex][he.ty] = h;
            }
        }
        let mut perms = Vec::with_capacity(self.k);
        for t in 0..self.k {
            let mut image = vec![0; n];
            for (x, row) in slot.iter().enumerate() {
                let w = self.half_edges[row[t]].twin.expect("closed map");
                let w2 = self.half_edges[w].next;
                let b2 = self.half_edges[w2].twin.expect("closed map");
                image[x] = self.half_edges[b2].vertex;
            }
            perms.push(Permutation::from_images(image)?);
        }
        Constellation::from_permutations(&perms)
    }
}
