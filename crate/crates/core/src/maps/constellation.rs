use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A k-constellation given by its hypergraph and clockwise rotation system.
///
/// Hyperedges, types and vertex ids are 0-based. Vertices are numbered by
/// (type, smallest incident hyperedge) and each rotation list starts at its
/// smallest hyperedge, so two constellations are equal exactly when they have
/// the same hyperedge labelling, root and vertex data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constellation {
    k: usize,
    n: usize,
    hyperedges: Vec<Vec<usize>>,
    vertex_type: Vec<usize>,
    rotation: Vec<Vec<usize>>,
    root: Option<usize>,
    labels: Option<Vec<usize>>,
    colors: Option<Vec<usize>>,
}

fn clockwise(cycle: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(cycle.len());
    out.push(cycle[0]);
    out.extend(cycle[1..].iter().rev());
    out
}

/// True when the permutations generate a transitive action on `[n]`.
pub fn is_transitive(perms: &[Permutation]) -> bool {
    let n = perms.first().map_or(0, Permutation::len);
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

/// `π_1 ∘ π_2 ∘ ⋯ ∘ π_k`.
pub fn product(perms: &[Permutation]) -> Result<Permutation> {
    let mut iter = perms.iter().rev();
    let mut acc = iter
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty product".into()))?
        .clone();
    for p in iter {
        acc = p.compose(&acc)?;
    }
    Ok(acc)
}

impl Constellation {
    /// The constellation represented by `(π_1, …, π_k)`: one type-t vertex per
    /// cycle of `π_t`, with the cycle read counterclockwise.
    pub fn from_permutations(perms: &[Permutation]) -> Result<Self> {
        let k = perms.len();
        if k < 2 {
            return Err(Error::InvalidArgument(format!("need k >= 2 factors, got {k}")));
        }
        let n = perms[0].len();
        for p in perms {
            if p.len() != n {
                return Err(Error::SizeMismatch { expected: n, found: p.len() });
            }
        }
        if n == 0 {
            return Err(Error::InvalidArgument("a constellation has at least one hyperedge".into()));
        }
        if !is_transitive(perms) {
            return Err(Error::NotConnected);
        }
        let mut hyperedges = vec![vec![0; k]; n];
        let mut vertex_type = Vec::new();
        let mut rotation = Vec::new();
        for (t, p) in perms.iter().enumerate() {
            for cycle in p.cycles() {
                let v = vertex_type.len();
                for &h in &cycle {
                    hyperedges[h][t] = v;
                }
                vertex_type.push(t);
                rotation.push(clockwise(&cycle));
            }
        }
        Ok(Constellation { k, n, hyperedges, vertex_type, rotation, root: None, labels: None, colors: None })
    }

    /// Builds from clockwise rotation lists given per (type, list). Returns the
    /// constellation and, for each input list, the vertex id it became.
    pub fn from_rotations(k: usize, n: usize, vertices: &[(usize, Vec<usize>)]) -> Result<(Self, Vec<usize>)> {
        let mut succ = vec![vec![usize::MAX; n]; k];
        for (t, rot) in vertices {
            if *t >= k {
                return Err(Error::Structural(format!("vertex type {t} out of range")));
            }
            for (m, &h) in rot.iter().enumerate() {
                if h >= n || succ[*t][h] != usize::MAX {
                    return Err(Error::Structural(format!(
                        "hyperedge {h} appears twice or out of range at type {t}"
                    )));
                }
                succ[*t][h] = rot[(m + 1) % rot.len()];
            }
        }
        let mut perms = Vec::with_capacity(k);
        for s in succ {
            if s.contains(&usize::MAX) {
                return Err(Error::Structural("rotation incomplete: a hyperedge misses a vertex".into()));
            }
            perms.push(Permutation::from_images(s)?.inverse());
        }
        let c = Self::from_permutations(&perms)?;
        let map = vertices.iter().map(|(t, rot)| c.hyperedges[rot[0]][*t]).collect();
        Ok((c, map))
    }

    /// Assembles a constellation from explicit parts and validates it.
    pub fn from_raw_parts(
        k: usize,
        hyperedges: Vec<Vec<usize>>,
        vertex_type: Vec<usize>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = hyperedges.len();
        let c = Constellation { k, n, hyperedges, vertex_type, rotation, root: None, labels: None, colors: None };
        c.validate()?;
        let vertices: Vec<(usize, Vec<usize>)> =
            c.vertex_type.iter().copied().zip(c.rotation.iter().cloned()).collect();
        Ok(Self::from_rotations(k, n, &vertices)?.0)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_type.len()
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    #[inline]
    pub fn vertex_at(&self, t: usize, h: usize) -> usize {
        self.hyperedges[h][t]
    }

    #[inline]
    pub fn vertex_type(&self, v: usize) -> usize {
        self.vertex_type[v]
    }

    pub fn vertex_types(&self) -> &[usize] {
        &self.vertex_type
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn hyperdegree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// The type-k vertex of the root hyperedge.
    pub fn root_vertex(&self) -> Option<usize> {
        self.root.map(|r| self.hyperedges[r][self.k - 1])
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn colors(&self) -> Option<&[usize]> {
        self.colors.as_deref()
    }

    /// Endpoints of the type-t edge of hyperedge `h`: its type-t and type-(t+1) vertices.
    pub fn edge_endpoints(&self, h: usize, t: usize) -> (usize, usize) {
        (self.hyperedges[h][t], self.hyperedges[h][(t + 1) % self.k])
    }

    /// Number of vertices of each type, `(p_1, …, p_k)`.
    pub fn type_vector(&self) -> Vec<usize> {
        let mut p = vec![0; self.k];
        for &t in &self.vertex_type {
            p[t] += 1;
        }
        p
    }

    pub fn vertices_of_type(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&v| self.vertex_type[v] == t)
    }

    /// Vertex of type `t` carrying label `label`.
    pub fn vertex_with_label(&self, t: usize, label: usize) -> Option<usize> {
        let labels = self.labels.as_ref()?;
        self.vertices_of_type(t).find(|&v| labels[v] == label)
    }

    /// Hyperdegrees of the type-t vertices in label order.
    pub fn vertex_composition(&self, t: usize) -> Option<Vec<usize>> {
        let labels = self.labels.as_ref()?;
        let mut parts = vec![0; self.type_vector()[t]];
        for v in self.vertices_of_type(t) {
            parts[labels[v]] = self.hyperdegree(v);
        }
        Some(parts)
    }

    pub fn vertex_compositions(&self) -> Option<Vec<Vec<usize>>> {
        (0..self.k).map(|t| self.vertex_composition(t)).collect()
    }

    /// The clockwise successor `σ_t = π_t⁻¹` around type-t vertices.
    pub fn clockwise_successor(&self, t: usize) -> Permutation {
        let mut image = vec![0; self.n];
        for v in self.vertices_of_type(t) {
            let rot = &self.rotation[v];
            for m in 0..rot.len() {
                image[rot[m]] = rot[(m + 1) % rot.len()];
            }
        }
        Permutation::from_images(image).expect("rotation lists partition the hyperedges")
    }

    /// `ϱ(C) = (π_1, …, π_k)`, each cycle being a counterclockwise rotation.
    pub fn to_permutations(&self) -> Vec<Permutation> {
        (0..self.k).map(|t| self.clockwise_successor(t).inverse()).collect()
    }

    pub fn product(&self) -> Permutation {
        product(&self.to_permutations()).expect("factors share a size")
    }

    pub fn white_face_count(&self) -> usize {
        self.product().cycle_count()
    }

    pub fn is_cactus(&self) -> bool {
        self.white_face_count() == 1
    }

    /// Genus from `V − E + F = 2 − 2g` with `E = nk` and `F = n + #white faces`.
    pub fn genus(&self) -> Result<usize> {
        let chi = self.vertex_count() as i64 - (self.n * self.k) as i64
            + (self.n + self.white_face_count()) as i64;
        if chi > 2 || chi.rem_euclid(2) != 0 {
            return Err(Error::Structural(format!("Euler characteristic {chi} is impossible")));
        }
        Ok(((2 - chi) / 2) as usize)
    }

    pub fn with_root(mut self, root: usize) -> Result<Self> {
        if root >= self.n {
            return Err(Error::Structural(format!("root hyperedge {root} out of range")));
        }
        self.root = Some(root);
        Ok(self)
    }

    pub fn without_root(mut self) -> Self {
        self.root = None;
        self
    }

    /// Per-vertex labels; type-t labels must be a bijection onto `[p_t]`.
    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        self.check_vertex_map(&labels, true, "labels")?;
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Per-vertex colors; type-t colors must cover `[q_t]` for some `q_t`.
    pub fn with_colors(mut self, colors: Vec<usize>) -> Result<Self> {
        self.check_vertex_map(&colors, false, "colors")?;
        self.colors = Some(colors);
        Ok(self)
    }

    fn check_vertex_map(&self, values: &[usize], bijective: bool, what: &str) -> Result<()> {
        if values.len() != self.vertex_count() {
            return Err(Error::SizeMismatch { expected: self.vertex_count(), found: values.len() });
        }
        for t in 0..self.k {
            let vals: Vec<usize> = self.vertices_of_type(t).map(|v| values[v]).collect();
            let q = vals.iter().max().map_or(0, |m| m + 1);
            let mut used = vec![0usize; q];
            for &x in &vals {
                used[x] += 1;
            }
            if used.contains(&0) {
                return Err(Error::Structural(format!("{what} of type {} are not surjective", t + 1)));
            }
            if bijective && used.iter().any(|&c| c > 1) {
                return Err(Error::Structural(format!("{what} of type {} repeat", t + 1)));
            }
        }
        Ok(())
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Structural("k must be at least 2".into()));
        }
        if self.n == 0 {
            return Err(Error::Structural("no hyperedges".into()));
        }
        if self.rotation.len() != self.vertex_type.len() {
            return Err(Error::Structural("rotation and vertex_type disagree in length".into()));
        }
        for (h, row) in self.hyperedges.iter().enumerate() {
            if row.len() != self.k {
                return Err(Error::Structural(format!("hyperedge {} does not have k vertices", h + 1)));
            }
            for (t, &v) in row.iter().enumerate() {
                if v >= self.vertex_count() || self.vertex_type[v] != t {
                    return Err(Error::Structural(format!(
                        "hyperedge {} has a wrong vertex of type {}",
                        h + 1,
                        t + 1
                    )));
                }
            }
        }
        for (v, rot) in self.rotation.iter().enumerate() {
            let t = self.vertex_type[v];
            let mut expected: Vec<usize> = (0..self.n).filter(|&h| self.hyperedges[h][t] == v).collect();
            let mut actual = rot.clone();
            actual.sort_unstable();
            expected.sort_unstable();
            if actual != expected {
                return Err(Error::Structural(format!("rotation incomplete at vertex {}", v + 1)));
            }
        }
        if !is_transitive(&self.to_permutations()) {
            return Err(Error::Structural("not transitive: the hypergraph is disconnected".into()));
        }
        if let Some(r) = self.root {
            if r >= self.n {
                return Err(Error::Structural("root out of range".into()));
            }
        }
        if let Some(l) = &self.labels {
            self.check_vertex_map(l, true, "labels")?;
        }
        if let Some(c) = &self.colors {
            self.check_vertex_map(c, false, "colors")?;
        }
        Ok(())
    }

    /// Renames hyperedge `h` to `β(h)`. Returns the new constellation and the
    /// induced map from old vertex ids to new ones.
    pub fn relabel_hyperedges(&self, beta: &Permutation) -> (Self, Vec<usize>) {
        let perms: Vec<Permutation> = self.to_permutations().iter().map(|p| p.conjugate_by(beta)).collect();
        let mut c = Self::from_permutations(&perms).expect("conjugation preserves transitivity");
        let vmap: Vec<usize> = (0..self.vertex_count())
            .map(|v| c.hyperedges[beta.apply(self.rotation[v][0])][self.vertex_type[v]])
            .collect();
        c.root = self.root.map(|r| beta.apply(r));
        let remap = |vals: &Vec<usize>| {
            let mut out = vec![0; vals.len()];
            for (v, &x) in vals.iter().enumerate() {
                out[vmap[v]] = x;
            }
            out
        };
        c.labels = self.labels.as_ref().map(remap);
        c.colors = self.colors.as_ref().map(remap);
        (c, vmap)
    }

    /// The relabelling that numbers hyperedges by breadth-first search from the
    /// root along the clockwise successors `σ_1, …, σ_k`.
    pub fn canonical_relabelling(&self) -> Result<Permutation> {
        let root = self.root.ok_or_else(|| Error::InvalidArgument("constellation is not rooted".into()))?;
        let sigmas: Vec<Permutation> = (0..self.k).map(|t| self.clockwise_successor(t)).collect();
        let mut beta = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::from([root]);
        beta[root] = 0;
        next += 1;
        while let Some(h) = queue.pop_front() {
            for s in &sigmas {
                let g = s.apply(h);
                if beta[g] == usize::MAX {
                    beta[g] = next;
                    next += 1;
                    queue.push_back(g);
                }
            }
        }
        Permutation::from_images(beta)
    }

    /// The canonical representative of the rooted constellation, with the map
    /// from old to new vertex ids and the hyperedge relabelling used.
    pub fn canonical_rooted(&self) -> Result<(Self, Vec<usize>, Permutation)> {
        let beta = self.canonical_relabelling()?;
        let (c, vmap) = self.relabel_hyperedges(&beta);
        Ok((c, vmap, beta))
    }

    pub fn is_canonical_rooted(&self) -> bool {
        self.canonical_relabelling().map(|b| b.is_identity()).unwrap_or(false)
    }
}

#[derive(Serialize, Deserialize)]
struct ConstellationJson {
    k: usize,
    n: usize,
    hyperedges: Vec<Vec<usize>>,
    vertex_type: std::collections::BTreeMap<String, usize>,
    rotation: std::collections::BTreeMap<String, Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    root: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<std::collections::BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    colors: Option<std::collections::BTreeMap<String, usize>>,
}

fn key(v: usize) -> String {
    format!("{}", v + 1)
}

fn vertex_map_to_json(vals: &[usize]) -> std::collections::BTreeMap<String, usize> {
    vals.iter().enumerate().map(|(v, &x)| (key(v), x + 1)).collect()
}

fn vertex_map_from_json(map: &std::collections::BTreeMap<String, usize>, count: usize) -> Result<Vec<usize>> {
    let mut out = vec![usize::MAX; count];
    for (k, &x) in map {
        let v: usize = k.parse().map_err(|_| Error::Structural(format!("bad vertex id {k}")))?;
        if v == 0 || v > count || x == 0 {
            return Err(Error::Structural(format!("bad vertex entry {k}:{x}")));
        }
        out[v - 1] = x - 1;
    }
    if out.contains(&usize::MAX) {
        return Err(Error::Structural("vertex map is incomplete".into()));
    }
    Ok(out)
}

impl Serialize for Constellation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ConstellationJson {
            k: self.k,
            n: self.n,
            hyperedges: self.hyperedges.iter().map(|row| row.iter().map(|v| v + 1).collect()).collect(),
            vertex_type: vertex_map_to_json(&self.vertex_type),
            rotation: self
                .rotation
                .iter()
                .enumerate()
                .map(|(v, rot)| (key(v), rot.iter().map(|h| h + 1).collect()))
                .collect(),
            root: self.root.map(|r| r + 1),
            labels: self.labels.as_deref().map(vertex_map_to_json),
            colors: self.colors.as_deref().map(vertex_map_to_json),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Constellation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = ConstellationJson::deserialize(deserializer)?;
        let build = || -> Result<Constellation> {
            let count = raw.vertex_type.len();
            let vertex_type = vertex_map_from_json(&raw.vertex_type, count)?;
            let mut rotation = vec![Vec::new(); count];
            for (k, rot) in &raw.rotation {
                let v: usize = k.parse().map_err(|_| Error::Structural(format!("bad vertex id {k}")))?;
                if v == 0 || v > count {
                    return Err(Error::Structural(format!("bad vertex id {k}")));
                }
                rotation[v - 1] = rot.iter().map(|h| h.wrapping_sub(1)).collect();
            }
            let hyperedges: Vec<Vec<usize>> =
                raw.hyperedges.iter().map(|row| row.iter().map(|v| v.wrapping_sub(1)).collect()).collect();
            if hyperedges.len() != raw.n {
                return Err(Error::SizeMismatch { expected: raw.n, found: hyperedges.len() });
            }
            let c = Constellation {
                k: raw.k,
                n: raw.n,
                hyperedges,
                vertex_type,
                rotation,
                root: raw.root.map(|r| r.wrapping_sub(1)),
                labels: raw.labels.as_ref().map(|m| vertex_map_from_json(m, count)).transpose()?,
                colors: raw.colors.as_ref().map(|m| vertex_map_from_json(m, count)).transpose()?,
            };
            c.validate()?;
            let vertices: Vec<(usize, Vec<usize>)> =
                c.vertex_type.iter().copied().zip(c.rotation.iter().cloned()).collect();
            let (mut out, vmap) = Self::from_rotations(c.k, c.n, &vertices)?;
            out.root = c.root;
            let remap = |vals: &Vec<usize>| {
                let mut o = vec![0; vals.len()];
                for (v, &x) in vals.iter().enumerate() {
                    o[vmap[v]] = x;
                }
                o
            };
            out.labels = c.labels.as_ref().map(remap);
            out.colors = c.colors.as_ref().map(remap);
            Ok(out)
        };
        build().map_err(serde::de::Error::custom)
    }
}
