//! Colored cacti and tree-rooted constellations: the white polygon read as an
//! Eulerian tour, the BEST decomposition of that tour, and the resulting
//! bijection Φ with its inverse.

use serde::Serialize;

use crate::enumerate::ColoredFactorization;
use crate::error::{Error, Result};
use crate::maps::{product, Arborescence, Constellation, TreeRootedConstellation};
use crate::perm::Permutation;

/// A hyperedge-labelled rooted colored cactus. `colors[t][h]` is the color of
/// the type-t vertex of hyperedge `h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LabelledCactus {
    pub factors: Vec<Permutation>,
    pub colors: Vec<Vec<usize>>,
    pub root: usize,
}

impl LabelledCactus {
    pub fn new(factors: Vec<Permutation>, colors: Vec<Vec<usize>>, root: usize) -> Result<Self> {
        let c = LabelledCactus { factors, colors, root };
        c.validate()?;
        Ok(c)
    }

    pub fn from_factorization(f: &ColoredFactorization) -> Self {
        LabelledCactus { factors: f.factors.clone(), colors: f.colorings.clone(), root: 0 }
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn n(&self) -> usize {
        self.factors[0].len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.len() < 2 || self.colors.len() != self.factors.len() {
            return Err(Error::InvalidArgument("need k >= 2 factors and one coloring per type".into()));
        }
        let n = self.n();
        if self.root >= n {
            return Err(Error::Structural("root hyperedge out of range".into()));
        }
        let cycles = product(&self.factors)?.cycle_count();
        if cycles != 1 {
            return Err(Error::NotACactus { cycles });
        }
        ColoredFactorization { factors: self.factors.clone(), colorings: self.colors.clone() }
            .validate()
            .or_else(|e| match e {
                Error::NotACactus { .. } => Ok(()),
                other => Err(other),
            })
    }

    /// Relabels hyperedges so the root is 0 and the product is `(1,2,…,n)`.
    pub fn normalize(&self) -> ColoredFactorization {
        let n = self.n();
        let p = product(&self.factors).expect("same size");
        let mut beta = vec![0; n];
        let mut x = self.root;
        for slot in 0..n {
            beta[x] = slot;
            x = p.apply(x);
        }
        let beta = Permutation::from_images(beta).expect("single cycle");
        let factors = self.factors.iter().map(|f| f.conjugate_by(&beta)).collect();
        let colorings = self
            .colors
            .iter()
            .map(|col| {
                let mut out = vec![0; n];
                for h in 0..n {
                    out[beta.apply(h)] = col[h];
                }
                out
            })
            .collect();
        ColoredFactorization { factors, colorings }
    }
}

/// An arc-labelled vertex-labelled k-digraph together with an Eulerian tour.
///
/// The arc of type `t` and label `h` goes from vertex `(t, colors[t][h])` to
/// vertex `(t+1, colors[t+1][h])`. The tour lists arcs as `(t, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EulerianDigraphTour {
    pub k: usize,
    pub n: usize,
    pub colors: Vec<Vec<usize>>,
    pub tour: Vec<(usize, usize)>,
}

impl EulerianDigraphTour {
    /// Number of vertices of each type.
    pub fn vertex_counts(&self) -> Vec<usize> {
        self.colors.iter().map(|c| c.iter().max().map_or(0, |m| m + 1)).collect()
    }

    pub fn origin(&self, (t, h): (usize, usize)) -> (usize, usize) {
        (t, self.colors[t][h])
    }

    pub fn end(&self, (t, h): (usize, usize)) -> (usize, usize) {
        let u = (t + 1) % self.k;
        (u, self.colors[u][h])
    }

    pub fn start_vertex(&self) -> (usize, usize) {
        self.origin(self.tour[0])
    }

    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.k, self.n);
        if self.colors.len() != k || self.colors.iter().any(|c| c.len() != n) {
            return Err(Error::Structural("arc colors do not match k and n".into()));
        }
        if self.tour.len() != k * n {
            return Err(Error::Structural(format!("tour has {} arcs, expected {}", self.tour.len(), k * n)));
        }
        let mut used = vec![false; k * n];
        for &(t, h) in &self.tour {
            if t >= k || h >= n || used[h * k + t] {
                return Err(Error::Structural(format!("arc ({}, {}) repeated or out of range", t + 1, h + 1)));
            }
            used[h * k + t] = true;
        }
        if self.tour[0].0 != k - 1 {
            return Err(Error::Structural("the tour must start at a vertex of type k".into()));
        }
        for s in 0..self.tour.len() {
            let (a, b) = (self.tour[s], self.tour[(s + 1) % self.tour.len()]);
            if self.end(a) != self.origin(b) {
                return Err(Error::Structural(format!("arcs {} and {} are not consecutive", s + 1, s + 2)));
            }
        }
        Ok(())
    }
}

/// Ξ: reads the white polygon counterclockwise from the root corner.
pub fn xi(cactus: &LabelledCactus) -> Result<EulerianDigraphTour> {
    cactus.validate()?;
    let (k, n) = (cactus.k(), cactus.n());
    let sigmas: Vec<Permutation> = cactus.factors.iter().map(Permutation::inverse).collect();
    let mut tour = Vec::with_capacity(k * n);
    let (mut t, mut h) = (k - 1, cactus.root);
    for _ in 0..k * n {
        tour.push((t, h));
        t = (t + 1) % k;
        h = sigmas[t].apply(h);
    }
    Ok(EulerianDigraphTour { k, n, colors: cactus.colors.clone(), tour })
}

pub fn xi_inverse(tour: &EulerianDigraphTour) -> Result<LabelledCactus> {
    tour.validate()?;
    let (k, n) = (tour.k, tour.n);
    let mut sigma = vec![vec![usize::MAX; n]; k];
    for s in 0..tour.tour.len() {
        let (_, h) = tour.tour[s];
        let (u, g) = tour.tour[(s + 1) % tour.tour.len()];
        sigma[u][h] = g;
    }
    let factors = sigma
        .into_iter()
        .map(|s| Permutation::from_images(s).map(|p| p.inverse()))
        .collect::<Result<Vec<_>>>()?;
    LabelledCactus::new(factors, tour.colors.clone(), tour.tour[0].1)
}

/// The pair (arborescence, local orders) attached to a `v0`-Eulerian tour.
///
/// Digraph vertices are `(type, label)`. `tree[t][c]` is the hyperedge of the
/// last arc leaving `(t, c)`, absent for the start vertex; `orders[t][c]` lists
/// the other outgoing arcs of `(t, c)` in the order the tour uses them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BestPair {
    pub root: (usize, usize),
    pub tree: Vec<Vec<Option<usize>>>,
    pub orders: Vec<Vec<Vec<usize>>>,
}

pub fn best_decompose(tour: &EulerianDigraphTour) -> Result<BestPair> {
    tour.validate()?;
    let counts = tour.vertex_counts();
    let mut usage: Vec<Vec<Vec<usize>>> = counts.iter().map(|&p| vec![Vec::new(); p]).collect();
    for &arc in &tour.tour {
        let (t, c) = tour.origin(arc);
        usage[t][c].push(arc.1);
    }
    let root = tour.start_vertex();
    let mut tree: Vec<Vec<Option<usize>>> = counts.iter().map(|&p| vec![None; p]).collect();
    for t in 0..tour.k {
        for c in 0..counts[t] {
            if (t, c) != root {
                tree[t][c] = usage[t][c].pop();
            }
        }
    }
    Ok(BestPair { root, tree, orders: usage })
}

/// Replays the local orders from the root; fails when the last exits do not
/// form an arborescence, in which case the walk gets stuck early.
pub fn best_compose(k: usize, n: usize, colors: &[Vec<usize>], pair: &BestPair) -> Result<EulerianDigraphTour> {
    let mut local: Vec<Vec<Vec<usize>>> = pair.orders.clone();
    for (t, row) in pair.tree.iter().enumerate() {
        for (c, last) in row.iter().enumerate() {
            if let Some(h) = last {
                local[t][c].push(*h);
            }
        }
    }
    let mut pos: Vec<Vec<usize>> = local.iter().map(|row| vec![0; row.len()]).collect();
    let mut tour = Vec::with_capacity(k * n);
    let (mut t, mut c) = pair.root;
    while let Some(&h) = local[t][c].get(pos[t][c]) {
        pos[t][c] += 1;
        tour.push((t, h));
        let u = (t + 1) % k;
        (t, c) = (u, colors[u][h]);
    }
    if tour.len() != k * n {
        return Err(Error::Structural(format!(
            "local orders give a closed walk of {} arcs instead of {}; the last exits are not an arborescence",
            tour.len(),
            k * n
        )));
    }
    let out = EulerianDigraphTour { k, n, colors: colors.to_vec(), tour };
    out.validate()?;
    Ok(out)
}

/// Φ: colored cactus (a colored factorization of the long cycle, rooted at
/// hyperedge 0) to a vertex-labelled tree-rooted constellation in canonical
/// hyperedge labelling.
pub fn phi(cactus: &ColoredFactorization) -> Result<TreeRootedConstellation> {
    cactus.validate()?;
    let tour = xi(&LabelledCactus::from_factorization(cactus))?;
    let pair = best_decompose(&tour)?;
    let (k, n) = (tour.k, tour.n);
    let mut vertices = Vec::new();
    let mut keys = Vec::new();
    for t in 0..k {
        for c in 0..pair.orders[t].len() {
            let mut rot = pair.orders[t][c].clone();
            rot.extend(pair.tree[t][c]);
            vertices.push((t, rot));
            keys.push((t, c));
        }
    }
    let (constellation, vmap) = Constellation::from_rotations(k, n, &vertices)?;
    let mut labels = vec![0; constellation.vertex_count()];
    let mut parent = vec![None; constellation.vertex_count()];
    for (idx, &(t, c)) in keys.iter().enumerate() {
        labels[vmap[idx]] = c;
        parent[vmap[idx]] = pair.tree[t][c];
    }
    let root_vertex = vmap[keys.iter().position(|&x| x == pair.root).expect("root vertex exists")];
    let constellation = constellation.with_root(tour.tour[0].1)?.with_labels(labels)?;
    let t = TreeRootedConstellation::new(constellation, Arborescence::new(root_vertex, parent))?;
    Ok(t.canonical())
}

/// Φ⁻¹: rebuilds the tour from the rotations cut at the tree edges, then reads
/// the cactus off the tour.
pub fn phi_inverse(t: &TreeRootedConstellation) -> Result<ColoredFactorization> {
    let c = t.constellation();
    let (k, n) = (c.k(), c.n());
    let labels = t.labels();
    let root = c.root().expect("tree-rooted constellations are rooted");
    let colors: Vec<Vec<usize>> = (0..k).map(|ty| (0..n).map(|h| labels[c.vertex_at(ty, h)]).collect()).collect();
    let counts = c.type_vector();
    let mut tree: Vec<Vec<Option<usize>>> = counts.iter().map(|&p| vec![None; p]).collect();
    let mut orders: Vec<Vec<Vec<usize>>> = counts.iter().map(|&p| vec![Vec::new(); p]).collect();
    let root_vertex = t.arborescence().root_vertex();
    for v in 0..c.vertex_count() {
        let (ty, lab) = (c.vertex_type(v), labels[v]);
        let rot = c.rotation(v);
        let first = match t.arborescence().parent_hyperedge(v) {
            Some(h) => {
                tree[ty][lab] = Some(h);
                (rot.iter().position(|&g| g == h).expect("parent edge is incident") + 1) % rot.len()
            }
            None => rot.iter().position(|&g| g == root).expect("root hyperedge at root vertex"),
        };
        let mut order: Vec<usize> = rot[first..].iter().chain(&rot[..first]).copied().collect();
        if v != root_vertex {
            order.pop();
        }
        orders[ty][lab] = order;
    }
    let pair = BestPair { root: (k - 1, labels[root_vertex]), tree, orders };
    let tour = best_compose(k, n, &colors, &pair)?;
    Ok(xi_inverse(&tour)?.normalize())
}

/// For each type `t`, the multiset of `(color at t, color at t+1)` over edges
/// of type t, sorted.
pub fn edge_color_pairs(colors: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let k = colors.len();
    (0..k)
        .map(|t| {
            let mut pairs: Vec<(usize, usize)> =
                colors[t].iter().zip(&colors[(t + 1) % k]).map(|(&a, &b)| (a, b)).collect();
            pairs.sort_unstable();
            pairs
        })
        .collect()
}

/// Per-hyperedge vertex labels of a tree-rooted constellation, indexed `[t][h]`.
pub fn hyperedge_labels(t: &TreeRootedConstellation) -> Vec<Vec<usize>> {
    let c = t.constellation();
    (0..c.k()).map(|ty| (0..c.n()).map(|h| t.labels()[c.vertex_at(ty, h)]).collect()).collect()
}
