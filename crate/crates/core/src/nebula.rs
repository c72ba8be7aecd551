//! Nebulas: one-face maps with typed buds. Opening a tree-pointed
//! constellation along its arborescence gives a nebula; closing the buds gives
//! it back.

use std::collections::{BTreeMap, BTreeSet};

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::enumerate::{count_colored, factorial};
use crate::error::{Error, Result};
use crate::maps::{key, unkey, Arborescence, Constellation, HalfEdgeMap, TreePointedConstellation, VertexColor};
use crate::perm::Permutation;
use crate::report::IdentityReport;
use crate::subset::TypeSet;

/// A labelled rooted nebula in layout form.
///
/// Black vertex `i` carries label `i` and has the half-edge of type `t` for
/// every `t`; types in `subsets[i]` are buds. The white half-edge with key
/// `key(t, i)` is either the other half of the edge of type `t` at black vertex
/// `i` (when `t ∉ subsets[i]`) or the white bud of type `t` labelled `i`.
/// `white_next` is the clockwise successor around white vertices, on keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nebula {
    k: usize,
    subsets: Vec<TypeSet>,
    white_next: Vec<usize>,
    root: usize,
}

impl Nebula {
    pub fn new(k: usize, subsets: Vec<TypeSet>, white_next: Vec<usize>, root: usize) -> Result<Self> {
        let nb = Nebula { k, subsets, white_next, root };
        nb.validate()?;
        Ok(nb)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn subsets(&self) -> &[TypeSet] {
        &self.subsets
    }

    pub fn white_next(&self) -> &[usize] {
        &self.white_next
    }

    /// Number of black buds of each type.
    pub fn type_vector(&self) -> Vec<usize> {
        crate::enumerate::type_counts(self.k, &self.subsets)
    }

    pub fn is_bud(&self, t: usize, i: usize) -> bool {
        self.subsets[i].contains(t)
    }

    pub fn half_edge_map(&self) -> HalfEdgeMap {
        HalfEdgeMap::from_layout(self.k, &self.subsets, &self.white_next)
    }

    pub fn black_half_edge(&self, i: usize, t: usize) -> usize {
        key(self.k, t, i)
    }

    pub fn white_half_edge(&self, t: usize, i: usize) -> usize {
        self.n() * self.k + key(self.k, t, i)
    }

    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.k, self.n());
        if k < 2 || n == 0 {
            return Err(Error::Structural("a nebula needs k >= 2 and at least one black vertex".into()));
        }
        if let Some(r) = self.subsets.iter().find(|r| !r.is_strict(k)) {
            return Err(Error::InvalidSubset(format!("{r} is not a strict subset of [{k}]")));
        }
        if self.root >= n {
            return Err(Error::Structural("root vertex out of range".into()));
        }
        if self.white_next.len() != n * k {
            return Err(Error::SizeMismatch { expected: n * k, found: self.white_next.len() });
        }
        Permutation::from_images(self.white_next.clone())
            .map_err(|_| Error::Structural("white rotation is not a permutation".into()))?;
        for (x, &y) in self.white_next.iter().enumerate() {
            if unkey(k, y).0 != (unkey(k, x).0 + k - 1) % k {
                return Err(Error::Structural("types must decrease clockwise around white vertices".into()));
            }
        }
        let map = self.half_edge_map();
        map.validate()?;
        let faces = map.face_count();
        if faces != 1 {
            return Err(Error::Structural(format!("a nebula has one face, found {faces}")));
        }
        Ok(())
    }

    /// The face, as half-edge indices, starting at the type-k half-edge of the
    /// root vertex.
    pub fn tour(&self) -> Vec<usize> {
        self.half_edge_map().face_from(self.black_half_edge(self.root, self.k - 1))
    }

    /// The buds in tour order starting from the root's half-edge of type
    /// `start`, as (color, half-edge) pairs.
    pub fn bud_word(&self, start: usize) -> Vec<(VertexColor, usize)> {
        let map = self.half_edge_map();
        map.face_from(self.black_half_edge(self.root, start))
            .into_iter()
            .filter(|&h| map.is_bud(h))
            .map(|h| (map.color_of(h), h))
            .collect()
    }

    /// Relabels black vertices by first visit along the tour, and white buds of
    /// each type by the sorted available labels in visiting order.
    pub fn canonical(&self) -> Nebula {
        let (k, n) = (self.k, self.n());
        let nk = n * k;
        let tour = self.tour();
        let mut beta = vec![usize::MAX; n];
        let mut next = 0;
        for &h in &tour {
            if h < nk {
                let i = h / k;
                if beta[i] == usize::MAX {
                    beta[i] = next;
                    next += 1;
                }
            }
        }
        let mut subsets = vec![TypeSet::EMPTY; n];
        for i in 0..n {
            subsets[beta[i]] = self.subsets[i];
        }
        let mut available: Vec<Vec<usize>> = (0..k)
            .map(|t| (0..n).filter(|&i| subsets[i].contains(t)).collect())
            .collect();
        for list in &mut available {
            list.reverse();
        }
        let mut mu = vec![usize::MAX; nk];
        for &h in &tour {
            if h >= nk {
                let (t, i) = unkey(k, h - nk);
                mu[h - nk] = if self.subsets[i].contains(t) {
                    key(k, t, available[t].pop().expect("balanced buds"))
                } else {
                    key(k, t, beta[i])
                };
            }
        }
        let mut white_next = vec![0; nk];
        for x in 0..nk {
            white_next[mu[x]] = mu[self.white_next[x]];
        }
        Nebula { k, subsets, white_next, root: beta[self.root] }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }
}

/// Λ: cuts the dual edges crossing the tree. Labels are inherited from the
/// hyperedges and every white bud is keyed like its black partner.
pub fn dual_opening(tp: &TreePointedConstellation) -> Nebula {
    let c = tp.constellation();
    let (k, n) = (c.k(), c.n());
    let perms = c.to_permutations();
    let mut white_next = vec![0; n * k];
    for h in 0..n {
        for (t, p) in perms.iter().enumerate() {
            white_next[key(k, t, h)] = key(k, (t + k - 1) % k, p.apply(h));
        }
    }
    let a = tp.arborescence();
    let subsets = (0..n)
        .map(|h| TypeSet::from_types((0..k).filter(|&t| a.parent_hyperedge(c.vertex_at(t, h)) == Some(h))))
        .collect();
    Nebula { k, subsets, white_next, root: c.root().expect("rooted") }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureStrategy {
    /// Rotate the cyclic bud word to a lowest prefix point, then match like
    /// parentheses with a stack.
    Stack,
    /// Repeatedly glue any white bud directly followed by a black bud.
    Fixpoint,
}

/// The closed map and the bud-edges created, as (black vertex, type).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub map: HalfEdgeMap,
    pub white_next: Vec<usize>,
    pub bud_edges: BTreeSet<(usize, usize)>,
    /// Glued pairs (white key, black half-edge) in gluing order.
    pub pairs: Vec<(usize, usize)>,
}

fn match_buds(word: &[(VertexColor, usize)], strategy: ClosureStrategy) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    match strategy {
        ClosureStrategy::Stack => {
            let mut level = 0i64;
            let (mut low, mut low_at) = (0i64, 0usize);
            for (m, (col, _)) in word.iter().enumerate() {
                level += if *col == VertexColor::White { 1 } else { -1 };
                if level < low {
                    low = level;
                    low_at = m + 1;
                }
            }
            if level != 0 {
                return Err(Error::Structural("unequal numbers of white and black buds".into()));
            }
            let mut stack = Vec::new();
            for m in 0..word.len() {
                let (col, h) = word[(low_at + m) % word.len()];
                match col {
                    VertexColor::White => stack.push(h),
                    VertexColor::Black => {
                        let w = stack.pop().expect("rotated word is balanced");
                        pairs.push((w, h));
                    }
                }
            }
        }
        ClosureStrategy::Fixpoint => {
            let mut cyc: Vec<(VertexColor, usize)> = word.to_vec();
            while !cyc.is_empty() {
                let len = cyc.len();
                let m = (0..len)
                    .find(|&m| cyc[m].0 == VertexColor::White && cyc[(m + 1) % len].0 == VertexColor::Black)
                    .ok_or_else(|| Error::Structural("no matching bud pair left".into()))?;
                pairs.push((cyc[m].1, cyc[(m + 1) % len].1));
                let second = (m + 1) % len;
                let (a, b) = if m < second { (m, second) } else { (second, m) };
                cyc.remove(b);
                cyc.remove(a);
            }
        }
    }
    Ok(pairs)
}

/// Glues matching buds until none remain.
pub fn closure(nb: &Nebula, strategy: ClosureStrategy) -> Result<Closure> {
    let (k, n) = (nb.k, nb.n());
    let nk = n * k;
    let word = nb.bud_word(k - 1);
    let raw = match_buds(&word, strategy)?;
    let mut mu: Vec<usize> = (0..nk).collect();
    let mut bud_edges = BTreeSet::new();
    let mut pairs = Vec::with_capacity(raw.len());
    for (w, b) in raw {
        let (wt, _) = unkey(k, w - nk);
        let (bt, bi) = unkey(k, b);
        if wt != bt {
            return Err(Error::InternalDisagreement(format!(
                "closure glued a white bud of type {} to a black bud of type {}",
                wt + 1,
                bt + 1
            )));
        }
        mu[w - nk] = key(k, bt, bi);
        bud_edges.insert((bi, bt));
        pairs.push((w - nk, b));
    }
    let mut white_next = vec![0; nk];
    for x in 0..nk {
        white_next[mu[x]] = mu[nb.white_next[x]];
    }
    let map = HalfEdgeMap::from_layout(k, &vec![TypeSet::EMPTY; n], &white_next);
    map.validate()?;
    Ok(Closure { map, white_next, bud_edges, pairs })
}

/// Δ: closes the nebula and reads off the constellation and the arborescence
/// of edges dual to the bud-edges.
pub fn dual_closure(nb: &Nebula) -> Result<TreePointedConstellation> {
    let (k, n) = (nb.k, nb.n());
    let cl = closure(nb, ClosureStrategy::Stack)?;
    let perms = (0..k)
        .map(|t| Permutation::from_images((0..n).map(|i| unkey(k, cl.white_next[key(k, t, i)]).1).collect()))
        .collect::<Result<Vec<_>>>()?;
    let c = Constellation::from_permutations(&perms)?.with_root(nb.root)?;
    let mut parent = vec![None; c.vertex_count()];
    for &(i, t) in &cl.bud_edges {
        let v = c.vertex_at(t, i);
        if parent[v].is_some() {
            return Err(Error::InternalDisagreement("a vertex got two parent edges".into()));
        }
        parent[v] = Some(i);
    }
    let roots: Vec<usize> = (0..c.vertex_count()).filter(|&v| parent[v].is_none()).collect();
    if roots.len() != 1 {
        return Err(Error::InternalDisagreement(format!("{} vertices without a parent edge", roots.len())));
    }
    TreePointedConstellation::new(c, Arborescence::new(roots[0], parent))
}

/// True when, reading the buds along the tour from the root's half-edge of
/// type `start`, black buds never outnumber white ones.
pub fn is_parenthesis_from(nb: &Nebula, start: usize) -> bool {
    let mut level = 0i64;
    for (col, _) in nb.bud_word(start) {
        level += if col == VertexColor::White { 1 } else { -1 };
        if level < 0 {
            return false;
        }
    }
    true
}

/// The parenthesis condition read from the corner between the root's
/// half-edges of types k and 1.
pub fn is_parenthesis_nebula(nb: &Nebula) -> bool {
    is_parenthesis_from(nb, nb.k - 1)
}

/// Both sides of `#tree-pointed(reduced type p) · ∏ p_t! = Σ_t |T^n_{p+e_t}|`.
pub fn verify_pointing(n: usize, p: &[usize], cap: u128) -> Result<IdentityReport> {
    let k = p.len();
    let pointed = catalog::tree_pointed(n, k, Some(p), cap)?.len();
    let weight: BigUint = p.iter().map(|&x| factorial(x)).product();
    let mut rhs = BigUint::default();
    for t in 0..k {
        let mut q = p.to_vec();
        q[t] += 1;
        rhs += BigUint::from(catalog::tree_rooted(n, &q, cap)?.len());
    }
    Ok(IdentityReport::from_unsigned(BigUint::from(pointed) * weight, rhs))
}

/// Rooted nebulas of size `n` and type `p`, one canonical representative
/// each, obtained by opening every tree-pointed constellation.
pub fn rooted_nebulas(n: usize, p: &[usize], cap: u128) -> Result<BTreeSet<Nebula>> {
    Ok(catalog::tree_pointed(n, p.len(), Some(p), cap)?
        .iter()
        .map(|tp| dual_opening(tp).canonical())
        .collect())
}

/// Both sides of `#rooted nebulas(n, p) · ∏ p_t! = Σ_t C^n_{p+e_t}`.
pub fn verify_nebula_count(n: usize, p: &[usize], cap: u128) -> Result<IdentityReport> {
    let count = BigUint::from(rooted_nebulas(n, p, cap)?.len());
    let weight: BigUint = p.iter().map(|&x| factorial(x)).product();
    let mut rhs = BigUint::default();
    for t in 0..p.len() {
        let mut q = p.to_vec();
        q[t] += 1;
        rhs += count_colored(n, &q, cap)?;
    }
    Ok(IdentityReport::from_unsigned(count * weight, rhs))
}

#[derive(Serialize, Deserialize)]
struct WhiteStep {
    from: [usize; 2],
    to: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct NebulaJson {
    k: usize,
    n: usize,
    root: usize,
    subsets: Vec<TypeSet>,
    white_next: Vec<WhiteStep>,
    #[serde(default, skip_deserializing)]
    half_edges: Vec<BTreeMap<String, serde_json::Value>>,
}

impl Serialize for Nebula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let k = self.k;
        let one = |x: usize| {
            let (t, i) = unkey(k, x);
            [t + 1, i + 1]
        };
        let map = self.half_edge_map();
        let half_edges = map
            .half_edges()
            .iter()
            .map(|he| {
                BTreeMap::from([
                    ("vertex".to_string(), serde_json::json!(he.vertex + 1)),
                    ("next".to_string(), serde_json::json!(he.next + 1)),
                    ("twin".to_string(), serde_json::json!(he.twin.map(|t| t + 1))),
                    ("type".to_string(), serde_json::json!(he.ty + 1)),
                    ("color".to_string(), serde_json::json!(map.vertex_colors()[he.vertex])),
                ])
            })
            .collect();
        NebulaJson {
            k,
            n: self.n(),
            root: self.root + 1,
            subsets: self.subsets.clone(),
            white_next: (0..self.white_next.len())
                .map(|x| WhiteStep { from: one(x), to: one(self.white_next[x]) })
                .collect(),
            half_edges,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nebula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = NebulaJson::deserialize(d)?;
        let k = raw.k;
        let decode = |[t, i]: [usize; 2]| -> std::result::Result<usize, D::Error> {
            if t == 0 || t > k || i == 0 || i > raw.n {
                return Err(D::Error::custom(format!("bad white key ({t}, {i})")));
            }
            Ok(key(k, t - 1, i - 1))
        };
        let mut white_next = vec![usize::MAX; raw.n * k];
        for step in &raw.white_next {
            white_next[decode(step.from)?] = decode(step.to)?;
        }
        if white_next.contains(&usize::MAX) || raw.root == 0 {
            return Err(D::Error::custom("incomplete white rotation or bad root"));
        }
        Nebula::new(k, raw.subsets, white_next, raw.root - 1).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::tree_pointed;
    use crate::enumerate::{grid, DEFAULT_CAP};

    #[test]
    fn size_one_opening_and_closing() {
        let id = Permutation::identity(1);
        let c = Constellation::from_permutations(&[id.clone(), id.clone(), id]).unwrap().with_root(0).unwrap();
        let v0 = c.vertex_at(2, 0);
        let a = Arborescence::enumerate(&c, v0).pop().unwrap();
        let tp = TreePointedConstellation::new(c, a).unwrap();
        let nb = dual_opening(&tp);
        nb.validate().unwrap();
        assert_eq!(nb.subsets(), &[TypeSet::from_types([0, 1])]);
        assert_eq!(nb.type_vector(), vec![1, 1, 0]);
        assert_eq!(dual_closure(&nb).unwrap(), tp);
    }

    #[test]
    fn zero_buds_close_to_the_dual() {
        let t = Permutation::from_cycles(2, &[&[1, 2]]).unwrap();
        let c = Constellation::from_permutations(&[t.clone(), t]).unwrap();
        let nb = Nebula {
            k: 2,
            subsets: vec![TypeSet::EMPTY; 2],
            white_next: {
                let d = HalfEdgeMap::dual(&c);
                (0..4).map(|x| d.half_edge(4 + x).next - 4).collect()
            },
            root: 0,
        };
        let cl = closure(&nb, ClosureStrategy::Fixpoint).unwrap();
        assert!(cl.bud_edges.is_empty());
        assert_eq!(cl.map, HalfEdgeMap::dual(&c));
        assert!(is_parenthesis_nebula(&nb));
    }

    #[test]
    fn opening_and_closing_are_inverse() {
        for (n, k) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3)] {
            for tp in tree_pointed(n, k, None, DEFAULT_CAP).unwrap() {
                let nb = dual_opening(&tp);
                nb.validate().unwrap();
                assert_eq!(nb.type_vector(), tp.reduced_type());
                assert_eq!(nb.half_edge_map().face_count(), 1);
                let stack = closure(&nb, ClosureStrategy::Stack).unwrap();
                let fix = closure(&nb, ClosureStrategy::Fixpoint).unwrap();
                assert_eq!(stack.map, fix.map);
                assert_eq!(stack.bud_edges, fix.bud_edges);
                assert_eq!(stack.bud_edges.len(), tp.reduced_type().iter().sum::<usize>());
                let back = dual_closure(&nb).unwrap();
                assert_eq!(back, tp);
                assert_eq!(dual_opening(&back), nb);
            }
        }
    }

    #[test]
    fn canonical_labelling_identifies_relabelled_nebulas() {
        for tp in tree_pointed(3, 2, None, DEFAULT_CAP).unwrap() {
            let nb = dual_opening(&tp);
            let canon = nb.canonical();
            canon.validate().unwrap();
            assert_eq!(canon.canonical(), canon);
            assert_eq!(dual_closure(&canon).unwrap().canonical(), tp.canonical());
        }
    }

    #[test]
    fn parenthesis_condition_detects_tree_rooted() {
        for (n, k) in [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3)] {
            for tp in tree_pointed(n, k, None, DEFAULT_CAP).unwrap() {
                let nb = dual_opening(&tp);
                assert_eq!(is_parenthesis_nebula(&nb), tp.is_tree_rooted(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pointing_counts() {
        for n in 1..=3 {
            for p in grid(2, 0, n) {
                let r = verify_pointing(n, &p, DEFAULT_CAP).unwrap();
                assert!(r.equal, "n={n} p={p:?}: {r:?}");
            }
        }
        let r = verify_pointing(1, &[0, 1], DEFAULT_CAP).unwrap();
        assert_eq!(r.lhs, 1.into());
    }

    #[test]
    fn nebula_counts_match_colored_cacti() {
        for n in 1..=3 {
            for p in grid(2, 0, n) {
                let r = verify_nebula_count(n, &p, DEFAULT_CAP).unwrap();
                assert!(r.equal, "n={n} p={p:?}: {r:?}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let tp = tree_pointed(2, 3, None, DEFAULT_CAP).unwrap().pop().unwrap();
        let nb = dual_opening(&tp);
        let text = serde_json::to_string(&nb).unwrap();
        let back: Nebula = serde_json::from_str(&text).unwrap();
        assert_eq!(back, nb);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["half_edges"].as_array().unwrap().len(), 2 * 2 * 3);
    }
}
