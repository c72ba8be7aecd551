//! Biddings: the algebraic end of the chain. A labelled rooted nebula is read
//! off as the order in which its white corners are visited (a prebidding), and
//! that order is compressed to one permutation per type (a bidding).

use std::collections::BTreeSet;

use num::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{count_colored, factorial, for_each_m_tuple};
use crate::error::{Error, Result};
use crate::maps::{key, unkey};
use crate::nebula::{self, Nebula};
use crate::perm::Permutation;
use crate::report::IdentityReport;
use crate::subset::TypeSet;

/// α(t, R), 0-based: `t − 1` if `t ∈ R`, otherwise `t + r` where
/// `t+1, …, t+r ∈ R` and `t+r+1 ∉ R` (all mod k).
pub fn alpha(t: usize, r: TypeSet, k: usize) -> Result<usize> {
    if t >= k {
        return Err(Error::InvalidArgument(format!("type {} outside [{k}]", t + 1)));
    }
    if !r.is_strict(k) {
        return Err(Error::InvalidSubset(format!("{r} is not a strict subset of [{k}]")));
    }
    Ok(alpha_unchecked(t, r, k))
}

fn alpha_unchecked(t: usize, r: TypeSet, k: usize) -> usize {
    if r.contains(t) {
        return (t + k - 1) % k;
    }
    let mut s = t;
    while r.contains((s + 1) % k) {
        s = (s + 1) % k;
    }
    s
}

/// A multigraph on the types, loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedGraph {
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TypedGraph {
    pub fn is_tree(&self) -> bool {
        is_tree(self)
    }

    /// Edges as 1-based unordered pairs, smaller end first, sorted.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|&(a, b)| (a.min(b) + 1, a.max(b) + 1)).collect()
    }
}

/// The graph with edges `{t, α(t, R_{i_t})}` for `t` in `0..k−1`.
pub fn alpha_graph(indices: &[usize], subsets: &[TypeSet], k: usize) -> Result<TypedGraph> {
    if indices.len() + 1 != k {
        return Err(Error::SizeMismatch { expected: k - 1, found: indices.len() });
    }
    let edges = indices
        .iter()
        .enumerate()
        .map(|(t, &i)| {
            let r = *subsets
                .get(i)
                .ok_or_else(|| Error::InvalidArgument(format!("index {} outside [{}]", i + 1, subsets.len())))?;
            Ok((t, alpha(t, r, k)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TypedGraph { k, edges })
}

pub fn is_tree(g: &TypedGraph) -> bool {
    if g.edges.len() + 1 != g.k {
        return false;
    }
    let mut parent: Vec<usize> = (0..g.k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in &g.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// A linear order on `[k]×[n]` (least first) together with strict subsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prebidding {
    k: usize,
    order: Vec<(usize, usize)>,
    subsets: Vec<TypeSet>,
}

impl Prebidding {
    /// Checks only that `order` lists every pair once and that the subsets are
    /// strict; validity is a separate predicate.
    pub fn new(k: usize, order: Vec<(usize, usize)>, subsets: Vec<TypeSet>) -> Result<Self> {
        let n = subsets.len();
        if order.len() != k * n {
            return Err(Error::SizeMismatch { expected: k * n, found: order.len() });
        }
        let mut seen = vec![false; k * n];
        for &(t, i) in &order {
            if t >= k || i >= n || std::mem::replace(&mut seen[key(k, t, i)], true) {
                return Err(Error::InvalidPrebidding(format!("({}, {}) is out of range or repeated", t + 1, i + 1)));
            }
        }
        if let Some(r) = subsets.iter().find(|r| !r.is_strict(k)) {
            return Err(Error::InvalidSubset(format!("{r} is not a strict subset of [{k}]")));
        }
        Ok(Prebidding { k, order, subsets })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    pub fn subsets(&self) -> &[TypeSet] {
        &self.subsets
    }

    /// Label of the greatest element.
    pub fn root_label(&self) -> usize {
        self.order.last().expect("non-empty").1
    }

    /// Reports the first violated condition, scanning from the least element
    /// and finishing with the wrap from greatest to least.
    pub fn validate(&self) -> Result<()> {
        let k = self.k;
        let &(lt, li) = self.order.last().expect("non-empty");
        if lt != k - 1 {
            return Err(Error::InvalidPrebidding(format!("greatest element ({}, {}) is not of type {k}", lt + 1, li + 1)));
        }
        let len = self.order.len();
        for s in 0..len {
            let (t, i) = self.order[s];
            let (u, j) = self.order[(s + 1) % len];
            let want = alpha_unchecked(t, self.subsets[i], k);
            if u != want {
                return Err(Error::InvalidPrebidding(format!(
                    "({}, {}) is followed by ({}, {}) but α({}, {}) = {}",
                    t + 1,
                    i + 1,
                    u + 1,
                    j + 1,
                    t + 1,
                    self.subsets[i],
                    want + 1
                )));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

#[derive(Serialize, Deserialize)]
struct PrebiddingJson {
    order: Vec<[usize; 2]>,
    subsets: Vec<TypeSet>,
}

impl Serialize for Prebidding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PrebiddingJson {
            order: self.order.iter().map(|&(t, i)| [t + 1, i + 1]).collect(),
            subsets: self.subsets.clone(),
        }
        .serialize(s)
    }
}

/// One permutation per type together with strict subsets. `omegas[t].apply(m)`
/// is the label of the `m`-th pair of type `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawBidding")]
pub struct Bidding {
    omegas: Vec<Permutation>,
    subsets: Vec<TypeSet>,
}

#[derive(Deserialize)]
struct RawBidding {
    omegas: Vec<Permutation>,
    subsets: Vec<TypeSet>,
}

impl TryFrom<RawBidding> for Bidding {
    type Error = Error;

    fn try_from(raw: RawBidding) -> Result<Self> {
        Bidding::new(raw.omegas, raw.subsets)
    }
}

impl Bidding {
    pub fn new(omegas: Vec<Permutation>, subsets: Vec<TypeSet>) -> Result<Self> {
        let (k, n) = (omegas.len(), subsets.len());
        if k < 2 {
            return Err(Error::InvalidArgument("a bidding needs k >= 2".into()));
        }
        if let Some(w) = omegas.iter().find(|w| w.len() != n) {
            return Err(Error::SizeMismatch { expected: n, found: w.len() });
        }
        if let Some(r) = subsets.iter().find(|r| !r.is_strict(k)) {
            return Err(Error::InvalidSubset(format!("{r} is not a strict subset of [{k}]")));
        }
        Ok(Bidding { omegas, subsets })
    }

    pub fn k(&self) -> usize {
        self.omegas.len()
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    pub fn omegas(&self) -> &[Permutation] {
        &self.omegas
    }

    pub fn subsets(&self) -> &[TypeSet] {
        &self.subsets
    }

    pub fn type_vector(&self) -> Vec<usize> {
        crate::enumerate::type_counts(self.k(), &self.subsets)
    }

    /// The graph built from the last labels `ω_1(n), …, ω_{k−1}(n)`.
    pub fn alpha_graph(&self) -> TypedGraph {
        let n = self.n();
        let last: Vec<usize> = self.omegas[..self.k() - 1].iter().map(|w| w.apply(n - 1)).collect();
        alpha_graph(&last, &self.subsets, self.k()).expect("well-formed bidding")
    }

    pub fn is_valid(&self) -> bool {
        self.alpha_graph().is_tree()
    }
}

/// ϑ: the appearance order of white corners along the tour, closed by the
/// root's type-k pair.
pub fn vartheta(nb: &Nebula) -> Prebidding {
    let (k, n) = (nb.k(), nb.n());
    let nk = n * k;
    let keys: Vec<usize> = nb.tour().into_iter().filter(|&h| h >= nk).map(|h| h - nk).collect();
    let last = keys.iter().position(|&x| x == key(k, k - 1, nb.root())).expect("every corner is visited");
    let order = (0..nk).map(|s| unkey(k, keys[(last + 1 + s) % nk])).collect();
    Prebidding { k, order, subsets: nb.subsets().to_vec() }
}

/// ϑ⁻¹: rebuilds the white rotation from the tour. Leaving the corner of
/// `(t, i)` the tour goes through the white half-edge `(t, i)` itself when it
/// is a bud, and otherwise through the next non-bud type after `t` at black
/// vertex `i`.
pub fn vartheta_inverse(p: &Prebidding) -> Result<Nebula> {
    p.validate()?;
    let (k, n) = (p.k, p.n());
    let nk = n * k;
    let arrival = |t: usize, i: usize| -> usize {
        let r = p.subsets[i];
        if r.contains(t) {
            return key(k, t, i);
        }
        let mut s = (t + 1) % k;
        while r.contains(s) {
            s = (s + 1) % k;
        }
        key(k, s, i)
    };
    let mut white_next = vec![usize::MAX; nk];
    for s in 0..nk {
        let (t, i) = p.order[s];
        let (u, j) = p.order[(s + 1) % nk];
        white_next[arrival(t, i)] = key(k, u, j);
    }
    Nebula::new(k, p.subsets.clone(), white_next, p.root_label())
}

/// σ: ω_t lists the labels of type `t` in order.
pub fn sigma(p: &Prebidding) -> Result<Bidding> {
    p.validate()?;
    let mut lists = vec![Vec::with_capacity(p.n()); p.k];
    for &(t, i) in &p.order {
        lists[t].push(i);
    }
    let omegas = lists.into_iter().map(Permutation::from_images).collect::<Result<Vec<_>>>()?;
    Ok(Bidding { omegas, subsets: p.subsets.clone() })
}

/// σ⁻¹: replays the arcs `a_{t,i}: t → α(t, R_i)` leaving each type in the
/// order ω_t, starting right after the root's arc.
pub fn sigma_inverse(b: &Bidding) -> Result<Prebidding> {
    let (k, n) = (b.k(), b.n());
    if !b.is_valid() {
        return Err(Error::InvalidBidding(format!(
            "the graph with edges {:?} is not a tree",
            b.alpha_graph().edge_set()
        )));
    }
    let root = b.omegas[k - 1].apply(n - 1);
    let mut used = vec![0usize; k];
    let mut order = Vec::with_capacity(k * n);
    let mut at = alpha_unchecked(k - 1, b.subsets[root], k);
    while used[at] < n {
        let i = b.omegas[at].apply(used[at]);
        used[at] += 1;
        order.push((at, i));
        at = alpha_unchecked(at, b.subsets[i], k);
    }
    if order.len() != k * n || order.last() != Some(&(k - 1, root)) {
        return Err(Error::InternalDisagreement(format!(
            "the replay stopped after {} of {} arcs",
            order.len(),
            k * n
        )));
    }
    Ok(Prebidding { k, order, subsets: b.subsets.clone() })
}

/// Ψ = σ∘ϑ.
pub fn psi(nb: &Nebula) -> Result<Bidding> {
    sigma(&vartheta(nb))
}

/// Ψ⁻¹ = ϑ⁻¹∘σ⁻¹.
pub fn psi_inverse(b: &Bidding) -> Result<Nebula> {
    vartheta_inverse(&sigma_inverse(b)?)
}

pub fn is_valid_bidding(b: &Bidding) -> bool {
    b.is_valid()
}

/// Every valid order for fixed subsets, built pair by pair following α.
pub fn valid_orders(k: usize, subsets: &[TypeSet]) -> Vec<Prebidding> {
    let n = subsets.len();
    let mut out = Vec::new();
    for root in 0..n {
        let start = alpha_unchecked(k - 1, subsets[root], k);
        let mut used = vec![false; k * n];
        used[key(k, k - 1, root)] = true;
        let mut order = Vec::with_capacity(k * n);
        extend_orders(k, subsets, start, &mut used, &mut order, root, &mut out);
    }
    out
}

fn extend_orders(
    k: usize,
    subsets: &[TypeSet],
    at: usize,
    used: &mut [bool],
    order: &mut Vec<(usize, usize)>,
    root: usize,
    out: &mut Vec<Prebidding>,
) {
    let n = subsets.len();
    if order.len() + 1 == k * n {
        if at == k - 1 {
            let mut full = order.clone();
            full.push((k - 1, root));
            out.push(Prebidding { k, order: full, subsets: subsets.to_vec() });
        }
        return;
    }
    for i in 0..n {
        let x = key(k, at, i);
        if !used[x] {
            used[x] = true;
            order.push((at, i));
            extend_orders(k, subsets, alpha_unchecked(at, subsets[i], k), used, order, root, out);
            order.pop();
            used[x] = false;
        }
    }
}

/// Every valid prebidding of size `n` and type `p`.
pub fn valid_prebiddings(n: usize, p: &[usize]) -> Vec<Prebidding> {
    let k = p.len();
    let mut out = Vec::new();
    for_each_m_tuple(n, k, p, |s| out.extend(valid_orders(k, s)));
    out
}

fn permutation_tuples(n: usize, k: usize) -> Vec<Vec<Permutation>> {
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Permutation>| {
                all.iter().map(move |w| {
                    let mut next = prefix.clone();
                    next.push(w.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// Counts valid biddings of size `n` and type `p` by testing every ω-tuple
/// against every subset tuple.
pub fn count_valid_biddings(n: usize, p: &[usize], cap: u128) -> Result<BigUint> {
    let k = p.len();
    let needed = num::pow(factorial(n), k);
    if needed > BigUint::from(cap) {
        return Err(Error::CapExceeded { needed: u128::try_from(&needed).unwrap_or(u128::MAX), cap });
    }
    let mut tuples = Vec::new();
    for_each_m_tuple(n, k, p, |s| tuples.push(s.to_vec()));
    let count: u64 = permutation_tuples(n, k)
        .into_par_iter()
        .map(|omegas| {
            tuples
                .iter()
                .filter(|s| Bidding { omegas: omegas.clone(), subsets: (*s).clone() }.is_valid())
                .count() as u64
        })
        .sum();
    Ok(BigUint::from(count))
}

/// Counts tuples in `M^n_p` whose first subset has `k − 1` elements.
pub fn count_full_first(n: usize, p: &[usize]) -> BigUint {
    let k = p.len();
    let mut count = 0u64;
    for_each_m_tuple(n, k, p, |s| {
        if s[0].len() == k - 1 {
            count += 1;
        }
    });
    BigUint::from(count)
}

/// The counting consequences for valid biddings of size `n` and type `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiddingCounts {
    /// Valid biddings against `n!·Σ_t C^n_{p+e_t}`.
    pub cacti: IdentityReport,
    /// `n!·Σ_t C^n_{p+e_t}` against `n!^k·#{M-tuples with |R_1| = k−1}`.
    pub full_first: IdentityReport,
    /// Valid biddings against `n!·∏p_t!·#rooted nebulas`.
    pub nebulas: IdentityReport,
}

impl BiddingCounts {
    pub fn ok(&self) -> bool {
        self.cacti.equal && self.full_first.equal && self.nebulas.equal
    }
}

pub fn verify_bidding_counts(n: usize, p: &[usize], cap: u128) -> Result<BiddingCounts> {
    let k = p.len();
    let valid = count_valid_biddings(n, p, cap)?;
    let mut union = BigUint::default();
    for t in 0..k {
        let mut q = p.to_vec();
        q[t] += 1;
        union += count_colored(n, &q, cap)?;
    }
    let nf = factorial(n);
    let lhs = &nf * union;
    let rhs = num::pow(nf.clone(), k) * count_full_first(n, p);
    let weight: BigUint = p.iter().map(|&x| factorial(x)).product();
    let nebulas = BigUint::from(nebula::rooted_nebulas(n, p, cap)?.len()) * weight * nf;
    Ok(BiddingCounts {
        cacti: IdentityReport::from_unsigned(valid.clone(), lhs.clone()),
        full_first: IdentityReport::from_unsigned(lhs, rhs),
        nebulas: IdentityReport::from_unsigned(valid, nebulas),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::tree_pointed;
    use crate::enumerate::{grid, DEFAULT_CAP};
    use crate::nebula::dual_opening;

    fn set(types: &[usize]) -> TypeSet {
        TypeSet::from_one_based(types, 4).unwrap()
    }

    #[test]
    fn alpha_small_cases() {
        assert_eq!(alpha(0, set(&[1]), 3).unwrap(), 2);
        assert_eq!(alpha(0, TypeSet::EMPTY, 3).unwrap(), 0);
        assert_eq!(alpha(0, set(&[2, 3]), 3).unwrap(), 2);
        assert_eq!(alpha(2, set(&[1]), 3).unwrap(), 0);
        assert!(alpha(0, TypeSet::full(3), 3).is_err());
    }

    #[test]
    fn tree_test() {
        assert!(is_tree(&TypedGraph { k: 2, edges: vec![(0, 1)] }));
        assert!(!is_tree(&TypedGraph { k: 2, edges: vec![(0, 0)] }));
        assert!(!is_tree(&TypedGraph { k: 3, edges: vec![(0, 1), (1, 0)] }));
        assert!(is_tree(&TypedGraph { k: 3, edges: vec![(0, 2), (1, 0)] }));
        for r in TypeSet::all_strict(2) {
            let g = alpha_graph(&[0], &[r], 2).unwrap();
            assert_eq!(g.is_tree(), r.len() == 1);
        }
        let g = alpha_graph(&[0, 0], &[TypeSet::EMPTY], 3).unwrap();
        assert!(!g.is_tree());
    }

    fn figure_bidding() -> Bidding {
        let omegas = [[1, 4, 3, 2], [3, 2, 1, 4], [4, 1, 3, 2]]
            .iter()
            .map(|w| Permutation::from_one_line(w).unwrap())
            .collect();
        let subsets = vec![set(&[2]), set(&[2, 3]), set(&[1, 2]), set(&[2, 3])];
        Bidding::new(omegas, subsets).unwrap()
    }

    #[test]
    fn figure_bidding_round_trip() {
        let b = figure_bidding();
        assert_eq!(b.alpha_graph().edge_set(), BTreeSet::from([(1, 2), (1, 3)]));
        assert!(b.is_valid());
        let pre = sigma_inverse(&b).unwrap();
        let expected: Vec<(usize, usize)> =
            [(2, 3), (1, 1), (2, 2), (1, 4), (3, 4), (2, 1), (1, 3), (3, 1), (3, 3), (2, 4), (1, 2), (3, 2)]
                .iter()
                .map(|&(t, i)| (t - 1, i - 1))
                .collect();
        assert_eq!(pre.order(), expected.as_slice());
        let nb = psi_inverse(&b).unwrap();
        assert_eq!(nb.root(), 1);
        assert_eq!(nb.type_vector(), vec![1, 4, 2]);
        assert_eq!(psi(&nb).unwrap(), b);
        assert_eq!(
            serde_json::to_string(&psi(&nb).unwrap()).unwrap(),
            r#"{"omegas":[[1,4,3,2],[3,2,1,4],[4,1,3,2]],"subsets":[[2],[2,3],[1,2],[2,3]]}"#
        );
    }

    #[test]
    fn trivial_size() {
        assert!(valid_prebiddings(1, &[0, 0]).is_empty());
        let p = valid_prebiddings(1, &[1, 0]);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].order(), &[(0, 0), (1, 0)]);
        let b = sigma(&p[0]).unwrap();
        assert_eq!(sigma_inverse(&b).unwrap(), p[0]);
        let nb = vartheta_inverse(&p[0]).unwrap();
        assert_eq!(vartheta(&nb), p[0]);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let bad = Prebidding::new(2, vec![(1, 0), (0, 0)], vec![TypeSet::EMPTY]).unwrap();
        let err = vartheta_inverse(&bad).unwrap_err();
        assert!(matches!(err, Error::InvalidPrebidding(_)), "{err}");
        let w = Permutation::identity(1);
        let b = Bidding::new(vec![w.clone(), w], vec![TypeSet::EMPTY]).unwrap();
        assert!(!b.is_valid());
        assert!(matches!(psi_inverse(&b), Err(Error::InvalidBidding(_))));
        assert!(Prebidding::new(2, vec![(0, 0), (0, 0)], vec![TypeSet::EMPTY]).is_err());
        assert!(serde_json::from_str::<Bidding>(r#"{"omegas":[[1],[1]],"subsets":[[1,2]]}"#).is_err());
        let ok: Bidding = serde_json::from_str(r#"{"omegas":[[1],[1]],"subsets":[[1]]}"#).unwrap();
        assert!(ok.is_valid());
    }

    #[test]
    fn openings_give_valid_prebiddings_and_round_trip() {
        for (n, k) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3)] {
            for tp in tree_pointed(n, k, None, DEFAULT_CAP).unwrap() {
                let nb = dual_opening(&tp);
                let pre = vartheta(&nb);
                pre.validate().unwrap();
                assert_eq!(vartheta_inverse(&pre).unwrap(), nb);
                let b = psi(&nb).unwrap();
                assert!(b.is_valid());
                assert_eq!(b.type_vector(), nb.type_vector());
                assert_eq!(psi_inverse(&b).unwrap(), nb);
            }
        }
    }

    #[test]
    fn every_valid_prebidding_comes_from_a_nebula() {
        for (n, k) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)] {
            for p in grid(k, 0, n) {
                let all = valid_prebiddings(n, &p);
                let mut biddings = BTreeSet::new();
                for pre in &all {
                    let nb = vartheta_inverse(pre).unwrap();
                    assert_eq!(&vartheta(&nb), pre);
                    let b = sigma(pre).unwrap();
                    assert!(b.is_valid());
                    assert_eq!(&sigma_inverse(&b).unwrap(), pre);
                    biddings.insert(b);
                    let tp = nebula::dual_closure(&nb).unwrap();
                    assert_eq!(tp.reduced_type(), p);
                }
                assert_eq!(biddings.len(), all.len());
                let weight: usize = p.iter().map(|&x| (1..=x).product::<usize>()).product();
                let nf: usize = (1..=n).product();
                let nebulas = nebula::rooted_nebulas(n, &p, DEFAULT_CAP).unwrap().len();
                assert_eq!(all.len(), nf * weight * nebulas, "n={n} p={p:?}");
            }
        }
    }

    fn determinant(mut m: Vec<Vec<i128>>) -> i128 {
        let d = m.len();
        let mut prev = 1i128;
        let mut sign = 1i128;
        for c in 0..d {
            if m[c][c] == 0 {
                match (c + 1..d).find(|&r| m[r][c] != 0) {
                    Some(r) => {
                        m.swap(r, c);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for r in c + 1..d {
                for j in c + 1..d {
                    m[r][j] = (m[r][j] * m[c][c] - m[r][c] * m[c][j]) / prev;
                }
            }
            prev = m[c][c];
        }
        sign * if d == 0 { 1 } else { m[d - 1][d - 1] }
    }

    #[test]
    fn valid_orders_match_eulerian_tour_count() {
        let fact = |x: usize| (1..=x as i128).product::<i128>();
        for (n, k) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let strict = TypeSet::all_strict(k);
            let mut idx = vec![0usize; n];
            loop {
                let subsets: Vec<TypeSet> = idx.iter().map(|&x| strict[x]).collect();
                let mut lap = vec![vec![0i128; k]; k];
                for t in 0..k {
                    for &r in &subsets {
                        let u = alpha(t, r, k).unwrap();
                        if u != t {
                            lap[t][t] += 1;
                            lap[t][u] -= 1;
                        }
                    }
                }
                let reduced: Vec<Vec<i128>> = lap[..k - 1].iter().map(|row| row[..k - 1].to_vec()).collect();
                let tours = determinant(reduced) * fact(n - 1).pow(k as u32) * n as i128;
                assert_eq!(valid_orders(k, &subsets).len() as i128, tours, "{subsets:?}");
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < strict.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
    }

    #[test]
    fn bidding_counts() {
        for n in 1..=3 {
            for p in grid(2, 0, n) {
                let c = verify_bidding_counts(n, &p, DEFAULT_CAP).unwrap();
                assert!(c.ok(), "n={n} p={p:?}: {c:?}");
            }
        }
        let c = verify_bidding_counts(2, &[1, 1, 1], DEFAULT_CAP).unwrap();
        assert!(c.ok(), "{c:?}");
    }
}
