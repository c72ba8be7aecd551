//! Exhaustive catalogues of the map families at small sizes. These are built
//! directly from their definitions, independently of the bijections.

use num::BigUint;

use crate::enumerate::factorial;
use crate::error::{Error, Result};
use crate::maps::{Arborescence, Constellation, TreePointedConstellation, TreeRootedConstellation};
use crate::perm::Permutation;

fn check_cap(n: usize, k: usize, cap: u128) -> Result<()> {
    let needed = num::pow(factorial(n), k);
    if needed > BigUint::from(cap) {
        return Err(Error::CapExceeded { needed: u128::try_from(&needed).unwrap_or(u128::MAX), cap });
    }
    Ok(())
}

/// Every rooted k-constellation of size `n`, each in its canonical labelling
/// (root hyperedge 0). Obtained by keeping the transitive k-tuples that are
/// their own canonical form.
pub fn rooted_constellations(n: usize, k: usize, cap: u128) -> Result<Vec<Constellation>> {
    if n == 0 || k < 2 {
        return Err(Error::InvalidArgument("need n >= 1 and k >= 2".into()));
    }
    check_cap(n, k, cap)?;
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let mut idx = vec![0usize; k];
    let mut out = Vec::new();
    loop {
        let perms: Vec<Permutation> = idx.iter().map(|&i| all[i].clone()).collect();
        if let Ok(c) = Constellation::from_permutations(&perms) {
            let c = c.with_root(0).expect("n >= 1");
            if c.is_canonical_rooted() {
                out.push(c);
            }
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < all.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Every vertex labelling of `c`: per type, all bijections onto `[p_t]`.
pub fn vertex_labellings(c: &Constellation) -> Vec<Vec<usize>> {
    let k = c.k();
    let groups: Vec<Vec<usize>> = (0..k).map(|t| c.vertices_of_type(t).collect()).collect();
    let options: Vec<Vec<Permutation>> = groups.iter().map(|g| Permutation::all(g.len()).collect()).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let mut labels = vec![0; c.vertex_count()];
        for t in 0..k {
            for (m, &v) in groups[t].iter().enumerate() {
                labels[v] = options[t][idx[t]].apply(m);
            }
        }
        out.push(labels);
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `T^n_p`: vertex-labelled tree-rooted constellations of size `n` and type `p`,
/// in canonical hyperedge labelling.
pub fn tree_rooted(n: usize, p: &[usize], cap: u128) -> Result<Vec<TreeRootedConstellation>> {
    let mut out = Vec::new();
    for c in rooted_constellations(n, p.len(), cap)? {
        if c.type_vector() != p {
            continue;
        }
        let v0 = c.root_vertex().expect("rooted");
        let trees = Arborescence::enumerate(&c, v0);
        if trees.is_empty() {
            continue;
        }
        for labels in vertex_labellings(&c) {
            let labelled = c.clone().with_labels(labels).expect("bijective labels");
            for a in &trees {
                out.push(TreeRootedConstellation::new(labelled.clone(), a.clone())?);
            }
        }
    }
    Ok(out)
}

/// All vertex-labelled tree-rooted constellations of size `n` with `k` types.
pub fn all_tree_rooted(n: usize, k: usize, cap: u128) -> Result<Vec<TreeRootedConstellation>> {
    let mut out = Vec::new();
    for c in rooted_constellations(n, k, cap)? {
        let trees = Arborescence::enumerate(&c, c.root_vertex().expect("rooted"));
        for labels in vertex_labellings(&c) {
            let labelled = c.clone().with_labels(labels).expect("bijective labels");
            for a in &trees {
                out.push(TreeRootedConstellation::new(labelled.clone(), a.clone())?);
            }
        }
    }
    Ok(out)
}

/// Every tree-pointed constellation of size `n` with `k` types, optionally
/// restricted to one reduced type.
pub fn tree_pointed(n: usize, k: usize, reduced: Option<&[usize]>, cap: u128) -> Result<Vec<TreePointedConstellation>> {
    let mut out = Vec::new();
    for c in rooted_constellations(n, k, cap)? {
        for v0 in 0..c.vertex_count() {
            if let Some(p) = reduced {
                let mut r = c.type_vector();
                r[c.vertex_type(v0)] -= 1;
                if r != p {
                    continue;
                }
            }
            for a in Arborescence::enumerate(&c, v0) {
                out.push(TreePointedConstellation::new(c.clone(), a)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{count_colored, m_coefficient, DEFAULT_CAP};
    use crate::maps::HalfEdgeMap;

    #[test]
    fn rooted_constellations_times_relabellings_give_transitive_tuples() {
        for (n, k) in [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3)] {
            let rooted = rooted_constellations(n, k, DEFAULT_CAP).unwrap();
            let all: Vec<Permutation> = Permutation::all(n).collect();
            let mut transitive = 0u64;
            let mut idx = vec![0usize; k];
            'outer: loop {
                let perms: Vec<Permutation> = idx.iter().map(|&i| all[i].clone()).collect();
                if crate::maps::is_transitive(&perms) {
                    transitive += 1;
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break 'outer;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < all.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
            let fact: u64 = (1..n as u64).product();
            assert_eq!(rooted.len() as u64 * fact, transitive, "n={n} k={k}");
        }
    }

    #[test]
    fn rooted_cacti_match_factorizations() {
        for (n, k) in [(3, 2), (4, 2), (3, 3)] {
            let cacti = rooted_constellations(n, k, DEFAULT_CAP).unwrap().into_iter().filter(|c| c.is_cactus()).count();
            assert_eq!(BigUint::from(cacti), crate::enumerate::factorization_count(n, k));
        }
    }

    #[test]
    fn tree_rooted_counts_match_colored_cacti() {
        for (n, k) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
            for p in crate::enumerate::grid(k, 1, n) {
                let trees = tree_rooted(n, &p, DEFAULT_CAP).unwrap().len();
                assert_eq!(BigUint::from(trees), count_colored(n, &p, DEFAULT_CAP).unwrap(), "n={n} p={p:?}");
            }
        }
        assert_eq!(m_coefficient(1, &[0, 1]).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn every_rooted_constellation_round_trips_through_its_dual() {
        for c in rooted_constellations(3, 3, DEFAULT_CAP).unwrap() {
            let back = HalfEdgeMap::dual(&c).to_constellation().unwrap();
            assert_eq!(back, c.clone().without_root());
            assert_eq!(Constellation::from_permutations(&c.to_permutations()).unwrap(), back);
        }
    }
}
