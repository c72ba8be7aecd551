//! Moving one unit of hyperdegree between two vertices of the same type in a
//! vertex-labelled tree-rooted constellation, and the symmetry of colored
//! counts under changes of composition with fixed lengths.

use num::{BigInt, BigUint};
use serde::Serialize;

use crate::enumerate::{count_by_color_compositions_with, verify_mv_formula_with, CycleTypeTable};
use crate::error::{Error, Result};
use crate::maps::{Arborescence, Constellation, TreeRootedConstellation};
use crate::perm::Composition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapCase {
    /// The edge `e_i` is off the tree path from `u_j`; one hyperedge moves.
    Single,
    /// The edge `e_i` is on that path; the two vertices trade their hyperedges
    /// and labels.
    Mass,
}

struct SwapSetup {
    ui: usize,
    uj: usize,
    hi: usize,
    hi_prev: usize,
    hj: usize,
    case: SwapCase,
}

fn rotate_to(rot: &[usize], first: usize) -> Vec<usize> {
    let s = rot.iter().position(|&h| h == first).expect("hyperedge is incident");
    rot[s..].iter().chain(&rot[..s]).copied().collect()
}

fn setup(tr: &TreeRootedConstellation, t: usize, i: usize, j: usize) -> Result<SwapSetup> {
    let c = tr.constellation();
    let k = c.k();
    if t >= k {
        return Err(Error::InvalidArgument(format!("type {} out of range", t + 1)));
    }
    if i == j {
        return Err(Error::InvalidArgument("the two labels must differ".into()));
    }
    let missing = |l: usize| Error::InvalidArgument(format!("no vertex of type {} labelled {}", t + 1, l + 1));
    let ui = tr.vertex_with_label(t, i).ok_or_else(|| missing(i))?;
    let uj = tr.vertex_with_label(t, j).ok_or_else(|| missing(j))?;
    if c.hyperdegree(ui) < 2 {
        return Err(Error::HyperdegreeTooSmall { ty: t + 1, label: i + 1 });
    }
    let a = tr.arborescence();
    let root = c.root().expect("rooted");
    let hi = a.parent_hyperedge(ui).unwrap_or(root);
    let hj = a.parent_hyperedge(uj).unwrap_or(root);
    let rot = c.rotation(ui);
    let pos = rot.iter().position(|&h| h == hi).expect("h_i is incident to u_i");
    let hi_prev = rot[(pos + rot.len() - 1) % rot.len()];
    let prev_type = (t + k - 1) % k;
    let w = c.vertex_at(prev_type, hi_prev);
    let on_path = a.path_to_root(c, uj).contains(&w) && a.parent_hyperedge(w) == Some(hi_prev);
    let case = if on_path { SwapCase::Mass } else { SwapCase::Single };
    Ok(SwapSetup { ui, uj, hi, hi_prev, hj, case })
}

/// Which of the two reglueing rules `swap_degree(tr, t, i, j)` uses.
pub fn swap_case(tr: &TreeRootedConstellation, t: usize, i: usize, j: usize) -> Result<SwapCase> {
    Ok(setup(tr, t, i, j)?.case)
}

/// φ_{t,i,j}: lowers the hyperdegree of the type-t vertex labelled `i` by one
/// and raises that of the one labelled `j`. The output is in canonical
/// hyperedge labelling.
pub fn swap_degree(tr: &TreeRootedConstellation, t: usize, i: usize, j: usize) -> Result<TreeRootedConstellation> {
    let s = setup(tr, t, i, j)?;
    let c = tr.constellation();
    let mut rotations: Vec<Vec<usize>> = c.rotations().to_vec();
    let mut labels = tr.labels().to_vec();
    let ui_rot = rotate_to(c.rotation(s.ui), s.hi);
    let uj_rot = rotate_to(c.rotation(s.uj), s.hj);
    match s.case {
        SwapCase::Single => {
            rotations[s.ui] = ui_rot.into_iter().filter(|&h| h != s.hi_prev).collect();
            let mut new_j = uj_rot;
            new_j.push(s.hi_prev);
            rotations[s.uj] = new_j;
        }
        SwapCase::Mass => {
            let x = &ui_rot[1..ui_rot.len() - 1];
            let y = &uj_rot[1..];
            let mut new_i = vec![s.hi];
            new_i.extend_from_slice(y);
            new_i.push(s.hi_prev);
            let mut new_j = vec![s.hj];
            new_j.extend_from_slice(x);
            rotations[s.ui] = new_i;
            rotations[s.uj] = new_j;
            labels.swap(s.ui, s.uj);
        }
    }
    let vertices: Vec<(usize, Vec<usize>)> = c.vertex_types().iter().copied().zip(rotations).collect();
    let (rebuilt, vmap) = Constellation::from_rotations(c.k(), c.n(), &vertices)?;
    let mut new_labels = vec![0; labels.len()];
    let mut parent = vec![None; labels.len()];
    for v in 0..labels.len() {
        new_labels[vmap[v]] = labels[v];
        parent[vmap[v]] = tr.arborescence().parent_hyperedge(v);
    }
    let root_vertex = vmap[tr.arborescence().root_vertex()];
    let rebuilt = rebuilt.with_root(c.root().expect("rooted"))?.with_labels(new_labels)?;
    let out = TreeRootedConstellation::new(rebuilt, Arborescence::new(root_vertex, parent))
        .map_err(|e| Error::InternalDisagreement(format!("degree swap broke the tree: {e}")))?;
    Ok(out.canonical())
}

/// One elementary move `(t, i, j)` of a transport schedule.
pub type Move = (usize, usize, usize);

/// Moves `tr` to the target vertex-compositions by elementary swaps, type by
/// type, always from the leftmost label above its target to the leftmost label
/// below it. Returns the result and the schedule.
pub fn transport(tr: &TreeRootedConstellation, target: &[Vec<usize>]) -> Result<(TreeRootedConstellation, Vec<Move>)> {
    let current = tr.vertex_compositions();
    if target.len() != current.len() || target.iter().zip(&current).any(|(a, b)| a.len() != b.len()) {
        return Err(Error::ProfileMismatch("target compositions have different lengths".into()));
    }
    for (t, (a, b)) in target.iter().zip(&current).enumerate() {
        if a.iter().sum::<usize>() != b.iter().sum::<usize>() || a.contains(&0) {
            return Err(Error::ProfileMismatch(format!("target for type {} is not a composition of n", t + 1)));
        }
    }
    let mut out = tr.clone();
    let mut schedule = Vec::new();
    for t in 0..target.len() {
        loop {
            let cur = &out.vertex_compositions()[t];
            let above = (0..cur.len()).find(|&l| cur[l] > target[t][l]);
            let below = (0..cur.len()).find(|&l| cur[l] < target[t][l]);
            match (above, below) {
                (Some(i), Some(j)) => {
                    out = swap_degree(&out, t, i, j)?;
                    schedule.push((t, i, j));
                }
                _ => break,
            }
        }
    }
    Ok((out, schedule))
}

/// Undoes a transport schedule.
pub fn transport_back(tr: &TreeRootedConstellation, schedule: &[Move]) -> Result<TreeRootedConstellation> {
    let mut out = tr.clone();
    for &(t, i, j) in schedule.iter().rev() {
        out = swap_degree(&out, t, j, i)?;
    }
    Ok(out)
}

/// The counts for one length profile of the symmetry check.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileCheck {
    pub lengths: Vec<usize>,
    pub tuples: usize,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub min: BigUint,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub max: BigUint,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub closed_form: BigInt,
    pub equal: bool,
}

/// For every length profile at size `n`, evaluates `c(γ)` on all composition
/// tuples with that profile and compares each with the closed form.
pub fn verify_symmetry(n: usize, k: usize, cap: u128) -> Result<Vec<ProfileCheck>> {
    let table = CycleTypeTable::new(n, k, cap)?;
    let all = Composition::all(n);
    let mut out = Vec::new();
    for lengths in crate::enumerate::grid(k, 1, n) {
        let choices: Vec<Vec<&Composition>> =
            lengths.iter().map(|&l| all.iter().filter(|c| c.length() == l).collect()).collect();
        let mut idx = vec![0usize; k];
        let mut min: Option<BigUint> = None;
        let mut max = BigUint::default();
        let mut tuples = 0;
        let mut formula_ok = true;
        let mut closed_form;
        'outer: loop {
            let gammas: Vec<Composition> = idx.iter().zip(&choices).map(|(&x, c)| c[x].clone()).collect();
            let value = count_by_color_compositions_with(&table, &gammas);
            let report = verify_mv_formula_with(&table, &gammas)?;
            formula_ok &= report.equal;
            closed_form = report.rhs;
            tuples += 1;
            if min.as_ref().map_or(true, |m| &value < m) {
                min = Some(value.clone());
            }
            if value > max {
                max = value;
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
        let min = min.unwrap_or_default();
        let equal = formula_ok && min == max;
        out.push(ProfileCheck { lengths, tuples, min, max, closed_form, equal });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::all_tree_rooted;
    use crate::enumerate::DEFAULT_CAP;
    use std::collections::{BTreeSet, HashSet};

    #[test]
    fn small_degree_is_rejected() {
        let trees = all_tree_rooted(2, 2, DEFAULT_CAP).unwrap();
        let t = trees.iter().find(|t| t.constellation().type_vector() == vec![2, 1]).unwrap();
        assert!(matches!(swap_degree(t, 0, 0, 1), Err(Error::HyperdegreeTooSmall { .. })));
        assert!(swap_degree(t, 0, 0, 0).is_err());
    }

    #[test]
    fn swap_is_an_involution_with_the_right_degrees() {
        for (n, k) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let trees = all_tree_rooted(n, k, DEFAULT_CAP).unwrap();
            let mut cases = HashSet::new();
            for tr in &trees {
                let comps = tr.vertex_compositions();
                for t in 0..k {
                    for i in 0..comps[t].len() {
                        for j in 0..comps[t].len() {
                            if i == j || comps[t][i] < 2 {
                                continue;
                            }
                            let case = swap_case(tr, t, i, j).unwrap();
                            let out = swap_degree(tr, t, i, j).unwrap();
                            let mut expected = comps.clone();
                            expected[t][i] -= 1;
                            expected[t][j] += 1;
                            assert_eq!(out.vertex_compositions(), expected);
                            assert_eq!(out.constellation().type_vector(), tr.constellation().type_vector());
                            assert_eq!(swap_case(&out, t, j, i).unwrap(), case);
                            assert_eq!(swap_degree(&out, t, j, i).unwrap(), *tr, "n={n} k={k} t={t} i={i} j={j}");
                            cases.insert(case as u8);
                        }
                    }
                }
            }
            if n == 3 {
                assert_eq!(cases.len(), 2, "both cases occur at n={n} k={k}");
            }
        }
    }

    #[test]
    fn swap_maps_onto_the_target_set() {
        let (n, k) = (3, 2);
        let trees = all_tree_rooted(n, k, DEFAULT_CAP).unwrap();
        for t in 0..k {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let source: Vec<_> = trees
                        .iter()
                        .filter(|tr| tr.vertex_compositions()[t].get(i).is_some_and(|&d| d >= 2))
                        .filter(|tr| tr.vertex_compositions()[t].len() > j)
                        .collect();
                    let image: BTreeSet<_> = source.iter().map(|tr| swap_degree(tr, t, i, j).unwrap()).collect();
                    let target: BTreeSet<_> = trees
                        .iter()
                        .filter(|tr| tr.vertex_compositions()[t].get(j).is_some_and(|&d| d >= 2))
                        .filter(|tr| tr.vertex_compositions()[t].len() > i)
                        .cloned()
                        .collect();
                    assert_eq!(image, target);
                }
            }
        }
    }

    #[test]
    fn transport_is_invertible_and_onto() {
        let (n, k) = (3, 2);
        let trees = all_tree_rooted(n, k, DEFAULT_CAP).unwrap();
        for tr in &trees {
            let comps = tr.vertex_compositions();
            let (same, moves) = transport(tr, &comps).unwrap();
            assert!(moves.is_empty());
            assert_eq!(same, *tr);
        }
        let profiles: BTreeSet<Vec<Vec<usize>>> = trees.iter().map(|t| t.vertex_compositions()).collect();
        for gamma in &profiles {
            for delta in profiles.iter().filter(|d| d.iter().zip(gamma).all(|(a, b)| a.len() == b.len())) {
                let source: Vec<_> = trees.iter().filter(|t| t.vertex_compositions() == *gamma).collect();
                let mut image = BTreeSet::new();
                for tr in &source {
                    let (out, schedule) = transport(tr, delta).unwrap();
                    assert_eq!(transport_back(&out, &schedule).unwrap(), **tr);
                    image.insert(out);
                }
                let target: BTreeSet<_> = trees.iter().filter(|t| t.vertex_compositions() == *delta).cloned().collect();
                assert_eq!(image, target);
            }
        }
    }

    #[test]
    fn transport_rejects_other_profiles() {
        let trees = all_tree_rooted(2, 2, DEFAULT_CAP).unwrap();
        let t = trees.iter().find(|t| t.constellation().type_vector() == vec![1, 1]).unwrap();
        assert!(matches!(transport(t, &[vec![1, 1], vec![2]]), Err(Error::ProfileMismatch(_))));
    }

    #[test]
    fn counts_only_depend_on_lengths() {
        for (n, k) in [(4, 2), (3, 3)] {
            for check in verify_symmetry(n, k, DEFAULT_CAP).unwrap() {
                assert!(check.equal, "{check:?}");
            }
        }
    }
}
