//! Round-trip suites for the bijections, looked up by name.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::bidding::{self, Bidding, Prebidding};
use crate::catalog;
use crate::enumerate::{colored_factorizations, for_each_m_tuple, grid};
use crate::error::{Error, Result};
use crate::maps::TreeRootedConstellation;
use crate::nebula::{self, ClosureStrategy, Nebula};
use crate::perm::Permutation;
use crate::phi;
use crate::report::{CheckTally, SuiteReport};
use crate::symmetry;

/// One bijection and the checks that certify it on a finite domain.
pub trait BijectionSuite: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Runs every check over the whole domain of size `n` with `k` types.
    fn run(&self, n: usize, k: usize, cap: u128) -> Result<SuiteReport>;
}

/// Suites by name.
pub struct Registry {
    suites: BTreeMap<&'static str, Box<dyn BijectionSuite>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { suites: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(PhiSuite));
        r.register(Box::new(SwapSuite));
        r.register(Box::new(LambdaSuite));
        r.register(Box::new(ThetaSuite));
        r.register(Box::new(SigmaSuite));
        r.register(Box::new(PsiSuite));
        r
    }

    pub fn register(&mut self, suite: Box<dyn BijectionSuite>) {
        self.suites.insert(suite.name(), suite);
    }

    pub fn get(&self, name: &str) -> Result<&dyn BijectionSuite> {
        self.suites.get(name).map(|s| s.as_ref()).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown bijection {name:?}; known: {}", self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.keys().copied().collect()
    }

    pub fn run(&self, name: &str, n: usize, k: usize, cap: u128) -> Result<SuiteReport> {
        self.get(name)?.run(n, k, cap)
    }
}

fn check_size(n: usize, k: usize) -> Result<()> {
    if n == 0 || k < 2 {
        return Err(Error::InvalidArgument("need n >= 1 and k >= 2".into()));
    }
    Ok(())
}

/// Merges per-item tallies in input order, so reports do not depend on
/// scheduling.
fn collect_parallel<T: Sync>(
    report: &mut SuiteReport,
    items: &[T],
    check: impl Fn(&T) -> Vec<CheckTally> + Sync + Send,
) {
    let parts: Vec<Vec<CheckTally>> = items.par_iter().map(check).collect();
    for part in parts {
        for tally in part {
            let name = tally.name.clone();
            report.tally(&name).merge(tally);
        }
    }
}

fn tally(name: &str, ok: bool, describe: impl FnOnce() -> String) -> CheckTally {
    let mut t = CheckTally::new(name);
    t.record(ok, describe);
    t
}

struct PhiSuite;

impl BijectionSuite for PhiSuite {
    fn name(&self) -> &'static str {
        "phi"
    }

    fn description(&self) -> &'static str {
        "colored cacti to tree-rooted constellations and back"
    }

    fn run(&self, n: usize, k: usize, cap: u128) -> Result<SuiteReport> {
        check_size(n, k)?;
        let mut report = SuiteReport::new(self.name(), k, n);
        for p in grid(k, 1, n) {
            let cacti = colored_factorizations(n, &p, cap)?;
            let images: Vec<Result<TreeRootedConstellation>> = cacti.par_iter().map(phi::phi).collect();
            let mut seen = BTreeSet::new();
            for (cf, image) in cacti.iter().zip(images) {
                let t = match image {
                    Ok(t) => t,
                    Err(e) => {
                        report.tally("forward").record(false, || format!("{cf:?}: {e}"));
                        continue;
                    }
                };
                report.tally("forward").record(true, String::new);
                report.tally("canonical").record(t.is_canonical(), || format!("{cf:?}"));
                report.tally("compositions").record(t.vertex_compositions() == cf.color_compositions(), || format!("{cf:?}"));
                report
                    .tally("inverse after forward")
                    .record(phi::phi_inverse(&t).as_ref() == Ok(cf), || format!("{cf:?}"));
                seen.insert(t);
            }
            let trees: BTreeSet<_> = catalog::tree_rooted(n, &p, cap)?.into_iter().collect();
            report.tally("image is every tree-rooted constellation").record(seen == trees, || {
                format!("p={p:?}: {} images, {} tree-rooted", seen.len(), trees.len())
            });
            for t in &trees {
                let ok = phi::phi_inverse(t).and_then(|cf| phi::phi(&cf)).as_ref() == Ok(t);
                report.tally("forward after inverse").record(ok, || format!("p={p:?}"));
            }
        }
        Ok(report)
    }
}

struct SwapSuite;

impl BijectionSuite for SwapSuite {
    fn name(&self) -> &'static str {
        "swap"
    }

    fn description(&self) -> &'static str {
        "moving one unit of hyperdegree between two vertices of the same type"
    }

    fn run(&self, n: usize, k: usize, cap: u128) -> Result<SuiteReport> {
        check_size(n, k)?;
        let mut report = SuiteReport::new(self.name(), k, n);
        let trees = catalog::all_tree_rooted(n, k, cap)?;
        let comps: Vec<Vec<Vec<usize>>> = trees.iter().map(|t| t.vertex_compositions()).collect();
        for t in 0..k {
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let mut image = BTreeSet::new();
                    let mut target = BTreeSet::new();
                    for (tr, c) in trees.iter().zip(&comps) {
                        if c[t].len() > i.max(j) && c[t][j] >= 2 {
                            target.insert(tr.clone());
                        }
                        if c[t].len() <= i.max(j) || c[t][i] < 2 {
                            continue;
                        }
                        let describe = || format!("t={} i={} j={}", t + 1, i + 1, j + 1);
                        let out = match symmetry::swap_degree(tr, t, i, j) {
                            Ok(out) => out,
                            Err(e) => {
                                report.tally("defined").record(false, || format!("{}: {e}", describe()));
                                continue;
                            }
                        };
                        report.tally("defined").record(true, String::new);
                        let mut expected = c.clone();
                        expected[t][i] -= 1;
                        expected[t][j] += 1;
                        report.tally("degrees").record(out.vertex_compositions() == expected, describe);
                        let back = symmetry::swap_degree(&out, t, j, i);
                        report.tally("involution").record(back.as_ref() == Ok(tr), describe);
                        image.insert(out);
                    }
                    report.tally("image is the target set").record(image == target, || {
                        format!("t={} i={} j={}: {} vs {}", t + 1, i + 1, j + 1, image.len(), target.len())
                    });
                }
            }
        }
        Ok(report)
    }
}

struct LambdaSuite;

impl BijectionSuite for LambdaSuite {
    fn name(&self) -> &'static str {
        "lambda"
    }

    fn description(&self) -> &'static str {
        "opening tree-pointed constellations into nebulas and closing them back"
    }

    fn run(&self, n: usize, k: usize, cap: u128) -> Result<SuiteReport> {
        check_size(n, k)?;
        let mut report = SuiteReport::new(self.name(), k, n);
        let pointed = catalog::tree_pointed(n, k, None, cap)?;
        collect_parallel(&mut report, &pointed, |tp| {
            let nb = nebula::dual_opening(tp);
            let describe = || serde_json::to_string(tp).unwrap_or_default();
            let mut out = vec![
                tally("nebula is valid", nb.validate().is_ok(), describe),
                tally("type is the reduced type", nb.type_vector() == tp.reduced_type(), describe),
            ];
            let closed = nebula::dual_closure(&nb);
            out.push(tally("closing undoes opening", closed.as_ref() == Ok(tp), describe));
            out.push(tally(
                "opening undoes closing",
                closed.map(|c| nebula::dual_opening(&c) == nb).unwrap_or(false),
                describe,
            ));
            let (a, b) = (nebula::closure(&nb, ClosureStrategy::Stack), nebula::closure(&nb, ClosureStrategy::Fixpoint));
            let same = matches!((&a, &b), (Ok(x), Ok(y)) if x.map == y.map && x.bud_edges == y.bud_edges);
            out.push(tally("closure order does not matter", same, describe));
            let glued = a.map(|c| c.bud_edges.len() == tp.reduced_type().iter().sum::<usize>()).unwrap_or(false);
            out.push(tally("one glue per tree edge", glued, describe));
            out.push(tally(
                "parenthesis condition iff tree-rooted",
                nebula::is_parenthesis_nebula(&nb) == tp.is_tree_rooted(),
                describe,
            ));
            out
        });
        let distinct: BTreeSet<Nebula> = pointed.iter().map(|tp| nebula::dual_opening(tp).canonical()).collect();
        report.tally("distinct nebulas").record(distinct.len() == pointed.len(), || {
            format!("{} nebulas from {} tree-pointed constellations", distinct.len(), pointed.len())
        });
        Ok(report)
    }
}

fn all_valid_prebiddings(n: usize, k: usize) -> Vec<Prebidding> {
    grid(k, 0, n).into_iter().flat_map(|p| bidding::valid_prebiddings(n, &p)).collect()
}

fn all_valid_biddings(n: usize, k: usize, cap: u128) -> Result<Vec<Bidding>> {
    let needed = num::pow(crate::enumerate::factorial(n), k);
    if needed > num::BigUint::from(cap) {
        return Err(Error::CapExceeded { needed: u128::try_from(&needed).unwrap_or(u128::MAX), cap });
    }
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let mut tuples = vec![Vec::new()];
    for _ in 0..k {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix: Vec<Permutation>| {
                perms.iter().map(move |w| {
                    let mut next = prefix.clone();
                    next.push(w.clone());
                    next
                })
            })
            .collect();
    }
    let mut subsets = Vec::new();
    for p in grid(k, 0, n) {
        for_each_m_tuple(n, k, &p, |s| subsets.push(s.to_vec()));
    }
    Ok(tuples
        .par_iter()
        .flat_map_iter(|omegas| {
            subsets
                .iter()
                .map(|s| Bidding::new(omegas.clone(), s.clone()).expect("well-formed"))
                .filter(Bidding::is_valid)
                .collect::<Vec<_>>()
        })
        .collect())
}

struct ThetaSuite;

impl BijectionSuite for ThetaSuite {
    fn name(&self) -> &'static str {
        "theta"
    }

    fn description(&self) -> &'static str {
        "labelled rooted nebulas to valid prebiddings and back"
    }

    fn run(&self, n: usize, k: usize, cap: u128) -> Result<SuiteReport> {
        check_size(n, k)?;
        let mut report = SuiteReport::new(self.name(), k, n);
        let pre = all_valid_prebiddings(n, k);
        collect_parallel(&mut report, &pre, |p| {
            let describe = || serde_json::to_string(p).unwrap_or_default();
            match bidding::vartheta_inverse(p) {
                Ok(nb) => vec![
                    tally("inverse gives a nebula", true, describe),
                    tally("forward after inverse", bidding::vartheta(&nb) == *p, describe),
                ],
                Err(e) => vec![tally("inverse gives a nebula", false, || format!("{}: {e}", describe()))],
            }
        });
        let pointed = catalog::tree_pointed(n, k, None, cap)?;
        collect_parallel(&mut report, &pointed, |tp| {
            let nb = nebula::dual_opening(tp);
            let p = bidding::vartheta(&nb);
            vec![
                tally("forward is valid", p.is_valid(), || format!("{p:?}")),
                tally("inverse after forward", bidding::vartheta_inverse(&p).as_ref() == Ok(&nb), || format!("{p:?}")),
            ]
        });
        Ok(report)
    }
}

struct SigmaSuite;

impl BijectionSuite for SigmaSuite {
    fn name(&self) -> &'static str {
        "sigma"
    }

    fn description(&self) -> &'static str {
        "valid prebiddings to valid biddings and back"
    }

    fn run(&self, n: usize, k: usize, cap: u128) -> Result<SuiteReport> {
        check_size(n, k)?;
        let mut report = SuiteReport::new(self.name(), k, n);
        let pre = all_valid_prebiddings(n, k);
        collect_parallel(&mut report, &pre, |p| {
            let describe = || serde_json::to_string(p).unwrap_or_default();
            match bidding::sigma(p) {
                Ok(b) => vec![
                    tally("forward is valid", b.is_valid(), describe),
                    tally("inverse after forward", bidding::sigma_inverse(&b).as_ref() == Ok(p), describe),
                ],
                Err(e) => vec![tally("forward is valid", false, || format!("{}: {e}", describe()))],
            }
        });
        let biddings = all_valid_biddings(n, k, cap)?;
        report.tally("as many valid biddings as valid prebiddings").record(biddings.len() == pre.len(), || {
            format!("{} biddings, {} prebiddings", biddings.len(), pre.len())
        });
        collect_parallel(&mut report, &biddings, |b| {
            let back = bidding::sigma_inverse(b).and_then(|p| bidding::sigma(&p));
            vec![tally("forward after inverse", back.as_ref() == Ok(b), || serde_json::to_string(b).unwrap_or_default())]
        });
        Ok(report)
    }
}

struct PsiSuite;

impl BijectionSuite for PsiSuite {
    fn name(&self) -> &'static str {
        "psi"
    }

    fn description(&self) -> &'static str {
        "labelled rooted nebulas to valid biddings and back"
    }

    fn run(&self, n: usize, k: usize, cap: u128) -> Result<SuiteReport> {
        check_size(n, k)?;
        let mut report = SuiteReport::new(self.name(), k, n);
        let nebulas: Vec<Nebula> =
            all_valid_prebiddings(n, k).iter().map(bidding::vartheta_inverse).collect::<Result<_>>()?;
        collect_parallel(&mut report, &nebulas, |nb| {
            let describe = || serde_json::to_string(nb).unwrap_or_default();
            match bidding::psi(nb) {
                Ok(b) => vec![
                    tally("forward is valid", b.is_valid(), describe),
                    tally("type is preserved", b.type_vector() == nb.type_vector(), describe),
                    tally("inverse after forward", bidding::psi_inverse(&b).as_ref() == Ok(nb), describe),
                ],
                Err(e) => vec![tally("forward is valid", false, || format!("{}: {e}", describe()))],
            }
        });
        let biddings = all_valid_biddings(n, k, cap)?;
        collect_parallel(&mut report, &biddings, |b| {
            let back = bidding::psi_inverse(b).and_then(|nb| bidding::psi(&nb));
            vec![tally("forward after inverse", back.as_ref() == Ok(b), || serde_json::to_string(b).unwrap_or_default())]
        });
        let distinct: BTreeSet<&Nebula> = nebulas.iter().collect();
        report.tally("distinct nebulas").record(distinct.len() == biddings.len(), || {
            format!("{} nebulas, {} valid biddings", distinct.len(), biddings.len())
        });
        Ok(report)
    }
}
