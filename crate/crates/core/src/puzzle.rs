//! The tree puzzle: draw `k − 1` indices and a tuple in `M^n_p` uniformly; the
//! chance that the α-graph is a tree equals the chance that `R_1` has `k − 1`
//! elements. Everything here is exact except [`sample_puzzle`].

use std::fmt;

use num::integer::Integer;
use num::{BigInt, BigUint, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bidding::{alpha_graph, count_full_first};
use crate::enumerate::{for_each_m_tuple, m_coefficient, type_counts, MTable};
use crate::error::{Error, Result};
use crate::subset::TypeSet;

/// A probability as a reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactProbability {
    numerator: BigUint,
    denominator: BigUint,
}

impl ExactProbability {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::UndefinedProbability);
        }
        if numerator > denominator {
            return Err(Error::InvalidArgument(format!("{numerator}/{denominator} exceeds 1")));
        }
        let g = numerator.gcd(&denominator);
        let g = if g.is_zero() { BigUint::one() } else { g };
        Ok(ExactProbability { numerator: numerator / &g, denominator: denominator / g })
    }

    /// `numerator / denominator` for a signed numerator, as arises from
    /// alternating sums.
    pub fn from_signed(numerator: BigInt, denominator: BigUint) -> Result<Self> {
        if numerator.is_negative() {
            return Err(Error::InternalDisagreement(format!("negative probability {numerator}/{denominator}")));
        }
        Self::new(numerator.magnitude().clone(), denominator)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn to_f64(&self) -> f64 {
        let scale = |x: &BigUint| x.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
        scale(&self.numerator) / scale(&self.denominator)
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl Serialize for ExactProbability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Two exact probabilities that should coincide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbabilityReport {
    pub lhs: ExactProbability,
    pub rhs: ExactProbability,
    pub equal: bool,
}

impl ProbabilityReport {
    pub fn new(lhs: ExactProbability, rhs: ExactProbability) -> Self {
        let equal = lhs == rhs;
        ProbabilityReport { lhs, rhs, equal }
    }
}

fn m_tuples_of(n: usize, p: &[usize]) -> Vec<Vec<TypeSet>> {
    let mut out = Vec::new();
    for_each_m_tuple(n, p.len(), p, |s| out.push(s.to_vec()));
    out
}

fn index_tuples(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(m as u32)).map(move |mut code| {
        (0..m)
            .map(|_| {
                let i = code % n;
                code /= n;
                i
            })
            .collect()
    })
}

fn check_shape(n: usize, p: &[usize]) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::InvalidArgument("need k >= 2".into()));
    }
    if n == 0 {
        return Err(Error::UndefinedProbability);
    }
    Ok(())
}

/// Number of pairs (indices, tuple) whose α-graph is a tree, and the number
/// of pairs in total.
pub fn tree_counts(n: usize, p: &[usize]) -> Result<(BigUint, BigUint)> {
    check_shape(n, p)?;
    let k = p.len();
    let tuples = m_tuples_of(n, p);
    if tuples.is_empty() {
        return Err(Error::UndefinedProbability);
    }
    let trees: u64 = tuples
        .par_iter()
        .map(|s| {
            index_tuples(n, k - 1).filter(|idx| alpha_graph(idx, s, k).expect("strict subsets").is_tree()).count() as u64
        })
        .sum();
    let total = BigUint::from(tuples.len()) * BigUint::from(n).pow(k as u32 - 1);
    Ok((BigUint::from(trees), total))
}

/// Probability that the α-graph of a uniform pair is a tree.
pub fn tree_probability(n: usize, p: &[usize]) -> Result<ExactProbability> {
    let (trees, total) = tree_counts(n, p)?;
    ExactProbability::new(trees, total)
}

/// Probability that `R_1` has `k − 1` elements. Counted directly and through
/// `Σ_t M^{n−1}` with `R_1 = [k] ∖ {t}`; the two must agree.
pub fn r1_probability(n: usize, p: &[usize]) -> Result<ExactProbability> {
    check_shape(n, p)?;
    let k = p.len();
    let m = m_coefficient(n, &p.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
    if m.is_zero() {
        return Err(Error::UndefinedProbability);
    }
    let direct = count_full_first(n, p);
    let mut split = BigUint::zero();
    for t in 0..k {
        let q: Vec<i64> = (0..k).map(|s| p[s] as i64 - i64::from(s != t)).collect();
        split += m_coefficient(n - 1, &q)?;
    }
    if direct != split {
        return Err(Error::InternalDisagreement(format!(
            "tuples with a full first subset: {direct} counted directly, {split} from the split"
        )));
    }
    ExactProbability::new(direct, m)
}

/// The outcome of comparing the two probabilities at one `(n, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuzzleReport {
    pub n: usize,
    pub p: Vec<usize>,
    pub tree: ExactProbability,
    pub r1: ExactProbability,
    pub equal: bool,
}

pub fn verify_puzzle(n: usize, p: &[usize]) -> Result<PuzzleReport> {
    let tree = tree_probability(n, p)?;
    let r1 = r1_probability(n, p)?;
    let equal = tree == r1;
    Ok(PuzzleReport { n, p: p.to_vec(), tree, r1, equal })
}

/// Whether `M^n_p > 0`: each type fits in `n` subsets and, since no subset
/// may hold all `k` types, the total fits in `n(k − 1)` places.
pub fn m_positive(n: usize, p: &[usize]) -> bool {
    p.iter().all(|&x| x <= n) && p.iter().sum::<usize>() <= n * (p.len() - 1)
}

/// Every `p` with `M^n_p > 0`, zero entries included.
pub fn feasible_types(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::enumerate::grid(k, 0, n).into_iter().filter(|p| m_positive(n, p)).collect()
}

/// Counts `P_{A_1×…×A_m}` numerators: pairs (indices in `[n]^m`, tuple in
/// `M^n_p`) with `A_s ⊆ R_{i_s}` for every slot, grouping index tuples by
/// which slots coincide.
pub struct EventCounter {
    n: usize,
    k: usize,
    p: Vec<usize>,
    tables: Vec<MTable>,
    total: BigUint,
}

impl EventCounter {
    pub fn new(n: usize, p: &[usize]) -> Result<Self> {
        check_shape(n, p)?;
        let k = p.len();
        let tables: Vec<MTable> = (0..=n).map(|s| MTable::new(s, k)).collect();
        let total = tables[n].get(&p.iter().map(|&x| x as i64).collect::<Vec<_>>());
        Ok(EventCounter { n, k, p: p.to_vec(), tables, total })
    }

    /// `M^n_p`.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Pairs meeting every containment.
    pub fn count(&self, sets: &[TypeSet]) -> BigUint {
        let m = sets.len();
        let mut blocks: Vec<usize> = Vec::with_capacity(m);
        let mut out = BigUint::zero();
        self.partitions(sets, &mut blocks, 0, &mut out);
        out
    }

    fn partitions(&self, sets: &[TypeSet], blocks: &mut Vec<usize>, used: usize, out: &mut BigUint) {
        if blocks.len() == sets.len() {
            if used > self.n {
                return;
            }
            let mut unions = vec![TypeSet::EMPTY; used];
            for (s, &b) in blocks.iter().enumerate() {
                unions[b] = unions[b].union(sets[s]);
            }
            let falling: BigUint = (0..used).map(|j| BigUint::from(self.n - j)).product();
            *out += falling * self.fixed_positions(&unions);
            return;
        }
        for b in 0..=used {
            blocks.push(b);
            self.partitions(sets, blocks, used.max(b + 1), out);
            blocks.pop();
        }
    }

    /// Tuples in `M^n_p` whose first `unions.len()` subsets contain the given
    /// sets.
    fn fixed_positions(&self, unions: &[TypeSet]) -> BigUint {
        let strict = TypeSet::all_strict(self.k);
        let mut remaining: Vec<i64> = self.p.iter().map(|&x| x as i64).collect();
        let mut out = BigUint::zero();
        self.fix(unions, self.n - unions.len(), &strict, &mut remaining, &mut out);
        out
    }

    fn fix(&self, unions: &[TypeSet], free: usize, strict: &[TypeSet], remaining: &mut [i64], out: &mut BigUint) {
        let Some((&u, rest)) = unions.split_first() else {
            *out += self.tables[free].get(remaining);
            return;
        };
        for &r in strict.iter().filter(|r| u.is_subset(**r)) {
            for t in r.iter() {
                remaining[t] -= 1;
            }
            self.fix(rest, free, strict, remaining, out);
            for t in r.iter() {
                remaining[t] += 1;
            }
        }
    }

    /// Probability of the event; the index slots are independent and uniform.
    pub fn probability(&self, sets: &[TypeSet]) -> Result<ExactProbability> {
        ExactProbability::new(self.count(sets), self.denominator(sets.len()))
    }

    /// `n^m · M^n_p`.
    pub fn denominator(&self, m: usize) -> BigUint {
        BigUint::from(self.n).pow(m as u32) * &self.total
    }
}

/// `P(A_s ⊆ R_{i_s} for all s)` with independent uniform indices.
pub fn event_probability(sets: &[TypeSet], n: usize, p: &[usize]) -> Result<ExactProbability> {
    if sets.len() >= p.len() {
        return Err(Error::InvalidArgument(format!("at most {} index slots", p.len() - 1)));
    }
    EventCounter::new(n, p)?.probability(sets)
}

/// The same numerator as [`EventCounter::count`], by listing every pair.
pub fn event_count_naive(sets: &[TypeSet], n: usize, p: &[usize]) -> BigUint {
    let mut count = 0u64;
    for s in m_tuples_of(n, p) {
        count += index_tuples(n, sets.len())
            .filter(|idx| sets.iter().zip(idx).all(|(a, &i)| a.is_subset(s[i])))
            .count() as u64;
    }
    BigUint::from(count)
}

fn one_based(types: &[usize]) -> TypeSet {
    TypeSet::from_types(types.iter().map(|t| t - 1))
}

/// The nine signed events whose alternating sum is the tree probability when
/// `k = 3`, as (sign, A, B) with 1-based types.
pub const K3_TREE_TERMS: [(i8, &[usize], &[usize]); 9] = [
    (1, &[1], &[2]),
    (1, &[1], &[3]),
    (1, &[2], &[3]),
    (-1, &[1], &[2, 3]),
    (-1, &[2], &[1, 3]),
    (-1, &[3], &[1, 2]),
    (1, &[1, 2], &[1, 3]),
    (1, &[1, 2], &[2, 3]),
    (1, &[1, 3], &[2, 3]),
];

/// The inclusion–exclusion sum at `k = 3`, and its reduced form
/// `P_{{1,2}×∅} + P_{{1,3}×∅} + P_{{2,3}×∅}`, each against the tree
/// probability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionExclusionReport {
    pub n: usize,
    pub p: Vec<usize>,
    pub nine_terms: ProbabilityReport,
    pub pairs: ProbabilityReport,
}

impl InclusionExclusionReport {
    pub fn ok(&self) -> bool {
        self.nine_terms.equal && self.pairs.equal
    }
}

pub fn verify_k3_inclusion_exclusion(n: usize, p: &[usize]) -> Result<InclusionExclusionReport> {
    if p.len() != 3 {
        return Err(Error::InvalidArgument("the inclusion–exclusion check is for k = 3".into()));
    }
    let tree = tree_probability(n, p)?;
    let counter = EventCounter::new(n, p)?;
    let mut signed = BigInt::zero();
    for (sign, a, b) in K3_TREE_TERMS {
        let c = BigInt::from(counter.count(&[one_based(a), one_based(b)]));
        signed += if sign > 0 { c } else { -c };
    }
    let nine = ExactProbability::from_signed(signed, counter.denominator(2))?;
    let mut pairs = BigUint::zero();
    for pair in [[1, 2], [1, 3], [2, 3]] {
        pairs += counter.count(&[one_based(&pair), TypeSet::EMPTY]);
    }
    let pairs = ExactProbability::new(pairs, counter.denominator(2))?;
    Ok(InclusionExclusionReport {
        n,
        p: p.to_vec(),
        nine_terms: ProbabilityReport::new(tree.clone(), nine),
        pairs: ProbabilityReport::new(tree, pairs),
    })
}

/// Moves the `b` content between two subsets: each gets `b` exactly when the
/// other had it.
pub fn exchange(ri: TypeSet, rj: TypeSet, b: usize) -> (TypeSet, TypeSet) {
    let give = |x: TypeSet, has: bool| if has { x.with(b) } else { x.without(b) };
    (give(ri, rj.contains(b)), give(rj, ri.contains(b)))
}

/// The four-term exchange identity for one labelling `(a, b, c)` of the types,
/// plus the raw sizes of the two events the exchange matches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeReport {
    /// 1-based labelling.
    pub abc: [usize; 3],
    pub identity: ProbabilityReport,
    pub first_event: u64,
    pub second_event: u64,
    /// The exchange maps the first event onto the second, injectively, keeping
    /// the type.
    pub bijection: bool,
}

impl ExchangeReport {
    pub fn ok(&self) -> bool {
        self.identity.equal && self.first_event == self.second_event && self.bijection
    }
}

/// `abc` is 0-based and must be a permutation of `{0, 1, 2}`.
pub fn verify_exchange_lemma(n: usize, p: &[usize], abc: [usize; 3]) -> Result<ExchangeReport> {
    let [a, b, c] = abc;
    let mut sorted = abc;
    sorted.sort_unstable();
    if p.len() != 3 || sorted != [0, 1, 2] {
        return Err(Error::InvalidArgument("the exchange check needs k = 3 and a labelling of {1,2,3}".into()));
    }
    let counter = EventCounter::new(n, p)?;
    if counter.total().is_zero() {
        return Err(Error::UndefinedProbability);
    }
    let set = |xs: &[usize]| TypeSet::from_types(xs.iter().copied());
    let lhs = counter.probability(&[set(&[a, b]), TypeSet::EMPTY])?;
    let signed = BigInt::from(counter.count(&[set(&[a]), set(&[b])]))
        - BigInt::from(counter.count(&[set(&[a, c]), set(&[b])]))
        + BigInt::from(counter.count(&[set(&[a, b]), set(&[a, c])]));
    let rhs = ExactProbability::from_signed(signed, counter.denominator(2))?;

    let in_first = |ri: TypeSet, rj: TypeSet| ri.contains(a) && !ri.contains(c) && rj.contains(b);
    let in_second =
        |ri: TypeSet, rj: TypeSet| ri.contains(a) && ri.contains(b) && !ri.contains(c) && rj != set(&[a, c]);
    let (mut first, mut second) = (0u64, 0u64);
    let mut images = std::collections::HashSet::new();
    let mut bijection = true;
    for s in m_tuples_of(n, p) {
        for i in 0..n {
            for j in 0..n {
                if in_second(s[i], s[j]) {
                    second += 1;
                }
                if !in_first(s[i], s[j]) {
                    continue;
                }
                first += 1;
                let mut t = s.clone();
                if i != j {
                    let (ri, rj) = exchange(s[i], s[j], b);
                    t[i] = ri;
                    t[j] = rj;
                }
                bijection &= in_second(t[i], t[j]) && type_counts(3, &t) == p && t.iter().all(|r| r.is_strict(3));
                bijection &= images.insert((t, i, j));
            }
        }
    }
    Ok(ExchangeReport {
        abc: [a + 1, b + 1, c + 1],
        identity: ProbabilityReport::new(lhs, rhs),
        first_event: first,
        second_event: second,
        bijection,
    })
}

/// Below this acceptance rate the sampler gives up.
pub const MIN_ACCEPTANCE: f64 = 1e-4;
const ACCEPTANCE_WARMUP: u64 = 100_000;

/// Monte Carlo estimates of both probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleEstimate {
    pub seed: u64,
    pub threads: usize,
    pub trials: u64,
    pub attempts: u64,
    pub tree_hits: u64,
    pub r1_hits: u64,
    pub tree: f64,
    pub r1: f64,
}

impl SampleEstimate {
    /// Standard error of the difference between the two estimates, treating
    /// them as independent.
    pub fn standard_error(&self) -> f64 {
        let t = self.trials as f64;
        ((self.tree * (1.0 - self.tree) + self.r1 * (1.0 - self.r1)) / t).sqrt()
    }
}

struct Chunk {
    attempts: u64,
    tree_hits: u64,
    r1_hits: u64,
}

fn sample_chunk(n: usize, p: &[usize], trials: u64, mut rng: ChaCha8Rng) -> Result<Chunk> {
    let k = p.len();
    let strict_count = (1u32 << k) - 1;
    let mut chunk = Chunk { attempts: 0, tree_hits: 0, r1_hits: 0 };
    let mut accepted = 0u64;
    let mut subsets = vec![TypeSet::EMPTY; n];
    let mut counts = vec![0usize; k];
    while accepted < trials {
        chunk.attempts += 1;
        counts.iter_mut().for_each(|c| *c = 0);
        for r in subsets.iter_mut() {
            *r = TypeSet::from_bits(rng.gen_range(0..strict_count));
            for t in r.iter() {
                counts[t] += 1;
            }
        }
        if counts == p {
            accepted += 1;
            let idx: Vec<usize> = (0..k - 1).map(|_| rng.gen_range(0..n)).collect();
            if alpha_graph(&idx, &subsets, k)?.is_tree() {
                chunk.tree_hits += 1;
            }
            if subsets[0].len() == k - 1 {
                chunk.r1_hits += 1;
            }
        }
        if chunk.attempts >= ACCEPTANCE_WARMUP && (accepted as f64) < MIN_ACCEPTANCE * chunk.attempts as f64 {
            return Err(Error::AcceptanceTooLow { accepted, attempts: chunk.attempts });
        }
    }
    Ok(chunk)
}

/// Rejection sampling: uniform strict subsets, kept when their type is `p`.
/// The trials are split over `threads` streams of one ChaCha generator seeded
/// with `seed`, so the result depends only on `(seed, threads)`.
pub fn sample_puzzle(n: usize, p: &[usize], trials: u64, seed: u64, threads: usize) -> Result<SampleEstimate> {
    check_shape(n, p)?;
    let k = p.len();
    if k > 16 || trials == 0 || threads == 0 {
        return Err(Error::InvalidArgument("need 2 <= k <= 16, trials >= 1 and threads >= 1".into()));
    }
    if !m_positive(n, p) {
        return Err(Error::UndefinedProbability);
    }
    let shares: Vec<(u64, u64)> = (0..threads as u64)
        .map(|c| (c, trials / threads as u64 + u64::from(c < trials % threads as u64)))
        .collect();
    let chunks = shares
        .par_iter()
        .map(|&(stream, share)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            sample_chunk(n, p, share, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let attempts = chunks.iter().map(|c| c.attempts).sum();
    let tree_hits = chunks.iter().map(|c| c.tree_hits).sum::<u64>();
    let r1_hits = chunks.iter().map(|c| c.r1_hits).sum::<u64>();
    Ok(SampleEstimate {
        seed,
        threads,
        trials,
        attempts,
        tree_hits,
        r1_hits,
        tree: tree_hits as f64 / trials as f64,
        r1: r1_hits as f64 / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::grid;
    use proptest::prelude::*;

    fn frac(a: u32, b: u32) -> ExactProbability {
        ExactProbability::new(a.into(), b.into()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(tree_probability(2, &[1, 1]).unwrap(), frac(1, 1));
        assert_eq!(r1_probability(2, &[1, 1]).unwrap(), frac(1, 1));
        let (trees, total) = tree_counts(2, &[1, 1, 1]).unwrap();
        assert_eq!(total, 24u32.into());
        assert_eq!(trees, 12u32.into());
        assert_eq!(r1_probability(2, &[1, 1, 1]).unwrap(), frac(1, 2));
        assert_eq!(r1_probability(2, &[0, 0]).unwrap(), frac(0, 1));
        assert_eq!(tree_probability(2, &[2, 2]), Err(Error::UndefinedProbability));
        assert_eq!(r1_probability(2, &[2, 2, 2]), Err(Error::UndefinedProbability));
        assert_eq!(frac(2, 4).to_string(), "1/2");
    }

    #[test]
    fn positivity_criterion() {
        for (n, k) in [(0, 2), (1, 2), (3, 2), (2, 3), (3, 3), (2, 4)] {
            let table = MTable::new(n, k);
            for p in grid(k, 0, n) {
                let m = table.get(&p.iter().map(|&x| x as i64).collect::<Vec<_>>());
                assert_eq!(m_positive(n, &p), !m.is_zero(), "n={n} p={p:?}");
            }
        }
    }

    #[test]
    fn k2_tree_means_singleton() {
        for n in 1..=4 {
            for p in grid(2, 0, n) {
                for s in m_tuples_of(n, &p) {
                    for i in 0..n {
                        assert_eq!(alpha_graph(&[i], &s, 2).unwrap().is_tree(), s[i].len() == 1);
                    }
                }
            }
        }
    }

    #[test]
    fn theorem_at_small_sizes() {
        for (k, max_n) in [(2, 5), (3, 3), (4, 2)] {
            for n in 1..=max_n {
                for p in feasible_types(n, k) {
                    let r = verify_puzzle(n, &p).unwrap();
                    assert!(r.equal, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn tree_count_ignores_index_names() {
        let p = [1, 2, 1];
        let (trees, _) = tree_counts(3, &p).unwrap();
        let mut relabelled = 0u64;
        for s in m_tuples_of(3, &p) {
            let rotated: Vec<TypeSet> = (0..3).map(|i| s[(i + 1) % 3]).collect();
            relabelled += index_tuples(3, 2).filter(|idx| alpha_graph(idx, &rotated, 3).unwrap().is_tree()).count() as u64;
        }
        assert_eq!(trees, relabelled.into());
    }

    #[test]
    fn events_match_listing() {
        for (n, p) in [(2, vec![1, 1, 1]), (3, vec![1, 2, 2]), (3, vec![2, 1, 0]), (2, vec![1, 1, 1, 1])] {
            let k = p.len();
            let counter = EventCounter::new(n, &p).unwrap();
            let strict = TypeSet::all_strict(k);
            for &a in &strict {
                for &b in &strict {
                    assert_eq!(counter.count(&[a, b]), event_count_naive(&[a, b], n, &p), "{a} {b}");
                }
                assert_eq!(counter.count(&[a]), event_count_naive(&[a], n, &p));
            }
        }
        assert_eq!(event_probability(&[TypeSet::EMPTY, TypeSet::EMPTY], 2, &[1, 1, 1]).unwrap(), frac(1, 1));
        assert_eq!(event_probability(&[one_based(&[1]), one_based(&[2])], 2, &[1, 1, 1]).unwrap(), {
            let naive = event_count_naive(&[one_based(&[1]), one_based(&[2])], 2, &[1, 1, 1]);
            ExactProbability::new(naive, 24u32.into()).unwrap()
        });
        assert_eq!(event_probability(&[one_based(&[3])], 2, &[1, 1, 0]).unwrap(), frac(0, 1));
    }

    #[test]
    fn inclusion_exclusion_at_k3() {
        let r = verify_k3_inclusion_exclusion(2, &[1, 1, 1]).unwrap();
        assert!(r.ok());
        assert_eq!(r.nine_terms.rhs, frac(1, 2));
        for p in feasible_types(3, 3) {
            assert!(verify_k3_inclusion_exclusion(3, &p).unwrap().ok(), "{p:?}");
        }
        assert_eq!(verify_k3_inclusion_exclusion(2, &[2, 2, 2]), Err(Error::UndefinedProbability));
    }

    #[test]
    fn exchange_lemma() {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for n in 1..=3 {
            for p in feasible_types(n, 3) {
                for abc in perms {
                    let r = verify_exchange_lemma(n, &p, abc).unwrap();
                    assert!(r.ok(), "{r:?}");
                }
            }
        }
        assert_eq!(exchange(one_based(&[1]), one_based(&[2]), 1), (one_based(&[1, 2]), TypeSet::EMPTY));
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_puzzle(3, &[1, 2, 1], 2000, 7, 3).unwrap();
        let b = sample_puzzle(3, &[1, 2, 1], 2000, 7, 3).unwrap();
        assert_eq!(a, b);
        let c = sample_puzzle(2, &[1, 1], 500, 1, 2).unwrap();
        assert_eq!((c.tree, c.r1), (1.0, 1.0));
        assert_eq!(sample_puzzle(2, &[2, 2], 10, 1, 1), Err(Error::UndefinedProbability));
    }

    #[test]
    fn low_acceptance_aborts() {
        let err = sample_puzzle(12, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1], 10, 3, 1).unwrap_err();
        assert!(matches!(err, Error::AcceptanceTooLow { .. }), "{err}");
    }

    #[test]
    fn sampled_estimates_agree() {
        let p = [2, 3, 4];
        let est = sample_puzzle(6, &p, 100_000, 2024, 4).unwrap();
        let exact = tree_probability(6, &p).unwrap().to_f64();
        assert!((est.tree - est.r1).abs() < 3.0 * est.standard_error(), "{est:?}");
        assert!((est.tree - exact).abs() < 3.0 * est.standard_error(), "{est:?} vs {exact}");
    }

    proptest! {
        #[test]
        fn exchange_is_an_involution(ri in 0u32..7, rj in 0u32..7, b in 0usize..3) {
            let (x, y) = exchange(TypeSet::from_bits(ri), TypeSet::from_bits(rj), b);
            prop_assert_eq!(exchange(x, y, b), (TypeSet::from_bits(ri), TypeSet::from_bits(rj)));
        }
    }
}
