//! Exhaustive enumeration and exact counting of factorizations of the long
//! cycle, colored factorizations, and the tuples of strict subsets behind the
//! M-coefficients.

use std::collections::HashMap;

use num::{BigInt, BigUint, One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::product;
use crate::perm::{Composition, Permutation};
use crate::report::IdentityReport;
use crate::subset::TypeSet;

pub const DEFAULT_CAP: u128 = 100_000_000;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "CONSTELLATION_LAB_CAP";

pub fn default_cap() -> u128 {
    std::env::var(CAP_ENV).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_CAP)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: i64, r: i64) -> BigUint {
    if r < 0 || n < 0 || r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from((n - i) as u64) / BigUint::from((i + 1) as u64);
    }
    acc
}

/// Binomial coefficient with an arbitrary integer top, `x(x−1)⋯(x−r+1)/r!`.
pub fn binomial_signed(x: &BigInt, r: usize) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..r {
        num *= x - BigInt::from(i);
    }
    num / BigInt::from(factorial(r))
}

/// Number of surjections from an `m`-set onto a `p`-set.
pub fn surjections(m: usize, p: usize) -> BigUint {
    let mut acc = BigInt::zero();
    for j in 0..=p {
        let term = BigInt::from(binomial(p as i64, j as i64)) * BigInt::from(p - j).pow(m as u32);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("surjection counts are nonnegative")
}

/// `n!^(k−1)`, the number of factorizations.
pub fn factorization_count(n: usize, k: usize) -> BigUint {
    num::pow(factorial(n), k - 1)
}

fn check_cap(n: usize, k: usize, cap: u128) -> Result<()> {
    let needed = factorization_count(n, k);
    if needed > BigUint::from(cap) {
        let needed = u128::try_from(&needed).unwrap_or(u128::MAX);
        return Err(Error::CapExceeded { needed, cap });
    }
    Ok(())
}

fn check_size(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    Ok(())
}

/// Every factorization `π_1 ∘ ⋯ ∘ π_k = (1,2,…,n)`, ranging `π_2, …, π_k` over
/// `S_n` in lexicographic order and solving for `π_1`.
pub struct Factorizations {
    all: Vec<Permutation>,
    long: Permutation,
    index: Vec<usize>,
    done: bool,
}

impl Iterator for Factorizations {
    type Item = Vec<Permutation>;

    fn next(&mut self) -> Option<Vec<Permutation>> {
        if self.done {
            return None;
        }
        let tail: Vec<Permutation> = self.index.iter().map(|&i| self.all[i].clone()).collect();
        let first = self.long.compose(&product(&tail).expect("same size").inverse()).expect("same size");
        let mut out = Vec::with_capacity(tail.len() + 1);
        out.push(first);
        out.extend(tail);
        let mut pos = self.index.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.index[pos] += 1;
            if self.index[pos] < self.all.len() {
                break;
            }
            self.index[pos] = 0;
        }
        Some(out)
    }
}

pub fn enumerate_factorizations(n: usize, k: usize, cap: u128) -> Result<Factorizations> {
    check_size(n, k)?;
    check_cap(n, k, cap)?;
    Ok(Factorizations {
        all: Permutation::all(n).collect(),
        long: Permutation::long_cycle(n),
        index: vec![0; k - 1],
        done: false,
    })
}

/// Folds over all factorizations in parallel, splitting the work on `π_2`.
fn fold_factorizations<T, F, M>(n: usize, k: usize, cap: u128, init: impl Fn() -> T + Sync + Send, fold: F, merge: M) -> Result<T>
where
    T: Send,
    F: Fn(&mut T, &[Permutation]) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_size(n, k)?;
    check_cap(n, k, cap)?;
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let long = Permutation::long_cycle(n);
    let result = all
        .par_iter()
        .map(|second| {
            let mut acc = init();
            let mut index = vec![0usize; k - 2];
            loop {
                let mut tail = vec![second.clone()];
                tail.extend(index.iter().map(|&i| all[i].clone()));
                let first = long.compose(&product(&tail).expect("same size").inverse()).expect("same size");
                let mut perms = Vec::with_capacity(k);
                perms.push(first);
                perms.extend(tail);
                fold(&mut acc, &perms);
                let mut pos = index.len();
                let mut finished = true;
                while pos > 0 {
                    pos -= 1;
                    index[pos] += 1;
                    if index[pos] < all.len() {
                        finished = false;
                        break;
                    }
                    index[pos] = 0;
                }
                if finished {
                    break;
                }
            }
            acc
        })
        .reduce(&init, &merge);
    Ok(result)
}

/// Number of factorizations per tuple of cycle types `(λ^(1), …, λ^(k))`.
#[derive(Debug, Clone)]
pub struct CycleTypeTable {
    n: usize,
    k: usize,
    counts: HashMap<Vec<Vec<usize>>, u64>,
}

impl CycleTypeTable {
    pub fn new(n: usize, k: usize, cap: u128) -> Result<Self> {
        let counts = fold_factorizations(
            n,
            k,
            cap,
            HashMap::new,
            |acc: &mut HashMap<Vec<Vec<usize>>, u64>, perms| {
                let key: Vec<Vec<usize>> = perms.iter().map(|p| p.cycle_type().parts().to_vec()).collect();
                *acc.entry(key).or_insert(0) += 1;
            },
            |mut a, b| {
                for (key, c) in b {
                    *a.entry(key).or_insert(0) += c;
                }
                a
            },
        )?;
        Ok(CycleTypeTable { n, k, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kappa(&self, types: &[Vec<usize>]) -> u64 {
        self.counts.get(types).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Vec<usize>>, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of factorizations per vector of cycle counts `(ℓ(π_1), …, ℓ(π_k))`.
    pub fn cycle_count_histogram(&self) -> HashMap<Vec<usize>, u64> {
        let mut out = HashMap::new();
        for (types, c) in &self.counts {
            let key: Vec<usize> = types.iter().map(Vec::len).collect();
            *out.entry(key).or_insert(0) += c;
        }
        out
    }
}

/// `κ(λ^(1), …, λ^(k))`: factorizations with the given cycle types.
pub fn count_kappa(partitions: &[Composition], cap: u128) -> Result<BigUint> {
    let n = partitions.first().map_or(0, Composition::size);
    if partitions.iter().any(|p| p.size() != n || !p.is_partition()) {
        return Err(Error::InvalidComposition("expected partitions of the same n".into()));
    }
    let table = CycleTypeTable::new(n, partitions.len(), cap)?;
    let key: Vec<Vec<usize>> = partitions.iter().map(|p| p.parts().to_vec()).collect();
    Ok(BigUint::from(table.kappa(&key)))
}

/// `C^n_{p_1,…,p_k}`: factorizations with each factor's cycles surjectively
/// colored by `[p_t]`.
pub fn count_colored(n: usize, p: &[usize], cap: u128) -> Result<BigUint> {
    let table = CycleTypeTable::new(n, p.len(), cap)?;
    Ok(count_colored_with(&table, p))
}

pub fn count_colored_with(table: &CycleTypeTable, p: &[usize]) -> BigUint {
    if p.iter().any(|&x| x == 0 || x > table.n) {
        return BigUint::zero();
    }
    table
        .cycle_count_histogram()
        .iter()
        .map(|(cycles, &c)| {
            cycles.iter().zip(p).fold(BigUint::from(c), |acc, (&m, &q)| acc * surjections(m, q))
        })
        .sum()
}

/// Colorings of cycles with lengths `cycles` by `[γ.len()]` in which color `i`
/// covers exactly `γ_i` points.
pub fn colorings_with_composition(cycles: &[usize], gamma: &[usize]) -> u64 {
    fn rec(cycles: &[usize], remaining: &mut [usize]) -> u64 {
        match cycles.split_first() {
            None => remaining.iter().all(|&r| r == 0) as u64,
            Some((&len, rest)) => {
                let mut total = 0;
                for i in 0..remaining.len() {
                    if remaining[i] >= len {
                        remaining[i] -= len;
                        total += rec(rest, remaining);
                        remaining[i] += len;
                    }
                }
                total
            }
        }
    }
    rec(cycles, &mut gamma.to_vec())
}

/// `c(γ^(1), …, γ^(k))`: colored factorizations with prescribed color-compositions.
pub fn count_by_color_compositions(gammas: &[Composition], cap: u128) -> Result<BigUint> {
    let n = gammas.first().map_or(0, Composition::size);
    if gammas.iter().any(|g| g.size() != n) {
        return Err(Error::InvalidComposition("compositions have different sizes".into()));
    }
    let table = CycleTypeTable::new(n, gammas.len(), cap)?;
    Ok(count_by_color_compositions_with(&table, gammas))
}

pub fn count_by_color_compositions_with(table: &CycleTypeTable, gammas: &[Composition]) -> BigUint {
    let mut total = BigUint::zero();
    for (types, c) in table.entries() {
        let mut term = BigUint::from(c);
        for (lambda, gamma) in types.iter().zip(gammas) {
            let w = colorings_with_composition(lambda, gamma.parts());
            if w == 0 {
                term = BigUint::zero();
                break;
            }
            term *= BigUint::from(w);
        }
        total += term;
    }
    total
}

/// An n-tuple `(R_1, …, R_n)` of strict subsets of `[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MTuple {
    #[serde(skip)]
    pub k: usize,
    pub subsets: Vec<TypeSet>,
}

impl MTuple {
    pub fn new(k: usize, subsets: Vec<TypeSet>) -> Result<Self> {
        if let Some(r) = subsets.iter().find(|r| !r.is_strict(k)) {
            return Err(Error::InvalidSubset(format!("{r} is not a strict subset of [{k}]")));
        }
        Ok(MTuple { k, subsets })
    }

    pub fn n(&self) -> usize {
        self.subsets.len()
    }

    /// `counts[t] = #{i : t ∈ R_i}`.
    pub fn counts(&self) -> Vec<usize> {
        type_counts(self.k, &self.subsets)
    }
}

pub fn type_counts(k: usize, subsets: &[TypeSet]) -> Vec<usize> {
    let mut c = vec![0; k];
    for r in subsets {
        for t in r.iter() {
            c[t] += 1;
        }
    }
    c
}

/// Calls `f` on every tuple in `M^n_p` (lexicographic in the subset bitmasks).
/// Prunes on the remaining per-type counts.
pub fn for_each_m_tuple(n: usize, k: usize, p: &[usize], mut f: impl FnMut(&[TypeSet])) {
    if p.len() != k || p.iter().any(|&x| x > n) {
        return;
    }
    let strict = TypeSet::all_strict(k);
    let mut current = Vec::with_capacity(n);
    let mut remaining = p.to_vec();
    fn rec(
        n: usize,
        strict: &[TypeSet],
        current: &mut Vec<TypeSet>,
        remaining: &mut [usize],
        f: &mut dyn FnMut(&[TypeSet]),
    ) {
        let left = n - current.len();
        if left == 0 {
            if remaining.iter().all(|&r| r == 0) {
                f(current);
            }
            return;
        }
        if remaining.iter().any(|&r| r > left) {
            return;
        }
        for &s in strict {
            if s.iter().all(|t| remaining[t] > 0) {
                for t in s.iter() {
                    remaining[t] -= 1;
                }
                current.push(s);
                rec(n, strict, current, remaining, f);
                current.pop();
                for t in s.iter() {
                    remaining[t] += 1;
                }
            }
        }
    }
    rec(n, &strict, &mut current, &mut remaining, &mut f);
}

pub fn m_tuples(n: usize, k: usize, p: &[usize]) -> Vec<MTuple> {
    let mut out = Vec::new();
    for_each_m_tuple(n, k, p, |s| out.push(MTuple { k, subsets: s.to_vec() }));
    out
}

/// `M^n_p` by backtracking over tuples.
pub fn m_by_enumeration(n: usize, p: &[usize]) -> BigUint {
    let mut count: u64 = 0;
    for_each_m_tuple(n, p.len(), p, |_| count += 1);
    BigUint::from(count)
}

/// Dense polynomial in `k` variables, each of degree at most `n`.
#[derive(Clone)]
struct DensePoly {
    k: usize,
    n: usize,
    coeffs: Vec<BigInt>,
}

impl DensePoly {
    fn zero(k: usize, n: usize) -> Self {
        DensePoly { k, n, coeffs: vec![BigInt::zero(); (n + 1).pow(k as u32)] }
    }

    fn index(&self, exps: &[usize]) -> usize {
        exps.iter().fold(0, |acc, &e| acc * (self.n + 1) + e)
    }

    fn exponents(&self, mut idx: usize) -> Vec<usize> {
        let mut e = vec![0; self.k];
        for t in (0..self.k).rev() {
            e[t] = idx % (self.n + 1);
            idx /= self.n + 1;
        }
        e
    }

    fn monomial(k: usize, n: usize, exps: &[usize], c: i64) -> Self {
        let mut p = Self::zero(k, n);
        let i = p.index(exps);
        p.coeffs[i] = BigInt::from(c);
        p
    }

    fn add(mut self, other: &DensePoly) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self
    }

    /// Product, dropping any monomial with an exponent above `n`.
    fn mul(&self, other: &DensePoly) -> Self {
        let mut out = Self::zero(self.k, self.n);
        let terms: Vec<(Vec<usize>, &BigInt)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (other.exponents(i), c))
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.exponents(i);
            for (eb, b) in &terms {
                let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if e.iter().all(|&x| x <= self.n) {
                    let j = out.index(&e);
                    out.coeffs[j] += a * *b;
                }
            }
        }
        out
    }
}

/// All coefficients of `(∏_t (1 + x_t) − ∏_t x_t)^n`.
#[derive(Debug, Clone)]
pub struct MTable {
    n: usize,
    k: usize,
    coeffs: Vec<BigInt>,
}

impl MTable {
    pub fn new(n: usize, k: usize) -> Self {
        let one = DensePoly::monomial(k, n.max(1), &vec![0; k], 1);
        let mut prod_one_plus = one.clone();
        let mut prod_x = one.clone();
        for t in 0..k {
            let mut e = vec![0; k];
            e[t] = 1;
            let x_t = DensePoly::monomial(k, n.max(1), &e, 1);
            prod_one_plus = prod_one_plus.mul(&one.clone().add(&x_t));
            prod_x = prod_x.mul(&x_t);
        }
        for c in prod_x.coeffs.iter_mut() {
            *c = -c.clone();
        }
        let base = prod_one_plus.add(&prod_x);
        let mut power = DensePoly::monomial(k, n.max(1), &vec![0; k], 1);
        for _ in 0..n {
            power = power.mul(&base);
        }
        let mut table = DensePoly::zero(k, n);
        for (i, c) in power.coeffs.iter().enumerate() {
            let e = power.exponents(i);
            if e.iter().all(|&x| x <= n) {
                let j = table.index(&e);
                table.coeffs[j] = c.clone();
            }
        }
        MTable { n, k, coeffs: table.coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The coefficient of `∏ x_t^{p_t}`; zero when some `p_t` is negative or above `n`.
    pub fn get(&self, p: &[i64]) -> BigUint {
        if p.len() != self.k || p.iter().any(|&x| x < 0 || x as usize > self.n) {
            return BigUint::zero();
        }
        let idx = p.iter().fold(0, |acc, &e| acc * (self.n + 1) + e as usize);
        let c = &self.coeffs[idx];
        debug_assert!(!c.is_negative());
        c.to_biguint().unwrap_or_default()
    }
}

pub fn m_by_expansion(n: usize, p: &[i64]) -> BigUint {
    MTable::new(n, p.len()).get(p)
}

/// `M^n_p`, computed by enumeration and by coefficient extraction, which must agree.
pub fn m_coefficient(n: usize, p: &[i64]) -> Result<BigUint> {
    let by_expansion = m_by_expansion(n, p);
    let by_enumeration = if p.iter().any(|&x| x < 0) {
        BigUint::zero()
    } else {
        m_by_enumeration(n, &p.iter().map(|&x| x as usize).collect::<Vec<_>>())
    };
    if by_expansion != by_enumeration {
        return Err(Error::InternalDisagreement(format!(
            "M^{n}_{p:?}: enumeration gives {by_enumeration}, expansion gives {by_expansion}"
        )));
    }
    Ok(by_expansion)
}

pub fn shifted(p: &[usize], delta: i64) -> Vec<i64> {
    p.iter().map(|&x| x as i64 + delta).collect()
}

/// Both sides of `C^n_p = n!^(k−1) M^(n−1)_(p−1)`.
pub fn verify_jackson(n: usize, p: &[usize], cap: u128) -> Result<IdentityReport> {
    let table = CycleTypeTable::new(n, p.len(), cap)?;
    verify_jackson_with(&table, p)
}

pub fn verify_jackson_with(table: &CycleTypeTable, p: &[usize]) -> Result<IdentityReport> {
    let n = table.n;
    let lhs = count_colored_with(table, p);
    let rhs = factorization_count(n, p.len()) * m_coefficient(n - 1, &shifted(p, -1))?;
    Ok(IdentityReport::from_unsigned(lhs, rhs))
}

/// Both sides of the generating-function identity at the integer point `x`.
pub fn verify_gf_identity(n: usize, x: &[i64], cap: u128) -> Result<IdentityReport> {
    let k = x.len();
    let table = CycleTypeTable::new(n, k, cap)?;
    let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    let mut lhs = BigInt::zero();
    for (cycles, c) in table.cycle_count_histogram() {
        let mut term = BigInt::from(c);
        for (t, &m) in cycles.iter().enumerate() {
            term *= num::pow(xs[t].clone(), m);
        }
        lhs += term;
    }
    let mtable = MTable::new(n - 1, k);
    let prefactor = BigInt::from(factorization_count(n, k));
    let mut rhs = BigInt::zero();
    let mut p = vec![1usize; k];
    loop {
        let mut term = prefactor.clone() * BigInt::from(mtable.get(&shifted(&p, -1)));
        for t in 0..k {
            term *= binomial_signed(&xs[t], p[t]);
        }
        rhs += term;
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(IdentityReport::new(lhs, rhs));
            }
            pos -= 1;
            p[pos] += 1;
            if p[pos] <= n {
                break;
            }
            p[pos] = 1;
        }
    }
}

/// Both sides of `c(γ) = n!^(k−1) M^(n−1)_(ℓ(γ)−1) / ∏ C(n−1, ℓ(γ^(t))−1)`.
/// The right side is reported as the exact quotient; `equal` is false if it
/// is not an integer.
pub fn verify_mv_formula(gammas: &[Composition], cap: u128) -> Result<IdentityReport> {
    let n = gammas.first().map_or(0, Composition::size);
    let table = CycleTypeTable::new(n, gammas.len(), cap)?;
    verify_mv_formula_with(&table, gammas)
}

pub fn verify_mv_formula_with(table: &CycleTypeTable, gammas: &[Composition]) -> Result<IdentityReport> {
    let n = table.n;
    let lengths: Vec<usize> = gammas.iter().map(Composition::length).collect();
    let lhs = count_by_color_compositions_with(table, gammas);
    let numerator = factorization_count(n, gammas.len()) * m_coefficient(n - 1, &shifted(&lengths, -1))?;
    let denominator: BigUint =
        lengths.iter().map(|&l| binomial(n as i64 - 1, l as i64 - 1)).product();
    let rhs = &numerator / &denominator;
    let mut report = IdentityReport::from_unsigned(lhs, rhs);
    if &report.rhs * BigInt::from(denominator) != BigInt::from(numerator) {
        report.equal = false;
    }
    Ok(report)
}

/// A factorization of the long cycle with each factor's cycles colored
/// surjectively; `colorings[t][x]` is the color of point `x` under `φ_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ColoredFactorization {
    pub factors: Vec<Permutation>,
    pub colorings: Vec<Vec<usize>>,
}

impl ColoredFactorization {
    pub fn new(factors: Vec<Permutation>, colorings: Vec<Vec<usize>>) -> Result<Self> {
        let cf = ColoredFactorization { factors, colorings };
        cf.validate()?;
        Ok(cf)
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn n(&self) -> usize {
        self.factors[0].len()
    }

    pub fn color_counts(&self) -> Vec<usize> {
        self.colorings.iter().map(|c| c.iter().max().map_or(0, |m| m + 1)).collect()
    }

    /// `γ^(t)_i = |φ_t⁻¹(i)|`.
    pub fn color_compositions(&self) -> Vec<Vec<usize>> {
        self.colorings
            .iter()
            .map(|col| {
                let mut parts = vec![0; col.iter().max().map_or(0, |m| m + 1)];
                for &c in col {
                    parts[c] += 1;
                }
                parts
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.len() < 2 || self.colorings.len() != self.factors.len() {
            return Err(Error::InvalidArgument("need k >= 2 factors and one coloring per factor".into()));
        }
        let n = self.factors[0].len();
        if product(&self.factors)? != Permutation::long_cycle(n) {
            return Err(Error::NotACactus { cycles: product(&self.factors)?.cycle_count() });
        }
        for (t, (p, col)) in self.factors.iter().zip(&self.colorings).enumerate() {
            if col.len() != n {
                return Err(Error::SizeMismatch { expected: n, found: col.len() });
            }
            if (0..n).any(|x| col[p.apply(x)] != col[x]) {
                return Err(Error::Structural(format!("coloring {} is not constant on cycles", t + 1)));
            }
            let q = col.iter().max().map_or(0, |m| m + 1);
            if (0..q).any(|c| !col.contains(&c)) {
                return Err(Error::Structural(format!("coloring {} is not surjective", t + 1)));
            }
        }
        Ok(())
    }
}

/// Every surjective coloring of the cycles of `p` by `[q]`, as point colorings.
pub fn cycle_colorings(p: &Permutation, q: usize) -> Vec<Vec<usize>> {
    let cycles = p.cycles();
    let m = cycles.len();
    let mut out = Vec::new();
    if q == 0 || q > m {
        return out;
    }
    let mut assign = vec![0usize; m];
    loop {
        let mut used = vec![false; q];
        for &a in &assign {
            used[a] = true;
        }
        if used.iter().all(|&u| u) {
            let mut col = vec![0; p.len()];
            for (c, cycle) in cycles.iter().enumerate() {
                for &x in cycle {
                    col[x] = assign[c];
                }
            }
            out.push(col);
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            assign[pos] += 1;
            if assign[pos] < q {
                break;
            }
            assign[pos] = 0;
        }
    }
}

/// Every `p`-colored factorization of `(1,2,…,n)`.
pub fn colored_factorizations(n: usize, p: &[usize], cap: u128) -> Result<Vec<ColoredFactorization>> {
    let mut out = Vec::new();
    for factors in enumerate_factorizations(n, p.len(), cap)? {
        let options: Vec<Vec<Vec<usize>>> =
            factors.iter().zip(p).map(|(f, &q)| cycle_colorings(f, q)).collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = vec![0usize; options.len()];
        'outer: loop {
            out.push(ColoredFactorization {
                factors: factors.clone(),
                colorings: idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect(),
            });
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    break 'outer;
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
    Ok(out)
}

/// Every vector in `[lo, hi]^k`, in lexicographic order.
pub fn grid(k: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut v = vec![lo; k];
    loop {
        out.push(v.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            v[pos] += 1;
            if v[pos] <= hi {
                break;
            }
            v[pos] = lo;
        }
    }
}
