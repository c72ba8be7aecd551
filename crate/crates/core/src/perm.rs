//! Permutations of `[n]`, compositions and partitions.
//!
//! Elements are stored 0-based; the one-line and cycle constructors, `Display`
//! and the JSON form are 1-based.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// The long cycle `(1,2,…,n)`, mapping `i` to `i+1` cyclically.
    pub fn long_cycle(n: usize) -> Self {
        Permutation { image: (0..n).map(|i| (i + 1) % n).collect() }
    }

    /// Builds from a 0-based image vector.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{image:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    /// Builds from 1-based one-line notation, e.g. `[2,5,4,3,1]`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::InvalidPermutation("one-line notation is 1-based".into()));
        }
        Self::from_images(one_line.iter().map(|&x| x - 1).collect())
    }

    /// Builds from 1-based disjoint cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || seen[x - 1] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {cycle:?} on [{n}]")));
                }
                seen[x - 1] = true;
                image[x - 1] = cycle[(pos + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.image.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch { expected: self.len(), found: other.len() });
        }
        Ok(Permutation { image: other.image.iter().map(|&x| self.image[x]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { image: inv }
    }

    /// `β ∘ self ∘ β⁻¹`: the same permutation after renaming each point `x` to `β(x)`.
    pub fn conjugate_by(&self, beta: &Permutation) -> Permutation {
        let mut image = vec![0; self.len()];
        for x in 0..self.len() {
            image[beta.apply(x)] = beta.apply(self.apply(x));
        }
        Permutation { image }
    }

    /// Cycles (0-based), each starting at its minimum, sorted by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Number of cycles, `ℓ(π)`.
    pub fn cycle_count(&self) -> usize {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if !seen[start] {
                count += 1;
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    x = self.image[x];
                }
            }
        }
        count
    }

    /// Cycle lengths, weakly decreasing.
    pub fn cycle_type(&self) -> Composition {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Composition { parts }
    }

    /// For every point, the index of its cycle in [`Permutation::cycles`] order.
    pub fn cycle_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.len()];
        for (c, cycle) in self.cycles().iter().enumerate() {
            for &x in cycle {
                idx[x] = c;
            }
        }
        idx
    }

    /// Lexicographic rank among permutations of the same size.
    pub fn rank(&self) -> u128 {
        let n = self.len();
        let mut rank: u128 = 0;
        let mut used = vec![false; n];
        for (pos, &x) in self.image.iter().enumerate() {
            let smaller = (0..x).filter(|&y| !used[y]).count() as u128;
            rank += smaller * factorial_u128(n - 1 - pos);
            used[x] = true;
        }
        rank
    }

    /// All permutations of `[n]` in lexicographic order of their one-line notation.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations { next: Some((0..n).collect()) }
    }

    /// Rearranges in place to the lexicographic successor; returns false at the last one.
    fn advance(v: &mut [usize]) -> bool {
        if v.len() < 2 {
            return false;
        }
        let mut i = v.len() - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = v.len() - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if Permutation::advance(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { image: current })
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with fixed points, e.g. `(1,3,2,5)(4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let one_line = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_line(&one_line).map_err(serde::de::Error::custom)
    }
}

pub fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// A sequence of positive integers. A partition is a weakly decreasing composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidComposition("a composition has at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidComposition(format!("{parts:?} has a zero part")));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_partition(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// All compositions of `n`, in lexicographic order of parts.
    pub fn all(n: usize) -> Vec<Composition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(rest: usize, current: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition { parts: current.clone() });
                return;
            }
            for first in 1..=rest {
                current.push(first);
                rec(rest - first, current, out);
                current.pop();
            }
        }
        if n > 0 {
            rec(n, &mut current, &mut out);
        }
        out
    }

    /// All compositions of `n` with exactly `len` parts.
    pub fn all_with_length(n: usize, len: usize) -> Vec<Composition> {
        Self::all(n).into_iter().filter(|c| c.length() == len).collect()
    }

    /// All partitions of `n`, parts weakly decreasing.
    pub fn partitions(n: usize) -> Vec<Composition> {
        Self::all(n).into_iter().filter(Composition::is_partition).collect()
    }
}

impl<'de> Deserialize<'de> for Composition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Composition::new(Vec::<usize>::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
