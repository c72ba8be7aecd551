//! Subsets of the type set `[k]`, stored as bitmasks over 0-based types.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported number of types.
pub const MAX_TYPES: usize = 31;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSet(u32);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    pub fn from_bits(bits: u32) -> Self {
        TypeSet(bits)
    }

    pub fn full(k: usize) -> Self {
        TypeSet(((1u64 << k) - 1) as u32)
    }

    /// From 0-based types.
    pub fn from_types<I: IntoIterator<Item = usize>>(types: I) -> Self {
        TypeSet(types.into_iter().fold(0, |acc, t| acc | (1 << t)))
    }

    /// From 1-based types, rejecting anything outside `[k]`.
    pub fn from_one_based(types: &[usize], k: usize) -> Result<Self> {
        let mut set = TypeSet::EMPTY;
        for &t in types {
            if t == 0 || t > k {
                return Err(Error::InvalidSubset(format!("type {t} is outside [1,{k}]")));
            }
            set.insert(t - 1);
        }
        Ok(set)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, t: usize) -> bool {
        self.0 >> t & 1 == 1
    }

    pub fn insert(&mut self, t: usize) {
        self.0 |= 1 << t;
    }

    pub fn remove(&mut self, t: usize) {
        self.0 &= !(1 << t);
    }

    pub fn with(mut self, t: usize) -> Self {
        self.insert(t);
        self
    }

    pub fn without(mut self, t: usize) -> Self {
        self.remove(t);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: TypeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: TypeSet) -> TypeSet {
        TypeSet(self.0 | other.0)
    }

    /// A strict subset of `[k]`: every element below `k`, and not all of them.
    pub fn is_strict(self, k: usize) -> bool {
        self.is_subset(TypeSet::full(k)) && self.len() < k
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&t| self.contains(t))
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|t| t + 1).collect()
    }

    /// Every strict subset of `[k]`, ordered by bitmask.
    pub fn all_strict(k: usize) -> Vec<TypeSet> {
        (0..(1u32 << k) - 1).map(TypeSet).collect()
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", t + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for TypeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TypeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let types = Vec::<usize>::deserialize(deserializer)?;
        TypeSet::from_one_based(&types, MAX_TYPES).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strictness() {
        assert!(TypeSet::EMPTY.is_strict(3));
        assert!(TypeSet::from_types([0, 2]).is_strict(3));
        assert!(!TypeSet::full(3).is_strict(3));
        assert!(!TypeSet::from_types([3]).is_strict(3));
        assert_eq!(TypeSet::all_strict(3).len(), 7);
        assert!(TypeSet::all_strict(4).iter().all(|s| s.is_strict(4)));
    }

    #[test]
    fn display_and_json_are_one_based() {
        let s = TypeSet::from_types([1, 2]);
        assert_eq!(s.to_string(), "{2,3}");
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,3]");
        let back: TypeSet = serde_json::from_str("[2,3]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<TypeSet>("[0]").is_err());
    }
}
