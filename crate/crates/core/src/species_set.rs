use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of a network's species, stored as sorted indices plus the size of the universe it
/// was drawn from.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpeciesSet {
    universe: usize,
    members: BTreeSet<usize>,
}

impl SpeciesSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            members: BTreeSet::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        Self {
            universe,
            members: (0..universe).collect(),
        }
    }

    /// Panics if an index is outside the universe.
    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let members: BTreeSet<usize> = indices.into_iter().collect();
        assert!(
            members.iter().all(|&i| i < universe),
            "species index out of range"
        );
        Self { universe, members }
    }

    pub fn from_mask(universe: usize, mask: u64) -> Self {
        Self::from_indices(universe, (0..universe).filter(|i| mask >> i & 1 == 1))
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "species index out of range");
        self.members.insert(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            universe: self.universe,
            members: (0..self.universe)
                .filter(|i| !self.members.contains(i))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        Self {
            universe: self.universe,
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        Self {
            universe: self.universe,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn meets(&self, other: &Self) -> bool {
        !self.members.is_disjoint(&other.members)
    }
}

impl Ord for SpeciesSet {
    /// Smaller sets first, then lexicographic on sorted indices.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members.iter().cmp(other.members.iter()))
    }
}

impl PartialOrd for SpeciesSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SpeciesSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}
