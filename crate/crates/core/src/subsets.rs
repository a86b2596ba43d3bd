//! Index subsets of `{1..n}` and the lexicographic universe of `(m+1)`-subsets.
//!
//! Subsets are stored as `u32` bitmasks over 0-based indices; everything that
//! faces a user (JSON, display, errors) is 1-based.

use std::collections::HashMap;

use itertools::Itertools;

/// Largest supported number of hyperplanes in a normal system.
pub const MAX_N: usize = 32;

pub type Mask = u32;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |acc, &i| acc | (1 << i))
}

/// 0-based members of a mask, ascending.
pub fn members_of(mask: Mask) -> Vec<usize> {
    (0..MAX_N).filter(|&i| mask & (1 << i) != 0).collect()
}

/// 1-based rendering, e.g. `{1,2,6}`.
pub fn format_subset(subset: &[usize]) -> String {
    format!("{{{}}}", subset.iter().map(|i| i.to_string()).join(","))
}

/// Compact rendering for tables, e.g. `126`.
pub fn compact_label(mask: Mask) -> String {
    members_of(mask)
        .iter()
        .map(|i| (i + 1).to_string())
        .join(if mask >> 9 != 0 { "," } else { "" })
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `(m+1)`-subsets of `{0..n-1}` in lexicographic order, with a reverse
/// index. This is the collection `E` over which concurrency combinatorics runs,
/// and its order fixes the order of discriminantal hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    n: usize,
    m: usize,
    masks: Vec<Mask>,
    index: HashMap<Mask, usize>,
}

impl Universe {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(n <= MAX_N, "at most {MAX_N} hyperplanes supported");
        let masks: Vec<Mask> = (0..n)
            .combinations(m + 1)
            .map(|c| mask_of(&c))
            .collect();
        let index = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Universe { n, m, masks, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn mask(&self, idx: usize) -> Mask {
        self.masks[idx]
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn index_of(&self, mask: Mask) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// 1-based member list of subset `idx`.
    pub fn labels(&self, idx: usize) -> Vec<usize> {
        members_of(self.masks[idx]).into_iter().map(|i| i + 1).collect()
    }
}
