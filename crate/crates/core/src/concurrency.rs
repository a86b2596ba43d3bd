//! Concurrency closure, concurrency orders, base collections and the
//! concurrency-freeness test.
//!
//! A family `J` of `(m+1)`-subsets is *independent* when every nonempty
//! subfamily `J'` satisfies `|∪J'| ≥ m + |J'|`. Closure adds every subset that
//! becomes dependent on an independent subfamily of the input. Independent
//! families never exceed `n - m` members, so the work per test is bounded by
//! `2^(n-m)` unions.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discriminantal::DiscriminantalArrangement;
use crate::error::{Error, Result};
use crate::linalg::span::Span;
use crate::normal_system::NormalSystem;
use crate::subsets::{compact_label, mask_of, members_of, Mask, Universe, MAX_N};

/// Brute-force enumeration closes every subfamily of `E`; it is refused
/// beyond this many hyperplanes.
pub const BRUTE_FORCE_LIMIT: usize = 22;

/// Default cap on the number of closed collections produced by the crawl.
pub const DEFAULT_MAX_FLATS: usize = 2_000_000;

/// Lexicographic order of equal-size subsets given as bitmasks.
pub fn lex_cmp(a: Mask, b: Mask) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let diff = a ^ b;
    if diff == 0 {
        Ordering::Equal
    } else if a & diff & diff.wrapping_neg() != 0 {
        // Lowest differing element belongs to `a`.
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// A set of `(m+1)`-subsets of `{1..n}`, kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetCollection {
    n: usize,
    m: usize,
    members: Vec<Mask>,
}

impl SubsetCollection {
    /// From 1-based labels. Duplicates are merged.
    pub fn new(n: usize, m: usize, subsets: &[Vec<usize>]) -> Result<Self> {
        if m == 0 || m >= n || n > MAX_N {
            return Err(Error::BadShape { n, m });
        }
        let mut masks = Vec::with_capacity(subsets.len());
        for s in subsets {
            let ok = s.iter().all(|&l| (1..=n).contains(&l)) && s.iter().all_unique();
            if !ok || s.len() != m + 1 {
                return Err(Error::BadSubsetSize {
                    subset: s.clone(),
                    expected: m + 1,
                });
            }
            masks.push(mask_of(&s.iter().map(|l| l - 1).collect::<Vec<_>>()));
        }
        Ok(Self::from_masks(n, m, masks))
    }

    pub fn from_masks(n: usize, m: usize, masks: impl IntoIterator<Item = Mask>) -> Self {
        let mut members: Vec<Mask> = masks.into_iter().collect();
        debug_assert!(members
            .iter()
            .all(|s| s.count_ones() as usize == m + 1 && (*s >> n) == 0));
        members.sort_by(|a, b| lex_cmp(*a, *b));
        members.dedup();
        SubsetCollection { n, m, members }
    }

    pub fn empty(n: usize, m: usize) -> Self {
        SubsetCollection {
            n,
            m,
            members: Vec::new(),
        }
    }

    /// The full collection `E` of all `(m+1)`-subsets.
    pub fn full(n: usize, m: usize) -> Self {
        Self::from_masks(n, m, Universe::new(n, m).masks().iter().copied())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[Mask] {
        &self.members
    }

    /// Members as sorted 1-based label lists.
    pub fn labels(&self) -> Vec<Vec<usize>> {
        self.members
            .iter()
            .map(|&s| members_of(s).into_iter().map(|i| i + 1).collect())
            .collect()
    }

    pub fn contains_mask(&self, s: Mask) -> bool {
        self.members
            .binary_search_by(|x| lex_cmp(*x, s))
            .is_ok()
    }

    pub fn contains(&self, labels: &[usize]) -> bool {
        labels.iter().all(|&l| (1..=self.n).contains(&l))
            && self.contains_mask(mask_of(&labels.iter().map(|l| l - 1).collect::<Vec<_>>()))
    }

    /// Positions of the members in `universe`'s lexicographic order.
    pub fn indices_in(&self, universe: &Universe) -> Vec<usize> {
        self.members
            .iter()
            .map(|&s| universe.index_of(s).expect("member of the universe"))
            .collect()
    }

    pub fn is_subset_of(&self, other: &SubsetCollection) -> bool {
        self.members.iter().all(|&s| other.contains_mask(s))
    }

    pub fn union(&self, other: &SubsetCollection) -> SubsetCollection {
        Self::from_masks(
            self.n,
            self.m,
            self.members.iter().chain(&other.members).copied(),
        )
    }

    pub fn to_file(&self) -> CollectionFile {
        CollectionFile {
            n: self.n,
            m: self.m,
            members: self.labels(),
        }
    }
}

impl fmt::Display for SubsetCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|&s| compact_label(s)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for SubsetCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetCollection(n={}, m={}, {})", self.n, self.m, self)
    }
}

impl PartialOrd for SubsetCollection {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Smaller collections first, then lexicographic on the member lists.
impl Ord for SubsetCollection {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.m, self.members.len())
            .cmp(&(other.n, other.m, other.members.len()))
            .then_with(|| {
                for (a, b) in self.members.iter().zip(&other.members) {
                    let o = lex_cmp(*a, *b);
                    if o.is_ne() {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionFile {
    pub n: usize,
    pub m: usize,
    pub members: Vec<Vec<usize>>,
}

impl TryFrom<CollectionFile> for SubsetCollection {
    type Error = Error;

    fn try_from(file: CollectionFile) -> Result<Self> {
        SubsetCollection::new(file.n, file.m, &file.members)
    }
}

impl Serialize for SubsetCollection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsetCollection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = CollectionFile::deserialize(d)?;
        SubsetCollection::try_from(file).map_err(serde::de::Error::custom)
    }
}

fn union_of(family: &[Mask]) -> Mask {
    family.iter().fold(0, |acc, s| acc | s)
}

/// Every nonempty subfamily `J` satisfies `|∪J| ≥ m + |J|`.
pub fn is_independent(m: usize, family: &[Mask]) -> bool {
    let k = family.len();
    if k > 31 {
        return false;
    }
    (1u32..(1 << k)).all(|sel| {
        let mut u = 0;
        for (i, s) in family.iter().enumerate() {
            if sel >> i & 1 == 1 {
                u |= s;
            }
        }
        u.count_ones() as usize >= m + sel.count_ones() as usize
    })
}

/// For an independent `basis`: is `t` in its closure?
pub fn depends_on(m: usize, basis: &[Mask], t: Mask) -> bool {
    let k = basis.len();
    (0u32..(1 << k)).any(|sel| {
        let mut u = t;
        for (i, s) in basis.iter().enumerate() {
            if sel >> i & 1 == 1 {
                u |= s;
            }
        }
        (u.count_ones() as usize) <= m + sel.count_ones() as usize
    })
}

/// Greedy basis, scanning members in lexicographic order.
pub fn greedy_basis(d: &SubsetCollection) -> Vec<Mask> {
    let mut basis = Vec::new();
    for &s in &d.members {
        if !depends_on(d.m, &basis, s) {
            basis.push(s);
        }
    }
    basis
}

/// Size of a basis of `d`.
pub fn matroid_rank(d: &SubsetCollection) -> usize {
    greedy_basis(d).len()
}

fn closure_of_basis(n: usize, m: usize, universe: &Universe, basis: &[Mask]) -> SubsetCollection {
    let members = universe
        .masks()
        .iter()
        .copied()
        .filter(|&t| depends_on(m, basis, t));
    SubsetCollection::from_masks(n, m, members)
}

pub fn concurrency_closure(d: &SubsetCollection) -> SubsetCollection {
    let universe = Universe::new(d.n, d.m);
    closure_of_basis(d.n, d.m, &universe, &greedy_basis(d))
}

pub fn is_closed(d: &SubsetCollection) -> bool {
    concurrency_closure(d).len() == d.len()
}

/// Result of applying the forcing criterion pass by pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionClosure {
    pub closure: SubsetCollection,
    /// Passes that added at least one subset.
    pub productive_passes: usize,
}

/// The forcing criterion applied literally: in each pass add every `S ∉ D`
/// for which some independent `{S_1..S_r} ⊆ D` has `|∪S_i ∪ S| ≤ m + r`.
/// Slow; intended as a reference for [`concurrency_closure`].
pub fn criterion_closure(d: &SubsetCollection) -> CriterionClosure {
    let (n, m) = (d.n, d.m);
    let universe = Universe::new(n, m);
    let mut current = d.clone();
    let mut productive_passes = 0;
    loop {
        let independent: Vec<Vec<Mask>> = (1..=n - m)
            .flat_map(|r| current.members.iter().copied().combinations(r))
            .filter(|fam| is_independent(m, fam))
            .collect();
        let added: Vec<Mask> = universe
            .masks()
            .iter()
            .copied()
            .filter(|&s| !current.contains_mask(s))
            .filter(|&s| {
                independent
                    .iter()
                    .any(|fam| ((union_of(fam) | s).count_ones() as usize) <= m + fam.len())
            })
            .collect();
        if added.is_empty() {
            return CriterionClosure {
                closure: current,
                productive_passes,
            };
        }
        productive_passes += 1;
        current = SubsetCollection::from_masks(n, m, current.members.into_iter().chain(added));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcurrencySet {
    /// 1-based indices of the concurrent hyperplanes.
    pub members: Vec<usize>,
    pub order: usize,
}

/// Maximal sets whose every `(m+1)`-subset lies in the closed collection `d`.
pub fn concurrency_orders(d: &SubsetCollection) -> Result<Vec<ConcurrencySet>> {
    if !is_closed(d) {
        return Err(Error::NotClosed);
    }
    Ok(concurrency_sets(d)
        .into_iter()
        .map(|c| ConcurrencySet {
            members: members_of(c).into_iter().map(|i| i + 1).collect(),
            order: c.count_ones() as usize,
        })
        .collect())
}

fn concurrency_sets(d: &SubsetCollection) -> Vec<Mask> {
    let (n, m) = (d.n, d.m);
    let complete = |c: Mask| {
        members_of(c)
            .into_iter()
            .combinations(m + 1)
            .all(|s| d.contains_mask(mask_of(&s)))
    };
    // Grow each member greedily, then confirm maximality exhaustively.
    let mut found: Vec<Mask> = Vec::new();
    for &s in &d.members {
        if found.iter().any(|&c| c & s == s) {
            continue;
        }
        let mut c = s;
        for i in 0..n {
            if c >> i & 1 == 0 && complete(c | 1 << i) {
                c |= 1 << i;
            }
        }
        found.push(c);
    }
    let mut maximal: Vec<Mask> = (0..(1 as Mask) << n)
        .filter(|c| c.count_ones() as usize > m && complete(*c))
        .collect();
    let snapshot = maximal.clone();
    maximal.retain(|&c| !snapshot.iter().any(|&o| o != c && o & c == c));
    maximal.sort_by_key(|&s| members_of(s));
    found.sort_by_key(|&s| members_of(s));
    found.dedup();
    debug_assert_eq!(found, maximal, "greedy and exhaustive maximal sets differ");
    maximal
}

/// For each concurrency set `{j_1<…<j_k}` emit `{j_1..j_m, j_l}`, `l > m`.
pub fn base_collection(d: &SubsetCollection) -> Result<SubsetCollection> {
    if !is_closed(d) {
        return Err(Error::NotClosed);
    }
    let m = d.m;
    let mut out = Vec::new();
    for c in concurrency_sets(d) {
        let idx = members_of(c);
        let head = mask_of(&idx[..m]);
        out.extend(idx[m..].iter().map(|&j| head | 1 << j));
    }
    Ok(SubsetCollection::from_masks(d.n, m, out))
}

/// `Σ (k_i − m)` over the concurrency sets of the closure of `d`.
pub fn combinatorial_rank(d: &SubsetCollection) -> usize {
    let closed = concurrency_closure(d);
    concurrency_sets(&closed)
        .iter()
        .map(|c| c.count_ones() as usize - d.m)
        .sum()
}

/// Every distinct nonempty closed collection, ordered by size then
/// lexicographically. Built by a lattice crawl from the closed singletons.
pub fn enumerate_closed_collections(n: usize, m: usize) -> Result<Vec<SubsetCollection>> {
    enumerate_closed_collections_with_limit(n, m, DEFAULT_MAX_FLATS)
}

pub fn enumerate_closed_collections_with_limit(
    n: usize,
    m: usize,
    max_flats: usize,
) -> Result<Vec<SubsetCollection>> {
    if m == 0 || m >= n || n > MAX_N {
        return Err(Error::BadShape { n, m });
    }
    let universe = Universe::new(n, m);
    let mut seen: HashSet<Vec<Mask>> = HashSet::new();
    let mut all: Vec<SubsetCollection> = Vec::new();
    // Each frontier entry is a closed collection with a basis for it.
    let mut frontier: Vec<(SubsetCollection, Vec<Mask>)> = universe
        .masks()
        .iter()
        .map(|&s| (SubsetCollection::from_masks(n, m, [s]), vec![s]))
        .collect();
    for (c, _) in &frontier {
        seen.insert(c.members.clone());
        all.push(c.clone());
    }
    while !frontier.is_empty() {
        let children: Vec<(SubsetCollection, Vec<Mask>)> = frontier
            .par_iter()
            .flat_map_iter(|(flat, basis)| {
                let universe = &universe;
                universe
                    .masks()
                    .iter()
                    .copied()
                    .filter(|&s| !flat.contains_mask(s))
                    .map(move |s| {
                        let mut b = basis.clone();
                        b.push(s);
                        (closure_of_basis(n, m, universe, &b), b)
                    })
            })
            .collect();
        frontier = Vec::new();
        for (c, b) in children {
            if seen.insert(c.members.clone()) {
                all.push(c.clone());
                frontier.push((c, b));
                if all.len() > max_flats {
                    return Err(Error::TooLarge {
                        what: "closed collections",
                        size: all.len() as u128,
                        limit: max_flats as u128,
                    });
                }
            }
        }
    }
    all.sort();
    Ok(all)
}

/// Reference enumeration: closes every nonempty subfamily of `E`.
pub fn enumerate_closed_collections_brute(n: usize, m: usize) -> Result<Vec<SubsetCollection>> {
    if m == 0 || m >= n || n > MAX_N {
        return Err(Error::BadShape { n, m });
    }
    let universe = Universe::new(n, m);
    let e = universe.len();
    if e > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force subfamilies",
            size: 1u128 << e.min(127),
            limit: 1u128 << BRUTE_FORCE_LIMIT,
        });
    }
    let found: HashSet<Vec<Mask>> = (1u64..(1u64 << e))
        .into_par_iter()
        .map(|sel| {
            let d = SubsetCollection::from_masks(
                n,
                m,
                (0..e).filter(|i| sel >> i & 1 == 1).map(|i| universe.mask(i)),
            );
            concurrency_closure(&d).members
        })
        .collect();
    let mut all: Vec<SubsetCollection> = found
        .into_iter()
        .map(|members| SubsetCollection { n, m, members })
        .collect();
    all.sort();
    Ok(all)
}

/// Outcome of the concurrency-freeness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConcurrencyVerdict {
    Free,
    NotFree(ConcurrencyWitness),
}

impl ConcurrencyVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, ConcurrencyVerdict::Free)
    }
}

/// A closed collection on which the normal system and the combinatorics
/// disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcurrencyWitness {
    pub collection: SubsetCollection,
    pub matrix_rank: usize,
    pub combinatorial_rank: usize,
    /// Subsets outside the collection whose hyperplanes lie in its span.
    pub forced: SubsetCollection,
}

/// Free iff on every closed collection the matrix rank equals the
/// combinatorial rank and the span of the collection's normals contains no
/// further normal. The witness is the smallest failing collection, ties
/// broken lexicographically.
pub fn is_concurrency_free(ns: &NormalSystem) -> Result<ConcurrencyVerdict> {
    check_concurrency_free(&DiscriminantalArrangement::build(ns))
}

pub fn check_concurrency_free(da: &DiscriminantalArrangement) -> Result<ConcurrencyVerdict> {
    let (n, m) = (da.n(), da.m());
    let flats = enumerate_closed_collections(n, m)?;
    let universe = da.universe();
    let witness = flats
        .par_iter()
        .filter_map(|d| {
            let mut span = Span::new(n);
            for i in d.indices_in(universe) {
                span.insert(da.normal(i));
            }
            let comb = combinatorial_rank(d);
            let forced = SubsetCollection::from_masks(
                n,
                m,
                (0..universe.len())
                    .filter(|&i| !d.contains_mask(universe.mask(i)))
                    .filter(|&i| span.contains(da.normal(i)))
                    .map(|i| universe.mask(i)),
            );
            (span.rank() != comb || !forced.is_empty()).then(|| ConcurrencyWitness {
                collection: d.clone(),
                matrix_rank: span.rank(),
                combinatorial_rank: comb,
                forced,
            })
        })
        .min_by(|a, b| a.collection.cmp(&b.collection));
    Ok(match witness {
        None => ConcurrencyVerdict::Free,
        Some(w) => ConcurrencyVerdict::NotFree(w),
    })
}
