use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::mask::{full_bits, MAX_M};
use crate::multiset::{balance_check, canonical_unchecked, CanonicalPartition, Multiset};

/// Default (and largest supported) number of components the resolver accepts.
pub const DEFAULT_MAX_K: usize = 256;

const WORDS: usize = DEFAULT_MAX_K / 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResolutionStatus {
    Unresolvable,
    Unique,
    Multiple,
}

impl ResolutionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Unresolvable => "UNRESOLVABLE",
            Self::Unique => "UNIQUE",
            Self::Multiple => "MULTIPLE",
        }
    }
}

impl fmt::Display for ResolutionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of [`Resolver::enumerate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionReport {
    pub status: ResolutionStatus,
    /// Distinct canonical resolutions found, in sorted order, at most `limit`
    /// of them. With `limit = 2` a unique multiset has one witness and a
    /// non-unique one has two, except when the only ambiguity is swapping two
    /// copies of a proper component between their classes: that counts as a
    /// different resolution but canonicalizes the same, so there is one.
    pub witnesses: Vec<CanonicalPartition>,
    /// Search-tree nodes visited. Diagnostic only.
    pub nodes_explored: u64,
}

/// Backtracking resolver with configurable size caps.
///
/// Each new class is anchored on the lowest-indexed unassigned component and
/// grown by components covering the lowest uncovered element, tried in index
/// order. Siblings with a mask equal to one already tried are skipped, and
/// states (assigned set, partial cover) proven to have no completion are
/// memoised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolver {
    max_m: usize,
    max_k: usize,
}

impl Default for Resolver {
    fn default() -> Self {
        Self {
            max_m: MAX_M,
            max_k: DEFAULT_MAX_K,
        }
    }
}

impl Resolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Lowers the ground-set cap. Values above [`MAX_M`] are clamped.
    pub fn with_max_m(mut self, max_m: usize) -> Self {
        self.max_m = max_m.min(MAX_M);
        self
    }

    /// Lowers the component cap. Values above [`DEFAULT_MAX_K`] are clamped.
    pub fn with_max_k(mut self, max_k: usize) -> Self {
        self.max_k = max_k.min(DEFAULT_MAX_K);
        self
    }

    pub fn max_m(&self) -> usize {
        self.max_m
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    /// Enumerates resolutions of `ms` into exactly `n` exact covers, stopping
    /// once `max(limit, 2)` distinct canonical partitions are known.
    ///
    /// Resolutions are counted as assignments of component indices up to
    /// renaming classes. Two copies of a proper mask always sit in different
    /// classes and can trade places, so a resolvable multiset with such a
    /// repeat is [`ResolutionStatus::Multiple`].
    pub fn enumerate(&self, ms: &Multiset, n: usize, limit: usize) -> Result<ResolutionReport> {
        if limit == 0 {
            return Err(Error::Malformed("limit must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::Malformed("class count n must be at least 1".into()));
        }
        if ms.m() > self.max_m {
            return Err(Error::Capacity(format!(
                "m = {} exceeds the cap of {}",
                ms.m(),
                self.max_m
            )));
        }
        if ms.len() > self.max_k {
            return Err(Error::Capacity(format!(
                "k = {} components exceeds the cap of {}",
                ms.len(),
                self.max_k
            )));
        }
        let empty = ResolutionReport {
            status: ResolutionStatus::Unresolvable,
            witnesses: Vec::new(),
            nodes_explored: 0,
        };
        // Fewer components than classes would force an empty class.
        if ms.len() < n || !balance_check(ms, n) {
            return Ok(empty);
        }

        let mut search = Search::new(ms, limit.max(2));
        search.open_class();
        let found = search.found.len();
        let status = match found {
            0 => ResolutionStatus::Unresolvable,
            1 if ms.repeated_proper_masks().is_empty() => ResolutionStatus::Unique,
            _ => ResolutionStatus::Multiple,
        };
        debug_assert!(search.found.iter().all(|c| c.classes().len() == n));
        Ok(ResolutionReport {
            status,
            witnesses: search.found.into_iter().take(limit).collect(),
            nodes_explored: search.nodes,
        })
    }

    pub fn is_uniquely_resolvable(&self, ms: &Multiset, n: usize) -> Result<bool> {
        Ok(self.enumerate(ms, n, 2)?.status == ResolutionStatus::Unique)
    }
}

/// [`Resolver::enumerate`] with default caps.
pub fn enumerate_resolutions(ms: &Multiset, n: usize, limit: usize) -> Result<ResolutionReport> {
    Resolver::default().enumerate(ms, n, limit)
}

/// True iff `ms` has exactly one resolution into `n` classes, up to renaming.
pub fn is_uniquely_resolvable(ms: &Multiset, n: usize) -> Result<bool> {
    Resolver::default().is_uniquely_resolvable(ms, n)
}

type StateKey = ([u64; WORDS], u32);

struct Search<'a> {
    ms: &'a Multiset,
    masks: Vec<u32>,
    full: u32,
    by_element: Vec<Vec<usize>>,
    assigned: [u64; WORDS],
    remaining: usize,
    current: Vec<usize>,
    classes: Vec<Vec<usize>>,
    found: BTreeSet<CanonicalPartition>,
    cap: usize,
    nodes: u64,
    dead: BTreeSet<StateKey>,
}

impl<'a> Search<'a> {
    fn new(ms: &'a Multiset, cap: usize) -> Self {
        let masks: Vec<u32> = ms.components().iter().map(|c| c.bits()).collect();
        let mut by_element = vec![Vec::new(); ms.m()];
        for (j, &bits) in masks.iter().enumerate() {
            for (e, list) in by_element.iter_mut().enumerate() {
                if bits & (1 << e) != 0 {
                    list.push(j);
                }
            }
        }
        Self {
            ms,
            full: full_bits(ms.m()),
            remaining: masks.len(),
            masks,
            by_element,
            assigned: [0; WORDS],
            current: Vec::new(),
            classes: Vec::new(),
            found: BTreeSet::new(),
            cap,
            nodes: 0,
            dead: BTreeSet::new(),
        }
    }

    fn is_assigned(&self, j: usize) -> bool {
        self.assigned[j / 64] & (1 << (j % 64)) != 0
    }

    fn toggle(&mut self, j: usize) {
        self.assigned[j / 64] ^= 1 << (j % 64);
    }

    fn take(&mut self, j: usize) {
        self.toggle(j);
        self.remaining -= 1;
        self.current.push(j);
    }

    fn release(&mut self, j: usize) {
        self.toggle(j);
        self.remaining += 1;
        self.current.pop();
    }

    fn saturated(&self) -> bool {
        self.found.len() >= self.cap
    }

    /// Starts a new class, or records a resolution if nothing is left.
    /// Returns whether any completion exists below this point (or the search
    /// was cut off by the cap).
    fn open_class(&mut self) -> bool {
        if self.remaining == 0 {
            let canon = canonical_unchecked(self.ms.components(), &self.classes);
            self.found.insert(canon);
            return true;
        }
        let anchor = (0..self.masks.len()).find(|&j| !self.is_assigned(j)).unwrap_or(0);
        self.take(anchor);
        let ok = self.extend(self.masks[anchor]);
        self.release(anchor);
        ok
    }

    fn extend(&mut self, covered: u32) -> bool {
        self.nodes += 1;
        if self.saturated() {
            return true;
        }
        if covered == self.full {
            let class = core::mem::take(&mut self.current);
            self.classes.push(class);
            let ok = self.open_class();
            self.current = self.classes.pop().unwrap_or_default();
            return ok;
        }
        let key = (self.assigned, covered);
        if self.dead.contains(&key) {
            return false;
        }
        let element = (!covered & self.full).trailing_zeros() as usize;
        let mut tried: Vec<u32> = Vec::new();
        let mut any = false;
        for idx in 0..self.by_element[element].len() {
            let j = self.by_element[element][idx];
            let bits = self.masks[j];
            if self.is_assigned(j) || bits & covered != 0 || tried.contains(&bits) {
                continue;
            }
            tried.push(bits);
            self.take(j);
            any |= self.extend(covered | bits);
            self.release(j);
            if self.saturated() {
                return true;
            }
        }
        if !any {
            self.dead.insert(key);
        }
        any
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::SubsetMask;
    use alloc::vec;

    fn figure2() -> Multiset {
        Multiset::from_elements(4, &[&[1, 2][..], &[3, 4], &[1], &[2, 3], &[4]]).unwrap()
    }

    fn figure3() -> Multiset {
        Multiset::from_elements(
            5,
            &[
                &[1, 2][..],
                &[3, 4],
                &[5],
                &[1, 4],
                &[3, 5],
                &[2],
                &[1, 5],
                &[2, 3],
                &[4],
            ],
        )
        .unwrap()
    }

    #[test]
    fn figure2_unique() {
        let r = enumerate_resolutions(&figure2(), 2, 2).unwrap();
        assert_eq!(r.status, ResolutionStatus::Unique);
        assert_eq!(r.witnesses.len(), 1);
        let w = &r.witnesses[0];
        assert_eq!(w.class_sizes().iter().copied().collect::<BTreeSet<_>>().len(), 2);
        assert!(r.nodes_explored > 0);
    }

    #[test]
    fn figure3_multiple() {
        let r = enumerate_resolutions(&figure3(), 3, 2).unwrap();
        assert_eq!(r.status, ResolutionStatus::Multiple);
        assert_eq!(r.witnesses.len(), 2);
        assert!(!is_uniquely_resolvable(&figure3(), 3).unwrap());
    }

    #[test]
    fn copies_of_full_set_are_unique() {
        for m in 1..=6 {
            for n in 1..=6 {
                let ms = Multiset::new(m, vec![SubsetMask::full(m).unwrap(); n]).unwrap();
                let r = enumerate_resolutions(&ms, n, 2).unwrap();
                assert_eq!(r.status, ResolutionStatus::Unique, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn unbalanced_or_short_is_unresolvable() {
        let r = enumerate_resolutions(&figure2(), 3, 2).unwrap();
        assert_eq!(r.status, ResolutionStatus::Unresolvable);
        assert!(r.witnesses.is_empty());
        let ms = Multiset::from_elements(2, &[[1, 2]]).unwrap();
        assert_eq!(
            enumerate_resolutions(&ms, 2, 2).unwrap().status,
            ResolutionStatus::Unresolvable
        );
        // balanced but not splittable into exact covers
        let ms = Multiset::from_elements(3, &[[1, 2], [2, 3], [1, 3]]).unwrap();
        assert_eq!(
            enumerate_resolutions(&ms, 2, 2).unwrap().status,
            ResolutionStatus::Unresolvable
        );
    }

    #[test]
    fn limit_one_still_detects_multiple() {
        let r = enumerate_resolutions(&figure3(), 3, 1).unwrap();
        assert_eq!(r.status, ResolutionStatus::Multiple);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn caps_and_arguments() {
        assert!(matches!(
            enumerate_resolutions(&figure2(), 2, 0),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            enumerate_resolutions(&figure2(), 0, 2),
            Err(Error::Malformed(_))
        ));
        let small = Resolver::new().with_max_m(3);
        assert!(matches!(
            small.enumerate(&figure2(), 2, 2),
            Err(Error::Capacity(_))
        ));
        let few = Resolver::new().with_max_k(4);
        assert!(matches!(few.enumerate(&figure2(), 2, 2), Err(Error::Capacity(_))));
        assert_eq!(Resolver::new().with_max_m(99).max_m(), MAX_M);
    }

    #[test]
    fn singletons_plus_full_set() {
        for m in 1..=10 {
            let mut comps: Vec<SubsetMask> = (1..=m)
                .map(|e| SubsetMask::from_elements(&[e], m).unwrap())
                .collect();
            comps.push(SubsetMask::full(m).unwrap());
            let ms = Multiset::new(m, comps).unwrap();
            assert!(is_uniquely_resolvable(&ms, 2).unwrap(), "m={m}");
        }
    }

    #[test]
    fn repeated_proper_mask_is_ambiguous() {
        // The two {1}s can trade classes; canonically that is one partition.
        let ms = Multiset::from_elements(2, &[&[1][..], &[2], &[1], &[2], &[1, 2]]).unwrap();
        let r = enumerate_resolutions(&ms, 3, 10).unwrap();
        assert_eq!(r.status, ResolutionStatus::Multiple);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn collects_all_resolutions_up_to_limit() {
        let ms = Multiset::from_elements(3, &[&[1][..], &[2, 3], &[1, 2], &[3], &[1, 3], &[2]]).unwrap();
        let r = enumerate_resolutions(&ms, 2, 10).unwrap();
        assert_eq!(r.status, ResolutionStatus::Unresolvable);
        let r = enumerate_resolutions(&ms, 3, 10).unwrap();
        assert_eq!(r.status, ResolutionStatus::Unique);
    }
}
