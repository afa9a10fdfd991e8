//! Explicit uniquely resolvable multisets.
//!
//! Every builder returns a [`ConstructedInstance`]: the multiset, its intended
//! resolution, and a tag saying which construction produced it. All outputs
//! are deterministic.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::mask::{check_m, full_bits, SubsetMask};
use crate::multiset::{induced_proper_subsets, is_valid_partition, Multiset, Partition};

/// Which construction an instance came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// `n` copies of `[m]`.
    Trivial,
    /// One class of `m` singletons (only for `n = 1`).
    Singletons,
    /// Singletons plus one copy of `[m]`, for `n = 2`.
    TwoClass,
    /// Complement pairs.
    Pair,
    /// Size-`k` classes around a central component.
    Central,
    /// Size-3 central classes topped up with complement pairs.
    Mixed,
    /// All complement pairs plus copies of `[m]`.
    Shift,
    /// Produced by the singleton-elimination rewrite.
    Eliminated,
    /// Found by exhaustive search.
    Search,
}

impl Provenance {
    pub const ALL: [Provenance; 9] = [
        Self::Trivial,
        Self::Singletons,
        Self::TwoClass,
        Self::Pair,
        Self::Central,
        Self::Mixed,
        Self::Shift,
        Self::Eliminated,
        Self::Search,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Trivial => "trivial",
            Self::Singletons => "singletons",
            Self::TwoClass => "two-class",
            Self::Pair => "pair",
            Self::Central => "central",
            Self::Mixed => "mixed",
            Self::Shift => "shift",
            Self::Eliminated => "eliminated",
            Self::Search => "search",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A multiset together with the resolution it was built around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedInstance {
    pub ms: Multiset,
    pub partition: Partition,
    pub provenance: Provenance,
}

impl ConstructedInstance {
    /// Checks that `partition` is a valid resolution of `ms`.
    pub fn new(ms: Multiset, partition: Partition, provenance: Provenance) -> Result<Self> {
        if !is_valid_partition(&ms, &partition)? {
            return Err(Error::Malformed(
                "partition is not a resolution of the multiset".into(),
            ));
        }
        Ok(Self {
            ms,
            partition,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn m(&self) -> usize {
        self.ms.m()
    }

    /// Number of components.
    pub fn size(&self) -> usize {
        self.ms.len()
    }
}

/// Accumulates classes given as mask lists.
struct Builder {
    m: usize,
    components: Vec<SubsetMask>,
    classes: Vec<Vec<usize>>,
}

impl Builder {
    fn new(m: usize) -> Self {
        Self {
            m,
            components: Vec::new(),
            classes: Vec::new(),
        }
    }

    fn push_class(&mut self, masks: &[u32]) {
        let start = self.components.len();
        self.components
            .extend(masks.iter().map(|&b| SubsetMask::from_raw(b, self.m)));
        self.classes.push((start..self.components.len()).collect());
    }

    fn finish(self, provenance: Provenance) -> ConstructedInstance {
        let ms = Multiset::new(self.m, self.components).expect("builder masks are over m");
        let partition = Partition::new(self.classes);
        debug_assert!(is_valid_partition(&ms, &partition).unwrap_or(false));
        ConstructedInstance {
            ms,
            partition,
            provenance,
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Regime("n must be at least 1".into()));
    }
    Ok(())
}

/// `2^(m-1) - 1`, the number of complement pairs of proper subsets of `[m]`.
pub fn pair_count(m: usize) -> u64 {
    (1u64 << (m - 1)) - 1
}

/// `n` copies of `[m]`, one per class.
pub fn trivial_construction(n: usize, m: usize) -> Result<ConstructedInstance> {
    check_n(n)?;
    check_m(m)?;
    let mut b = Builder::new(m);
    for _ in 0..n {
        b.push_class(&[full_bits(m)]);
    }
    Ok(b.finish(Provenance::Trivial))
}

/// A single class of the `m` singletons; the only extremal choice for `n = 1`.
pub fn singleton_construction(m: usize) -> Result<ConstructedInstance> {
    check_m(m)?;
    let mut b = Builder::new(m);
    let singles: Vec<u32> = (0..m).map(|e| 1 << e).collect();
    b.push_class(&singles);
    Ok(b.finish(Provenance::Singletons))
}

/// `{1}, ..., {m}, [m]` resolved as singletons versus the full set. Extremal
/// for two classes.
pub fn two_class_construction(m: usize) -> Result<ConstructedInstance> {
    check_m(m)?;
    let mut b = Builder::new(m);
    let singles: Vec<u32> = (0..m).map(|e| 1 << e).collect();
    b.push_class(&singles);
    b.push_class(&[full_bits(m)]);
    Ok(b.finish(Provenance::TwoClass))
}

/// Complement pairs `{C, [m] \ C}` in the canonical order: masks `C` that
/// contain element 1 and are not `[m]`, by increasing bit pattern.
pub fn complement_pairs(m: usize) -> impl Iterator<Item = (u32, u32)> {
    let full = full_bits(m);
    (1..full).step_by(2).map(move |c| (c, full & !c))
}

/// `n` classes of size two, each a distinct complement pair.
pub fn pair_construction(n: usize, m: usize) -> Result<ConstructedInstance> {
    check_n(n)?;
    check_m(m)?;
    if n as u64 > pair_count(m) {
        return Err(Error::Regime(format!(
            "pair construction needs n <= 2^(m-1) - 1 = {}, got n = {n}",
            pair_count(m)
        )));
    }
    let mut b = Builder::new(m);
    for (c, rest) in complement_pairs(m).take(n) {
        b.push_class(&[c, rest]);
    }
    Ok(b.finish(Provenance::Pair))
}

/// `2^(N-1) - 1` proper subsets of `[N]`, each with at least `ceil(N/2)`
/// elements, no two complementary.
///
/// Odd `N`: every proper subset of size at least `ceil(N/2)`. Even `N`: every
/// proper subset larger than `N/2`, plus the half-size subsets containing
/// element 1. Returned in increasing bit-pattern order.
pub fn complement_free_family(size: usize) -> Result<Vec<SubsetMask>> {
    if size < 2 {
        return Err(Error::Regime(format!(
            "complement-free family needs N >= 2, got {size}"
        )));
    }
    check_m(size)?;
    Ok(complement_free_bits(size)
        .into_iter()
        .map(|b| SubsetMask::from_raw(b, size))
        .collect())
}

fn complement_free_bits(size: usize) -> Vec<u32> {
    let full = full_bits(size);
    let half = size.div_ceil(2);
    (1..full)
        .filter(|&b| {
            let len = b.count_ones() as usize;
            if size % 2 == 1 {
                len >= half
            } else {
                len > size / 2 || (len == size / 2 && b & 1 != 0)
            }
        })
        .collect()
}

/// Largest `n` for which [`central_construction`] works with class size `k`:
/// `2^(floor(m/(k-1)) - 1) - 1`. `None` when the `k`, `m` pair is outside its
/// regime.
pub fn central_capacity(m: usize, k: usize) -> Option<u64> {
    if k < 2 || k >= m {
        return None;
    }
    let block = m / (k - 1);
    if block < 2 {
        return None;
    }
    Some((1u64 << (block - 1)) - 1)
}

/// `n` classes of size `k` built around central components.
///
/// `[m]` is cut into `k - 1` consecutive blocks of `b = floor(m/(k-1))`
/// elements; the `r = m mod (k-1)` trailing elements are added to every
/// central component. Class `j` takes the `j`-th member of the complement-free
/// family of each block, unions them (plus the trailing elements) into the
/// central component, and adds the leftover of each block as the other
/// `k - 1` components.
pub fn central_construction(n: usize, m: usize, k: usize) -> Result<ConstructedInstance> {
    check_n(n)?;
    check_m(m)?;
    if k < 2 || k >= m {
        return Err(Error::Regime(format!(
            "central construction needs 2 <= k < m, got k = {k}, m = {m}"
        )));
    }
    let block = m / (k - 1);
    if block < 2 {
        return Err(Error::Regime(format!(
            "central construction needs floor(m/(k-1)) >= 2, got floor({m}/{}) = {block}",
            k - 1
        )));
    }
    let capacity = (1u64 << (block - 1)) - 1;
    if n as u64 > capacity {
        return Err(Error::Regime(format!(
            "central construction needs n <= 2^(floor(m/(k-1)) - 1) - 1 = {capacity}, got n = {n}"
        )));
    }
    let family = complement_free_bits(block);
    let block_full = full_bits(block);
    let tail = full_bits(m) & !full_bits(block * (k - 1));
    let mut b = Builder::new(m);
    let mut class = Vec::with_capacity(k);
    for &member in family.iter().take(n) {
        class.clear();
        let mut centre = tail;
        for i in 0..k - 1 {
            let shift = i * block;
            centre |= member << shift;
            class.push((block_full & !member) << shift);
        }
        class.insert(0, centre);
        b.push_class(&class);
    }
    Ok(b.finish(Provenance::Central))
}

/// Range of `n` covered by [`mixed_construction`] for a given `m >= 4`:
/// `2^(m-1) + 1 - 2^floor(m/2) ..= 2^(m-1) - 1`.
pub fn mixed_range(m: usize) -> Option<(u64, u64)> {
    if m < 4 {
        return None;
    }
    Some(((1u64 << (m - 1)) + 1 - (1u64 << (m / 2)), pair_count(m)))
}

/// Number of size-3 classes used by [`mixed_construction`]:
/// `floor((2^(m-1) - 1 - n) / 2)`.
pub fn mixed_triples(n: usize, m: usize) -> u64 {
    (pair_count(m) - n as u64) / 2
}

/// `k = floor((2^(m-1)-1-n)/2)` size-3 central classes plus `n - k` complement
/// pairs, skipping pairs among the proper subsets induced by the size-3
/// classes. Extremal in its range of `n`.
pub fn mixed_construction(n: usize, m: usize) -> Result<ConstructedInstance> {
    check_n(n)?;
    check_m(m)?;
    let (lo, hi) = mixed_range(m)
        .ok_or_else(|| Error::Regime(format!("mixed construction needs m >= 4, got m = {m}")))?;
    if (n as u64) < lo || n as u64 > hi {
        return Err(Error::Regime(format!(
            "mixed construction needs 2^(m-1) + 1 - 2^floor(m/2) = {lo} <= n <= {hi}, got n = {n}"
        )));
    }
    let triples = mixed_triples(n, m) as usize;
    let mut b = Builder::new(m);
    let mut blocked = BTreeSet::new();
    if triples > 0 {
        let core = central_construction(triples, m, 3)?;
        for class in core.partition.classes() {
            blocked.extend(
                induced_proper_subsets(&core.ms, class)?
                    .into_iter()
                    .map(SubsetMask::bits),
            );
            let masks: Vec<u32> = class.iter().map(|&j| core.ms.components()[j].bits()).collect();
            b.push_class(&masks);
        }
    }
    let pairs = complement_pairs(m)
        .filter(|(c, rest)| !blocked.contains(c) && !blocked.contains(rest))
        .take(n - triples);
    for (c, rest) in pairs {
        b.push_class(&[c, rest]);
    }
    let inst = b.finish(Provenance::Mixed);
    if inst.n() != n {
        return Err(Error::Regime(format!(
            "ran out of complement pairs for n = {n}, m = {m}"
        )));
    }
    Ok(inst)
}

/// Every complement pair plus `n - 2^(m-1) + 1` copies of `[m]`, for
/// `n > 2^(m-1) - 1`.
pub fn shift_construction(n: usize, m: usize) -> Result<ConstructedInstance> {
    check_n(n)?;
    check_m(m)?;
    let pairs = pair_count(m);
    if n as u64 <= pairs {
        return Err(Error::Regime(format!(
            "shift construction needs n > 2^(m-1) - 1 = {pairs}, got n = {n}"
        )));
    }
    let mut b = Builder::new(m);
    for (c, rest) in complement_pairs(m) {
        b.push_class(&[c, rest]);
    }
    for _ in 0..n - pairs as usize {
        b.push_class(&[full_bits(m)]);
    }
    Ok(b.finish(Provenance::Shift))
}

/// Rewrites away every size-1 class (a copy of `[m]`) without changing the
/// number of components.
///
/// Each round takes the first size-1 class and the first class of size at
/// least three, merges that class's two lowest-indexed components `C1, C2`
/// into one, and splits the `[m]` copy into `C1` and `[m] \ C1`. Component
/// indices are kept: the `[m]` slot becomes `C1`, `C1`'s slot becomes
/// `C1 ∪ C2`, and `C2`'s slot becomes `[m] \ C1` and moves to the former
/// singleton class.
pub fn eliminate_singletons(ms: &Multiset, p: &Partition) -> Result<(Multiset, Partition)> {
    if !is_valid_partition(ms, p)? {
        return Err(Error::Malformed(
            "partition is not a resolution of the multiset".into(),
        ));
    }
    let mut comps = ms.components().to_vec();
    let mut classes: Vec<Vec<usize>> = p.classes().to_vec();
    if !classes.iter().any(|c| c.len() == 1) {
        return Err(Error::Regime("no class of size 1 to eliminate".into()));
    }
    while let Some(single) = classes.iter().position(|c| c.len() == 1) {
        let Some(big) = classes.iter().position(|c| c.len() >= 3) else {
            return Err(Error::Regime(
                "singleton elimination needs a class of size at least 3".into(),
            ));
        };
        let mut members = classes[big].clone();
        members.sort_unstable();
        let (first, second) = (members[0], members[1]);
        let full_slot = classes[single][0];
        let c1 = comps[first];
        let c2 = comps[second];
        let rest = c1
            .complement()
            .ok_or_else(|| Error::Malformed("a class of size >= 3 cannot contain the full set".into()))?;
        comps[full_slot] = c1;
        comps[first] = c1.union(c2);
        comps[second] = rest;
        classes[big].retain(|&j| j != second);
        classes[single].push(second);
    }
    let out_ms = Multiset::new(ms.m(), comps)?;
    let out_p = Partition::new(classes);
    debug_assert!(is_valid_partition(&out_ms, &out_p).unwrap_or(false));
    Ok((out_ms, out_p))
}

/// The class size the log-ratio rule picks for the central construction,
/// `floor((m+1)/(log2(n+1)+2)) + 1`.
pub fn log_ratio_class_size(n: usize, m: usize) -> usize {
    let denom = crate::bounds::log2_exact(n as u64 + 1) + 2.0;
    // (m + 1) / denom is at least 1 whenever n <= 2^(m-1) - 1.
    libm::floor((m as f64 + 1.0) / denom) as usize + 1
}

/// Candidate construction sizes for `(n, m)`, largest first after sorting by the
/// caller. Only arithmetic; nothing is built.
fn candidates(n: usize, m: usize) -> Vec<(u64, Provenance, usize)> {
    let n64 = n as u64;
    let mut out = vec![(n64, Provenance::Trivial, 0)];
    if n == 1 {
        out.push((m as u64, Provenance::Singletons, 0));
    }
    if n == 2 {
        out.push((m as u64 + 1, Provenance::TwoClass, 0));
    }
    let pairs = pair_count(m);
    if n64 > pairs {
        out.push((n64 + pairs, Provenance::Shift, 0));
        return out;
    }
    out.push((2 * n64, Provenance::Pair, 0));
    if let Some((lo, hi)) = mixed_range(m) {
        if (lo..=hi).contains(&n64) {
            out.push((2 * n64 + mixed_triples(n, m), Provenance::Mixed, 0));
        }
    }
    let preferred = log_ratio_class_size(n, m);
    for k in core::iter::once(preferred).chain(3..m) {
        if central_capacity(m, k).is_some_and(|cap| n64 <= cap) {
            out.push((k as u64 * n64, Provenance::Central, k));
        }
    }
    out
}

/// Size of [`best_construction`]`(n, m)` without building it.
pub fn best_construction_size(n: usize, m: usize) -> Result<u64> {
    check_n(n)?;
    check_m(m)?;
    Ok(best_candidate(n, m).0)
}

/// Best candidate by size, with its provenance and (for central) class size.
/// Arithmetic only, so it is valid for `m` up to 62.
pub(crate) fn best_size_arith(n: usize, m: usize) -> (u64, Provenance, usize) {
    best_candidate(n, m)
}

fn best_candidate(n: usize, m: usize) -> (u64, Provenance, usize) {
    // Ties go to the earliest candidate, so the preferred central k wins over
    // the scan and the special cases win over generic ones.
    candidates(n, m)
        .into_iter()
        .fold(None, |best: Option<(u64, Provenance, usize)>, c| match best {
            Some(b) if b.0 >= c.0 => Some(b),
            _ => Some(c),
        })
        .expect("trivial candidate always present")
}

/// The largest instance among the constructions that apply to `(n, m)`.
pub fn best_construction(n: usize, m: usize) -> Result<ConstructedInstance> {
    check_n(n)?;
    check_m(m)?;
    let (_, provenance, k) = best_candidate(n, m);
    match provenance {
        Provenance::Trivial => trivial_construction(n, m),
        Provenance::Singletons => singleton_construction(m),
        Provenance::TwoClass => two_class_construction(m),
        Provenance::Shift => shift_construction(n, m),
        Provenance::Pair => pair_construction(n, m),
        Provenance::Mixed => mixed_construction(n, m),
        Provenance::Central => central_construction(n, m, k),
        Provenance::Eliminated | Provenance::Search => unreachable!("not a candidate"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolve::is_uniquely_resolvable;

    fn sets(inst: &ConstructedInstance) -> Vec<Vec<usize>> {
        inst.ms
            .components()
            .iter()
            .map(|c| c.elements().collect())
            .collect()
    }

    fn mask(e: &[usize], m: usize) -> SubsetMask {
        SubsetMask::from_elements(e, m).unwrap()
    }

    #[test]
    fn trivial() {
        let t = trivial_construction(1, 1).unwrap();
        assert_eq!(sets(&t), [vec![1]]);
        let t = trivial_construction(3, 5).unwrap();
        assert_eq!(t.size(), 3);
        assert!(t.ms.components().iter().all(|c| c.is_full()));
        assert_eq!(t.n(), 3);
        assert!(is_uniquely_resolvable(&trivial_construction(2, 2).unwrap().ms, 2).unwrap());
        assert!(trivial_construction(0, 2).is_err());
    }

    #[test]
    fn two_class() {
        let t = two_class_construction(4).unwrap();
        assert_eq!(sets(&t), [vec![1], vec![2], vec![3], vec![4], vec![1, 2, 3, 4]]);
        assert_eq!(t.partition.classes(), [vec![0, 1, 2, 3], vec![4]]);
        assert_eq!(sets(&two_class_construction(1).unwrap()), [vec![1], vec![1]]);
        let t = two_class_construction(5).unwrap();
        assert_eq!(t.size(), 6);
        assert!(is_uniquely_resolvable(&t.ms, 2).unwrap());
    }

    #[test]
    fn pairs() {
        assert_eq!(sets(&pair_construction(1, 2).unwrap()), [vec![1], vec![2]]);
        let p = pair_construction(7, 4).unwrap();
        assert_eq!(p.size(), 14);
        assert!(p.ms.repeated_proper_masks().is_empty());
        assert!(is_uniquely_resolvable(&p.ms, 7).unwrap());
        let p = pair_construction(3, 4).unwrap();
        assert_eq!(
            sets(&p),
            [
                vec![1],
                vec![2, 3, 4],
                vec![1, 2],
                vec![3, 4],
                vec![1, 3],
                vec![2, 4]
            ]
        );
        assert!(is_uniquely_resolvable(&p.ms, 3).unwrap());
        assert!(matches!(pair_construction(8, 4), Err(Error::Regime(_))));
        assert!(matches!(pair_construction(1, 1), Err(Error::Regime(_))));
    }

    #[test]
    fn complement_free() {
        let f3: Vec<_> = complement_free_family(3).unwrap();
        assert_eq!(f3, [mask(&[1, 2], 3), mask(&[1, 3], 3), mask(&[2, 3], 3)]);
        assert_eq!(complement_free_family(2).unwrap(), [mask(&[1], 2)]);
        let f4: BTreeSet<_> = complement_free_family(4).unwrap().into_iter().collect();
        let want: BTreeSet<_> = [
            &[1, 2, 3][..],
            &[1, 2, 4],
            &[1, 3, 4],
            &[2, 3, 4],
            &[1, 2],
            &[1, 3],
            &[1, 4],
        ]
        .iter()
        .map(|e| mask(e, 4))
        .collect();
        assert_eq!(f4, want);
        assert!(matches!(complement_free_family(1), Err(Error::Regime(_))));
    }

    #[test]
    fn central_by_hand() {
        let c = central_construction(1, 4, 3).unwrap();
        assert_eq!(sets(&c), [vec![1, 3], vec![2], vec![4]]);
        assert!(is_uniquely_resolvable(&c.ms, 1).unwrap());

        let c = central_construction(3, 6, 3).unwrap();
        assert_eq!(c.size(), 9);
        assert!(c.partition.classes().iter().all(|cl| cl.len() == 3));
        assert!(is_uniquely_resolvable(&c.ms, 3).unwrap());

        let c = central_construction(1, 5, 3).unwrap();
        assert_eq!(sets(&c), [vec![1, 3, 5], vec![2], vec![4]]);
        assert!(is_uniquely_resolvable(&c.ms, 1).unwrap());
    }

    #[test]
    fn central_regime_errors() {
        assert!(matches!(central_construction(1, 4, 4), Err(Error::Regime(_))));
        assert!(matches!(central_construction(1, 5, 4), Err(Error::Regime(_))));
        assert!(matches!(central_construction(2, 4, 3), Err(Error::Regime(_))));
        assert!(matches!(central_construction(1, 4, 1), Err(Error::Regime(_))));
        let e = central_construction(4, 6, 3).unwrap_err();
        assert!(format!("{e}").contains("n <= 2^(floor(m/(k-1)) - 1) - 1 = 3"));
    }

    #[test]
    fn mixed() {
        let x = mixed_construction(5, 4).unwrap();
        assert_eq!(x.size(), 11);
        let want: BTreeSet<_> = [
            &[1, 3][..],
            &[2],
            &[4],
            &[1],
            &[2, 3, 4],
            &[3],
            &[1, 2, 4],
            &[1, 2],
            &[3, 4],
            &[1, 4],
            &[2, 3],
        ]
        .iter()
        .map(|e| mask(e, 4))
        .collect();
        assert_eq!(x.ms.components().iter().copied().collect::<BTreeSet<_>>(), want);
        assert!(is_uniquely_resolvable(&x.ms, 5).unwrap());

        let x = mixed_construction(7, 4).unwrap();
        assert_eq!(x.size(), 14);
        assert_eq!(mixed_construction(13, 5).unwrap().size(), 27);
        assert!(matches!(mixed_construction(4, 4), Err(Error::Regime(_))));
        assert!(matches!(mixed_construction(3, 3), Err(Error::Regime(_))));
    }

    #[test]
    fn shift() {
        let s = shift_construction(8, 4).unwrap();
        assert_eq!(s.size(), 15);
        assert!(is_uniquely_resolvable(&s.ms, 8).unwrap());
        let s = shift_construction(2, 2).unwrap();
        assert_eq!(s.size(), 3);
        assert!(is_uniquely_resolvable(&s.ms, 2).unwrap());
        assert_eq!(shift_construction(10, 4).unwrap().size(), 17);
        assert_eq!(shift_construction(3, 1).unwrap().size(), 3);
        assert!(matches!(shift_construction(7, 4), Err(Error::Regime(_))));
    }

    #[test]
    fn eliminate_example() {
        let ms = Multiset::from_elements(4, &[&[1, 2, 3, 4][..], &[1], &[2], &[3, 4]]).unwrap();
        let p = Partition::new(vec![vec![0], vec![1, 2, 3]]);
        assert!(is_uniquely_resolvable(&ms, 2).unwrap());
        let (out, q) = eliminate_singletons(&ms, &p).unwrap();
        assert_eq!(out.len(), 4);
        let classes: BTreeSet<BTreeSet<SubsetMask>> = q
            .classes()
            .iter()
            .map(|c| c.iter().map(|&j| out.components()[j]).collect())
            .collect();
        let want: BTreeSet<BTreeSet<SubsetMask>> = [
            [mask(&[1], 4), mask(&[2, 3, 4], 4)].into_iter().collect(),
            [mask(&[1, 2], 4), mask(&[3, 4], 4)].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(classes, want);
        assert!(is_uniquely_resolvable(&out, 2).unwrap());
    }

    #[test]
    fn eliminate_preconditions() {
        let f2 = Multiset::from_elements(4, &[&[1, 2][..], &[3, 4], &[1], &[2, 3], &[4]]).unwrap();
        let p = Partition::new(vec![vec![0, 1], vec![2, 3, 4]]);
        assert!(matches!(eliminate_singletons(&f2, &p), Err(Error::Regime(_))));
        let t = trivial_construction(2, 3).unwrap();
        assert!(matches!(
            eliminate_singletons(&t.ms, &t.partition),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn best() {
        let b = best_construction(7, 10).unwrap();
        assert_eq!((b.size(), b.provenance), (21, Provenance::Central));
        assert_eq!(best_construction(2, 5).unwrap().size(), 6);
        let b = best_construction(5, 4).unwrap();
        assert_eq!((b.size(), b.provenance), (11, Provenance::Mixed));
        assert_eq!(best_construction(1, 6).unwrap().size(), 6);
        assert_eq!(best_construction(9, 4).unwrap().size(), 16);
        for n in 1..=20 {
            for m in 1..=8 {
                let b = best_construction(n, m).unwrap();
                assert_eq!(b.size() as u64, best_construction_size(n, m).unwrap());
                assert_eq!(b.n(), n);
            }
        }
    }

    #[test]
    fn log_ratio_k() {
        assert_eq!(log_ratio_class_size(7, 10), 3);
        assert_eq!(log_ratio_class_size(1, 2), 2);
        assert_eq!(log_ratio_class_size(15, 5), 2);
    }
}
