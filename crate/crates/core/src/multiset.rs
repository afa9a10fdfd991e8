use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::mask::{check_m, full_bits, SubsetMask};

/// A multiset `{C_1, ..., C_k}` of non-empty subsets of `[m]`.
///
/// Component positions are meaningful: partitions refer to components by
/// 0-based index. Duplicate masks are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiset {
    m: usize,
    components: Vec<SubsetMask>,
}

impl Multiset {
    pub fn new(m: usize, components: Vec<SubsetMask>) -> Result<Self> {
        check_m(m)?;
        if let Some((j, c)) = components.iter().enumerate().find(|(_, c)| c.m() != m) {
            return Err(Error::Malformed(format!(
                "component {j} is over m = {}, expected m = {m}",
                c.m()
            )));
        }
        Ok(Self { m, components })
    }

    /// Builds a multiset from 1-based element lists, e.g. `[[1, 2], [3, 4], [1], [2, 3], [4]]`.
    pub fn from_elements<S: AsRef<[usize]>>(m: usize, lists: &[S]) -> Result<Self> {
        let components = lists
            .iter()
            .map(|l| SubsetMask::from_elements(l.as_ref(), m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, components)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of components, `k`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[SubsetMask] {
        &self.components
    }

    pub fn into_components(self) -> Vec<SubsetMask> {
        self.components
    }

    /// How many components contain each element; index 0 is element 1.
    pub fn element_multiplicities(&self) -> Vec<usize> {
        let mut counts = vec![0; self.m];
        for c in &self.components {
            for e in c.elements() {
                counts[e - 1] += 1;
            }
        }
        counts
    }

    /// Masks other than `[m]` that occur more than once. A uniquely resolvable
    /// multiset never has any.
    pub fn repeated_proper_masks(&self) -> Vec<SubsetMask> {
        let sorted = self.sorted_masks();
        let mut out: Vec<SubsetMask> = Vec::new();
        for w in sorted.windows(2) {
            if w[0] == w[1] && !w[0].is_full() && out.last() != Some(&w[0]) {
                out.push(w[0]);
            }
        }
        out
    }

    /// The components as a sorted list, i.e. the multiset forgetting positions.
    pub fn sorted_masks(&self) -> Vec<SubsetMask> {
        let mut v = self.components.clone();
        v.sort_unstable();
        v
    }

    /// Reorders components; `order[i]` is the old index of the new component `i`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() || !is_permutation(order) {
            return Err(Error::Malformed(
                "not a permutation of the component indices".into(),
            ));
        }
        Ok(Self {
            m: self.m,
            components: order.iter().map(|&i| self.components[i]).collect(),
        })
    }
}

fn is_permutation(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    order
        .iter()
        .all(|&i| i < seen.len() && !core::mem::replace(&mut seen[i], true))
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// An assignment of component indices into classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(classes: Vec<Vec<usize>>) -> Self {
        Self { classes }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn into_classes(self) -> Vec<Vec<usize>> {
        self.classes
    }

    /// Number of classes, `n`.
    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// A partition described only by the masks in each class, with classes and
/// masks sorted. Renaming classes or swapping equal-mask components does not
/// change it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalPartition {
    classes: Vec<Vec<SubsetMask>>,
}

impl CanonicalPartition {
    /// Sorts each class and then the classes.
    pub fn from_mask_classes(mut classes: Vec<Vec<SubsetMask>>) -> Self {
        for class in &mut classes {
            class.sort_unstable();
        }
        classes.sort_unstable();
        Self { classes }
    }

    pub fn classes(&self) -> &[Vec<SubsetMask>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

impl fmt::Display for CanonicalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, class) in self.classes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("[")?;
            for (j, c) in class.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// True iff every element of `[m]` lies in exactly `n` components. This is
/// necessary for a resolution into `n` classes to exist.
pub fn balance_check(ms: &Multiset, n: usize) -> bool {
    ms.element_multiplicities().iter().all(|&c| c == n)
}

/// Checks that `p` splits all of `ms` into non-empty exact covers of `[m]`.
///
/// Out-of-range indices are an error; every other defect yields `Ok(false)`.
pub fn is_valid_partition(ms: &Multiset, p: &Partition) -> Result<bool> {
    let k = ms.len();
    if let Some(&j) = p.classes().iter().flatten().find(|&&j| j >= k) {
        return Err(Error::Malformed(format!(
            "component index {j} out of range for k = {k}"
        )));
    }
    let mut seen = vec![false; k];
    let full = full_bits(ms.m());
    for class in p.classes() {
        if class.is_empty() {
            return Ok(false);
        }
        let mut covered = 0u32;
        for &j in class {
            if core::mem::replace(&mut seen[j], true) {
                return Ok(false);
            }
            let bits = ms.components()[j].bits();
            if covered & bits != 0 {
                return Ok(false);
            }
            covered |= bits;
        }
        if covered != full {
            return Ok(false);
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

pub fn canonicalize(ms: &Multiset, p: &Partition) -> Result<CanonicalPartition> {
    if !is_valid_partition(ms, p)? {
        return Err(Error::Malformed("not a valid partition of the multiset".into()));
    }
    Ok(canonical_unchecked(ms.components(), p.classes()))
}

pub(crate) fn canonical_unchecked(masks: &[SubsetMask], classes: &[Vec<usize>]) -> CanonicalPartition {
    CanonicalPartition::from_mask_classes(
        classes
            .iter()
            .map(|c| c.iter().map(|&j| masks[j]).collect())
            .collect(),
    )
}

/// Necessary condition on the class sizes `d_1..d_n` of a unique resolution:
/// `sum (2^d_i - 2) <= 2^m - 2`.
///
/// Distinct classes of a unique resolution never induce a common proper subset,
/// and a class of size `d` induces `2^d - 2` of them.
pub fn subset_criterion(sizes: &[usize], m: usize) -> Result<bool> {
    if let Some(i) = sizes.iter().position(|&d| d == 0) {
        return Err(Error::Malformed(format!("class {i} has size 0")));
    }
    if m == 0 || m > 62 {
        return Err(Error::Domain(format!("m = {m} outside 1..=62")));
    }
    let cap = (1u64 << m) - 2;
    let mut total = 0u64;
    for &d in sizes {
        // 2^d - 2 > 2^m - 2 as soon as d > m.
        if d > m {
            return Ok(false);
        }
        total = total.saturating_add((1u64 << d) - 2);
        if total > cap {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All unions of non-empty proper sub-collections of a class's components.
///
/// The class's components must be pairwise disjoint; with disjointness every
/// sub-collection gives a different union, so a class of size `d` yields
/// exactly `2^d - 2` masks.
pub fn induced_proper_subsets(ms: &Multiset, class: &[usize]) -> Result<BTreeSet<SubsetMask>> {
    let mut parts = Vec::with_capacity(class.len());
    let mut covered = 0u32;
    for &j in class {
        let c = *ms
            .components()
            .get(j)
            .ok_or_else(|| Error::Malformed(format!("component index {j} out of range")))?;
        if covered & c.bits() != 0 {
            return Err(Error::Malformed(format!(
                "component {j} overlaps the rest of the class"
            )));
        }
        covered |= c.bits();
        parts.push(c.bits());
    }
    let d = parts.len();
    if d > 30 {
        return Err(Error::Capacity(format!("class of size {d} is too large")));
    }
    let mut out = BTreeSet::new();
    for pick in 1u32..(1u32 << d).saturating_sub(1) {
        let bits = parts
            .iter()
            .enumerate()
            .filter(|(i, _)| pick & (1 << i) != 0)
            .fold(0, |acc, (_, b)| acc | b);
        out.insert(SubsetMask::from_raw(bits, ms.m()));
    }
    Ok(out)
}
