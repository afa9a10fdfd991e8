use core::fmt;

use crate::error::{Error, Result};
use alloc::format;

/// Hard cap on the ground-set size; masks are a single `u32`.
pub const MAX_M: usize = 24;

/// A non-empty subset of `[m]`, stored as a bit pattern.
///
/// Element `e` (1-based) lives at bit `e - 1`. Ordering is by numeric bit
/// pattern, which is the order used everywhere a deterministic enumeration of
/// subsets is needed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    // Field order matters for the derived `Ord`.
    bits: u32,
    m: u8,
}

pub(crate) fn full_bits(m: usize) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

pub(crate) fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Malformed("ground set must have m >= 1".into()));
    }
    if m > MAX_M {
        return Err(Error::Capacity(format!("m = {m} exceeds the cap of {MAX_M}")));
    }
    Ok(())
}

impl SubsetMask {
    pub fn new(bits: u32, m: usize) -> Result<Self> {
        check_m(m)?;
        if bits == 0 {
            return Err(Error::Malformed("components must be non-empty".into()));
        }
        if bits & !full_bits(m) != 0 {
            return Err(Error::Malformed(format!(
                "bit pattern {bits:#b} has elements beyond m = {m}"
            )));
        }
        Ok(Self { bits, m: m as u8 })
    }

    /// Caller guarantees `bits` is a non-empty subset of `[m]` and `m` is in range.
    pub(crate) fn from_raw(bits: u32, m: usize) -> Self {
        debug_assert!(bits != 0 && bits & !full_bits(m) == 0 && m <= MAX_M);
        Self { bits, m: m as u8 }
    }

    /// The whole ground set `[m]`.
    pub fn full(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self::from_raw(full_bits(m), m))
    }

    /// Builds a mask from 1-based element labels. Repeated labels are rejected.
    pub fn from_elements(elements: &[usize], m: usize) -> Result<Self> {
        check_m(m)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > m {
                return Err(Error::Malformed(format!("element {e} outside 1..={m}")));
            }
            let bit = 1u32 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::Malformed(format!("element {e} repeated in a component")));
            }
            bits |= bit;
        }
        Self::new(bits, m)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn m(self) -> usize {
        self.m as usize
    }

    /// Number of elements in the subset.
    #[allow(clippy::len_without_is_empty)] // a component is never empty
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_full(self) -> bool {
        self.bits == full_bits(self.m())
    }

    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.m() && self.bits & (1 << (element - 1)) != 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self::from_raw(self.bits | other.bits, self.m())
    }

    /// `[m] \ self`, or `None` for the full set.
    pub fn complement(self) -> Option<Self> {
        let rest = full_bits(self.m()) & !self.bits;
        (rest != 0).then(|| Self::from_raw(rest, self.m()))
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..32usize).filter(move |i| bits & (1 << i) != 0).map(|i| i + 1)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}
