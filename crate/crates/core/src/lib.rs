//! Uniquely resolvable multisets.
//!
//! A multiset `F` of non-empty subsets of `[m] = {1, ..., m}` is *resolvable*
//! into `n` classes when its components can be split into `n` groups, each of
//! which is an exact cover of `[m]`. It is *uniquely* resolvable when that split
//! is unique up to renaming the classes. This crate provides:
//!
//! - [`Multiset`], [`Partition`] and the backtracking [`Resolver`] that decides
//!   (unique) resolvability,
//! - explicit [`constructions`] of large uniquely resolvable multisets,
//! - closed-form lower, upper and exact values of the extremal size `g(n, m)` in
//!   [`bounds`],
//! - brute-force ground truth for tiny parameters in [`oracle`],
//! - the correspondence between multisets and minimal-rule logic puzzles in
//!   [`zebra`].
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock budgets, file
//! formats and the command line live in the companion `urm` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod constructions;
mod error;
mod mask;
mod multiset;
pub mod oracle;
mod resolve;
pub mod zebra;

pub use error::{Error, Result};
pub use mask::{SubsetMask, MAX_M};
pub use multiset::{
    balance_check, canonicalize, induced_proper_subsets, is_valid_partition, subset_criterion,
    CanonicalPartition, Multiset, Partition,
};
pub use resolve::{
    enumerate_resolutions, is_uniquely_resolvable, ResolutionReport, ResolutionStatus, Resolver,
    DEFAULT_MAX_K,
};
