//! Brute-force ground truth for tiny parameters.
//!
//! Nothing in here shares code with the optimised [`Resolver`](crate::Resolver)
//! beyond the data types, so the two can be cross-checked.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{ConstructedInstance, Provenance};
use crate::error::{Error, Result};
use crate::mask::{check_m, full_bits, SubsetMask};
use crate::multiset::{canonical_unchecked, subset_criterion, CanonicalPartition, Multiset, Partition};
use crate::resolve::{ResolutionReport, ResolutionStatus, Resolver};

/// Largest `m` accepted by [`set_partitions`]; Bell(6) = 203.
pub const MAX_PARTITION_M: usize = 6;

/// Largest multiset [`naive_resolve`] accepts.
pub const MAX_NAIVE_K: usize = 14;

/// Limits for the exhaustive searches. Every field must be positive.
///
/// `time_cap` is not measured here (this crate has no clock); callers enforce
/// it through the stop hook of the `*_with` search variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Uniqueness checks allowed.
    pub max_candidates: u64,
    /// Search-tree nodes allowed.
    pub max_nodes: u64,
    pub time_cap: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_candidates: u64::MAX,
            max_nodes: u64::MAX,
            time_cap: None,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_candidates == 0 || self.max_nodes == 0 || self.time_cap == Some(Duration::ZERO) {
            return Err(Error::Malformed("search budget fields must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub candidates: u64,
}

/// Best multiset found by an exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub value: usize,
    pub witness: ConstructedInstance,
    /// The whole space was searched, so `value` is certified.
    pub exhausted: bool,
    pub stats: SearchStats,
}

/// All set partitions of `[m]` in restricted-growth-string order.
pub fn set_partitions(m: usize) -> Result<Vec<Vec<SubsetMask>>> {
    check_m(m)?;
    if m > MAX_PARTITION_M {
        return Err(Error::Capacity(format!(
            "set partitions are enumerated only for m <= {MAX_PARTITION_M}, got {m}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; m];
    loop {
        let blocks = rgs.iter().max().map_or(0, |b| b + 1);
        let mut masks = vec![0u32; blocks];
        for (e, &b) in rgs.iter().enumerate() {
            masks[b] |= 1 << e;
        }
        out.push(masks.into_iter().map(|b| SubsetMask::from_raw(b, m)).collect());
        // Next string: bump the last position that may grow, reset the tail.
        let mut i = m;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                rgs[i + 1..].fill(0);
                break;
            }
        }
    }
}

/// Resolves `ms` by trying every assignment of components to at most `n`
/// classes, in restricted-growth order, discarding only assignments that put
/// overlapping components together. The status counts raw index partitions;
/// the witnesses are the distinct canonical ones.
pub fn naive_resolve(ms: &Multiset, n: usize) -> Result<ResolutionReport> {
    if n == 0 {
        return Err(Error::Malformed("class count n must be at least 1".into()));
    }
    if ms.len() > MAX_NAIVE_K {
        return Err(Error::Capacity(format!(
            "naive resolver handles k <= {MAX_NAIVE_K}, got k = {}",
            ms.len()
        )));
    }
    let mut state = Naive {
        masks: ms.components().iter().map(|c| c.bits()).collect(),
        full: full_bits(ms.m()),
        n,
        unions: Vec::new(),
        members: Vec::new(),
        found: BTreeSet::new(),
        count: 0,
        nodes: 0,
        components: ms.components(),
    };
    state.place(0);
    let status = match state.count {
        0 => ResolutionStatus::Unresolvable,
        1 => ResolutionStatus::Unique,
        _ => ResolutionStatus::Multiple,
    };
    Ok(ResolutionReport {
        status,
        witnesses: state.found.into_iter().collect(),
        nodes_explored: state.nodes,
    })
}

struct Naive<'a> {
    masks: Vec<u32>,
    full: u32,
    n: usize,
    unions: Vec<u32>,
    members: Vec<Vec<usize>>,
    found: BTreeSet<CanonicalPartition>,
    count: u64,
    nodes: u64,
    components: &'a [SubsetMask],
}

impl Naive<'_> {
    fn place(&mut self, j: usize) {
        self.nodes += 1;
        if j == self.masks.len() {
            if self.unions.len() == self.n && self.unions.iter().all(|&u| u == self.full) {
                self.count += 1;
                self.found
                    .insert(canonical_unchecked(self.components, &self.members));
            }
            return;
        }
        let bits = self.masks[j];
        for b in 0..self.unions.len() {
            if self.unions[b] & bits == 0 {
                self.unions[b] |= bits;
                self.members[b].push(j);
                self.place(j + 1);
                self.members[b].pop();
                self.unions[b] &= !bits;
            }
        }
        if self.unions.len() < self.n {
            self.unions.push(bits);
            self.members.push(vec![j]);
            self.place(j + 1);
            self.members.pop();
            self.unions.pop();
        }
    }
}

/// Naive resolver for small inputs, the optimised one past its cap.
fn oracle_unique(ms: &Multiset, n: usize) -> Result<bool> {
    let report = if ms.len() <= MAX_NAIVE_K {
        naive_resolve(ms, n)?
    } else {
        Resolver::default().enumerate(ms, n, 2)?
    };
    Ok(report.status == ResolutionStatus::Unique)
}

fn instance_from(m: usize, chosen: &[&[SubsetMask]]) -> ConstructedInstance {
    let mut comps = Vec::new();
    let mut classes = Vec::new();
    for part in chosen {
        let start = comps.len();
        comps.extend_from_slice(part);
        classes.push((start..comps.len()).collect());
    }
    let ms = Multiset::new(m, comps).expect("set partitions are over m");
    ConstructedInstance {
        ms,
        partition: Partition::new(classes),
        provenance: Provenance::Search,
    }
}

struct Meter<'a> {
    budget: SearchBudget,
    stop: &'a mut dyn FnMut() -> bool,
    stats: SearchStats,
    aborted: bool,
}

impl Meter<'_> {
    fn node(&mut self) -> bool {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget.max_nodes || (self.stats.nodes.is_multiple_of(256) && (self.stop)())
        {
            self.aborted = true;
        }
        !self.aborted
    }

    fn candidate(&mut self) -> bool {
        if self.stats.candidates >= self.budget.max_candidates || (self.stop)() {
            self.aborted = true;
            return false;
        }
        self.stats.candidates += 1;
        true
    }
}

/// Largest uniquely resolvable multiset for `(n, m)` by exhaustive search.
pub fn g_exact_search(n: usize, m: usize, budget: &SearchBudget) -> Result<ExactResult> {
    g_exact_search_with(n, m, budget, &mut || false)
}

/// [`g_exact_search`] with a hook polled during the search; returning `true`
/// stops it and yields the best multiset so far with `exhausted = false`.
///
/// Candidates are multisets of `n` set partitions of `[m]`. Only `{[m]}` may
/// be chosen twice and no proper mask may appear in two chosen partitions.
/// Class sizes must satisfy the subset criterion; survivors larger than the
/// incumbent go to the naive resolver.
pub fn g_exact_search_with(
    n: usize,
    m: usize,
    budget: &SearchBudget,
    stop: &mut dyn FnMut() -> bool,
) -> Result<ExactResult> {
    if n == 0 {
        return Err(Error::Regime("n must be at least 1".into()));
    }
    budget.validate()?;
    let mut parts = set_partitions(m)?;
    // Largest first so good incumbents turn up early. Stable, so ties keep
    // restricted-growth order.
    parts.sort_by_key(|p| core::cmp::Reverse(p.len()));
    let mut search = GSearch {
        m,
        n,
        parts: &parts,
        cap: (1u64 << m) - 2,
        chosen: Vec::new(),
        used: BTreeSet::new(),
        best: 0,
        best_choice: Vec::new(),
        meter: Meter {
            budget: *budget,
            stop,
            stats: SearchStats::default(),
            aborted: false,
        },
        error: None,
    };
    search.dfs(0, 0, 0);
    if let Some(e) = search.error {
        return Err(e);
    }
    let exhausted = !search.meter.aborted;
    let stats = search.meter.stats;
    let (value, witness) = if search.best_choice.is_empty() {
        // Stopped before the first candidate; n copies of [m] always work.
        let full = [SubsetMask::full(m)?];
        let chosen: Vec<&[SubsetMask]> = vec![&full[..]; n];
        (n, instance_from(m, &chosen))
    } else {
        let chosen: Vec<&[SubsetMask]> = search.best_choice.iter().map(|&i| &parts[i][..]).collect();
        (search.best, instance_from(m, &chosen))
    };
    Ok(ExactResult {
        value,
        witness,
        exhausted,
        stats,
    })
}

struct GSearch<'a, 'b> {
    m: usize,
    n: usize,
    parts: &'a [Vec<SubsetMask>],
    cap: u64,
    chosen: Vec<usize>,
    used: BTreeSet<SubsetMask>,
    best: usize,
    best_choice: Vec<usize>,
    meter: Meter<'b>,
    error: Option<Error>,
}

impl GSearch<'_, '_> {
    fn dfs(&mut self, start: usize, size: usize, induced: u64) {
        if self.meter.aborted || self.error.is_some() || !self.meter.node() {
            return;
        }
        if self.chosen.len() == self.n {
            if size > self.best && self.meter.candidate() {
                self.check_leaf(size);
            }
            return;
        }
        let remaining = self.n - self.chosen.len();
        for i in start..self.parts.len() {
            let part = &self.parts[i];
            let d = part.len();
            // Partitions are sorted by size, so nothing later can beat the incumbent.
            if size + remaining * d <= self.best {
                break;
            }
            let add = (1u64 << d) - 2;
            if induced + add > self.cap {
                continue;
            }
            let is_full = d == 1;
            if !is_full && part.iter().any(|c| self.used.contains(c)) {
                continue;
            }
            if !is_full {
                self.used.extend(part.iter().copied());
            }
            self.chosen.push(i);
            self.dfs(if is_full { i } else { i + 1 }, size + d, induced + add);
            self.chosen.pop();
            if !is_full {
                for c in part {
                    self.used.remove(c);
                }
            }
            if self.meter.aborted || self.error.is_some() {
                return;
            }
        }
    }

    fn check_leaf(&mut self, size: usize) {
        let chosen: Vec<&[SubsetMask]> = self.chosen.iter().map(|&i| &self.parts[i][..]).collect();
        let sizes: Vec<usize> = chosen.iter().map(|p| p.len()).collect();
        debug_assert!(subset_criterion(&sizes, self.m).unwrap_or(false));
        let inst = instance_from(self.m, &chosen);
        match oracle_unique(&inst.ms, self.n) {
            Ok(true) => {
                self.best = size;
                self.best_choice = self.chosen.clone();
            }
            Ok(false) => {}
            Err(e) => self.error = Some(e),
        }
    }
}

/// Largest `N` such that `N` set partitions of `[m]`, each with exactly `k`
/// blocks and no component shared, form a uniquely resolvable multiset.
pub fn p_k_search(k: usize, m: usize, budget: &SearchBudget) -> Result<ExactResult> {
    p_k_search_with(k, m, budget, &mut || false)
}

/// [`p_k_search`] with a stop hook. Unique resolvability passes to
/// sub-multisets made of whole classes, so any non-unique prefix is pruned.
pub fn p_k_search_with(
    k: usize,
    m: usize,
    budget: &SearchBudget,
    stop: &mut dyn FnMut() -> bool,
) -> Result<ExactResult> {
    if k < 2 || k > m {
        return Err(Error::Regime(format!("need 2 <= k <= m, got k = {k}, m = {m}")));
    }
    budget.validate()?;
    let parts: Vec<Vec<SubsetMask>> = set_partitions(m)?.into_iter().filter(|p| p.len() == k).collect();
    let per_class = (1u64 << k) - 2;
    let criterion_cap = (((1u64 << m) - 2) / per_class) as usize;
    let mut search = PkSearch {
        m,
        parts: &parts,
        criterion_cap,
        chosen: Vec::new(),
        used: BTreeSet::new(),
        best: Vec::new(),
        meter: Meter {
            budget: *budget,
            stop,
            stats: SearchStats::default(),
            aborted: false,
        },
        error: None,
    };
    search.dfs(0);
    if let Some(e) = search.error {
        return Err(e);
    }
    let mut best = search.best.clone();
    if best.is_empty() {
        // A single class is always uniquely resolvable.
        best.push(0);
    }
    let chosen: Vec<&[SubsetMask]> = best.iter().map(|&i| &parts[i][..]).collect();
    Ok(ExactResult {
        value: best.len(),
        witness: instance_from(m, &chosen),
        exhausted: !search.meter.aborted,
        stats: search.meter.stats,
    })
}

struct PkSearch<'a, 'b> {
    m: usize,
    parts: &'a [Vec<SubsetMask>],
    criterion_cap: usize,
    chosen: Vec<usize>,
    used: BTreeSet<SubsetMask>,
    best: Vec<usize>,
    meter: Meter<'b>,
    error: Option<Error>,
}

impl PkSearch<'_, '_> {
    fn dfs(&mut self, start: usize) {
        if !self.meter.node() || self.error.is_some() {
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.chosen.len() == self.criterion_cap {
            return;
        }
        for i in start..self.parts.len() {
            if self.chosen.len() + (self.parts.len() - i) <= self.best.len() {
                return;
            }
            let part = &self.parts[i];
            if part.iter().any(|c| self.used.contains(c)) {
                continue;
            }
            self.chosen.push(i);
            if !self.meter.candidate() {
                self.chosen.pop();
                return;
            }
            let chosen: Vec<&[SubsetMask]> = self.chosen.iter().map(|&j| &self.parts[j][..]).collect();
            let inst = instance_from(self.m, &chosen);
            match oracle_unique(&inst.ms, self.chosen.len()) {
                Ok(true) => {
                    self.used.extend(part.iter().copied());
                    self.dfs(i + 1);
                    for c in part {
                        self.used.remove(c);
                    }
                }
                Ok(false) => {}
                Err(e) => self.error = Some(e),
            }
            self.chosen.pop();
            if self.meter.aborted || self.error.is_some() {
                return;
            }
        }
    }
}

/// Seeded corpus of balanced multisets for cross-checks.
///
/// Each entry is `n` random set partitions of `[m]` (`2 <= m <= max_m`,
/// `1 <= n <= 4`) shuffled together, so it is resolvable; roughly one in four
/// then has an element moved between two components, which keeps the balance
/// but usually destroys resolvability. Entries never exceed `max_k`
/// components.
pub fn random_balanced_corpus(seed: u64, count: usize, max_m: usize, max_k: usize) -> Vec<(Multiset, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.random_range(2..=max_m.max(2));
        let n = rng.random_range(1..=4usize);
        let mut comps: Vec<u32> = Vec::new();
        for _ in 0..n {
            let mut blocks: Vec<u32> = Vec::new();
            for e in 0..m {
                let b = rng.random_range(0..=blocks.len());
                if b == blocks.len() {
                    blocks.push(0);
                }
                blocks[b] |= 1 << e;
            }
            comps.extend(blocks);
        }
        if comps.len() > max_k {
            continue;
        }
        comps.shuffle(&mut rng);
        if rng.random_ratio(1, 4) {
            perturb(&mut comps, &mut rng);
        }
        let ms = Multiset::new(m, comps.into_iter().map(|b| SubsetMask::from_raw(b, m)).collect())
            .expect("generated masks are over m");
        out.push((ms, n));
    }
    out
}

fn perturb(comps: &mut [u32], rng: &mut ChaCha8Rng) {
    for _ in 0..16 {
        let a = rng.random_range(0..comps.len());
        let b = rng.random_range(0..comps.len());
        let movable = comps[a] & !comps[b];
        if a == b || comps[a].count_ones() < 2 || movable == 0 {
            continue;
        }
        let bit = movable & movable.wrapping_neg();
        comps[a] &= !bit;
        comps[b] |= bit;
        return;
    }
}
