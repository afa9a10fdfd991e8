//! Closed-form values for the extremal size `g(n, m)`.
//!
//! Everything here is arithmetic on `n` and `m`; nothing is constructed. The
//! helpers accept `m` up to 62 so that tables can run past the resolver's cap.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::constructions::{
    best_size_arith, central_capacity, log_ratio_class_size, mixed_range, pair_count,
};
use crate::error::{Error, Result};

const MAX_BOUNDS_M: usize = 62;

fn check_nm(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!("need n, m >= 1, got n = {n}, m = {m}")));
    }
    if m > MAX_BOUNDS_M {
        return Err(Error::Domain(format!("m = {m} exceeds {MAX_BOUNDS_M}")));
    }
    Ok(())
}

fn check_small_regime(n: usize, m: usize) -> Result<()> {
    check_nm(n, m)?;
    if m < 2 || n as u64 > pair_count(m) {
        return Err(Error::Regime(format!(
            "need 1 <= n <= 2^(m-1) - 1, got n = {n}, m = {m}; use exact_value"
        )));
    }
    Ok(())
}

/// `log2(x)`, exact when `x` is a power of two.
pub fn log2_exact(x: u64) -> f64 {
    if x.is_power_of_two() {
        x.trailing_zeros() as f64
    } else {
        libm::log2(x as f64)
    }
}

/// `H(x) = -x log2 x - (1-x) log2 (1-x)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "binary entropy needs 0 <= x <= 1, got {x}"
        )));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * libm::log2(p) };
    Ok(term(x) + term(1.0 - x))
}

/// `C(m, i)` for small arguments.
pub fn binomial(m: u64, i: u64) -> u128 {
    if i > m {
        return 0;
    }
    let i = i.min(m - i);
    (0..i).fold(1u128, |acc, j| acc * (m - j) as u128 / (j + 1) as u128)
}

/// Number of subsets of `[m]` with at most `floor(m/k)` elements, next to its
/// entropy cap `2^(m H(1/k))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HammingBall {
    pub exact_sum: u128,
    pub entropy_cap: f64,
}

impl HammingBall {
    pub fn holds(&self) -> bool {
        self.exact_sum as f64 <= self.entropy_cap
    }
}

pub fn hamming_ball_bound(m: usize, k: usize) -> Result<HammingBall> {
    if k < 2 {
        return Err(Error::Domain(format!("hamming ball bound needs k >= 2, got {k}")));
    }
    check_nm(1, m)?;
    let exact_sum = (0..=(m / k) as u64).map(|i| binomial(m as u64, i)).sum();
    let entropy_cap = libm::exp2(m as f64 * binary_entropy(1.0 / k as f64)?);
    Ok(HammingBall {
        exact_sum,
        entropy_cap,
    })
}

/// Constructive and analytic lower bounds for `n <= 2^(m-1) - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBound {
    /// `k_used * n`, realised by the central (or pair) construction.
    pub constructive: u64,
    /// `n (m + 1) / (log2(n + 1) + 2)`.
    pub analytic: f64,
    pub k_used: usize,
    /// Whether `k_used` is the log-ratio class size rather than the `k = 2`
    /// fallback. When it is, `constructive > analytic`.
    pub log_ratio_k: bool,
}

impl LowerBound {
    /// `constructive > analytic`, decided as `k L > m + 1` with
    /// `L = log2(n + 1) + 2` to avoid a division.
    pub fn strictly_exceeds_analytic(&self, m: usize) -> bool {
        let n = self.constructive / self.k_used as u64;
        self.k_used as f64 * (log2_exact(n + 1) + 2.0) > (m + 1) as f64
    }
}

pub fn lower_bound(n: usize, m: usize) -> Result<LowerBound> {
    check_small_regime(n, m)?;
    let denom = log2_exact(n as u64 + 1) + 2.0;
    let analytic = n as f64 * (m as f64 + 1.0) / denom;
    let k = log_ratio_class_size(n, m);
    let fits = central_capacity(m, k).is_some_and(|cap| n as u64 <= cap);
    let (k_used, log_ratio_k) = if fits { (k, true) } else { (2, false) };
    Ok(LowerBound {
        constructive: (k_used * n) as u64,
        analytic,
        k_used,
        log_ratio_k,
    })
}

/// Which argument produced an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperSource {
    /// Smallest `k` with `n > 2^(m H(1/k))` gives `g <= k n`.
    EntropyScan,
    /// `(n/c)(6 - 3.2 log2 c)` with `c = log2(n)/m`.
    LogRatio,
    /// `n m`: every component is non-empty and there are `n m` element slots.
    TrivialCap,
    /// A known exact value.
    Exact,
}

impl UpperSource {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::EntropyScan => "entropy-scan",
            Self::LogRatio => "log-ratio",
            Self::TrivialCap => "trivial-cap",
            Self::Exact => "exact",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpperBound {
    pub value: u64,
    /// The scan's `k` when [`UpperSource::EntropyScan`] gives the minimum.
    pub k_used: Option<usize>,
    pub source: UpperSource,
}

/// Smallest `k` in `2..=m` with `n > 2^(m H(1/k))`.
pub fn entropy_scan_k(n: usize, m: usize) -> Option<usize> {
    let log_n = log2_exact(n as u64);
    (2..=m).find(|&k| {
        let h = binary_entropy(1.0 / k as f64).expect("1/k lies in [0, 1]");
        log_n > m as f64 * h
    })
}

/// `c = log2(n) / m`, the exponent with `n = 2^(c m)`.
pub fn density_exponent(n: usize, m: usize) -> f64 {
    log2_exact(n as u64) / m as f64
}

/// `ceil((n/c)(6 - 3.2 log2 c))`, defined for `n >= 2` and `c < 1`.
pub fn log_ratio_upper(n: usize, m: usize) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let c = density_exponent(n, m);
    if c >= 1.0 {
        return None;
    }
    Some(libm::ceil(n as f64 / c * (6.0 - 3.2 * libm::log2(c))) as u64)
}

/// The class size `ceil((1.6/eps) ln(1/eps))`, `eps = c ln 2 / 2`, whose
/// entropy condition underlies [`log_ratio_upper`].
pub fn log_ratio_scan_k(n: usize, m: usize) -> Option<usize> {
    log_ratio_upper(n, m)?;
    let eps = density_exponent(n, m) * core::f64::consts::LN_2 / 2.0;
    Some(libm::ceil(1.6 / eps * libm::log(1.0 / eps)) as usize)
}

pub fn upper_bound(n: usize, m: usize) -> Result<UpperBound> {
    check_small_regime(n, m)?;
    let mut best = UpperBound {
        value: n as u64 * m as u64,
        k_used: None,
        source: UpperSource::TrivialCap,
    };
    let mut offer = |value: u64, k_used: Option<usize>, source: UpperSource| {
        if value < best.value {
            best = UpperBound {
                value,
                k_used,
                source,
            };
        }
    };
    if let Some(k) = entropy_scan_k(n, m) {
        offer((k * n) as u64, Some(k), UpperSource::EntropyScan);
    }
    if let Some(v) = log_ratio_upper(n, m) {
        offer(v, None, UpperSource::LogRatio);
    }
    if let Some(v) = exact_value(n, m) {
        offer(v, None, UpperSource::Exact);
    }
    Ok(best)
}

/// `g(n, m)` where it is known in closed form:
///
/// - `n = 1`: `m` (one class, all singletons),
/// - `n = 2`: `m + 1`,
/// - `n >= 2^(m-1) - 1`: `n + 2^(m-1) - 1`,
/// - `m >= 4` and `2^(m-1) + 1 - 2^floor(m/2) <= n <= 2^(m-1) - 1`:
///   `2n + floor((2^(m-1) - 1 - n) / 2)`.
pub fn exact_value(n: usize, m: usize) -> Option<u64> {
    check_nm(n, m).ok()?;
    let (n64, pairs) = (n as u64, pair_count(m));
    if n == 1 {
        return Some(m as u64);
    }
    if n == 2 {
        return Some(m as u64 + 1);
    }
    if n64 >= pairs {
        return Some(n64 + pairs);
    }
    match mixed_range(m) {
        Some((lo, hi)) if (lo..=hi).contains(&n64) => Some(2 * n64 + (pairs - n64) / 2),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    NEquals2,
    /// `n <= 2^(m-1) - 1`, no closed form.
    Small,
    /// `2^(m-1) + 1 - 2^floor(m/2) <= n < 2^(m-1) - 1`, `m >= 4`.
    NearBoundary,
    /// `n >= 2^(m-1) - 1`.
    AtOrAboveBoundary,
}

impl Regime {
    pub fn classify(n: usize, m: usize) -> Self {
        let (n64, pairs) = (n as u64, pair_count(m));
        if n == 2 {
            Self::NEquals2
        } else if n64 >= pairs {
            Self::AtOrAboveBoundary
        } else if mixed_range(m).is_some_and(|(lo, _)| n64 >= lo) {
            Self::NearBoundary
        } else {
            Self::Small
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::NEquals2 => "N_EQUALS_2",
            Self::Small => "SMALL",
            Self::NearBoundary => "NEAR_BOUNDARY",
            Self::AtOrAboveBoundary => "AT_OR_ABOVE_BOUNDARY",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything known about `g(n, m)` in one row.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    /// Size of the best explicit construction.
    pub lower: u64,
    /// `n (m + 1) / (log2(n + 1) + 2)` when `n <= 2^(m-1) - 1`.
    pub lower_analytic: Option<f64>,
    pub upper: u64,
    pub exact: Option<u64>,
    pub regime: Regime,
    /// Short tags naming the argument behind each number.
    pub sources: Vec<String>,
}

pub fn bounds_report(n: usize, m: usize) -> Result<BoundsReport> {
    check_nm(n, m)?;
    let exact = exact_value(n, m);
    let (lower, provenance, k) = best_size_arith(n, m);
    let mut sources = Vec::new();
    sources.push(if k > 0 {
        format!("lower:{provenance}(k={k})")
    } else {
        format!("lower:{provenance}")
    });
    let small = m >= 2 && n as u64 <= pair_count(m);
    let lower_analytic = if small {
        Some(lower_bound(n, m)?.analytic)
    } else {
        None
    };
    let upper = if small {
        let ub = upper_bound(n, m)?;
        sources.push(match ub.k_used {
            Some(k) => format!("upper:{}(k={k})", ub.source.as_str()),
            None => format!("upper:{}", ub.source.as_str()),
        });
        ub.value
    } else {
        sources.push("upper:exact".into());
        exact.expect("exact value known at or above the boundary")
    };
    if let Some(e) = exact {
        let tag = match n {
            1 => "exact:single-class",
            2 => "exact:two-class",
            _ if !small || n as u64 == pair_count(m) => "exact:boundary-shift",
            _ => "exact:near-boundary",
        };
        sources.push(tag.into());
        debug_assert!(lower <= e && e <= upper);
    }
    debug_assert!(lower <= upper);
    Ok(BoundsReport {
        n,
        m,
        lower,
        lower_analytic,
        upper,
        exact,
        regime: Regime::classify(n, m),
        sources,
    })
}
