//! Exact solution-space counting and wall-clock feasibility estimation.
//!
//! All counts are arbitrary-precision integers; nothing here overflows no
//! matter how large the instance. Time estimates divide a count across a
//! [`ComputeBudget`] and are kept as exact rationals internally so that
//! display rounding is decided on true decimal digits rather than on a
//! lossy float.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

/// Arbitrary-precision non-negative count of orderings, partitions, or tests.
pub type BigCount = BigUint;

/// Seconds in a 365.25-day year.
pub const SECONDS_PER_YEAR: u64 = 31_557_600;

/// Largest `n` retained in the shared dense Stirling memo table. Larger
/// arguments are computed with rolling rows and not cached.
pub const STIRLING_TABLE_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombinatoricsError {
    #[error("multigroup solution total requires at least 2 assemblages, got {0}")]
    TooFewAssemblages(usize),
    #[error("compute budget requires a positive core count")]
    NonPositiveCores,
    #[error("compute budget requires a positive, finite seconds-per-test, got {0}")]
    BadSecondsPerTest(f64),
}

/// Parallel testing capacity assumed when estimating wall-clock time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComputeBudget {
    cores: u32,
    seconds_per_test: f64,
}

impl Default for ComputeBudget {
    fn default() -> Self {
        Self { cores: 64, seconds_per_test: 0.005 }
    }
}

impl ComputeBudget {
    pub fn new(cores: u32, seconds_per_test: f64) -> Result<Self, CombinatoricsError> {
        if cores == 0 {
            return Err(CombinatoricsError::NonPositiveCores);
        }
        if !(seconds_per_test.is_finite() && seconds_per_test > 0.0) {
            return Err(CombinatoricsError::BadSecondsPerTest(seconds_per_test));
        }
        Ok(Self { cores, seconds_per_test })
    }

    pub fn cores(&self) -> u32 {
        self.cores
    }

    pub fn seconds_per_test(&self) -> f64 {
        self.seconds_per_test
    }
}

/// Estimated wall-clock time to test a number of candidate solutions.
///
/// Held as the exact rational `seconds = num / den`; counts routinely exceed
/// the range of any fixed-width float, so conversion to `f64` (which may
/// saturate to infinity) happens only in the accessors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeEstimate {
    num: BigUint,
    den: BigUint,
}

impl TimeEstimate {
    /// Estimated seconds, saturating to infinity beyond `f64` range.
    pub fn seconds(&self) -> f64 {
        ratio_to_f64(&self.num, &self.den)
    }

    /// Estimated years (365.25-day years), saturating like [`Self::seconds`].
    pub fn years(&self) -> f64 {
        ratio_to_f64(&self.num, &(&self.den * SECONDS_PER_YEAR))
    }

    /// Seconds rendered at `sig` significant digits (see [`format_count`]).
    pub fn seconds_display(&self, sig: usize) -> String {
        format_sig(&SigDigits::from_ratio(&self.num, &self.den, sig + 8), sig)
    }

    /// Years rendered at `sig` significant digits.
    pub fn years_display(&self, sig: usize) -> String {
        let den = &self.den * SECONDS_PER_YEAR;
        format_sig(&SigDigits::from_ratio(&self.num, &den, sig + 8), sig)
    }

    #[cfg(test)]
    fn ratio(&self) -> (&BigUint, &BigUint) {
        (&self.num, &self.den)
    }
}

/// `n!`.
pub fn factorial(n: usize) -> BigCount {
    let mut acc = BigUint::from(1u32);
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Number of distinct seriation solutions of `n` assemblages: `n!/2`, since
/// an ordering and its mirror image are the same solution. A set of zero or
/// one assemblages has exactly one (empty or singleton) ordering.
pub fn unique_seriation_count(n: usize) -> BigCount {
    if n < 2 {
        return BigUint::from(1u32);
    }
    factorial(n) / 2u32
}

/// Triangular table of Stirling numbers of the second kind, built row by row
/// from the recursion `S(n,m) = m S(n-1,m) + S(n-1,m-1)`.
///
/// Build the table once (single-threaded), then share it freely: all reads
/// are immutable.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigCount>>,
}

impl StirlingTable {
    pub fn new() -> Self {
        Self { rows: vec![vec![BigUint::from(1u32)]] }
    }

    /// Highest `n` currently built.
    pub fn built(&self) -> usize {
        self.rows.len() - 1
    }

    /// Extend the table so rows `0..=n` are available.
    pub fn ensure(&mut self, n: usize) {
        while self.built() < n {
            let i = self.rows.len();
            let prev = &self.rows[i - 1];
            let mut row = Vec::with_capacity(i + 1);
            row.push(BigUint::zero());
            for m in 1..=i {
                let mut v = prev[m - 1].clone();
                if m < i {
                    v += &prev[m] * m;
                }
                row.push(v);
            }
            self.rows.push(row);
        }
    }

    /// `S(n, m)` for any `m` (zero when `m > n`). Panics if row `n` has not
    /// been built.
    pub fn value(&self, n: usize, m: usize) -> BigCount {
        if m > n {
            return BigUint::zero();
        }
        self.rows[n][m].clone()
    }

    fn row(&self, n: usize) -> &[BigCount] {
        &self.rows[n]
    }
}

impl Default for StirlingTable {
    fn default() -> Self {
        Self::new()
    }
}

fn shared_table() -> &'static RwLock<StirlingTable> {
    static TABLE: OnceLock<RwLock<StirlingTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(StirlingTable::new()))
}

fn with_shared_row<T>(n: usize, f: impl FnOnce(&[BigCount]) -> T) -> T {
    {
        let table = shared_table().read().unwrap();
        if table.built() >= n {
            return f(table.row(n));
        }
    }
    let mut table = shared_table().write().unwrap();
    table.ensure(n);
    f(table.row(n))
}

/// Stirling number of the second kind: the number of ways to partition `n`
/// items into exactly `m` non-empty unlabeled subsets.
///
/// Memoized in a shared dense table up to [`STIRLING_TABLE_CAP`]; larger
/// arguments are computed with rolling rows.
pub fn stirling2(n: usize, m: usize) -> BigCount {
    if m > n {
        return BigUint::zero();
    }
    if n <= STIRLING_TABLE_CAP {
        return with_shared_row(n, |row| row[m].clone());
    }
    stirling2_rolling(n, m)
}

/// `S(n, m)` without the memo table; only columns `0..=m` are carried.
fn stirling2_rolling(n: usize, m: usize) -> BigCount {
    debug_assert!(m <= n);
    let mut prev = vec![BigUint::zero(); m + 1];
    prev[0] = BigUint::from(1u32);
    for i in 1..=n {
        let mut cur = vec![BigUint::zero(); m + 1];
        let hi = m.min(i);
        for j in 1..=hi {
            cur[j] = &prev[j] * j + &prev[j - 1];
        }
        prev = cur;
    }
    prev[m].clone()
}

/// Total set partitions of `n` items over every possible group count
/// (the Bell number): the sum of `S(n, i)` for `i` in `1..=n`.
pub fn all_partitions_count(n: usize) -> BigCount {
    if n <= STIRLING_TABLE_CAP {
        return with_shared_row(n, |row| row[1..].iter().sum());
    }
    let mut prev = vec![BigUint::zero(); n + 1];
    prev[0] = BigUint::from(1u32);
    for i in 1..=n {
        let mut cur = vec![BigUint::zero(); n + 1];
        for j in 1..=i {
            cur[j] = &prev[j] * j + &prev[j - 1];
        }
        prev = cur;
    }
    prev[1..].iter().sum()
}

/// Worst-case total of candidate solutions in the multiple-solution-group
/// problem: `sum over m of S(n,m) * (n-m-1)!`, skipping terms whose factorial
/// argument would be negative (those terms have no defined contribution and
/// the published totals are only consistent with omitting them).
pub fn total_multigroup_solutions(n: usize) -> Result<BigCount, CombinatoricsError> {
    if n < 2 {
        return Err(CombinatoricsError::TooFewAssemblages(n));
    }
    // Factorials (n-m-1)! for m in 1..=n-1, i.e. 0! ..= (n-2)!.
    let mut fact = Vec::with_capacity(n - 1);
    fact.push(BigUint::from(1u32));
    for i in 1..=n - 2 {
        let next = &fact[i - 1] * i;
        fact.push(next);
    }
    let total = with_shared_row(n, |row| {
        let mut total = BigUint::zero();
        for m in 1..=n - 1 {
            total += &row[m] * &fact[n - 1 - m];
        }
        total
    });
    Ok(total)
}

/// The `m` in `1..=n` maximizing `S(n, m)`; the smallest such `m` on ties.
pub fn stirling_row_argmax(n: usize) -> usize {
    assert!(n >= 1, "argmax needs a non-empty row");
    with_shared_row(n.min(STIRLING_TABLE_CAP), |_| ());
    let row: Vec<BigCount> = if n <= STIRLING_TABLE_CAP {
        with_shared_row(n, |row| row.to_vec())
    } else {
        (0..=n).map(|m| stirling2_rolling(n, m)).collect()
    };
    let mut best = 1;
    for m in 2..=n {
        if row[m] > row[best] {
            best = m;
        }
    }
    best
}

/// Wall-clock estimate for testing `count` candidate solutions under a
/// budget: `seconds = count * seconds_per_test / cores`.
pub fn estimate_time(count: &BigCount, budget: &ComputeBudget) -> TimeEstimate {
    let (pt_digits, pt_scale) = decimal_parts(budget.seconds_per_test);
    let num = count * pt_digits;
    let den = BigUint::from(10u32).pow(pt_scale) * budget.cores;
    TimeEstimate { num, den }
}

/// Render a count at `sig` significant digits using the display convention
/// of the solution-space tables: values whose decimal exponent is below
/// `sig` print in plain notation ("12", "26"), everything else in scientific
/// notation with a lowercase `e`, an explicit exponent sign, and trailing
/// zeros trimmed ("5.8e+08", "2e+04").
pub fn format_count(c: &BigCount, sig: usize) -> String {
    format_sig(&SigDigits::from_uint(c), sig)
}

/// Render a non-negative float with the same convention as [`format_count`].
pub fn format_value(v: f64, sig: usize) -> String {
    assert!(v >= 0.0 && v.is_finite());
    format_sig(&SigDigits::from_f64(v), sig)
}

/// Decompose a positive float into `(digits, scale)` with
/// `value = digits / 10^scale`, via its shortest round-trip decimal form.
fn decimal_parts(value: f64) -> (BigUint, u32) {
    debug_assert!(value.is_finite() && value > 0.0);
    let text = format!("{value}");
    debug_assert!(!text.contains(['e', 'E']), "f64 Display stays decimal");
    match text.split_once('.') {
        Some((int, frac)) => {
            let digits: BigUint = format!("{int}{frac}").parse().unwrap();
            (digits, frac.len() as u32)
        }
        None => (text.parse().unwrap(), 0),
    }
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sd = SigDigits::from_ratio(num, den, 19);
    sd.to_f64()
}

/// Maximum significant digits retained; rounding beyond this is decided by
/// the inexact-tail flag.
const MAX_KEPT_DIGITS: usize = 40;

/// Leading decimal digits of a non-negative value: `value = d0.d1d2... x 10^exp10`.
///
/// `inexact` records that nonzero digits were dropped past the kept ones, so
/// ties in rounding can still be resolved exactly.
struct SigDigits {
    digits: Vec<u8>,
    exp10: i64,
    inexact: bool,
}

impl SigDigits {
    fn zero() -> Self {
        Self { digits: Vec::new(), exp10: 0, inexact: false }
    }

    fn from_uint(v: &BigUint) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        Self::from_digit_string(&v.to_string(), 0)
    }

    fn from_f64(v: f64) -> Self {
        debug_assert!(v >= 0.0 && v.is_finite());
        if v == 0.0 {
            return Self::zero();
        }
        let (digits, scale) = decimal_parts(v);
        Self::from_digit_string(&digits.to_string(), -(scale as i64))
    }

    /// Digits of `num / den`, carrying at least `want` significant digits.
    fn from_ratio(num: &BigUint, den: &BigUint, want: usize) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let nd = decimal_len(num);
        let dd = decimal_len(den);
        let shift = (want as i64 + dd as i64 - nd as i64 + 2).max(0) as u32;
        let scaled = num * BigUint::from(10u32).pow(shift);
        let q = &scaled / den;
        let r = &scaled % den;
        let qs = q.to_string();
        let exp10 = qs.len() as i64 - 1 - shift as i64;
        let mut sd = Self::from_digit_string(&qs, 0);
        sd.exp10 = exp10;
        sd.inexact |= !r.is_zero();
        sd
    }

    /// `text` is a plain digit string valued `text x 10^tail_exp`.
    fn from_digit_string(text: &str, tail_exp: i64) -> Self {
        let bytes = text.as_bytes();
        debug_assert!(bytes.iter().all(u8::is_ascii_digit) && bytes[0] != b'0');
        let exp10 = bytes.len() as i64 - 1 + tail_exp;
        let kept = bytes.len().min(MAX_KEPT_DIGITS);
        let digits: Vec<u8> = bytes[..kept].iter().map(|b| b - b'0').collect();
        let inexact = bytes[kept..].iter().any(|&b| b != b'0');
        Self { digits, exp10, inexact }
    }

    fn to_f64(&self) -> f64 {
        if self.digits.is_empty() {
            return 0.0;
        }
        let take = self.digits.len().min(18);
        let mut mantissa = 0.0f64;
        for &d in &self.digits[..take] {
            mantissa = mantissa * 10.0 + d as f64;
        }
        mantissa *= 10f64.powi(-(take as i32 - 1));
        if self.exp10 > 350 {
            return f64::INFINITY;
        }
        if self.exp10 < -350 {
            return 0.0;
        }
        mantissa * 10f64.powi(self.exp10 as i32)
    }
}

fn decimal_len(v: &BigUint) -> usize {
    v.to_string().len()
}

/// Round to `sig` significant digits and render; plain notation when the
/// decimal exponent lies in `[-4, sig)`, scientific otherwise.
fn format_sig(sd: &SigDigits, sig: usize) -> String {
    assert!(sig >= 1);
    if sd.digits.is_empty() {
        return "0".to_string();
    }
    let mut digits = sd.digits.clone();
    let mut exp = sd.exp10;

    if digits.len() > sig {
        let head = digits[sig];
        let tail_nonzero = digits[sig + 1..].iter().any(|&d| d != 0) || sd.inexact;
        let round_up = match head.cmp(&5) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => tail_nonzero || digits[sig - 1] % 2 == 1,
        };
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    exp += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    digits.resize(sig, 0);

    if exp < -4 || exp >= sig as i64 {
        let mut frac = digits[1..].to_vec();
        while frac.last() == Some(&0) {
            frac.pop();
        }
        let mut out = digit_str(&digits[..1]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(&digit_str(&frac));
        }
        let sign = if exp < 0 { '-' } else { '+' };
        out.push_str(&format!("e{sign}{:02}", exp.abs()));
        out
    } else if exp >= 0 {
        let split = exp as usize + 1;
        let mut frac = digits[split..].to_vec();
        while frac.last() == Some(&0) {
            frac.pop();
        }
        let mut out = digit_str(&digits[..split]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(&digit_str(&frac));
        }
        out
    } else {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        let zeros = (-exp - 1) as usize;
        format!("0.{}{}", "0".repeat(zeros), digit_str(&digits))
    }
}

fn digit_str(digits: &[u8]) -> String {
    digits.iter().map(|d| (d + b'0') as char).collect()
}
