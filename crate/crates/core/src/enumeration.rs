//! Exact weight enumerators, the MacWilliams transform, and logical-Z counts.
//!
//! All counts are arbitrary-precision integers.

use std::fs;
use std::hash::Hasher;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHasher;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{ensure_rank_cap, for_each_in_partition, BitMatrix, BitVec};
use crate::lowweight::{ScanOptions, Scanner};
use crate::trio::GenTrioMatrix;

/// Default cap on the rank of spans enumerated by [`enumerate_span`].
pub const DEFAULT_ENUM_CAP: u32 = 32;

/// Environment variable naming the checkpoint directory for long enumerations.
pub const CACHE_DIR_ENV: &str = "TRIDISTILL_CACHE_DIR";

/// Counts of codewords by Hamming weight: `counts[w]` for `w = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub n: usize,
    pub counts: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn new(n: usize) -> Self {
        WeightEnumerator { n, counts: vec![BigUint::zero(); n + 1] }
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        WeightEnumerator { n: counts.len() - 1, counts: counts.iter().map(|&c| BigUint::from(c)).collect() }
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn get(&self, w: usize) -> BigUint {
        self.counts.get(w).cloned().unwrap_or_default()
    }

    /// Nonzero `(weight, count)` pairs.
    pub fn support(&self) -> Vec<(usize, BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (w, c.clone())).collect()
    }

    /// Smallest nonzero weight with a nonzero count.
    pub fn min_distance(&self) -> Option<usize> {
        self.counts.iter().enumerate().skip(1).find(|(_, c)| !c.is_zero()).map(|(w, _)| w)
    }

    /// JSON array of decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.counts.iter().map(|c| serde_json::Value::String(c.to_string())).collect())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::InvalidInput("enumerator must be a JSON array".into()))?;
        if arr.is_empty() {
            return Err(Error::InvalidInput("enumerator must have at least one entry".into()));
        }
        let counts = arr
            .iter()
            .map(|x| {
                x.as_str()
                    .and_then(|s| s.parse::<BigUint>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("bad enumerator entry {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightEnumerator { n: counts.len() - 1, counts })
    }
}

fn counts_to_enum(n: usize, counts: &[u64]) -> WeightEnumerator {
    WeightEnumerator { n, counts: counts.iter().map(|&c| BigUint::from(c)).collect() }
}

/// Number of leading basis rows fixed per partition.
fn split_bits(rank: usize) -> usize {
    rank.saturating_sub(14).min(12)
}

fn partition_counts(basis: &[BitVec], n: usize, split: usize, part: u64) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for_each_in_partition(basis, split, part, |w| {
        let wt: u32 = w.iter().map(|x| x.count_ones()).sum();
        counts[wt as usize] += 1;
    });
    counts
}

pub fn enumerate_span(m: &BitMatrix) -> Result<WeightEnumerator> {
    enumerate_span_capped(m, DEFAULT_ENUM_CAP)
}

/// Exact enumerator of the row span, partitioned across threads.
pub fn enumerate_span_capped(m: &BitMatrix, cap_rank: u32) -> Result<WeightEnumerator> {
    let basis = m.basis().into_rows();
    ensure_rank_cap(basis.len(), cap_rank)?;
    let n = m.n_cols();
    if basis.is_empty() {
        let mut e = WeightEnumerator::new(n);
        e.counts[0] = BigUint::one();
        return Ok(e);
    }
    let split = split_bits(basis.len());
    let total = (0..1u64 << split)
        .into_par_iter()
        .map(|part| partition_counts(&basis, n, split, part))
        .reduce(|| vec![0u64; n + 1], |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        });
    Ok(counts_to_enum(n, &total))
}

#[derive(Serialize, Deserialize)]
struct PartFile {
    part: u64,
    counts: Vec<u64>,
}

fn basis_fingerprint(basis: &[BitVec]) -> u64 {
    let mut h = FxHasher::default();
    for b in basis {
        h.write_usize(b.len());
        for w in b.words() {
            h.write_u64(*w);
        }
    }
    h.finish()
}

/// Checkpoint directory from [`CACHE_DIR_ENV`], if set.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

/// Like [`enumerate_span_capped`], but stores each finished partition under
/// `dir` and skips partitions already stored. Results do not depend on how
/// many partitions were resumed.
pub fn enumerate_span_checkpointed(m: &BitMatrix, cap_rank: u32, dir: &Path) -> Result<WeightEnumerator> {
    let basis = m.basis().into_rows();
    ensure_rank_cap(basis.len(), cap_rank)?;
    let n = m.n_cols();
    if basis.is_empty() {
        return enumerate_span_capped(m, cap_rank);
    }
    let split = split_bits(basis.len()).max(basis.len().saturating_sub(24).min(16));
    let sub = dir.join(format!("span-{:016x}-{}-{}", basis_fingerprint(&basis), basis.len(), split));
    fs::create_dir_all(&sub)?;
    let results: Vec<Result<Vec<u64>>> = (0..1u64 << split)
        .into_par_iter()
        .map(|part| {
            let path = sub.join(format!("part-{part:05}.json"));
            if let Ok(text) = fs::read_to_string(&path) {
                if let Ok(pf) = serde_json::from_str::<PartFile>(&text) {
                    if pf.part == part && pf.counts.len() == n + 1 {
                        return Ok(pf.counts);
                    }
                }
            }
            let counts = partition_counts(&basis, n, split, part);
            let tmp = path.with_extension("tmp");
            let text = serde_json::to_string(&PartFile { part, counts: counts.clone() })
                .map_err(|e| Error::Io(e.to_string()))?;
            fs::write(&tmp, text)?;
            fs::rename(&tmp, &path)?;
            Ok(counts)
        })
        .collect();
    let mut total = vec![0u64; n + 1];
    for r in results {
        for (x, y) in total.iter_mut().zip(r?) {
            *x += y;
        }
    }
    Ok(counts_to_enum(n, &total))
}

/// Krawtchouk values `K_0(v) ..= K_{max_w}(v)` for length `n`.
pub fn krawtchouk_column(n: usize, v: usize, max_w: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max_w + 1);
    out.push(BigInt::one());
    if max_w == 0 {
        return out;
    }
    let a = BigInt::from(n as i64 - 2 * v as i64);
    out.push(a.clone());
    for w in 1..max_w {
        // (w+1) K_{w+1} = (n - 2v) K_w - (n - w + 1) K_{w-1}
        let num = &a * &out[w] - BigInt::from((n - w + 1) as i64) * &out[w - 1];
        out.push(num / BigInt::from((w + 1) as i64));
    }
    out
}

/// Dual enumerator of a code of dimension `dim`.
pub fn macwilliams(en: &WeightEnumerator, dim: usize) -> Result<WeightEnumerator> {
    macwilliams_low(en, dim, en.n)
}

/// MacWilliams transform restricted to weights `0..=max_w`; entries above
/// `max_w` are left at zero.
pub fn macwilliams_low(en: &WeightEnumerator, dim: usize, max_w: usize) -> Result<WeightEnumerator> {
    let n = en.n;
    let max_w = max_w.min(n);
    if en.total() != BigUint::one() << dim {
        return Err(Error::InvalidInput(format!("enumerator total is not 2^{dim}")));
    }
    let mut acc = vec![BigInt::zero(); max_w + 1];
    for (v, c) in en.counts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = BigInt::from_biguint(Sign::Plus, c.clone());
        for (w, k) in krawtchouk_column(n, v, max_w).into_iter().enumerate() {
            acc[w] += &c * k;
        }
    }
    let mut out = WeightEnumerator::new(n);
    let denom = BigInt::one() << dim;
    for (w, a) in acc.into_iter().enumerate() {
        let q = &a / &denom;
        if &q * &denom != a || a.is_negative() {
            return Err(Error::NonIntegerOutput(w));
        }
        out.counts[w] = q.to_biguint().expect("non-negative");
    }
    Ok(out)
}

/// How a logical-Z count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountRoute {
    /// Direct weight-d scan of `G0^⊥`.
    Exhaustive,
    /// Dual enumerators of both `span(G0)` and `span(G)`.
    MacWilliams,
    /// Dual enumerator of `span(G0)` only; valid below the minimum Z-stabilizer weight.
    MacWilliamsG0Only,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoutePolicy {
    Auto,
    Force(CountRoute),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalCount {
    pub weight: usize,
    pub value: BigUint,
    pub route: CountRoute,
}

/// Operation budget for the exhaustive route under [`RoutePolicy::Auto`].
pub const EXHAUSTIVE_BUDGET: f64 = 2e9;

#[derive(Clone, Debug)]
pub struct CountOptions {
    pub policy: RoutePolicy,
    /// Known lower bound on the weight of any nonzero Z-stabilizer (`span(G)^⊥`).
    pub min_stabilizer_weight: Option<usize>,
    pub enum_cap: u32,
    pub checkpoint_dir: Option<PathBuf>,
    pub scan: ScanOptions,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            policy: RoutePolicy::Auto,
            min_stabilizer_weight: None,
            enum_cap: DEFAULT_ENUM_CAP,
            checkpoint_dir: None,
            scan: ScanOptions::default(),
        }
    }
}

fn enumerate_with(m: &BitMatrix, opts: &CountOptions) -> Result<WeightEnumerator> {
    match &opts.checkpoint_dir {
        Some(dir) => enumerate_span_checkpointed(m, opts.enum_cap, dir),
        None => enumerate_span_capped(m, opts.enum_cap),
    }
}

/// `A_d`: weight-`d` vectors of `G0^⊥` outside `span(G)^⊥`.
pub fn count_logical_z(g: &GenTrioMatrix, d: usize, opts: &CountOptions) -> Result<LogicalCount> {
    let route = match opts.policy {
        RoutePolicy::Force(r) => r,
        RoutePolicy::Auto => {
            let cost = crate::lowweight::scan_cost(g.n(), d, opts.scan.max_entries);
            let g0_rank = g.g0().rank();
            let full_rank = g.full_matrix().rank();
            if d <= crate::lowweight::MAX_SCAN_WEIGHT && cost <= EXHAUSTIVE_BUDGET {
                CountRoute::Exhaustive
            } else if full_rank as u32 <= opts.enum_cap {
                CountRoute::MacWilliams
            } else if g0_rank as u32 <= opts.enum_cap && opts.min_stabilizer_weight.is_some_and(|s| d < s) {
                CountRoute::MacWilliamsG0Only
            } else {
                return Err(Error::Infeasible(format!(
                    "no route for A_{d}: scan cost {cost:.2e} exceeds {EXHAUSTIVE_BUDGET:.0e}, \
                     rank(G) = {full_rank} and rank(G0) = {g0_rank} vs enumeration cap {}, \
                     stabilizer weight bound {:?}",
                    opts.enum_cap, opts.min_stabilizer_weight
                )));
            }
        }
    };
    let value = match route {
        CountRoute::Exhaustive => {
            let s = Scanner::new(g.g0(), &g.logical_rows())?.scan(d, &opts.scan)?;
            BigUint::from(s.logical)
        }
        CountRoute::MacWilliams => {
            let g0 = g.g0();
            let full = g.full_matrix();
            let e0 = macwilliams_low(&enumerate_with(g0, opts)?, g0.rank(), d)?;
            let ef = macwilliams_low(&enumerate_with(&full, opts)?, full.rank(), d)?;
            let (a, b) = (e0.get(d), ef.get(d));
            if b > a {
                return Err(Error::NonIntegerOutput(d));
            }
            a - b
        }
        CountRoute::MacWilliamsG0Only => {
            match opts.min_stabilizer_weight {
                Some(s) if d < s => {}
                _ => {
                    return Err(Error::Infeasible(format!(
                        "G0-only route needs d below the stabilizer weight bound, got d={d}, bound {:?}",
                        opts.min_stabilizer_weight
                    )))
                }
            }
            let g0 = g.g0();
            macwilliams_low(&enumerate_with(g0, opts)?, g0.rank(), d)?.get(d)
        }
    };
    Ok(LogicalCount { weight: d, value, route })
}

/// Number of minimum-weight codewords of RM(2m/3, m), `d = 2^(m/3)`.
pub fn a_d_closed_form(m: usize) -> Result<BigUint> {
    if !m.is_multiple_of(3) || m == 0 {
        return Err(Error::InvalidInput(format!("m must be a positive multiple of 3, got {m}")));
    }
    let mu = m / 3;
    let two = |e: usize| BigUint::one() << e;
    let mut num = two(m);
    let mut den = two(mu);
    for i in 0..mu {
        num *= two(m) - two(i);
        den *= two(mu) - two(i);
    }
    Ok(num / den)
}

/// True when every nonzero weight strictly between `d` and `2d` has the form `2d − 2^i`.
pub fn weight_gap_check(en: &WeightEnumerator, d: usize) -> bool {
    ((d + 1)..(2 * d).min(en.n + 1)).all(|w| en.counts[w].is_zero() || is_gap_weight(w, d))
}

fn is_gap_weight(w: usize, d: usize) -> bool {
    let gap = 2 * d - w;
    gap.is_power_of_two()
}

/// Sampled variant of [`weight_gap_check`] for spans too large to enumerate.
pub fn weight_gap_check_sampled(m: &BitMatrix, d: usize, samples: usize, seed: u64) -> bool {
    let basis = m.basis().into_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let mut v = BitVec::zeros(m.n_cols());
        for b in &basis {
            if rng.random::<bool>() {
                v.xor_assign(b);
            }
        }
        let w = v.weight();
        w <= d || w >= 2 * d || is_gap_weight(w, d)
    })
}

/// Converts to f64 for reporting.
pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
