//! Exhaustive low-weight search in `G0^⊥` by meet in the middle.
//!
//! A weight-`w` vector `u` with sorted support `i_1 < ... < i_w` is split into
//! a left part (the `w - w/2` smallest indices) and a right part (the rest).
//! Right parts are tabulated by their `G0` syndrome; every left part is then
//! matched against table entries whose smallest index exceeds the left part's
//! largest. Each `u` is therefore met exactly once.
//!
//! Logical syndromes are compressed into a 64-bit linear fingerprint. A
//! nonzero fingerprint proves a nonzero syndrome; a zero fingerprint is
//! rechecked exactly, so counts are exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHasher};
use std::hash::{Hash, Hasher};

use crate::error::{check_len, Error, Result};
use crate::f2::{words_for, BitMatrix, BitVec};

/// Largest weight the scanner accepts.
pub const MAX_SCAN_WEIGHT: usize = 8;
/// Largest `G0` rank supported (syndrome words are fixed-size arrays).
pub const MAX_SYNDROME_WORDS: usize = 8;
/// Default number of table entries held in memory per pass.
pub const DEFAULT_MAX_ENTRIES: usize = 4 << 20;

#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Keep up to this many logical vectors (as supports) in the result.
    pub collect_logicals: usize,
    /// Bound on table entries per pass; larger tables are split into passes.
    pub max_entries: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { collect_logicals: 0, max_entries: DEFAULT_MAX_ENTRIES }
    }
}

/// Counts for one weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightScan {
    pub weight: usize,
    /// Weight-`w` vectors in `G0^⊥`.
    pub in_dual: u64,
    /// Those among them with a nonzero logical syndrome.
    pub logical: u64,
    /// Supports of logical vectors, at most `collect_logicals` of them, in a
    /// deterministic order.
    pub logicals: Vec<Vec<usize>>,
}

impl WeightScan {
    /// Weight-`w` vectors with zero logical syndrome (`span(G)^⊥` members).
    pub fn stabilizers(&self) -> u64 {
        self.in_dual - self.logical
    }
}

pub(crate) fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of passes needed to keep each pass under `max_entries` table entries.
pub fn passes_needed(n: usize, w: usize, max_entries: usize) -> usize {
    let q = w / 2;
    (binom_f64(n, q) / max_entries.max(1) as f64).ceil().max(1.0) as usize
}

/// Rough operation count of a weight-`w` scan: left subsets times passes plus table size.
pub fn scan_cost(n: usize, w: usize, max_entries: usize) -> f64 {
    let p = w - w / 2;
    let q = w / 2;
    binom_f64(n, p) * passes_needed(n, w, max_entries) as f64 + binom_f64(n, q)
}

/// Prepared column data for repeated scans of one code.
pub struct Scanner {
    n: usize,
    g0_words: usize,
    g0_cols: Vec<Vec<u64>>,
    fps: Vec<u64>,
    logical_cols: Vec<Vec<u64>>,
    exact_fp: bool,
}

impl Scanner {
    /// `g0` and `logical` must share the column count `n`.
    pub fn new(g0: &BitMatrix, logical: &BitMatrix) -> Result<Self> {
        let n = if g0.n_rows() > 0 { g0.n_cols() } else { logical.n_cols() };
        if g0.n_rows() > 0 && logical.n_rows() > 0 {
            check_len(n, logical.n_cols())?;
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidInput("code length too large".into()));
        }
        let g0b = g0.basis();
        let g0_words = words_for(g0b.n_rows()).max(1);
        if g0_words > MAX_SYNDROME_WORDS {
            return Err(Error::CapExceeded {
                what: "rank of G0 for low-weight scan".into(),
                value: g0b.n_rows() as u128,
                cap: (MAX_SYNDROME_WORDS * 64) as u128,
            });
        }
        let mut g0_cols = if g0b.n_rows() == 0 { vec![vec![0u64]; n] } else { g0b.column_words() };
        for c in &mut g0_cols {
            c.resize(g0_words, 0);
        }
        let lb = logical.basis();
        let logical_cols = if lb.n_rows() == 0 { vec![Vec::new(); n] } else { lb.column_words() };
        let k = lb.n_rows();
        let exact_fp = k <= 64;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1_ab1e);
        let basis_fp: Vec<u64> = (0..k).map(|i| if exact_fp { 1u64 << i } else { rng.random() }).collect();
        let fps = (0..n)
            .map(|j| {
                let mut f = 0u64;
                for (i, b) in basis_fp.iter().enumerate() {
                    if logical_cols[j][i / 64] >> (i % 64) & 1 == 1 {
                        f ^= b;
                    }
                }
                f
            })
            .collect();
        Ok(Scanner { n, g0_words, g0_cols, fps, logical_cols, exact_fp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn logical_nonzero(&self, support: &[u32]) -> bool {
        let Some(first) = self.logical_cols.first() else { return false };
        let mut acc = vec![0u64; first.len()];
        for &j in support {
            for (a, c) in acc.iter_mut().zip(&self.logical_cols[j as usize]) {
                *a ^= c;
            }
        }
        acc.iter().any(|&w| w != 0)
    }

    /// Counts weight-`w` vectors in `G0^⊥`, split by logical syndrome.
    pub fn scan(&self, w: usize, opts: &ScanOptions) -> Result<WeightScan> {
        if w == 0 || w > MAX_SCAN_WEIGHT {
            return Err(Error::InvalidInput(format!("scan weight must be in 1..={MAX_SCAN_WEIGHT}, got {w}")));
        }
        if w > self.n {
            return Ok(WeightScan { weight: w, ..Default::default() });
        }
        match self.g0_words {
            1 => self.scan_w::<1>(w, opts),
            2 => self.scan_w::<2>(w, opts),
            3 => self.scan_w::<3>(w, opts),
            4 => self.scan_w::<4>(w, opts),
            5 => self.scan_w::<5>(w, opts),
            6 => self.scan_w::<6>(w, opts),
            7 => self.scan_w::<7>(w, opts),
            _ => self.scan_w::<8>(w, opts),
        }
    }

    /// Smallest weight in `1..=max_w` carrying a logical vector, with its scan.
    pub fn min_logical_weight(&self, max_w: usize, opts: &ScanOptions) -> Result<Option<WeightScan>> {
        for w in 1..=max_w.min(self.n) {
            let s = self.scan(w, opts)?;
            if s.logical > 0 {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    fn scan_w<const W: usize>(&self, w: usize, opts: &ScanOptions) -> Result<WeightScan> {
        let cols: Vec<[u64; W]> = self
            .g0_cols
            .iter()
            .map(|c| {
                let mut a = [0u64; W];
                a.copy_from_slice(&c[..W]);
                a
            })
            .collect();
        let p = w - w / 2;
        let q = w / 2;
        let passes = passes_needed(self.n, w, opts.max_entries) as u64;
        let mut total = WeightScan { weight: w, ..Default::default() };
        for pass in 0..passes {
            let table = build_table::<W>(&cols, &self.fps, q, p, passes, pass);
            let r = self.match_left::<W>(&cols, &table, p, passes, pass, opts.collect_logicals);
            total.in_dual += r.in_dual;
            total.logical += r.logical;
            let room = opts.collect_logicals.saturating_sub(total.logicals.len());
            total.logicals.extend(r.logicals.into_iter().take(room));
        }
        Ok(total)
    }

    fn match_left<const W: usize>(
        &self,
        cols: &[[u64; W]],
        table: &Table<W>,
        p: usize,
        passes: u64,
        pass: u64,
        collect: usize,
    ) -> WeightScan {
        let n = self.n;
        let parts: Vec<WeightScan> = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut out = WeightScan::default();
                let mut stack = vec![first as u32];
                let mut keys = vec![cols[first]];
                let mut fps = vec![self.fps[first]];
                visit_left(self, cols, table, p, passes, pass, collect, &mut stack, &mut keys, &mut fps, &mut out);
                out
            })
            .collect();
        let mut total = WeightScan::default();
        for r in parts {
            total.in_dual += r.in_dual;
            total.logical += r.logical;
            let room = collect.saturating_sub(total.logicals.len());
            total.logicals.extend(r.logicals.into_iter().take(room));
        }
        total
    }
}

#[derive(Clone, Copy)]
struct Entry<const W: usize> {
    key: [u64; W],
    min: u32,
    fp: u64,
    idx: [u32; 4],
}

struct Table<const W: usize> {
    q: usize,
    entries: Vec<Entry<W>>,
    ranges: FxHashMap<[u64; W], (u32, u32)>,
}

fn bucket_of<const W: usize>(key: &[u64; W], passes: u64) -> u64 {
    if passes == 1 {
        return 0;
    }
    let mut h = FxHasher::default();
    key.hash(&mut h);
    (h.finish() >> 17) % passes
}

fn build_table<const W: usize>(cols: &[[u64; W]], fps: &[u64], q: usize, p: usize, passes: u64, pass: u64) -> Table<W> {
    let n = cols.len();
    let mut entries: Vec<Entry<W>> = Vec::new();
    if q == 0 {
        entries.push(Entry { key: [0; W], min: n as u32, fp: 0, idx: [0; 4] });
    } else {
        let mut idx = [0u32; 4];
        // Right parts need at least `p` smaller indices for the left part.
        fn rec<const W: usize>(
            cols: &[[u64; W]],
            fps: &[u64],
            start: usize,
            depth: usize,
            q: usize,
            key: [u64; W],
            fp: u64,
            idx: &mut [u32; 4],
            passes: u64,
            pass: u64,
            out: &mut Vec<Entry<W>>,
        ) {
            if depth == q {
                if bucket_of(&key, passes) == pass {
                    out.push(Entry { key, min: idx[0], fp, idx: *idx });
                }
                return;
            }
            let n = cols.len();
            for j in start..n - (q - depth - 1) {
                let mut k = key;
                for (a, b) in k.iter_mut().zip(&cols[j]) {
                    *a ^= b;
                }
                idx[depth] = j as u32;
                rec(cols, fps, j + 1, depth + 1, q, k, fp ^ fps[j], idx, passes, pass, out);
            }
        }
        rec(cols, fps, p, 0, q, [0; W], 0, &mut idx, passes, pass, &mut entries);
    }
    entries.sort_unstable_by(|a, b| a.key.cmp(&b.key).then(b.min.cmp(&a.min)).then(a.idx.cmp(&b.idx)));
    let mut ranges = FxHashMap::default();
    let mut i = 0;
    while i < entries.len() {
        let mut j = i + 1;
        while j < entries.len() && entries[j].key == entries[i].key {
            j += 1;
        }
        ranges.insert(entries[i].key, (i as u32, j as u32));
        i = j;
    }
    Table { q, entries, ranges }
}

#[allow(clippy::too_many_arguments)]
fn visit_left<const W: usize>(
    sc: &Scanner,
    cols: &[[u64; W]],
    table: &Table<W>,
    p: usize,
    passes: u64,
    pass: u64,
    collect: usize,
    stack: &mut Vec<u32>,
    keys: &mut Vec<[u64; W]>,
    fps: &mut Vec<u64>,
    out: &mut WeightScan,
) {
    let n = cols.len();
    let q = table.q;
    let last = *stack.last().expect("nonempty") as usize;
    if stack.len() == p {
        if last + q >= n {
            return;
        }
        let key = *keys.last().expect("nonempty");
        if bucket_of(&key, passes) != pass {
            return;
        }
        let Some(&(lo, hi)) = table.ranges.get(&key) else { return };
        let slice = &table.entries[lo as usize..hi as usize];
        let cut = slice.partition_point(|e| e.min as usize > last);
        let fp = *fps.last().expect("nonempty");
        for e in &slice[..cut] {
            out.in_dual += 1;
            let nonzero = if fp ^ e.fp != 0 {
                true
            } else if sc.exact_fp {
                false
            } else {
                let mut sup: Vec<u32> = stack.clone();
                sup.extend_from_slice(&e.idx[..q]);
                sc.logical_nonzero(&sup)
            };
            if nonzero {
                out.logical += 1;
                if out.logicals.len() < collect {
                    let mut sup: Vec<usize> = stack.iter().map(|&x| x as usize).collect();
                    sup.extend(e.idx[..q].iter().map(|&x| x as usize));
                    out.logicals.push(sup);
                }
            }
        }
        return;
    }
    let remaining = p - stack.len();
    for j in last + 1..n.saturating_sub(remaining - 1 + q) {
        let mut k = *keys.last().expect("nonempty");
        for (a, b) in k.iter_mut().zip(&cols[j]) {
            *a ^= b;
        }
        let f = fps.last().expect("nonempty") ^ sc.fps[j];
        stack.push(j as u32);
        keys.push(k);
        fps.push(f);
        visit_left(sc, cols, table, p, passes, pass, collect, stack, keys, fps, out);
        stack.pop();
        keys.pop();
        fps.pop();
    }
}

/// Convenience wrapper: one weight, fresh scanner.
pub fn scan_weight(g0: &BitMatrix, logical: &BitMatrix, w: usize, opts: &ScanOptions) -> Result<WeightScan> {
    Scanner::new(g0, logical)?.scan(w, opts)
}

/// Builds the length-`n` vector with the given support.
pub fn support_to_vec(n: usize, support: &[usize]) -> BitVec {
    let mut v = BitVec::zeros(n);
    for &i in support {
        v.set(i, true);
    }
    v
}
