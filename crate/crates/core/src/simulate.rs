//! Z-error simulation of distillation: Monte Carlo and exact sums over error
//! patterns for triorthogonal codes, and Pauli-frame runs of check circuits.
//!
//! Trials are grouped in blocks of [`BLOCK`]; block `b` draws from ChaCha8
//! stream `b` under the user seed, so results do not depend on thread count.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::checkcodes::{build_hyperbolic_cz_check, build_normal_ccz_check, build_quadratic_ccz, CheckCircuit, Gate, WscCode};
use crate::error::{Error, Result};
use crate::trio::GenTrioMatrix;

pub const BLOCK: u64 = 1 << 12;
pub const MAX_FULL_N: usize = 24;
pub const MAX_TRUNCATED_PATTERNS: u128 = 1 << 31;
const Z95: f64 = 1.959963984540054;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Estimate {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn scale(&self, s: f64) -> Estimate {
        Estimate { value: self.value * s, lo: self.lo * s, hi: self.hi * s }
    }
}

/// Wilson score interval at 95%.
pub fn wilson(successes: u64, trials: u64) -> Estimate {
    if trials == 0 {
        return Estimate { value: 0.0, lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let ph = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (ph + z2 / (2.0 * n)) / denom;
    let half = Z95 * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Estimate { value: ph, lo: (centre - half).max(0.0), hi: (centre + half).min(1.0) }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidInput(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Calls `f` on each index of an iid Bernoulli(`p`) subset of `0..n`, in
/// increasing order, using geometric gaps.
fn bernoulli_positions(n: usize, p: f64, rng: &mut impl Rng, mut f: impl FnMut(usize)) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..n).for_each(f);
        return;
    }
    let log_q = (-p).ln_1p();
    let mut i: f64 = -1.0;
    loop {
        let u = 1.0 - rng.random::<f64>();
        i += (u.ln() / log_q).floor() + 1.0;
        if i >= n as f64 {
            return;
        }
        f(i as usize);
    }
}

/// Syndrome and logical action of single-qubit Z errors on a code.
#[derive(Clone, Debug)]
pub struct TrioDecoder {
    n: usize,
    sw: usize,
    lw: usize,
    syn: Vec<Vec<u64>>,
    log: Vec<Vec<u64>>,
    /// Nonzero single-qubit syndromes; `None` marks an ambiguous one.
    lookup: FxHashMap<Vec<u64>, Option<usize>>,
    ec_radius: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub logical_error: bool,
}

impl TrioDecoder {
    pub fn new(g: &GenTrioMatrix, ec_radius: u8) -> Result<Self> {
        if ec_radius > 1 {
            return Err(Error::InvalidInput(format!("ec_radius must be 0 or 1, got {ec_radius}")));
        }
        let n = g.n();
        let g0t = g.g0().transpose();
        let lt = g.logical_rows().transpose();
        let words = |m: &crate::f2::BitMatrix, j: usize| -> Vec<u64> {
            if m.n_rows() == 0 { Vec::new() } else { m.row(j).words().to_vec() }
        };
        let syn: Vec<Vec<u64>> = (0..n).map(|j| if g.g0().n_rows() == 0 { Vec::new() } else { words(&g0t, j) }).collect();
        let log: Vec<Vec<u64>> = (0..n).map(|j| if g.k() == 0 { Vec::new() } else { words(&lt, j) }).collect();
        let mut lookup: FxHashMap<Vec<u64>, Option<usize>> = FxHashMap::default();
        if ec_radius == 1 {
            for (j, s) in syn.iter().enumerate() {
                if s.iter().all(|&w| w == 0) {
                    continue;
                }
                lookup.entry(s.clone()).and_modify(|e| *e = None).or_insert(Some(j));
            }
        }
        Ok(TrioDecoder { n, sw: syn.first().map_or(0, Vec::len), lw: log.first().map_or(0, Vec::len), syn, log, lookup, ec_radius })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn judge(&self, s: &[u64], l: &mut [u64]) -> Verdict {
        if s.iter().all(|&w| w == 0) {
            return Verdict { accepted: true, logical_error: l.iter().any(|&w| w != 0) };
        }
        if self.ec_radius == 1 {
            if let Some(Some(j)) = self.lookup.get(s) {
                for (a, b) in l.iter_mut().zip(&self.log[*j]) {
                    *a ^= b;
                }
                return Verdict { accepted: true, logical_error: l.iter().any(|&w| w != 0) };
            }
        }
        Verdict { accepted: false, logical_error: false }
    }

    /// Outcome for the error pattern with the given support.
    pub fn evaluate(&self, support: &[usize]) -> Verdict {
        let mut s = vec![0u64; self.sw];
        let mut l = vec![0u64; self.lw];
        for &j in support {
            xor_into(&mut s, &self.syn[j]);
            xor_into(&mut l, &self.log[j]);
        }
        self.judge(&s, &mut l)
    }
}

fn xor_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrioEstimate {
    pub trials: u64,
    pub accepted: u64,
    pub logical_errors: u64,
    pub p_acc: Estimate,
    /// Joint probability of acceptance and a logical error.
    pub eps_out: Estimate,
}

impl TrioEstimate {
    /// `eps_out / (p^d (1-p)^(n-d))`, which tends to `A_d` as `p → 0`.
    pub fn coefficient(&self, p: f64, n: usize, d: usize) -> Estimate {
        self.eps_out.scale(1.0 / (p.powi(d as i32) * (1.0 - p).powi((n - d) as i32)))
    }
}

/// Monte Carlo over iid Z errors with probability `p` on each of the `n` inputs.
pub fn simulate_trio(g: &GenTrioMatrix, p: f64, trials: u64, seed: u64, ec_radius: u8) -> Result<TrioEstimate> {
    check_p(p)?;
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let dec = TrioDecoder::new(g, ec_radius)?;
    let blocks = trials.div_ceil(BLOCK);
    let (accepted, bad) = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let count = BLOCK.min(trials - b * BLOCK);
            let mut s = vec![0u64; dec.sw];
            let mut l = vec![0u64; dec.lw];
            let (mut acc, mut bad) = (0u64, 0u64);
            for _ in 0..count {
                s.iter_mut().for_each(|w| *w = 0);
                l.iter_mut().for_each(|w| *w = 0);
                bernoulli_positions(dec.n, p, &mut rng, |j| {
                    xor_into(&mut s, &dec.syn[j]);
                    xor_into(&mut l, &dec.log[j]);
                });
                let v = dec.judge(&s, &mut l);
                acc += v.accepted as u64;
                bad += (v.accepted && v.logical_error) as u64;
            }
            (acc, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(TrioEstimate { trials, accepted, logical_errors: bad, p_acc: wilson(accepted, trials), eps_out: wilson(bad, trials) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stratum {
    pub weight: usize,
    pub samples: u64,
    pub bad: u64,
    /// `C(n,w) p^w (1-p)^(n-w)`.
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratifiedEstimate {
    pub strata: Vec<Stratum>,
    /// Probability of weights above the largest sampled one, added to `eps_out.hi`.
    pub tail: f64,
    pub eps_out: Estimate,
}

fn weight_mass(n: usize, w: usize, p: f64) -> f64 {
    let ln_choose: f64 = (0..w).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum();
    if p == 0.0 {
        return if w == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if w == n { 1.0 } else { 0.0 };
    }
    (ln_choose + w as f64 * p.ln() + (n - w) as f64 * (-p).ln_1p()).exp()
}

/// Importance sampling by error weight: uniform weight-`w` patterns for
/// `w = 1..=max_weight`, reweighted by the binomial mass of each weight.
/// Interval ends are the mass-weighted Wilson ends of each stratum.
pub fn simulate_trio_stratified(
    g: &GenTrioMatrix,
    p: f64,
    max_weight: usize,
    samples_per_weight: u64,
    seed: u64,
    ec_radius: u8,
) -> Result<StratifiedEstimate> {
    check_p(p)?;
    let dec = TrioDecoder::new(g, ec_radius)?;
    let n = dec.n;
    let max_weight = max_weight.min(n);
    let mut strata = Vec::new();
    for w in 1..=max_weight {
        let blocks = samples_per_weight.div_ceil(BLOCK);
        let bad: u64 = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = block_rng(seed ^ (w as u64).rotate_left(40), b);
                let count = BLOCK.min(samples_per_weight - b * BLOCK);
                let mut bad = 0u64;
                let mut support = Vec::with_capacity(w);
                for _ in 0..count {
                    support.clear();
                    support.extend(sample(&mut rng, n, w).iter());
                    let v = dec.evaluate(&support);
                    bad += (v.accepted && v.logical_error) as u64;
                }
                bad
            })
            .sum();
        strata.push(Stratum { weight: w, samples: samples_per_weight, bad, mass: weight_mass(n, w, p) });
    }
    let covered: f64 = weight_mass(n, 0, p) + strata.iter().map(|s| s.mass).sum::<f64>();
    let tail = (1.0 - covered).max(0.0);
    let mut est = Estimate { value: 0.0, lo: 0.0, hi: tail };
    for s in &strata {
        let e = wilson(s.bad, s.samples);
        est.value += s.mass * e.value;
        est.lo += s.mass * e.lo;
        est.hi += s.mass * e.hi;
    }
    Ok(StratifiedEstimate { strata, tail, eps_out: est })
}

/// Exact counts of error patterns by weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactTrio {
    pub n: usize,
    /// Largest weight enumerated; `n` in full mode.
    pub max_weight: usize,
    pub accepted: Vec<u64>,
    pub bad: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactMode {
    Full,
    Truncated(usize),
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Sums over every error pattern (full mode, `n ≤ 24`) or every pattern up
/// to a weight.
pub fn exact_trio(g: &GenTrioMatrix, mode: ExactMode, ec_radius: u8) -> Result<ExactTrio> {
    let dec = TrioDecoder::new(g, ec_radius)?;
    let n = dec.n;
    let max_weight = match mode {
        ExactMode::Full => {
            if n > MAX_FULL_N {
                return Err(Error::CapExceeded { what: "full exact enumeration length".into(), value: n as u128, cap: MAX_FULL_N as u128 });
            }
            n
        }
        ExactMode::Truncated(w) => {
            let w = w.min(n);
            let total: u128 = (0..=w).map(|i| binomial(n, i)).sum();
            if total > MAX_TRUNCATED_PATTERNS {
                return Err(Error::CapExceeded { what: "truncated exact enumeration patterns".into(), value: total, cap: MAX_TRUNCATED_PATTERNS });
            }
            w
        }
    };
    let mut accepted = vec![0u64; max_weight + 1];
    let mut bad = vec![0u64; max_weight + 1];
    if matches!(mode, ExactMode::Full) {
        // Gray-code walk: one column update per pattern.
        let mut s = vec![0u64; dec.sw];
        let mut l = vec![0u64; dec.lw];
        let mut ls = vec![0u64; dec.lw];
        for i in 0u64..(1u64 << n) {
            if i > 0 {
                let j = i.trailing_zeros() as usize;
                xor_into(&mut s, &dec.syn[j]);
                xor_into(&mut l, &dec.log[j]);
            }
            let w = (i ^ (i >> 1)).count_ones() as usize;
            ls.copy_from_slice(&l);
            let v = dec.judge(&s, &mut ls);
            accepted[w] += v.accepted as u64;
            bad[w] += (v.accepted && v.logical_error) as u64;
        }
    } else {
        let v = dec.judge(&vec![0u64; dec.sw], &mut vec![0u64; dec.lw]);
        accepted[0] = v.accepted as u64;
        let parts: Vec<(Vec<u64>, Vec<u64>)> = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut acc = vec![0u64; max_weight + 1];
                let mut bd = vec![0u64; max_weight + 1];
                let mut s = dec.syn[first].clone();
                let mut l = dec.log[first].clone();
                descend(&dec, first + 1, 1, max_weight, &mut s, &mut l, &mut acc, &mut bd);
                (acc, bd)
            })
            .collect();
        for (a, b) in parts {
            for w in 0..=max_weight {
                accepted[w] += a[w];
                bad[w] += b[w];
            }
        }
    }
    Ok(ExactTrio { n, max_weight, accepted, bad })
}

#[allow(clippy::too_many_arguments)]
fn descend(dec: &TrioDecoder, start: usize, w: usize, max_w: usize, s: &mut Vec<u64>, l: &mut Vec<u64>, acc: &mut [u64], bad: &mut [u64]) {
    let mut ls = l.clone();
    let v = dec.judge(s, &mut ls);
    acc[w] += v.accepted as u64;
    bad[w] += (v.accepted && v.logical_error) as u64;
    if w == max_w {
        return;
    }
    for j in start..dec.n {
        xor_into(s, &dec.syn[j]);
        xor_into(l, &dec.log[j]);
        descend(dec, j + 1, w + 1, max_w, s, l, acc, bad);
        xor_into(s, &dec.syn[j]);
        xor_into(l, &dec.log[j]);
    }
}

fn expand(counts: &[u64], n: usize) -> Vec<BigInt> {
    // Σ c_w p^w (1-p)^(n-w), coefficients of p^0..p^{len-1}.
    let deg = counts.len();
    let mut out = vec![BigInt::zero(); deg];
    for (w, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for j in 0..deg - w {
            let term = BigInt::from(c) * BigInt::from(binomial(n - w, j));
            if j % 2 == 0 {
                out[w + j] += term;
            } else {
                out[w + j] -= term;
            }
        }
    }
    out
}

impl ExactTrio {
    /// Coefficients of `P(accept)` in powers of `p`, exact up to `max_weight`.
    pub fn acceptance_polynomial(&self) -> Vec<BigInt> {
        expand(&self.accepted, self.n)
    }

    /// Coefficients of `P(accept and logical error)`, exact up to `max_weight`.
    pub fn error_polynomial(&self) -> Vec<BigInt> {
        expand(&self.bad, self.n)
    }

    /// Lowest weight with an accepted logical error and its count.
    pub fn leading(&self) -> Option<(usize, u64)> {
        self.bad.iter().enumerate().find(|(_, &c)| c > 0).map(|(w, &c)| (w, c))
    }

    fn eval(&self, counts: &[u64], p: f64) -> f64 {
        counts.iter().enumerate().map(|(w, &c)| c as f64 * p.powi(w as i32) * (1.0 - p).powi((self.n - w) as i32)).sum()
    }

    pub fn p_acc(&self, p: f64) -> f64 {
        self.eval(&self.accepted, p)
    }

    pub fn eps_out(&self, p: f64) -> f64 {
        self.eval(&self.bad, p)
    }
}

/// Final frame parities of a check circuit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FrameResult {
    pub checks: Vec<bool>,
    pub outputs: Vec<bool>,
}

impl FrameResult {
    pub fn accepted(&self) -> bool {
        !self.checks.iter().any(|&b| b)
    }

    pub fn logical_error(&self) -> bool {
        self.outputs.iter().any(|&b| b)
    }
}

/// Checks qubit indices, slot ranges and parities of a circuit.
pub fn validate_circuit(c: &CheckCircuit) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidInput(format!("malformed circuit {}: {msg}", c.name)));
    let q_ok = |q: usize| q < c.n_qubits;
    let mut seen = vec![false; c.t_slot_count];
    let mut mark = |s: usize| -> bool {
        if s >= seen.len() || seen[s] {
            return false;
        }
        seen[s] = true;
        true
    };
    for g in &c.gates {
        let ok = match *g {
            Gate::Cx { control, target } => q_ok(control) && q_ok(target) && control != target,
            Gate::Cz { a, b } => q_ok(a) && q_ok(b) && a != b,
            Gate::Ccz { a, b, c } => q_ok(a) && q_ok(b) && q_ok(c),
            Gate::S { qubit, .. } | Gate::Phase { qubit, .. } => q_ok(qubit),
            Gate::TSlot { qubit, slot, .. } => q_ok(qubit) && mark(slot),
            Gate::CczInjection { a, b, c, slots } => q_ok(a) && q_ok(b) && q_ok(c) && slots.iter().all(|&s| mark(s)),
        };
        if !ok {
            return bad(format!("bad gate {g:?}"));
        }
    }
    if seen.iter().any(|&s| !s) {
        return bad("unused T slot".into());
    }
    for p in c.checks.iter().chain(&c.inputs).chain(&c.outputs) {
        if !p.iter().all(|&q| q_ok(q)) {
            return bad("parity outside the register".into());
        }
    }
    Ok(())
}

/// Runs a validated circuit on a reusable frame.
#[derive(Clone, Debug)]
pub struct FrameRunner<'a> {
    circuit: &'a CheckCircuit,
    frame: Vec<bool>,
}

impl<'a> FrameRunner<'a> {
    pub fn new(circuit: &'a CheckCircuit) -> Result<Self> {
        validate_circuit(circuit)?;
        Ok(FrameRunner { circuit, frame: vec![false; circuit.n_qubits] })
    }

    pub fn circuit(&self) -> &CheckCircuit {
        self.circuit
    }

    /// `slots[s]` marks a Z fault at T slot `s`; `inputs[i]` applies input pattern `i`.
    pub fn run(&mut self, slots: &[bool], inputs: &[bool], out: &mut FrameResult) {
        let c = self.circuit;
        let f = &mut self.frame;
        f.iter_mut().for_each(|b| *b = false);
        for (i, _) in inputs.iter().enumerate().filter(|(_, &b)| b) {
            for &q in &c.inputs[i] {
                f[q] ^= true;
            }
        }
        for g in &c.gates {
            match *g {
                Gate::Cx { control, target } => {
                    if f[target] {
                        f[control] ^= true;
                    }
                }
                Gate::TSlot { qubit, slot, .. } => {
                    if slots[slot] {
                        f[qubit] ^= true;
                    }
                }
                Gate::CczInjection { a, b, c: cq, slots: s } => {
                    for (j, q) in [a, b, cq, a].into_iter().enumerate() {
                        if slots[s[j]] {
                            f[q] ^= true;
                        }
                    }
                }
                Gate::Cz { .. } | Gate::Ccz { .. } | Gate::S { .. } | Gate::Phase { .. } => {}
            }
        }
        let parity = |p: &Vec<usize>| p.iter().fold(false, |acc, &q| acc ^ f[q]);
        out.checks.clear();
        out.checks.extend(c.checks.iter().map(parity));
        out.outputs.clear();
        out.outputs.extend(c.outputs.iter().map(parity));
    }
}

/// One frame propagation of `c` with faults at `slots` and input errors `inputs`.
pub fn pauli_frame_run(c: &CheckCircuit, slots: &[bool], inputs: &[bool]) -> Result<FrameResult> {
    if slots.len() != c.t_slot_count {
        return Err(Error::LengthMismatch { expected: c.t_slot_count, got: slots.len() });
    }
    if inputs.len() != c.inputs.len() {
        return Err(Error::LengthMismatch { expected: c.inputs.len(), got: inputs.len() });
    }
    let mut out = FrameResult::default();
    FrameRunner::new(c)?.run(slots, inputs, &mut out);
    Ok(out)
}

/// Exhaustive count over all fault patterns of a circuit with clean inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameCounts {
    pub slots: usize,
    pub accepted: Vec<u64>,
    pub bad: Vec<u64>,
    pub detected: Vec<u64>,
}

pub fn exhaustive_frame_counts(c: &CheckCircuit) -> Result<FrameCounts> {
    let s = c.t_slot_count;
    if s > MAX_FULL_N {
        return Err(Error::CapExceeded { what: "exhaustive T-slot count".into(), value: s as u128, cap: MAX_FULL_N as u128 });
    }
    let mut runner = FrameRunner::new(c)?;
    let inputs = vec![false; c.inputs.len()];
    let mut slots = vec![false; s];
    let mut out = FrameResult::default();
    let mut counts = FrameCounts { slots: s, accepted: vec![0; s + 1], bad: vec![0; s + 1], detected: vec![0; s + 1] };
    for mask in 0u64..(1u64 << s) {
        for (i, b) in slots.iter_mut().enumerate() {
            *b = mask >> i & 1 == 1;
        }
        runner.run(&slots, &inputs, &mut out);
        let w = mask.count_ones() as usize;
        if out.accepted() {
            counts.accepted[w] += 1;
            counts.bad[w] += out.logical_error() as u64;
        } else {
            counts.detected[w] += 1;
        }
    }
    Ok(counts)
}

/// `k` CCZ states drawn from `source` (post-selected, with retries), then
/// passed through each check round in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckProtocol {
    pub name: String,
    pub k: usize,
    pub source: CheckCircuit,
    pub rounds: Vec<CheckCircuit>,
}

impl CheckProtocol {
    pub fn new(name: &str, k: usize, source: CheckCircuit, rounds: Vec<CheckCircuit>) -> Result<Self> {
        validate_circuit(&source)?;
        if !source.inputs.is_empty() || source.outputs.len() != 3 {
            return Err(Error::InvalidInput("source must take no inputs and emit one CCZ state".into()));
        }
        for r in &rounds {
            validate_circuit(r)?;
            if r.inputs.len() != 3 * k || r.outputs.len() != 3 * k {
                return Err(Error::InvalidInput(format!("round {} does not carry {k} CCZ states", r.name)));
            }
        }
        Ok(CheckProtocol { name: name.into(), k, source, rounds })
    }

    /// T slots in the check rounds, not counting the sources.
    pub fn round_t_count(&self) -> usize {
        self.rounds.iter().map(|r| r.t_slot_count).sum()
    }
}

/// Quadratic sources checked by three hyperbolic rounds, one per CCZ qubit.
pub fn hyperbolic_quartic_protocol(code: &WscCode) -> Result<CheckProtocol> {
    let rounds = (0..3).map(|s| build_hyperbolic_cz_check(code, s)).collect::<Result<Vec<_>>>()?;
    let k = rounds[0].inputs.len() / 3;
    CheckProtocol::new("hyperbolic-quartic", k, build_quadratic_ccz()?, rounds)
}

/// Quadratic sources checked by one three-block normal-code round.
pub fn normal_protocol(code: &WscCode) -> Result<CheckProtocol> {
    let round = build_normal_ccz_check(code)?;
    let k = round.inputs.len() / 3;
    CheckProtocol::new("normal-ccz", k, build_quadratic_ccz()?, vec![round])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolEstimate {
    pub trials: u64,
    pub accepted: u64,
    /// Accepted trials with at least one faulty output state.
    pub bad_trials: u64,
    /// Faulty output states summed over accepted trials.
    pub bad_outputs: u64,
    pub source_runs: u64,
    pub p_acc: Estimate,
    /// Probability that an accepted trial has a faulty output state.
    pub eps_out: Estimate,
    /// Faulty outputs over `k ·` accepted trials.
    pub eps_per_output: Estimate,
    /// Noisy T gates, sources included, per accepted output state.
    pub t_per_output: f64,
}

const MAX_SOURCE_ATTEMPTS: u32 = 100_000;

/// End-to-end Monte Carlo of a check protocol with independent T faults at rate `p`.
pub fn simulate_check_protocol(proto: &CheckProtocol, p: f64, trials: u64, seed: u64) -> Result<ProtocolEstimate> {
    check_p(p)?;
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let k = proto.k;
    let blocks = trials.div_ceil(BLOCK);
    let parts: Vec<Result<[u64; 4]>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let count = BLOCK.min(trials - b * BLOCK);
            let mut source = FrameRunner::new(&proto.source)?;
            let mut rounds: Vec<FrameRunner> = proto.rounds.iter().map(FrameRunner::new).collect::<Result<_>>()?;
            let mut out = FrameResult::default();
            let mut state = vec![false; 3 * k];
            let mut slots = Vec::new();
            let mut tally = [0u64; 4];
            'trial: for _ in 0..count {
                for j in 0..k {
                    let mut attempts = 0;
                    loop {
                        attempts += 1;
                        tally[3] += 1;
                        fill_faults(&mut slots, proto.source.t_slot_count, p, &mut rng);
                        source.run(&slots, &[], &mut out);
                        if out.accepted() {
                            state[3 * j..3 * j + 3].copy_from_slice(&out.outputs);
                            break;
                        }
                        if attempts >= MAX_SOURCE_ATTEMPTS {
                            return Err(Error::CapExceeded { what: "source attempts".into(), value: attempts as u128, cap: MAX_SOURCE_ATTEMPTS as u128 });
                        }
                    }
                }
                for r in rounds.iter_mut() {
                    fill_faults(&mut slots, r.circuit().t_slot_count, p, &mut rng);
                    r.run(&slots, &state, &mut out);
                    if !out.accepted() {
                        continue 'trial;
                    }
                    state.copy_from_slice(&out.outputs);
                }
                tally[0] += 1;
                let faulty = state.chunks(3).filter(|c| c.iter().any(|&b| b)).count() as u64;
                tally[1] += (faulty > 0) as u64;
                tally[2] += faulty;
            }
            Ok(tally)
        })
        .collect();
    let mut t = [0u64; 4];
    for part in parts {
        for (a, b) in t.iter_mut().zip(part?) {
            *a += b;
        }
    }
    let [accepted, bad_trials, bad_outputs, source_runs] = t;
    let t_total = source_runs as f64 * proto.source.t_slot_count as f64 + trials as f64 * proto.round_t_count() as f64;
    Ok(ProtocolEstimate {
        trials,
        accepted,
        bad_trials,
        bad_outputs,
        source_runs,
        p_acc: wilson(accepted, trials),
        eps_out: wilson(bad_trials, accepted),
        eps_per_output: wilson(bad_outputs, accepted * k as u64),
        t_per_output: if accepted == 0 { f64::INFINITY } else { t_total / (accepted as f64 * k as f64) },
    })
}

/// The protocol as an F2-linear map from single T faults (sources first, then
/// rounds) to check bits and final output bits.
#[derive(Clone, Debug)]
pub struct ProtocolResponse {
    pub k: usize,
    pub n_checks: usize,
    columns: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolCounts {
    pub slots: usize,
    pub max_weight: usize,
    pub accepted: Vec<u64>,
    /// Accepted patterns leaving at least one faulty output state.
    pub bad: Vec<u64>,
    /// Faulty output states summed over accepted patterns.
    pub bad_outputs: Vec<u64>,
}

impl ProtocolResponse {
    pub fn new(proto: &CheckProtocol) -> Result<Self> {
        let k = proto.k;
        let src = proto.source.t_slot_count;
        let total = k * src + proto.round_t_count();
        let mut source = FrameRunner::new(&proto.source)?;
        let mut rounds: Vec<FrameRunner> = proto.rounds.iter().map(FrameRunner::new).collect::<Result<_>>()?;
        let n_checks = k * proto.source.checks.len() + proto.rounds.iter().map(|r| r.checks.len()).sum::<usize>();
        let mut out = FrameResult::default();
        let mut columns = Vec::with_capacity(total);
        for fault in 0..total {
            let mut bits: Vec<bool> = Vec::with_capacity(n_checks + 3 * k);
            let mut state = vec![false; 3 * k];
            let mut offset = 0;
            for j in 0..k {
                let slots: Vec<bool> = (0..src).map(|s| offset + s == fault).collect();
                source.run(&slots, &[], &mut out);
                bits.extend(&out.checks);
                state[3 * j..3 * j + 3].copy_from_slice(&out.outputs);
                offset += src;
            }
            for r in rounds.iter_mut() {
                let len = r.circuit().t_slot_count;
                let slots: Vec<bool> = (0..len).map(|s| offset + s == fault).collect();
                r.run(&slots, &state, &mut out);
                bits.extend(&out.checks);
                state.copy_from_slice(&out.outputs);
                offset += len;
            }
            bits.extend(&state);
            let mut words = vec![0u64; bits.len().div_ceil(64)];
            for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
                words[i / 64] |= 1 << (i % 64);
            }
            columns.push(words);
        }
        Ok(ProtocolResponse { k, n_checks, columns })
    }

    pub fn slots(&self) -> usize {
        self.columns.len()
    }

    fn tally(&self, v: &[u64], w: usize, c: &mut ProtocolCounts) {
        let bit = |i: usize| v[i / 64] >> (i % 64) & 1 == 1;
        if (0..self.n_checks).any(bit) {
            return;
        }
        c.accepted[w] += 1;
        let faulty = (0..self.k).filter(|j| (0..3).any(|q| bit(self.n_checks + 3 * j + q))).count() as u64;
        c.bad[w] += (faulty > 0) as u64;
        c.bad_outputs[w] += faulty;
    }

    /// Counts every fault pattern up to `max_weight`.
    pub fn weight_counts(&self, max_weight: usize) -> Result<ProtocolCounts> {
        let n = self.slots();
        let max_weight = max_weight.min(n);
        let total: u128 = (0..=max_weight).map(|i| binomial(n, i)).sum();
        if total > MAX_TRUNCATED_PATTERNS {
            return Err(Error::CapExceeded { what: "protocol fault patterns".into(), value: total, cap: MAX_TRUNCATED_PATTERNS });
        }
        let empty = || ProtocolCounts {
            slots: n,
            max_weight,
            accepted: vec![0; max_weight + 1],
            bad: vec![0; max_weight + 1],
            bad_outputs: vec![0; max_weight + 1],
        };
        let words = self.columns.first().map_or(1, Vec::len);
        let mut counts = empty();
        self.tally(&vec![0u64; words], 0, &mut counts);
        if max_weight == 0 {
            return Ok(counts);
        }
        let parts: Vec<ProtocolCounts> = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut c = empty();
                let mut v = self.columns[first].clone();
                self.descend(first + 1, 1, max_weight, &mut v, &mut c);
                c
            })
            .collect();
        for p in parts {
            for w in 0..=max_weight {
                counts.accepted[w] += p.accepted[w];
                counts.bad[w] += p.bad[w];
                counts.bad_outputs[w] += p.bad_outputs[w];
            }
        }
        Ok(counts)
    }

    fn descend(&self, start: usize, w: usize, max_w: usize, v: &mut Vec<u64>, c: &mut ProtocolCounts) {
        self.tally(v, w, c);
        if w == max_w {
            return;
        }
        for j in start..self.slots() {
            xor_into(v, &self.columns[j]);
            self.descend(j + 1, w + 1, max_w, v, c);
            xor_into(v, &self.columns[j]);
        }
    }
}

fn fill_faults(slots: &mut Vec<bool>, n: usize, p: f64, rng: &mut impl Rng) {
    slots.clear();
    slots.resize(n, false);
    bernoulli_positions(n, p, rng, |i| slots[i] = true);
}

/// `C(n, w)` as a big integer, for callers comparing against exact counts.
pub fn patterns_of_weight(n: usize, w: usize) -> BigUint {
    (0..w).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Estimate of a leading coefficient from exact counts: `bad[d]` as `f64`.
pub fn leading_coefficient(e: &ExactTrio) -> Option<f64> {
    e.leading().and_then(|(_, c)| c.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkcodes::{four_qubit_code, rm_hyperbolic};
    use crate::f2::BitMatrix;
    use crate::tables::{m3_code, m6_code};
    use proptest::prelude::*;

    fn tiny(g0: &[&str], t: &[&str]) -> GenTrioMatrix {
        let n = g0.first().or(t.first()).unwrap().len();
        let g0 = if g0.is_empty() { BitMatrix::new(n) } else { BitMatrix::from_strs(g0).unwrap() };
        let t = if t.is_empty() { BitMatrix::new(n) } else { BitMatrix::from_strs(t).unwrap() };
        GenTrioMatrix::plain(n, t, g0).unwrap()
    }

    #[test]
    fn wilson_interval() {
        let e = wilson(50, 100);
        assert!((e.lo - 0.4038).abs() < 1e-3 && (e.hi - 0.5962).abs() < 1e-3);
        let z = wilson(0, 10);
        assert_eq!(z.lo, 0.0);
        assert!(z.hi > 0.25 && z.hi < 0.3);
    }

    #[test]
    fn bernoulli_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = 0u64;
        for _ in 0..20_000 {
            bernoulli_positions(50, 0.03, &mut rng, |_| hits += 1);
        }
        let mean = hits as f64 / 1e6;
        assert!((mean - 0.03).abs() < 0.001, "{mean}");
    }

    #[test]
    fn exact_single_bit() {
        let g = tiny(&["1"], &[]);
        let e = exact_trio(&g, ExactMode::Full, 0).unwrap();
        let poly = e.acceptance_polynomial();
        assert_eq!(poly, vec![BigInt::from(1), BigInt::from(-1)]);
        assert!((e.p_acc(0.3) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn exact_m3() {
        let g = m3_code();
        let e = exact_trio(&g, ExactMode::Full, 0).unwrap();
        assert_eq!(e.leading(), Some((2, 28)));
        assert_eq!(e.error_polynomial()[2], BigInt::from(28));
        let t = exact_trio(&g, ExactMode::Truncated(3), 0).unwrap();
        assert_eq!(&t.bad[..], &e.bad[..4]);
        assert_eq!(&t.accepted[..], &e.accepted[..4]);
    }

    #[test]
    fn truncated_m6_leading_term() {
        let g = m6_code();
        let e = exact_trio(&g, ExactMode::Truncated(4), 0).unwrap();
        assert_eq!(e.leading(), Some((4, 2944)));
        assert!(exact_trio(&g, ExactMode::Full, 0).is_err());
    }

    #[test]
    fn clean_inputs() {
        let g = m3_code();
        let r = simulate_trio(&g, 0.0, 1000, 3, 0).unwrap();
        assert_eq!((r.accepted, r.logical_errors), (1000, 0));
    }

    #[test]
    fn monte_carlo_matches_exact_on_small_codes() {
        let g = m3_code();
        let e = exact_trio(&g, ExactMode::Full, 0).unwrap();
        for (p, ec) in [(0.05, 0), (0.2, 0), (0.1, 1)] {
            let ex = exact_trio(&g, ExactMode::Full, ec).unwrap();
            let r = simulate_trio(&g, p, 200_000, 7, ec).unwrap();
            assert!(r.p_acc.contains(ex.p_acc(p)), "p_acc {p} {ec}");
            assert!(r.eps_out.contains(ex.eps_out(p)), "eps {p} {ec}");
        }
        assert!(e.p_acc(0.1) <= exact_trio(&g, ExactMode::Full, 1).unwrap().p_acc(0.1));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let g = m3_code();
        let a = simulate_trio(&g, 0.05, 50_000, 9, 0).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| simulate_trio(&g, 0.05, 50_000, 9, 0).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn ec_decoder_rejects_ambiguous_syndromes() {
        // Columns 0 and 1 share a syndrome, so neither single error is corrected.
        let g = tiny(&["1100", "0011"], &[]);
        let dec = TrioDecoder::new(&g, 1).unwrap();
        assert!(!dec.evaluate(&[0]).accepted);
        let g = tiny(&["1110", "0111"], &[]);
        let dec = TrioDecoder::new(&g, 1).unwrap();
        assert!(dec.evaluate(&[0]).accepted);
        assert!(!dec.evaluate(&[1]).accepted);
    }

    #[test]
    fn stratified_matches_exact() {
        let g = m6_code();
        let ex = exact_trio(&g, ExactMode::Truncated(4), 0).unwrap();
        let p = 0.02;
        let s = simulate_trio_stratified(&g, p, 6, 40_000, 5, 0).unwrap();
        assert_eq!(s.strata[0].bad + s.strata[1].bad + s.strata[2].bad, 0);
        let c4 = s.strata[3].bad as f64 / s.strata[3].samples as f64 * patterns_of_weight(64, 4).to_f64().unwrap();
        assert!((c4 - 2944.0).abs() < 250.0, "{c4}");
        assert!(s.eps_out.hi >= ex.eps_out(p) * 0.9);
    }

    #[test]
    fn quadratic_gadget_exhaustive() {
        let c = build_quadratic_ccz().unwrap();
        let counts = exhaustive_frame_counts(&c).unwrap();
        assert_eq!(counts.slots, 8);
        assert_eq!(counts.bad[0], 0);
        assert_eq!(counts.bad[1], 0);
        assert_eq!(counts.bad[2], 28);
        let clean = pauli_frame_run(&c, &[false; 8], &[]).unwrap();
        assert!(clean.accepted() && !clean.logical_error());
    }

    #[test]
    fn hyperbolic_round_detects_single_faults() {
        let code = rm_hyperbolic(4).unwrap();
        for sep in 0..3 {
            let c = build_hyperbolic_cz_check(&code, sep).unwrap();
            assert_eq!(c.t_slot_count, 32);
            let inputs = vec![false; c.inputs.len()];
            for s in 0..c.t_slot_count {
                let mut slots = vec![false; c.t_slot_count];
                slots[s] = true;
                let r = pauli_frame_run(&c, &slots, &inputs).unwrap();
                assert!(!r.accepted(), "slot {s} round {sep}");
            }
        }
    }

    #[test]
    fn hyperbolic_round_detects_single_input_errors() {
        let code = rm_hyperbolic(4).unwrap();
        let c = build_hyperbolic_cz_check(&code, 0).unwrap();
        for i in 0..c.inputs.len() {
            let mut inputs = vec![false; c.inputs.len()];
            inputs[i] = true;
            let r = pauli_frame_run(&c, &vec![false; c.t_slot_count], &inputs).unwrap();
            // Errors on the separated qubit flip the ancilla; embedded ones pass through unchanged.
            if i % 3 == 0 {
                assert!(!r.accepted());
            } else {
                assert!(r.accepted());
                assert_eq!(r.outputs.iter().filter(|&&b| b).count(), 1);
            }
        }
    }

    #[test]
    fn malformed_circuit_is_rejected() {
        let mut c = build_quadratic_ccz().unwrap();
        c.gates.push(Gate::Cx { control: 0, target: 9 });
        assert!(validate_circuit(&c).is_err());
        let c = build_quadratic_ccz().unwrap();
        assert!(pauli_frame_run(&c, &[false; 3], &[]).is_err());
    }

    #[test]
    fn protocol_is_clean_without_faults() {
        let proto = hyperbolic_quartic_protocol(&rm_hyperbolic(4).unwrap()).unwrap();
        assert_eq!(proto.k, 3);
        assert_eq!(proto.round_t_count(), 6 * 16);
        let r = simulate_check_protocol(&proto, 0.0, 100, 1).unwrap();
        assert_eq!((r.accepted, r.bad_trials, r.source_runs), (100, 0, 300));
        assert!((r.t_per_output - (8.0 * 3.0 + 96.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn protocol_acceptance_rate() {
        // Every round fault and every faulty input state is caught to first order,
        // so acceptance is (1-p)^(6n) times the chance that all k sources are clean.
        let code = rm_hyperbolic(4).unwrap();
        let proto = hyperbolic_quartic_protocol(&code).unwrap();
        let p: f64 = 0.01;
        let src = exhaustive_frame_counts(&proto.source).unwrap();
        let mass = |c: &[u64]| c.iter().enumerate().map(|(w, &x)| x as f64 * p.powi(w as i32) * (1.0 - p).powi(8 - w as i32)).sum::<f64>();
        let clean = 1.0 - mass(&src.bad) / mass(&src.accepted);
        let predicted = (1.0 - p).powi(6 * 16) * clean.powi(3);
        let r = simulate_check_protocol(&proto, p, 200_000, 2).unwrap();
        assert!((r.p_acc.value - predicted).abs() < 0.005, "{} vs {predicted}", r.p_acc.value);
        assert!(r.p_acc.hi < (1.0 - p).powi(6 * 16));
    }

    #[test]
    fn normal_protocol_detects_single_faults() {
        let code = WscCode::new(&BitMatrix::from_strs(&["111100", "001111"]).unwrap()).unwrap();
        let proto = normal_protocol(&code).unwrap();
        assert_eq!(proto.k, 2);
        let c = ProtocolResponse::new(&proto).unwrap().weight_counts(1).unwrap();
        assert_eq!(c.slots, 2 * 8 + 48);
        assert_eq!(c.bad[1], 0);
        let r = simulate_check_protocol(&proto, 0.0, 50, 4).unwrap();
        assert_eq!(r.bad_trials, 0);
    }

    #[test]
    fn quartic_leading_counts() {
        let proto = hyperbolic_quartic_protocol(&rm_hyperbolic(4).unwrap()).unwrap();
        let c = ProtocolResponse::new(&proto).unwrap().weight_counts(4).unwrap();
        assert_eq!(c.slots, 24 + 96);
        assert_eq!(&c.accepted[1..4], &[0, 0, 0]);
        assert_eq!(c.bad[4], 2928);
        assert_eq!(c.bad_outputs[4], 5664);
        // The closed-form coefficient 9744 bounds the exact event count.
        assert!(c.bad[4] <= 9744);
    }

    #[test]
    fn response_matches_direct_runs() {
        let proto = hyperbolic_quartic_protocol(&four_qubit_code()).unwrap();
        let resp = ProtocolResponse::new(&proto).unwrap();
        assert_eq!(resp.slots(), 8 + 3 * 8);
        let counts = resp.weight_counts(2).unwrap();
        assert_eq!(counts.accepted[0], 1);
        assert_eq!(counts.bad[1], 0);
    }

    #[test]
    fn four_qubit_round_counts() {
        let c = build_hyperbolic_cz_check(&four_qubit_code(), 2).unwrap();
        let counts = exhaustive_frame_counts(&c).unwrap();
        assert_eq!(counts.bad[1], 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn frame_run_is_linear(a in any::<u64>(), b in any::<u64>(), ia in any::<u16>(), ib in any::<u16>(), sep in 0usize..3) {
            let code = four_qubit_code();
            let c = build_hyperbolic_cz_check(&code, sep).unwrap();
            let bits = |m: u64, len: usize| (0..len).map(|i| m >> (i % 64) & 1 == 1).collect::<Vec<_>>();
            let (sa, sb) = (bits(a, c.t_slot_count), bits(b, c.t_slot_count));
            let (xa, xb) = (bits(ia as u64, c.inputs.len()), bits(ib as u64, c.inputs.len()));
            let sum = |u: &[bool], v: &[bool]| u.iter().zip(v).map(|(x, y)| x ^ y).collect::<Vec<_>>();
            let ra = pauli_frame_run(&c, &sa, &xa).unwrap();
            let rb = pauli_frame_run(&c, &sb, &xb).unwrap();
            let rs = pauli_frame_run(&c, &sum(&sa, &sb), &sum(&xa, &xb)).unwrap();
            prop_assert_eq!(rs.checks, sum(&ra.checks, &rb.checks));
            prop_assert_eq!(rs.outputs, sum(&ra.outputs, &rb.outputs));
        }
    }
}
