//! Reed-Muller codes RM(r, m) and the algebra of indicator vectors.
//!
//! Codeword positions are points of F2^m. A point `(x1, ..., xm)` sits at
//! index `x1·2^(m-1) + ... + xm`, so `x1` is the most significant bit. Every
//! decimal coordinate list in this crate (puncture sets in particular) uses
//! this convention.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumeration;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};

/// Largest `m` accepted by generator constructions (2^m columns).
pub const MAX_M: usize = 20;

/// A monomial `x_{j1} x_{j2} ...` over `m` variables.
///
/// Bit `j` of `mask` is set when `x_{j+1}` divides the monomial; this is the
/// indicator vector packed into an integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub m: usize,
    pub mask: u32,
}

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial { m, mask: 0 }
    }

    /// Monomial from 1-based variable indices, e.g. `[1, 3]` for `x1 x3`.
    pub fn from_vars(m: usize, vars: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &v in vars {
            if v == 0 || v > m {
                return Err(Error::InvalidInput(format!("variable x{v} out of range for m={m}")));
            }
            mask |= 1 << (v - 1);
        }
        Ok(Monomial { m, mask })
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// 1-based variable indices in increasing order.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.m).filter(|j| self.mask >> j & 1 == 1).map(|j| j + 1).collect()
    }

    /// Indicator vector of length `m`; entry `j` is set when `x_{j+1}` divides.
    pub fn indicator(&self) -> BitVec {
        let mut v = BitVec::zeros(self.m);
        for j in 0..self.m {
            if self.mask >> j & 1 == 1 {
                v.set(j, true);
            }
        }
        v
    }

    /// Product of monomials (`a ∨ b` on indicators).
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial { m: self.m, mask: self.mask | other.mask }
    }

    /// Point-index mask: the index bits that must all be 1 for the monomial to evaluate to 1.
    fn point_mask(&self) -> usize {
        (0..self.m).filter(|j| self.mask >> j & 1 == 1).map(|j| 1usize << (self.m - 1 - j)).sum()
    }

    pub fn codeword(&self) -> BitVec {
        monomial_codeword(self)
    }

    /// Parses `"1"` or a space/product separated list such as `"x4 x5 x7"` or `"x1x3"`.
    pub fn parse(m: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Monomial::one(m));
        }
        let mut vars = Vec::new();
        for part in s.split(|c: char| c == 'x' || c.is_whitespace() || c == '*') {
            if part.is_empty() {
                continue;
            }
            let v: usize = part
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad monomial {s:?}")))?;
            vars.push(v);
        }
        Self::from_vars(m, &vars)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = vars.iter().map(|v| format!("x{v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Infers `m` as the largest variable index; prefer [`Monomial::parse`].
    fn from_str(s: &str) -> Result<Self> {
        let probe = Monomial::parse(32, s)?;
        let m = probe.vars().last().copied().unwrap_or(0);
        Ok(Monomial { m, mask: probe.mask })
    }
}

/// Index of the point `(x1, ..., xm)`; `x1` is the most significant bit.
pub fn point_index(point: &[bool]) -> usize {
    point.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

/// Inverse of [`point_index`].
pub fn index_point(m: usize, index: usize) -> Vec<bool> {
    (0..m).map(|j| index >> (m - 1 - j) & 1 == 1).collect()
}

/// Truth table of the monomial over all `2^m` points.
pub fn monomial_codeword(a: &Monomial) -> BitVec {
    let n = 1usize << a.m;
    let pm = a.point_mask();
    let mut v = BitVec::zeros(n);
    for p in 0..n {
        if p & pm == pm {
            v.set(p, true);
        }
    }
    v
}

/// All monomials of degree ≤ r, ordered by degree then lexicographically on
/// the sorted variable indices.
pub fn monomials_up_to(r: usize, m: usize) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (0u32..(1u32 << m))
        .filter(|mask| mask.count_ones() as usize <= r)
        .map(|mask| Monomial { m, mask })
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.vars().cmp(&b.vars())));
    out
}

#[derive(Clone, Debug)]
pub struct RmCode {
    pub r: usize,
    pub m: usize,
    pub monomials: Vec<Monomial>,
    pub generator: BitMatrix,
}

fn check_rm_params(r: usize, m: usize) -> Result<()> {
    if m > MAX_M {
        return Err(Error::InvalidInput(format!("m={m} exceeds the supported maximum {MAX_M}")));
    }
    if r > m {
        return Err(Error::InvalidInput(format!("RM(r,m) needs r ≤ m, got r={r}, m={m}")));
    }
    Ok(())
}

pub fn rm_generator(r: usize, m: usize) -> Result<RmCode> {
    check_rm_params(r, m)?;
    let monomials = monomials_up_to(r, m);
    let rows = monomials.iter().map(monomial_codeword).collect();
    let generator = BitMatrix::from_rows(1 << m, rows)?;
    Ok(RmCode { r, m, monomials, generator })
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn rm_dim(r: usize, m: usize) -> Result<usize> {
    check_rm_params(r, m)?;
    Ok((0..=r).map(|j| binom(m, j) as usize).sum())
}

pub fn rm_distance(r: usize, m: usize) -> Result<usize> {
    check_rm_params(r, m)?;
    Ok(1 << (m - r))
}

/// Checks `RM(r,m) ∧ RM(r2,m) = RM(r+r2,m)`: every pairwise wedge of basis
/// rows lies in `RM(r+r2,m)` and the wedges span it.
pub fn wedge_closure_check(r: usize, r2: usize, m: usize) -> Result<bool> {
    if r + r2 > m {
        return Err(Error::InvalidInput(format!("wedge closure needs r+r' ≤ m, got {r}+{r2} > {m}")));
    }
    let a = rm_generator(r, m)?.generator;
    let b = rm_generator(r2, m)?.generator;
    let target = rm_generator(r + r2, m)?.generator;
    let target_rref = target.rref();
    let mut wedges = BitMatrix::new(1 << m);
    for u in a.rows() {
        for v in b.rows() {
            let w = u.and(v);
            if !crate::f2::reduce_against(&target_rref, &w).is_zero() {
                return Ok(false);
            }
            wedges.push(w)?;
        }
    }
    Ok(wedges.rank() == target_rref.rank)
}

/// Checks `RM(r,m)^⊥ = RM(m−r−1,m)`.
pub fn dual_check(r: usize, m: usize) -> Result<bool> {
    if r >= m {
        return Err(Error::InvalidInput(format!("dual check needs r < m, got r={r}, m={m}")));
    }
    let g = rm_generator(r, m)?.generator;
    let dual = rm_generator(m - r - 1, m)?.generator;
    let kernel = g.kernel_basis();
    if kernel.n_rows() != dual.rank() {
        return Ok(false);
    }
    let kr = kernel.rref();
    Ok(dual.rows().iter().all(|v| crate::f2::reduce_against(&kr, v).is_zero()))
}

/// CNOT circuit preparing the uniform superposition over RM(r,m).
///
/// Qubit `i` carries the label whose point index is `i`. Qubits with label
/// weight ≤ r start in |+⟩, the rest in |0⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncoderSchedule {
    pub r: usize,
    pub m: usize,
    pub plus_qubits: Vec<usize>,
    /// `rounds[j]` holds the `(source, target)` CNOTs of round `j + 1`.
    pub rounds: Vec<Vec<(usize, usize)>>,
}

impl EncoderSchedule {
    pub fn cnot_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }

    pub fn cnots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rounds.iter().flatten().copied()
    }

    /// Largest number of rounds in which any single qubit is touched.
    pub fn depth(&self) -> usize {
        let n = 1usize << self.m;
        let mut touched = vec![0usize; n];
        for round in &self.rounds {
            let mut seen = vec![false; n];
            for &(s, t) in round {
                seen[s] = true;
                seen[t] = true;
            }
            for (c, s) in touched.iter_mut().zip(seen) {
                *c += s as usize;
            }
        }
        touched.into_iter().max().unwrap_or(0)
    }

    /// Classical action: runs the CNOTs on a basis state whose |+⟩ qubits take
    /// the values in `inputs` (one bit per entry of `plus_qubits`).
    pub fn encode(&self, inputs: &BitVec) -> Result<BitVec> {
        crate::error::check_len(self.plus_qubits.len(), inputs.len())?;
        let mut state = BitVec::zeros(1 << self.m);
        for (k, &q) in self.plus_qubits.iter().enumerate() {
            state.set(q, inputs.get(k));
        }
        for (s, t) in self.cnots() {
            if state.get(s) {
                state.flip(t);
            }
        }
        Ok(state)
    }
}

pub fn encoder_schedule(r: usize, m: usize) -> Result<EncoderSchedule> {
    check_rm_params(r, m)?;
    let n = 1usize << m;
    let plus_qubits = (0..n).filter(|i| i.count_ones() as usize <= r).collect();
    let rounds = (0..m)
        .map(|j| {
            let bit = 1usize << (m - 1 - j);
            (0..n).filter(|i| i & bit == 0).map(|i| (i, i | bit)).collect()
        })
        .collect();
    Ok(EncoderSchedule { r, m, plus_qubits, rounds })
}

/// Outcome of [`triply_even_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriplyEven {
    pub holds: bool,
    /// True when the verdict comes from random sampling rather than full enumeration.
    pub sampled: bool,
}

/// Number of random codewords drawn when the span exceeds the enumeration cap.
pub const TRIPLY_EVEN_SAMPLES: usize = 1_000_000;

/// Checks that every codeword of RM(r,m) has weight divisible by 8.
///
/// Exhaustive when `rm_dim(r,m) ≤ cap_rank`; otherwise draws
/// [`TRIPLY_EVEN_SAMPLES`] random codewords and flags the verdict as sampled.
pub fn triply_even_check(r: usize, m: usize, cap_rank: u32) -> Result<TriplyEven> {
    let code = rm_generator(r, m)?;
    let dim = code.generator.n_rows();
    if dim as u32 <= cap_rank {
        let en = enumeration::enumerate_span_capped(&code.generator, cap_rank)?;
        let holds = en.counts.iter().enumerate().all(|(w, c)| w % 8 == 0 || c == &0u32.into());
        return Ok(TriplyEven { holds, sampled: false });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e1e_0008);
    let n = 1usize << m;
    for _ in 0..TRIPLY_EVEN_SAMPLES {
        let mut v = BitVec::zeros(n);
        for row in code.generator.rows() {
            if rng.random::<bool>() {
                v.xor_assign(row);
            }
        }
        if !v.weight().is_multiple_of(8) {
            return Ok(TriplyEven { holds: false, sampled: true });
        }
    }
    Ok(TriplyEven { holds: true, sampled: true })
}
