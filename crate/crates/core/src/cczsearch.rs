//! CCZ triples over `RM(m/3 - 1, m)`.
//!
//! A triple is three pairwise disjoint monomials of degree `m/3` whose
//! product is `x1 x2 ... xm`. The code is valid when no three rows drawn
//! from different triples also multiply to the full monomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{reduce_against, BitMatrix, BitVec};
use crate::reedmuller::{rm_generator, Monomial, MAX_M};
use crate::trio::GenTrioMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub a: Monomial,
    pub b: Monomial,
    pub c: Monomial,
}

impl Triple {
    pub fn rows(&self) -> [Monomial; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_valid(&self) -> bool {
        let m = self.a.m;
        let full = full_mask(m);
        let w = m / 3;
        self.rows().iter().all(|x| x.degree() == w && x.m == m)
            && self.a.mask & self.b.mask == 0
            && self.b.mask & self.c.mask == 0
            && self.a.mask & self.c.mask == 0
            && self.a.mask | self.b.mask | self.c.mask == full
    }

    pub fn to_strings(&self) -> [String; 3] {
        self.rows().map(|x| x.to_string())
    }

    pub fn parse(m: usize, parts: &[&str]) -> Result<Triple> {
        let [a, b, c] = parts else {
            return Err(Error::InvalidInput(format!("a triple needs three monomials, got {}", parts.len())));
        };
        let t = Triple { a: Monomial::parse(m, a)?, b: Monomial::parse(m, b)?, c: Monomial::parse(m, c)? };
        if !t.is_valid() {
            return Err(Error::InvalidInput(format!("{parts:?} is not a disjoint cover by degree-{} monomials", m / 3)));
        }
        Ok(t)
    }
}

impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn full_mask(m: usize) -> u32 {
    if m == 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 || !m.is_multiple_of(3) || m > MAX_M {
        return Err(Error::InvalidInput(format!("m must be a positive multiple of 3 up to {MAX_M}, got {m}")));
    }
    Ok(())
}

/// Triples `(u, ū, 0), (0, u, ū), (ū, 0, u)` for `u ∉ {0, 1}`; for `m = 3`
/// the single triple `x1, x2, x3`.
pub fn analytic_triples(m: usize) -> Result<Vec<Triple>> {
    check_m(m)?;
    let mu = m / 3;
    if mu == 1 {
        let x = |v| Monomial::from_vars(3, &[v]);
        return Ok(vec![Triple { a: x(1)?, b: x(2)?, c: x(3)? }]);
    }
    let all = (1u32 << mu) - 1;
    let block = |u: u32, slot: usize| u << (slot * mu);
    Ok((1..all)
        .map(|u| {
            let ub = all ^ u;
            let mono = |mask| Monomial { m, mask };
            Triple {
                a: mono(block(u, 0) | block(ub, 1)),
                b: mono(block(u, 1) | block(ub, 2)),
                c: mono(block(ub, 0) | block(u, 2)),
            }
        })
        .collect())
}

/// Rows `x < y < z` (indices into the flattened `a, b, c` list) that are
/// not one triple yet multiply to the full monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

fn scan_from(masks: &[u32], full: u32, x: usize) -> Option<Witness> {
    let n = masks.len();
    for y in x + 1..n {
        let xy = masks[x] | masks[y];
        for z in y + 1..n {
            if xy | masks[z] == full && !(x / 3 == y / 3 && y / 3 == z / 3) {
                return Some(Witness { x, y, z });
            }
        }
    }
    None
}

fn flat_masks(triples: &[Triple]) -> Vec<u32> {
    triples.iter().flat_map(|t| t.rows().map(|x| x.mask)).collect()
}

fn scan_sequential(masks: &[u32], full: u32) -> Option<Witness> {
    (0..masks.len()).find_map(|x| scan_from(masks, full, x))
}

/// First witness in lexicographic order, or `None`.
pub fn violation_scan(triples: &[Triple]) -> Option<Witness> {
    let m = triples.first()?.a.m;
    let masks = flat_masks(triples);
    let full = full_mask(m);
    if masks.len() < 300 {
        return scan_sequential(&masks, full);
    }
    (0..masks.len()).into_par_iter().find_map_first(|x| scan_from(&masks, full, x))
}

pub const DEFAULT_MAX_RESAMPLES: u64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Success { triples: Vec<Triple>, resamples: u64 },
    GaveUp { last_violation: Witness, resamples: u64 },
}

impl SearchOutcome {
    pub fn triples(&self) -> Option<&[Triple]> {
        match self {
            SearchOutcome::Success { triples, .. } => Some(triples),
            SearchOutcome::GaveUp { .. } => None,
        }
    }
}

fn random_triple(m: usize, rng: &mut ChaCha8Rng) -> Triple {
    let mut vars: Vec<usize> = (0..m).collect();
    vars.shuffle(rng);
    let w = m / 3;
    let mask = |s: &[usize]| s.iter().fold(0u32, |acc, &j| acc | 1 << j);
    let mono = |s: &[usize]| Monomial { m, mask: mask(s) };
    Triple { a: mono(&vars[..w]), b: mono(&vars[w..2 * w]), c: mono(&vars[2 * w..]) }
}

/// Moser–Tardos resampling. With `shuffle`, the triple order is permuted
/// after every resample.
pub fn moser_tardos(m: usize, k_ccz: usize, seed: u64, max_resamples: u64, shuffle: bool) -> Result<SearchOutcome> {
    check_m(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples: Vec<Triple> = (0..k_ccz).map(|_| random_triple(m, &mut rng)).collect();
    let full = full_mask(m);
    let mut resamples = 0u64;
    loop {
        let masks = flat_masks(&triples);
        let Some(w) = scan_sequential(&masks, full) else {
            return Ok(SearchOutcome::Success { triples, resamples });
        };
        if resamples >= max_resamples {
            return Ok(SearchOutcome::GaveUp { last_violation: w, resamples });
        }
        let mut hit = vec![w.x / 3, w.y / 3, w.z / 3];
        hit.dedup();
        for i in hit {
            triples[i] = random_triple(m, &mut rng);
        }
        resamples += 1;
        if shuffle {
            triples.shuffle(&mut rng);
        }
    }
}

/// CCZ rows from the triples over `G0 = RM(m/3 - 1, m)`.
pub fn to_gen_trio(m: usize, triples: &[Triple]) -> Result<GenTrioMatrix> {
    check_m(m)?;
    let n = 1usize << m;
    let rows: Vec<BitVec> = triples.iter().flat_map(|t| t.rows().map(|x| x.codeword())).collect();
    let g0 = rm_generator(m / 3 - 1, m)?.generator;
    GenTrioMatrix::new(n, BitMatrix::new(n), BitMatrix::new(n), BitMatrix::from_rows(n, rows)?, g0)
}

fn binom_big(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LllBudget {
    /// Bound on a three-triple bad event.
    pub p3: BigRational,
    /// Bound on a two-triple bad event.
    pub p2: BigRational,
    /// `2^{m (H(1/3) - 1/3)}`.
    pub n_max: f64,
}

fn entropy(p: f64) -> f64 {
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

pub fn lll_budget(m: usize) -> Result<LllBudget> {
    if m == 0 || !m.is_multiple_of(3) {
        return Err(Error::InvalidInput(format!("m must be a positive multiple of 3, got {m}")));
    }
    let w = m / 3;
    let c = binom_big(m, w);
    let p3 = BigRational::new(BigInt::from(27) * binom_big(2 * w, w), &c * &c);
    let p2 = BigRational::new(BigInt::from(18), c);
    let n_max = (m as f64 * (entropy(1.0 / 3.0) - 1.0 / 3.0)).exp2();
    Ok(LllBudget { p3, p2, n_max })
}

/// Whether `n^2 p3 + n p2 <= 1/4`, the sufficient condition for `n` triples.
pub fn lll_condition(b: &LllBudget, n: usize) -> bool {
    let n = BigRational::from_integer(BigInt::from(n));
    let lhs = &n * &n * &b.p3 + &n * &b.p2;
    lhs <= BigRational::new(BigInt::one(), BigInt::from(4))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug)]
pub struct G0Extension {
    pub matrix: GenTrioMatrix,
    pub added: Vec<BitVec>,
    /// Basis vectors of the final `(G^{∧2})^⊥` outside `span(G0)`.
    pub non_addable: Vec<BitVec>,
}

impl G0Extension {
    pub fn maximal(&self) -> bool {
        self.non_addable.is_empty()
    }
}

fn wedge_square_dual(rows: &[BitVec], n: usize) -> Result<BitMatrix> {
    let mut w = Vec::with_capacity(rows.len() * (rows.len() + 1) / 2);
    for a in 0..rows.len() {
        w.push(rows[a].clone());
        for b in a + 1..rows.len() {
            w.push(rows[a].and(&rows[b]));
        }
    }
    Ok(BitMatrix::from_rows(n, w)?.basis().kernel_basis())
}

fn bit_order_key(v: &BitVec) -> (usize, Vec<bool>) {
    (v.weight(), v.to_bools())
}

/// Greedily grows `G0` inside `(G^{∧2})^⊥`. Each step adds the lightest,
/// then lexicographically first, even-weight vector among the dual basis
/// reduced modulo `G0`, or the sum of the first two odd ones.
pub fn extend_g0(g: &GenTrioMatrix) -> Result<G0Extension> {
    let n = g.n();
    let mut g0 = g.g0().clone();
    let mut added = Vec::new();
    loop {
        let current = GenTrioMatrix::new(n, g.t().clone(), g.cs().clone(), g.ccz().clone(), g0.clone())?;
        let mut gap = maximality_gap(&current)?;
        gap.sort_by_key(bit_order_key);
        let pick = match gap.iter().find(|v| v.weight() % 2 == 0) {
            Some(v) => Some(v.clone()),
            None if gap.len() >= 2 => Some(gap[0].xor(&gap[1])),
            None => None,
        };
        let Some(v) = pick else {
            return Ok(G0Extension { matrix: current, added, non_addable: gap });
        };
        g0.push(v.clone())?;
        added.push(v);
    }
}

/// Basis vectors of `(G^{∧2})^⊥` not in `span(G0)`; empty when maximal.
pub fn maximality_gap(g: &GenTrioMatrix) -> Result<Vec<BitVec>> {
    let dual = wedge_square_dual(g.full_matrix().rows(), g.n())?;
    let g0 = g.g0().rref();
    let reduced: Vec<BitVec> = dual.rows().iter().map(|v| reduce_against(&g0, v)).collect();
    Ok(BitMatrix::from_rows(g.n(), reduced)?.basis().into_rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::{m6_code, m9_code, M6_CCZ, M6_G0, M9_CCZ};
    use crate::trio::verify_generalized;
    use std::collections::BTreeSet;

    fn triple_set(ts: &[Triple], perm: &[usize]) -> BTreeSet<BTreeSet<u32>> {
        let map = |mask: u32| (0..perm.len()).filter(|j| mask >> j & 1 == 1).fold(0u32, |acc, j| acc | 1 << perm[j]);
        ts.iter().map(|t| t.rows().iter().map(|x| map(x.mask)).collect()).collect()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn listed_triples(m: usize, flat: &[&str]) -> Vec<Triple> {
        flat.chunks(3).map(|c| Triple::parse(m, c).unwrap()).collect()
    }

    #[test]
    fn analytic_sizes_and_validity() {
        for m in [3, 6, 9, 12] {
            let ts = analytic_triples(m).unwrap();
            let want = if m == 3 { 1 } else { (1 << (m / 3)) - 2 };
            assert_eq!(ts.len(), want);
            assert!(ts.iter().all(Triple::is_valid));
            assert_eq!(violation_scan(&ts), None, "m = {m}");
            assert!(verify_generalized(&to_gen_trio(m, &ts).unwrap()));
        }
    }

    #[test]
    fn analytic_m6_matches_listed_triples_up_to_relabeling() {
        let ours = analytic_triples(6).unwrap();
        let target = triple_set(&listed_triples(6, &M6_CCZ), &[0, 1, 2, 3, 4, 5]);
        assert!(permutations(6).iter().any(|p| triple_set(&ours, p) == target));
    }

    #[test]
    fn scan_examples() {
        let t = analytic_triples(6).unwrap()[0];
        assert_eq!(violation_scan(&[t]), None);
        let w = violation_scan(&[t, t]).unwrap();
        assert_eq!((w.x, w.y, w.z), (0, 1, 5));
        assert_eq!(violation_scan(&listed_triples(9, &M9_CCZ)), None);
    }

    #[test]
    fn parallel_scan_agrees_with_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ts: Vec<Triple> = (0..120).map(|_| random_triple(9, &mut rng)).collect();
        let masks = flat_masks(&ts);
        assert_eq!(violation_scan(&ts), scan_sequential(&masks, full_mask(9)));
    }

    #[test]
    fn moser_tardos_m6_and_m9() {
        for seed in 0..4 {
            let out = moser_tardos(6, 2, seed, DEFAULT_MAX_RESAMPLES, false).unwrap();
            let ts = out.triples().expect("m = 6 with two triples is feasible");
            assert_eq!(violation_scan(ts), None);
            assert!(verify_generalized(&to_gen_trio(6, ts).unwrap()));
        }
        let out = moser_tardos(9, 6, 1, DEFAULT_MAX_RESAMPLES, true).unwrap();
        assert!(verify_generalized(&to_gen_trio(9, out.triples().unwrap()).unwrap()));
    }

    #[test]
    fn moser_tardos_gives_up_when_overfull() {
        let out = moser_tardos(9, 30, 0, 2_000, false).unwrap();
        assert!(matches!(out, SearchOutcome::GaveUp { resamples: 2_000, .. }));
    }

    #[test]
    fn lll_values() {
        let b3 = lll_budget(3).unwrap();
        assert_eq!(b3.p2, BigRational::from_integer(6.into()));
        let b9 = lll_budget(9).unwrap();
        assert_eq!(b9.p3, BigRational::new(540.into(), 7056.into()));
        assert!(!lll_condition(&b9, 10));
        assert!((b9.n_max.log2() - 5.2647).abs() < 1e-3);
        let mut prev = lll_budget(6).unwrap();
        for m in [9, 12, 15, 18] {
            let b = lll_budget(m).unwrap();
            assert!(b.p3 < prev.p3 && b.p2 < prev.p2);
            prev = b;
        }
        let slope = lll_budget(300).unwrap().n_max.log2() / 300.0;
        assert!((slope - 0.585).abs() < 1e-3);
    }

    #[test]
    fn m3_is_maximal() {
        let g = to_gen_trio(3, &analytic_triples(3).unwrap()).unwrap();
        let ext = extend_g0(&g).unwrap();
        assert!(ext.added.is_empty());
        assert!(ext.maximal());
    }

    #[test]
    fn m6_extension_reaches_listed_g0() {
        let g = to_gen_trio(6, &listed_triples(6, &M6_CCZ)).unwrap();
        let ext = extend_g0(&g).unwrap();
        assert!(ext.maximal());
        assert!(verify_generalized(&ext.matrix));
        let listed = m6_code();
        assert_eq!(listed.g0().n_rows(), M6_G0.len());
        assert_eq!(ext.matrix.g0().rref().matrix, listed.g0().rref().matrix);
    }

    #[test]
    fn listed_codes_are_maximal() {
        assert!(maximality_gap(&m6_code()).unwrap().is_empty());
        assert!(maximality_gap(&m9_code()).unwrap().is_empty());
    }

    #[test]
    fn extension_keeps_verification() {
        let g = to_gen_trio(9, &analytic_triples(9).unwrap()).unwrap();
        let ext = extend_g0(&g).unwrap();
        assert!(ext.matrix.k_0() >= g.k_0());
        assert!(verify_generalized(&ext.matrix));
        assert!(ext.maximal());
    }

    #[test]
    fn triple_serialization() {
        let t = listed_triples(9, &M9_CCZ[..3])[0];
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"["x4 x5 x7","x2 x6 x8","x1 x3 x9"]"#);
    }
}
