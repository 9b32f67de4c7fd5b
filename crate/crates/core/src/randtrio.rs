//! Randomized row-by-row construction of (generalized) triorthogonal matrices.
//!
//! Row `j` is drawn uniformly from the affine solutions of `M_j g_j = rhs`,
//! where `M_j` stacks the earlier rows, their pairwise wedges and the all-ones
//! row. The right-hand side encodes which overlap parities the new row must
//! produce against the rows already drawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec, Solution};
use crate::trio::{verify_generalized, GenTrioMatrix};

pub const DEFAULT_THETA: f64 = 0.5;

/// Total row count `floor(theta * sqrt(n))`.
pub fn default_rows(n: usize, theta: f64) -> usize {
    (theta * (n as f64).sqrt()).floor() as usize
}

/// What the next row must be. CS and CCZ partners are the rows immediately
/// before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    Odd,
    Even,
    /// Position 0 or 1 within a CS pair.
    CsPattern(usize),
    /// Position 0, 1 or 2 within a CCZ triple.
    CczPattern(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub m: BitMatrix,
    pub rhs: BitVec,
}

impl ConstraintSystem {
    pub fn expected_rows(j: usize) -> usize {
        let p = j - 1;
        p + p * p.saturating_sub(1) / 2 + 1
    }
}

/// Constraints for row `j = previous.len() + 1`.
pub fn build_constraints(previous: &[BitVec], kind: RowKind, n: usize) -> Result<ConstraintSystem> {
    let p = previous.len();
    if let Some(r) = previous.iter().find(|r| r.len() != n) {
        return Err(Error::LengthMismatch { expected: n, got: r.len() });
    }
    let partners = match kind {
        RowKind::CsPattern(1) => 1,
        RowKind::CczPattern(2) => 2,
        _ => 0,
    };
    if p < partners {
        return Err(Error::InvalidInput(format!("{kind:?} needs {partners} earlier partner rows")));
    }
    let mut rows = Vec::with_capacity(ConstraintSystem::expected_rows(p + 1));
    let mut rhs = Vec::with_capacity(rows.capacity());
    for (a, g) in previous.iter().enumerate() {
        rows.push(g.clone());
        rhs.push(partners == 1 && a == p - 1);
    }
    for a in 0..p {
        for b in a + 1..p {
            rows.push(previous[a].and(&previous[b]));
            rhs.push(partners == 2 && a == p - 2 && b == p - 1);
        }
    }
    rows.push(BitVec::ones(n));
    rhs.push(kind == RowKind::Odd);
    Ok(ConstraintSystem { m: BitMatrix::from_rows(n, rows)?, rhs: BitVec::from_bools(&rhs) })
}

/// Uniform solution of the system, or `None` when it has none.
pub fn sample_row<R: Rng + ?Sized>(cs: &ConstraintSystem, rng: &mut R) -> Result<Option<BitVec>> {
    match cs.m.solve(&cs.rhs)? {
        Solution::NoSolution => Ok(None),
        Solution::Affine { particular, kernel } => {
            let mut v = particular;
            for k in kernel.rows() {
                if rng.random::<bool>() {
                    v.xor_assign(k);
                }
            }
            Ok(Some(v))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowLog {
    pub step: usize,
    pub kind: RowKind,
    pub constraint_rank: usize,
    /// `None` when the step was infeasible.
    pub row: Option<String>,
}

#[derive(Clone, Debug)]
pub enum Generated {
    Success { matrix: GenTrioMatrix, log: Vec<RowLog> },
    /// `step` is the 1-based index of the row that could not be drawn.
    Failure { step: usize, log: Vec<RowLog> },
}

impl Generated {
    pub fn matrix(&self) -> Option<&GenTrioMatrix> {
        match self {
            Generated::Success { matrix, .. } => Some(matrix),
            Generated::Failure { .. } => None,
        }
    }

    pub fn log(&self) -> &[RowLog] {
        match self {
            Generated::Success { log, .. } | Generated::Failure { log, .. } => log,
        }
    }
}

pub fn generate(n: usize, k_t: usize, k_0: usize, seed: u64) -> Result<Generated> {
    generate_generalized(n, k_t, 0, 0, k_0, seed)
}

/// Draws rows in block order T, CS, CCZ, 0 with a ChaCha8 stream seeded by `seed`.
pub fn generate_generalized(n: usize, k_t: usize, k_cs: usize, k_ccz: usize, k_0: usize, seed: u64) -> Result<Generated> {
    let total = k_t + 2 * k_cs + 3 * k_ccz + k_0;
    if total > n {
        return Err(Error::InvalidInput(format!("{total} rows do not fit in length {n}")));
    }
    let kinds = std::iter::repeat_n(RowKind::Odd, k_t)
        .chain((0..k_cs).flat_map(|_| (0..2).map(RowKind::CsPattern)))
        .chain((0..k_ccz).flat_map(|_| (0..3).map(RowKind::CczPattern)))
        .chain(std::iter::repeat_n(RowKind::Even, k_0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<BitVec> = Vec::with_capacity(total);
    let mut log = Vec::with_capacity(total);
    for (i, kind) in kinds.enumerate() {
        let cs = build_constraints(&rows, kind, n)?;
        let constraint_rank = cs.m.rank();
        let row = sample_row(&cs, &mut rng)?;
        log.push(RowLog { step: i + 1, kind, constraint_rank, row: row.as_ref().map(|r| r.to_string()) });
        match row {
            Some(r) => rows.push(r),
            None => return Ok(Generated::Failure { step: i + 1, log }),
        }
    }
    let mut it = rows.into_iter();
    let mut take = |k: usize| BitMatrix::from_rows(n, it.by_ref().take(k).collect());
    let matrix = GenTrioMatrix::new(n, take(k_t)?, take(2 * k_cs)?, take(3 * k_ccz)?, take(k_0)?)?;
    if !verify_generalized(&matrix) {
        return Err(Error::InvalidInput("generated matrix failed verification".into()));
    }
    Ok(Generated::Success { matrix, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trio::verify_triorthogonal;

    #[test]
    fn first_odd_row_is_weight_parity() {
        let cs = build_constraints(&[], RowKind::Odd, 5).unwrap();
        assert_eq!(cs.m.n_rows(), 1);
        assert_eq!(cs.m.row(0), &BitVec::ones(5));
        assert_eq!(cs.rhs.to_string(), "1");
    }

    #[test]
    fn second_odd_row() {
        let g1: BitVec = "1110000".parse().unwrap();
        let cs = build_constraints(std::slice::from_ref(&g1), RowKind::Odd, 7).unwrap();
        assert_eq!(cs.m.rows(), &[g1, BitVec::ones(7)]);
        assert_eq!(cs.rhs.to_string(), "01");
    }

    #[test]
    fn row_counts() {
        let prev: Vec<BitVec> = (0..5).map(|i| BitVec::unit(9, i)).collect();
        for j in 1..=6 {
            let cs = build_constraints(&prev[..j - 1], RowKind::Even, 9).unwrap();
            assert_eq!(cs.m.n_rows(), ConstraintSystem::expected_rows(j));
            assert!(cs.rhs.is_zero());
        }
    }

    #[test]
    fn ccz_third_row_targets_partner_wedge() {
        let prev: Vec<BitVec> = ["110000", "011000", "000110", "000011"].iter().map(|s| s.parse().unwrap()).collect();
        let cs = build_constraints(&prev, RowKind::CczPattern(2), 6).unwrap();
        let ones: Vec<usize> = cs.rhs.iter_ones().collect();
        assert_eq!(ones.len(), 1);
        assert_eq!(cs.m.row(ones[0]), &prev[2].and(&prev[3]));
        let cs = build_constraints(&prev, RowKind::CsPattern(1), 6).unwrap();
        assert_eq!(cs.rhs.iter_ones().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn unconstrained_and_tiny_odd() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cs = ConstraintSystem { m: BitMatrix::zeros(1, 4), rhs: BitVec::zeros(1) };
        let mut seen = std::collections::HashSet::new();
        for _ in 0..500 {
            seen.insert(sample_row(&cs, &mut rng).unwrap().unwrap());
        }
        assert_eq!(seen.len(), 16);
        let cs = build_constraints(&[], RowKind::Odd, 2).unwrap();
        for _ in 0..100 {
            let v = sample_row(&cs, &mut rng).unwrap().unwrap();
            assert_eq!(v.weight(), 1);
        }
    }

    #[test]
    fn infeasible_iff_no_solution() {
        let g1: BitVec = "1111".parse().unwrap();
        let cs = build_constraints(&[g1], RowKind::Odd, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_row(&cs, &mut rng).unwrap().is_none());
        assert_eq!(cs.m.solve(&cs.rhs).unwrap(), Solution::NoSolution);
    }

    #[test]
    fn sampling_is_uniform() {
        // Solutions of x0 + x1 + x2 = 1, x3 = x4 on five bits: 8 vectors.
        let m = BitMatrix::from_strs(&["11100", "00011"]).unwrap();
        let cs = ConstraintSystem { m, rhs: "10".parse().unwrap() };
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws = 100_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            let v = sample_row(&cs, &mut rng).unwrap().unwrap();
            assert!(cs.m.mul_vec(&v).unwrap() == cs.rhs);
            *counts.entry(v).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 8);
        let e = draws as f64 / 8.0;
        let sigma = (e * (1.0 - 1.0 / 8.0)).sqrt();
        let chi2: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
        for &c in counts.values() {
            assert!((c as f64 - e).abs() < 4.0 * sigma);
        }
        // 7 degrees of freedom; 0.999 quantile is about 24.3.
        assert!(chi2 < 24.3, "chi2 = {chi2}");
    }

    #[test]
    fn single_odd_row() {
        let g = generate(16, 1, 0, 3).unwrap();
        let m = g.matrix().unwrap();
        assert_eq!(m.t().row(0).weight() % 2, 1);
        assert!(verify_triorthogonal(m).unwrap());
    }

    #[test]
    fn generalized_succeeds() {
        for seed in 0..5 {
            let g = generate_generalized(128, 2, 1, 1, 3, seed).unwrap();
            let m = g.matrix().expect("feasible at this size");
            assert!(verify_generalized(m));
            assert_eq!(m.k(), 2 + 2 + 3);
            let kinds: Vec<RowKind> = g.log().iter().map(|r| r.kind).collect();
            let first_even = kinds.iter().position(|k| *k == RowKind::Even).unwrap();
            assert!(kinds[..first_even].iter().all(|k| *k != RowKind::Even));
        }
    }

    #[test]
    fn failure_reports_step() {
        // n = 3 cannot hold two odd rows plus the constraints they create.
        let mut fails = 0;
        for seed in 0..20 {
            if let Generated::Failure { step, log } = generate(3, 3, 0, seed).unwrap() {
                assert_eq!(log.len(), step);
                assert!(log.last().unwrap().row.is_none());
                fails += 1;
            }
        }
        assert!(fails > 0);
    }

    #[test]
    fn seeds_replay() {
        let a = generate(64, 2, 2, 9).unwrap();
        let b = generate(64, 2, 2, 9).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn default_row_count() {
        assert_eq!(default_rows(256, DEFAULT_THETA), 8);
    }
}
