//! Generalized triorthogonal matrices and the code operations built on them.
//!
//! A [`GenTrioMatrix`] stacks four blocks over a common length `n`:
//! `T` rows (one logical T each), `CS` rows in consecutive pairs, `CCZ` rows
//! in consecutive triples, and `G0` rows (X-stabilizers).
//!
//! Triple overlaps `|g_a ∧ g_b ∧ g_c| mod 2` are symmetric, and for repeated
//! indices they collapse to pair overlaps or weights. The checks therefore
//! run over weights, unordered pairs and unordered distinct triples:
//!
//! | rows                        | required parity |
//! |-----------------------------|-----------------|
//! | weight of a `T` row         | 1               |
//! | overlap of a `CS` pair      | 1               |
//! | distinct rows of a `CCZ` triple | 1           |
//! | anything else               | 0               |

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::f2::{reduce_against, BitMatrix, BitVec};
use crate::lowweight::{scan_cost, ScanOptions, Scanner};

/// Role of a row in the stacked matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowRole {
    T(usize),
    /// `(pair index, position 0 or 1)`.
    Cs(usize, usize),
    /// `(triple index, position 0..3)`.
    Ccz(usize, usize),
    Zero(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenTrioMatrix {
    n: usize,
    t: BitMatrix,
    cs: BitMatrix,
    ccz: BitMatrix,
    g0: BitMatrix,
}

/// The offending rows of a failed check (indices into the stacked matrix;
/// repeated indices mean a weight or pair overlap).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub expected: bool,
    pub got: bool,
}

impl GenTrioMatrix {
    pub fn new(n: usize, t: BitMatrix, cs: BitMatrix, ccz: BitMatrix, g0: BitMatrix) -> Result<Self> {
        for (name, block) in [("T", &t), ("CS", &cs), ("CCZ", &ccz), ("0", &g0)] {
            if block.n_rows() > 0 && block.n_cols() != n {
                return Err(Error::BlockMismatch(format!(
                    "block {name} has {} columns, expected {n}",
                    block.n_cols()
                )));
            }
        }
        if !cs.n_rows().is_multiple_of(2) {
            return Err(Error::BlockMismatch("CS block must have an even number of rows".into()));
        }
        if !ccz.n_rows().is_multiple_of(3) {
            return Err(Error::BlockMismatch("CCZ block must have a multiple of three rows".into()));
        }
        let fix = |m: BitMatrix| if m.n_rows() == 0 { BitMatrix::new(n) } else { m };
        Ok(GenTrioMatrix { n, t: fix(t), cs: fix(cs), ccz: fix(ccz), g0: fix(g0) })
    }

    /// Plain triorthogonal matrix (no CS or CCZ rows).
    pub fn plain(n: usize, t: BitMatrix, g0: BitMatrix) -> Result<Self> {
        Self::new(n, t, BitMatrix::new(n), BitMatrix::new(n), g0)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn t(&self) -> &BitMatrix {
        &self.t
    }
    pub fn cs(&self) -> &BitMatrix {
        &self.cs
    }
    pub fn ccz(&self) -> &BitMatrix {
        &self.ccz
    }
    pub fn g0(&self) -> &BitMatrix {
        &self.g0
    }
    pub fn k_t(&self) -> usize {
        self.t.n_rows()
    }
    pub fn k_cs(&self) -> usize {
        self.cs.n_rows() / 2
    }
    pub fn k_ccz(&self) -> usize {
        self.ccz.n_rows() / 3
    }
    pub fn k_0(&self) -> usize {
        self.g0.n_rows()
    }

    /// Number of logical qubits, `k_T + 2 k_CS + 3 k_CCZ`.
    pub fn k(&self) -> usize {
        self.k_t() + 2 * self.k_cs() + 3 * self.k_ccz()
    }

    pub fn is_plain(&self) -> bool {
        self.k_cs() == 0 && self.k_ccz() == 0
    }

    /// T, CS and CCZ rows stacked.
    pub fn logical_rows(&self) -> BitMatrix {
        let mut rows = self.t.rows().to_vec();
        rows.extend_from_slice(self.cs.rows());
        rows.extend_from_slice(self.ccz.rows());
        BitMatrix::from_rows(self.n, rows).expect("blocks share n")
    }

    /// All four blocks stacked in order T, CS, CCZ, 0.
    pub fn full_matrix(&self) -> BitMatrix {
        let mut rows = self.logical_rows().into_rows();
        rows.extend_from_slice(self.g0.rows());
        BitMatrix::from_rows(self.n, rows).expect("blocks share n")
    }

    pub fn role(&self, row: usize) -> RowRole {
        let (kt, kc, kz) = (self.k_t(), self.cs.n_rows(), self.ccz.n_rows());
        if row < kt {
            RowRole::T(row)
        } else if row < kt + kc {
            let r = row - kt;
            RowRole::Cs(r / 2, r % 2)
        } else if row < kt + kc + kz {
            let r = row - kt - kc;
            RowRole::Ccz(r / 3, r % 3)
        } else {
            RowRole::Zero(row - kt - kc - kz)
        }
    }

    /// Z-stabilizers: a basis of `span(G)^⊥`.
    pub fn z_stabilizers(&self) -> BitMatrix {
        self.full_matrix().kernel_basis()
    }

    /// Rows of `G0` in reduced echelon form and `T` rows reduced against them;
    /// the form [`puncture`] returns for a padded plain matrix.
    pub fn canonical(&self) -> GenTrioMatrix {
        let r = self.g0.rref();
        let red = |m: &BitMatrix| {
            BitMatrix::from_rows(self.n, m.rows().iter().map(|v| reduce_against(&r, v)).collect())
                .expect("same length")
        };
        GenTrioMatrix {
            n: self.n,
            t: red(&self.t),
            cs: red(&self.cs),
            ccz: red(&self.ccz),
            g0: r.matrix,
        }
    }
}

fn expected_pair(roles: (RowRole, RowRole)) -> bool {
    matches!(roles, (RowRole::Cs(p, _), RowRole::Cs(q, _)) if p == q)
}

fn expected_triple(roles: (RowRole, RowRole, RowRole)) -> bool {
    matches!(roles, (RowRole::Ccz(p, _), RowRole::Ccz(q, _), RowRole::Ccz(r, _)) if p == q && q == r)
}

/// Full generalized check; returns the first violation in index order.
pub fn check_generalized(g: &GenTrioMatrix) -> Option<Violation> {
    let full = g.full_matrix();
    let rows = full.rows();
    let m = rows.len();
    for a in 0..m {
        let expected = matches!(g.role(a), RowRole::T(_));
        let got = rows[a].weight() % 2 == 1;
        if got != expected {
            return Some(Violation { a, b: a, c: a, expected, got });
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let expected = expected_pair((g.role(a), g.role(b)));
            let got = rows[a].dot(&rows[b]);
            if got != expected {
                return Some(Violation { a, b, c: b, expected, got });
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let ab = rows[a].and(&rows[b]);
            for c in b + 1..m {
                let expected = expected_triple((g.role(a), g.role(b), g.role(c)));
                let got = ab.dot(&rows[c]);
                if got != expected {
                    return Some(Violation { a, b, c, expected, got });
                }
            }
        }
    }
    None
}

pub fn verify_generalized(g: &GenTrioMatrix) -> bool {
    check_generalized(g).is_none()
}

/// Plain triorthogonality check. Errors when CS or CCZ rows are present.
pub fn check_triorthogonal(g: &GenTrioMatrix) -> Result<Option<Violation>> {
    if !g.is_plain() {
        return Err(Error::InvalidInput("plain triorthogonality check needs k_CS = k_CCZ = 0".into()));
    }
    Ok(check_generalized(g))
}

pub fn verify_triorthogonal(g: &GenTrioMatrix) -> Result<bool> {
    Ok(check_triorthogonal(g)?.is_none())
}

/// First violation of "every triple of vectors in the span has even overlap".
pub fn check_triorthogonal_space(m: &BitMatrix) -> Option<Violation> {
    let g = GenTrioMatrix::plain(m.n_cols(), BitMatrix::new(m.n_cols()), m.clone()).expect("single block");
    check_generalized(&g)
}

pub fn is_triorthogonal_space(m: &BitMatrix) -> bool {
    check_triorthogonal_space(m).is_none()
}

/// `[I G_T; 0 G_0]`, with the identity block on the first `k_T` columns.
pub fn pad(g: &GenTrioMatrix) -> Result<BitMatrix> {
    if !g.is_plain() {
        return Err(Error::InvalidInput("padding needs a plain triorthogonal matrix".into()));
    }
    let kt = g.k_t();
    let top = BitMatrix::identity(kt).hconcat(g.t())?;
    let bottom = BitMatrix::zeros(g.k_0(), kt).hconcat(g.g0())?;
    let mut rows = top.into_rows();
    rows.extend(bottom.into_rows());
    BitMatrix::from_rows(kt + g.n(), rows)
}

/// Punctures `space` on `coords`.
///
/// The reduced echelon form is taken with the punctured columns ordered
/// first. Rows pivoting inside `coords` become logical rows, assigned in
/// pivot order to `k_t` T rows, `k_cs` pairs and `k_ccz` triples; the other
/// rows form `G0`. Remaining columns keep their original relative order.
pub fn puncture(space: &BitMatrix, coords: &[usize], k_t: usize, k_cs: usize, k_ccz: usize) -> Result<GenTrioMatrix> {
    let n = space.n_cols();
    let mut is_punct = vec![false; n];
    for &c in coords {
        if c >= n {
            return Err(Error::InvalidInput(format!("puncture coordinate {c} out of range for length {n}")));
        }
        if is_punct[c] {
            return Err(Error::InvalidInput(format!("puncture coordinate {c} repeated")));
        }
        is_punct[c] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&c| !is_punct[c]).collect();
    let mut order = coords.to_vec();
    order.extend_from_slice(&rest);
    let rref = space.permute_columns(&order).rref();
    let p = coords.len();
    let tail: Vec<usize> = (p..n).collect();
    let mut logical = Vec::new();
    let mut g0 = Vec::new();
    for (row, &piv) in rref.matrix.rows().iter().zip(&rref.pivots) {
        let r = row.select(&tail);
        if piv < p {
            logical.push(r);
        } else {
            g0.push(r);
        }
    }
    let want = k_t + 2 * k_cs + 3 * k_ccz;
    if logical.len() != want {
        return Err(Error::BlockMismatch(format!(
            "puncturing produced {} logical rows but the block sizes need {want}",
            logical.len()
        )));
    }
    let m = n - p;
    let ccz = logical.split_off(k_t + 2 * k_cs);
    let cs = logical.split_off(k_t);
    GenTrioMatrix::new(
        m,
        BitMatrix::from_rows(m, logical)?,
        BitMatrix::from_rows(m, cs)?,
        BitMatrix::from_rows(m, ccz)?,
        BitMatrix::from_rows(m, g0)?,
    )
}

/// `[F_T G_T; F_CS G_CS; F_CCZ G_CCZ; 0 G_0; F_0 0]`.
pub fn combine_pad(g: &GenTrioMatrix, f: &GenTrioMatrix) -> Result<BitMatrix> {
    if g.k_t() != f.k_t() || g.k_cs() != f.k_cs() || g.k_ccz() != f.k_ccz() {
        return Err(Error::BlockMismatch(format!(
            "block sizes differ: G has ({},{},{}), F has ({},{},{})",
            g.k_t(),
            g.k_cs(),
            g.k_ccz(),
            f.k_t(),
            f.k_cs(),
            f.k_ccz()
        )));
    }
    let width = f.n() + g.n();
    let mut rows = Vec::new();
    for (fr, gr) in f.logical_rows().rows().iter().zip(g.logical_rows().rows()) {
        rows.push(fr.concat(gr));
    }
    for gr in g.g0().rows() {
        rows.push(BitVec::zeros(f.n()).concat(gr));
    }
    for fr in f.g0().rows() {
        rows.push(fr.concat(&BitVec::zeros(g.n())));
    }
    BitMatrix::from_rows(width, rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    Exhaustive,
    Macwilliams,
    BoundOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceRequest {
    ExhaustiveLowWeight,
    Macwilliams,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub d_method: DistanceMethod,
    /// Proven lower bound on the distance (equals `d` when `d` is known).
    pub d_lower_bound: usize,
    /// Number of minimum-weight Z-logicals, when the method produced it.
    pub a_d: Option<String>,
}

/// Operation budget for exhaustive scans in `auto` mode.
pub const AUTO_SCAN_BUDGET: f64 = 2e9;
/// Largest `rank(G)` for which `auto` falls back to MacWilliams.
pub const AUTO_MACWILLIAMS_RANK: usize = 30;

/// Z-distance of `g`.
///
/// The exhaustive method scans weights `1..=weight_cap`; if nothing is found
/// the result is a lower bound. `auto` scans while the estimated cost of the
/// next weight stays within [`AUTO_SCAN_BUDGET`], then tries MacWilliams when
/// `rank(G) ≤ 30`, else reports a bound.
pub fn z_distance(g: &GenTrioMatrix, method: DistanceRequest, weight_cap: usize) -> Result<CodeSummary> {
    let n = g.n();
    let k = g.k();
    let opts = ScanOptions::default();
    let exhaustive = |cap: usize| -> Result<CodeSummary> {
        let sc = Scanner::new(g.g0(), &g.logical_rows())?;
        for w in 1..=cap.min(n) {
            let s = sc.scan(w, &opts)?;
            if s.logical > 0 {
                return Ok(CodeSummary {
                    n,
                    k,
                    d: Some(w),
                    d_method: DistanceMethod::Exhaustive,
                    d_lower_bound: w,
                    a_d: Some(s.logical.to_string()),
                });
            }
        }
        Ok(CodeSummary {
            n,
            k,
            d: None,
            d_method: DistanceMethod::BoundOnly,
            d_lower_bound: cap.min(n) + 1,
            a_d: None,
        })
    };
    let macwilliams = |cap: u32| -> Result<CodeSummary> {
        use crate::enumeration::{enumerate_span_capped, macwilliams};
        let g0 = g.g0();
        let full = g.full_matrix();
        let d0 = macwilliams(&enumerate_span_capped(g0, cap)?, g0.rank())?;
        let df = macwilliams(&enumerate_span_capped(&full, cap)?, full.rank())?;
        for w in 1..=n {
            if d0.counts[w] != df.counts[w] {
                let a = &d0.counts[w] - &df.counts[w];
                return Ok(CodeSummary {
                    n,
                    k,
                    d: Some(w),
                    d_method: DistanceMethod::Macwilliams,
                    d_lower_bound: w,
                    a_d: Some(a.to_string()),
                });
            }
        }
        Err(Error::InvalidInput("code has no logical qubits".into()))
    };
    if k == 0 {
        return Err(Error::InvalidInput("code has no logical qubits".into()));
    }
    match method {
        DistanceRequest::ExhaustiveLowWeight => exhaustive(weight_cap),
        DistanceRequest::Macwilliams => macwilliams(crate::enumeration::DEFAULT_ENUM_CAP),
        DistanceRequest::Auto => {
            let mut cap = 0;
            while cap < weight_cap.min(crate::lowweight::MAX_SCAN_WEIGHT)
                && scan_cost(n, cap + 1, opts.max_entries) <= AUTO_SCAN_BUDGET
            {
                cap += 1;
            }
            let s = exhaustive(cap)?;
            if s.d.is_some() {
                return Ok(s);
            }
            if g.full_matrix().rank() <= AUTO_MACWILLIAMS_RANK {
                return macwilliams(AUTO_MACWILLIAMS_RANK as u32);
            }
            Ok(s)
        }
    }
}

/// Adds new coordinates and X-stabilizers `[I G'; 0 G0]`.
///
/// Each row of `g_prime` must be a T row of `g` up to an element of
/// `span(G0)`; those T rows leave the logical block. New coordinates are
/// prepended, and remaining logical rows get zeros there.
pub fn unpuncture(g: &GenTrioMatrix, g_prime: &BitMatrix) -> Result<GenTrioMatrix> {
    let r = g_prime.n_rows();
    if r == 0 {
        return Ok(g.clone());
    }
    check_len(g.n(), g_prime.n_cols())?;
    let g0r = g.g0().rref();
    let reduced_t: Vec<BitVec> = g.t().rows().iter().map(|t| reduce_against(&g0r, t)).collect();
    let mut moved = vec![false; g.k_t()];
    for (i, row) in g_prime.rows().iter().enumerate() {
        let red = reduce_against(&g0r, row);
        let hit = (0..g.k_t()).find(|&j| !moved[j] && reduced_t[j] == red).ok_or_else(|| {
            Error::BlockMismatch(format!("row {i} of G' is not a T row of the code modulo G0"))
        })?;
        moved[hit] = true;
    }
    let n2 = g.n() + r;
    let zpad = BitVec::zeros(r);
    let pad_rows = |m: &BitMatrix| -> Result<BitMatrix> {
        BitMatrix::from_rows(n2, m.rows().iter().map(|v| zpad.concat(v)).collect())
    };
    let t_keep: Vec<BitVec> = g
        .t()
        .rows()
        .iter()
        .zip(&moved)
        .filter(|(_, &mv)| !mv)
        .map(|(v, _)| zpad.concat(v))
        .collect();
    let mut g0_rows: Vec<BitVec> = g_prime.rows().iter().enumerate().map(|(i, v)| BitVec::unit(r, i).concat(v)).collect();
    g0_rows.extend(g.g0().rows().iter().map(|v| zpad.concat(v)));
    GenTrioMatrix::new(
        n2,
        BitMatrix::from_rows(n2, t_keep)?,
        pad_rows(g.cs())?,
        pad_rows(g.ccz())?,
        BitMatrix::from_rows(n2, g0_rows)?,
    )
}

/// Picks T rows of `g` that anticommute with every listed Z-logical.
///
/// Each step takes the row catching the most not-yet-caught logicals; ties go
/// to the lowest row index.
pub fn greedy_catch(g: &GenTrioMatrix, logicals: &[BitVec]) -> Result<BitMatrix> {
    if logicals.is_empty() {
        return Err(Error::InvalidInput("greedy_catch needs at least one logical".into()));
    }
    for l in logicals {
        check_len(g.n(), l.len())?;
    }
    let cands = g.t().rows();
    for (i, l) in logicals.iter().enumerate() {
        if cands.iter().all(|c| !c.dot(l)) {
            return Err(Error::UnCatchable(i));
        }
    }
    let mut caught = vec![false; logicals.len()];
    let mut used = vec![false; cands.len()];
    let mut chosen = BitMatrix::new(g.n());
    while caught.iter().any(|c| !c) {
        let (best, gain) = cands
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, c)| {
                let gain = logicals.iter().zip(&caught).filter(|(l, &cg)| !cg && c.dot(l)).count();
                (j, gain)
            })
            .fold((usize::MAX, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if gain == 0 {
            let i = caught.iter().position(|c| !c).expect("some uncaught");
            return Err(Error::UnCatchable(i));
        }
        used[best] = true;
        for (l, cg) in logicals.iter().zip(caught.iter_mut()) {
            if cands[best].dot(l) {
                *cg = true;
            }
        }
        chosen.push(cands[best].clone())?;
    }
    Ok(chosen)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightModReport {
    /// Every element of `span(G0)` has weight divisible by 8.
    pub stabilizers_mod8: bool,
    /// Every T row has weight 7 mod 8.
    pub logicals_mod8_is_7: bool,
    /// True when the stabilizer check used random sampling.
    pub sampled: bool,
}

impl WeightModReport {
    pub fn pass(&self) -> bool {
        self.stabilizers_mod8 && self.logicals_mod8_is_7
    }
}

/// Spans of rank at most this are checked exhaustively.
pub const WEIGHT_MOD_EXHAUSTIVE_RANK: usize = 24;
pub const WEIGHT_MOD_SAMPLES: usize = 200_000;

/// Checks the mod-8 weight structure of codes punctured from triply even spaces.
pub fn weight_mod_properties(g: &GenTrioMatrix) -> WeightModReport {
    use rand::{Rng, SeedableRng};
    let logicals_mod8_is_7 = g.logical_rows().rows().iter().all(|r| r.weight() % 8 == 7);
    let basis = g.g0().basis().into_rows();
    let (stabilizers_mod8, sampled) = if basis.len() <= WEIGHT_MOD_EXHAUSTIVE_RANK {
        let mut ok = true;
        crate::f2::for_each_in_partition(&basis, 0, 0, |w| {
            let wt: u32 = w.iter().map(|x| x.count_ones()).sum();
            ok &= wt.is_multiple_of(8);
        });
        (ok, false)
    } else {
        // Basis rows exactly, combinations by random draws.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x8888);
        let mut ok = basis.iter().all(|b| b.weight() % 8 == 0);
        for _ in 0..WEIGHT_MOD_SAMPLES {
            if !ok {
                break;
            }
            let mut v = BitVec::zeros(g.n());
            for b in &basis {
                if rng.random::<bool>() {
                    v.xor_assign(b);
                }
            }
            ok &= v.weight().is_multiple_of(8);
        }
        (ok, true)
    };
    WeightModReport { stabilizers_mod8, logicals_mod8_is_7, sampled }
}

/// Minimum weight of a nonzero Z-stabilizer for a code punctured from `RM(r, m)`:
/// those stabilizers extend by zeros to words of `RM(m−r−1, m)`.
pub fn rm_punctured_min_stabilizer_weight(r: usize) -> usize {
    1 << (r + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reedmuller::{rm_generator, Monomial};

    fn mono_rows(m: usize, monos: &[&[usize]]) -> BitMatrix {
        let rows = monos.iter().map(|v| Monomial::from_vars(m, v).unwrap().codeword()).collect();
        BitMatrix::from_rows(1 << m, rows).unwrap()
    }

    fn m3_code() -> GenTrioMatrix {
        let n = 8;
        GenTrioMatrix::new(
            n,
            BitMatrix::new(n),
            BitMatrix::new(n),
            mono_rows(3, &[&[1], &[2], &[3]]),
            mono_rows(3, &[&[]]),
        )
        .unwrap()
    }

    #[test]
    fn m3_is_generalized_triorthogonal() {
        let g = m3_code();
        assert_eq!(g.k(), 3);
        assert!(verify_generalized(&g));
    }

    #[test]
    fn even_row_alone_is_fine() {
        let g = GenTrioMatrix::plain(4, BitMatrix::new(4), BitMatrix::from_strs(&["1100"]).unwrap()).unwrap();
        assert!(verify_triorthogonal(&g).unwrap());
    }

    #[test]
    fn rm13_as_g0_fails_with_witness() {
        let g0 = rm_generator(1, 3).unwrap().generator;
        let g = GenTrioMatrix::plain(8, BitMatrix::new(8), g0).unwrap();
        let v = check_triorthogonal(&g).unwrap().expect("violation");
        assert!(v.a < v.b && v.b < v.c);
        assert!(v.got && !v.expected);
    }

    #[test]
    fn rm16_is_a_triorthogonal_space() {
        assert!(is_triorthogonal_space(&rm_generator(1, 6).unwrap().generator));
    }

    #[test]
    fn cs_pair_checks() {
        // Rows 1100 and 1010 overlap once and have even weight.
        let n = 4;
        let cs = BitMatrix::from_strs(&["1100", "1010"]).unwrap();
        let g = GenTrioMatrix::new(n, BitMatrix::new(n), cs, BitMatrix::new(n), BitMatrix::new(n)).unwrap();
        assert!(verify_generalized(&g));
        let cs_bad = BitMatrix::from_strs(&["1100", "0011"]).unwrap();
        let g = GenTrioMatrix::new(n, BitMatrix::new(n), cs_bad, BitMatrix::new(n), BitMatrix::new(n)).unwrap();
        assert!(!verify_generalized(&g));
    }

    #[test]
    fn pad_examples() {
        let g = GenTrioMatrix::plain(1, BitMatrix::from_strs(&["1"]).unwrap(), BitMatrix::new(1)).unwrap();
        let p = pad(&g).unwrap();
        assert_eq!(p, BitMatrix::from_strs(&["11"]).unwrap());
        assert!(is_triorthogonal_space(&p));
    }

    #[test]
    fn puncture_zero_coords_is_rref() {
        let space = rm_generator(1, 4).unwrap().generator;
        let g = puncture(&space, &[], 0, 0, 0).unwrap();
        assert_eq!(g.k(), 0);
        assert_eq!(g.g0(), &space.rref().matrix);
    }

    #[test]
    fn puncture_pad_round_trip_small() {
        let space = rm_generator(1, 5).unwrap().generator;
        let g = puncture(&space, &[0, 7, 19], 3, 0, 0).unwrap();
        assert!(verify_triorthogonal(&g).unwrap());
        let back = puncture(&pad(&g).unwrap(), &[0, 1, 2], 3, 0, 0).unwrap();
        assert_eq!(back, g.canonical());
    }

    #[test]
    fn puncture_block_mismatch() {
        let space = rm_generator(1, 4).unwrap().generator;
        assert!(matches!(puncture(&space, &[0, 1], 1, 0, 0), Err(Error::BlockMismatch(_))));
    }

    #[test]
    fn three_puncture_of_rm27() {
        let space = rm_generator(2, 7).unwrap().generator;
        for coords in [[0usize, 1, 2], [5, 60, 127], [3, 64, 100]] {
            let g = puncture(&space, &coords, 3, 0, 0).unwrap();
            assert_eq!((g.n(), g.k()), (125, 3));
            let s = z_distance(&g, DistanceRequest::ExhaustiveLowWeight, 5).unwrap();
            assert_eq!(s.d, Some(5), "coords {coords:?}");
        }
    }

    #[test]
    fn combine_pad_identity_is_padding() {
        let space = rm_generator(1, 5).unwrap().generator;
        let g = puncture(&space, &[1, 2], 2, 0, 0).unwrap();
        let f = GenTrioMatrix::plain(2, BitMatrix::identity(2), BitMatrix::new(2)).unwrap();
        assert_eq!(combine_pad(&g, &f).unwrap(), pad(&g).unwrap());
        let doubled = combine_pad(&g, &g).unwrap();
        assert!(is_triorthogonal_space(&doubled));
    }

    #[test]
    fn combine_pad_direct_sum() {
        let a = GenTrioMatrix::plain(4, BitMatrix::new(4), BitMatrix::from_strs(&["1111"]).unwrap()).unwrap();
        let b = GenTrioMatrix::plain(2, BitMatrix::new(2), BitMatrix::from_strs(&["11"]).unwrap()).unwrap();
        let c = combine_pad(&a, &b).unwrap();
        assert_eq!(c, BitMatrix::from_strs(&["001111", "110000"]).unwrap());
        let t = GenTrioMatrix::plain(2, BitMatrix::from_strs(&["10"]).unwrap(), BitMatrix::new(2)).unwrap();
        assert!(matches!(combine_pad(&a, &t), Err(Error::BlockMismatch(_))));
    }

    #[test]
    fn m3_distance_two() {
        let s = z_distance(&m3_code(), DistanceRequest::ExhaustiveLowWeight, 4).unwrap();
        assert_eq!(s.d, Some(2));
        assert_eq!(s.a_d.as_deref(), Some("28"));
        let m = z_distance(&m3_code(), DistanceRequest::Macwilliams, 0).unwrap();
        assert_eq!(m.d, Some(2));
        assert_eq!(m.a_d.as_deref(), Some("28"));
    }

    #[test]
    fn unpuncture_empty_is_identity() {
        let g = m3_code();
        assert_eq!(unpuncture(&g, &BitMatrix::new(8)).unwrap(), g);
    }

    #[test]
    fn unpuncture_raises_distance() {
        let space = rm_generator(2, 7).unwrap().generator;
        let coords = [3usize, 10, 19, 20, 64, 66, 72, 96, 99, 104, 110, 114, 115, 124];
        let g = puncture(&space, &coords, coords.len(), 0, 0).unwrap();
        assert!(verify_triorthogonal(&g).unwrap());
        let s = z_distance(&g, DistanceRequest::ExhaustiveLowWeight, 8).unwrap();
        let d = s.d.unwrap();
        assert_eq!(d, 3);
        let sc = Scanner::new(g.g0(), &g.logical_rows()).unwrap();
        let found = sc.scan(d, &ScanOptions { collect_logicals: usize::MAX, ..Default::default() }).unwrap();
        let logicals: Vec<BitVec> =
            found.logicals.iter().map(|s| crate::lowweight::support_to_vec(g.n(), s)).collect();
        let gp = greedy_catch(&g, &logicals).unwrap();
        let h = unpuncture(&g, &gp).unwrap();
        assert!(verify_triorthogonal(&h).unwrap());
        assert_eq!(h.n(), g.n() + gp.n_rows());
        assert_eq!(h.k(), g.k() - gp.n_rows());
        if h.k() > 0 {
            let s2 = z_distance(&h, DistanceRequest::ExhaustiveLowWeight, d).unwrap();
            assert!(s2.d.is_none(), "distance did not rise above {d}");
        }
    }

    #[test]
    fn greedy_catch_single_and_uncatchable() {
        let space = rm_generator(1, 5).unwrap().generator;
        let g = puncture(&space, &[0, 1, 2], 3, 0, 0).unwrap();
        // A vector catching only via row 1.
        let probe = (0..g.n()).map(|i| BitVec::unit(g.n(), i)).find(|u| g.t().row(1).dot(u)).unwrap();
        let gp = greedy_catch(&g, std::slice::from_ref(&probe)).unwrap();
        assert_eq!(gp.n_rows(), 1);
        assert!(gp.row(0).dot(&probe));
        let zero = BitVec::zeros(g.n());
        assert!(matches!(greedy_catch(&g, &[zero]), Err(Error::UnCatchable(0))));
    }

    #[test]
    fn weight_mod_controls() {
        let space = rm_generator(2, 7).unwrap().generator;
        let g = puncture(&space, &[3, 10, 19], 3, 0, 0).unwrap();
        assert!(weight_mod_properties(&g).pass());
        let empty = GenTrioMatrix::plain(4, BitMatrix::new(4), BitMatrix::new(4)).unwrap();
        assert!(weight_mod_properties(&empty).pass());
        let rnd = GenTrioMatrix::plain(
            6,
            BitMatrix::from_strs(&["111000"]).unwrap(),
            BitMatrix::from_strs(&["110000", "001100"]).unwrap(),
        )
        .unwrap();
        assert!(!weight_mod_properties(&rnd).pass());
    }
}
