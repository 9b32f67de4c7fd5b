//! Weakly self-dual CSS codes and the stabilizer-check circuits built on them.
//!
//! A code is given by a self-orthogonal space `S` of even-weight vectors.
//! It is hyperbolic when `1 ∈ S` and normal otherwise. Hyperbolic codes carry
//! a logical basis of hyperbolic pairs on which `⊗ S^{t_i}` acts as
//! controlled-Z; normal codes carry an orthonormal basis of odd vectors on
//! which transversal CZ and X act pairwise.
//!
//! Circuits here are Z-frame circuits: every noisy location is a numbered
//! slot that may inject a Z error, and only CX gates move Z errors around.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{reduce_against, BitMatrix, BitVec, Solution};
use crate::lowweight::{ScanOptions, Scanner};
use crate::reedmuller::rm_generator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeClass {
    Hyperbolic,
    Normal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WscCode {
    /// Basis of `S` in reduced row echelon form.
    pub s: BitMatrix,
    pub n: usize,
    pub k: usize,
    pub class: CodeClass,
}

fn check_self_orthogonal(s: &BitMatrix) -> Result<()> {
    let rows = s.rows();
    for a in 0..rows.len() {
        if rows[a].weight() % 2 == 1 {
            return Err(Error::NotSelfOrthogonal(a, a));
        }
        for b in a + 1..rows.len() {
            if rows[a].dot(&rows[b]) {
                return Err(Error::NotSelfOrthogonal(a, b));
            }
        }
    }
    Ok(())
}

pub fn classify(s: &BitMatrix) -> Result<CodeClass> {
    check_self_orthogonal(s)?;
    Ok(if s.in_span(&BitVec::ones(s.n_cols()))? { CodeClass::Hyperbolic } else { CodeClass::Normal })
}

impl WscCode {
    pub fn new(s: &BitMatrix) -> Result<Self> {
        let class = classify(s)?;
        let basis = s.basis();
        let n = s.n_cols();
        let k = n - 2 * basis.n_rows();
        Ok(WscCode { s: basis, n, k, class })
    }

    /// Representatives of a basis of `S^⊥ / S`, reduced modulo `S`.
    pub fn logical_quotient(&self) -> Vec<BitVec> {
        let rref = self.s.rref();
        let reduced: Vec<BitVec> = self.s.kernel_basis().rows().iter().map(|v| reduce_against(&rref, v)).collect();
        BitMatrix::from_rows(self.n, reduced).expect("consistent lengths").basis().into_rows()
    }

    /// Minimum weight of `S^⊥ \ S`, searched up to `max_w`.
    pub fn distance(&self, max_w: usize) -> Result<Option<usize>> {
        let logical = BitMatrix::from_rows(self.n, self.logical_quotient())?;
        if logical.is_empty() {
            return Ok(None);
        }
        let scanner = Scanner::new(&self.s, &logical)?;
        Ok(scanner.min_logical_weight(max_w, &ScanOptions::default())?.map(|s| s.weight))
    }
}

fn pair(u: &BitVec, v: &BitVec) -> bool {
    u.dot(v)
}

/// Hyperbolic basis `ℓ^(1), ..., ℓ^(k)`: consecutive entries pair to 1, all
/// other pairings vanish. Pivoting takes the first remaining vector and its
/// lowest-index partner.
pub fn hyperbolic_basis(code: &WscCode) -> Result<Vec<BitVec>> {
    if code.class != CodeClass::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let mut pool = code.logical_quotient();
    let mut out = Vec::with_capacity(pool.len());
    while !pool.is_empty() {
        let u = pool.remove(0);
        let j = pool.iter().position(|w| pair(&u, w)).ok_or(Error::NotHyperbolic)?;
        let v = pool.remove(j);
        for w in pool.iter_mut() {
            let (wu, wv) = (pair(w, &u), pair(w, &v));
            if wv {
                w.xor_assign(&u);
            }
            if wu {
                w.xor_assign(&v);
            }
        }
        out.push(u);
        out.push(v);
    }
    let rref = code.s.rref();
    Ok(out.iter().map(|v| reduce_against(&rref, v)).collect())
}

/// Whether `basis` obeys the hyperbolic pairing table.
pub fn is_hyperbolic_basis(basis: &[BitVec]) -> bool {
    if basis.len() % 2 == 1 {
        return false;
    }
    (0..basis.len()).all(|a| {
        (0..basis.len()).all(|b| {
            let want = a / 2 == b / 2 && a != b;
            pair(&basis[a], &basis[b]) == want
        })
    })
}

/// Orthonormal basis of odd-weight vectors for a normal code.
pub fn normal_basis(code: &WscCode) -> Result<Vec<BitVec>> {
    if code.class != CodeClass::Normal {
        return Err(Error::NotNormal);
    }
    let mut pool = code.logical_quotient();
    let mut out: Vec<BitVec> = Vec::with_capacity(pool.len());
    while !pool.is_empty() {
        if let Some(i) = pool.iter().position(|w| w.weight() % 2 == 1) {
            let u = pool.remove(i);
            for w in pool.iter_mut() {
                if pair(w, &u) {
                    w.xor_assign(&u);
                }
            }
            out.push(u);
            continue;
        }
        let v = pool.remove(0);
        let j = pool.iter().position(|w| pair(&v, w)).ok_or(Error::NotNormal)?;
        let w = pool.remove(j);
        for x in pool.iter_mut() {
            let (xv, xw) = (pair(x, &v), pair(x, &w));
            if xw {
                x.xor_assign(&v);
            }
            if xv {
                x.xor_assign(&w);
            }
        }
        // A hyperbolic plane plus an odd vector u splits into three odd vectors.
        let u = out.pop().ok_or(Error::NotNormal)?;
        let uv = u.xor(&v);
        let uw = u.xor(&w);
        let uvw = uv.xor(&w);
        out.extend([uv, uw, uvw]);
    }
    let rref = code.s.rref();
    Ok(out.iter().map(|v| reduce_against(&rref, v)).collect())
}

pub fn is_normal_basis(basis: &[BitVec]) -> bool {
    (0..basis.len()).all(|a| (0..basis.len()).all(|b| pair(&basis[a], &basis[b]) == (a == b)))
}

/// `Σ_i v_i t_i mod 4` with `t_i = ±1`.
pub fn signed_weight_mod4(v: &BitVec, t: &[i8]) -> i64 {
    v.iter_ones().map(|i| t[i] as i64).sum::<i64>().rem_euclid(4)
}

/// Signs `t_i = ±1` with `Σ_i v_i t_i ≡ 0 mod 4` for every row of `S` and
/// every basis vector. Writing `t_i = 1 - 2 s_i`, each constraint reads
/// `v · s ≡ |v| / 2 (mod 2)`.
pub fn solve_t_exponents(code: &WscCode, basis: &[BitVec]) -> Result<Vec<i8>> {
    let rows: Vec<BitVec> = code.s.rows().iter().chain(basis).cloned().collect();
    if rows.iter().any(|v| v.weight() % 2 == 1) {
        return Err(Error::Unsolvable);
    }
    let rhs = BitVec::from_bools(&rows.iter().map(|v| v.weight() / 2 % 2 == 1).collect::<Vec<_>>());
    let m = BitMatrix::from_rows(code.n, rows)?;
    match m.solve(&rhs)? {
        Solution::NoSolution => Err(Error::Unsolvable),
        Solution::Affine { particular, .. } => Ok(particular.to_bools().iter().map(|&s| if s { -1 } else { 1 }).collect()),
    }
}

pub fn check_t_exponents(code: &WscCode, basis: &[BitVec], t: &[i8]) -> bool {
    t.len() == code.n && code.s.rows().iter().chain(basis).all(|v| signed_weight_mod4(v, t) == 0)
}

fn e2_e3(y: &[i64]) -> (i128, i128, i128) {
    let (mut e1, mut e2, mut e3) = (0i128, 0i128, 0i128);
    for &v in y {
        let v = v as i128;
        e3 += e2 * v;
        e2 += e1 * v;
        e1 += v;
    }
    (e1, e2, e3)
}

/// `Σ y_i mod 2 ≡ Σ y_i - 2 Σ_{i<j} y_i y_j (mod 4)`.
pub fn mod4_identity(y: &[i64]) -> bool {
    let (e1, e2, _) = e2_e3(y);
    (e1.rem_euclid(2) - (e1 - 2 * e2)).rem_euclid(4) == 0
}

/// `Σ y_i mod 2 ≡ Σ y_i - 2 Σ_{i<j} y_i y_j + 4 Σ_{i<j<k} y_i y_j y_k (mod 8)`.
pub fn mod8_identity(y: &[i64]) -> bool {
    let (e1, e2, e3) = e2_e3(y);
    (e1.rem_euclid(2) - (e1 - 2 * e2 + 4 * e3)).rem_euclid(8) == 0
}

/// Quantum Reed–Muller code with `S = RM(1, m)`: `[[2^m, 2^m - 2m - 2, 4]]`.
pub fn rm_hyperbolic(m: usize) -> Result<WscCode> {
    if m < 4 {
        return Err(Error::InvalidInput(format!("rm_hyperbolic needs m ≥ 4, got {m}")));
    }
    WscCode::new(&rm_generator(1, m)?.generator)
}

/// `[[4,2,2]]` with `S = {1111}`.
pub fn four_qubit_code() -> WscCode {
    WscCode::new(&BitMatrix::from_strs(&["1111"]).expect("static")).expect("static")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "gate", rename_all = "kebab-case")]
pub enum Gate {
    Cx { control: usize, target: usize },
    Cz { a: usize, b: usize },
    Ccz { a: usize, b: usize, c: usize },
    S { qubit: usize, dagger: bool },
    /// `diag(1, e^{i π eighths / 4})` on one qubit.
    Phase { qubit: usize, eighths: i32 },
    /// Noisy T or T†; a fault is a Z on `qubit` right after the gate.
    TSlot { qubit: usize, dagger: bool, slot: usize },
    /// Noisy CCZ from four T gates; fault `j` is a Z right after the gate on
    /// `a, b, c, a` for `j = 0, 1, 2, 3`.
    CczInjection { a: usize, b: usize, c: usize, slots: [usize; 4] },
}

/// A parity over final Z-frame bits.
pub type Parity = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckCircuit {
    pub name: String,
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    pub t_slot_count: usize,
    /// Each check fires when its parity of the final frame is odd.
    pub checks: Vec<Parity>,
    /// Physical Z pattern of each input error bit, applied before the first gate.
    pub inputs: Vec<Parity>,
    /// Output error bits: parity of the final frame.
    pub outputs: Vec<Parity>,
}

impl CheckCircuit {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn support(v: &BitVec, offset: usize) -> Parity {
    v.iter_ones().map(|i| i + offset).collect()
}

struct Builder {
    gates: Vec<Gate>,
    slots: usize,
    phase: i32,
}

impl Builder {
    fn new() -> Self {
        Builder { gates: Vec::new(), slots: 0, phase: 0 }
    }

    fn t(&mut self, qubit: usize, dagger: bool) {
        self.gates.push(Gate::TSlot { qubit, dagger, slot: self.slots });
        self.slots += 1;
    }

    /// Controlled `S^t` up to the controlled phase `e^{-i π t/4}`, which is
    /// collected and applied once by [`Builder::settle_phase`].
    fn controlled_s(&mut self, control: usize, target: usize, t: i8) {
        let cx = Gate::Cx { control, target };
        if t > 0 {
            self.gates.push(cx.clone());
            self.t(target, true);
            self.gates.push(cx);
            self.t(target, false);
        } else {
            self.t(target, true);
            self.gates.push(cx.clone());
            self.t(target, false);
            self.gates.push(cx);
        }
        self.phase += t as i32;
    }

    fn settle_phase(&mut self, control: usize) {
        let e = self.phase.rem_euclid(8);
        if e != 0 {
            self.gates.push(Gate::Phase { qubit: control, eighths: e });
        }
        self.phase = 0;
    }

    fn ccz_injection(&mut self, a: usize, b: usize, c: usize) {
        let s = self.slots;
        self.gates.push(Gate::CczInjection { a, b, c, slots: [s, s + 1, s + 2, s + 3] });
        self.slots += 4;
    }
}

/// 8T-to-CCZ: `[[4,2,2]]` data on qubits 0..4, control on qubit 4.
/// Outputs are the three CCZ qubits: logical 1, logical 2, control.
pub fn build_quadratic_ccz() -> Result<CheckCircuit> {
    let code = four_qubit_code();
    let basis = hyperbolic_basis(&code)?;
    let t = solve_t_exponents(&code, &basis)?;
    let total: i32 = t.iter().map(|&x| x as i32).sum();
    if total.rem_euclid(4) != 0 {
        return Err(Error::Unsolvable);
    }
    let control = 4;
    let mut b = Builder::new();
    for (i, &ti) in t.iter().enumerate() {
        b.controlled_s(control, i, ti);
    }
    b.settle_phase(control);
    Ok(CheckCircuit {
        name: "quadratic-ccz".into(),
        n_qubits: 5,
        t_slot_count: b.slots,
        gates: b.gates,
        checks: vec![support(&BitVec::ones(4), 0)],
        inputs: Vec::new(),
        outputs: vec![support(&basis[0], 0), support(&basis[1], 0), vec![control]],
    })
}

/// One round of the hyperbolic check: measures the product over `k` CCZ
/// states of the stabilizer whose X sits on CCZ qubit `separated`.
///
/// Layout: inner code on `0..n`, separated qubits on `n..n+k`, ancilla at
/// `n+k`. Inputs and outputs list three bits per CCZ state, in qubit order.
pub fn build_hyperbolic_cz_check(code: &WscCode, separated: usize) -> Result<CheckCircuit> {
    if separated > 2 {
        return Err(Error::InvalidInput(format!("separated qubit must be 0, 1 or 2, got {separated}")));
    }
    let basis = hyperbolic_basis(code)?;
    if basis.is_empty() {
        return Err(Error::InvalidInput("inner code encodes no qubits".into()));
    }
    let t = solve_t_exponents(code, &basis)?;
    let n = code.n;
    let k = basis.len() / 2;
    let anc = n + k;
    let mut b = Builder::new();
    for j in 0..k {
        b.gates.push(Gate::Cx { control: anc, target: n + j });
    }
    for (i, &ti) in t.iter().enumerate() {
        b.controlled_s(anc, i, ti);
    }
    b.settle_phase(anc);
    let embedded: Vec<usize> = (0..3).filter(|&q| q != separated).collect();
    let mut inputs = Vec::with_capacity(3 * k);
    let mut outputs = Vec::with_capacity(3 * k);
    for j in 0..k {
        for q in 0..3 {
            if q == separated {
                inputs.push(vec![n + j]);
                outputs.push(vec![n + j]);
            } else {
                let slot = if q == embedded[0] { 0 } else { 1 };
                // Logical Z on one member of a pair is Z of its partner's vector.
                inputs.push(support(&basis[2 * j + 1 - slot], 0));
                outputs.push(support(&basis[2 * j + slot], 0));
            }
        }
    }
    let mut checks: Vec<Parity> = code.s.rows().iter().map(|r| support(r, 0)).collect();
    checks.push(vec![anc]);
    Ok(CheckCircuit {
        name: format!("hyperbolic-cz-check-{separated}"),
        n_qubits: n + k + 1,
        t_slot_count: b.slots,
        gates: b.gates,
        checks,
        inputs,
        outputs,
    })
}

/// Three-block check for normal codes: on each position `i` applies
/// `CCZ · (C_a X_{A_i})(C_b X_{B_i})(C_c X_{C_i}) · CCZ` with injected CCZs.
///
/// Layout: blocks A, B, C on `0..3n`, ancillas `a, b, c` at `3n..3n+3`.
pub fn build_normal_ccz_check(code: &WscCode) -> Result<CheckCircuit> {
    let basis = normal_basis(code)?;
    let n = code.n;
    let mut sum = BitVec::ones(n);
    for l in &basis {
        sum.xor_assign(l);
    }
    if !reduce_against(&code.s.rref(), &sum).is_zero() {
        return Err(Error::InvalidInput("transversal X is not the product of logical X operators".into()));
    }
    let anc = 3 * n;
    let mut b = Builder::new();
    for i in 0..n {
        let (qa, qb, qc) = (i, n + i, 2 * n + i);
        b.ccz_injection(qa, qb, qc);
        for (blk, q) in [qa, qb, qc].into_iter().enumerate() {
            b.gates.push(Gate::Cx { control: anc + blk, target: q });
        }
        b.ccz_injection(qa, qb, qc);
    }
    let mut io = Vec::with_capacity(3 * basis.len());
    for l in &basis {
        for blk in 0..3 {
            io.push(support(l, blk * n));
        }
    }
    let mut checks = Vec::new();
    for blk in 0..3 {
        checks.extend(code.s.rows().iter().map(|r| support(r, blk * n)));
    }
    checks.extend((0..3).map(|j| vec![anc + j]));
    Ok(CheckCircuit {
        name: "normal-ccz-check".into(),
        n_qubits: 3 * n + 3,
        t_slot_count: b.slots,
        gates: b.gates,
        checks,
        inputs: io.clone(),
        outputs: io,
    })
}
