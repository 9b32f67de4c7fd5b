//! Dense state vectors on at most 16 qubits, used to cross-check logical
//! actions claimed elsewhere in the crate.
//!
//! Qubit `q` is bit `q` of the amplitude index.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::checkcodes::{hyperbolic_basis, CheckCircuit, Gate, WscCode};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::reedmuller::EncoderSchedule;

pub const MAX_QUBITS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    X(usize),
    Z(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Cx(usize, usize),
    Cz(usize, usize),
    Ccz(usize, usize, usize),
    /// `diag(1, e^{i π k / 4})`.
    Phase(usize, i32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn cap(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::CapExceeded { what: "state-vector qubits".into(), value: n as u128, cap: MAX_QUBITS as u128 });
    }
    Ok(())
}

fn eighth(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_4 * k as f64)
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        cap(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn plus(n: usize) -> Result<Self> {
        cap(n)?;
        let a = Complex64::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0);
        Ok(StateVector { n, amps: vec![a; 1 << n] })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(Error::InvalidInput("amplitude count must be a power of two".into()));
        }
        cap(n)?;
        Ok(StateVector { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    /// Tensor product with `other` on the higher qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        cap(self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n: self.n + other.n, amps })
    }

    fn check(&self, qs: &[usize]) -> Result<()> {
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.n {
                return Err(Error::InvalidInput(format!("qubit {q} out of range for {} qubits", self.n)));
            }
            if qs[..i].contains(&q) {
                return Err(Error::InvalidInput(format!("qubit {q} repeated")));
            }
        }
        Ok(())
    }

    fn diagonal(&mut self, f: impl Fn(usize) -> Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= f(i);
        }
    }

    pub fn apply(&mut self, op: Op) -> Result<()> {
        let bit = |i: usize, q: usize| i >> q & 1 == 1;
        match op {
            Op::X(q) => {
                self.check(&[q])?;
                for i in 0..self.amps.len() {
                    if !bit(i, q) {
                        self.amps.swap(i, i | 1 << q);
                    }
                }
            }
            Op::H(q) => {
                self.check(&[q])?;
                for i in 0..self.amps.len() {
                    if !bit(i, q) {
                        let (a, b) = (self.amps[i], self.amps[i | 1 << q]);
                        self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[i | 1 << q] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Op::Cx(c, t) => {
                self.check(&[c, t])?;
                for i in 0..self.amps.len() {
                    if bit(i, c) && !bit(i, t) {
                        self.amps.swap(i, i | 1 << t);
                    }
                }
            }
            Op::Z(q) => return self.apply(Op::Phase(q, 4)),
            Op::S(q) => return self.apply(Op::Phase(q, 2)),
            Op::Sdg(q) => return self.apply(Op::Phase(q, -2)),
            Op::T(q) => return self.apply(Op::Phase(q, 1)),
            Op::Tdg(q) => return self.apply(Op::Phase(q, -1)),
            Op::Phase(q, k) => {
                self.check(&[q])?;
                let w = eighth(k);
                self.diagonal(|i| if bit(i, q) { w } else { Complex64::new(1.0, 0.0) });
            }
            Op::Cz(a, b) => {
                self.check(&[a, b])?;
                self.diagonal(|i| Complex64::new(if bit(i, a) && bit(i, b) { -1.0 } else { 1.0 }, 0.0));
            }
            Op::Ccz(a, b, c) => {
                self.check(&[a, b, c])?;
                self.diagonal(|i| Complex64::new(if bit(i, a) && bit(i, b) && bit(i, c) { -1.0 } else { 1.0 }, 0.0));
            }
        }
        Ok(())
    }

    /// Runs a check circuit without faults; injected CCZs act as ideal CCZs.
    pub fn run_circuit(&mut self, c: &CheckCircuit) -> Result<()> {
        if c.n_qubits > self.n {
            return Err(Error::InvalidInput(format!("circuit needs {} qubits, state has {}", c.n_qubits, self.n)));
        }
        for g in &c.gates {
            let op = match *g {
                Gate::Cx { control, target } => Op::Cx(control, target),
                Gate::Cz { a, b } => Op::Cz(a, b),
                Gate::Ccz { a, b, c } | Gate::CczInjection { a, b, c, .. } => Op::Ccz(a, b, c),
                Gate::S { qubit, dagger } => if dagger { Op::Sdg(qubit) } else { Op::S(qubit) },
                Gate::Phase { qubit, eighths } => Op::Phase(qubit, eighths),
                Gate::TSlot { qubit, dagger, .. } => if dagger { Op::Tdg(qubit) } else { Op::T(qubit) },
            };
            self.apply(op)?;
        }
        Ok(())
    }
}

fn index_of(v: &BitVec) -> usize {
    v.iter_ones().fold(0, |acc, q| acc | 1 << q)
}

/// Uniform superposition over the row span of `m`.
pub fn prepare_code_superposition(m: &BitMatrix) -> Result<StateVector> {
    cap(m.n_cols())?;
    let basis = m.basis();
    let size = 1usize << basis.n_rows();
    let a = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << m.n_cols()];
    let words: Vec<usize> = basis.rows().iter().map(index_of).collect();
    for x in 0..size {
        let idx = words.iter().enumerate().filter(|(j, _)| x >> j & 1 == 1).fold(0, |acc, (_, w)| acc ^ w);
        amps[idx] = a;
    }
    Ok(StateVector { n: m.n_cols(), amps })
}

/// State produced by the encoder CNOT schedule from `|+⟩`/`|0⟩` inputs.
pub fn encoder_state(s: &EncoderSchedule) -> Result<StateVector> {
    let mut sv = StateVector::zero(1 << s.m)?;
    for &q in &s.plus_qubits {
        sv.apply(Op::H(q))?;
    }
    for (c, t) in s.cnots() {
        sv.apply(Op::Cx(c, t))?;
    }
    Ok(sv)
}

/// Decodes the logical bits of a codeword `f` against a hyperbolic basis:
/// `x_a` is the pairing of `f` with the partner of `ℓ^(a)`.
fn decode_hyperbolic(f: &BitVec, basis: &[BitVec]) -> Vec<bool> {
    (0..basis.len()).map(|a| f.dot(&basis[a ^ 1])).collect()
}

/// Applies `⊗ S^{t_i}` to the encoded `|+…+⟩` and compares with the product
/// of logical CZ over hyperbolic pairs.
pub fn verify_logical_cz(code: &WscCode, basis: &[BitVec], t: &[i8]) -> Result<bool> {
    cap(code.n)?;
    if basis.is_empty() {
        return Ok(true);
    }
    let mut gens = code.s.clone();
    for b in basis {
        gens.push(b.clone())?;
    }
    let mut sv = prepare_code_superposition(&gens)?;
    for (q, &ti) in t.iter().enumerate() {
        sv.apply(if ti > 0 { Op::S(q) } else { Op::Sdg(q) })?;
    }
    let mut expected = prepare_code_superposition(&gens)?;
    for (i, a) in expected.amps.iter_mut().enumerate() {
        if a.norm() == 0.0 {
            continue;
        }
        let f = BitVec::from_bools(&(0..code.n).map(|q| i >> q & 1 == 1).collect::<Vec<_>>());
        let x = decode_hyperbolic(&f, basis);
        let parity = x.chunks(2).filter(|p| p[0] && p[1]).count() % 2;
        if parity == 1 {
            *a = -*a;
        }
    }
    Ok((expected.fidelity(&sv) - 1.0).abs() < 1e-9)
}

/// Convenience: the computed hyperbolic basis of `code`.
pub fn verify_logical_cz_default(code: &WscCode, t: &[i8]) -> Result<bool> {
    verify_logical_cz(code, &hyperbolic_basis(code)?, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkcodes::{build_quadratic_ccz, four_qubit_code, normal_basis, rm_hyperbolic, solve_t_exponents};
    use crate::reedmuller::{encoder_schedule, rm_generator};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn single_qubit_gates() {
        let mut sv = StateVector::zero(1).unwrap();
        sv.apply(Op::T(0)).unwrap();
        assert!(close(sv.amplitudes()[0], Complex64::new(1.0, 0.0)));
        let mut sv = StateVector::plus(1).unwrap();
        sv.apply(Op::T(0)).unwrap();
        assert!(close(sv.amplitudes()[1], eighth(1) * FRAC_1_SQRT_2));
        assert!(sv.apply(Op::X(1)).is_err());
        assert!(StateVector::zero(17).is_err());
    }

    #[test]
    fn ccz_state_stabilizers() {
        let mut sv = StateVector::plus(3).unwrap();
        sv.apply(Op::Ccz(0, 1, 2)).unwrap();
        for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let mut w = sv.clone();
            w.apply(Op::Cz(a, b)).unwrap();
            w.apply(Op::X(c)).unwrap();
            assert!(close(sv.inner(&w), Complex64::new(1.0, 0.0)));
        }
    }

    #[test]
    fn superposition_examples() {
        let one = prepare_code_superposition(&BitMatrix::from_strs(&["1"]).unwrap()).unwrap();
        assert!(close(one.amplitudes()[1], Complex64::new(FRAC_1_SQRT_2, 0.0)));
        let rep = prepare_code_superposition(&rm_generator(0, 2).unwrap().generator).unwrap();
        assert!(close(rep.amplitudes()[0b1111], Complex64::new(FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn encoder_matches_superposition() {
        for (r, m) in [(0, 2), (1, 3), (1, 4), (2, 4)] {
            let sv = encoder_state(&encoder_schedule(r, m).unwrap()).unwrap();
            let want = prepare_code_superposition(&rm_generator(r, m).unwrap().generator).unwrap();
            assert!((sv.fidelity(&want) - 1.0).abs() < 1e-9, "RM({r},{m})");
        }
    }

    #[test]
    fn row_operations_do_not_change_superposition() {
        let g = rm_generator(1, 3).unwrap().generator;
        let mut rows = g.rows().to_vec();
        let r0 = rows[0].clone();
        rows[2].xor_assign(&r0);
        rows.swap(1, 3);
        let h = BitMatrix::from_rows(8, rows).unwrap();
        assert_eq!(prepare_code_superposition(&g).unwrap(), prepare_code_superposition(&h).unwrap());
    }

    #[test]
    fn logical_cz_on_four_qubit_code() {
        let code = four_qubit_code();
        let listed: Vec<BitVec> = ["1100", "0110"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(verify_logical_cz(&code, &listed, &[1, -1, 1, -1]).unwrap());
        assert!(!verify_logical_cz(&code, &listed, &[1, 1, 1, 1]).unwrap());
        let t = solve_t_exponents(&code, &hyperbolic_basis(&code).unwrap()).unwrap();
        assert!(verify_logical_cz_default(&code, &t).unwrap());
        let empty = WscCode::new(&BitMatrix::from_strs(&["1100", "0011"]).unwrap()).unwrap();
        assert!(verify_logical_cz(&empty, &[], &[1, 1, 1, 1]).unwrap());
    }

    #[test]
    fn logical_cz_on_sixteen_qubit_code() {
        let code = rm_hyperbolic(4).unwrap();
        let basis = hyperbolic_basis(&code).unwrap();
        let t = solve_t_exponents(&code, &basis).unwrap();
        assert!(verify_logical_cz(&code, &basis, &t).unwrap());
    }

    #[test]
    fn quadratic_gadget_outputs_ccz() {
        let circuit = build_quadratic_ccz().unwrap();
        let code = four_qubit_code();
        let basis = hyperbolic_basis(&code).unwrap();
        let mut gens = code.s.clone();
        for b in &basis {
            gens.push(b.clone()).unwrap();
        }
        let data = prepare_code_superposition(&gens).unwrap();
        let mut sv = data.tensor(&StateVector::plus(1).unwrap()).unwrap();
        sv.run_circuit(&circuit).unwrap();
        let mut expected = data.tensor(&StateVector::plus(1).unwrap()).unwrap();
        for (i, a) in expected.amps.iter_mut().enumerate() {
            let f = BitVec::from_bools(&(0..4).map(|q| i >> q & 1 == 1).collect::<Vec<_>>());
            let x = decode_hyperbolic(&f, &basis);
            if x[0] && x[1] && i >> 4 & 1 == 1 {
                *a = -*a;
            }
        }
        assert!((expected.fidelity(&sv) - 1.0).abs() < 1e-9);
        // The phase correction makes the result exact, not only up to a global phase.
        assert!((expected.inner(&sv) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn controlled_stabilizer_identity() {
        // CCZ (C_a X_1)(C_b X_2)(C_c X_3) CCZ = C_a(CZ_23 X_1) C_b(CZ_13 X_2) C_c(CZ_12 X_3).
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let amps: Vec<Complex64> = (0..64).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let base = StateVector::from_amplitudes(amps).unwrap();
        let mut lhs = base.clone();
        for op in [Op::Ccz(0, 1, 2), Op::Cx(3, 0), Op::Cx(4, 1), Op::Cx(5, 2), Op::Ccz(0, 1, 2)] {
            lhs.apply(op).unwrap();
        }
        let mut rhs = base.clone();
        // Controlled CZ_12 X_3 etc., written with an ancilla-controlled CCZ and CX.
        for (anc, x, a, b) in [(5, 2, 0, 1), (4, 1, 0, 2), (3, 0, 1, 2)] {
            rhs.apply(Op::Ccz(anc, a, b)).unwrap();
            rhs.apply(Op::Cx(anc, x)).unwrap();
        }
        assert!((lhs.inner(&rhs) - Complex64::new(base.norm().powi(2), 0.0)).norm() < 1e-9);
    }

    #[test]
    fn normal_code_transversal_cz() {
        // Two blocks of a [[6,2]] normal code: transversal CZ acts as CZ on matching logical pairs.
        let code = WscCode::new(&BitMatrix::from_strs(&["111100", "001111"]).unwrap()).unwrap();
        let basis = normal_basis(&code).unwrap();
        let n = code.n;
        let mut gens = BitMatrix::new(2 * n);
        for blk in 0..2 {
            let pad = |v: &BitVec| {
                let z = BitVec::zeros(n);
                if blk == 0 { v.concat(&z) } else { z.concat(v) }
            };
            for r in code.s.rows().iter().chain(&basis) {
                gens.push(pad(r)).unwrap();
            }
        }
        let plus = prepare_code_superposition(&gens).unwrap();
        let mut sv = plus.clone();
        for i in 0..n {
            sv.apply(Op::Cz(i, n + i)).unwrap();
        }
        let mut expected = plus;
        for (i, a) in expected.amps.iter_mut().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let block = |o: usize| BitVec::from_bools(&(0..n).map(|q| i >> (q + o) & 1 == 1).collect::<Vec<_>>());
            let (fa, fb) = (block(0), block(n));
            let parity = basis.iter().filter(|l| fa.dot(l) && fb.dot(l)).count() % 2;
            if parity == 1 {
                *a = -*a;
            }
        }
        assert!((expected.fidelity(&sv) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn norm_is_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sv = StateVector::zero(6).unwrap();
        for _ in 0..10_000 {
            let q = rng.random_range(0..6);
            let r = (q + rng.random_range(1..6)) % 6;
            let op = match rng.random_range(0..8) {
                0 => Op::H(q),
                1 => Op::T(q),
                2 => Op::Sdg(q),
                3 => Op::Cx(q, r),
                4 => Op::Cz(q, r),
                5 => Op::X(q),
                6 => Op::Phase(q, 3),
                _ => Op::Ccz(q, r, (r + 1 + (r + 1 == q) as usize) % 6),
            };
            if let Op::Ccz(a, b, c) = op {
                if a == c || b == c {
                    continue;
                }
            }
            sv.apply(op).unwrap();
        }
        assert!((sv.norm() - 1.0).abs() < 1e-10);
    }
}
