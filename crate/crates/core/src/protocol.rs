//! Closed-form distillation analytics.
//!
//! Leading coefficients are exact rationals; substitution of the error rate
//! is done in `f64` with `ln_1p` for the `(1-ε)^n` factors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reedmuller::rm_dim;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub p_acc: f64,
    /// Leading output error is `coefficient · ε^order` (before `(1-ε)` factors).
    #[serde(serialize_with = "ser_rational")]
    pub coefficient: BigRational,
    pub order: u32,
    /// Total output error with the `(1-ε)` factors, not normalized.
    pub eps_out: f64,
    /// Output error per accepted output state.
    pub eps_per_output: f64,
    /// The cruder per-output figure that drops `(1-ε)` and acceptance factors.
    pub eps_per_output_literal: Option<f64>,
    pub avg_outputs: f64,
    /// Noisy inputs consumed per accepted output.
    pub t_per_output: f64,
    pub qubits: Option<usize>,
    pub notes: Vec<String>,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    if r.is_integer() {
        s.serialize_str(&r.numer().to_string())
    } else {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `(1-ε)^n` evaluated as `exp(n ln(1-ε))`.
pub fn survive(eps: f64, n: f64) -> f64 {
    (n * (-eps).ln_1p()).exp()
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidInput(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Triorthogonal protocol with `n` noisy T inputs, `k` output magic states,
/// distance `d` and `A_d` weight-`d` logical errors.
///
/// `ec_radius = 1` accepts single detected errors and corrects them.
pub fn trio_report(n: usize, k: usize, d: usize, a_d: u64, eps: f64, ec_radius: u8) -> Result<ProtocolReport> {
    check_prob("eps", eps)?;
    if n == 0 || k == 0 || d == 0 || d > n {
        return Err(Error::InvalidInput("need n, k, d positive and d <= n".into()));
    }
    let (nf, kf, df) = (n as f64, k as f64, d as f64);
    let a = BigRational::from_integer(BigInt::from(a_d));
    match ec_radius {
        0 => {
            let p_acc = survive(eps, nf);
            let eps_out = a_d as f64 * eps.powi(d as i32) * survive(eps, nf - df);
            let avg = kf * p_acc;
            Ok(ProtocolReport {
                p_acc,
                coefficient: a,
                order: d as u32,
                eps_out,
                eps_per_output: eps_out / avg,
                eps_per_output_literal: None,
                avg_outputs: avg,
                t_per_output: nf / avg,
                qubits: None,
                notes: vec![],
            })
        }
        1 => {
            if d < 2 {
                return Err(Error::InvalidInput("single-error correction needs d >= 2".into()));
            }
            let p_acc = survive(eps, nf) + nf * eps * survive(eps, nf - 1.0);
            // A weight-(d-1) pattern inside a weight-d logical is miscorrected.
            let coefficient = a * BigRational::from_integer(BigInt::from(d));
            let lead = to_f64(&coefficient) * eps.powi(d as i32 - 1);
            let eps_out = lead * survive(eps, nf - df + 1.0);
            let avg = kf * p_acc;
            Ok(ProtocolReport {
                p_acc,
                coefficient,
                order: d as u32 - 1,
                eps_out,
                eps_per_output: eps_out / avg,
                eps_per_output_literal: Some(lead / kf),
                avg_outputs: avg,
                t_per_output: nf / avg,
                qubits: None,
                notes: vec!["per-output error is an upper bound".into()],
            })
        }
        r => Err(Error::InvalidInput(format!("ec_radius must be 0 or 1, got {r}"))),
    }
}

/// Qubits held at once when a `k`-output protocol streams inputs against
/// `n_x` X-stabilizers.
pub fn spacetime_qubits(k: usize, n_x: usize) -> usize {
    k + n_x
}

pub fn rounds(n: usize, k: usize, n_x: usize) -> usize {
    n.div_ceil((k + n_x).max(1))
}

/// Upper bound on the X-stabilizer count of a code built from RM(r, m).
pub fn nx_bound(r: usize, m: usize) -> Result<usize> {
    rm_dim(r, m)
}

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Quartic CCZ protocol: `k` hyperbolic pairs of an `[[n, 2k, 4]]` inner code
/// checked against quadratic-protocol CCZ inputs.
pub fn hyperbolic_quartic_report(k: usize, n: usize, a_4: u64, p: f64) -> Result<ProtocolReport> {
    check_prob("p", p)?;
    if k == 0 || n == 0 {
        return Err(Error::InvalidInput("need k, n positive".into()));
    }
    let (k64, n64) = (k as u64, n as u64);
    let total = 784 * choose2(k64) + 84 * k64 * n64 + 24 * a_4;
    let coefficient = BigRational::from_integer(BigInt::from(total));
    let eps_out = total as f64 * p.powi(4);
    let p_acc = survive(p, 6.0 * n as f64);
    Ok(ProtocolReport {
        p_acc,
        coefficient,
        order: 4,
        eps_out,
        eps_per_output: eps_out / k as f64,
        eps_per_output_literal: None,
        avg_outputs: k as f64 * p_acc,
        t_per_output: (8 * k + 6 * n) as f64 / k as f64,
        qubits: None,
        notes: vec!["p_acc is the lower bound (1-p)^(6n)".into(), "coefficient is an upper bound".into()],
    })
}

/// T count per output CCZ at distance `2^alpha` from the recursion
/// `n_{a+1} = n_a + 2 n_{a-1}`, with base `(8, 16)` or `(6, 14)`.
pub fn normal_tcount(alpha: u32, six_t_base: bool) -> Result<u128> {
    if alpha == 0 {
        return Err(Error::InvalidInput("alpha must be at least 1".into()));
    }
    let (mut prev, mut cur): (u128, u128) = if six_t_base { (6, 14) } else { (8, 16) };
    if alpha == 1 {
        return Ok(prev);
    }
    for _ in 2..alpha {
        let next = cur.checked_add(prev.checked_mul(2).ok_or_else(overflow)?).ok_or_else(overflow)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn overflow() -> Error {
    Error::CapExceeded { what: "T-count recursion".into(), value: u128::MAX, cap: u128::MAX }
}

/// Closed forms: `4·2^α` for base `(8, 16)`, `(2/3)(5·2^α + (-1)^α)` for `(6, 14)`.
pub fn normal_tcount_closed(alpha: u32, six_t_base: bool) -> Result<u128> {
    if alpha == 0 || alpha > 120 {
        return Err(Error::InvalidInput("alpha must lie in 1..=120".into()));
    }
    let pow = 1u128 << alpha;
    if !six_t_base {
        return Ok(4 * pow);
    }
    let num = if alpha.is_multiple_of(2) { 5 * pow + 1 } else { 5 * pow - 1 };
    Ok(2 * num / 3)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TCounts {
    pub alpha: u32,
    pub distance: u128,
    pub t_count: u128,
    pub closed_form: u128,
    /// `t_count / distance`.
    pub per_distance: f64,
}

pub fn normal_tcounts(alpha: u32, six_t_base: bool) -> Result<TCounts> {
    let t_count = normal_tcount(alpha, six_t_base)?;
    let distance = 1u128 << alpha;
    Ok(TCounts { alpha, distance, t_count, closed_form: normal_tcount_closed(alpha, six_t_base)?, per_distance: t_count as f64 / distance as f64 })
}

/// T count `3d` per output at distance `d = 2d'`, `d'` odd and at least 5.
pub fn final_3d(d_prime: u64) -> Result<u64> {
    if d_prime < 5 || d_prime.is_multiple_of(2) {
        return Err(Error::InvalidInput("d' must be odd and at least 5".into()));
    }
    Ok(3 * 2 * d_prime)
}

/// Exact `coefficient / k`, the per-output leading coefficient.
pub fn per_output_coefficient(r: &ProtocolReport, k: usize) -> BigRational {
    if k == 0 {
        return BigRational::zero();
    }
    &r.coefficient / BigRational::from_integer(BigInt::from(k))
}

/// Whether `x` printed to `sig` significant digits, rounded or truncated,
/// gives `quoted`.
pub fn matches_printed(x: f64, quoted: f64, sig: i32) -> bool {
    let unit = 10f64.powi(quoted.abs().log10().floor() as i32 - (sig - 1));
    let q = quoted / unit;
    let close = |v: f64| (v - q).abs() < 1e-6;
    close((x / unit).round()) || close((x / unit).trunc())
}
