//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed in order. The
//! process fails when a criterion fails that is not listed in `KNOWN_RED`,
//! or when a listed one starts passing (so the list cannot go stale).

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tridistill::cczsearch::{moser_tardos, rational_to_f64, to_gen_trio, DEFAULT_MAX_RESAMPLES};
use tridistill::checkcodes::{build_quadratic_ccz, four_qubit_code, mod4_identity, mod8_identity, rm_hyperbolic};
use tridistill::enumeration::{a_d_closed_form, enumerate_span, macwilliams, macwilliams_low, CountRoute};
use tridistill::f2::{BitMatrix, BitVec};
use tridistill::lowweight::{scan_weight, ScanOptions};
use tridistill::protocol::{final_3d, hyperbolic_quartic_report, matches_printed, normal_tcounts, nx_bound, per_output_coefficient, spacetime_qubits, trio_report};
use tridistill::randtrio::{default_rows, generate, Generated, DEFAULT_THETA};
use tridistill::reedmuller::{encoder_schedule, rm_dim};
use tridistill::reproduce::{check_row, table_ii, Tier};
use tridistill::simulate::{exact_trio, exhaustive_frame_counts, simulate_trio, ExactMode};
use tridistill::svoracle::{encoder_state, prepare_code_superposition, verify_logical_cz};
use tridistill::tables::{m3_code, m6_code, m9_code, TABLE_I};
use tridistill::trio::{verify_generalized, verify_triorthogonal};

/// Criteria that cannot pass because a quoted value does not hold.
const KNOWN_RED: &[(u32, &str)] = &[
    (7, "quoted 5e-14 for the corrected m=9 protocol; the stated expression gives 4.03e-14"),
    (10, "quoted inner-code A_4 = 620 and 2604; enumeration gives 1240 and 10416"),
    (14, "m=9, k=10 needs about 1.6e6 to 2.5e7 resamples; none of seeds 0..19 finish within 1e6"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let out = f();
    (out, t0.elapsed())
}

fn c01_closed_form_a_d() -> Outcome {
    let (v, t) = timed(|| [3, 6, 9].map(|m| a_d_closed_form(m).unwrap()));
    let want = [28u64, 10416, 50434240].map(BigUint::from);
    outcome(v == want && t < Duration::from_millis(1), format!("{:?} in {t:?}", v.map(|x| x.to_string())))
}

fn c02_generalized() -> Outcome {
    let (ok, t) = timed(|| [m3_code(), m6_code(), m9_code()].iter().map(verify_generalized).collect::<Vec<_>>());
    outcome(ok.iter().all(|&x| x) && t < Duration::from_secs(1), format!("m=3,6,9: {ok:?} in {t:?}"))
}

fn c03_m6_coefficient() -> Outcome {
    let g = m6_code();
    let ((g0_dim, full_dim, dual4, stab4), t) = timed(|| {
        let g0 = g.g0().clone();
        let full = g.full_matrix();
        let e0 = enumerate_span(&g0).unwrap();
        let e = enumerate_span(&full).unwrap();
        let dual4 = macwilliams_low(&e0, g0.rank(), 4).unwrap().get(4);
        let stab4 = macwilliams_low(&e, full.rank(), 4).unwrap().get(4);
        (g0.rank(), full.rank(), dual4, stab4)
    });
    let pass = (g0_dim, full_dim) == (11, 17) && dual4 == BigUint::from(3248u32) && stab4 == BigUint::from(304u32) && t < Duration::from_secs(1);
    outcome(pass, format!("2^{g0_dim} and 2^{full_dim} words: {dual4} - {stab4} = {} in {t:?}", &dual4 - &stab4))
}

fn table_i_route(route: Option<CountRoute>, limit: Duration) -> Outcome {
    let (rows, t) = timed(|| TABLE_I.iter().map(|r| check_row(r, route).unwrap()).collect::<Vec<_>>());
    let detail = rows.iter().map(|r| format!("{}/{}", r.label, r.a_d.as_deref().unwrap_or("-"))).collect::<Vec<_>>().join(" ");
    outcome(rows.iter().all(|r| r.pass) && t < limit, format!("{detail} in {:.1}s", t.as_secs_f64()))
}

fn c04_table_i_quick() -> Outcome {
    table_i_route(None, Duration::from_secs(600))
}

fn c05_table_i_full() -> Outcome {
    table_i_route(Some(CountRoute::MacWilliams), Duration::from_secs(4 * 3600))
}

fn c06_table_ii() -> Outcome {
    let (rows, t) = timed(|| table_ii(Tier::Quick).unwrap());
    let detail = rows
        .iter()
        .map(|r| match &r.a_d {
            Some(a) => format!("{}/{a}", r.label),
            None => format!("{}/d>={}", r.label, r.d_lower_bound),
        })
        .collect::<Vec<_>>()
        .join(" ");
    outcome(
        rows.iter().all(|r| r.pass) && rows.len() == 4,
        format!("{detail} in {:.1}s; [[887,137,5]] is the ignored long tier in tests/tables.rs", t.as_secs_f64()),
    )
}

fn c07_protocol_numerics() -> Outcome {
    let a9 = a_d_closed_form(9).unwrap().to_u64().unwrap();
    let (checks, t) = timed(|| {
        let r = trio_report(512, 10, 8, a9, 1e-3, 0).unwrap();
        let e = trio_report(512, 10, 8, a9, 1e-3, 1).unwrap();
        let s = trio_report(912, 112, 6, 1191, 1e-3, 0).unwrap();
        let f = trio_report(912, 112, 6, 1191, 1e-3, 1).unwrap();
        vec![
            ("0.599", r.p_acc, 0.599, 3),
            ("5.99", r.avg_outputs, 5.99, 3),
            ("3.0e-17", r.eps_out, 3.0e-17, 2),
            ("5.1e-18", r.eps_per_output, 5.1e-18, 2),
            ("85.5", r.t_per_output, 85.5, 3),
            ("0.906", e.p_acc, 0.906, 3),
            ("5e-14", e.eps_per_output_literal.unwrap_or(f64::NAN), 5e-14, 1),
            ("0.401", s.p_acc, 0.401, 3),
            ("44.97", s.avg_outputs, 44.97, 4),
            ("1.07e-17", s.eps_per_output, 1.07e-17, 3),
            ("20.28", s.t_per_output, 20.28, 4),
            ("0.768", f.p_acc, 0.768, 3),
            ("3.35e-14", f.eps_per_output, 3.35e-14, 3),
            ("10.60", f.t_per_output, 10.60, 4),
        ]
    });
    let bad: Vec<String> = checks.iter().filter(|c| !matches_printed(c.1, c.2, c.3)).map(|c| format!("{} (got {:.3e})", c.0, c.1)).collect();
    let detail = if bad.is_empty() { format!("14 figures match in {t:?}") } else { format!("{}/14 match; mismatched: {}", 14 - bad.len(), bad.join(", ")) };
    outcome(bad.is_empty() && t < Duration::from_millis(1), detail)
}

fn c08_spacetime() -> Outcome {
    let q = spacetime_qubits(30, rm_dim(2, 9).unwrap());
    let nx = nx_bound(3, 10).unwrap();
    outcome(q == 76 && nx == 176, format!("qubits {q}, n_X bound {nx}"))
}

fn c09_quadratic_gadget() -> Outcome {
    let (c, t) = timed(|| exhaustive_frame_counts(&build_quadratic_ccz().unwrap()).unwrap());
    outcome(c.bad[1] == 0 && c.bad[2] == 28 && t < Duration::from_secs(1), format!("accepted logical errors by weight {:?} in {t:?}", c.bad))
}

fn inner_a4(m: usize) -> u64 {
    let code = rm_hyperbolic(m).unwrap();
    let logical = BitMatrix::from_rows(code.n, code.logical_quotient()).unwrap();
    scan_weight(&code.s, &logical, 4, &ScanOptions::default()).unwrap().logical
}

fn c10_quartic() -> Outcome {
    let per = |k, n, a4| {
        let r = hyperbolic_quartic_report(k, n, a4, 1e-3).unwrap();
        (rational_to_f64(&per_output_coefficient(&r, k)), r.coefficient.to_integer().to_u64().unwrap(), r.t_per_output)
    };
    let (_, c16, t16) = per(3, 16, 140);
    let (p32, _, t32) = per(10, 32, 620);
    let (p64, _, t64) = per(25, 64, 2604);
    let formulas = c16 == 9744 && t16 == 40.0 && matches_printed(p32, 7.7e3, 2) && t32 == 27.2;
    let a4: Vec<u64> = (4..=6).map(inner_a4).collect();
    let (p32_true, _, _) = per(10, 32, a4[1]);
    let detail = format!(
        "9744/{c16} 40/{t16} 7.7e3/{p32:.0} 27.2/{t32}; [[64,50,4]] formula {p64:.0} vs quoted 4.3e4 (T {t64}); \
         A_4 enumerated {a4:?} vs quoted [140, 620, 2604] ([[32,20,4]] per output with enumerated A_4: {p32_true:.0})"
    );
    outcome(formulas && a4 == [140, 620, 2604], detail)
}

fn c11_tcounts() -> Outcome {
    let base = normal_tcounts(3, false).unwrap().t_count == 32 && normal_tcounts(3, true).unwrap().t_count == 26;
    let closed = (1..=20).all(|a| [false, true].iter().all(|&s| normal_tcounts(a, s).map(|t| t.t_count == t.closed_form).unwrap_or(false)));
    let f = final_3d(5).unwrap();
    outcome(base && closed && f == 30, format!("n_3 = 32 / 26, closed form alpha <= 20: {closed}, final_3d(5) = {f}"))
}

fn c12_monte_carlo() -> Outcome {
    let g = m3_code();
    let (est, t) = timed(|| simulate_trio(&g, 0.01, 10_000_000, 12, 0).unwrap());
    let c = est.coefficient(0.01, 8, 2);
    let exact = exact_trio(&g, ExactMode::Full, 0).unwrap().leading();
    outcome(
        c.contains(28.0) && exact == Some((2, 28)) && t < Duration::from_secs(60),
        format!("MC {:.2} [{:.2}, {:.2}] over 1e7 trials in {:.1}s; exact {exact:?}", c.value, c.lo, c.hi, t.as_secs_f64()),
    )
}

fn c13_randomized() -> Outcome {
    let total = default_rows(256, DEFAULT_THETA);
    let (k_t, k_0) = (total / 2, total - total / 2);
    let mut ok = 0;
    let mut verified = true;
    for seed in 0..100 {
        if let Generated::Success { matrix, .. } = generate(256, k_t, k_0, seed).unwrap() {
            ok += 1;
            verified &= verify_triorthogonal(&matrix).unwrap_or(false) && verify_generalized(&matrix);
        }
    }
    outcome(ok >= 90 && verified, format!("n=256, k_T={k_t}, k_0={k_0}: {ok}/100 succeed, all verified: {verified}"))
}

fn c14_moser_tardos() -> Outcome {
    let (res, t) = timed(|| (0..20).map(|s| moser_tardos(9, 10, s, DEFAULT_MAX_RESAMPLES, false).unwrap()).collect::<Vec<_>>());
    let wins: Vec<u64> = (0..20).filter(|&s| res[s as usize].triples().is_some()).collect();
    let verified = wins.iter().all(|&s| verify_generalized(&to_gen_trio(9, res[s as usize].triples().unwrap()).unwrap()));
    outcome(!wins.is_empty() && verified, format!("seeds 0..19, budget {DEFAULT_MAX_RESAMPLES}: successes {wins:?} in {:.1}s", t.as_secs_f64()))
}

fn c15_oracle() -> Outcome {
    let mut worst = 1.0f64;
    for (r, m) in [(0, 2), (1, 3), (1, 4)] {
        let s = encoder_schedule(r, m).unwrap();
        let rm = tridistill::reedmuller::rm_generator(r, m).unwrap().generator;
        let f = encoder_state(&s).unwrap().fidelity(&prepare_code_superposition(&rm).unwrap());
        worst = worst.min(f);
    }
    let code = four_qubit_code();
    let basis: Vec<BitVec> = ["1100", "0110"].iter().map(|s| s.parse().unwrap()).collect();
    let cz = verify_logical_cz(&code, &basis, &[1, -1, 1, -1]).unwrap();
    outcome(1.0 - worst < 1e-9 && cz, format!("encoder fidelity >= 1 - {:.1e}; logical CZ with t = (+,-,+,-): {cz}", 1.0 - worst))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BitMatrix {
    let v: Vec<BitVec> = (0..rows).map(|_| BitVec::from_bools(&(0..cols).map(|_| rng.random()).collect::<Vec<bool>>())).collect();
    BitMatrix::from_rows(cols, v).unwrap()
}

fn c16_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut ids = true;
    for _ in 0..100_000 {
        let n = rng.random_range(1..=40);
        let y: Vec<i64> = (0..n).map(|_| rng.random_range(0..2)).collect();
        ids &= mod4_identity(&y) && mod8_identity(&y);
    }
    let mut inv = true;
    let mut idem = true;
    for _ in 0..300 {
        let n = rng.random_range(1..=18);
        let k = rng.random_range(1..=10);
        let m = random_matrix(&mut rng, k, n);
        let e = enumerate_span(&m).unwrap();
        let d = macwilliams(&e, m.rank()).unwrap();
        inv &= macwilliams(&d, n - m.rank()).unwrap() == e;
        let r = m.rref();
        idem &= r.matrix.rref() == r;
    }
    outcome(ids && inv && idem, format!("mod-4/mod-8 on 1e5 vectors: {ids}; MacWilliams involution: {inv}; rref idempotent: {idem}"))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 16] = [
        (1, "closed-form A_d", c01_closed_form_a_d),
        (2, "generalized triorthogonality", c02_generalized),
        (3, "m=6 weight-4 coefficient", c03_m6_coefficient),
        (4, "Table I quick tier", c04_table_i_quick),
        (5, "Table I full tier", c05_table_i_full),
        (6, "Table II", c06_table_ii),
        (7, "protocol numerics", c07_protocol_numerics),
        (8, "space-time counts", c08_spacetime),
        (9, "quadratic CCZ gadget", c09_quadratic_gadget),
        (10, "quartic formulas", c10_quartic),
        (11, "T-count recursions", c11_tcounts),
        (12, "Monte Carlo vs analytic", c12_monte_carlo),
        (13, "randomized construction", c13_randomized),
        (14, "Moser-Tardos search", c14_moser_tardos),
        (15, "state-vector oracle", c15_oracle),
        (16, "identity suite", c16_identities),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let o = f();
        let red = KNOWN_RED.iter().find(|(k, _)| *k == id);
        println!("criterion {id:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        match (o.pass, red) {
            (false, Some((_, why))) => println!("             known failure: {why}"),
            (false, None) => unexpected.push(format!("criterion {id} failed")),
            (true, Some(_)) => unexpected.push(format!("criterion {id} passed but is listed in KNOWN_RED")),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
