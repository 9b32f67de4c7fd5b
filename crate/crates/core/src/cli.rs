//! Command-line front end. JSON goes to stdout, human-readable tables to stderr.
//!
//! Exit codes: 0 success, 1 computational infeasibility, 2 input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cczsearch::{analytic_triples, extend_g0, lll_budget, lll_condition, moser_tardos, to_gen_trio, SearchOutcome, Triple, DEFAULT_MAX_RESAMPLES};
use crate::checkcodes::{build_quadratic_ccz, rm_hyperbolic};
use crate::codefile::{materialize, remap_coordinate, CodeFile, Provenance};
use crate::enumeration::{a_d_closed_form, cache_dir_from_env, count_logical_z, enumerate_span, macwilliams_low, CountOptions, CountRoute, RoutePolicy};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::protocol::{hyperbolic_quartic_report, normal_tcounts, nx_bound, rounds, spacetime_qubits, trio_report, final_3d};
use crate::randtrio::{default_rows, generate_generalized, Generated, DEFAULT_THETA};
use crate::reedmuller::{dual_check, encoder_schedule, rm_dim, rm_distance, rm_generator, wedge_closure_check};
use crate::reproduce::{ccz_codes, table_i, table_ii, Tier};
use crate::simulate::{exact_trio, exhaustive_frame_counts, hyperbolic_quartic_protocol, simulate_check_protocol, simulate_trio, simulate_trio_stratified, ExactMode, ProtocolResponse};
use crate::tables::{render_data_files, shipped};
use crate::trio::{check_generalized, pad, unpuncture, verify_generalized, z_distance, DistanceRequest, GenTrioMatrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "tridistill", version, about = "Triorthogonal codes for magic-state distillation")]
pub struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// How decimal puncture coordinates map to points.
    #[arg(long, global = true, value_enum, default_value_t = BitOrder::MsbFirst)]
    pub bit_order: BitOrder,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BitOrder {
    MsbFirst,
    LsbFirst,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reed-Muller codes.
    #[command(subcommand)]
    Rm(RmCmd),
    /// Triorthogonal matrices.
    #[command(subcommand)]
    Trio(TrioCmd),
    /// Weight enumerators and logical counts.
    #[command(subcommand)]
    Enumerate(EnumCmd),
    /// Randomized and combinatorial code search.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Closed-form protocol analytics.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Error simulation.
    Simulate(SimulateArgs),
    /// Reference tables.
    #[command(subcommand)]
    Tables(TablesCmd),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct RmArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub m: usize,
}

#[derive(Subcommand, Debug)]
pub enum RmCmd {
    /// Generator rows of RM(r, m).
    Gen(RmArgs),
    /// Checks that RM(m-r-1, m) is the dual of RM(r, m).
    Dual(RmArgs),
    /// Checks that products of RM(r) and RM(r2) words lie in RM(r + r2).
    Wedge {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        r2: usize,
        #[arg(long)]
        m: usize,
    },
    /// CNOT encoder schedule.
    Encoder(RmArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FileArg {
    /// Code file path, or the name of a shipped code file.
    #[arg(long)]
    pub file: String,
}

#[derive(Subcommand, Debug)]
pub enum TrioCmd {
    Verify(FileArg),
    /// Padded triorthogonal space of a code.
    Pad(FileArg),
    /// Punctures RM(r, m) on decimal coordinates.
    Puncture {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        /// Comma-separated coordinates.
        #[arg(long)]
        coords: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adds coordinates and stabilizers `[I G'; 0 G0]`.
    Unpuncture {
        #[arg(long)]
        file: String,
        /// File with one 0/1 row of G' per line.
        #[arg(long)]
        gprime: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Distance {
        #[arg(long)]
        file: String,
        #[arg(long, value_enum, default_value_t = DistMethod::Auto)]
        method: DistMethod,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DistMethod {
    Auto,
    Exhaustive,
    Macwilliams,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Which {
    G0,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum EnumCmd {
    /// Weight enumerator of span(G0) or span(G).
    Span {
        #[arg(long)]
        file: String,
        #[arg(long, value_enum, default_value_t = Which::G0)]
        which: Which,
    },
    /// Dual weight enumerator via MacWilliams, up to a weight.
    Macwilliams {
        #[arg(long)]
        file: String,
        #[arg(long, value_enum, default_value_t = Which::G0)]
        which: Which,
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Minimum-weight word count of RM(2m/3, m).
    AdFormula {
        #[arg(long)]
        m: usize,
    },
    /// Weight-d Z-logical count.
    LogicalCount {
        #[arg(long)]
        file: String,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
        /// Lower bound on nonzero Z-stabilizer weight (enables the G0-only route).
        #[arg(long)]
        stab_weight: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RouteArg {
    Auto,
    Exhaustive,
    Macwilliams,
    G0Only,
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    /// Randomized row-by-row construction.
    Rand {
        #[arg(long)]
        n: usize,
        /// Defaults to half of floor(0.5 sqrt n).
        #[arg(long)]
        k_t: Option<usize>,
        #[arg(long, default_value_t = 0)]
        k_cs: usize,
        #[arg(long, default_value_t = 0)]
        k_ccz: usize,
        /// Defaults to the remainder of floor(0.5 sqrt n).
        #[arg(long)]
        k_0: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moser–Tardos search for CCZ triples over RM(m/3 - 1, m).
    Ccz {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_RESAMPLES)]
        budget: u64,
        #[arg(long)]
        shuffle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy maximal extension of G0 for a set of triples.
    ExtendG0 {
        #[arg(long)]
        m: usize,
        /// Triples as `a,b,c;a,b,c;...` with monomials like `x1 x2`;
        /// defaults to the analytic family.
        #[arg(long)]
        triples: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCmd {
    Trio {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a_d: u64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        ec: u8,
    },
    Spacetime {
        #[arg(long)]
        k: usize,
        /// X-stabilizer count; defaults to dim RM(r, m) when --r and --m are given.
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Code length, to report the number of rounds.
        #[arg(long)]
        n: Option<usize>,
    },
    HyperbolicQuartic {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a4: u64,
        #[arg(long, default_value_t = 1e-3)]
        p: f64,
    },
    Tcounts {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        six_t_base: bool,
        #[arg(long)]
        d_prime: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SimMethod {
    Mc,
    Exact,
    Stratified,
    Frame,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CircuitArg {
    Quadratic,
    HyperbolicQuartic,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long, default_value_t = 1e-2)]
    pub p: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub ec: u8,
    #[arg(long, value_enum, default_value_t = SimMethod::Mc)]
    pub method: SimMethod,
    /// Weight cap for truncated exact sums, stratified sampling and fault counts.
    #[arg(long)]
    pub max_weight: Option<usize>,
    /// Check circuit for `--method frame` or protocol Monte Carlo.
    #[arg(long, value_enum)]
    pub circuit: Option<CircuitArg>,
    /// Inner RM code size for the hyperbolic protocol (n = 2^m).
    #[arg(long, default_value_t = 4)]
    pub m: usize,
}

#[derive(Subcommand, Debug)]
pub enum TablesCmd {
    Reproduce {
        #[arg(long, value_enum)]
        table: TableArg,
        #[arg(long, value_enum, default_value_t = TierArg::Quick)]
        tier: TierArg,
    },
    /// Writes every reference code file into a directory.
    Export {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Ccz,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TierArg {
    Quick,
    Full,
}

/// Result of one command: JSON payload, human summary, and whether the
/// computation ended in an infeasible state.
#[derive(Debug)]
pub struct Outcome {
    pub value: Value,
    pub human: String,
    pub infeasible: bool,
}

impl Outcome {
    fn ok(value: Value, human: String) -> Self {
        Outcome { value, human, infeasible: false }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) | Error::CapExceeded { .. } | Error::Unsolvable | Error::UnCatchable(_) | Error::NonIntegerOutput(_) => 1,
        _ => 2,
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn rows_json(m: &BitMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::String(r.to_string())).collect())
}

fn load_code(name: &str, order: BitOrder) -> Result<CodeFile> {
    let path = Path::new(name);
    let mut f = if path.exists() {
        CodeFile::load(path)?
    } else if let Some(text) = shipped(name) {
        CodeFile::parse(text)?
    } else {
        return Err(bad(format!("no code file at {name:?} and no shipped file of that name")));
    };
    if order == BitOrder::LsbFirst {
        if let Some(p) = &f.provenance {
            let remapped = Provenance { r: p.r, m: p.m, puncture: p.puncture.iter().map(|&c| remap_coordinate(c, p.m, true)).collect() };
            f.code = materialize(&remapped)?;
            f.provenance = Some(remapped);
        }
    }
    Ok(f)
}

fn read_rows(path: &Path) -> Result<BitMatrix> {
    let text = std::fs::read_to_string(path)?;
    let rows: Vec<BitVec> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| l.parse().map_err(|_| Error::Parse { line: i + 1, msg: "row must be 0/1 characters".into() }))
        .collect::<Result<_>>()?;
    let n = rows.first().map(BitVec::len).ok_or_else(|| bad("row file is empty"))?;
    BitMatrix::from_rows(n, rows)
}

fn parse_coords(s: &str, m: usize, order: BitOrder) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            let c: usize = x.trim().parse().map_err(|_| bad(format!("bad coordinate {x:?}")))?;
            Ok(remap_coordinate(c, m, order == BitOrder::LsbFirst))
        })
        .collect()
}

fn save_code(code: &GenTrioMatrix, provenance: Option<Provenance>, comment: &str, out: &Option<PathBuf>) -> Result<String> {
    let f = CodeFile { comments: vec![comment.to_string()], provenance, code: code.clone() };
    if let Some(p) = out {
        f.save(p)?;
    }
    Ok(f.serialize())
}

fn summary(g: &GenTrioMatrix) -> Value {
    json!({"n": g.n(), "k_t": g.k_t(), "k_cs": g.k_cs(), "k_ccz": g.k_ccz(), "k_0": g.k_0(), "k": g.k()})
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(t) = cli.threads {
        // A second initialization (as in tests) keeps the existing pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let order = cli.bit_order;
    match &cli.command {
        Command::Rm(c) => run_rm(c),
        Command::Trio(c) => run_trio(c, order),
        Command::Enumerate(c) => run_enumerate(c, order),
        Command::Search(c) => run_search(c),
        Command::Analyze(c) => run_analyze(c),
        Command::Simulate(a) => run_simulate(a, order),
        Command::Tables(c) => run_tables(c),
    }
}

fn run_rm(c: &RmCmd) -> Result<Outcome> {
    Ok(match *c {
        RmCmd::Gen(RmArgs { r, m }) => {
            let code = rm_generator(r, m)?;
            let monos: Vec<String> = code.monomials.iter().map(|x| x.to_string()).collect();
            Outcome::ok(
                json!({"r": r, "m": m, "n": 1usize << m, "k": rm_dim(r, m)?, "d": rm_distance(r, m)?, "monomials": monos, "rows": rows_json(&code.generator)}),
                format!("RM({r},{m}): [{}, {}, {}]", 1usize << m, rm_dim(r, m)?, rm_distance(r, m)?),
            )
        }
        RmCmd::Dual(RmArgs { r, m }) => {
            let ok = dual_check(r, m)?;
            Outcome::ok(json!({"r": r, "m": m, "dual_r": m - r - 1, "holds": ok}), format!("RM({r},{m})^perp = RM({},{m}): {ok}", m - r - 1))
        }
        RmCmd::Wedge { r, r2, m } => {
            let ok = wedge_closure_check(r, r2, m)?;
            Outcome::ok(json!({"r": r, "r2": r2, "m": m, "holds": ok}), format!("RM({r},{m}) * RM({r2},{m}) in RM({},{m}): {ok}", r + r2))
        }
        RmCmd::Encoder(RmArgs { r, m }) => {
            let s = encoder_schedule(r, m)?;
            Outcome::ok(
                json!({"r": r, "m": m, "plus_qubits": s.plus_qubits, "rounds": s.rounds, "cnot_count": s.cnot_count(), "depth": s.depth()}),
                format!("encoder RM({r},{m}): {} CNOTs in {} rounds", s.cnot_count(), s.rounds.len()),
            )
        }
    })
}

fn run_trio(c: &TrioCmd, order: BitOrder) -> Result<Outcome> {
    Ok(match c {
        TrioCmd::Verify(FileArg { file }) => {
            let f = load_code(file, order)?;
            let ok = verify_generalized(&f.code);
            let v = check_generalized(&f.code);
            Outcome::ok(json!({"file": file, "code": summary(&f.code), "ok": ok, "violation": v}), if ok { "OK".into() } else { format!("FAIL: {v:?}") })
        }
        TrioCmd::Pad(FileArg { file }) => {
            let f = load_code(file, order)?;
            let p = pad(&f.code)?;
            Outcome::ok(json!({"n": p.n_cols(), "rows": rows_json(&p)}), format!("padded space: {} rows of length {}", p.n_rows(), p.n_cols()))
        }
        TrioCmd::Puncture { r, m, coords, out } => {
            let coords = parse_coords(coords, *m, order)?;
            let g = materialize(&Provenance { r: *r, m: *m, puncture: coords.clone() })?;
            let text = save_code(&g, Some(Provenance { r: *r, m: *m, puncture: coords }), &format!("punctured from RM({r},{m})"), out)?;
            Outcome::ok(json!({"code": summary(&g), "file": text}), format!("[[{},{}]]", g.n(), g.k()))
        }
        TrioCmd::Unpuncture { file, gprime, out } => {
            let f = load_code(file, order)?;
            let g = unpuncture(&f.code, &read_rows(gprime)?)?;
            let text = save_code(&g, None, "unpunctured", out)?;
            Outcome::ok(json!({"code": summary(&g), "file": text}), format!("[[{},{}]]", g.n(), g.k()))
        }
        TrioCmd::Distance { file, method, cap } => {
            let f = load_code(file, order)?;
            let req = match method {
                DistMethod::Auto => DistanceRequest::Auto,
                DistMethod::Exhaustive => DistanceRequest::ExhaustiveLowWeight,
                DistMethod::Macwilliams => DistanceRequest::Macwilliams,
            };
            let s = z_distance(&f.code, req, *cap)?;
            let human = match s.d {
                Some(d) => format!("[[{},{},{d}]] A_{d} = {}", s.n, s.k, s.a_d.clone().unwrap_or_default()),
                None => format!("[[{},{}]] d >= {}", s.n, s.k, s.d_lower_bound),
            };
            Outcome::ok(serde_json::to_value(&s).expect("serializable"), human)
        }
    })
}

fn pick(f: &CodeFile, which: Which) -> BitMatrix {
    match which {
        Which::G0 => f.code.g0().clone(),
        Which::Full => f.code.full_matrix(),
    }
}

fn run_enumerate(c: &EnumCmd, order: BitOrder) -> Result<Outcome> {
    Ok(match c {
        EnumCmd::Span { file, which } => {
            let m = pick(&load_code(file, order)?, *which);
            let e = enumerate_span(&m)?;
            let mut human = String::new();
            for (w, c) in e.support() {
                let _ = writeln!(human, "{w:>5} {c}");
            }
            Outcome::ok(json!({"rank": m.rank(), "enumerator": e.to_json()}), human)
        }
        EnumCmd::Macwilliams { file, which, max_weight } => {
            let m = pick(&load_code(file, order)?, *which);
            let e = enumerate_span(&m)?;
            let top = max_weight.unwrap_or(m.n_cols());
            let d = macwilliams_low(&e, m.rank(), top)?;
            let mut human = String::new();
            for (w, c) in d.support() {
                let _ = writeln!(human, "{w:>5} {c}");
            }
            Outcome::ok(json!({"rank": m.rank(), "max_weight": top, "dual_enumerator": d.to_json()}), human)
        }
        EnumCmd::AdFormula { m } => {
            let a = a_d_closed_form(*m)?;
            Outcome::ok(json!({"m": m, "a_d": a.to_string()}), a.to_string())
        }
        EnumCmd::LogicalCount { file, d, route, stab_weight } => {
            let f = load_code(file, order)?;
            let policy = match route {
                RouteArg::Auto => RoutePolicy::Auto,
                RouteArg::Exhaustive => RoutePolicy::Force(CountRoute::Exhaustive),
                RouteArg::Macwilliams => RoutePolicy::Force(CountRoute::MacWilliams),
                RouteArg::G0Only => RoutePolicy::Force(CountRoute::MacWilliamsG0Only),
            };
            let stab = stab_weight.or_else(|| f.provenance.as_ref().map(|p| crate::trio::rm_punctured_min_stabilizer_weight(p.r)));
            let opts = CountOptions { policy, min_stabilizer_weight: stab, checkpoint_dir: cache_dir_from_env(), ..CountOptions::default() };
            let c = count_logical_z(&f.code, *d, &opts)?;
            Outcome::ok(json!({"d": d, "a_d": c.value.to_string(), "route": c.route}), format!("A_{d} = {} ({:?})", c.value, c.route))
        }
    })
}

fn parse_triples(m: usize, s: &str) -> Result<Vec<Triple>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            Triple::parse(m, &parts)
        })
        .collect()
}

fn run_search(c: &SearchCmd) -> Result<Outcome> {
    Ok(match c {
        SearchCmd::Rand { n, k_t, k_cs, k_ccz, k_0, seed, out } => {
            // Default: floor(theta sqrt n) rows, half odd and half even.
            let total = default_rows(*n, DEFAULT_THETA);
            let k_t = k_t.unwrap_or(total / 2);
            let k_0 = k_0.unwrap_or_else(|| total.saturating_sub(k_t + 2 * k_cs + 3 * k_ccz));
            match generate_generalized(*n, k_t, *k_cs, *k_ccz, k_0, *seed)? {
                Generated::Success { matrix, log } => {
                    let text = save_code(&matrix, None, &format!("randomized construction, seed {seed}"), out)?;
                    Outcome::ok(json!({"outcome": "success", "code": summary(&matrix), "log": log, "file": text}), format!("success: [[{},{}]]", matrix.n(), matrix.k()))
                }
                Generated::Failure { step, log } => Outcome {
                    value: json!({"outcome": "failure", "step": step, "log": log}),
                    human: format!("infeasible at row {step}"),
                    infeasible: true,
                },
            }
        }
        SearchCmd::Ccz { m, k, seed, budget, shuffle, out } => {
            let lll = lll_budget(*m).ok().map(|b| json!({"n_max": b.n_max, "condition_holds": lll_condition(&b, *k)}));
            let r = moser_tardos(*m, *k, *seed, *budget, *shuffle)?;
            match &r {
                SearchOutcome::Success { triples, resamples } => {
                    let g = to_gen_trio(*m, triples)?;
                    let text = save_code(&g, None, &format!("Moser-Tardos triples, m = {m}, seed {seed}"), out)?;
                    Outcome::ok(
                        json!({"search": r, "lll": lll, "verified": verify_generalized(&g), "code": summary(&g), "file": text}),
                        format!("success after {resamples} resamples"),
                    )
                }
                SearchOutcome::GaveUp { resamples, .. } => Outcome { value: json!({"search": r, "lll": lll}), human: format!("gave up after {resamples} resamples"), infeasible: true },
            }
        }
        SearchCmd::ExtendG0 { m, triples } => {
            let t = match triples {
                Some(s) => parse_triples(*m, s)?,
                None => analytic_triples(*m)?,
            };
            let g = to_gen_trio(*m, &t)?;
            let e = extend_g0(&g)?;
            let added: Vec<String> = e.added.iter().map(|v| v.to_string()).collect();
            Outcome::ok(
                json!({"triples": t, "added": added, "maximal": e.maximal(), "non_addable": e.non_addable.len(), "code": summary(&e.matrix)}),
                format!("added {} rows; maximal: {}", e.added.len(), e.maximal()),
            )
        }
    })
}

fn run_analyze(c: &AnalyzeCmd) -> Result<Outcome> {
    Ok(match *c {
        AnalyzeCmd::Trio { n, k, d, a_d, eps, ec } => {
            let r = trio_report(n, k, d, a_d, eps, ec)?;
            let human = format!(
                "p_acc {:.4}  n_out {:.4}  eps_out {:.3e}  eps/output {:.3e}  T/output {:.2}",
                r.p_acc, r.avg_outputs, r.eps_out, r.eps_per_output, r.t_per_output
            );
            Outcome::ok(serde_json::to_value(&r).expect("serializable"), human)
        }
        AnalyzeCmd::Spacetime { k, nx, r, m, n } => {
            let nx = match (nx, r, m) {
                (Some(x), _, _) => x,
                (None, Some(r), Some(m)) => nx_bound(r, m)?,
                _ => return Err(bad("give --nx, or --r and --m")),
            };
            let q = spacetime_qubits(k, nx);
            let rd = n.map(|n| rounds(n, k, nx));
            Outcome::ok(json!({"k": k, "n_x": nx, "qubits": q, "rounds": rd}), format!("{q} qubits"))
        }
        AnalyzeCmd::HyperbolicQuartic { k, n, a4, p } => {
            let r = hyperbolic_quartic_report(k, n, a4, p)?;
            Outcome::ok(serde_json::to_value(&r).expect("serializable"), format!("{} p^4 total, T/output {:.2}", r.coefficient, r.t_per_output))
        }
        AnalyzeCmd::Tcounts { alpha, six_t_base, d_prime } => {
            let t = normal_tcounts(alpha, six_t_base)?;
            let f = d_prime.map(final_3d).transpose()?;
            Outcome::ok(json!({"tcounts": t, "final_3d": f}), format!("n_{alpha} = {} (closed form {})", t.t_count, t.closed_form))
        }
    })
}

fn run_simulate(a: &SimulateArgs, order: BitOrder) -> Result<Outcome> {
    let code = |a: &SimulateArgs| -> Result<GenTrioMatrix> {
        let name = a.code.as_deref().ok_or_else(|| bad("--code is required for this method"))?;
        Ok(load_code(name, order)?.code)
    };
    Ok(match (a.method, a.circuit) {
        (SimMethod::Frame, Some(CircuitArg::Quadratic)) | (SimMethod::Frame, None) => {
            let c = exhaustive_frame_counts(&build_quadratic_ccz()?)?;
            Outcome::ok(serde_json::to_value(&c).expect("serializable"), format!("accepted bad by weight: {:?}", c.bad))
        }
        (SimMethod::Frame, Some(CircuitArg::HyperbolicQuartic)) => {
            let proto = hyperbolic_quartic_protocol(&rm_hyperbolic(a.m)?)?;
            let c = ProtocolResponse::new(&proto)?.weight_counts(a.max_weight.unwrap_or(4))?;
            Outcome::ok(serde_json::to_value(&c).expect("serializable"), format!("accepted bad by weight: {:?}", c.bad))
        }
        (SimMethod::Mc, Some(CircuitArg::HyperbolicQuartic)) => {
            let proto = hyperbolic_quartic_protocol(&rm_hyperbolic(a.m)?)?;
            let r = simulate_check_protocol(&proto, a.p, a.trials, a.seed)?;
            Outcome::ok(serde_json::to_value(&r).expect("serializable"), format!("p_acc {:.4}  eps_out {:.3e}", r.p_acc.value, r.eps_out.value))
        }
        (SimMethod::Mc, _) => {
            let r = simulate_trio(&code(a)?, a.p, a.trials, a.seed, a.ec)?;
            Outcome::ok(
                serde_json::to_value(&r).expect("serializable"),
                format!("p_acc {:.4} [{:.4}, {:.4}]  eps_out {:.3e} [{:.3e}, {:.3e}]", r.p_acc.value, r.p_acc.lo, r.p_acc.hi, r.eps_out.value, r.eps_out.lo, r.eps_out.hi),
            )
        }
        (SimMethod::Exact, _) => {
            let g = code(a)?;
            let mode = match a.max_weight {
                Some(w) => ExactMode::Truncated(w),
                None => ExactMode::Full,
            };
            let e = exact_trio(&g, mode, a.ec)?;
            let poly: Vec<String> = e.error_polynomial().iter().map(|c| c.to_string()).collect();
            Outcome::ok(
                json!({"counts": e, "error_polynomial": poly, "p": a.p, "p_acc": e.p_acc(a.p), "eps_out": e.eps_out(a.p)}),
                format!("leading term {:?}", e.leading()),
            )
        }
        (SimMethod::Stratified, _) => {
            let g = code(a)?;
            let w = a.max_weight.ok_or_else(|| bad("--max-weight is required for stratified sampling"))?;
            let r = simulate_trio_stratified(&g, a.p, w, a.trials, a.seed, a.ec)?;
            Outcome::ok(serde_json::to_value(&r).expect("serializable"), format!("eps_out {:.3e} [{:.3e}, {:.3e}]", r.eps_out.value, r.eps_out.lo, r.eps_out.hi))
        }
    })
}

fn run_tables(c: &TablesCmd) -> Result<Outcome> {
    match c {
        TablesCmd::Reproduce { table, tier } => {
            let tier = match tier {
                TierArg::Quick => Tier::Quick,
                TierArg::Full => Tier::Full,
            };
            let mut human = String::new();
            let (value, pass) = match table {
                TableArg::One | TableArg::Two => {
                    let rows = if matches!(table, TableArg::One) { table_i(tier)? } else { table_ii(tier)? };
                    for r in &rows {
                        let _ = writeln!(
                            human,
                            "{:<16} {} {:<8} A_d={:<10} expected {:<24} {} ({:.1}s)",
                            r.label,
                            if r.pass { "PASS" } else { "FAIL" },
                            r.d.map_or(format!("d>={}", r.d_lower_bound), |d| format!("d={d}")),
                            r.a_d.clone().unwrap_or_else(|| "-".into()),
                            r.expected_a_d,
                            r.note,
                            r.seconds
                        );
                    }
                    (serde_json::to_value(&rows).expect("serializable"), rows.iter().all(|r| r.pass))
                }
                TableArg::Ccz => {
                    let rows = ccz_codes()?;
                    for r in &rows {
                        let _ = writeln!(
                            human,
                            "{:<16} {} generalized={} A_d={} expected {}",
                            r.label,
                            if r.pass { "PASS" } else { "FAIL" },
                            r.generalized,
                            r.a_d.clone().unwrap_or_else(|| "-".into()),
                            r.expected_a_d
                        );
                    }
                    (serde_json::to_value(&rows).expect("serializable"), rows.iter().all(|r| r.pass))
                }
            };
            Ok(Outcome::ok(json!({"rows": value, "all_pass": pass}), human))
        }
        TablesCmd::Export { dir } => {
            std::fs::create_dir_all(dir)?;
            let mut names = Vec::new();
            for (name, text) in render_data_files() {
                std::fs::write(dir.join(&name), text)?;
                names.push(name);
            }
            Ok(Outcome::ok(json!({"dir": dir, "files": names}), format!("wrote {} files", names.len())))
        }
    }
}

/// Parses `args`, runs the command, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(o) => {
            let envelope = json!({"schema_version": SCHEMA_VERSION, "ok": !o.infeasible, "result": o.value});
            println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
            if !o.human.is_empty() {
                eprintln!("{}", o.human.trim_end());
            }
            if o.infeasible { 1 } else { 0 }
        }
        Err(e) => {
            let envelope = json!({"schema_version": SCHEMA_VERSION, "ok": false, "error": e.to_string()});
            println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
