use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use weber_core::chains::{build_chain, ChainVariant};
use weber_core::gf::{make_field, GF2Elt, GF2Field};
use weber_core::hecke::{analyze, default_ells};
use weber_core::modpoly::{
    check_sparsity, check_transform, default_precision, generate, integer_coefficients, is_symmetric,
    load_or_generate, read_poly_file, verify, write_atomic, BiPoly, CacheOutcome, InvariantLine,
};
use weber_core::models::check_models;
use weber_core::ssgraph::{build_graph_with, nodes_above, split_check, ss_j_enumerate, walk_with, FieldBiPoly};
use weber_core::util::fnv1a;
use weber_core::weberaction::{group_closure, sl2_identity_check};
use weber_core::{qseries, Error};

#[derive(Parser, Debug)]
#[command(name = "weber", version, about = "Weber modular polynomials, supersingular graphs and Hecke sieves")]
struct Cli {
    /// Log progress to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct CacheArgs {
    /// Cache directory (falls back to $WEBER_CACHE, then ./.weber-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Always regenerate; never read or write the cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum PolyFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate (or load from cache) a modular polynomial.
    Modpoly {
        #[arg(long)]
        line: InvariantLine,
        #[arg(long)]
        ell: u32,
        /// Solve over the full monomial box instead of the sparse ansatz.
        #[arg(long)]
        no_sparsity: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: PolyFormat,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check that a polynomial vanishes on its q-expansion pair.
    ModpolyVerify {
        #[arg(long)]
        line: InvariantLine,
        #[arg(long)]
        ell: u32,
        /// Polynomial file to check (default: cache or fresh generation).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Relative precision in q^(1/48) steps.
        #[arg(long)]
        prec: Option<i64>,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact q-series identities between the Weber functions.
    QidCheck {
        /// Number of half-integral q-steps to check.
        #[arg(long, default_value_t = 200)]
        terms: i64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Closure of the Weber triple action and the SL2(Z/16) identity.
    GroupCheck {
        #[command(flatten)]
        out: OutArgs,
    },
    /// Supersingular l-isogeny graph on an invariant line.
    Ss {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        line: InvariantLine,
        #[arg(long)]
        ell: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Splitting of the degree-72 Weber polynomial above every supersingular j.
    SplitCheck {
        /// Single prime.
        #[arg(long, conflicts_with = "p_max")]
        p: Option<u64>,
        /// Every prime 5 <= p < P_MAX.
        #[arg(long)]
        p_max: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hecke operators and the integer eigensystem sieve.
    Hecke {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        line: InvariantLine,
        /// Comma-separated primes (default: the first three primes >= 5 other than p).
        #[arg(long, value_delimiter = ',')]
        ells: Vec<u32>,
        /// Include wall-clock timing in the report.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Explicit 2-isogeny chain witness.
    Chain {
        #[arg(long)]
        p: u64,
        /// Seed parameter t3 as "a+b*u"; drawn at random when absent.
        #[arg(long)]
        t3: Option<String>,
        #[arg(long, default_value = "twisted")]
        variant: ChainVariant,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Round trips between the Weber and Fermat models.
    ModelsCheck {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 2, 4, 8])]
        n: Vec<u32>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random non-backtracking walk in a supersingular graph.
    Walk {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        line: InvariantLine,
        #[arg(long)]
        ell: u32,
        /// Starting node as "a+b*u" (default: the smallest node above the first supersingular j).
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 16)]
        length: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Failure of a command: either a library error or a failed verification.
enum Failure {
    Lib(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<(), Failure>;

struct Ctx {
    verbose: bool,
}

impl Ctx {
    fn log(&self, msg: &str) {
        if self.verbose {
            eprintln!("[weber] {msg}");
        }
    }
}

fn warn(msg: &str) {
    eprintln!("{}", json!({"warning": msg}));
}

fn default_seed(parts: &[String]) -> u64 {
    fnv1a(parts.join("|").as_bytes())
}

fn emit(out: &OutArgs, body: &str) -> Result<(), Error> {
    match &out.out {
        Some(path) => write_atomic(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn emit_json(out: &OutArgs, v: &Value) -> Result<(), Error> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    emit(out, &s)
}

/// Emit the report, then fail if `ok` is false.
fn finish(out: &OutArgs, v: Value, ok: bool) -> CmdResult {
    emit_json(out, &v)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cache_dir(c: &CacheArgs) -> Option<PathBuf> {
    if c.no_cache {
        return None;
    }
    Some(
        c.cache_dir
            .clone()
            .or_else(|| std::env::var_os("WEBER_CACHE").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".weber-cache")),
    )
}

fn load_poly(ctx: &Ctx, c: &CacheArgs, line: InvariantLine, ell: u32, use_sparsity: bool) -> Result<BiPoly, Error> {
    let Some(dir) = cache_dir(c) else {
        ctx.log(&format!("generating {} {ell} (cache disabled)", line.name()));
        return generate(line, ell, use_sparsity);
    };
    let t = Instant::now();
    let (poly, outcome) = load_or_generate(&dir, line, ell, use_sparsity)?;
    match &outcome {
        CacheOutcome::Hit => ctx.log(&format!("cache hit {} {ell}", line.name())),
        CacheOutcome::Generated => ctx.log(&format!("generated {} {ell} in {:?}", line.name(), t.elapsed())),
        CacheOutcome::Regenerated(note) => warn(&format!("{note}; regenerated")),
        CacheOutcome::Uncached(note) => warn(&format!("cache not written: {note}")),
    }
    Ok(poly)
}

fn field(p: u64) -> Result<GF2Field, Error> {
    make_field(p)
}

fn parse_elt(f: GF2Field, s: &str) -> Result<GF2Elt, Error> {
    GF2Elt::parse_in(&f, s)
}

fn poly_json(poly: &BiPoly, line: InvariantLine, ell: u32) -> Value {
    let terms: Vec<Value> = match integer_coefficients(poly) {
        Some(ints) => ints.iter().map(|(&(i, j), c)| json!([i, j, c.to_string()])).collect(),
        None => poly.terms().map(|(&(i, j), c)| json!([i, j, c.to_string()])).collect(),
    };
    json!({"line": line.name(), "ell": ell, "count": poly.len(), "terms": terms})
}

fn run(ctx: &Ctx, cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Modpoly { line, ell, no_sparsity, format, cache, out } => {
            let poly = load_poly(ctx, &cache, line, ell, !no_sparsity)?;
            match format {
                PolyFormat::Text => emit(&out, &poly.to_text(line, ell))?,
                PolyFormat::Json => emit_json(&out, &poly_json(&poly, line, ell))?,
            }
            if let Some(path) = &out.out {
                ctx.log(&format!("wrote {} terms to {}", poly.len(), path.display()));
            }
            Ok(())
        }
        Cmd::ModpolyVerify { line, ell, file, prec, cache, out } => {
            let poly = match &file {
                Some(path) => {
                    let (l, e, p) = read_poly_file(path)?;
                    if (l, e) != (line, ell) {
                        return Err(Error::Domain(format!(
                            "{} holds {} {e}, not {} {ell}",
                            path.display(),
                            l.name(),
                            line.name()
                        ))
                        .into());
                    }
                    p
                }
                None => load_poly(ctx, &cache, line, ell, true)?,
            };
            let prec = prec.unwrap_or_else(|| default_precision(line, ell));
            let rep = verify(&poly, line, ell, prec)?;
            let x24 = line == InvariantLine::X(24) && ell >= 5;
            let v = json!({
                "line": line.name(),
                "ell": ell,
                "terms": poly.len(),
                "prec": prec,
                "vanishes": rep.vanishes,
                "checked_to": rep.checked_to,
                "first_nonzero": rep.first_nonzero.map(|(e, c)| json!({"exponent": e, "coeff": c.to_string()})),
                "symmetric": is_symmetric(&poly),
                "sparsity": x24.then(|| check_sparsity(&poly, ell)),
                "transform": x24.then(|| check_transform(&poly, ell)),
            });
            finish(&out, v, rep.vanishes)
        }
        Cmd::QidCheck { terms, out } => {
            if terms < 1 {
                return Err(Error::Domain("--terms must be positive".into()).into());
            }
            let checks = qseries::identity_checks(terms)?;
            let ok = checks.iter().all(|c| c.holds);
            let v = json!({"terms": terms, "identities": checks, "ok": ok});
            finish(&out, v, ok)
        }
        Cmd::GroupCheck { out } => {
            let g = group_closure()?;
            let sl2 = sl2_identity_check();
            let ok = g.ok() && sl2.matches && sl2.square_is_nine;
            let v = json!({
                "orderG": g.order_g,
                "orderD": g.order_d,
                "group": g,
                "sl2_mod16": sl2,
                "ok": ok,
            });
            finish(&out, v, ok)
        }
        Cmd::Ss { p, line, ell, format, cache, out } => {
            let f = field(p)?;
            let poly = load_poly(ctx, &cache, line, ell, true)?;
            let g = build_graph_with(f, line, ell, &poly)?;
            ctx.log(&format!("{} nodes, {} edges", g.nodes.len(), g.edges.len()));
            match format {
                GraphFormat::Json => {
                    let mut v = g.to_json();
                    v["out_degrees"] = json!(g.out_degrees());
                    emit_json(&out, &v)?
                }
                GraphFormat::Dot => emit(&out, &g.to_dot())?,
            }
            Ok(())
        }
        Cmd::SplitCheck { p, p_max, out } => {
            let primes: Vec<u64> = match (p, p_max) {
                (Some(p), _) => vec![p],
                (None, Some(m)) => (5..m).filter(|&q| weber_core::modarith::is_prime(q)).collect(),
                (None, None) => return Err(Error::Domain("give --p or --p-max".into()).into()),
            };
            let mut reports = Vec::new();
            let mut violations = 0;
            for q in primes {
                let r = split_check(field(q)?)?;
                ctx.log(&format!("p={q}: {} violations", r.violations));
                violations += r.violations;
                reports.push(r.to_json());
            }
            let v = json!({"violations": violations, "primes": reports});
            finish(&out, v, violations == 0)
        }
        Cmd::Hecke { p, line, ells, timing, cache, out } => {
            let f = field(p)?;
            let ells = if ells.is_empty() { default_ells(p, 3) } else { ells };
            let t = Instant::now();
            let mut graphs = Vec::new();
            for &ell in &ells {
                let poly = load_poly(ctx, &cache, line, ell, true)?;
                graphs.push(build_graph_with(f, line, ell, &poly)?);
            }
            let rep = analyze(&graphs)?;
            let mut v = rep.to_json();
            if timing {
                v["timing_ms"] = json!(t.elapsed().as_millis() as u64);
            }
            let ok = rep.consistent();
            finish(&out, v, ok)
        }
        Cmd::Chain { p, t3, variant, seed, out } => {
            let f = field(p)?;
            let seed = seed.unwrap_or_else(|| {
                default_seed(&["chain".into(), p.to_string(), variant.name().into(), t3.clone().unwrap_or_default()])
            });
            let w = match &t3 {
                Some(s) => build_chain(f, parse_elt(f, s)?, variant)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut found = None;
                    for _ in 0..1000 {
                        let t3 = f.from_index(rng.gen_range(1..p * p));
                        match build_chain(f, t3, variant) {
                            Ok(w) => {
                                found = Some(w);
                                break;
                            }
                            Err(Error::DegenerateSeed(_)) | Err(Error::NeedsExtension(_)) => {}
                            Err(e) => return Err(e.into()),
                        }
                    }
                    found.ok_or_else(|| Error::DegenerateSeed("no valid seed found in 1000 draws".into()))?
                }
            };
            let mut v = w.to_json();
            v["rng_seed"] = json!(seed);
            let ok = w.checks.all_ok();
            finish(&out, v, ok)
        }
        Cmd::ModelsCheck { p, n, trials, seed, out } => {
            let f = field(p)?;
            let seed = seed.unwrap_or_else(|| {
                default_seed(&["models-check".into(), p.to_string(), format!("{n:?}"), trials.to_string()])
            });
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut reports = Vec::new();
            let mut ok = true;
            for &k in &n {
                let r = check_models(f, k, trials, &mut rng)?;
                ok &= r.ok();
                reports.push(json!({
                    "n": r.n,
                    "samples": r.samples,
                    "fermat_round_trip": r.fermat_round_trip,
                    "weber_round_trip": r.weber_round_trip,
                    "images_on_model": r.images_on_model,
                    "charts_agree": r.charts_agree,
                    "ok": r.ok(),
                }));
            }
            let v = json!({"field": f.header(), "seed": seed, "models": reports, "ok": ok});
            finish(&out, v, ok)
        }
        Cmd::Walk { p, line, ell, start, length, seed, cache, out } => {
            let f = field(p)?;
            let seed = seed.unwrap_or_else(|| {
                default_seed(&[
                    "walk".into(),
                    p.to_string(),
                    line.name(),
                    ell.to_string(),
                    start.clone().unwrap_or_default(),
                    length.to_string(),
                ])
            });
            let u0 = match &start {
                Some(s) => parse_elt(f, s)?,
                None => {
                    let j0 = ss_j_enumerate(f)?[0];
                    nodes_above(f, line, j0)
                        .first()
                        .map(|r| r.0)
                        .ok_or_else(|| Error::Domain(format!("no node of {} above j = {}", line.name(), j0.encode())))?
                }
            };
            let poly = load_poly(ctx, &cache, line, ell, true)?;
            let phi = FieldBiPoly::from_bipoly(f, &poly)?;
            let w = walk_with(&phi, u0, length, seed)?;
            let v = json!({
                "field": f.header(),
                "line": line.name(),
                "ell": ell,
                "seed": seed,
                "path": w.path.iter().map(|x| x.encode()).collect::<Vec<_>>(),
                "dead_end": w.dead_end,
                "verified": w.verified,
            });
            finish(&out, v, w.verified)
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Domain(_)
        | Error::SingularParameter(_)
        | Error::DegenerateSeed(_)
        | Error::NeedsExtension(_)
        | Error::Kernel(_)
        | Error::Chart(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("{}", json!({"error": "UsageError", "message": first}));
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx { verbose: cli.verbose };
    match run(&ctx, cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("{}", json!({"error": "VerificationFailure", "message": "one or more checks failed; see report"}));
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.detail()}));
            ExitCode::from(exit_code_for(&e))
        }
    }
}
