//! Command-line front end. Every command is a thin adapter over the
//! library; verdicts and values are identical to direct library calls.
//!
//! Exit codes: 0 success/index, 1 selfcheck failure, 2 usage or domain
//! error, 3 outlaw, 4 unknown.

mod output;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use abundancy_core::classify::{classify_with, EffortBudget, RuleRegistry, Verdict};
use abundancy_core::divisor::{abundancy, sigma_of, AbundancyQuery};
use abundancy_core::error::Error as CoreError;
use abundancy_core::limits::{even_perfect_sequence_with_max, limit_general, LimitSpec};
use abundancy_core::natural::{parse_natural, Natural};
use abundancy_core::oracle::cache::{CacheOutcome, ImageCache};
use abundancy_core::oracle::{image_enumerate, search_witness_with, DivisorSieve};
use abundancy_core::classify::derive::{odd_perfect_check, odd_perfect_target};
use abundancy_core::rational::PositiveRational;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use output::RecordBuilder;

#[derive(Parser)]
#[command(
    name = "abundancy",
    about = "Exact abundancy-index calculator, outlaw classifier, and brute-force auditor",
    version
)]
struct Cli {
    /// Emit one machine-readable JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for enumeration and search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum of divisors raised to a power: σ_x(n).
    Sigma {
        /// Argument n ≥ 1 (decimal).
        n: String,
        #[command(flatten)]
        x: XArg,
        /// Also print a decimal rendering with this many fractional digits.
        #[arg(long, value_name = "P")]
        decimal: Option<u32>,
    },
    /// Abundancy index I(x, n) = σ_x(n)/n^x, exact.
    Index {
        n: String,
        #[command(flatten)]
        x: XArg,
        #[arg(long, value_name = "P")]
        decimal: Option<u32>,
    },
    /// Decide whether a rational > 1 is attained (index) or certified
    /// unattainable (outlaw). Exit code 0 index / 3 outlaw / 4 unknown.
    Classify {
        /// The fraction, as "a/b" (or a bare integer).
        q: String,
        #[command(flatten)]
        x: XArg,
        /// Exhaustive witness search bound.
        #[arg(long, default_value_t = 1_000_000)]
        witness_bound: u64,
        /// Cap on divisor candidates per certifying search.
        #[arg(long, default_value_t = 100_000)]
        divisor_cap: usize,
        /// Largest surplus t tried by the t2 rule.
        #[arg(long, default_value_t = 50)]
        t_max: u64,
        /// Comma-separated certifying rules, in application order.
        #[arg(long, default_value = "t1,t2,t3")]
        rules: String,
    },
    /// Exact limit of I(x, n·m^k) as k grows.
    Limit {
        n: String,
        m: String,
        #[command(flatten)]
        x: XArg,
        #[arg(long, value_name = "P")]
        decimal: Option<u32>,
    },
    /// The sequence N = 2^(p-1)(2^p - 1) over ascending primes p with
    /// exact I(x, N) and distance to the limit 2^x/(2^x - 1).
    PerfectSeq {
        /// How many terms.
        count: usize,
        #[command(flatten)]
        x: XArg,
        /// Keep only terms where 2^p - 1 is prime (perfect numbers).
        #[arg(long)]
        mersenne_only: bool,
        /// Cap on the sequence length.
        #[arg(long, default_value_t = abundancy_core::limits::DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Exhaustive witness search for I(x, n) = q, n ≤ bound.
    Search {
        q: String,
        #[command(flatten)]
        x: XArg,
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
        /// Scan every integer instead of only the mandatory multiples.
        #[arg(long)]
        no_prune: bool,
    },
    /// Enumerate all attained values I(x, n) for n ≤ bound.
    Image {
        #[command(flatten)]
        x: XArg,
        #[arg(long)]
        bound: u64,
        /// Print every value/witness pair.
        #[arg(long)]
        print: bool,
        /// Cache directory (overrides ABUNDANCY_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Skip the on-disk cache entirely.
        #[arg(long)]
        no_cache: bool,
    },
    /// Run the full invariant suite and certificate audit.
    Selfcheck {
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        #[arg(long, default_value_t = 3)]
        x_max: u32,
        /// Inject a deliberately forged certificate; the audit must catch
        /// it and the run must exit nonzero.
        #[arg(long)]
        inject_forged: bool,
    },
    /// The odd-perfect criterion target 2p^α(p-1)/(p^(α+1)-1), and
    /// optionally check a concrete n against it.
    OddPerfectCheck {
        /// Prime p ≡ 1 (mod 4).
        p: String,
        /// Exponent α ≡ 1 (mod 4).
        alpha: String,
        /// Check whether I(1, n) equals the target with p not dividing n.
        #[arg(long)]
        n: Option<String>,
    },
}

#[derive(Args)]
struct XArg {
    /// Exponent x ≥ 1 of the index function.
    #[arg(long, default_value_t = 1)]
    x: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let run_it = || match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            // Domain and parse problems are usage errors by contract.
            match err.downcast_ref::<CoreError>() {
                Some(CoreError::Domain(_)) | Some(CoreError::Parse(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    };
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool");
            pool.install(run_it)
        }
        None => run_it(),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Sigma { n, x, decimal } => cmd_sigma(&n, x.x, decimal, cli.json),
        Command::Index { n, x, decimal } => cmd_index(&n, x.x, decimal, cli.json),
        Command::Classify {
            q,
            x,
            witness_bound,
            divisor_cap,
            t_max,
            rules,
        } => cmd_classify(&q, x.x, witness_bound, divisor_cap, t_max, &rules, cli.json),
        Command::Limit { n, m, x, decimal } => cmd_limit(&n, &m, x.x, decimal, cli.json),
        Command::PerfectSeq {
            count,
            x,
            mersenne_only,
            max_terms,
        } => cmd_perfect_seq(count, x.x, mersenne_only, max_terms, cli.json),
        Command::Search { q, x, bound, no_prune } => cmd_search(&q, x.x, bound, !no_prune, cli.json),
        Command::Image {
            x,
            bound,
            print,
            cache_dir,
            no_cache,
        } => cmd_image(x.x, bound, print, cache_dir, no_cache, cli.json),
        Command::Selfcheck {
            bound,
            x_max,
            inject_forged,
        } => cmd_selfcheck(bound, x_max, inject_forged, cli.json),
        Command::OddPerfectCheck { p, alpha, n } => cmd_odd_perfect(&p, &alpha, n.as_deref(), cli.json),
    }
}

fn parse_positive(name: &str, s: &str) -> anyhow::Result<Natural> {
    let value = parse_natural(s)?;
    if value == Natural::default() {
        return Err(CoreError::domain(format!("{name} must be positive")).into());
    }
    Ok(value)
}

fn cmd_sigma(n_str: &str, x: u32, decimal: Option<u32>, json: bool) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("sigma")
        .input("n", n_str)
        .input("x", x)
        .input_opt("decimal", decimal);
    let query = AbundancyQuery::new(x, parse_positive("n", n_str)?)?;
    let value = sigma_of(query.n(), query.x())?;
    if json {
        let mut result = json!({ "value": value.to_string() });
        if let Some(p) = decimal {
            result["decimal"] = json!(PositiveRational::from_natural(value.clone())?.to_decimal(p));
        }
        output::emit(&record.finish(result));
    } else {
        println!("{value}");
        if let Some(p) = decimal {
            println!("≈ {}", PositiveRational::from_natural(value)?.to_decimal(p));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_index(n_str: &str, x: u32, decimal: Option<u32>, json: bool) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("index")
        .input("n", n_str)
        .input("x", x)
        .input_opt("decimal", decimal);
    let query = AbundancyQuery::new(x, parse_positive("n", n_str)?)?;
    let value = abundancy(query.x(), query.n())?;
    if json {
        let mut result = json!({ "value": value.to_string() });
        if let Some(p) = decimal {
            result["decimal"] = json!(value.to_decimal(p));
        }
        output::emit(&record.finish(result));
    } else {
        println!("{value}");
        if let Some(p) = decimal {
            println!("≈ {}", value.to_decimal(p));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    q_str: &str,
    x: u32,
    witness_bound: u64,
    divisor_cap: usize,
    t_max: u64,
    rules: &str,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("classify")
        .input("q", q_str)
        .input("x", x)
        .input("witness_bound", witness_bound)
        .input("divisor_cap", divisor_cap)
        .input("t_max", t_max)
        .input("rules", rules);
    let q: PositiveRational = q_str.parse()?;
    let effort = EffortBudget {
        witness_bound,
        divisor_enum_cap: divisor_cap,
        t_max,
    };
    let registry = RuleRegistry::from_selection(rules)?;
    let classification = classify_with(&q, x, &effort, &registry)?;
    let code = ExitCode::from(classification.exit_code() as u8);
    if json {
        output::emit(
            &record
                .notes(&classification.notes)
                .finish(classification.verdict_json()),
        );
        return Ok(code);
    }
    match &classification.verdict {
        Verdict::Index { witness } => {
            println!("{q} at x = {x}: index");
            println!("witness: {witness}");
        }
        Verdict::Outlaw { certificate } => {
            println!("{q} at x = {x}: outlaw");
            println!("certificate: {certificate}");
        }
        Verdict::Unknown => {
            println!("{q} at x = {x}: unknown");
            println!(
                "no witness ≤ {witness_bound}, and no certifying rule applied (rules: {rules})"
            );
        }
    }
    for note in &classification.notes {
        println!("note: {note}");
    }
    Ok(code)
}

fn cmd_limit(
    n_str: &str,
    m_str: &str,
    x: u32,
    decimal: Option<u32>,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("limit")
        .input("n", n_str)
        .input("m", m_str)
        .input("x", x)
        .input_opt("decimal", decimal);
    let spec = LimitSpec::new(
        parse_positive("n", n_str)?,
        parse_positive("m", m_str)?,
        x,
    )?;
    let limit = limit_general(&spec)?;
    let mut notes = Vec::new();
    if limit.degenerate {
        notes.push(format!(
            "m = 1 makes the sequence constant; the value is just I({x}, {n_str})"
        ));
    }
    if json {
        let mut result = json!({
            "value": limit.value.to_string(),
            "degenerate": limit.degenerate,
        });
        if let Some(p) = decimal {
            result["decimal"] = json!(limit.value.to_decimal(p));
        }
        output::emit(&record.notes(&notes).finish(result));
    } else {
        for note in &notes {
            eprintln!("warning: {note}");
        }
        println!("{}", limit.value);
        if let Some(p) = decimal {
            println!("≈ {}", limit.value.to_decimal(p));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_perfect_seq(
    count: usize,
    x: u32,
    mersenne_only: bool,
    max_terms: usize,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("perfect-seq")
        .input("count", count)
        .input("x", x)
        .input("mersenne_only", mersenne_only);
    let terms = even_perfect_sequence_with_max(count, x, mersenne_only, max_terms)?;
    let two_x = Natural::from(2u32).pow(x);
    let limit = PositiveRational::new(two_x.clone(), two_x - Natural::from(1u32))?;
    if json {
        let rows: Vec<_> = terms
            .iter()
            .map(|t| {
                json!({
                    "p": t.p.to_string(),
                    "n": t.value.to_string(),
                    "index": t.index.to_string(),
                    "mersenne": t.mersenne,
                    "distance": distance_string(&t.index, &limit),
                })
            })
            .collect();
        output::emit(&record.finish(json!({
            "limit": limit.to_string(),
            "terms": rows,
        })));
    } else {
        println!("limit: {limit}");
        for t in &terms {
            println!(
                "p={:<4} N={:<24} I={}  distance={}{}",
                t.p,
                t.value,
                t.index,
                distance_string(&t.index, &limit),
                if t.mersenne { "" } else { "  (2^p-1 composite)" }
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn distance_string(a: &PositiveRational, b: &PositiveRational) -> String {
    match a.abs_diff(b) {
        Some(d) => d.to_string(),
        None => "0".to_string(),
    }
}

fn cmd_search(
    q_str: &str,
    x: u32,
    bound: u64,
    prune: bool,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("search")
        .input("q", q_str)
        .input("x", x)
        .input("bound", bound)
        .input("prune", prune);
    let q: PositiveRational = q_str.parse()?;
    let sieve = DivisorSieve::new(bound.max(1));
    let report = search_witness_with(&q, x, bound, prune, &sieve)?;
    if json {
        output::emit(&record.finish(json!({
            "witness": report.witness.as_ref().map(|w| w.to_string()),
            "scanned": report.scanned.to_string(),
            "bound": report.bound.to_string(),
            "pruned": report.pruned,
        })));
    } else {
        match &report.witness {
            Some(w) => println!("witness: {w}"),
            None => println!("no witness ≤ {bound}"),
        }
        println!(
            "scanned {} candidate(s) in {:?}{}",
            report.scanned,
            report.elapsed,
            if report.pruned { " (pruned)" } else { "" }
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_image(
    x: u32,
    bound: u64,
    print: bool,
    cache_dir: Option<PathBuf>,
    no_cache: bool,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("image")
        .input("x", x)
        .input("bound", bound);
    let cache = if no_cache {
        None
    } else {
        ImageCache::resolve(cache_dir)
    };
    let (table, outcome, path) = match &cache {
        Some(cache) => {
            let (table, outcome) = cache.load_or_enumerate(x, bound)?;
            let path = cache.file_path(x, bound);
            (table, Some(outcome), Some(path))
        }
        None => (image_enumerate(x, bound)?, None, None),
    };
    if json {
        output::emit(&record.finish(json!({
            "entries": table.len().to_string(),
            "cache": path.as_ref().map(|p| p.display().to_string()),
            "cache_outcome": outcome.map(|o| format!("{o:?}")),
        })));
    } else {
        println!("x = {x}, bound = {bound}: {} attained value(s)", table.len());
        if let (Some(path), Some(outcome)) = (&path, outcome) {
            let verb = match outcome {
                CacheOutcome::Hit => "loaded from",
                CacheOutcome::Shrunk { .. } => "filtered from",
                CacheOutcome::Extended { .. } => "extended into",
                CacheOutcome::Miss => "written to",
            };
            println!("cache: {verb} {}", path.display());
        }
        if print {
            for (value, witness) in table.by_witness() {
                println!("{}\t{}\t{}", x, value.to_fraction_string(), witness);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selfcheck(
    bound: u64,
    x_max: u32,
    inject_forged: bool,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("selfcheck")
        .input("bound", bound)
        .input("x_max", x_max)
        .input("inject_forged", inject_forged);
    if bound == 0 || x_max == 0 {
        return Err(CoreError::domain("bound and x_max must be positive").into());
    }
    let report = selfcheck::run(bound, x_max, inject_forged)?;
    let passed = report.all_passed();
    if json {
        output::emit(&record.finish(json!({
            "passed": passed,
            "checks": report.outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
        })));
    } else {
        print!("{}", selfcheck::render_table(&report));
        println!(
            "{}",
            if passed {
                "all checks passed"
            } else {
                "SELFCHECK FAILED"
            }
        );
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_odd_perfect(
    p_str: &str,
    alpha_str: &str,
    n_str: Option<&str>,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let record = RecordBuilder::new("odd-perfect-check")
        .input("p", p_str)
        .input("alpha", alpha_str)
        .input_opt("n", n_str);
    let p = parse_positive("p", p_str)?;
    let alpha = parse_positive("alpha", alpha_str)?;
    match n_str {
        None => {
            let target = odd_perfect_target(&p, &alpha)?;
            if json {
                output::emit(&record.finish(json!({ "target": target.to_string() })));
            } else {
                println!("target: {target}");
                println!(
                    "an n with I(1, n) = {target} and {p} ∤ n would make {p}^{alpha}·n an odd perfect number"
                );
            }
        }
        Some(n_str) => {
            let n = parse_positive("n", n_str)?;
            let check = odd_perfect_check(&n, &p, &alpha)?;
            if json {
                output::emit(&record.finish(json!({
                    "target": check.target.to_string(),
                    "index_matches": check.index_matches,
                    "p_divides_n": check.p_divides_n,
                    "satisfied": check.satisfied(),
                })));
            } else {
                println!("target: {}", check.target);
                println!("I(1, {n}) = target: {}", check.index_matches);
                println!("{p} divides {n}: {}", check.p_divides_n);
                if check.satisfied() {
                    println!("*** CRITERION SATISFIED: {p}^{alpha}·{n} is an odd perfect number candidate — verify by hand immediately ***");
                } else {
                    println!("criterion not satisfied");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
