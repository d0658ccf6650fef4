//! Command-line front end. All computation lives in the library; this file
//! parses arguments, moves bytes, and formats results.
//!
//! Exit codes: 0 success, 2 usage or input error, 1 internal error (panic).

use std::fs::{self, File};
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use twistlen::experiments::{
    load_corpora, run_grid_on, run_grid_on_sequential, verify_monotonicity_mass,
    verify_monotonicity_mass_sequential, ExperimentConfig, MonotonicitySummary,
};
use twistlen::kasiski::{divisor_census, find_repeat_distances};
use twistlen::metrics::{
    estimate_ic_friedman, estimate_twist, estimate_twist_plus, estimate_twist_plus_plus,
    friedman_estimate, index_of_coincidence, index_table, Estimate, KeyLengthReport, MDomain,
    Method,
};
use twistlen::report::{
    render_grid_summary, render_indices_table, write_breakdown_csv, write_census_csv,
    write_figure_csvs, write_grid_results_csv, write_histogram_csv, write_indices_csv,
    write_kasiski_csv, Rounding,
};
use twistlen::text::{vigenere_decrypt, vigenere_encrypt, NormalizedText, VigenereKey};

/// Environment variable naming the directory that relative corpus paths in
/// experiment configs resolve against.
const CORPUS_DIR_VAR: &str = "TWISTLEN_CORPUS_DIR";

#[derive(Parser)]
#[command(
    name = "twistlen",
    version,
    about = "Key-length analysis for Vigenere ciphertexts",
    long_about = "Key-length analysis for Vigenere ciphertexts: twist-index estimators, \
                  index of coincidence with the Friedman estimate, Kasiski repeated-n-gram \
                  distances, Monte-Carlo accuracy experiments, and an exact checker for the \
                  twist monotonicity inequality."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt text with a Vigenere keyword (input is normalized to A-Z)
    Encrypt(CryptArgs),
    /// Decrypt text with a Vigenere keyword
    Decrypt(CryptArgs),
    /// Run every key-length estimator on one text and print the verdicts
    Analyze(AnalyzeArgs),
    /// Tabulate the twist index family T, T+, T++ for m = 1..=m_max
    Indices(IndicesArgs),
    /// List repeated n-gram distances and their divisor census
    Kasiski(KasiskiArgs),
    /// Run a Monte-Carlo estimator-accuracy grid from a JSON config
    Experiment(ExperimentArgs),
    /// Check the twist monotonicity inequality on random cases
    VerifyLemma(VerifyLemmaArgs),
}

#[derive(Args)]
struct CryptArgs {
    /// Keyword; letters only, A meaning shift 0
    #[arg(short, long)]
    key: String,
    /// Input file, or - for stdin
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Output file (default: stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input file, or - for stdin
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Smallest key length to consider
    #[arg(long, default_value_t = 2)]
    m_lo: usize,
    /// Largest key length to consider (default: min(25, N/12))
    #[arg(long)]
    m_hi: Option<usize>,
    /// n-gram size for the Kasiski pass
    #[arg(long, default_value_t = 3)]
    ngram: usize,
    /// Only run these methods (comma-separated)
    #[arg(long, value_delimiter = ',', value_parser = Method::from_str)]
    methods: Option<Vec<Method>>,
    /// Also write the estimates as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct IndicesArgs {
    /// Input file, or - for stdin
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Tabulate m = 1..=m_max (default: min(25, N/12))
    #[arg(long)]
    m_max: Option<usize>,
    /// Rounding for printed values: none, int, or 3dp
    #[arg(long, default_value = "none", value_parser = Rounding::from_str)]
    round: Rounding,
    /// Also write the table as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct KasiskiArgs {
    /// Input file, or - for stdin
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Repeated n-gram size
    #[arg(long, default_value_t = 3)]
    ngram: usize,
    /// Largest divisor to tally in the census
    #[arg(long, default_value_t = 20)]
    d_max: u64,
    /// Write match pairs as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the divisor census as CSV
    #[arg(long)]
    census_csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment config
    #[arg(short, long)]
    config: PathBuf,
    /// Directory for result CSVs (created if missing)
    #[arg(short, long)]
    out: PathBuf,
    /// Run trials on one thread even when built with the parallel feature
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct VerifyLemmaArgs {
    /// Number of random cases
    #[arg(long, default_value_t = 100_000)]
    cases: u64,
    /// Master seed for case generation
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Run cases on one thread even when built with the parallel feature
    #[arg(long)]
    sequential: bool,
}

fn main() {
    // Rust ignores SIGPIPE, so printing into a closed pipe (`twistlen ... | head`)
    // panics. Silence that one panic and exit like a signalled Unix filter.
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        if !is_broken_pipe(info.payload()) {
            default_hook(info);
        }
    }));
    let code = match std::panic::catch_unwind(run) {
        Ok(Ok(())) => 0,
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            2
        }
        Err(payload) if is_broken_pipe(payload.as_ref()) => 141,
        Err(_) => {
            eprintln!("internal error (panic); rerun with RUST_BACKTRACE=1 for details");
            1
        }
    };
    std::process::exit(code);
}

fn is_broken_pipe(payload: &(dyn std::any::Any + Send)) -> bool {
    payload
        .downcast_ref::<String>()
        .map(String::as_str)
        .or_else(|| payload.downcast_ref::<&str>().copied())
        .is_some_and(|msg| msg.contains("Broken pipe"))
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Encrypt(args) => crypt(&args, vigenere_encrypt),
        Command::Decrypt(args) => crypt(&args, vigenere_decrypt),
        Command::Analyze(args) => analyze(&args),
        Command::Indices(args) => indices(&args),
        Command::Kasiski(args) => kasiski(&args),
        Command::Experiment(args) => experiment(&args),
        Command::VerifyLemma(args) => verify_lemma(&args),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_text(path: &Path) -> Result<NormalizedText> {
    let text = NormalizedText::normalize(&read_input(path)?);
    if text.is_empty() {
        let name = if path == Path::new("-") {
            "stdin".to_string()
        } else {
            path.display().to_string()
        };
        bail!("{name} contains no letters");
    }
    Ok(text)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn crypt(args: &CryptArgs, f: fn(&NormalizedText, &VigenereKey) -> NormalizedText) -> Result<()> {
    let key = VigenereKey::from_word(&args.key).with_context(|| format!("key '{}'", args.key))?;
    let text = read_text(&args.input)?;
    write_output(args.output.as_deref(), &format!("{}\n", f(&text, &key)))
}

/// The default analysis ceiling: past q = N/12 every coset has at most 12
/// letters and the twist index pins to 100, so larger m carries no signal.
fn default_m_hi(n: usize) -> usize {
    25.min(n / 12)
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let text = read_text(&args.input)?;
    let n = text.len();
    let q = n / 12;

    let m_lo = args.m_lo;
    let m_hi = args.m_hi.unwrap_or_else(|| default_m_hi(n));
    if m_lo < 2 || m_lo > m_hi {
        bail!(
            "m range {m_lo}..={m_hi} is invalid: need 2 <= m_lo <= m_hi \
             (the text supports m_hi up to {n}; the default ceiling min(25, N/12) = {})",
            default_m_hi(n)
        );
    }
    if m_hi > n {
        bail!("m_hi = {m_hi} exceeds the text length {n}");
    }
    let domain = MDomain::new(m_lo, m_hi)?;

    let all = [
        Method::IcFriedman,
        Method::Kasiski,
        Method::Twist,
        Method::TwistPlus,
        Method::TwistPlusPlus,
    ];
    let wanted = |m: Method| args.methods.as_ref().is_none_or(|ms| ms.contains(&m));

    println!("letters: {n} (twist ceiling q = {q})");
    let mut reports: Vec<KeyLengthReport> = Vec::new();
    for method in all {
        if !wanted(method) {
            continue;
        }
        match method {
            Method::IcFriedman => {
                let ic = index_of_coincidence(&text)?;
                println!("index of coincidence: {ic:.6}");
                match friedman_estimate(&text) {
                    Ok(est) => println!("friedman estimate: {est:.4}"),
                    Err(err) => println!("friedman estimate: none ({err})"),
                }
                reports.push(estimate_ic_friedman(&text)?);
            }
            Method::Kasiski => {
                let report = find_repeat_distances(&text, args.ngram)?;
                if report.distances.is_empty() {
                    println!("kasiski: no repeated {}-grams", args.ngram);
                } else {
                    let gcd = report.overall_gcd.expect("nonempty distances");
                    println!(
                        "kasiski: {} match pairs, {} distinct distances, gcd {gcd}",
                        report.matches.len(),
                        report.distances.len(),
                    );
                    println!("  distances: {}", join(&report.distances));
                }
            }
            Method::Twist => reports.push(estimate_twist(&text, domain)?),
            Method::TwistPlus => reports.push(estimate_twist_plus(&text, domain)?),
            Method::TwistPlusPlus => reports.push(estimate_twist_plus_plus(&text, domain)?),
        }
    }

    for report in &reports {
        if let (Estimate::KeyLength(m), Some(domain)) = (&report.estimate, report.domain) {
            let peak = peak_value(report);
            println!(
                "{}: m = {m} over {domain}{}",
                report.method,
                peak.map_or(String::new(), |v| format!(" (index {v:.4})"))
            );
        } else {
            println!("{}: estimate {}", report.method, report.estimate);
        }
    }

    if let Some(csv_path) = &args.csv {
        let mut w = csv::Writer::from_writer(create(csv_path)?);
        w.write_record(["method", "estimate", "m_lo", "m_hi"])?;
        for report in &reports {
            let (lo, hi) = report.domain.map_or((String::new(), String::new()), |d| {
                (d.lo.to_string(), d.hi.to_string())
            });
            w.write_record([
                report.method.name().to_string(),
                report.estimate.to_string(),
                lo,
                hi,
            ])?;
        }
        w.flush()?;
        eprintln!("wrote {}", csv_path.display());
    }
    Ok(())
}

/// Index value backing an argmax verdict.
fn peak_value(report: &KeyLengthReport) -> Option<f64> {
    if let (Estimate::KeyLength(m), twistlen::metrics::Evidence::IndexSeries(series)) =
        (&report.estimate, &report.evidence)
    {
        series.iter().find(|(mm, _)| mm == m).map(|&(_, v)| v)
    } else {
        None
    }
}

fn indices(args: &IndicesArgs) -> Result<()> {
    let text = read_text(&args.input)?;
    let n = text.len();
    let m_max = args.m_max.unwrap_or_else(|| default_m_hi(n));
    if m_max < 2 {
        bail!(
            "m_max = {m_max} is below 2; the text has {n} letters \
             (default ceiling min(25, N/12) = {})",
            default_m_hi(n)
        );
    }
    if m_max > n {
        bail!("m_max = {m_max} exceeds the text length {n}");
    }
    let rows = index_table(&text, m_max)?;
    print!("{}", render_indices_table(&rows, args.round));
    if let Some(csv_path) = &args.csv {
        write_indices_csv(create(csv_path)?, &rows, args.round)?;
        eprintln!("wrote {}", csv_path.display());
    }
    Ok(())
}

fn kasiski(args: &KasiskiArgs) -> Result<()> {
    let text = read_text(&args.input)?;
    let report = find_repeat_distances(&text, args.ngram)?;
    if report.matches.is_empty() {
        println!(
            "no repeated {}-grams in {} letters; Kasiski is inconclusive",
            args.ngram,
            text.len()
        );
        return Ok(());
    }

    println!(
        "repeated {}-grams ({} match pairs):",
        args.ngram,
        report.matches.len()
    );
    println!(
        "  {:<12} {:>6} {:>6} {:>9}",
        "ngram", "pos_a", "pos_b", "distance"
    );
    for m in &report.matches {
        println!(
            "  {:<12} {:>6} {:>6} {:>9}",
            m.ngram, m.pos_a, m.pos_b, m.distance
        );
    }
    println!("distinct distances: {}", join(&report.distances));
    println!(
        "overall gcd: {}",
        report.overall_gcd.expect("nonempty distances")
    );

    let census = divisor_census(&report.distances, args.d_max)?;
    println!("divisor census (2..={}):", args.d_max);
    println!("  {:>7} {:>6}", "divisor", "count");
    for &(d, count) in &census.counts {
        println!("  {d:>7} {count:>6}");
    }

    if let Some(path) = &args.csv {
        write_kasiski_csv(create(path)?, &report)?;
        eprintln!("wrote {}", path.display());
    }
    if let Some(path) = &args.census_csv {
        write_census_csv(create(path)?, &census)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs) -> Result<()> {
    let raw = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut config: ExperimentConfig =
        serde_json::from_str(&raw).with_context(|| format!("parsing {}", args.config.display()))?;
    resolve_corpus_paths(&mut config);
    config.validate()?;

    let corpus = load_corpora(&config.corpus_paths).context("loading corpora")?;
    eprintln!(
        "corpus: {} letters from {} file(s)",
        corpus.len(),
        config.corpus_paths.len()
    );

    let grid = if args.sequential {
        run_grid_on_sequential(&config, &corpus)?
    } else {
        run_grid_on(&config, &corpus)?
    };

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut written = Vec::new();

    let results = args.out.join("results.csv");
    write_grid_results_csv(create(&results)?, &grid)?;
    written.push(results);

    let histogram = args.out.join("histogram.csv");
    write_histogram_csv(create(&histogram)?, &grid)?;
    written.push(histogram);

    let breakdown = args.out.join("breakdown.csv");
    write_breakdown_csv(create(&breakdown)?, &grid)?;
    written.push(breakdown);

    written.extend(write_figure_csvs(&args.out, &grid)?);

    print!("{}", render_grid_summary(&grid));
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// Relative corpus paths resolve against $TWISTLEN_CORPUS_DIR when set.
fn resolve_corpus_paths(config: &mut ExperimentConfig) {
    if let Ok(dir) = std::env::var(CORPUS_DIR_VAR) {
        let dir = PathBuf::from(dir);
        for path in &mut config.corpus_paths {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
    }
}

fn verify_lemma(args: &VerifyLemmaArgs) -> Result<()> {
    let summary: MonotonicitySummary = if args.sequential {
        verify_monotonicity_mass_sequential(args.cases, args.seed)
    } else {
        verify_monotonicity_mass(args.cases, args.seed)
    };
    println!("cases: {}", summary.cases);
    println!("hypothesis held: {}", summary.hypothesis_true_cases);
    println!("equalities: {}", summary.equalities);
    println!("violations: {}", summary.violations.len());
    for v in &summary.violations {
        println!(
            "counterexample case {}: m = {}, lambda = {}, T(m) = {}, T(lambda*m) = {}",
            v.case_index, v.verdict.m, v.verdict.lambda, v.verdict.t_m, v.verdict.t_lambda_m
        );
        println!("  text: {}", v.text);
    }
    Ok(())
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}
