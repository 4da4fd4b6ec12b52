//! Command-line surface: measure queries, separation checks, the exact
//! exponent sweep, sequence generators, hypothesis checking, and the
//! certification pipeline. Exit codes: 0 success, 1 precondition error,
//! 2 undetermined-at-precision.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use recipdeg::algnum::AlgebraicNumber;
use recipdeg::bounds;
use recipdeg::certify::{self, BracketVariant, LinearCombination};
use recipdeg::dyadic::{ComplexBox, Dyadic, DyadicInterval, LogMagnitude, Round};
use recipdeg::hypotheses::{
    self, checker_by_name, rational_string, CheckParams, HypothesisConfig, SequenceTable,
};
use recipdeg::intpoly::IntPolynomial;
use recipdeg::rootbox;
use recipdeg::sequences::{self, TowerStep};
use recipdeg::Error;

#[derive(Parser)]
#[command(name = "recipdeg", version, about = "exact measures and degree evidence for series of reciprocals of algebraic integers")]
struct Cli {
    /// Working fractional bits for certified enclosures.
    #[arg(long, global = true, default_value_t = 128)]
    bits: u32,

    /// Relative tolerance for measure enclosures, as a rational like 1/1000000.
    #[arg(long, global = true, default_value = "1/1000000000000")]
    rel_tol: String,

    /// Reserved for randomized subcommands; accepted for reproducibility.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Maximum modulus among the conjugates of an algebraic number.
    House(MeasureArgs),
    /// Mahler measure (reported in linear and log2 form).
    Mahler(MeasureArgs),
    /// Weil height via H = M^(1/deg).
    Height(MeasureArgs),
    /// Separation check |a - b| against the Liouville-type lower bound.
    Sep(SepArgs),
    /// Tail bound (2 + 1/eps) / a_N^(eps/(1+eps)).
    TailBound(TailArgs),
    /// Exhaustive exact check of the exponent-product inequality.
    ExponentSweep(SweepArgs),
    /// Emit sequence tables for the example families.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run a hypothesis checker preset over a sequence table.
    Check(CheckArgs),
    /// Evaluate the Phi(N) certification trace over a table.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct MeasureArgs {
    /// Minimal polynomial as a JSON array of integer coefficients,
    /// ascending degree, e.g. "[2,-4,1]".
    #[arg(long)]
    minpoly: String,

    /// Isolating box as JSON {"re":[lo,hi],"im":[lo,hi]} with dyadic
    /// strings; omitted: the first root box of the polynomial is used.
    #[arg(long = "box")]
    root_box: Option<String>,
}

#[derive(Args)]
struct SepArgs {
    /// First number as JSON {"minpoly":[...],"box":{...}}.
    #[arg(long)]
    a: String,
    /// Second number, same format.
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct TailArgs {
    /// a_N as a dyadic string ("16" or "m*2^e").
    #[arg(long)]
    a_n: String,
    /// epsilon as a rational ("1" or "1/2").
    #[arg(long)]
    eps: String,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "max-D", default_value_t = 3)]
    max_d_upper: u32,
    #[arg(long = "max-K", default_value_t = 3)]
    max_k: u32,
    #[arg(long = "max-d", default_value_t = 3)]
    max_d: u32,
    #[arg(long = "max-N", default_value_t = 5)]
    max_n: usize,
}

#[derive(Subcommand)]
enum GenCmd {
    /// a_{n+1} = a_n^2 - a_n + 1.
    Sylvester {
        #[arg(long)]
        a1: u64,
        #[arg(long)]
        n: usize,
        /// Print the bare integer sequence instead of a sequence table.
        #[arg(long)]
        raw: bool,
    },
    /// Doubly exponential tower with an oscillating base.
    Tower {
        #[arg(long)]
        base_lo: String,
        #[arg(long)]
        base_hi: String,
        /// Comma-separated lo/hi pattern, e.g. "lo,hi".
        #[arg(long, default_value = "lo,hi")]
        pattern: String,
        #[arg(long, default_value = "1")]
        eps: String,
        #[arg(long = "D", default_value_t = 1)]
        d_upper: u32,
        #[arg(long = "K", default_value_t = 1)]
        k: u32,
        /// Comma-separated d_n values, e.g. "1,1,1".
        #[arg(long, default_value = "1")]
        ds: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        raw: bool,
    },
    /// Quadratic surds a_n + sqrt(r).
    Surd {
        /// Comma-separated integers a_n.
        #[arg(long)]
        a: String,
        #[arg(long)]
        r: u64,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Full hypothesis config as a JSON file (flags below override it).
    #[arg(long)]
    config: Option<String>,
    #[arg(long = "D")]
    d_upper: Option<u32>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    /// Comma-separated d_n list.
    #[arg(long)]
    ds: Option<String>,
    /// Comma-separated integer betas.
    #[arg(long)]
    betas: Option<String>,
    #[arg(long)]
    zeta_re: Option<String>,
    #[arg(long)]
    zeta_im: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// Checker name: theorem4, erdos_thm1, hancl_thm2, ak_thm3, k1_thm5.
    #[arg(long)]
    preset: String,
    /// Sequence table JSON file ("-" for stdin).
    #[arg(long)]
    table: String,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    claimed_a1: Option<String>,
    #[arg(long)]
    claimed_a2: Option<String>,
    /// Degree cap for the bounded-degree preset.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Emit the report as JSON instead of the human table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertifyArgs {
    /// Sequence table JSON file ("-" for stdin).
    #[arg(long)]
    table: String,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 1)]
    n_from: usize,
    #[arg(long)]
    n_to: usize,
    /// Bracket exponent form: canonical, product-power, half-index.
    #[arg(long, default_value = "canonical")]
    variant: String,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Undetermined { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let rel_tol = parse_tolerance(&cli.rel_tol, cli.bits)?;
    let _ = cli.seed;
    match cli.cmd {
        Cmd::House(args) => {
            let alpha = parse_measure_input(&args)?;
            let h = alpha.house(&rel_tol)?;
            print_interval("house", &h, cli.bits);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Mahler(args) => {
            let alpha = parse_measure_input(&args)?;
            let m = alpha.mahler_measure(&rel_tol)?;
            print_log_magnitude("M", &m, cli.bits)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Height(args) => {
            let alpha = parse_measure_input(&args)?;
            let h = alpha.weil_height(&rel_tol)?;
            print_log_magnitude("H", &h, cli.bits)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sep(args) => {
            let a: AlgebraicNumber = serde_json::from_str(&args.a)
                .map_err(|e| Error::Parse(format!("bad --a: {e}")))?;
            let b: AlgebraicNumber = serde_json::from_str(&args.b)
                .map_err(|e| Error::Parse(format!("bad --b: {e}")))?;
            let bound = bounds::liouville_lower_bound(&a, &b, &rel_tol)?;
            print_log_magnitude("separation bound", &bound, cli.bits)?;
            let (margin, ok) = bounds::check_separation(&a, &b, &rel_tol)?;
            println!(
                "log2 margin in [{} , {}]  (~[{}, {}])",
                margin.log2_lo(),
                margin.log2_hi(),
                margin.log2_lo().to_decimal(8, Round::Down),
                margin.log2_hi().to_decimal(8, Round::Up),
            );
            println!("separation holds: {ok}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::TailBound(args) => {
            let a_n: Dyadic = args.a_n.parse()?;
            let eps = parse_rational(&args.eps)?;
            let b = bounds::erdos_tail_bound(&a_n, &eps, cli.bits)?;
            print_interval("tail bound", &b, cli.bits);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ExponentSweep(args) => {
            let mut cases = 0usize;
            let mut violations = 0usize;
            for d in 1..=args.max_d_upper {
                for k in 1..=args.max_k {
                    for n in 1..=args.max_n {
                        for ds in tuples(args.max_d, n) {
                            let (lhs, rhs) = bounds::exponent_inequality_sides(d, k, &ds);
                            cases += 1;
                            if lhs < rhs {
                                violations += 1;
                                println!("violation at D={d} K={k} ds={ds:?}: {lhs} < {rhs}");
                            }
                        }
                    }
                }
            }
            println!("{violations} violations in {cases} exact cases");
            Ok(if violations == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Gen(gen) => {
            run_gen(gen)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check(args) => run_check(args, cli.bits),
        Cmd::Certify(args) => run_certify(args, cli.bits),
    }
}

fn run_gen(gen: GenCmd) -> Result<(), Error> {
    match gen {
        GenCmd::Sylvester { a1, n, raw } => {
            let seq = sequences::sylvester(a1, n)?;
            if raw {
                println!("{}", int_array_json(&seq));
            } else {
                let table = SequenceTable::from_integers(&seq)?;
                println!("{}", serde_json::to_string_pretty(&table).expect("serialize"));
            }
        }
        GenCmd::Tower { base_lo, base_hi, pattern, eps, d_upper, k, ds, n, raw } => {
            let lo: Dyadic = base_lo.parse()?;
            let hi: Dyadic = base_hi.parse()?;
            let pattern = parse_pattern(&pattern)?;
            let eps = parse_rational(&eps)?;
            let ds = parse_u32_list(&ds)?;
            let ds = extend_ds(&ds, n);
            let seq = sequences::oscillating_tower(&lo, &hi, &pattern, &eps, d_upper, k, &ds, n)?;
            if raw {
                println!("{}", int_array_json(&seq));
            } else {
                let table = SequenceTable::from_integers(&seq)?;
                println!("{}", serde_json::to_string_pretty(&table).expect("serialize"));
            }
        }
        GenCmd::Surd { a, r } => {
            let a_seq = parse_bigint_list(&a)?;
            let fam = sequences::quadratic_surd_family(&a_seq, r)?;
            let table = SequenceTable::from_algebraic(fam, None)?;
            println!("{}", serde_json::to_string_pretty(&table).expect("serialize"));
        }
    }
    Ok(())
}

fn run_check(args: CheckArgs, bits: u32) -> Result<ExitCode, Error> {
    let table = read_table(&args.table)?;
    let cfg = build_config(&args.config, &table)?;
    let checker = checker_by_name(&args.preset).ok_or_else(|| {
        let names: Vec<&str> = hypotheses::registry().iter().map(|c| c.name()).collect();
        Error::InvalidInput(format!("unknown preset {:?}; available: {names:?}", args.preset))
    })?;
    let mut params = CheckParams::new(cfg);
    params.bits = bits;
    params.max_degree = args.max_degree;
    if let Some(a1) = &args.claimed_a1 {
        params.claimed_a1 = Some(a1.parse()?);
    }
    if let Some(a2) = &args.claimed_a2 {
        params.claimed_a2 = Some(a2.parse()?);
    }
    let report = checker.check(&table, &params)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serialize"));
    } else {
        print!("{}", report.render_table());
    }
    if report.any_undetermined() {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_certify(args: CertifyArgs, bits: u32) -> Result<ExitCode, Error> {
    let table = read_table(&args.table)?;
    let cfg = build_config(&args.config, &table)?;
    let variant: BracketVariant = args.variant.parse()?;
    let lc = LinearCombination::new(cfg.betas.clone(), &table)?;
    let trace =
        certify::phi_trace_variant(&lc, &cfg, args.n_from..=args.n_to, bits.max(128), variant)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&trace).expect("serialize"));
    } else {
        print!("{}", trace.to_csv());
    }
    let v = certify::verdict(&trace)?;
    eprintln!("{}", v.message);
    let undetermined =
        trace.rows.iter().any(|r| r.verdict == certify::PhiVerdict::Undetermined);
    if undetermined {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// Input plumbing.

fn parse_tolerance(s: &str, bits: u32) -> Result<Dyadic, Error> {
    let r = parse_rational(s)?;
    if !r.is_positive() {
        return Err(Error::InvalidInput("rel-tol must be positive".into()));
    }
    // Round down so the used tolerance is at most the requested one.
    Ok(Dyadic::from_int(r.numer().clone()).div(
        &Dyadic::from_int(r.denom().clone()),
        bits.max(64),
        Round::Down,
    ))
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    rational_string::parse(s).map_err(Error::Parse)
}

fn parse_measure_input(args: &MeasureArgs) -> Result<AlgebraicNumber, Error> {
    let coeffs: Vec<serde_json::Value> = serde_json::from_str(&args.minpoly)
        .map_err(|e| Error::Parse(format!("bad --minpoly: {e}")))?;
    let coeffs: Result<Vec<BigInt>, Error> = coeffs
        .iter()
        .map(|v| match v {
            serde_json::Value::Number(n) => {
                n.to_string().parse().map_err(|e| Error::Parse(format!("bad coefficient: {e}")))
            }
            serde_json::Value::String(s) => {
                s.parse().map_err(|e| Error::Parse(format!("bad coefficient: {e}")))
            }
            other => Err(Error::Parse(format!("bad coefficient {other}"))),
        })
        .collect();
    let minpoly = IntPolynomial::from_coeffs(coeffs?);
    let bx = match &args.root_box {
        Some(b) => {
            serde_json::from_str::<ComplexBox>(b)
                .map_err(|e| Error::Parse(format!("bad --box: {e}")))?
        }
        None => {
            // Deterministic default: the first isolated root.
            let boxes = rootbox::isolate_all_roots(&minpoly.squarefree_part()?, &Dyadic::pow2(-24))?;
            boxes.into_iter().next().expect("degree >= 1")
        }
    };
    AlgebraicNumber::make(minpoly, bx)
}

fn print_interval(label: &str, v: &DyadicInterval, bits: u32) {
    let digits = decimal_digits(bits);
    println!(
        "{label} in [{} , {}]  (~[{}, {}], {} decimal digits shown)",
        v.lo(),
        v.hi(),
        v.lo().to_decimal(digits, Round::Down),
        v.hi().to_decimal(digits, Round::Up),
        digits
    );
}

fn print_log_magnitude(label: &str, m: &LogMagnitude, bits: u32) -> Result<(), Error> {
    let digits = decimal_digits(bits);
    let lin = m.to_interval(bits.max(64))?;
    println!(
        "{label} in [{} , {}]  (~[{}, {}], {} decimal digits shown)",
        lin.lo(),
        lin.hi(),
        lin.lo().to_decimal(digits, Round::Down),
        lin.hi().to_decimal(digits, Round::Up),
        digits
    );
    println!(
        "log2 {label} in [{} , {}]  (~[{}, {}])",
        m.log2_lo(),
        m.log2_hi(),
        m.log2_lo().to_decimal(digits, Round::Down),
        m.log2_hi().to_decimal(digits, Round::Up),
    );
    Ok(())
}

fn decimal_digits(bits: u32) -> u32 {
    // bits * log10(2), clamped to something readable.
    ((bits as f64 * 0.30103) as u32).clamp(8, 40)
}

fn int_array_json(seq: &[BigInt]) -> String {
    let parts: Vec<String> = seq.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn tuples(max_value: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 1..=max_value {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn parse_pattern(s: &str) -> Result<Vec<TowerStep>, Error> {
    s.split(',')
        .map(|tok| match tok.trim() {
            "lo" => Ok(TowerStep::Lo),
            "hi" => Ok(TowerStep::Hi),
            other => Err(Error::Parse(format!("pattern entries are lo/hi, got {other:?}"))),
        })
        .collect()
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>, Error> {
    s.split(',')
        .map(|tok| tok.trim().parse().map_err(|e| Error::Parse(format!("bad list entry: {e}"))))
        .collect()
}

fn parse_bigint_list(s: &str) -> Result<Vec<BigInt>, Error> {
    s.split(',')
        .map(|tok| tok.trim().parse().map_err(|e| Error::Parse(format!("bad integer: {e}"))))
        .collect()
}

fn extend_ds(ds: &[u32], n: usize) -> Vec<u32> {
    let mut out = ds.to_vec();
    while out.len() < n + 1 {
        out.push(*ds.last().unwrap_or(&1));
    }
    out
}

fn read_table(path: &str) -> Result<SequenceTable, Error> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput(format!("reading stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("reading {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad sequence table: {e}")))
}

/// Assemble the hypothesis config from a file and/or flags, with K = 1
/// defaults sized to the table.
fn build_config(args: &ConfigArgs, table: &SequenceTable) -> Result<HypothesisConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("reading {path}: {e}")))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad config: {e}")))?
        }
        None => {
            let ds: Vec<u32> =
                (1..=table.n_max()).map(|n| table.alpha(n, 1).degree() as u32).collect();
            let mut c = HypothesisConfig::k1_default(1, ds);
            c.k = table.k();
            c.betas = vec![BigInt::from(1); table.k()];
            c
        }
    };
    if let Some(d) = args.d_upper {
        cfg.d = d;
    }
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(a) = &args.a {
        cfg.a = parse_rational(a)?;
    }
    if let Some(c) = &args.c {
        cfg.c = parse_rational(c)?;
    }
    if let Some(eps) = &args.eps {
        cfg.eps = parse_rational(eps)?;
    }
    if let Some(ds) = &args.ds {
        let list = parse_u32_list(ds)?;
        cfg.ds = extend_ds(&list, table.n_max());
    }
    if let Some(betas) = &args.betas {
        cfg.betas = parse_bigint_list(betas)?;
    }
    if args.zeta_re.is_some() || args.zeta_im.is_some() {
        let re: Dyadic = args.zeta_re.as_deref().unwrap_or("1").parse()?;
        let im: Dyadic = args.zeta_im.as_deref().unwrap_or("0").parse()?;
        cfg.zeta = ComplexBox::point(re, im);
    }
    Ok(cfg)
}
