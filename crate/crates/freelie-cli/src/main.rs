//! Command-line front end: every operation of the library behind one binary
//! with JSON file interchange.
//!
//! Exit codes: 0 success (or property holds), 1 property fails, 2 parse
//! error, 3 precondition or precision error.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};

use freelie::coeff::{parse_rational, rational_to_padic, Coefficient, RingTag};
use freelie::completions::{
    enumerate_cosets, in_open_subgroup, order_mod_subgroup, power_convergence, OpenSubgroupSpec,
};
use freelie::coproduct::{grouplike_violation, is_primitive, Coproduct};
use freelie::group::{
    magnus_embed, malcev_compose, malcev_decompose, reconstruct_from_lyndon_coeffs, GroupWord,
};
use freelie::json;
use freelie::series::{Series, SeriesContext};
use freelie::words::{
    is_lyndon, lyndon_words, parenthesize, standard_factorization, LyndonOrder, Word,
};
use freelie::Error as LibError;

#[derive(Parser)]
#[command(
    name = "freelie",
    version,
    about = "Exact arithmetic in the truncated free algebra: Lyndon words, Magnus embedding, Malcev coordinates, p-adic completions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lyndon-word enumeration, factorization, parenthesization
    Lyndon {
        #[command(subcommand)]
        cmd: LyndonCmd,
    },
    /// Series construction and arithmetic
    Series {
        #[command(subcommand)]
        cmd: SeriesCmd,
    },
    /// Property checks with exit-code verdicts
    Check {
        #[command(subcommand)]
        cmd: CheckCmd,
    },
    /// Malcev-coordinate decomposition, composition, reconstruction
    Malcev {
        #[command(subcommand)]
        cmd: MalcevCmd,
    },
    /// p-adic open subgroups, cosets, orders, convergence
    Padic {
        #[command(subcommand)]
        cmd: PadicCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Graded,
    Lex,
}

#[derive(Subcommand)]
enum LyndonCmd {
    /// List all Lyndon words up to a length
    List {
        #[arg(long)]
        n: u8,
        #[arg(long = "max-len")]
        max_len: u32,
        #[arg(long, value_enum, default_value = "graded")]
        order: OrderArg,
    },
    /// Standard factorization of a Lyndon word
    Factor {
        word: String,
        #[arg(long)]
        n: Option<u8>,
    },
    /// Full parenthesization of a Lyndon word
    Paren {
        word: String,
        #[arg(long)]
        n: Option<u8>,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Magnus embedding of a free-group word
    Embed {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: u8,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value = "int")]
        ring: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product of two or more series
    Mul {
        #[arg(long = "in", required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Group inverse of a series with constant term 1
    Inv {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exponential of a series with zero constant term
    Exp {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Logarithm of a series with constant term 1
    Ln {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Binomial power with an exponent from the coefficient ring
    Pow {
        #[arg(long = "in")]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoproductArg {
    Twisted,
    Standard,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Grouplike membership for the chosen coproduct
    Grouplike {
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_enum, default_value = "twisted")]
        coproduct: CoproductArg,
    },
    /// Primitivity under the standard coproduct
    Primitive {
        #[arg(long = "in")]
        input: String,
    },
    /// Integrality of all coefficients
    Integral {
        #[arg(long = "in")]
        input: String,
    },
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long, value_enum, default_value = "graded")]
    order: OrderArg,
    /// Ranked word list (JSON array of letter arrays) defining a custom order
    #[arg(long = "order-file")]
    order_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MalcevCmd {
    /// Coordinates of a grouplike series
    Decompose {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Ordered product of bracketing powers from a coordinate file
    Compose {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        n: u8,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        ring: String,
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// The grouplike series with prescribed coefficients at Lyndon words
    Reconstruct {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        n: u8,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        ring: String,
        #[command(flatten)]
        order: OrderArgs,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct SubgroupArgs {
    #[arg(long)]
    nu: u32,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    /// Prime power p^m given as one number (alternative to --p/--m)
    #[arg(long)]
    pm: Option<u64>,
}

#[derive(Subcommand)]
enum PadicCmd {
    /// Membership in the open subgroup U(nu, p^m)
    Member {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        subgroup: SubgroupArgs,
    },
    /// Smallest power of p taking the element into U(nu, p^m)
    Order {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        subgroup: SubgroupArgs,
    },
    /// Coset label of one element, or the full quotient table
    Coset {
        #[arg(long = "in")]
        input: Option<String>,
        /// Enumerate all cosets reachable from the generators
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        n: Option<u8>,
        /// Ring precision for the enumeration context
        #[arg(long)]
        prec: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Coefficientwise convergence of integer powers toward a p-adic power
    Converge {
        #[arg(long)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u8,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value = "8")]
        steps: u32,
        #[arg(long)]
        prec: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        out: OutArg,
    },
}

enum CliError {
    Parse(String),
    Precondition(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) => m,
        }
    }
}

fn lib_err(e: LibError) -> CliError {
    match e {
        LibError::Parse(_) => CliError::Parse(e.to_string()),
        other => CliError::Precondition(other.to_string()),
    }
}

fn parse_err(e: LibError) -> CliError {
    CliError::Parse(e.to_string())
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Lyndon { cmd } => run_lyndon(cmd),
        Command::Series { cmd } => run_series(cmd),
        Command::Check { cmd } => run_check(cmd),
        Command::Malcev { cmd } => run_malcev(cmd),
        Command::Padic { cmd } => run_padic(cmd),
    }
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))
    }
}

fn write_output(out: &OutArg, content: &str) -> CliResult<()> {
    match &out.out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display()))),
    }
}

fn parse_ring(text: &str) -> CliResult<RingTag> {
    match text {
        "int" => Ok(RingTag::Integer),
        "rat" => Ok(RingTag::Rational),
        other => {
            let mut parts = other.split(':');
            match (parts.next(), parts.next(), parts.next(), parts.next()) {
                (Some("padic"), Some(p), Some(prec), None) => {
                    let p: u64 =
                        p.parse().map_err(|_| CliError::Parse(format!("bad prime {p:?}")))?;
                    let prec: u32 = prec
                        .parse()
                        .map_err(|_| CliError::Parse(format!("bad precision {prec:?}")))?;
                    RingTag::padic(p, prec).map_err(lib_err)
                }
                _ => Err(CliError::Parse(format!(
                    "bad ring {text:?}; use int, rat, or padic:<p>:<prec>"
                ))),
            }
        }
    }
}

/// A plain word: compact letters ("aabab") or whitespace-separated indices
/// ("1 1 2 1 2"). The alphabet size defaults to the largest letter used.
fn parse_plain_word(text: &str, n: Option<u8>) -> CliResult<Word> {
    let text = text.trim();
    let letters: Vec<u8> = if !text.is_empty()
        && text.chars().all(|c| c.is_ascii_lowercase() || c.is_whitespace())
    {
        text.chars().filter(|c| !c.is_whitespace()).map(|c| c as u8 - b'a' + 1).collect()
    } else {
        text.split_whitespace()
            .map(|tok| {
                tok.parse::<u8>().map_err(|_| CliError::Parse(format!("bad letter {tok:?}")))
            })
            .collect::<CliResult<Vec<u8>>>()?
    };
    if letters.is_empty() {
        return Err(CliError::Parse("empty word".into()));
    }
    let n = n.unwrap_or_else(|| letters.iter().copied().max().unwrap_or(1));
    Word::new(n, letters).map_err(parse_err)
}

fn run_lyndon(cmd: LyndonCmd) -> CliResult<u8> {
    // bad input of any kind counts as a parse error for this command family
    match cmd {
        LyndonCmd::List { n, max_len, order } => {
            let order = match order {
                OrderArg::Graded => LyndonOrder::GradedLex,
                OrderArg::Lex => LyndonOrder::PureLex,
            };
            if n == 0 || max_len == 0 {
                return Err(CliError::Parse("need n >= 1 and max-len >= 1".into()));
            }
            for word in lyndon_words(n, max_len, &order) {
                println!("{word}");
            }
            Ok(0)
        }
        LyndonCmd::Factor { word, n } => {
            let word = parse_plain_word(&word, n)?;
            let (prefix, suffix) = standard_factorization(&word).map_err(parse_err)?;
            println!("({prefix}, {suffix})");
            Ok(0)
        }
        LyndonCmd::Paren { word, n } => {
            let word = parse_plain_word(&word, n)?;
            if !is_lyndon(&word).map_err(parse_err)? {
                return Err(CliError::Parse(format!("{word} is not a Lyndon word")));
            }
            let tree = parenthesize(&word).map_err(parse_err)?;
            println!("{}", tree.display(word.alphabet_size()));
            Ok(0)
        }
    }
}

fn load_series(path: &str) -> CliResult<Series> {
    json::series_from_json(&read_input(path)?).map_err(parse_err)
}

fn run_series(cmd: SeriesCmd) -> CliResult<u8> {
    match cmd {
        SeriesCmd::Embed { word, n, degree, ring, out } => {
            let ring = parse_ring(&ring)?;
            let ctx = SeriesContext::new(n, degree, ring);
            let word = GroupWord::parse(n, &word).map_err(parse_err)?;
            let g = magnus_embed(&ctx, &word).map_err(lib_err)?;
            write_output(&out, &json::series_to_json(&g))?;
            Ok(0)
        }
        SeriesCmd::Mul { inputs, out } => {
            if inputs.len() < 2 {
                return Err(CliError::Parse("mul needs at least two --in arguments".into()));
            }
            let mut acc = load_series(&inputs[0])?;
            for path in &inputs[1..] {
                acc = acc.checked_mul(&load_series(path)?).map_err(lib_err)?;
            }
            write_output(&out, &json::series_to_json(&acc))?;
            Ok(0)
        }
        SeriesCmd::Inv { input, out } => {
            let g = load_series(&input)?.inverse().map_err(lib_err)?;
            write_output(&out, &json::series_to_json(&g))?;
            Ok(0)
        }
        SeriesCmd::Exp { input, out } => {
            let g = load_series(&input)?.exp().map_err(lib_err)?;
            write_output(&out, &json::series_to_json(&g))?;
            Ok(0)
        }
        SeriesCmd::Ln { input, out } => {
            let g = load_series(&input)?.ln().map_err(lib_err)?;
            write_output(&out, &json::series_to_json(&g))?;
            Ok(0)
        }
        SeriesCmd::Pow { input, t, out } => {
            let g = load_series(&input)?;
            let exponent = parse_coefficient(&t, &g.context().ring)?;
            let h = g.power(&exponent).map_err(lib_err)?;
            write_output(&out, &json::series_to_json(&h))?;
            Ok(0)
        }
    }
}

/// Exponents and coordinate values are written as rationals ("-3", "1/2")
/// and embedded into the ring of the series they act on.
fn parse_coefficient(text: &str, ring: &RingTag) -> CliResult<Coefficient> {
    let q = parse_rational(text).map_err(parse_err)?;
    ring.from_rational(&q).map_err(lib_err)
}

fn run_check(cmd: CheckCmd) -> CliResult<u8> {
    match cmd {
        CheckCmd::Grouplike { input, coproduct } => {
            let g = load_series(&input)?;
            let which = match coproduct {
                CoproductArg::Twisted => Coproduct::Twisted,
                CoproductArg::Standard => Coproduct::Standard,
            };
            let name = match which {
                Coproduct::Twisted => "twisted",
                Coproduct::Standard => "standard",
            };
            match grouplike_violation(&g, which).map_err(lib_err)? {
                None => {
                    println!(
                        "{}",
                        serde_json::json!({"property": "grouplike", "coproduct": name, "holds": true})
                    );
                    Ok(0)
                }
                Some((left, right)) => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "property": "grouplike",
                            "coproduct": name,
                            "holds": false,
                            "violation": {"left": left.letters(), "right": right.letters()},
                        })
                    );
                    Ok(1)
                }
            }
        }
        CheckCmd::Primitive { input } => {
            let z = load_series(&input)?;
            let holds = is_primitive(&z).map_err(lib_err)?;
            println!("{}", serde_json::json!({"property": "primitive", "holds": holds}));
            Ok(u8::from(!holds))
        }
        CheckCmd::Integral { input } => {
            let g = load_series(&input)?;
            let offender = g.terms().find(|(_, c)| !c.is_integral()).map(|(w, _)| w.clone());
            match offender {
                None => {
                    println!("{}", serde_json::json!({"property": "integral", "holds": true}));
                    Ok(0)
                }
                Some(word) => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "property": "integral",
                            "holds": false,
                            "word": word.letters(),
                        })
                    );
                    Ok(1)
                }
            }
        }
    }
}

fn resolve_order(args: &OrderArgs) -> CliResult<LyndonOrder> {
    if let Some(path) = &args.order_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let ranked: Vec<Vec<u8>> = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("order file: {e}")))?;
        let ranks: BTreeMap<Vec<u8>, usize> =
            ranked.into_iter().enumerate().map(|(i, w)| (w, i)).collect();
        let ranks = Arc::new(ranks);
        return Ok(LyndonOrder::Custom(Arc::new(move |a: &Word, b: &Word| {
            let ra = ranks.get(a.letters());
            let rb = ranks.get(b.letters());
            match (ra, rb) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => a.len().cmp(&b.len()).then_with(|| a.letters().cmp(b.letters())),
            }
        })));
    }
    Ok(match args.order {
        OrderArg::Graded => LyndonOrder::GradedLex,
        OrderArg::Lex => LyndonOrder::PureLex,
    })
}

fn run_malcev(cmd: MalcevCmd) -> CliResult<u8> {
    match cmd {
        MalcevCmd::Decompose { input, order, out } => {
            let g = load_series(&input)?;
            let order = resolve_order(&order)?;
            let coords = match malcev_decompose(&g, &order) {
                Ok(coords) => coords,
                Err(e @ LibError::NotGrouplike { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(1);
                }
                Err(e) => return Err(lib_err(e)),
            };
            write_output(&out, &json::coords_to_json(&coords))?;
            Ok(0)
        }
        MalcevCmd::Compose { input, n, degree, ring, order, out } => {
            let ring = parse_ring(&ring)?;
            let ctx = SeriesContext::new(n, degree, ring.clone());
            let custom = match &order.order_file {
                Some(_) => Some(resolve_order(&order)?),
                None => match order.order {
                    OrderArg::Graded => None, // honor the label stored in the file
                    OrderArg::Lex => Some(LyndonOrder::PureLex),
                },
            };
            let coords = json::coords_from_json(&read_input(&input)?, n, &ring, custom)
                .map_err(parse_err)?;
            let g = malcev_compose(&ctx, &coords).map_err(lib_err)?;
            write_output(&out, &json::series_to_json(&g))?;
            Ok(0)
        }
        MalcevCmd::Reconstruct { input, n, degree, ring, order, out } => {
            let ring = parse_ring(&ring)?;
            let ctx = SeriesContext::new(n, degree, ring.clone());
            let targets =
                json::lyndon_map_from_json(&read_input(&input)?, n, &ring).map_err(parse_err)?;
            let order = resolve_order(&order)?;
            let (g, coords) =
                reconstruct_from_lyndon_coeffs(&ctx, &targets, &order).map_err(lib_err)?;
            let series_value: serde_json::Value =
                serde_json::from_str(&json::series_to_json(&g)).expect("own output");
            let coords_value: serde_json::Value =
                serde_json::from_str(&json::coords_to_json(&coords)).expect("own output");
            let combined =
                serde_json::json!({"series": series_value, "coordinates": coords_value});
            let mut text = serde_json::to_string_pretty(&combined).expect("serializable");
            text.push('\n');
            write_output(&out, &text)?;
            Ok(0)
        }
    }
}

fn resolve_subgroup(args: &SubgroupArgs) -> CliResult<OpenSubgroupSpec> {
    let (p, m) = match (args.p, args.m, args.pm) {
        (Some(p), Some(m), None) => (p, m),
        (None, None, Some(pm)) => factor_prime_power(pm)?,
        (None, Some(_), None) | (Some(_), None, None) => {
            return Err(CliError::Parse("give both --p and --m".into()))
        }
        _ => return Err(CliError::Parse("give either --p/--m or --pm, not both".into())),
    };
    OpenSubgroupSpec::new(args.nu, p, m).map_err(lib_err)
}

fn factor_prime_power(pm: u64) -> CliResult<(u64, u32)> {
    if pm < 2 {
        return Err(CliError::Parse(format!("{pm} is not a prime power")));
    }
    let mut p = 2u64;
    while p * p <= pm {
        if pm.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    let p = if pm.is_multiple_of(p) { p } else { pm };
    let mut rest = pm;
    let mut m = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(CliError::Parse(format!("{pm} is not a prime power")));
    }
    Ok((p, m))
}

/// Default working precision for a p-adic computation: the exponent plus
/// enough digits to absorb the factorial divisions of binomial expansions.
fn default_precision(p: u64, m: u32, degree: u32) -> u32 {
    let mut log_factorial = 0f64;
    for k in 2..=degree.max(1) {
        log_factorial += f64::from(k).ln();
    }
    let margin = (log_factorial / (p as f64).ln()).ceil() as u32;
    m + margin + 4
}

fn run_padic(cmd: PadicCmd) -> CliResult<u8> {
    match cmd {
        PadicCmd::Member { input, subgroup } => {
            let spec = resolve_subgroup(&subgroup)?;
            let g = load_series(&input)?;
            let member = in_open_subgroup(&g, &spec).map_err(lib_err)?;
            println!(
                "{}",
                serde_json::json!({
                    "member": member,
                    "nu": spec.nu(),
                    "p": spec.prime().to_string(),
                    "m": spec.exponent(),
                })
            );
            Ok(u8::from(!member))
        }
        PadicCmd::Order { input, subgroup } => {
            let spec = resolve_subgroup(&subgroup)?;
            let g = load_series(&input)?;
            let order = order_mod_subgroup(&g, &spec).map_err(lib_err)?;
            println!(
                "{}",
                serde_json::json!({
                    "order": order.to_string(),
                    "nu": spec.nu(),
                    "p": spec.prime().to_string(),
                    "m": spec.exponent(),
                })
            );
            Ok(0)
        }
        PadicCmd::Coset { input, enumerate, n, prec, format, subgroup, out } => {
            let spec = resolve_subgroup(&subgroup)?;
            if enumerate {
                let n = n.ok_or_else(|| CliError::Parse("--enumerate needs --n".into()))?;
                let p_small: u64 = spec
                    .prime()
                    .to_string()
                    .parse()
                    .map_err(|_| CliError::Parse("prime too large for enumeration".into()))?;
                let prec =
                    prec.unwrap_or_else(|| default_precision(p_small, spec.exponent(), spec.nu()));
                let ring = RingTag::padic(p_small, prec).map_err(lib_err)?;
                let ctx = SeriesContext::new(n, spec.nu(), ring);
                let cosets = enumerate_cosets(&ctx, &spec).map_err(lib_err)?;
                let text = match format {
                    FormatArg::Json => {
                        let table: serde_json::Value =
                            serde_json::from_str(&json::coset_table_to_json(&cosets))
                                .expect("own output");
                        let combined =
                            serde_json::json!({"count": cosets.len(), "cosets": table});
                        let mut text =
                            serde_json::to_string_pretty(&combined).expect("serializable");
                        text.push('\n');
                        text
                    }
                    FormatArg::Table => coset_table_text(&cosets),
                };
                write_output(&out, &text)?;
                Ok(0)
            } else {
                let input =
                    input.ok_or_else(|| CliError::Parse("give --in or --enumerate".into()))?;
                let g = load_series(&input)?;
                let tuple = freelie::completions::coset_coordinates(&g, &spec).map_err(lib_err)?;
                let text = match format {
                    FormatArg::Json => {
                        let value: serde_json::Value =
                            serde_json::from_str(&json::coset_to_json(&tuple))
                                .expect("own output");
                        let combined = serde_json::json!({"tuple": value});
                        let mut text =
                            serde_json::to_string_pretty(&combined).expect("serializable");
                        text.push('\n');
                        text
                    }
                    FormatArg::Table => coset_table_text(std::slice::from_ref(&tuple)),
                };
                write_output(&out, &text)?;
                Ok(0)
            }
        }
        PadicCmd::Converge { word, t, p, n, degree, steps, prec, format, out } => {
            let prec = prec.unwrap_or_else(|| default_precision(p, steps, degree).max(steps + 2));
            let ring = RingTag::padic(p, prec).map_err(lib_err)?;
            let ctx = SeriesContext::new(n, degree, ring);
            let word = parse_plain_word(&word, Some(n))?;
            let q = parse_rational(&t).map_err(parse_err)?;
            let p_big = BigUint::from(p);
            let target = rational_to_padic(&q, &p_big, prec).map_err(lib_err)?;
            if !target.is_integral() {
                return Err(CliError::Precondition(format!(
                    "exponent {t} is not a p-adic integer for p = {p}"
                )));
            }
            // canonical coherent approximations: the residues of t mod p^i
            let approximations: Vec<BigInt> = (1..=steps)
                .map(|i| target.residue(i).map(BigInt::from))
                .collect::<Result<_, _>>()
                .map_err(lib_err)?;
            let report =
                power_convergence(&ctx, &word, &target, &approximations).map_err(lib_err)?;
            let text = match format {
                FormatArg::Json => json::convergence_to_json(&report),
                FormatArg::Table => convergence_table_text(&report),
            };
            write_output(&out, &text)?;
            Ok(0)
        }
    }
}

/// Column-aligned text table: one row per coset, one column per Lyndon word.
fn coset_table_text(tuples: &[BTreeMap<Word, BigUint>]) -> String {
    let Some(first) = tuples.first() else {
        return String::new();
    };
    let headers: Vec<String> = first.keys().map(|w| w.to_string()).collect();
    let rows: Vec<Vec<String>> = tuples
        .iter()
        .map(|tuple| tuple.values().map(|r| r.to_string()).collect())
        .collect();
    render_table(&headers, &rows)
}

fn convergence_table_text(report: &freelie::completions::ConvergenceReport) -> String {
    let headers = vec!["k".to_string(), "agreement".to_string()];
    let rows: Vec<Vec<String>> = report
        .steps
        .iter()
        .map(|s| vec![s.exponent.to_string(), s.agreement.to_string()])
        .collect();
    render_table(&headers, &rows)
}

fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let push_row = |cells: &[String], out: &mut String| {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    push_row(headers, &mut out);
    for row in rows {
        push_row(row, &mut out);
    }
    out
}
