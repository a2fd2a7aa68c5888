//! Command-line front end: batch computation of the regularized series,
//! algebraic operations on series files, dimension tables, relation mining,
//! and the reproducible check suites.
//!
//! Exit codes: 0 on success, 1 when a check fails (a residual above its
//! tolerance or a rank above its bound), 2 on usage or input errors.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cyclozeta::alphabet::{parse_word, DihedralElement, Level};
use cyclozeta::checks::{dch_suite, ihara_suite, CheckOutcome};
use cyclozeta::dims::{bound_table, lie_v_dims, BoundSource};
use cyclozeta::error::Error;
use cyclozeta::ihara::{
    circ, dihedral_series, exp_ihara, ihara_bracket_series, special_derivation, twist_auto,
    GroupElement,
};
use cyclozeta::lie::{lyndon_expand, lyndon_words, to_lyndon_coords, witt_dim, LieElement};
use cyclozeta::polylog::{dch_detailed, Embedding, PrecisionCfg};
use cyclozeta::relations::{cross_weight_diagnostic, weight_scan};
use cyclozeta::textio::{read_lyndon_coords, read_series, write_lyndon_coords, write_series};

const SCHEMA: u32 = 1;
/// largest (N+1)^W accepted without an explicit --weight
const DEFAULT_BUDGET: u64 = 20_000;
/// absolute cap on the number of words per series
const HARD_BUDGET: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "cyclozeta", version, about = "cyclotomic multizeta series toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the regularized straight-path series and write it as a series file
    Dch(DchArgs),
    /// Apply an algebraic operation to one or two series files
    Ihara(IharaArgs),
    /// Dimension-bound tables
    Dims(DimsArgs),
    /// Weight-by-weight relation mining with rank estimation
    Relations(RelationsArgs),
    /// Reproducible property suites
    Check(CheckArgs),
    /// Lyndon words, Witt dimensions, and Lyndon-basis coordinates
    Lyndon(LyndonArgs),
}

#[derive(Args)]
struct DchArgs {
    #[arg(long = "N")]
    level: u32,
    /// truncation weight (default 5; levels where the default exceeds the
    /// word budget must pass this explicitly)
    #[arg(long)]
    weight: Option<usize>,
    /// working precision in bits (default from CYCLOZETA_BITS or 192)
    #[arg(long)]
    precision: Option<u32>,
    /// embedding exponent k, coprime to N
    #[arg(long, default_value_t = 1)]
    embedding: i64,
    /// target tolerance as a count of decimal digits
    #[arg(long)]
    tol_digits: Option<u32>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum IharaOp {
    Bracket,
    Circ,
    Exp,
    Twist,
    Derive,
    Dihedral,
}

#[derive(Args)]
struct IharaArgs {
    #[arg(long, value_enum)]
    op: IharaOp,
    /// first operand (the acting element for twist and derive)
    #[arg(long = "in")]
    input: String,
    /// second operand, for binary operations
    #[arg(long = "in2")]
    input2: Option<String>,
    /// dihedral: apply the flip u ↦ u⁻¹
    #[arg(long)]
    flip: bool,
    /// dihedral: rotation exponent
    #[arg(long, default_value_t = 0)]
    rot: i64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long = "N")]
    level: u32,
    #[arg(long)]
    max_weight: usize,
    /// tabulate only the printed closed forms
    #[arg(long)]
    printed: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long = "N")]
    level: u32,
    #[arg(long)]
    weight: usize,
    /// decimal digits carried into the relation lattice
    #[arg(long, default_value_t = 40)]
    digits: u32,
    #[arg(long, default_value_t = 1000)]
    coeff_bound: u64,
    #[arg(long, default_value_t = 1)]
    embedding: i64,
    /// also run the cross-weight diagnostic against this weight
    #[arg(long)]
    cross_with: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Dch,
    Ihara,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long = "N")]
    level: u32,
    #[arg(long, default_value_t = 5)]
    weight: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value_t = 1)]
    embedding: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LyndonArgs {
    #[arg(long = "N")]
    level: u32,
    #[arg(long, default_value_t = 1)]
    weight: usize,
    /// print the standard bracketing of one Lyndon word as a series
    #[arg(long)]
    expand: Option<String>,
    /// read a primitive series file and write its Lyndon coordinates
    #[arg(long)]
    coords_of: Option<String>,
    /// read a coordinates file and write the expanded series
    #[arg(long)]
    from_coords: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    ExitCode::from(code)
}

fn default_bits(flag: Option<u32>) -> u32 {
    flag.or_else(|| std::env::var("CYCLOZETA_BITS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(192)
}

fn emit(out: &Option<String>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Dch(a) => run_dch(a),
        Command::Ihara(a) => run_ihara(a),
        Command::Dims(a) => run_dims(a),
        Command::Relations(a) => run_relations(a),
        Command::Check(a) => run_check(a),
        Command::Lyndon(a) => run_lyndon(a),
    }
}

fn word_budget(level: Level, weight: usize, explicit: bool) -> Result<(), Error> {
    let words = (u64::from(level.num_letters())).checked_pow(weight as u32);
    let words = words.ok_or_else(|| Error::InvalidArgument("weight too large".into()))?;
    if words > HARD_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "{words} words of weight {weight} exceed the hard budget {HARD_BUDGET}; lower --weight"
        )));
    }
    if !explicit && words > DEFAULT_BUDGET {
        return Err(Error::InvalidArgument(format!(
            "the default truncation needs {words} words at level {}, above the budget \
             {DEFAULT_BUDGET}; pass --weight explicitly to proceed",
            level.n(),
        )));
    }
    Ok(())
}

fn run_dch(a: DchArgs) -> Result<u8, Error> {
    let level = Level::new(a.level)?;
    let weight = a.weight.unwrap_or(5);
    word_budget(level, weight, a.weight.is_some())?;
    let bits = default_bits(a.precision);
    let sigma = Embedding::new(level, a.embedding)?;
    let digits = a.tol_digits.unwrap_or(if weight <= 5 { 30 } else { 12 });
    let cfg = PrecisionCfg::with_tol_pow10(bits, digits, 200_000, 12)?;
    let (d, worst) = dch_detailed(level, weight, &sigma, &cfg)?;
    let text = write_series(d.body());
    if a.json {
        let report = json!({
            "schema": SCHEMA,
            "level": level.n(),
            "weight": weight,
            "precision_bits": bits,
            "embedding": sigma.k,
            "terms": d.body().len(),
            "max_error_estimate": format!("{:e}", worst.to_f64()),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
        if let Some(path) = &a.out {
            fs::write(path, text)?;
        }
    } else {
        emit(&a.out, &text)?;
    }
    Ok(0)
}

fn run_ihara(a: IharaArgs) -> Result<u8, Error> {
    let first = read_series(&fs::read_to_string(&a.input)?)?;
    let second = match &a.input2 {
        Some(path) => Some(read_series(&fs::read_to_string(path)?)?),
        None => None,
    };
    let need2 =
        matches!(a.op, IharaOp::Bracket | IharaOp::Circ | IharaOp::Twist | IharaOp::Derive);
    if need2 && second.is_none() {
        return Err(Error::InvalidArgument("this operation needs --in2".into()));
    }
    let result = match a.op {
        IharaOp::Bracket => ihara_bracket_series(&first, &second.unwrap())?,
        IharaOp::Circ => {
            let g = GroupElement::new(first)?;
            let h = GroupElement::new(second.unwrap())?;
            circ(&g, &h)?.into_series()
        }
        IharaOp::Exp => {
            let x = LieElement::new(first)?;
            exp_ihara(&x)?.into_series()
        }
        IharaOp::Twist => {
            let g = GroupElement::new(first)?;
            twist_auto(&g, &second.unwrap())?
        }
        IharaOp::Derive => special_derivation(&first, &second.unwrap())?,
        IharaOp::Dihedral => {
            let level = first.level();
            let g = DihedralElement { flip: a.flip, rot: level.reduce(a.rot) };
            dihedral_series(&g, &first)?
        }
    };
    emit(&a.out, &write_series(&result))?;
    Ok(0)
}

fn run_dims(a: DimsArgs) -> Result<u8, Error> {
    let proof = bound_table(a.level, a.max_weight, BoundSource::ProofDerived)?;
    let printed = bound_table(a.level, a.max_weight, BoundSource::Printed)?;
    let witt = lie_v_dims(a.level, a.max_weight);
    let differ = proof.coeffs != printed.coeffs;
    let main = if a.printed { &printed } else { &proof };
    if a.json {
        let rows: Vec<_> = (0..=a.max_weight)
            .map(|n| {
                json!({
                    "n": n,
                    "d_n_proof": proof.coeffs[n].to_string(),
                    "d_n_printed": printed.coeffs[n].to_string(),
                    "witt_dim": witt[n],
                })
            })
            .collect();
        let report = json!({
            "schema": SCHEMA,
            "level": a.level,
            "phi": proof.phi,
            "nu": proof.nu,
            "t0_degree": proof.t0_degree,
            "sources_differ": differ,
            "rows": rows,
            "D": main.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        println!(
            "level N={} (phi={}, nu={}, t0 degree {})",
            a.level, proof.phi, proof.nu, proof.t0_degree
        );
        println!("{:>4} {:>14} {:>14} {:>10}", "n", "D_n (proof)", "D_n (printed)", "witt");
        for (n, w) in witt.iter().enumerate() {
            println!("{:>4} {:>14} {:>14} {:>10}", n, proof.coeffs[n], printed.coeffs[n], w);
        }
        if differ {
            println!(
                "note: the printed closed form and the proof recipe disagree at this level; \
                 both columns are reported"
            );
        }
    }
    Ok(0)
}

fn run_relations(a: RelationsArgs) -> Result<u8, Error> {
    let level = Level::new(a.level)?;
    word_budget(level, a.weight, true)?;
    let sigma = Embedding::new(level, a.embedding)?;
    let cfg_lo = PrecisionCfg::for_digits(a.digits);
    let cfg_hi = PrecisionCfg::for_digits(a.digits + a.digits / 2);
    let trunc = a.weight.max(a.cross_with.unwrap_or(0));
    word_budget(level, trunc, true)?;
    let (d_lo, _) = dch_detailed(level, trunc, &sigma, &cfg_lo)?;
    let (d_hi, _) = dch_detailed(level, trunc, &sigma, &cfg_hi)?;
    let bounds = bound_table(a.level, trunc.max(2), BoundSource::ProofDerived)?;
    let report = weight_scan(&d_lo, &d_hi, a.weight, &bounds, a.digits, a.coeff_bound)?;

    let cross = match a.cross_with {
        Some(w2) => cross_weight_diagnostic(
            &d_lo,
            &d_hi,
            a.weight,
            w2,
            &bounds,
            a.digits,
            a.coeff_bound,
        )?
        .map(|r| {
            json!({
                "words": r.words.iter().map(cyclozeta::alphabet::format_word).collect::<Vec<_>>(),
                "coefficients": r.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "residual": r.residual,
            })
        }),
        None => None,
    };

    let relations_json: Vec<_> = report
        .relations
        .iter()
        .map(|r| {
            json!({
                "weight": r.weight,
                "words": r.words.iter().map(cyclozeta::alphabet::format_word).collect::<Vec<_>>(),
                "coefficients": r.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "residual": r.residual,
                "verified_at_bits": r.verified_at_bits,
            })
        })
        .collect();
    let out = json!({
        "schema": SCHEMA,
        "level": a.level,
        "weight": report.weight,
        "digits": a.digits,
        "coeff_bound": a.coeff_bound,
        "num_coefficients": report.num_coefficients,
        "estimated_rank": report.estimated_rank,
        "bound_d_n": report.bound_d_n.to_string(),
        "within_bound": report.within_bound,
        "relations": relations_json,
        "cross_weight_relation": cross,
    });
    if a.json {
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        println!(
            "weight {}: {} coefficients, estimated rank {}, bound D_n = {} ({})",
            report.weight,
            report.num_coefficients,
            report.estimated_rank,
            report.bound_d_n,
            if report.within_bound { "within bound" } else { "ABOVE BOUND" }
        );
        for r in &report.relations {
            let terms: Vec<String> = r
                .coefficients
                .iter()
                .zip(&r.words)
                .filter(|(c, _)| **c != 0)
                .map(|(c, w)| format!("{:+}·c({})", c, cyclozeta::alphabet::format_word(w)))
                .collect();
            println!("  relation: {} = 0   (residual {})", terms.join(" "), r.residual);
        }
        if let Some(c) = &cross {
            println!("cross-weight diagnostic FOUND a relation: {c}");
        } else if a.cross_with.is_some() {
            println!("cross-weight diagnostic found nothing");
        }
    }
    Ok(if report.within_bound && cross.is_none() { 0 } else { 1 })
}

fn outcomes_json(results: &[CheckOutcome]) -> Vec<serde_json::Value> {
    results
        .iter()
        .map(|r| {
            json!({
                "test": r.test,
                "residual": r.residual,
                "tolerance": r.tolerance,
                "pass": r.pass,
            })
        })
        .collect()
}

fn run_check(a: CheckArgs) -> Result<u8, Error> {
    let level = Level::new(a.level)?;
    let results = match a.suite {
        Suite::Ihara => ihara_suite(level, a.weight, a.seed, a.samples)?,
        Suite::Dch => {
            word_budget(level, a.weight, true)?;
            let bits = default_bits(a.precision);
            let sigma = Embedding::new(level, a.embedding)?;
            let digits = if a.weight <= 5 { 25 } else { 12 };
            let cfg = PrecisionCfg::with_tol_pow10(bits, digits, 200_000, 12)?;
            dch_suite(level, a.weight, &sigma, &cfg)?
        }
    };
    let all_pass = results.iter().all(|r| r.pass);
    if a.json {
        let report = json!({
            "schema": SCHEMA,
            "suite": match a.suite { Suite::Dch => "dch", Suite::Ihara => "ihara" },
            "level": a.level,
            "weight": a.weight,
            "seed": a.seed,
            "results": outcomes_json(&results),
            "pass": all_pass,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        for r in &results {
            println!(
                "[{}] {} (residual {}, tolerance {})",
                if r.pass { "PASS" } else { "FAIL" },
                r.test,
                r.residual,
                r.tolerance
            );
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn run_lyndon(a: LyndonArgs) -> Result<u8, Error> {
    let level = Level::new(a.level)?;
    if a.weight == 0 {
        return Err(Error::InvalidArgument("weight must be >= 1".into()));
    }
    if let Some(word_text) = &a.expand {
        let w = parse_word(word_text, level)?;
        let expanded = lyndon_expand(&w, level, w.weight())?;
        emit(&a.out, &write_series(&expanded))?;
        return Ok(0);
    }
    if let Some(path) = &a.coords_of {
        let series = read_series(&fs::read_to_string(path)?)?;
        let coords = to_lyndon_coords(&series)?;
        emit(&a.out, &write_lyndon_coords(&coords))?;
        return Ok(0);
    }
    if let Some(path) = &a.from_coords {
        let coords = read_lyndon_coords(&fs::read_to_string(path)?)?;
        let series = cyclozeta::lie::from_coords(&coords)?;
        emit(&a.out, &write_series(&series))?;
        return Ok(0);
    }
    let words = lyndon_words(level, a.weight);
    let expected = witt_dim(u64::from(level.num_letters()), a.weight as u64);
    if a.json {
        let report = json!({
            "schema": SCHEMA,
            "level": a.level,
            "weight": a.weight,
            "count": words.len(),
            "witt_dim": expected,
            "words": words.iter().map(cyclozeta::alphabet::format_word).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        println!(
            "{} Lyndon words of weight {} over {} letters (witt {})",
            words.len(),
            a.weight,
            level.num_letters(),
            expected
        );
        for w in &words {
            println!("{}", cyclozeta::alphabet::format_word(w));
        }
    }
    Ok(0)
}
