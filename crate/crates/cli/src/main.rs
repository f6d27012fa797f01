//! `drinfeld-census`: batch front end for the census library.
//!
//! Every subcommand is a pure batch operation: it reads its arguments,
//! computes, writes one report to `--out` (or standard output), and exits.
//! Densities are printed as exact fractions first and decimals second.

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::{One, ToPrimitive};

use census_core::asymptotics::{prediction_to_json, AsymptoticPrediction};
use census_core::census::{adjudicate_exponent, convergence_table, run_census};
use census_core::drinfeld::enumerate_drinfeld;
use census_core::gon::{box_error_scan, BoxSpec};
use census_core::polyfq::{count_irreducibles, enumerate_monic_irreducibles};
use census_core::text::{
    decimal_string, format_condition, fraction_string, parse_condition, parse_field_spec,
    parse_poly,
};
use census_core::wps::{enumerate_points, DEFAULT_MAX_WORK_LOG2, HARD_MAX_WORK_LOG2};
use census_core::{
    CensusQuery, Error, Field, LocalCondition, Population, Prime, Result, WeightVector,
};

const DECIMALS: usize = 12;

#[derive(Parser)]
#[command(
    name = "drinfeld-census",
    about = "Exact censuses of Drinfeld modules and weighted projective points over F_q(T)",
    version
)]
struct Cli {
    /// Base field, e.g. `2`, `9`, or `gf(8)`.
    #[arg(long, global = true, default_value = "2")]
    gf: String,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,

    /// Size of the worker pool used for enumeration.
    #[arg(long, global = true, default_value_t = 0, value_parser = parse_workers)]
    workers: usize,

    /// log2 bound on the enumeration work (hard cap 36); the environment
    /// variable DRINFELD_CENSUS_MAX_WORK supplies the same override.
    #[arg(long, global = true)]
    max_work: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

fn parse_workers(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|_| "worker count must be an integer".to_string())?;
    Ok(n)
}

#[derive(Args)]
struct PopulationArgs {
    /// Count rank-r Drinfeld modules (weights q-1, ..., q^r-1).
    #[arg(long, conflicts_with = "weights")]
    rank: Option<u32>,

    /// Count points of P(w) for an explicit comma-separated weight vector.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
}

#[derive(Args)]
struct ConditionArgs {
    /// Reduction condition `(good|bad|stable|unstable|stable=INT|stable>=INT)@POLY`;
    /// repeatable, primes must be distinct.
    #[arg(long = "cond")]
    conditions: Vec<String>,

    /// Require stable reduction of rank >= S at every prime outside the
    /// condition set.
    #[arg(long = "everywhere-stable")]
    everywhere_stable: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// List the monic irreducibles of one degree.
    Irreducibles {
        /// Degree of the irreducibles.
        #[arg(long)]
        deg: u32,
    },
    /// Count a population at each height in a range, against its predicted
    /// asymptotic.
    Census {
        #[command(flatten)]
        population: PopulationArgs,
        /// Height or height range, e.g. `3` or `1..4` (inclusive).
        #[arg(long)]
        b: String,
        #[command(flatten)]
        conditions: ConditionArgs,
        /// Append growth diagnostics and the adjudicated exponent.
        #[arg(long)]
        convergence: bool,
    },
    /// Print the asymptotic prediction for a census without running it.
    Predict {
        #[command(flatten)]
        population: PopulationArgs,
        #[command(flatten)]
        conditions: ConditionArgs,
    },
    /// Recompute the seven published worked-example densities and compare.
    VerifyExamples,
    /// Scan a lattice box across scaling levels and report count minus
    /// main term.
    GonCheck {
        /// Box as inline JSON `{"n":..,"bounds":[..],"congruences":[..]}`
        /// or `@path` to a JSON file.
        #[arg(long = "box")]
        box_spec: String,
        /// Comma-separated weight vector.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u64>,
        /// Scaling range, e.g. `0..3` (inclusive) or a single level.
        #[arg(long, default_value = "0..3")]
        t: String,
    },
    /// List the canonical models of one height slice.
    Enumerate {
        #[command(flatten)]
        population: PopulationArgs,
        /// Height of the slice.
        #[arg(long)]
        b: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .map_err(|e| Error::invalid(format!("worker pool: {e}")))?;
    }
    let field = parse_field_spec(&cli.gf)?;
    let max_work = max_work_bound(cli)?;

    let mut exit = ExitCode::SUCCESS;
    let output = match &cli.command {
        Command::Irreducibles { deg } => cmd_irreducibles(cli, &field, *deg)?,
        Command::Census {
            population,
            b,
            conditions,
            convergence,
        } => {
            let (b_min, b_max) = parse_range(b)?;
            let query = build_query(
                &field,
                population,
                conditions,
                b_min,
                b_max,
                max_work,
            )?;
            cmd_census(cli, &query, *convergence)?
        }
        Command::Predict {
            population,
            conditions,
        } => {
            let query = build_query(&field, population, conditions, 0, 0, max_work)?;
            cmd_predict(cli, &query)?
        }
        Command::VerifyExamples => {
            let (text, all_pass) = cmd_verify_examples(cli)?;
            if !all_pass {
                exit = ExitCode::FAILURE;
            }
            text
        }
        Command::GonCheck {
            box_spec,
            weights,
            t,
        } => cmd_gon_check(cli, &field, box_spec, weights, t, max_work)?,
        Command::Enumerate { population, b } => {
            cmd_enumerate(cli, &field, population, *b, max_work)?
        }
    };

    match &cli.out {
        Some(path) => fs::write(path, output).map_err(|e| Error::invalid(e.to_string()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.as_bytes())
                .map_err(|e| Error::invalid(e.to_string()))?;
        }
    }
    Ok(exit)
}

fn max_work_bound(cli: &Cli) -> Result<f64> {
    let from_env = std::env::var("DRINFELD_CENSUS_MAX_WORK")
        .ok()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::invalid("DRINFELD_CENSUS_MAX_WORK must be a number"))
        })
        .transpose()?;
    let bound = cli.max_work.or(from_env).unwrap_or(DEFAULT_MAX_WORK_LOG2);
    if !(0.0..=HARD_MAX_WORK_LOG2).contains(&bound) {
        return Err(Error::invalid(format!(
            "work bound 2^{bound} outside [1, 2^{HARD_MAX_WORK_LOG2}]"
        )));
    }
    Ok(bound)
}

fn parse_range(s: &str) -> Result<(u32, u32)> {
    let parse_end = |t: &str| {
        t.parse::<u32>()
            .map_err(|_| Error::parse(format!("height `{t}` is not a non-negative integer")))
    };
    match s.split_once("..") {
        Some((lo, hi)) => Ok((parse_end(lo)?, parse_end(hi.trim_start_matches('='))?)),
        None => {
            let b = parse_end(s)?;
            Ok((b, b))
        }
    }
}

fn build_query(
    field: &Field,
    population: &PopulationArgs,
    conditions: &ConditionArgs,
    b_min: u32,
    b_max: u32,
    max_work: f64,
) -> Result<CensusQuery> {
    let population = match (&population.rank, &population.weights) {
        (Some(r), None) => Population::DrinfeldRank(*r),
        (None, Some(w)) => Population::Weights(WeightVector::new(w.clone())?),
        _ => return Err(Error::invalid("exactly one of --rank or --weights is required")),
    };
    let mut query = CensusQuery::new(field.clone(), population, b_min, b_max);
    query.max_work_log2 = max_work;
    for text in &conditions.conditions {
        query.conditions.push(parse_condition(field, text)?);
    }
    query.everywhere_min_rank = conditions.everywhere_stable;
    Ok(query)
}

fn cmd_irreducibles(cli: &Cli, field: &Field, deg: u32) -> Result<String> {
    let primes = enumerate_monic_irreducibles(field, deg)?;
    let expected = count_irreducibles(field, deg)?;
    debug_assert_eq!(primes.len() as u64, expected);
    Ok(match cli.format {
        Format::Json => {
            let value = serde_json::json!({
                "field": field.to_string(),
                "degree": deg,
                "count": expected,
                "irreducibles": primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            });
            format!("{value:#}\n")
        }
        Format::Csv => {
            let mut out = String::from("degree,poly\n");
            for p in &primes {
                out.push_str(&format!("{deg},{p}\n"));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "{expected} monic irreducibles of degree {deg} over {field}\n"
            );
            for p in &primes {
                out.push_str(&format!("  {p}\n"));
            }
            out
        }
    })
}

fn describe_query(query: &CensusQuery) -> String {
    let population = match &query.population {
        Population::DrinfeldRank(r) => format!("rank-{r} Drinfeld modules"),
        Population::Weights(w) => format!("points of P{w}"),
    };
    let mut parts = vec![format!("{population} over {}(T)", query.field)];
    for (p, c) in &query.conditions {
        parts.push(format_condition(p, *c));
    }
    if let Some(s) = query.everywhere_min_rank {
        parts.push(format!("stable>={s} at all other primes"));
    }
    parts.join(", ")
}

fn cmd_census(cli: &Cli, query: &CensusQuery, convergence: bool) -> Result<String> {
    let report = run_census(query)?;
    Ok(match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => format!("{:#}\n", report.to_json()),
        Format::Pretty => {
            let mut out = format!("census of {}\n", describe_query(query));
            for row in &report.rows {
                out.push_str(&format!(
                    "  b={}: {} of {} in population",
                    row.b, row.exact_count, row.population_count
                ));
                if let Some(d) = &row.empirical_density {
                    out.push_str(&format!(
                        ", density {} = {}",
                        fraction_string(d),
                        decimal_string(d, DECIMALS)
                    ));
                }
                for cell in &row.predictions {
                    out.push_str(&format!(
                        "; q^{{{}b}} prediction {}, ratio {}",
                        cell.exponent,
                        fraction_string(&cell.predicted),
                        decimal_string(&cell.ratio, DECIMALS)
                    ));
                }
                out.push('\n');
            }
            if convergence {
                out.push_str(&convergence_section(query, &report)?);
            }
            out
        }
    })
}

fn convergence_section(
    query: &CensusQuery,
    report: &census_core::CensusReport,
) -> Result<String> {
    let q = query.field.q();
    let table = convergence_table(q, report);
    let candidates = query.prediction()?.exponent_candidates();
    let mut out = String::from("convergence:\n");
    for row in &table {
        if let Some(inc) = row.log_q_increment {
            out.push_str(&format!("  b={}: log_q increment {inc:.4}\n", row.b));
        }
    }
    match adjudicate_exponent(&table, &candidates, 0.25) {
        Some(winner) => out.push_str(&format!(
            "adjudicated exponent: {winner} (candidates {candidates:?}, tolerance 0.25)\n"
        )),
        None => out.push_str(&format!(
            "adjudicated exponent: none within 0.25 of candidates {candidates:?}\n"
        )),
    }
    Ok(out)
}

fn render_prediction(p: &AsymptoticPrediction) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "density: {} = {}\n",
        fraction_string(&p.density),
        decimal_string(&p.density, DECIMALS)
    ));
    match &p.leading {
        Some(leading) => out.push_str(&format!(
            "leading constant: {} = {}\n",
            fraction_string(leading),
            decimal_string(leading, DECIMALS)
        )),
        None => out.push_str("leading constant: not expansible exactly at this size\n"),
    }
    out.push_str(&format!("growth exponent: {}\n", p.exponent));
    if let Some(alt) = p.alt_exponent {
        out.push_str(&format!("alternative exponent: {alt}\n"));
    }
    out.push_str(&format!(
        "error term: O(q^{{{}b}}{})\n",
        p.error_exponent,
        if p.log_factor { " log q^b" } else { "" }
    ));
    out
}

fn cmd_predict(cli: &Cli, query: &CensusQuery) -> Result<String> {
    let prediction = query.prediction()?;
    Ok(match cli.format {
        Format::Json => format!("{:#}\n", prediction_to_json(&prediction)),
        Format::Csv | Format::Pretty => format!(
            "prediction for {}\n{}",
            describe_query(query),
            render_prediction(&prediction)
        ),
    })
}

struct Example {
    label: &'static str,
    published: BigRational,
    computed: BigRational,
}

fn worked_examples() -> Result<Vec<Example>> {
    use census_core::asymptotics::{kappa_drinfeld_everywhere, kappa_drinfeld_finite};
    use num::BigInt;

    let frac = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let prime = |field: &Field, s: &str| -> Result<Prime> { Prime::new(parse_poly(field, s)?) };
    let f2 = Field::from_order(2)?;
    let f3 = Field::from_order(3)?;
    let f5 = Field::from_order(5)?;
    let f7 = Field::from_order(7)?;

    Ok(vec![
        Example {
            label: "good at (T^2+T+2) over F_3, rank 2",
            published: frac(8, 9),
            computed: LocalCondition::Good.kappa(prime(&f3, "T^2+T+2")?.norm(), 2)?,
        },
        Example {
            label: "unstable at (T^6+T^4+4T^3+T^2+2) over F_5, rank 4",
            published: BigRational::new(BigInt::one(), BigInt::from(5u32).pow(24)),
            computed: LocalCondition::Unstable
                .kappa(prime(&f5, "T^6+T^4+4*T^3+T^2+2")?.norm(), 4)?,
        },
        Example {
            label: "stable>=3 at (T+2) over F_7, rank 5",
            published: BigRational::new(
                BigInt::from(7u32).pow(5) - BigInt::from(7u32).pow(3),
                BigInt::from(7u32).pow(5),
            ),
            computed: LocalCondition::StableRankGeq(3).kappa(prime(&f7, "T+2")?.norm(), 5)?,
        },
        Example {
            label: "bad at (T), stable at (T^2+T+2), stable=2 at (T^2+2T+2) over F_3, rank 3",
            published: frac(5824, 177147),
            computed: kappa_drinfeld_finite(
                3,
                3,
                &[
                    (prime(&f3, "T")?, LocalCondition::Bad),
                    (prime(&f3, "T^2+T+2")?, LocalCondition::Stable),
                    (prime(&f3, "T^2+2*T+2")?, LocalCondition::StableRankEq(2)),
                ],
            )?
            .density,
        },
        Example {
            label: "everywhere stable over F_8, rank 2",
            published: frac(441, 512),
            computed: kappa_drinfeld_everywhere(8, 2, 1, &[])?.density,
        },
        Example {
            label: "everywhere stable>=9 over F_5, rank 11",
            published: frac(2976, 3125),
            computed: kappa_drinfeld_everywhere(5, 11, 9, &[])?.density,
        },
        Example {
            label: "bad at (T+1), good at (T^2+T+1), (T^3+T+1), stable elsewhere over F_2, rank 2",
            published: frac(1, 6),
            computed: kappa_drinfeld_everywhere(
                2,
                2,
                1,
                &[
                    (prime(&f2, "T+1")?, LocalCondition::Bad),
                    (prime(&f2, "T^2+T+1")?, LocalCondition::Good),
                    (prime(&f2, "T^3+T+1")?, LocalCondition::Good),
                ],
            )?
            .density,
        },
    ])
}

fn cmd_verify_examples(cli: &Cli) -> Result<(String, bool)> {
    let examples = worked_examples()?;
    let all_pass = examples.iter().all(|e| e.published == e.computed);
    let text = match cli.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = examples
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "label": e.label,
                        "published": fraction_string(&e.published),
                        "computed": fraction_string(&e.computed),
                        "pass": e.published == e.computed,
                    })
                })
                .collect();
            format!("{:#}\n", serde_json::Value::Array(rows))
        }
        Format::Csv => {
            let mut out = String::from("label,published,computed,verdict\n");
            for e in &examples {
                out.push_str(&format!(
                    "\"{}\",{},{},{}\n",
                    e.label,
                    fraction_string(&e.published),
                    fraction_string(&e.computed),
                    if e.published == e.computed { "PASS" } else { "FAIL" }
                ));
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for e in &examples {
                out.push_str(&format!(
                    "{}: published {}, computed {} -> {}\n",
                    e.label,
                    fraction_string(&e.published),
                    fraction_string(&e.computed),
                    if e.published == e.computed { "PASS" } else { "FAIL" }
                ));
            }
            out
        }
    };
    Ok((text, all_pass))
}

fn cmd_gon_check(
    cli: &Cli,
    field: &Field,
    box_spec: &str,
    weights: &[u64],
    t: &str,
    max_work: f64,
) -> Result<String> {
    let json = match box_spec.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::invalid(e.to_string()))?,
        None => box_spec.to_string(),
    };
    let spec = BoxSpec::from_json(field, &json)?;
    let w = WeightVector::new(weights.to_vec())?;
    let (t_min, t_max) = parse_range(t)?;
    let scan = box_error_scan(field, &spec, &w, t_min, t_max, max_work)?;
    Ok(match cli.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = scan
                .iter()
                .map(|(t, count, main, err)| {
                    serde_json::json!({
                        "t": t,
                        "count": count.to_string(),
                        "main_term": fraction_string(main),
                        "error": fraction_string(err),
                    })
                })
                .collect();
            format!("{:#}\n", serde_json::Value::Array(rows))
        }
        Format::Csv => {
            let mut out = String::from("t,count,main_term,error\n");
            for (t, count, main, err) in &scan {
                out.push_str(&format!(
                    "{t},{count},{},{}\n",
                    fraction_string(main),
                    fraction_string(err)
                ));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("box scan over {field}, weights {w}\n");
            for (t, count, main, err) in &scan {
                out.push_str(&format!(
                    "  t={t}: count {count}, main term {}, error {} ({})\n",
                    fraction_string(main),
                    fraction_string(err),
                    err.to_f64().map_or("?".to_string(), |x| format!("{x:.4}"))
                ));
            }
            out
        }
    })
}

fn cmd_enumerate(
    cli: &Cli,
    field: &Field,
    population: &PopulationArgs,
    b: u32,
    max_work: f64,
) -> Result<String> {
    let listing: Vec<String> = match (&population.rank, &population.weights) {
        (Some(r), None) => enumerate_drinfeld(field, *r, b, max_work)?
            .iter()
            .map(|phi| phi.to_string())
            .collect(),
        (None, Some(w)) => {
            let w = WeightVector::new(w.clone())?;
            enumerate_points(field, &w, b, max_work)?
                .iter()
                .map(|pt| pt.to_string())
                .collect()
        }
        _ => return Err(Error::invalid("exactly one of --rank or --weights is required")),
    };
    Ok(match cli.format {
        Format::Json => {
            let value = serde_json::json!({
                "field": field.to_string(),
                "b": b,
                "count": listing.len(),
                "members": listing,
            });
            format!("{value:#}\n")
        }
        Format::Csv => {
            let mut out = String::from("b,member\n");
            for m in &listing {
                out.push_str(&format!("{b},\"{m}\"\n"));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!("{} members at height {b}\n", listing.len());
            for m in &listing {
                out.push_str(&format!("  {m}\n"));
            }
            out
        }
    })
}
