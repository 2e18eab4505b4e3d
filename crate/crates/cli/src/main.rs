//! `penney` — exact analysis of the Penney-Ante coin game.
//!
//! Exit codes: 0 success, 1 domain error (one-line diagnostic on stderr),
//! 2 usage error.

mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use penney_core::flipped;
use penney_core::markov;
use penney_core::odds;
use penney_core::pattern::PatternString;
use penney_core::rational::decimal_string;
use penney_core::sequence::{self, CnTable};
use penney_core::stats::{self, PlayerOneChoice, ResponderVariant};
use penney_core::strategy::{self, OptimalMethod};
use penney_core::verify;
use penney_core::{conway, ExactProb};

use output::{json_line, Format, Table};

#[derive(Parser)]
#[command(
    name = "penney",
    version,
    about = "Exact-arithmetic analysis of the Penney-Ante coin game",
    after_help = "The c_n cache path may also be set through the PENNEY_CACHE environment variable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Decimal places in probability renderings
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u8).range(1..=50))]
    decimals: u8,

    /// Worker threads (default: machine parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for the simulation harness
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Path of the c_n cache file
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Disable the c_n cache
    #[arg(long, global = true)]
    no_cache: bool,

    /// Write output to a file instead of standard output
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Conway correlation number of two strings
    Conway {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Winning probability of A over B via Conway's formula
    Odds {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Absorbing-chain oracle: probability and state count, or a full
    /// agreement sweep against the Conway formula
    Oracle {
        #[arg(long, required_unless_present = "verify")]
        a: Option<String>,
        #[arg(long, required_unless_present = "verify")]
        b: Option<String>,
        /// Run the exhaustive Conway-agreement sweep instead
        #[arg(long)]
        verify: bool,
        /// Largest string length for the sweep
        #[arg(short, default_value_t = 6)]
        n: usize,
    },
    /// Full pairwise probability matrix for one length
    Matrix {
        #[arg(short)]
        n: usize,
    },
    /// Player II's best response to a string
    BestResponse {
        #[arg(long)]
        a: String,
        /// Use the full argmax instead of the two-candidate rule
        #[arg(long)]
        brute: bool,
    },
    /// Player I's optimal strings for one length
    Optimal {
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// The optimal-strategy counts c_n
    Cn {
        #[arg(long)]
        max: u64,
        /// Add the binary representation column
        #[arg(long)]
        binary: bool,
    },
    /// The c*_m counts (strings HT...TH with bookend autocorrelation)
    Cstar {
        #[arg(long)]
        max: u64,
    },
    /// The density constant of optimal strings, to arbitrary precision
    Alpha {
        #[arg(long, default_value_t = 64)]
        bits: u64,
        /// List the positions of the 1 digits
        #[arg(long)]
        positions: bool,
        /// Sliding-window block statistics over the expansion
        #[arg(long)]
        stats: bool,
        /// Largest block length for --stats
        #[arg(long, default_value_t = 8)]
        max_block: usize,
    },
    /// The appears-last-wins variant
    Flipped {
        #[command(subcommand)]
        command: FlippedCommand,
    },
    /// Random-vs-optimal strategy table
    Stats {
        #[arg(long, default_value_t = 5)]
        from: usize,
        #[arg(long, default_value_t = 12)]
        to: usize,
        /// Player I's string choice for the opt-vs-random column
        #[arg(long, value_enum, default_value_t = PlayerOneArg::BestVsRandom)]
        p1: PlayerOneArg,
        /// Collision convention for the random responder
        #[arg(long, value_enum, default_value_t = CollisionArg::Half)]
        collision: CollisionArg,
    },
    /// Seeded Monte Carlo cross-check of one pairwise probability
    Simulate {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Run the cross-module property suite
    Verify {
        /// Largest length for the oracle agreement sweep
        #[arg(long, default_value_t = 8)]
        oracle_n: usize,
    },
}

#[derive(Subcommand)]
enum FlippedCommand {
    /// All of Player II's best responses in the flipped game
    BestResponse {
        #[arg(long)]
        a: String,
    },
    /// Player I's optimal flipped strings by brute force
    Optimal {
        #[arg(short)]
        n: usize,
    },
    /// Check the four-candidate best-response conjecture
    Conjecture3 {
        #[arg(short)]
        n: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Csirik,
    Brute,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PlayerOneArg {
    /// Average over the minimax-optimal set
    Minimax,
    /// Best string against a random responder (reproduces the published table)
    BestVsRandom,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CollisionArg {
    /// Uniform over the 2^n - 1 other strings
    Exclude,
    /// Uniform over all strings, collision counts one half
    Half,
    /// Uniform over all strings, collision counts as a loss
    Zero,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: could not size the thread pool: {err}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(Rendered { text, failures }) => {
            let out = match &cli.output {
                Some(path) => std::fs::write(path, &text)
                    .map_err(|e| format!("could not write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(message) = out {
                eprintln!("error: {message}");
                return ExitCode::from(1);
            }
            if failures {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

struct Rendered {
    text: String,
    /// Set by `verify`/`oracle --verify` when checks failed.
    failures: bool,
}

impl Rendered {
    fn ok(text: String) -> penney_core::Result<Rendered> {
        Ok(Rendered { text, failures: false })
    }
}

fn parse_pair(a: &str, b: &str) -> penney_core::Result<(PatternString, PatternString)> {
    Ok((PatternString::parse(a)?, PatternString::parse(b)?))
}

fn prob_line(p: &ExactProb, decimals: u8) -> String {
    format!("{p} ({})", p.decimal(decimals as usize))
}

fn run(cli: &Cli) -> penney_core::Result<Rendered> {
    let decimals = cli.decimals as usize;
    match &cli.command {
        Command::Conway { a, b } => {
            let (a, b) = parse_pair(a, b)?;
            let c = conway(&a, &b)?;
            match cli.format {
                Format::Json => Rendered::ok(json_line(&c)),
                _ => Rendered::ok(format!("C({a},{b}) = {} (binary {})\n", c.value(), c.binary())),
            }
        }
        Command::Odds { a, b } => {
            let (a, b) = parse_pair(a, b)?;
            let p = odds::win_prob(&a, &b)?;
            match cli.format {
                Format::Json => {
                    let (fore, against) = p.odds();
                    Rendered::ok(json_line(&serde_json::json!({
                        "a": a.to_string(),
                        "b": b.to_string(),
                        "prob_a_first": p.to_string(),
                        "decimal": p.decimal(decimals),
                        "odds": format!("{fore}:{against}"),
                    })))
                }
                _ => Rendered::ok(format!("{}\n", prob_line(&p, cli.decimals))),
            }
        }
        Command::Oracle { a, b, verify: do_verify, n } => {
            if *do_verify {
                return oracle_sweep(*n);
            }
            let (Some(a), Some(b)) = (a, b) else {
                // required_unless_present already enforces this; belt and braces
                Cli::command()
                    .error(ErrorKind::MissingRequiredArgument, "oracle needs --a and --b")
                    .exit();
            };
            let (a, b) = parse_pair(a, b)?;
            let chain = markov::build_chain(&a, &b)?;
            let p = markov::first_occurrence_prob(&chain)?;
            match cli.format {
                Format::Json => Rendered::ok(json_line(&serde_json::json!({
                    "a": a.to_string(),
                    "b": b.to_string(),
                    "prob_a_first": p.to_string(),
                    "decimal": p.decimal(decimals),
                    "states": chain.state_count(),
                }))),
                _ => Rendered::ok(format!(
                    "P({a} before {b}) = {} [chain states: {}]\n",
                    prob_line(&p, cli.decimals),
                    chain.state_count()
                )),
            }
        }
        Command::Matrix { n } => {
            let matrix = odds::prob_matrix(*n)?;
            let strings: Vec<PatternString> = matrix.strings().collect();
            let mut header = vec!["B \\ A".to_string()];
            header.extend(strings.iter().map(|s| s.to_string()));
            let mut table = Table { header, rows: Vec::new() };
            for b in &strings {
                let mut row = vec![b.to_string()];
                for a in &strings {
                    row.push(match matrix.entry(b, a) {
                        Some(p) => p.to_string(),
                        None => String::new(),
                    });
                }
                table.rows.push(row);
            }
            Rendered::ok(table.render(cli.format))
        }
        Command::BestResponse { a, brute } => {
            let a = PatternString::parse(a)?;
            let response =
                if *brute { strategy::best_response_bruteforce(&a)? } else { strategy::best_response(&a) };
            match cli.format {
                Format::Json => Rendered::ok(json_line(&response)),
                _ => {
                    let mut text = format!(
                        "best response to {a}: {} with probability {}\n",
                        response.responder,
                        prob_line(&response.prob, cli.decimals)
                    );
                    if let Some((loser, prob)) = &response.runner_up {
                        text.push_str(&format!(
                            "runner-up: {loser} with probability {}\n",
                            prob_line(prob, cli.decimals)
                        ));
                    }
                    Rendered::ok(text)
                }
            }
        }
        Command::Optimal { n, method } => {
            let sets: Vec<strategy::OptimalSet> = match method {
                MethodArg::Auto => vec![if *n < 5 {
                    strategy::optimal_strings_bruteforce(*n)?
                } else {
                    strategy::optimal_strings_csirik(*n)?
                }],
                MethodArg::Csirik => vec![strategy::optimal_strings_csirik(*n)?],
                MethodArg::Brute => vec![strategy::optimal_strings_bruteforce(*n)?],
                MethodArg::Both => vec![
                    strategy::optimal_strings_csirik(*n)?,
                    strategy::optimal_strings_bruteforce(*n)?,
                ],
            };
            match cli.format {
                Format::Json => Rendered::ok(json_line(&sets)),
                _ => {
                    let mut text = String::new();
                    for set in &sets {
                        let method = match set.method {
                            OptimalMethod::Csirik => "characterization",
                            OptimalMethod::BruteForce => "brute force",
                        };
                        text.push_str(&format!(
                            "n = {}: {} optimal strings ({method}), Player I wins {}\n",
                            set.n,
                            set.strings.len(),
                            prob_line(&set.player1_win_prob, cli.decimals)
                        ));
                        for s in &set.strings {
                            text.push_str(&format!("  {s}\n"));
                        }
                    }
                    if sets.len() == 2 {
                        text.push_str(if sets[0].strings == sets[1].strings {
                            "methods agree\n"
                        } else {
                            "METHODS DISAGREE\n"
                        });
                    }
                    Rendered::ok(text)
                }
            }
        }
        Command::Cn { max, binary } => {
            let table = CnTable::global();
            let cache_path =
                if cli.no_cache { None } else { cache::resolve_path(cli.cache.clone()) };
            let loaded = cache_path.as_ref().map_or(0, |p| cache::load(table, p));
            let mut out = Table::new(if *binary { &["n", "c_n", "binary"] } else { &["n", "c_n"] });
            for n in 3..=*max {
                let record = table.c(n)?;
                let mut row = vec![n.to_string(), record.value.to_string()];
                if *binary {
                    row.push(record.value.to_str_radix(2));
                }
                out.push(row);
            }
            if let Some(path) = cache_path {
                cache::save(table, &path, loaded);
            }
            Rendered::ok(out.render(cli.format))
        }
        Command::Cstar { max } => {
            let mut out = Table::new(&["m", "cstar_m", "enumerated"]);
            for m in 4..=*max {
                let recurrence = sequence::cstar_recurrence(m)?;
                let enumerated = if m <= 28 {
                    strategy::count_cstar(m as usize)?.to_string()
                } else {
                    String::new()
                };
                out.push(vec![m.to_string(), recurrence.to_string(), enumerated]);
            }
            Rendered::ok(out.render(cli.format))
        }
        Command::Alpha { bits, positions, stats: do_stats, max_block } => {
            if *do_stats {
                let stats = sequence::digit_stats(*bits as usize, *max_block)?;
                if cli.format == Format::Json {
                    return Rendered::ok(json_line(&stats));
                }
                let mut out = Table::new(&["block_len", "windows", "expected", "max_rel_dev"]);
                for block in &stats.blocks {
                    out.push(vec![
                        block.block_len.to_string(),
                        block.windows.to_string(),
                        format!("{:.8}", block.expected),
                        format!("{:.6}", block.max_rel_deviation),
                    ]);
                }
                return Rendered::ok(out.render(cli.format));
            }
            let approx = sequence::alpha(*bits)?;
            let digit_count = (*bits).saturating_sub(4) as usize;
            let digits = approx.binary_digits(digit_count);
            if cli.format == Format::Json {
                return Rendered::ok(json_line(&serde_json::json!({
                    "truncation": approx.truncation(),
                    "value": approx.value().to_string(),
                    "error_bound": approx.error_bound().to_string(),
                    "decimal": approx.certified_decimal(decimals),
                    "binary_digits": digits,
                    "one_positions": positions.then(|| approx.one_bit_positions(digit_count)),
                })));
            }
            let mut text = String::new();
            let shown = approx
                .certified_decimal(decimals)
                .unwrap_or_else(|| approx.value().decimal(decimals));
            text.push_str(&format!(
                "alpha = {shown} (series truncated at N = {}, tail below {})\n",
                approx.truncation(),
                approx.error_bound()
            ));
            if let Some(digits) = &digits {
                text.push_str(&format!("binary: 0.{digits}\n"));
            }
            if *positions {
                if let Some(ones) = approx.one_bit_positions(digit_count) {
                    let rendered: Vec<String> = ones.iter().map(|p| p.to_string()).collect();
                    text.push_str(&format!("1-bit positions: {}\n", rendered.join(", ")));
                }
            }
            Rendered::ok(text)
        }
        Command::Flipped { command } => run_flipped(command, cli),
        Command::Stats { from, to, p1, collision } => {
            let player_one = match p1 {
                PlayerOneArg::Minimax => PlayerOneChoice::MinimaxSet,
                PlayerOneArg::BestVsRandom => PlayerOneChoice::BestAgainstRandom,
            };
            let variant = match collision {
                CollisionArg::Exclude => ResponderVariant::ExcludeSame,
                CollisionArg::Half => ResponderVariant::IncludeSameAsHalf,
                CollisionArg::Zero => ResponderVariant::IncludeSameAsZero,
            };
            let rows = stats::strategy_table(*from, *to, player_one, variant)?;
            if cli.format == Format::Json {
                return Rendered::ok(json_line(&rows));
            }
            let mut out = Table::new(&[
                "n",
                "p_opt_opt",
                "p_rand_opt",
                "2^n(p_rand_opt-2/3)/n",
                "p_opt_rand",
                "2^n(1/2-p_opt_rand)/n",
            ]);
            for row in &rows {
                out.push(vec![
                    row.n.to_string(),
                    row.p_opt_opt.decimal(decimals),
                    row.p_rand_opt.decimal(decimals),
                    decimal_string(&row.diag_rand_opt, decimals),
                    row.p_opt_rand.as_ref().map(|p| p.decimal(decimals)).unwrap_or_default(),
                    row.diag_opt_rand
                        .as_ref()
                        .map(|d| decimal_string(d, decimals))
                        .unwrap_or_default(),
                ]);
            }
            Rendered::ok(out.render(cli.format))
        }
        Command::Simulate { a, b, trials } => {
            let (a, b) = parse_pair(a, b)?;
            let result = stats::simulate(&a, &b, *trials, cli.seed)?;
            match cli.format {
                Format::Json => Rendered::ok(json_line(&result)),
                _ => Rendered::ok(format!(
                    "{} vs {}: {} wins in {} trials (frequency {:.8}); exact {} ; z = {:+.4}\n",
                    a,
                    b,
                    result.wins_a,
                    result.trials,
                    result.frequency,
                    prob_line(&result.exact, cli.decimals),
                    result.z_score
                )),
            }
        }
        Command::Verify { oracle_n } => {
            let results = verify::run_all(*oracle_n)?;
            let mut text = String::new();
            let mut failures = 0usize;
            for r in &results {
                let status = if r.pass { "ok  " } else { "FAIL" };
                if !r.pass {
                    failures += 1;
                }
                text.push_str(&format!("{status}  {} — {}\n", r.name, r.detail));
            }
            text.push_str(&format!("\n{} checks, {failures} failures\n", results.len()));
            Ok(Rendered { text, failures: failures > 0 })
        }
    }
}

fn oracle_sweep(max_n: usize) -> penney_core::Result<Rendered> {
    use rayon::prelude::*;
    let mut text = String::new();
    let mut failures = false;
    for n in 3..=max_n {
        let mismatches: usize = PatternString::enumerate(n)?
            .collect::<Vec<_>>()
            .par_iter()
            .map(|a| {
                PatternString::enumerate(n)
                    .unwrap()
                    .filter(|b| {
                        *b != *a && {
                            let chain = markov::build_chain(a, b).unwrap();
                            markov::first_occurrence_prob(&chain).unwrap()
                                != odds::win_prob(a, b).unwrap()
                        }
                    })
                    .count()
            })
            .sum();
        let pairs = (1usize << n) * ((1 << n) - 1);
        if mismatches == 0 {
            text.push_str(&format!("n = {n}: ok ({pairs} ordered pairs agree exactly)\n"));
        } else {
            text.push_str(&format!("n = {n}: FAIL ({mismatches} of {pairs} pairs disagree)\n"));
            failures = true;
        }
    }
    Ok(Rendered { text, failures })
}

fn run_flipped(command: &FlippedCommand, cli: &Cli) -> penney_core::Result<Rendered> {
    match command {
        FlippedCommand::BestResponse { a } => {
            let a = PatternString::parse(a)?;
            let response = flipped::flipped_best_response(&a)?;
            match cli.format {
                Format::Json => Rendered::ok(json_line(&response)),
                _ => {
                    let names: Vec<String> =
                        response.maximizers.iter().map(|s| s.to_string()).collect();
                    Rendered::ok(format!(
                        "flipped best responses to {a}: {} with probability {}\n",
                        names.join(", "),
                        prob_line(&response.prob, cli.decimals)
                    ))
                }
            }
        }
        FlippedCommand::Optimal { n } => {
            let set = flipped::flipped_optimal_strings(*n)?;
            match cli.format {
                Format::Json => Rendered::ok(json_line(&set)),
                _ => {
                    let names: Vec<String> = set.strings.iter().map(|s| s.to_string()).collect();
                    Rendered::ok(format!(
                        "n = {}: optimal flipped strings {} with Player I probability {}\n",
                        set.n,
                        names.join(", "),
                        prob_line(&set.player1_win_prob, cli.decimals)
                    ))
                }
            }
        }
        FlippedCommand::Conjecture3 { n } => {
            let report = flipped::check_conjecture3(*n)?;
            match cli.format {
                Format::Json => Rendered::ok(json_line(&report)),
                _ => {
                    let mut text = format!(
                        "n = {}: conjecture {} over {} queries\n",
                        report.n,
                        if report.holds { "holds" } else { "FAILS" },
                        report.queries
                    );
                    for ce in &report.counterexamples {
                        let outside: Vec<String> =
                            ce.outside.iter().map(|s| s.to_string()).collect();
                        text.push_str(&format!(
                            "  counterexample {}: maximizers outside the candidates: {}\n",
                            ce.queried,
                            outside.join(", ")
                        ));
                    }
                    Rendered::ok(text)
                }
            }
        }
    }
}
