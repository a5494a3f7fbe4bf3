//! `ncp-verify`: command-line front end to the non-crossing chain verifier.
//!
//! Exit codes: 0 verified (and fixtures aligned), 1 a surviving chain or a
//! failed validation, 2 fixture misalignment only, 3 usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncp_core::apartments::{enumerate_nc_spanning_trees, NCSpanningTree};
use ncp_core::enumeration::{enumerate_maximal_chains, enumerate_ncp, for_each_chain};
use ncp_core::fixtures::Fixtures;
use ncp_core::pipeline::{
    check_chain, compare_fixture, run_theorem5, validate_lemma3, validate_lemma3_all, CheckOptions,
    PipelineOptions,
};
use ncp_core::{svg, Chain, NcpError, Partition, Universe};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_MISALIGNED: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ncp-verify",
    version,
    about = "Exhaustive checks on chains of non-crossing partitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Partitions,
    Chains,
    Maxchains,
    Trees,
}

#[derive(Subcommand)]
enum Command {
    /// List partitions, chains, maximal chains or non-crossing spanning trees.
    Enumerate {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Print only the total.
        #[arg(long)]
        count: bool,
    },
    /// Report conditions I-IV, patterns and certificates for one chain.
    Check {
        #[arg(long)]
        chain: String,
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Also report the dual chain.
        #[arg(long)]
        dual: bool,
        /// Report the dominant vertex and condition IV'.
        #[arg(long)]
        dominant: bool,
        /// Also list pattern hits under proper inclusion.
        #[arg(long)]
        strict_patterns: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run the full enumeration and decide condition IV for every class.
    Theorem5 {
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Skip propagation certificates (the verdict does not change).
        #[arg(long)]
        no_certificates: bool,
    },
    /// Check the companion exclusions against every compatible maximal chain.
    ValidateLemma3 {
        #[arg(long, default_value_t = 7)]
        n: usize,
    },
    /// Write an SVG chord diagram of a partition, chain or tree ("1-2,2-3,...").
    Render {
        #[arg(long)]
        input: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        n: usize,
    },
    /// Show the embedded case table, or compare it with a fresh run.
    Fixtures {
        #[arg(long)]
        compare: bool,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<NcpError> for Failure {
    fn from(e: NcpError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Enumerate { what, n, count } => enumerate(what, Universe::new(n)?, count),
        Command::Check {
            chain,
            n,
            dual,
            dominant,
            strict_patterns,
            json,
        } => {
            let options = CheckOptions {
                dual,
                dominant,
                strict_patterns,
            };
            let report = check_chain(Universe::new(n)?, &chain, &options)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", report.render_text());
            }
            Ok(EXIT_OK)
        }
        Command::Theorem5 {
            n,
            json,
            csv,
            no_certificates,
        } => {
            let options = PipelineOptions {
                certificates: !no_certificates,
                ..PipelineOptions::default()
            };
            let report = run_theorem5(Universe::new(n)?, options)?;
            print!("{}", report.render_text());
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                write_file(&path, &text)?;
            }
            if let Some(path) = csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in report.rows() {
                    w.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
                fs::write(&path, bytes)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(if !report.verified() {
                EXIT_FAILED
            } else if report.alignment.is_some() && !report.aligned() {
                EXIT_MISALIGNED
            } else {
                EXIT_OK
            })
        }
        Command::ValidateLemma3 { n } => {
            let u = Universe::new(n)?;
            let report = run_theorem5(
                u,
                PipelineOptions {
                    certificates: false,
                    ..PipelineOptions::default()
                },
            )?;
            let mut candidates = Vec::new();
            for class in &report.classes {
                candidates.extend(class.representative.orbit());
                candidates.extend(class.dual_representative.orbit());
            }
            candidates.sort();
            candidates.dedup();
            let on_candidates = validate_lemma3(u, &candidates)?;
            let on_all = validate_lemma3_all(u)?;
            let mut bad = false;
            for (scope, r) in [
                ("candidate chains", &on_candidates),
                ("all chains", &on_all),
            ] {
                println!(
                    "{scope}: {} chains, {} hits, {} with a compatible maximal chain, {} violations",
                    r.chains,
                    r.hits,
                    r.live_hits,
                    r.violations.len()
                );
                for v in &r.violations {
                    println!("  {} {}: uses {:?}", v.chain, v.hit, v.used);
                }
                bad |= !r.violations.is_empty();
            }
            Ok(if bad { EXIT_FAILED } else { EXIT_OK })
        }
        Command::Render { input, out, n } => {
            let u = Universe::new(n)?;
            let doc = if input.contains('-') {
                svg::render_tree(&NCSpanningTree::parse(u, &input)?)
            } else if input.contains('<') {
                svg::render_chain(&Chain::parse(u, &input)?)
            } else {
                svg::render_partition(&Partition::parse_noncrossing(u, &input)?)
            };
            write_file(&out, &doc)?;
            Ok(EXIT_OK)
        }
        Command::Fixtures { compare } => {
            let fixtures = Fixtures::embedded()?;
            if !compare {
                for item in &fixtures.items {
                    let chains: Vec<String> = item.chains.iter().map(|c| c.to_string()).collect();
                    println!(
                        "{:>5} {:<10} {}",
                        item.label,
                        item.rank_set.to_string(),
                        chains.join("  ")
                    );
                }
                for case in &fixtures.cases {
                    let chains: Vec<String> = case.chains.iter().map(|c| c.to_string()).collect();
                    let hits: Vec<String> =
                        case.claimed_hits.iter().map(|h| h.to_string()).collect();
                    println!(
                        "case {:>2}{} {}  [{}]",
                        case.case_id,
                        if case.expects_forced_argument {
                            "*"
                        } else {
                            " "
                        },
                        chains.join(" "),
                        hits.join(" ")
                    );
                }
                return Ok(EXIT_OK);
            }
            let mut candidates = Vec::new();
            let u = fixtures.universe;
            let report = run_theorem5(
                u,
                PipelineOptions {
                    certificates: false,
                    ..PipelineOptions::default()
                },
            )?;
            for class in &report.classes {
                candidates.push(class.representative.clone());
            }
            let alignment = compare_fixture(&candidates, &fixtures)?;
            print!("{}", alignment.render_text());
            let unmatched = report.unmatched();
            for c in &unmatched {
                println!("!!! unmatched class: {}", c.representative);
            }
            Ok(if alignment.aligned() && unmatched.is_empty() {
                EXIT_OK
            } else {
                EXIT_MISALIGNED
            })
        }
    }
}

fn enumerate(what: What, u: Universe, count: bool) -> Result<u8, Failure> {
    let mut total = 0usize;
    let mut emit = |line: String| {
        total += 1;
        if !count {
            println!("{line}");
        }
    };
    match what {
        What::Partitions => enumerate_ncp(u).for_each(|p| emit(p.to_string())),
        What::Chains => {
            if u.n() > 8 {
                return Err(Failure::Usage("chain listing supports n <= 8".into()));
            }
            for_each_chain(u, None, |c| emit(c.to_string()))
        }
        What::Maxchains => enumerate_maximal_chains(u).for_each(|c| emit(c.to_string())),
        What::Trees => enumerate_nc_spanning_trees(u)
            .into_iter()
            .for_each(|t| emit(t.to_string())),
    }
    if count {
        println!("{total}");
    }
    Ok(EXIT_OK)
}
