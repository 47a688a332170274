//! Command-line front end for doodle invariants.
//!
//! Exit status: 0 on success, 1 when a checked property fails or two
//! diagrams are told apart, 2 on bad input.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use doodle_core::census::{build_census, verify_theorems, Census, CensusError, CensusOptions};
use doodle_core::invariant::diagram_invariant_with;
use doodle_core::moves::{minimize, minimize_random};
use doodle_core::par::{self, Execution};
use doodle_core::surface::{is_realizable, rotation_system};
use doodle_core::svg::render_svg;
use doodle_core::tangles::{complete_resolution, min_chord_degree, resolution_sum, star_tangle};
use doodle_core::{ArrowDiagram, Field};

mod selftest;

#[derive(Parser)]
#[command(name = "doodle", version, about = "Subdiagram-sum invariants of doodles")]
struct Cli {
    /// Run on the calling thread only (DOODLE_THREADS sets the pool size otherwise).
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical code of a diagram.
    Canon { code: Option<String> },
    /// Remove monogons and bigons until none are left.
    Minimize {
        code: Option<String>,
        /// Pick moves at random instead of the first available one.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the applied moves as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether a diagram comes from a curve on the sphere.
    Realizable { code: Option<String> },
    /// Compute the truncated invariant.
    Invariant {
        code: Option<String>,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value = "Q")]
        field: Field,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the invariants of two diagrams.
    Compare {
        a: String,
        b: String,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value = "Q")]
        field: Field,
    },
    /// Enumerate doodles up to a crossing number and store their invariants.
    Census {
        #[arg(long)]
        kmax: usize,
        /// Invariants are taken at truncation kmax + n-extra.
        #[arg(long, default_value_t = 1)]
        n_extra: u32,
        #[arg(long, default_value = "Q")]
        field: Field,
        #[arg(long, default_value = "census")]
        out: PathBuf,
        /// Allow kmax above the default limit.
        #[arg(long)]
        allow_large: bool,
        /// Stop after examining this many candidate diagrams.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check the completeness statements on a stored census.
    Verify {
        #[arg(long, default_value = "census")]
        dir: PathBuf,
        #[arg(long, default_value = "Q")]
        field: Field,
    },
    /// Draw a diagram.
    Render {
        code: Option<String>,
        /// Emit SVG 1.1 (the only format).
        #[arg(long, required = true)]
        svg: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resolve the star with k branches and report the surviving sum.
    Resolve {
        #[arg(long)]
        k: usize,
        /// Also list the surviving subdiagram terms.
        #[arg(long)]
        sum: bool,
    },
    /// Run quick internal consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Other(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Other(e.into())
    }
}

fn input<T, E: Into<anyhow::Error>>(r: std::result::Result<T, E>) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure::Input(e.into()))
}

fn read_code(code: Option<String>) -> std::result::Result<ArrowDiagram, Failure> {
    let text = match code {
        Some(c) if c != "-" => c,
        _ => {
            let mut s = String::new();
            input(std::io::stdin().read_to_string(&mut s).context("reading stdin"))?;
            s
        }
    };
    input(ArrowDiagram::parse(text.trim()).with_context(|| format!("parsing `{}`", text.trim())))
}

fn write_or_print(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> std::result::Result<bool, Failure> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match cli.command {
        Command::Canon { code } => {
            println!("{}", read_code(code)?.serialize());
        }
        Command::Minimize { code, random, seed, trace } => {
            let d = read_code(code)?;
            let (m, steps) =
                if random { minimize_random(&d, &mut ChaCha8Rng::seed_from_u64(seed)) } else { minimize(&d) };
            println!("{}", m.serialize());
            if trace {
                println!("{}", serde_json::to_string(&steps)?);
            }
        }
        Command::Realizable { code } => {
            let d = read_code(code)?;
            let ok = is_realizable(&d);
            println!("{} genus={}", if ok { "realizable" } else { "not realizable" }, rotation_system(&d).genus());
            return Ok(ok);
        }
        Command::Invariant { code, degree, field, out } => {
            let d = read_code(code)?;
            let v = input(diagram_invariant_with(&d, degree, field, exec))?;
            write_or_print(out, &v.to_string())?;
        }
        Command::Compare { a, b, degree, field } => {
            let (a, b) = (read_code(Some(a))?, read_code(Some(b))?);
            let va = input(diagram_invariant_with(&a, degree, field, exec))?;
            let vb = input(diagram_invariant_with(&b, degree, field, exec))?;
            let equal = va.value() == vb.value();
            println!("{}", if equal { "equal" } else { "distinct" });
            return Ok(equal);
        }
        Command::Census { kmax, n_extra, field, out, allow_large, budget } => {
            let opts = CensusOptions { kmax, n_extra, field, allow_large, budget, exec };
            let census = match build_census(&opts) {
                Ok(c) => c,
                Err(CensusError::Budget { budget, k, partial }) => {
                    partial.write(&out)?;
                    eprintln!(
                        "budget of {budget} candidates exhausted at k = {k}; classes up to {} crossings written to {}",
                        partial.kmax,
                        out.display()
                    );
                    return Ok(false);
                }
                Err(e @ CensusError::Governor(_)) => return Err(Failure::Input(e.into())),
                Err(e) => return Err(e.into()),
            };
            census.write(&out)?;
            print!("{}", census.to_text());
        }
        Command::Verify { dir, field } => {
            let census = input(Census::read(&dir).with_context(|| format!("reading census in {}", dir.display())))?;
            let report = verify_theorems(&census, field, exec)?;
            println!("{}", report.to_json());
            return Ok(report.passed);
        }
        Command::Render { code, svg: _, out } => {
            write_or_print(out, &render_svg(&read_code(code)?))?;
        }
        Command::Resolve { k, sum } => {
            let site = input(star_tangle(k))?;
            let terms = complete_resolution(&site);
            for (i, (sign, p)) in terms.iter().enumerate() {
                let sides: String = p.sides().iter().map(|s| if s.sign() > 0 { '+' } else { '-' }).collect();
                println!("term={i} sign={sign:+} sides={sides}");
                println!("{}", p.tangle().expect("complete"));
            }
            let total = resolution_sum(&terms);
            if sum {
                for (t, c) in &total {
                    println!("coefficient={c:+}");
                    println!("{t}");
                }
            }
            let min = min_chord_degree(&total).map_or("inf".to_string(), |m| m.to_string());
            println!("surviving={} min_chord_degree={min}", total.len());
            return Ok(min_chord_degree(&total).is_none_or(|m| m + 1 >= k));
        }
        Command::Selftest { seed } => {
            return Ok(selftest::run(seed, exec)?);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    par::init_from_env();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
