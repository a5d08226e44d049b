//! `covering`: analyze, verify, construct and fuzz finite systems of residue
//! classes stored as JSON documents.

mod document;

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use covering_core::analysis::analyze;
use covering_core::constructions::{classic_cover, erdos_cover_with_cap};
use covering_core::cyclotomic::exp_sum;
use covering_core::fuzz::{self, FuzzConfig};
use covering_core::verify::{
    check_corollary_1_1, check_corollary_1_2, check_theorem_1_1, check_theorem_1_2,
    check_theorem_1_3, TheoremId, Verdict, VerdictReport,
};
use covering_core::{fourier_identity_check, ResidueSystem, DEFAULT_CAP};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::document::SystemDocument;

#[derive(Debug, Parser)]
#[command(name = "covering", version, about = "Exact tools for covering systems of residue classes")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Summarize the covering function of a system.
    Analyze {
        file: PathBuf,
        /// Largest period that may be enumerated.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Report the minimal period modulo M instead of the exact one.
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },
    /// Check one statement against one system (two for 1.2).
    Verify {
        #[arg(long, value_parser = parse_theorem)]
        theorem: TheoremId,
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
    },
    /// Write a known cover as a system document.
    Construct {
        #[command(subcommand)]
        kind: Construction,
        /// Output path; the document goes to stdout when omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP, global = true)]
        cap: u64,
    },
    /// Run seeded random systems through a verifier.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Largest number of classes per system.
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Moduli to draw from: `LO..HI` (inclusive) or a comma list.
        #[arg(long, default_value = "2..12", value_parser = parse_pool)]
        pool: Pool,
        #[arg(long, default_value = "1.1", value_parser = parse_theorem)]
        theorem: TheoremId,
        /// Moduli `m` handed to the verifier, `LO..HI` inclusive.
        #[arg(long, default_value = "2..13", value_parser = parse_range)]
        mod_range: RangeInclusive<u64>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Where counterexamples are written if any verdict is FALSIFIED.
        #[arg(long, default_value = "fuzz-replay.json")]
        replay_out: PathBuf,
    },
    /// Exponential sum of a system at the frequency c/d.
    Expsum {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

#[derive(Debug, Subcommand)]
enum Construction {
    /// The distinct-moduli cover built from an odd n >= 3.
    Erdos {
        #[arg(long)]
        n: u64,
    },
    /// {0(2), 0(3), 1(4), 5(6), 7(12)}.
    Classic,
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    match s.parse()? {
        TheoremId::PowerSum => Err("power-sum is not a verify target".into()),
        t => Ok(t),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(lo..=hi)
}

/// Wrapped so clap parses the whole list from one argument.
#[derive(Debug, Clone)]
struct Pool(Vec<u64>);

fn parse_pool(s: &str) -> Result<Pool, String> {
    if s.contains("..") {
        return Ok(Pool(parse_range(s)?.collect()));
    }
    s.split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Pool)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let json = cli.json;
    match cli.command {
        Command::Analyze { file, cap, modulus } => cmd_analyze(&file, cap, modulus, json),
        Command::Verify { theorem, modulus, cap, files } => cmd_verify(theorem, modulus, cap, &files, json),
        Command::Construct { kind, output, cap } => cmd_construct(kind, output.as_deref(), cap, json),
        Command::Fuzz {
            seed,
            count,
            k,
            pool,
            theorem,
            mod_range,
            cap,
            replay_out,
        } => {
            let config = FuzzConfig {
                seed,
                count,
                max_classes: k,
                pool: pool.0,
                theorem,
                moduli: mod_range,
                cap,
            };
            cmd_fuzz(&config, &replay_out, json)
        }
        Command::Expsum { file, c, d, cap } => cmd_expsum(&file, c, d, cap, json),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn braces<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_analyze(file: &Path, cap: u64, modulus: Option<u64>, json: bool) -> Result<ExitCode> {
    let (_, system) = SystemDocument::load(file)?;
    let a = analyze(&system, modulus.unwrap_or(0), cap)?;
    if json {
        print_json(&a)?;
        return Ok(ExitCode::SUCCESS);
    }
    println!("system            {system}");
    println!("classes k         {}", a.classes);
    println!("period N          {}", a.lcm);
    println!("mean value        {}", a.mean);
    println!("range             {}", braces(&a.range));
    println!("spread g          {}", a.spread);
    match modulus {
        Some(m) => println!("minimal period    {} (mod {m})", a.minimal_period),
        None => println!("minimal period    {}", a.minimal_period),
    }
    println!(
        "maximal moduli    {}{}",
        braces(&a.maximal_moduli),
        if a.maximal_moduli_distinct { " (distinct)" } else { "" }
    );
    println!("constancy window  {}", a.constancy_window);
    println!("cover             {}", if a.is_cover { "yes" } else { "no" });
    Ok(ExitCode::SUCCESS)
}

fn verdict_code(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Consistent => ExitCode::SUCCESS,
        Verdict::HypothesisNotSatisfied => ExitCode::from(2),
        Verdict::Falsified => ExitCode::from(3),
    }
}

fn cmd_verify(theorem: TheoremId, modulus: Option<u64>, cap: u64, files: &[PathBuf], json: bool) -> Result<ExitCode> {
    let expected_files = if theorem == TheoremId::Theorem12 { 2 } else { 1 };
    if files.len() != expected_files {
        bail!("theorem {theorem} takes {expected_files} input file(s), got {}", files.len());
    }
    let systems = files
        .iter()
        .map(|f| SystemDocument::load(f).map(|(_, s)| s))
        .collect::<Result<Vec<ResidueSystem>>>()?;
    let report: VerdictReport = match theorem {
        TheoremId::Theorem11 => {
            let m = modulus.context("theorem 1.1 needs --mod M with M >= 1")?;
            check_theorem_1_1(&systems[0], m, cap)?
        }
        TheoremId::Corollary11 => check_corollary_1_1(&systems[0], cap)?,
        TheoremId::Corollary12 => check_corollary_1_2(&systems[0], cap)?,
        TheoremId::Theorem12 => check_theorem_1_2(&systems[0], &systems[1], modulus.unwrap_or(0), cap)?,
        TheoremId::Theorem13 => check_theorem_1_3(&systems[0], modulus.unwrap_or(0), cap)?,
        TheoremId::PowerSum => unreachable!("rejected by the argument parser"),
    };
    if json {
        print_json(&report)?;
    } else {
        println!("{report}");
    }
    Ok(verdict_code(report.verdict))
}

fn cmd_construct(kind: Construction, output: Option<&Path>, cap: u64, json: bool) -> Result<ExitCode> {
    let (system, name) = match kind {
        Construction::Erdos { n } => (erdos_cover_with_cap(n, cap)?, format!("erdos n={n}")),
        Construction::Classic => (classic_cover(), "classic".to_string()),
    };
    let doc = SystemDocument::from_system(&system, Some(json!({ "name": name })));
    let summary = format!("{name}: {} classes, N = {}, {system}", system.len(), system.lcm());
    match output {
        Some(path) => {
            doc.write(path)?;
            if json {
                print_json(&json!({
                    "name": name,
                    "classes": system.len(),
                    "lcm": system.lcm().to_string(),
                    "path": path,
                }))?;
            } else {
                println!("{summary}");
                println!("wrote {}", path.display());
            }
        }
        None => {
            println!("{}", doc.to_json());
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fuzz(config: &FuzzConfig, replay_out: &Path, json: bool) -> Result<ExitCode> {
    let summary = fuzz::run(config)?;
    if json {
        print_json(&json!({ "config": config, "summary": summary }))?;
    } else {
        println!(
            "theorem {}, seed {}, {} systems ({} skipped over cap), {} checks",
            config.theorem, config.seed, summary.systems, summary.skipped, summary.checks
        );
        println!("consistent         {}", summary.consistent);
        println!("vacuous            {}", summary.vacuous);
        println!("FALSIFIED          {}", summary.falsified);
        println!("evidence failures  {}", summary.evidence_failures);
    }
    if summary.falsified == 0 {
        return Ok(ExitCode::SUCCESS);
    }
    let replay = json!({ "config": config, "counterexamples": summary.counterexamples });
    std::fs::write(replay_out, serde_json::to_string_pretty(&replay)? + "\n")
        .with_context(|| format!("writing {}", replay_out.display()))?;
    eprintln!("counterexamples written to {}", replay_out.display());
    Ok(ExitCode::from(3))
}

fn cmd_expsum(file: &Path, c: i64, d: i64, cap: u64, json: bool) -> Result<ExitCode> {
    let (_, system) = SystemDocument::load(file)?;
    let x = exp_sum(&system, c.into(), d.into())?;
    let identity = fourier_identity_check(&system, c.into(), d.into(), cap)?;
    let n = system.lcm().to_u64().context("period does not fit in 64 bits")?;
    // x is divisible by m exactly when m divides every coefficient
    let content = x.coeffs().iter().fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c));
    let divisible: Vec<u64> = if content.is_zero() {
        (2..=n).collect()
    } else {
        (2..=n).filter(|&m| (&content % m).is_zero()).collect()
    };
    debug_assert!(divisible.iter().all(|&m| covering_core::divisible_by_integer(&x, m)));
    if json {
        print_json(&json!({
            "order": x.order(),
            "coefficients": x.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "element": x.to_string(),
            "fourier_identity": identity,
            "divisible_moduli": divisible,
        }))?;
        return Ok(ExitCode::SUCCESS);
    }
    println!("exp sum at {c}/{d} in Z[zeta_{}]: {x}", x.order());
    println!("coefficients      [{}]", x.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    println!("fourier identity  {identity}");
    if content.is_zero() {
        println!("divisible by      every m in 2..={n} (element is zero)");
    } else if divisible.is_empty() {
        println!("divisible by      no m in 2..={n}");
    } else {
        println!("divisible by      {} (m in 2..={n})", braces(&divisible));
    }
    Ok(ExitCode::SUCCESS)
}
