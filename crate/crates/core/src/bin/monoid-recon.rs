use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use monoid_recon::corpus;
use monoid_recon::counterexample::nat_counterexample;
use monoid_recon::harness::describe::{describe_monoid, describe_scheme, describe_topologies};
use monoid_recon::harness::parse::{load, Inputs};
use monoid_recon::harness::report::Report;
use monoid_recon::harness::suites::{run, Suite, SuiteConfig, Target};
use monoid_recon::scheme::build_scheme;

#[derive(Parser)]
#[command(name = "monoid-recon", version, about = "Checks spectra, topologies and schemes of finite commutative monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over the corpus and/or definition files.
    Verify {
        #[arg(long)]
        corpus: bool,
        /// Suite to run; repeatable. Defaults to every suite.
        #[arg(long = "suite", value_parser = parse_suite)]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 4)]
        max_carrier: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 1_000_000)]
        max_s: u64,
        #[arg(long, default_value_t = 1_000)]
        max_p: u64,
        /// Print wall time per check.
        #[arg(long)]
        timings: bool,
        files: Vec<PathBuf>,
    },
    /// Print ideals, spectrum and topologies of a monoid, or the points,
    /// opens and centre of a scheme. Targets are corpus names or files.
    Describe { targets: Vec<String> },
    /// List the topologies of a monoid with their point sets.
    Topologies { targets: Vec<String> },
    /// Search witness primes for the ideal of naturals whose p-adic
    /// valuations are zero or at least p.
    Counterexample {
        #[arg(long, default_value_t = 1_000_000)]
        max_s: u64,
        #[arg(long, default_value_t = 1_000)]
        max_p: u64,
        /// Print every witness instead of a summary.
        #[arg(long)]
        table: bool,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}`; expected one of {}", names.join(", "))
    })
}

/// Usage or parse failure, reported with exit status 2.
struct InputError(String);

fn read_files(files: &[PathBuf], digest: &mut Vec<u8>) -> Result<Inputs, InputError> {
    let mut all = Inputs::default();
    let mut known = corpus::monoids();
    for path in files {
        let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        digest.extend_from_slice(text.as_bytes());
        let inputs = load(&text, &known).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        known.extend(inputs.monoids.iter().cloned());
        all.monoids.extend(inputs.monoids);
        all.msets.extend(inputs.msets);
        all.schemes.extend(inputs.schemes);
        all.invalid.extend(inputs.invalid);
    }
    Ok(all)
}

fn verify(
    use_corpus: bool,
    suites: Vec<Suite>,
    cfg: SuiteConfig,
    format: Format,
    timings: bool,
    files: &[PathBuf],
) -> Result<bool, InputError> {
    if !use_corpus && files.is_empty() {
        return Err(InputError("nothing to verify: pass --corpus or definition files".into()));
    }
    let mut digest = Vec::new();
    let mut target = if use_corpus {
        digest.extend_from_slice(b"corpus\n");
        Target::corpus()
    } else {
        Target::default()
    };
    let inputs = read_files(files, &mut digest)?;
    target.monoids.extend(inputs.monoids);
    target.msets.extend(inputs.msets);
    target.schemes.extend(inputs.schemes);
    target.invalid.extend(inputs.invalid);
    let suites = if suites.is_empty() { Suite::ALL.to_vec() } else { suites };
    let report = Report::new(&digest, run(&target, &suites, &cfg));
    match format {
        Format::Text => print!("{}", report.render_text(timings)),
        Format::Records => print!("{}", report.render_records(timings)),
    }
    Ok(report.passed())
}

enum Described {
    Text(String),
    Invalid(Vec<(String, String)>),
}

fn describe(target: &str, topologies_only: bool) -> Result<Described, InputError> {
    let path = PathBuf::from(target);
    let inputs = if path.is_file() {
        read_files(&[path], &mut Vec::new())?
    } else if let Some(m) = corpus::monoid_by_name(target) {
        Inputs { monoids: vec![m], ..Inputs::default() }
    } else if let Some(g) = corpus::scheme_by_name(target) {
        Inputs { schemes: vec![g], ..Inputs::default() }
    } else {
        return Err(InputError(format!("`{target}` is neither a file nor a corpus name")));
    };
    if !inputs.invalid.is_empty() {
        return Ok(Described::Invalid(inputs.invalid));
    }
    let mut out = String::new();
    for m in &inputs.monoids {
        out.push_str(&if topologies_only { describe_topologies(m) } else { describe_monoid(m) });
    }
    if !topologies_only {
        for g in &inputs.schemes {
            match build_scheme(g) {
                Ok(x) => out.push_str(&describe_scheme(&x)),
                Err(e) => return Ok(Described::Invalid(vec![(format!("scheme/{}", g.name), e.to_string())])),
            }
        }
    }
    Ok(Described::Text(out))
}

fn describe_all(targets: &[String], topologies_only: bool) -> Result<bool, InputError> {
    if targets.is_empty() {
        return Err(InputError("nothing to describe".into()));
    }
    let mut ok = true;
    for t in targets {
        match describe(t, topologies_only)? {
            Described::Text(s) => print!("{s}"),
            Described::Invalid(problems) => {
                ok = false;
                for (name, problem) in problems {
                    eprintln!("{name}: {problem}");
                }
            }
        }
    }
    Ok(ok)
}

fn counterexample(max_s: u64, max_p: u64, table: bool) -> Result<bool, InputError> {
    if max_s < 2 || max_p < 2 {
        return Err(InputError("--max-s and --max-p must be at least 2".into()));
    }
    match nat_counterexample(max_s, max_p) {
        Ok(t) => {
            println!("s <= {}: every s has a witness prime p <= {} with v_p(sp) = 1 < p", t.max_s, t.largest_prime_used());
            if table {
                println!("s\tp\tv_p(sp)");
                for w in &t.witnesses {
                    println!("{}\t{}\t{}", w.s, w.p, w.valuation);
                }
            } else {
                println!("p\tcount");
                for (p, c) in t.histogram() {
                    println!("{p}\t{c}");
                }
            }
            Ok(true)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { corpus, suites, max_carrier, format, max_s, max_p, timings, files } => {
            let cfg = SuiteConfig { max_carrier, max_s, max_p, ..SuiteConfig::default() };
            verify(corpus, suites, cfg, format, timings, &files)
        }
        Command::Describe { targets } => describe_all(&targets, false),
        Command::Topologies { targets } => describe_all(&targets, true),
        Command::Counterexample { max_s, max_p, table } => counterexample(max_s, max_p, table),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
