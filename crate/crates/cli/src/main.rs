//! Command-line front end: generate classes from a manifest, emit stubs,
//! rewrite stubs from source scanning, score obfuscation quality,
//! demonstrate constant hiding, and run the self-check suites.
//!
//! Exit codes: 0 success, 1 user/input error, 2 internal invariant
//! violation (a failed verify suite).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use arrayobf::codegen::{self, GeneratedClass, ObfConfig};
use arrayobf::hiding;
use arrayobf::metrics::{self, MetricsInput};
use arrayobf::parser;
use arrayobf::store::RestructureOp;
use arrayobf::verify;

#[derive(Parser)]
#[command(
    name = "arrayobf",
    about = "Array-restructuring obfuscation for Java-style sources",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum OpArg {
    Split,
    Fold,
    Flatten,
}

impl From<OpArg> for RestructureOp {
    fn from(op: OpArg) -> Self {
        match op {
            OpArg::Split => RestructureOp::Split,
            OpArg::Fold => RestructureOp::Folded,
            OpArg::Flatten => RestructureOp::Flattened,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate full accessor classes from an array-declaration manifest
    Generate {
        /// Manifest file, one array declaration per line
        #[arg(long)]
        infile: PathBuf,
        /// Restructuring operation
        #[arg(long, value_enum)]
        op: OpArg,
        /// Directory to write the class files into
        #[arg(long)]
        out: PathBuf,
        /// Seed for the obfuscation draws
        #[arg(long, default_value_t = codegen::DEFAULT_SEED)]
        seed: u64,
        /// Replace integer literal sites with F(...) calls
        #[arg(long)]
        hide: bool,
        /// Permute logical indices with an affine map
        #[arg(long)]
        index_obfuscate: bool,
    },
    /// Write stub versions of all twelve predefined classes
    Stubs {
        /// Directory to write the stub files into
        #[arg(long)]
        out: PathBuf,
    },
    /// Rewrite the class files mentioned in a source file with full
    /// implementations
    Rewrite {
        /// Source file to scan for predefined class usages
        #[arg(long)]
        source: PathBuf,
        /// Directory holding the class files to rewrite
        #[arg(long)]
        class_dir: PathBuf,
        /// Seed for the obfuscation draws
        #[arg(long, default_value_t = codegen::DEFAULT_SEED)]
        seed: u64,
        /// Replace integer literal sites with F(...) calls
        #[arg(long)]
        hide: bool,
        /// Permute logical indices with an affine map
        #[arg(long)]
        index_obfuscate: bool,
    },
    /// Score an obfuscated program against the original
    Metrics {
        /// Original source file
        #[arg(long)]
        orig: PathBuf,
        /// Obfuscated source file
        #[arg(long)]
        obf: PathBuf,
        /// Generated class files backing the obfuscated source (repeatable)
        #[arg(long = "class")]
        class_files: Vec<PathBuf>,
        /// Original runtime (any consistent unit)
        #[arg(long)]
        t_orig: Option<f64>,
        /// Obfuscated runtime (same unit as --t-orig)
        #[arg(long)]
        t_obf: Option<f64>,
        /// Potency weight X
        #[arg(long, default_value_t = metrics::DEFAULT_POTENCY_WEIGHT)]
        x: f64,
        /// Override the original statement count
        #[arg(long)]
        loc_orig: Option<u64>,
        /// Override the obfuscated composite statement count
        #[arg(long)]
        loc_obf: Option<u64>,
    },
    /// Print a constant-hiding call for a value below 5
    Hide {
        /// Constant to hide (0..=4)
        #[arg(long)]
        value: u64,
        /// Chain depth (1..=13)
        #[arg(long)]
        count: u32,
        /// Seed for the residue draws
        #[arg(long, default_value_t = codegen::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the self-check property suites
    Verify {
        /// Largest array size for the split bijection enumeration
        #[arg(long, default_value_t = 300)]
        size_limit: usize,
        /// Randomized operations per store-equivalence case
        #[arg(long, default_value_t = 10_000)]
        ops: u64,
        /// Seed for the randomized workloads
        #[arg(long, default_value_t = codegen::DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Generate {
            infile,
            op,
            out,
            seed,
            hide,
            index_obfuscate,
        } => cmd_generate(&infile, op.into(), &out, seed, hide, index_obfuscate),
        Command::Stubs { out } => cmd_stubs(&out),
        Command::Rewrite {
            source,
            class_dir,
            seed,
            hide,
            index_obfuscate,
        } => cmd_rewrite(&source, &class_dir, seed, hide, index_obfuscate),
        Command::Metrics {
            orig,
            obf,
            class_files,
            t_orig,
            t_obf,
            x,
            loc_orig,
            loc_obf,
        } => cmd_metrics(&orig, &obf, &class_files, t_orig, t_obf, x, loc_orig, loc_obf),
        Command::Hide { value, count, seed } => cmd_hide(value, count, seed),
        Command::Verify {
            size_limit,
            ops,
            seed,
        } => Ok(cmd_verify(size_limit, ops, seed)),
    }
}

fn read_file(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn obf_config(seed: u64, hide: bool, index_obfuscate: bool) -> ObfConfig {
    ObfConfig {
        hide_constants: hide,
        hide_depth: None,
        index_obfuscate,
        seed,
    }
}

fn write_and_report(classes: &[GeneratedClass], dir: &Path) -> anyhow::Result<()> {
    let paths = codegen::write_workspace(classes, dir)?;
    for (class, path) in classes.iter().zip(&paths) {
        println!(
            "wrote {} ({} statements, {} hiding sites)",
            path.display(),
            class.statement_count,
            class.hiding_sites
        );
    }
    Ok(())
}

fn cmd_generate(
    infile: &Path,
    op: RestructureOp,
    out: &Path,
    seed: u64,
    hide: bool,
    index_obfuscate: bool,
) -> anyhow::Result<u8> {
    let text = read_file(infile)?;
    let (decls, issues) = parser::parse_infile(&text);
    for issue in &issues {
        eprintln!("{issue}");
    }
    if decls.is_empty() {
        bail!("no array declarations found in {}", infile.display());
    }
    let (plans, plan_issues) = codegen::plan_classes(&decls, op);
    for issue in &plan_issues {
        eprintln!("warning: {}", issue.message);
    }
    if plans.is_empty() {
        bail!(
            "no declarations in {} are compatible with the {:?} operation",
            infile.display(),
            op
        );
    }
    let config = obf_config(seed, hide, index_obfuscate);
    let classes: Vec<GeneratedClass> = plans
        .iter()
        .map(|&(op, kind)| codegen::emit_full(op, kind, &config))
        .collect();
    write_and_report(&classes, out)?;
    println!("generated {} class(es)", classes.len());
    Ok(0)
}

fn cmd_stubs(out: &Path) -> anyhow::Result<u8> {
    let classes: Vec<GeneratedClass> = codegen::predefined_classes()
        .into_iter()
        .map(|(op, kind)| codegen::emit_stub(op, kind))
        .collect();
    write_and_report(&classes, out)?;
    println!("generated {} stub(s)", classes.len());
    Ok(0)
}

fn cmd_rewrite(
    source: &Path,
    class_dir: &Path,
    seed: u64,
    hide: bool,
    index_obfuscate: bool,
) -> anyhow::Result<u8> {
    let text = read_file(source)?;
    let used = parser::scan_class_usages(&text);
    if used.is_empty() {
        println!(
            "nothing to rewrite: {} mentions no predefined class",
            source.display()
        );
        return Ok(0);
    }
    let config = obf_config(seed, hide, index_obfuscate);
    let classes: Vec<GeneratedClass> = used
        .iter()
        .filter_map(|name| codegen::class_name_parts(name))
        .map(|(op, kind)| codegen::emit_full(op, kind, &config))
        .collect();
    write_and_report(&classes, class_dir)?;
    println!("rewrote {} class(es)", classes.len());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_metrics(
    orig: &Path,
    obf: &Path,
    class_files: &[PathBuf],
    t_orig: Option<f64>,
    t_obf: Option<f64>,
    x: f64,
    loc_orig: Option<u64>,
    loc_obf: Option<u64>,
) -> anyhow::Result<u8> {
    let orig_text = read_file(orig)?;
    let obf_text = read_file(obf)?;
    let loc_orig = match loc_orig {
        Some(n) => n,
        None => parser::count_statements(&orig_text) as u64,
    };
    let loc_obf = match loc_obf {
        Some(n) => n,
        None => {
            let source_stmts = parser::count_statements(&obf_text) as u64;
            let mut class_stmts = 0u64;
            let mut distinct_calls = 0u64;
            for path in class_files {
                let class_text = read_file(path)?;
                class_stmts += parser::count_statements(&class_text) as u64;
                distinct_calls += codegen::extract_hiding_calls(&class_text).len() as u64;
            }
            let per_call = hiding::emit_hiding_helper().statement_count as u64;
            metrics::composite_loc(source_stmts, class_stmts, distinct_calls, per_call)?
        }
    };
    let size_orig = fs::metadata(orig)
        .with_context(|| format!("cannot stat {}", orig.display()))?
        .len();
    let size_obf = fs::metadata(obf)
        .with_context(|| format!("cannot stat {}", obf.display()))?
        .len();
    let mut input = MetricsInput::new(loc_orig, loc_obf, size_orig, size_obf);
    input.t_orig = t_orig;
    input.t_obf = t_obf;
    input.x_weight = x;
    let report = metrics::build_report(&input)?;
    print!("{}", report.render());
    Ok(0)
}

fn cmd_hide(value: u64, count: u32, seed: u64) -> anyhow::Result<u8> {
    let call = hiding::hide_constant(value, count, seed)?;
    println!("{}", hiding::render_call(&call));
    println!("evaluates to {}", hiding::f_eval(call.base, call.count)?);
    Ok(0)
}

fn cmd_verify(size_limit: usize, ops: u64, seed: u64) -> u8 {
    let outcomes = verify::run_all(size_limit, ops, seed);
    let mut all_passed = true;
    for outcome in &outcomes {
        match &outcome.counterexample {
            None => println!("suite {}: {} cases, pass", outcome.name, outcome.cases),
            Some(counterexample) => {
                all_passed = false;
                println!(
                    "suite {}: FAIL after {} cases",
                    outcome.name, outcome.cases
                );
                eprintln!("counterexample: {counterexample}");
            }
        }
    }
    if all_passed {
        println!("all suites passed");
        0
    } else {
        2
    }
}
