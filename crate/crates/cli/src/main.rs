//! `streamplan`: decide, verify, reduce and generate streamed planarity
//! instances.
//!
//! Exit codes: 0 = YES / accepted / written, 1 = NO / rejected, 2 = error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use streamed_planarity::{
    brute_oracle, check_certificate, decide, exhaustive, export_dot, random_instance, star_to_sefe, theorem1_generate,
    CheckReport, Decision, DrawingCertificate, Limits, Mode, SefeInstance, StreamedInstance, Witness, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(name = "streamplan", version, about = "Streamed planarity with a backbone graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Algocon,
    Star,
    Exhaustive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Algocon => Mode::Algocon,
            ModeArg::Star => Mode::Star,
            ModeArg::Exhaustive => Mode::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance; prints YES/NO followed by the rule trace.
    Decide {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Write a certificate here when the answer is YES.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check a certificate against an instance.
    Verify { instance: PathBuf, certificate: PathBuf },
    /// Reduce a star instance to sunflower SEFE.
    ReduceToSefe {
        instance: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Schematic Graphviz rendering of an instance.
    ExportDot {
        instance: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Decide by naive enumeration of embeddings and face assignments.
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Tree-backbone instance from a 3-graph SEFE instance on a tree.
    Theorem1 {
        sefe: PathBuf,
        #[arg(long, default_value_t = 2)]
        omega: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Random planar backbone with random stream edges.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        omega: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<StreamedInstance> {
    StreamedInstance::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: &str) -> Result<()> {
    match output {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Decide { instance, mode, budget, certificate } => {
            let i = load_instance(&instance)?;
            let limits = Limits { budget };
            let d = decide(&i, mode.into(), limits)?;
            println!("{}", if d.answer { "YES" } else { "NO" });
            for rule in &d.trace {
                println!("{rule}");
            }
            if d.answer {
                if let Some(path) = certificate {
                    let c = single_certificate(&i, &d, limits)?;
                    write_atomic(&path, &c.to_json())?;
                }
            }
            Ok(if d.answer { 0 } else { 1 })
        }
        Command::Verify { instance, certificate } => {
            let i = load_instance(&instance)?;
            let c = DrawingCertificate::from_json(&read(&certificate)?)
                .with_context(|| format!("parsing {}", certificate.display()))?;
            match check_certificate(&i, &c)? {
                CheckReport::Accept => {
                    println!("ACCEPT");
                    Ok(0)
                }
                CheckReport::Reject(reason) => {
                    println!("REJECT");
                    println!("reason={reason}");
                    Ok(1)
                }
            }
        }
        Command::ReduceToSefe { instance, output } => {
            let s = star_to_sefe(&load_instance(&instance)?)?;
            emit(output.as_deref(), &s.to_json())?;
            Ok(0)
        }
        Command::Gen { kind: GenKind::Theorem1 { sefe, omega, output } } => {
            let s = SefeInstance::from_json(&read(&sefe)?).with_context(|| format!("parsing {}", sefe.display()))?;
            let (i, report) = theorem1_generate(&s, omega)?;
            emit(output.as_deref(), &i.to_json())?;
            if output.is_some() {
                println!("vertices={}", report.vertex_count());
                println!("tree_vertices={}", report.tree_vertices);
                println!("star_leaves={}", report.star_leaves);
                println!("sentinels={}", report.sentinels);
                println!("pair_edges={}", report.pair_edges);
                println!("sentinel_edges={}", report.sentinel_edges);
            }
            Ok(0)
        }
        Command::Gen { kind: GenKind::Random { n, m, omega, seed, output } } => {
            let i = random_instance(n, m, omega, seed)?;
            emit(output.as_deref(), &i.to_json())?;
            Ok(0)
        }
        Command::ExportDot { instance, output } => {
            emit(output.as_deref(), &export_dot(&load_instance(&instance)?))?;
            Ok(0)
        }
        Command::Oracle { instance, budget } => {
            let yes = brute_oracle(&load_instance(&instance)?, Limits { budget })?;
            println!("{}", if yes { "YES" } else { "NO" });
            Ok(if yes { 0 } else { 1 })
        }
    }
}

/// A certificate for the whole instance. Decisions assembled from several
/// pieces are re-derived by complete search, which needs the backbone to have
/// at most one non-trivial component.
fn single_certificate(i: &StreamedInstance, d: &Decision, limits: Limits) -> Result<DrawingCertificate> {
    if let Some(Witness::Single(c)) = &d.witness {
        return Ok(c.clone());
    }
    if i.nontrivial_components().len() > 1 {
        bail!("no single certificate exists for a backbone with several non-trivial components");
    }
    match exhaustive(i, limits)?.witness {
        Some(Witness::Single(c)) => Ok(c),
        _ => bail!("complete search found no certificate"),
    }
}
