//! `impg`: check, compile, run, normalize and format IMP(G) programs.
//!
//! Exit status: 0 success, 1 diagnostics or compile failure, 2 runtime
//! error, 3 usage error. Results go to stdout, diagnostics to stderr.

use clap::{Args, Parser, Subcommand};
use impg::callnf::normalize_def;
use impg::compiler::compile_program;
use impg::forest::{check_data_by, forest_to_string};
use impg::stdlib::Registry;
use impg::syntax::{Program, Step};
use impg::typecheck::{tc_data, tc_program};
use impg::vm::{run_arrow, RunError, DEFAULT_BUDGET};
use impg::{flatten, parse_data, parse_program, Diagnostic};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "impg", version, about = "IMP(G) toolchain")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FileArg {
    file: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check a program; prints nothing when it is well typed.
    Check {
        #[command(flatten)]
        file: FileArg,
        /// Also report arrows with several distinct compilations.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Compile every definition.
    Compile {
        #[command(flatten)]
        file: FileArg,
        /// Skip the peephole optimizer.
        #[arg(long)]
        no_opt: bool,
        /// Print the code of each definition.
        #[arg(long)]
        dump: bool,
        /// Reject arrows with several distinct compilations.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run a definition on a data literal.
    Run {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        arrow: String,
        #[arg(long)]
        data: String,
        /// Maximum number of loop-body applications [env: IMPG_BUDGET].
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        no_opt: bool,
        /// Also check basic data against the owning library.
        #[arg(long)]
        strict_data: bool,
    },
    /// Rewrite a definition as a single iteration of a call-free arrow.
    Normalize {
        #[command(flatten)]
        file: FileArg,
        #[arg(long)]
        arrow: String,
    },
    /// Pretty-print a program.
    Fmt {
        #[command(flatten)]
        file: FileArg,
    },
}

enum Failure {
    Diagnostics,
    Runtime,
    Usage,
}

impl From<Failure> for ExitCode {
    fn from(f: Failure) -> ExitCode {
        ExitCode::from(match f {
            Failure::Diagnostics => 1,
            Failure::Runtime => 2,
            Failure::Usage => 3,
        })
    }
}

type Outcome = Result<(), Failure>;

fn load(f: &FileArg) -> Result<Program, Failure> {
    let text = std::fs::read_to_string(&f.file).map_err(|e| {
        eprintln!("cannot read {}: {e}", f.file.display());
        Failure::Usage
    })?;
    parse_program(&text).map_err(|e| {
        eprintln!("{}: {e}", f.file.display());
        Failure::Diagnostics
    })
}

fn report(ds: &[Diagnostic]) -> Outcome {
    for d in ds {
        eprintln!("{d}");
    }
    if ds.is_empty() {
        Ok(())
    } else {
        Err(Failure::Diagnostics)
    }
}

fn budget(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("IMPG_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| {
            eprintln!("IMPG_BUDGET must be a nonnegative integer, got {s:?}");
            Failure::Usage
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Compiles `p`, explaining failures with the type checker.
fn compile_or_report(p: &Program, optimize: bool) -> Result<impg::CompiledProgram, Failure> {
    compile_program(p, optimize).map_err(|e| {
        let ds = tc_program(p, false);
        if ds.is_empty() {
            eprintln!("{e}");
        }
        let _ = report(&ds);
        Failure::Diagnostics
    })
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Check { file, exhaustive } => report(&tc_program(&load(&file)?, exhaustive)),
        Cmd::Compile {
            file,
            no_opt,
            dump,
            exhaustive,
        } => {
            let p = load(&file)?;
            if exhaustive {
                report(&tc_program(&p, true))?;
            }
            let prog = compile_or_report(&p, !no_opt)?;
            for (name, code) in &prog.codes {
                if dump {
                    println!("{name} = {code}");
                } else {
                    println!("{name}: {} instructions", code.size());
                }
            }
            Ok(())
        }
        Cmd::Run {
            file,
            arrow,
            data,
            budget: flag,
            no_opt,
            strict_data,
        } => {
            let p = load(&file)?;
            let budget = budget(flag)?;
            let d = parse_data(&data).map_err(|e| {
                eprintln!("data: {e}");
                Failure::Usage
            })?;
            let Some(def) = p.def(&arrow) else {
                eprintln!("no definition named {arrow}");
                return Err(Failure::Usage);
            };
            let lib = Registry::standard();
            let fits = if strict_data {
                check_data_by(&d, &flatten(&def.dom), &|a, e| lib.datum_ok(a, e))
            } else {
                tc_data(&d, &def.dom)
            };
            if !fits {
                eprintln!("data {} is not of object {}", forest_to_string(&d), def.dom);
                return Err(Failure::Runtime);
            }
            match run_arrow(&arrow, d, &p, budget, !no_opt) {
                Ok(out) => {
                    println!("{}", forest_to_string(&out));
                    Ok(())
                }
                Err(RunError::Diagnostics(ds)) => {
                    report(&ds)?;
                    eprintln!("cannot compile {arrow}");
                    Err(Failure::Diagnostics)
                }
                Err(RunError::Runtime(e)) => {
                    eprintln!("runtime error: {e}");
                    Err(Failure::Runtime)
                }
            }
        }
        Cmd::Normalize { file, arrow } => {
            let mut p = load(&file)?;
            if p.def(&arrow).is_none() {
                eprintln!("no definition named {arrow}");
                return Err(Failure::Usage);
            }
            compile_or_report(&p, true)?;
            let (_, f, cod) = normalize_def(&p, &arrow).map_err(|e| {
                eprintln!("{e}");
                Failure::Diagnostics
            })?;
            let def = p.defs.iter_mut().find(|d| d.name == arrow).expect("checked above");
            let span = def.steps[0].span;
            def.steps = vec![Step { arrow: f, cod, span }];
            print!("{p}");
            Ok(())
        }
        Cmd::Fmt { file } => {
            print!("{}", load(&file)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Failure::Usage.into()
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.into(),
    }
}
