//! The `navlogic` command-line interface, as a function from arguments to
//! exit code and captured output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::canonical::{build_memoryless_canonical, build_recall_canonical};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, NavStatement};
use crate::navigation::{
    check_memoryless_witness, check_recall_witness, evaluate, navigability_table, synth_memoryless, synth_recall,
    Budget, Kind, MemorylessStrategy, RecallMachine,
};
use crate::proof::{check_proof, derive_proof, derives, AxiomSystem, Derivation};
use crate::system::{TransitionSystem, ViewSet};
use crate::testkit::{fuzz_campaign, RandomParams};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "navlogic",
    version,
    about = "Navigation strategies under imperfect information"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula on a system.
    Check {
        system: PathBuf,
        formula: String,
        #[arg(long)]
        kind: Kind,
    },
    /// Synthesize a strategy navigating from one view set to another.
    Synth {
        system: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        kind: Kind,
    },
    /// Re-check a strategy file as a navigation witness.
    Verify {
        system: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        kind: Kind,
    },
    /// Print navigability between every pair of observation classes.
    Table { system: PathBuf },
    /// Decide derivability of an atom from atomic hypotheses.
    Derive {
        #[arg(long)]
        axioms: AxiomSystem,
        #[arg(long = "hyp")]
        hyps: Vec<String>,
        #[arg(long)]
        goal: String,
        /// Also print a derivation when one exists.
        #[arg(long)]
        proof: bool,
    },
    /// Check a proof file line by line.
    Checkproof {
        #[arg(long)]
        axioms: AxiomSystem,
        proof: PathBuf,
    },
    /// Print the canonical system for a set of atomic hypotheses.
    Canonical {
        #[arg(long)]
        axioms: AxiomSystem,
        #[arg(long)]
        views: String,
        #[arg(long = "hyp")]
        hyps: Vec<String>,
    },
    /// Run the property campaign on seeded random systems.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: u64,
        #[arg(long = "max-states")]
        max_states: Option<usize>,
    },
}

/// Accepts `{a,b}`, `a,b` or `a b`.
pub fn parse_view_list(text: &str) -> Result<ViewSet> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return ViewSet::parse_list(trimmed);
    }
    ViewSet::new(
        trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty()),
    )
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_system(path: &Path) -> Result<TransitionSystem> {
    TransitionSystem::parse(&read(path)?)
}

fn answer(yes: bool, on_yes: &str, on_no: &str) -> Outcome {
    Outcome {
        code: if yes { 0 } else { 1 },
        stdout: format!("{}\n", if yes { on_yes } else { on_no }),
        stderr: String::new(),
    }
}

fn execute(command: Command) -> Result<Outcome> {
    let budget = Budget::default();
    match command {
        Command::Check { system, formula, kind } => {
            let sys = load_system(&system)?;
            let f = parse_formula(&formula)?;
            Ok(answer(evaluate(&sys, &f, kind, &budget)?, "true", "false"))
        }
        Command::Synth { system, from, to, kind } => {
            let sys = load_system(&system)?;
            let (a, b) = (parse_view_list(&from)?, parse_view_list(&to)?);
            let text = match kind {
                Kind::Memoryless => synth_memoryless(&sys, &a, &b, &budget)?.map(|s| s.to_text(&sys)),
                Kind::Recall => synth_recall(&sys, &a, &b, &budget)?.map(|m| m.to_text(&sys)),
            };
            Ok(match text {
                Some(stdout) => Outcome {
                    code: 0,
                    stdout,
                    stderr: String::new(),
                },
                None => answer(false, "", "none"),
            })
        }
        Command::Verify {
            system,
            strategy,
            from,
            to,
            kind,
        } => {
            let sys = load_system(&system)?;
            let text = read(&strategy)?;
            let (a, b) = (parse_view_list(&from)?, parse_view_list(&to)?);
            let ok = match kind {
                Kind::Memoryless => check_memoryless_witness(&sys, &MemorylessStrategy::parse(&sys, &text)?, &a, &b)?,
                Kind::Recall => check_recall_witness(&sys, &RecallMachine::parse(&sys, &text)?, &a, &b)?,
            };
            Ok(answer(ok, "ok", "fail"))
        }
        Command::Table { system } => {
            let sys = load_system(&system)?;
            Ok(Outcome {
                code: 0,
                stdout: navigability_table(&sys, &budget)?.to_string(),
                stderr: String::new(),
            })
        }
        Command::Derive {
            axioms,
            hyps,
            goal,
            proof,
        } => {
            let sigma: Vec<NavStatement> = hyps.iter().map(|h| NavStatement::parse(h)).collect::<Result<_>>()?;
            let goal = NavStatement::parse(&goal)?;
            let mut out = answer(derives(axioms, &sigma, &goal), "derivable", "not derivable");
            if proof {
                if let Some(d) = derive_proof(axioms, &sigma, &goal) {
                    out.stdout.push_str(&d.to_text());
                }
            }
            Ok(out)
        }
        Command::Checkproof { axioms, proof } => {
            let d = Derivation::parse(&read(&proof)?)?;
            Ok(match check_proof(axioms, &d) {
                Ok(()) => answer(true, "ok", ""),
                Err(defect) => Outcome {
                    code: 1,
                    stdout: "fail\n".into(),
                    stderr: format!("{defect}\n"),
                },
            })
        }
        Command::Canonical { axioms, views, hyps } => {
            let universe = parse_view_list(&views)?;
            let sigma: Vec<NavStatement> = hyps.iter().map(|h| NavStatement::parse(h)).collect::<Result<_>>()?;
            let sys = match axioms {
                AxiomSystem::Recall => build_recall_canonical(&sigma, &universe)?,
                AxiomSystem::Memoryless => build_memoryless_canonical(&sigma, &universe)?,
            };
            Ok(Outcome {
                code: 0,
                stdout: sys.to_text(),
                stderr: String::new(),
            })
        }
        Command::Fuzz {
            seed,
            count,
            max_states,
        } => {
            let mut params = RandomParams::default();
            if let Some(k) = max_states {
                params.states.1 = k;
                params.states.0 = params.states.0.min(k);
            }
            let report = fuzz_campaign(seed, count, &params, &budget)?;
            let mut stdout = String::new();
            let _ = write!(stdout, "{report}");
            Ok(Outcome {
                code: if report.is_clean() { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            })
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name. Errors exit with
/// status 2 and a single diagnostic line.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: "error: missing subcommand; run with --help for usage\n".into(),
                },
                _ => {
                    let text = e.to_string();
                    let first = text
                        .lines()
                        .find(|l| !l.trim().is_empty())
                        .unwrap_or("error: invalid arguments");
                    Outcome {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("{}\n", first.trim_end()),
                    }
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.to_string().replace('\n', " ")),
        },
    }
}
