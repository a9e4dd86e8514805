//! Command-line front end. Exit codes: 0 stable / exists, 1 unstable /
//! absent, 2 usage, parse or precondition error, 3 cycle, 4 step limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::graph_matching::{parse_graph, GraphError};
use crate::matching::{parse_matching, Matching, MatchingError};
use crate::model::{has_no_unacceptability, parse_instance, random_game, Game, GameKind, GameShape, GenParams, ModelError};
use crate::reductions::{mmm_to_marriage_ns, mmm_to_roommate_is, ReductionError};
use crate::solvers::{
    brute_force, compute_cis_ir, compute_cns, compute_is_marriage, compute_ns_marriage_complete,
    exists_ns_is_roommate_complete, run_dynamics, DynamicsOutcome, SolverError, BRUTE_FORCE_CAP,
};
use crate::stability::{check, Concept};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CYCLE: i32 = 3;
pub const EXIT_STEP_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "indstab", version, about = "Individual-based stable matchings in marriage and roommate games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveConcept {
    /// Individually stable matching of a marriage game.
    Is,
    /// Contractually individually stable and individually rational matching.
    CisIr,
    /// Contractually Nash stable matching.
    Cns,
    /// Nash stable matching of a marriage game with complete lists.
    NsComplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExistsConcept {
    Ns,
    Is,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Poly,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionKind {
    NsMarriage,
    IsRoommate,
}

fn concept_arg(s: &str) -> Result<Concept, String> {
    s.parse::<Concept>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a stable matching and print it in matching-file format.
    Solve {
        #[arg(long, value_enum)]
        concept: SolveConcept,
        instance: PathBuf,
    },
    /// Check a matching; prints STABLE or UNSTABLE plus a witness.
    Verify {
        #[arg(long, value_parser = concept_arg)]
        concept: Concept,
        instance: PathBuf,
        matching: PathBuf,
    },
    /// Decide whether a stable matching exists.
    Exists {
        #[arg(long, value_enum)]
        concept: ExistsConcept,
        #[arg(long, value_enum, default_value = "poly")]
        method: Method,
        #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
        cap: usize,
        instance: PathBuf,
    },
    /// Exhaustively check every matching.
    Brute {
        #[arg(long, value_parser = concept_arg)]
        concept: Concept,
        /// Print only the number of stable matchings.
        #[arg(long)]
        count: bool,
        #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
        cap: usize,
        instance: PathBuf,
    },
    /// Follow deterministic deviations until stability, a cycle, or the step limit.
    Dynamics {
        #[arg(long, value_parser = concept_arg)]
        concept: Concept,
        /// `singletons` or a matching file.
        #[arg(long, default_value = "singletons")]
        start: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        instance: PathBuf,
    },
    /// Build a hardness-gadget instance from a graph file.
    Reduce {
        #[arg(value_enum)]
        kind: ReductionKind,
        graph: PathBuf,
        k: usize,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, conflicts_with = "marriage", required_unless_present = "marriage")]
        roommate: Option<usize>,
        #[arg(long, num_args = 2, value_names = ["MEN", "WOMEN"])]
        marriage: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.0)]
        tie_prob: f64,
        #[arg(long, default_value_t = 1.0)]
        accept_prob: f64,
        #[arg(long)]
        mutual: bool,
        #[arg(long)]
        complete: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Instance { path: PathBuf, source: ModelError },
    #[error("{path}: {source}")]
    MatchingFile {
        path: PathBuf,
        source: MatchingError,
    },
    #[error("{path}: {source}")]
    GraphFile { path: PathBuf, source: GraphError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_game(path: &Path) -> Result<Game, CliError> {
    parse_instance(&read(path)?).map_err(|source| CliError::Instance {
        path: path.to_owned(),
        source,
    })
}

fn load_matching(path: &Path, n: usize) -> Result<Matching, CliError> {
    parse_matching(&read(path)?, n).map_err(|source| CliError::MatchingFile {
        path: path.to_owned(),
        source,
    })
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Solve { concept, instance } => {
            let game = load_game(&instance)?;
            let matching = match concept {
                SolveConcept::Is => {
                    if !game.is_marriage() {
                        return Err(CliError::Usage(
                            "an IS matching is only guaranteed for marriage games; try `exists --concept is`".into(),
                        ));
                    }
                    compute_is_marriage(&game)?
                }
                SolveConcept::NsComplete => compute_ns_marriage_complete(&game)?,
                SolveConcept::CisIr | SolveConcept::Cns => {
                    let report = if concept == SolveConcept::Cns {
                        compute_cns(&game)?
                    } else {
                        compute_cis_ir(&game)?
                    };
                    writeln!(out, "# deviations: {}", report.deviation_count)?;
                    report.matching
                }
            };
            write!(out, "{matching}")?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            concept,
            instance,
            matching,
        } => {
            let game = load_game(&instance)?;
            let m = load_matching(&matching, game.n())?;
            match check(&game, &m, concept) {
                Ok(()) => {
                    writeln!(out, "STABLE")?;
                    Ok(EXIT_OK)
                }
                Err(v) => {
                    writeln!(out, "UNSTABLE")?;
                    writeln!(out, "{v}")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Exists {
            concept,
            method,
            cap,
            instance,
        } => {
            let game = load_game(&instance)?;
            let concept = match concept {
                ExistsConcept::Ns => Concept::Ns,
                ExistsConcept::Is => Concept::Is,
            };
            let found = match method {
                Method::Brute => brute_force(&game, concept, cap)?.first,
                Method::Poly => poly_exists(&game, concept)?,
            };
            report_existence(out, found.as_ref())
        }
        Command::Brute {
            concept,
            count,
            cap,
            instance,
        } => {
            let game = load_game(&instance)?;
            let result = brute_force(&game, concept, cap)?;
            if count {
                writeln!(out, "{}", result.count)?;
                Ok(if result.count > 0 { EXIT_OK } else { EXIT_NEGATIVE })
            } else {
                report_existence(out, result.first.as_ref())
            }
        }
        Command::Dynamics {
            concept,
            start,
            max_steps,
            instance,
        } => {
            if !Concept::MOVES.contains(&concept) {
                return Err(CliError::Usage(format!(
                    "dynamics needs one of ns, is, cns, cis; got {concept}"
                )));
            }
            let game = load_game(&instance)?;
            let initial = if start == "singletons" {
                Matching::singletons(game.n())
            } else {
                load_matching(Path::new(&start), game.n())?
            };
            let trace = run_dynamics(&game, concept, &initial, max_steps);
            for (i, (_, w)) in trace.steps.iter().enumerate() {
                writeln!(out, "STEP {} {w}", i + 1)?;
            }
            let steps = trace.steps.len();
            let code = match trace.outcome {
                DynamicsOutcome::Stable => {
                    writeln!(out, "STABLE steps={steps}")?;
                    EXIT_OK
                }
                DynamicsOutcome::CycleDetected { first_repeat } => {
                    writeln!(
                        out,
                        "CYCLE first_repeat={first_repeat} length={} steps={steps}",
                        steps - first_repeat
                    )?;
                    EXIT_CYCLE
                }
                DynamicsOutcome::StepLimit => {
                    writeln!(out, "STEP_LIMIT steps={steps}")?;
                    EXIT_STEP_LIMIT
                }
            };
            write!(out, "{}", trace.last)?;
            Ok(code)
        }
        Command::Reduce { kind, graph, k } => {
            let g0 = parse_graph(&read(&graph)?).map_err(|source| CliError::GraphFile {
                path: graph.clone(),
                source,
            })?;
            let (art, name) = match kind {
                ReductionKind::NsMarriage => (mmm_to_marriage_ns(&g0, k)?, "ns-marriage"),
                ReductionKind::IsRoommate => (mmm_to_roommate_is(&g0, k)?, "is-roommate"),
            };
            write!(out, "{}{}", art.role_map_comment(name), art.game)?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            roommate,
            marriage,
            tie_prob,
            accept_prob,
            mutual,
            complete,
            seed,
        } => {
            let shape = match (roommate, marriage) {
                (Some(n), None) => GameShape::Roommate { n },
                (None, Some(mw)) => GameShape::Marriage {
                    men: mw[0],
                    women: mw[1],
                },
                _ => return Err(CliError::Usage("give exactly one of --roommate or --marriage".into())),
            };
            let game = random_game(&GenParams {
                shape,
                tie_probability: tie_prob,
                acceptability_probability: accept_prob,
                mutual,
                complete,
                seed,
            })?;
            write!(out, "{game}")?;
            Ok(EXIT_OK)
        }
    }
}

fn poly_exists(game: &Game, concept: Concept) -> Result<Option<Matching>, CliError> {
    let complete = has_no_unacceptability(game);
    match (game.kind(), concept) {
        (GameKind::Roommate, _) if complete => Ok(exists_ns_is_roommate_complete(game)?),
        (GameKind::Marriage { .. }, Concept::Is) => Ok(Some(compute_is_marriage(game)?)),
        (GameKind::Marriage { .. }, Concept::Ns) if complete => {
            Ok(Some(compute_ns_marriage_complete(game)?))
        }
        _ => Err(CliError::Usage(format!(
            "no polynomial method for {concept} on this game: needs a roommate game with no \
             unacceptability, a marriage game (IS), or a marriage game with complete lists (NS); \
             use --method brute"
        ))),
    }
}

fn report_existence(out: &mut dyn Write, found: Option<&Matching>) -> Result<i32, CliError> {
    match found {
        Some(m) => {
            writeln!(out, "YES")?;
            write!(out, "{m}")?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "NO")?;
            Ok(EXIT_NEGATIVE)
        }
    }
}
