//! Batch command-line front end: every experiment behind one binary,
//! emitting deterministic reports on stdout.
//!
//! Exit-code contract: 0 — run completed and the predicted outcome was
//! observed; 1 — run completed with an unexpected outcome; 2 — resource or
//! usage error. Timing goes to stderr only, never into the report.

use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::adversary::{
    query_complexity_experiment, run_adversary, BinarySearchEmulator, ConstantEmulator,
    Emulator, NaiveEmulator, RandomEmulator,
};
use crate::emulation::{emulate_eq, emulate_rel, EmulationError};
use crate::languages::{make_arith, make_leq, make_leq_in, LeqParam};
use crate::modal::{
    diamond_counterexample, sweep_quantifier, verify_box_theorem, ModalError,
    ModalQuantifier,
};
use crate::oracle::{AssertionOracle, OracleError, Relation};
use crate::report::Report;
use crate::semantics::{check_strong_transparency, LanguageRef, DEFAULT_BUDGET};

pub const EXIT_OK: u8 = 0;
pub const EXIT_UNEXPECTED: u8 = 1;
pub const EXIT_RESOURCE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "semlab",
    version,
    about = "Experiments on emulating denotational semantics with assertion queries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; csv applies to the complexity command only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an emulated representation of an expression via oracle queries.
    Emulate(EmulateArgs),
    /// Run the transcript-forging refutation experiment.
    Adversary(AdversaryArgs),
    /// Possible-worlds experiments.
    Modal(ModalArgs),
    /// Measure binary search vs linear scan query counts.
    Complexity(ComplexityArgs),
    /// Bounded-exhaustive strong-transparency check.
    Transparency(TransparencyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LanguageName {
    Arith,
    Leq,
    LeqIn,
}

#[derive(Debug, Args)]
pub struct LanguageArgs {
    #[arg(long, value_enum)]
    pub language: LanguageName,

    /// Bound for leq: a decimal numeral or "inf".
    #[arg(long)]
    pub m: Option<String>,

    /// Comma-separated set for leq-in, e.g. "2,4".
    #[arg(long)]
    pub set: Option<String>,
}

impl LanguageArgs {
    fn build(&self) -> Result<LanguageRef, String> {
        match self.language {
            LanguageName::Arith => Ok(Arc::new(make_arith())),
            LanguageName::Leq => {
                let m = self.m.as_deref().ok_or("leq requires --m <decimal|inf>")?;
                let param = if m == "inf" {
                    LeqParam::Infinite
                } else {
                    let value = m
                        .parse::<BigUint>()
                        .map_err(|_| format!("--m must be a decimal numeral or \"inf\", got {m:?}"))?;
                    LeqParam::Finite(value)
                };
                Ok(Arc::new(make_leq(param)))
            }
            LanguageName::LeqIn => {
                let set = self.set.as_deref().ok_or("leq-in requires --set <n,n,...>")?;
                let mut elems = Vec::new();
                for part in set.split(',').filter(|p| !p.is_empty()) {
                    let value = part
                        .parse::<u64>()
                        .map_err(|_| format!("--set elements must be naturals, got {part:?}"))?;
                    elems.push(value);
                }
                Ok(Arc::new(make_leq_in(elems)))
            }
        }
    }

    fn config(&self) -> Value {
        json!({
            "language": match self.language {
                LanguageName::Arith => "arith",
                LanguageName::Leq => "leq",
                LanguageName::LeqIn => "leq-in",
            },
            "m": self.m,
            "set": self.set,
        })
    }
}

#[derive(Debug, Args)]
pub struct EmulateArgs {
    #[command(flatten)]
    pub language: LanguageArgs,

    /// Expression to represent.
    #[arg(long)]
    pub expr: String,

    /// Relation to emulate; omitting it emulates equality by canonical
    /// index, naming one builds the relation table.
    #[arg(long)]
    pub rel: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmulatorName {
    Naive,
    BinarySearch,
    Constant,
    Random,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    #[arg(long, value_enum)]
    pub emulator: EmulatorName,

    /// Search window for the binary-search emulator.
    #[arg(long = "N", default_value_t = 100)]
    pub n_max: u64,

    /// Seed for the random emulator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ModalArgs {
    #[command(subcommand)]
    pub sub: ModalSub,
}

#[derive(Debug, Subcommand)]
pub enum ModalSub {
    /// Exhaustively verify the box theorem at the given bounds.
    VerifyBox(SweepBounds),
    /// Reproduce the published diamond ambiguity tables.
    DiamondExample,
    /// Run the box sweep with the diamond quantifier; counterexamples are
    /// the predicted outcome.
    SweepDiamond(SweepBounds),
}

#[derive(Debug, Args)]
pub struct SweepBounds {
    #[arg(long, default_value_t = 3)]
    pub worlds: usize,
    #[arg(long, default_value_t = 2)]
    pub exprs: usize,
    #[arg(long, default_value_t = 2)]
    pub ctxs: usize,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    /// Search windows; repeat the flag for several.
    #[arg(long = "N", required = true)]
    pub n_windows: Vec<u64>,

    /// Sampled bounds per window (1 and N are always included).
    #[arg(long, default_value_t = 5)]
    pub samples: usize,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TransparencyArgs {
    #[command(flatten)]
    pub language: LanguageArgs,

    /// Maximum expression length; defaults to 4 for arith, 1 otherwise.
    #[arg(long)]
    pub expr_len: Option<usize>,

    /// Maximum |left| + |right|; defaults to 4 for arith, 1 otherwise.
    #[arg(long)]
    pub ctx_len: Option<usize>,
}

fn budget_from_env() -> Result<u64, String> {
    match std::env::var("SEMLAB_BUDGET") {
        Ok(raw) => raw
            .parse::<u64>()
            .map_err(|_| format!("SEMLAB_BUDGET must be a natural number, got {raw:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

struct Outcome {
    report: Report,
    exit: u8,
    /// Optional non-JSON rendering (csv) replacing the report body.
    raw: Option<String>,
    text: String,
}

/// Parses nothing, prints everything: executes the parsed command, writes
/// the report to stdout in the requested format, and returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    let started = Instant::now();
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_RESOURCE;
        }
    };
    if cli.format == Format::Csv && !matches!(cli.command, Command::Complexity(_)) {
        eprintln!("error: csv output is only available for the complexity command");
        return EXIT_RESOURCE;
    }

    let outcome = match &cli.command {
        Command::Emulate(args) => cmd_emulate(args, budget),
        Command::Adversary(args) => cmd_adversary(args, budget),
        Command::Modal(args) => cmd_modal(args, budget),
        Command::Complexity(args) => cmd_complexity(args),
        Command::Transparency(args) => cmd_transparency(args, budget),
    };

    let outcome = match outcome {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_RESOURCE;
        }
    };

    match cli.format {
        Format::Json => print!("{}", outcome.report.to_canonical_json()),
        Format::Csv => match &outcome.raw {
            Some(raw) => print!("{raw}"),
            None => print!("{}", outcome.report.to_canonical_json()),
        },
        Format::Text => println!("{}", outcome.text),
    }
    // Timing is diagnostic only; it must never reach the report.
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    outcome.exit
}

fn cmd_emulate(args: &EmulateArgs, budget: u64) -> Result<Outcome, String> {
    let lang = args.language.build()?;
    let config = {
        let mut c = args.language.config();
        c["expr"] = json!(args.expr);
        c["rel"] = json!(args.rel);
        c
    };

    // Cheap precheck at tiny bounds: emulation only preserves contextual
    // equality on strongly transparent languages. Best effort — a tight
    // budget is spent on the emulation itself, not the diagnostic.
    let warning = match check_strong_transparency(lang.as_ref(), 1, 1, budget) {
        Ok(precheck) if precheck.passed() => None,
        Ok(precheck) => Some(format!(
            "language {} failed the transparency precheck ({} witnesses at bounds (1,1)); \
             emulated equality is not context-faithful",
            precheck.language,
            precheck.witnesses.len()
        )),
        Err(_) => None,
    };

    let rel_name = args.rel.as_deref().unwrap_or("eq");
    let rel = Relation::by_name(rel_name)
        .ok_or_else(|| format!("unknown relation {rel_name:?} (expected eq, leq, or contrary)"))?;
    let mut oracle = AssertionOracle::with_budget(lang, rel, budget);

    if rel_name == "eq" {
        match emulate_eq(&args.expr, &mut oracle) {
            Ok(rep) => {
                let payload = json!({
                    "expr": args.expr,
                    "index": rep.index.to_string(),
                    "canonical": rep.canonical,
                    "queriesUsed": rep.queries_used,
                    "transparencyWarning": warning,
                });
                let text = format!(
                    "emulate: {} -> index {}, canonical {:?}, {} queries{}",
                    args.expr,
                    rep.index,
                    rep.canonical,
                    rep.queries_used,
                    warning.map(|w| format!("\nwarning: {w}")).unwrap_or_default()
                );
                Ok(Outcome {
                    report: Report::new("emulate", config, payload),
                    exit: EXIT_OK,
                    raw: None,
                    text,
                })
            }
            Err(err) => emulate_failure(config, &oracle, err),
        }
    } else {
        match emulate_rel(&args.expr, &mut oracle) {
            Ok(table) => {
                let rows: Vec<Value> = table
                    .to_sorted_rows()
                    .into_iter()
                    .map(|(a, b, bit)| json!([a, b, bit]))
                    .collect();
                let payload = json!({
                    "expr": args.expr,
                    "relation": rel_name,
                    "subject": table.subject,
                    "rows": rows,
                    "queriesUsed": oracle.query_count(),
                    "transparencyWarning": warning,
                });
                let text = format!(
                    "emulate: relation table for {:?} under {} with {} rows, {} queries",
                    args.expr,
                    rel_name,
                    table.entries.len(),
                    oracle.query_count()
                );
                Ok(Outcome {
                    report: Report::new("emulate", config, payload),
                    exit: EXIT_OK,
                    raw: None,
                    text,
                })
            }
            Err(err) => emulate_failure(config, &oracle, err),
        }
    }
}

fn emulate_failure(
    config: Value,
    oracle: &AssertionOracle,
    err: EmulationError,
) -> Result<Outcome, String> {
    let payload = json!({
        "error": err.to_string(),
        "partialTranscript": oracle.snapshot(),
        "queriesUsed": oracle.query_count(),
    });
    Ok(Outcome {
        report: Report::new("emulate", config, payload),
        exit: EXIT_RESOURCE,
        raw: None,
        text: format!("emulate failed: {err}"),
    })
}

fn cmd_adversary(args: &AdversaryArgs, budget: u64) -> Result<Outcome, String> {
    let mut emulator: Box<dyn Emulator> = match args.emulator {
        EmulatorName::Naive => Box::new(NaiveEmulator),
        EmulatorName::BinarySearch => Box::new(BinarySearchEmulator { n_max: args.n_max }),
        EmulatorName::Constant => Box::new(ConstantEmulator),
        EmulatorName::Random => Box::new(RandomEmulator { seed: args.seed }),
    };
    let config = json!({
        "emulator": emulator.name(),
        "N": args.n_max,
        "seed": args.seed,
    });
    match run_adversary(emulator.as_mut(), Some(budget)) {
        Ok(report) => {
            let text = format!(
                "adversary: {} refuted {:?} at m' = {} ({} transcript entries, replay identical)",
                report.emulator,
                report.refuted_language,
                report.m_prime,
                report.transcript_inf.count()
            );
            Ok(Outcome {
                report: Report::new("adversary", config, &report),
                exit: EXIT_OK,
                raw: None,
                text,
            })
        }
        Err(crate::adversary::AdversaryError::Emulation(EmulationError::Oracle(
            OracleError::BudgetExhausted { budget },
        ))) => Err(format!("query budget of {budget} exhausted")),
        Err(err) => {
            // Replay mismatch or missing disagreement: the theorem's
            // prediction failed, which is an unexpected outcome, not usage.
            let payload = json!({ "error": err.to_string() });
            Ok(Outcome {
                report: Report::new("adversary", config, payload),
                exit: EXIT_UNEXPECTED,
                raw: None,
                text: format!("adversary failed: {err}"),
            })
        }
    }
}

fn cmd_modal(args: &ModalArgs, budget: u64) -> Result<Outcome, String> {
    let map_budget = |e: ModalError| e.to_string();
    match &args.sub {
        ModalSub::VerifyBox(bounds) => {
            let (primary, guarded) =
                verify_box_theorem(bounds.worlds, bounds.exprs, bounds.ctxs, budget)
                    .map_err(map_budget)?;
            let clean =
                primary.counterexample_count == 0 && guarded.counterexample_count == 0;
            let config = json!({
                "sub": "verify-box",
                "worlds": bounds.worlds,
                "exprs": bounds.exprs,
                "ctxs": bounds.ctxs,
            });
            let text = format!(
                "modal verify-box: {} tables ({} with null cells), {} counterexamples",
                primary.tables_checked,
                guarded.tables_checked,
                primary.counterexample_count + guarded.counterexample_count
            );
            Ok(Outcome {
                report: Report::new(
                    "modal",
                    config,
                    json!({ "primary": primary, "guarded": guarded }),
                ),
                exit: if clean { EXIT_OK } else { EXIT_UNEXPECTED },
                raw: None,
                text,
            })
        }
        ModalSub::DiamondExample => {
            let (left, right, check) = diamond_counterexample();
            let as_published = check.diamond_assert_left
                && check.diamond_assert_right
                && check.verdict_left_equal
                && !check.verdict_right_equal;
            let text = format!(
                "modal diamond-example: assertions agree in both universes, verdicts {} / {}",
                if check.verdict_left_equal { "equal" } else { "unequal" },
                if check.verdict_right_equal { "equal" } else { "unequal" },
            );
            Ok(Outcome {
                report: Report::new(
                    "modal",
                    json!({ "sub": "diamond-example" }),
                    json!({ "left": left, "right": right, "check": check }),
                ),
                exit: if as_published { EXIT_OK } else { EXIT_UNEXPECTED },
                raw: None,
                text,
            })
        }
        ModalSub::SweepDiamond(bounds) => {
            let report = sweep_quantifier(
                ModalQuantifier::Diamond,
                bounds.worlds,
                bounds.exprs,
                bounds.ctxs,
                false,
                budget,
            )
            .map_err(map_budget)?;
            // Underspecification predicts counterexamples here.
            let predicted = report.counterexample_count > 0;
            let config = json!({
                "sub": "sweep-diamond",
                "worlds": bounds.worlds,
                "exprs": bounds.exprs,
                "ctxs": bounds.ctxs,
            });
            let text = format!(
                "modal sweep-diamond: {} counterexamples over {} tables",
                report.counterexample_count, report.tables_checked
            );
            Ok(Outcome {
                report: Report::new("modal", config, &report),
                exit: if predicted { EXIT_OK } else { EXIT_UNEXPECTED },
                raw: None,
                text,
            })
        }
    }
}

fn cmd_complexity(args: &ComplexityArgs) -> Result<Outcome, String> {
    for &n in &args.n_windows {
        if n < 1 {
            return Err("--N windows must be >= 1".to_string());
        }
    }
    let table = query_complexity_experiment(&args.n_windows, args.samples, args.seed)
        .map_err(|e| e.to_string())?;
    let within_bound = table.rows.iter().all(|row| {
        let log_bound = 64 - u64::leading_zeros(row.n_window) as u64 + 1;
        row.binary <= log_bound + 1
    });
    let config = json!({
        "N": args.n_windows,
        "samples": args.samples,
        "seed": args.seed,
    });
    let text = {
        let max_binary = table.rows.iter().map(|r| r.binary).max().unwrap_or(0);
        format!(
            "complexity: {} rows, max binary {} queries, bound {}",
            table.rows.len(),
            max_binary,
            if within_bound { "respected" } else { "VIOLATED" }
        )
    };
    Ok(Outcome {
        raw: Some(table.to_csv()),
        report: Report::new("complexity", config, &table),
        exit: if within_bound { EXIT_OK } else { EXIT_UNEXPECTED },
        text,
    })
}

fn cmd_transparency(args: &TransparencyArgs, budget: u64) -> Result<Outcome, String> {
    let lang = args.language.build()?;
    let default_len = match args.language.language {
        LanguageName::Arith => 4,
        _ => 1,
    };
    let expr_len = args.expr_len.unwrap_or(default_len);
    let ctx_len = args.ctx_len.unwrap_or(default_len);
    let report = check_strong_transparency(lang.as_ref(), expr_len, ctx_len, budget)
        .map_err(|e| e.to_string())?;

    // arith is predicted transparent; both leq variants are predicted to
    // fail with the call expression as witness.
    let predicted = match args.language.language {
        LanguageName::Arith => report.passed(),
        LanguageName::Leq | LanguageName::LeqIn => {
            report.witnesses.iter().any(|w| w.expr == "leq()")
        }
    };
    let config = {
        let mut c = args.language.config();
        c["exprLen"] = json!(expr_len);
        c["ctxLen"] = json!(ctx_len);
        c
    };
    let text = format!(
        "transparency: {} at bounds ({}, {}): {} witnesses over {} evaluations",
        report.language,
        expr_len,
        ctx_len,
        report.witnesses.len(),
        report.evaluations
    );
    Ok(Outcome {
        report: Report::new("transparency", config, &report),
        exit: if predicted { EXIT_OK } else { EXIT_UNEXPECTED },
        raw: None,
        text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_every_documented_invocation() {
        for argv in [
            vec!["semlab", "emulate", "--language", "arith", "--expr", "2+2"],
            vec!["semlab", "emulate", "--language", "arith", "--expr", "2+2", "--rel", "leq"],
            vec!["semlab", "emulate", "--language", "leq", "--m", "5", "--expr", "leq()"],
            vec!["semlab", "adversary", "--emulator", "naive"],
            vec!["semlab", "adversary", "--emulator", "binary-search", "--N", "100"],
            vec!["semlab", "adversary", "--emulator", "random", "--seed", "7"],
            vec!["semlab", "modal", "verify-box", "--worlds", "3", "--exprs", "2", "--ctxs", "2"],
            vec!["semlab", "modal", "diamond-example"],
            vec!["semlab", "modal", "sweep-diamond", "--worlds", "2", "--exprs", "2", "--ctxs", "1"],
            vec!["semlab", "complexity", "--N", "1000000"],
            vec!["semlab", "complexity", "--N", "1", "--format", "csv"],
            vec!["semlab", "transparency", "--language", "arith", "--expr-len", "4", "--ctx-len", "4"],
            vec!["semlab", "transparency", "--language", "leq", "--m", "5"],
            vec!["semlab", "transparency", "--language", "leq-in", "--set", "2,4"],
        ] {
            Cli::try_parse_from(&argv).unwrap_or_else(|e| panic!("{argv:?}: {e}"));
        }
    }

    #[test]
    fn language_args_reject_missing_parameters() {
        let args = LanguageArgs { language: LanguageName::Leq, m: None, set: None };
        assert!(args.build().is_err());
        let args = LanguageArgs { language: LanguageName::LeqIn, m: None, set: None };
        assert!(args.build().is_err());
        let args = LanguageArgs {
            language: LanguageName::Leq,
            m: Some("inf".to_string()),
            set: None,
        };
        assert_eq!(args.build().unwrap().name(), "leq(m=inf)");
    }

    #[test]
    fn csv_is_rejected_outside_complexity() {
        let cli = Cli::try_parse_from([
            "semlab", "adversary", "--emulator", "naive", "--format", "csv",
        ])
        .unwrap();
        assert_eq!(run(&cli), EXIT_RESOURCE);
    }

    #[test]
    fn transparency_exit_codes_follow_predictions() {
        let cli = Cli::try_parse_from([
            "semlab", "transparency", "--language", "arith",
            "--expr-len", "2", "--ctx-len", "2",
        ])
        .unwrap();
        assert_eq!(run(&cli), EXIT_OK);
        let cli = Cli::try_parse_from([
            "semlab", "transparency", "--language", "leq", "--m", "5",
        ])
        .unwrap();
        assert_eq!(run(&cli), EXIT_OK);
    }
}
