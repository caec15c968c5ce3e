//! Command-line surface. Exit codes: 0 success, 1 failed check, 2 usage or parse error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sqfa_core::bounds::{
    dfa_upper_bound_from_qfa, estimate_isolation, minimal_dfa, mo_dim_lower_bound,
    mo_dim_lower_bound_log2, qk_lower_bound, qk_lower_bound_log2, separation_audit, BoundError,
    BoundReport,
};
use sqfa_core::conversion::to_mo;
use sqfa_core::{Alphabet, Dfa, Model, ModelKind};

use crate::format::{emit_automaton, parse_automaton, parse_unvalidated, FormatError};
use crate::fuzz::equivalence_fuzz;
use crate::generate::{gen_random_model, FuzzConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sqfa", version, about = "Semi-quantum finite automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a model file and check every numerical invariant.
    Validate { file: PathBuf },
    /// Print the acceptance probability of one input word.
    Run {
        file: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Convert a hybrid model (or DFA) into an MO-1gQFA file.
    Convert {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Fuzz a conversion against the source model's own semantics.
    Equiv(EquivArgs),
    /// Evaluate a state-complexity bound.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Estimate how well a cut-point is isolated on all words up to a length.
    Isolation {
        file: PathBuf,
        #[arg(long)]
        dfa: PathBuf,
        #[arg(long)]
        cutpoint: f64,
        #[arg(long)]
        max_len: usize,
    },
    /// Check the unit-ball and cross-class separation premises.
    Separation {
        file: PathBuf,
        #[arg(long)]
        dfa: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        max_len: usize,
    },
    /// Minimise a DFA file.
    Minimize {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Write a seeded random model.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct EquivArgs {
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    max_q: usize,
    #[arg(long, default_value_t = 3)]
    max_k: usize,
    #[arg(long, default_value_t = 3)]
    max_outcomes: usize,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
}

#[derive(Subcommand, Debug)]
enum BoundCommand {
    /// Minimal DFA size upper bound for an n-dimensional MO-1gQFA.
    DfaUpper {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        delta: f64,
    },
    /// MO-1gQFA dimension lower bound from a minimal DFA size (integer or 2^E).
    DimLower {
        #[arg(long)]
        dfa_states: String,
        #[arg(long)]
        delta: f64,
    },
    /// Lower bound on q*k for a hybrid model from a minimal DFA size.
    QkLower {
        #[arg(long)]
        dfa_states: String,
        #[arg(long)]
        delta: f64,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

/// Error that aborts a command with exit code 2.
struct Usage(String);

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(format!("output: {e}"))
    }
}

fn usage(flag: &str, e: impl std::fmt::Display) -> Usage {
    Usage(format!("{flag}: {e}"))
}

fn bound_usage(e: BoundError) -> Usage {
    let flag = match e {
        BoundError::InvalidDelta(_) => "--delta",
        BoundError::InvalidCutPoint(_) => "--cutpoint",
        BoundError::InvalidSize(_) => "--dim",
        _ => "bound",
    };
    usage(flag, e)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(Outcome::Pass) => EXIT_OK,
        Ok(Outcome::Fail) => EXIT_CHECK_FAILED,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn read(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Usage> {
    std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Model, Usage> {
    parse_automaton(&read(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load_dfa(path: &Path, flag: &str) -> Result<Dfa, Usage> {
    match load(path)? {
        Model::Dfa(d) => Ok(d),
        other => Err(usage(
            flag,
            format!("{} holds a {} model, expected dfa", path.display(), other.kind()),
        )),
    }
}

fn parse_kind(tag: &str) -> Result<ModelKind, Usage> {
    ModelKind::from_tag(tag).ok_or_else(|| {
        let tags: Vec<&str> = ModelKind::ALL.iter().map(|k| k.tag()).collect();
        usage("--kind", format!("unknown kind {tag:?}, expected one of {}", tags.join(", ")))
    })
}

/// Decimal integer or `2^E`, returned as `log2` when it does not fit in `u128`.
enum DfaSize {
    Exact(u128),
    Log2(f64),
}

fn parse_dfa_size(text: &str) -> Result<DfaSize, Usage> {
    let bad = || usage("--dfa-states", format!("expected a positive integer or 2^E, got {text:?}"));
    if let Some(exp) = text.strip_prefix("2^") {
        let e: u32 = exp.parse().map_err(|_| bad())?;
        return Ok(match 1u128.checked_shl(e) {
            Some(d) if e < 128 => DfaSize::Exact(d),
            _ => DfaSize::Log2(f64::from(e)),
        });
    }
    text.parse::<u128>().map(DfaSize::Exact).map_err(|_| bad())
}

/// `p` with 12 significant digits in plain decimal notation.
pub fn format_probability(p: f64) -> String {
    if p == 0.0 || !p.is_finite() {
        return format!("{:.11}", p);
    }
    let sci = format!("{:.11e}", p);
    let exp: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (11 - exp).max(0) as usize;
    format!("{p:.decimals$}")
}

fn render_word(alphabet: &Alphabet, word: &[usize]) -> String {
    if word.is_empty() {
        "(empty)".to_string()
    } else {
        alphabet.render(word)
    }
}

fn print_bound(out: &mut dyn Write, report: &BoundReport) -> Result<(), Usage> {
    match report.value {
        Some(v) => writeln!(out, "{v:.4}")?,
        None => writeln!(out, "2^{:.4}", report.log2_value)?,
    }
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<Outcome, Usage> {
    match cmd {
        Command::Validate { file } => {
            let model = match parse_unvalidated(&read(&file)?) {
                Ok(m) => m,
                Err(e) => return Err(Usage(format!("{}: {e}", file.display()))),
            };
            let violations = model.validate();
            if violations.is_empty() {
                writeln!(out, "ok: {} over {} symbols", model.kind(), model.alphabet().len())?;
                Ok(Outcome::Pass)
            } else {
                for v in &violations {
                    writeln!(out, "invalid: {v}")?;
                }
                Ok(Outcome::Fail)
            }
        }
        Command::Run { file, input } => {
            let model = load(&file)?;
            let word = model
                .alphabet()
                .parse_word(&input)
                .map_err(|e| usage("--input", e))?;
            let p = model.accept_prob(&word).map_err(|e| usage("--input", e))?;
            writeln!(out, "{}", format_probability(p))?;
            Ok(Outcome::Pass)
        }
        Command::Convert { file, output } => {
            let model = load(&file)?;
            if model.kind() == ModelKind::Mo1gqfa {
                return Err(Usage(format!(
                    "{}: already an mo1gqfa model",
                    file.display()
                )));
            }
            let (mo, rep) = to_mo(&model).map_err(|e| Usage(e.to_string()))?;
            write_file(&output, &emit_automaton(&Model::Mo(mo)))?;
            writeln!(out, "source: {}", rep.source_kind)?;
            writeln!(out, "q: {}", rep.q)?;
            writeln!(out, "k: {}", rep.k)?;
            writeln!(out, "out_dim: {}", rep.out_dim)?;
            writeln!(out, "kraus_counts: {:?}", rep.kraus_counts)?;
            Ok(Outcome::Pass)
        }
        Command::Equiv(a) => {
            let kind = parse_kind(&a.kind)?;
            let cfg = FuzzConfig {
                seed: a.seed,
                trials: a.trials,
                max_q: a.max_q,
                max_k: a.max_k,
                max_outcomes: a.max_outcomes,
                max_len: a.max_len,
                tolerance: a.tolerance,
            };
            let report = equivalence_fuzz(&cfg, kind).map_err(|e| usage("equiv", e))?;
            writeln!(out, "kind: {}", report.kind)?;
            writeln!(out, "trials_run: {}", report.trials_run)?;
            writeln!(out, "strings_compared: {}", report.strings_compared)?;
            writeln!(out, "max_abs_diff: {:e}", report.max_abs_diff)?;
            writeln!(out, "max_completeness_residual: {:e}", report.max_completeness_residual)?;
            writeln!(out, "max_density_residual: {:e}", report.max_density_residual)?;
            writeln!(out, "failures: {}", report.failures.len())?;
            for f in report.failures.iter().take(10) {
                writeln!(
                    out,
                    "  trial {} word {:?}: direct {:e} converted {:e}",
                    f.trial, f.word, f.direct, f.converted
                )?;
            }
            Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Bound(b) => {
            let report = match b {
                BoundCommand::DfaUpper { dim, delta } => dfa_upper_bound_from_qfa(dim, delta),
                BoundCommand::DimLower { dfa_states, delta } => match parse_dfa_size(&dfa_states)? {
                    DfaSize::Exact(d) => mo_dim_lower_bound(d, delta),
                    DfaSize::Log2(l) => mo_dim_lower_bound_log2(l, delta),
                },
                BoundCommand::QkLower { dfa_states, delta } => match parse_dfa_size(&dfa_states)? {
                    DfaSize::Exact(d) => qk_lower_bound(d, delta),
                    DfaSize::Log2(l) => qk_lower_bound_log2(l, delta),
                },
            }
            .map_err(bound_usage)?;
            print_bound(out, &report)?;
            Ok(Outcome::Pass)
        }
        Command::Isolation {
            file,
            dfa,
            cutpoint,
            max_len,
        } => {
            let model = load(&file)?;
            let lang = load_dfa(&dfa, "--dfa")?;
            let (mo, _) = to_mo(&model).map_err(|e| Usage(e.to_string()))?;
            let est = estimate_isolation(&mo, &lang, cutpoint, max_len).map_err(bound_usage)?;
            writeln!(out, "iso_hat: {:e}", est.iso_hat)?;
            writeln!(out, "consistent: {}", est.consistent)?;
            let witness = est
                .witness
                .as_ref()
                .map_or_else(|| "none".to_string(), |w| render_word(mo.alphabet(), w));
            writeln!(out, "witness: {witness}")?;
            writeln!(out, "words_checked: {}", est.words_checked)?;
            Ok(if est.consistent { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Separation {
            file,
            dfa,
            delta,
            max_len,
        } => {
            let model = load(&file)?;
            let (min, _) = minimal_dfa(&load_dfa(&dfa, "--dfa")?);
            let (mo, _) = to_mo(&model).map_err(|e| Usage(e.to_string()))?;
            let audit = separation_audit(&mo, &min, delta, max_len).map_err(bound_usage)?;
            writeln!(out, "threshold: {:.5}", audit.threshold)?;
            match audit.min_cross_distance {
                Some(d) => writeln!(out, "min_cross_distance: {d:.5}")?,
                None => writeln!(out, "min_cross_distance: none")?,
            }
            writeln!(out, "max_vec_norm: {:.5}", audit.max_vec_norm)?;
            writeln!(out, "classes: {}", audit.class_count)?;
            writeln!(out, "distinct_points: {}", audit.distinct_points)?;
            writeln!(out, "words_checked: {}", audit.words_checked)?;
            writeln!(out, "unit_ball_violations: {}", audit.unit_ball_violations.len())?;
            writeln!(out, "separation_violations: {}", audit.violations.len())?;
            for (x, y) in audit.violations.iter().take(10) {
                writeln!(
                    out,
                    "  {} vs {}",
                    render_word(mo.alphabet(), x),
                    render_word(mo.alphabet(), y)
                )?;
            }
            Ok(if audit.passed() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Minimize { file, output } => {
            let d = load_dfa(&file, "FILE")?;
            let (min, size) = minimal_dfa(&d);
            write_file(&output, &emit_automaton(&Model::Dfa(min)))?;
            writeln!(out, "states: {} -> {}", d.num_states(), size)?;
            Ok(Outcome::Pass)
        }
        Command::Gen { kind, seed, output } => {
            let kind = parse_kind(&kind)?;
            let cfg = FuzzConfig {
                seed,
                ..FuzzConfig::default()
            };
            let model = gen_random_model(kind, &cfg);
            write_file(&output, &emit_automaton(&model))?;
            writeln!(out, "wrote {} model to {}", kind, output.display())?;
            Ok(Outcome::Pass)
        }
    }
}

impl From<FormatError> for Usage {
    fn from(e: FormatError) -> Self {
        Usage(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_probability(1.0), "1.00000000000");
        assert_eq!(format_probability(0.5), "0.500000000000");
        assert_eq!(format_probability(0.0), "0.00000000000");
        assert_eq!(format_probability(0.25e-3), "0.000250000000000");
        assert_eq!(format_probability(0.9999999999999), "1.00000000000");
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("sqfa").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bound_commands() {
        assert_eq!(run_args(&["bound", "dim-lower", "--dfa-states", "2", "--delta", "0.5"]).1, "0.5400\n");
        assert_eq!(run_args(&["bound", "dfa-upper", "--dim", "1", "--delta", "0.5"]).1, "9.0000\n");
        assert_eq!(run_args(&["bound", "qk-lower", "--dfa-states", "2^100", "--delta", "0.5"]).1, "4.1813\n");
        assert_eq!(run_args(&["bound", "dim-lower", "--dfa-states", "2^400", "--delta", "0.5"]).0, 0);
        let (code, _, err) = run_args(&["bound", "dfa-upper", "--dim", "1", "--delta", "0.7"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--delta"), "{err}");
        let (code, _, err) = run_args(&["bound", "dim-lower", "--dfa-states", "many", "--delta", "0.5"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--dfa-states"), "{err}");
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = run_args(&["run", "x.json"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--input"), "{err}");
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
        let (code, _, err) = run_args(&["gen", "--kind", "2qfa", "--seed", "1", "-o", "/dev/null"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--kind"), "{err}");
    }
}
