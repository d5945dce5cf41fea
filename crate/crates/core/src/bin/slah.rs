use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{ArgGroup, Parser, ValueEnum};

use slah::analysis::DeriveMode;
use slah::emit::{emit_datalog, emit_tptp};
use slah::engine::oracle_limit;
use slah::hammer::Encoding;
use slah::model::parse_problem;
use slah::pipeline::{
    analyze, decide, dump_analysis, dump_facts, dump_testpoints, hammer_analysis, oracle_verdict, Options,
    PipelineError,
};
use slah::testpoints::PickOptions;
use slah::{Problem, Rational};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Datalog,
    Tptp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EncodingArg {
    Clause,
    Stratified,
}

/// Decide conjectures over Horn clauses with linear arithmetic via a Datalog hammer.
#[derive(Parser, Debug)]
#[command(name = "slah", version)]
#[command(group(ArgGroup::new("mode").args(["decide", "emit", "dump_analysis", "dump_testpoints", "dump_facts"])))]
struct Cli {
    /// Problem file.
    input: PathBuf,
    /// Print the verdict and statistics (default).
    #[arg(long)]
    decide: bool,
    /// Write the hammered program instead of deciding it.
    #[arg(long, value_name = "FORMAT")]
    emit: Option<Format>,
    /// Print derivable values and position classes.
    #[arg(long)]
    dump_analysis: bool,
    /// Print interval partitions, test points and extrapolation.
    #[arg(long)]
    dump_testpoints: bool,
    /// Print the derived tuples of a predicate.
    #[arg(long, value_name = "PRED")]
    dump_facts: Option<String>,
    /// How a universal conjecture is encoded. Defaults to `stratified`,
    /// except for TPTP output, which needs `clause`.
    #[arg(long, value_name = "ENCODING")]
    encoding: Option<EncodingArg>,
    /// Pick an integer and a non-integer point in every interval.
    #[arg(long)]
    two_points_per_interval: bool,
    /// Re-check the verdict by brute-force ground resolution.
    #[arg(long)]
    oracle_check: bool,
    /// Write output to a file instead of stdout.
    #[arg(short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

const EXIT_USAGE: u8 = 2;
const EXIT_NOT_REDUCIBLE: u8 = 3;
const EXIT_ORACLE_MISMATCH: u8 = 4;

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: EXIT_USAGE, error }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = if matches!(e, PipelineError::NotReducible(_)) { EXIT_NOT_REDUCIBLE } else { EXIT_USAGE };
        Failure { code, error: e.into() }
    }
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let text = std::fs::read_to_string(&cli.input).with_context(|| format!("cannot read {}", cli.input.display()))?;
    let problem: Problem =
        parse_problem::<Rational>(&text).with_context(|| format!("{}: parse error", cli.input.display()))?;
    let encoding = match (cli.encoding, cli.emit) {
        (Some(EncodingArg::Clause), _) | (None, Some(Format::Tptp)) => Encoding::Clause,
        _ => Encoding::Stratified,
    };
    let options = Options {
        encoding,
        pick: PickOptions { two_points_per_interval: cli.two_points_per_interval },
        derive: DeriveMode::default(),
    };

    if cli.dump_analysis || cli.dump_testpoints {
        let analysis = analyze(&problem, &options)?;
        let out = if cli.dump_analysis { dump_analysis(&analysis) } else { dump_testpoints(&analysis) };
        return Ok((out, 0));
    }
    if let Some(format) = cli.emit {
        let analysis = analyze(&problem, &options)?;
        let hammered = hammer_analysis(&analysis, encoding);
        let out = match format {
            Format::Datalog => emit_datalog(&hammered, Some(&analysis.problem)),
            Format::Tptp => emit_tptp(&hammered, Some(&analysis.problem)).map_err(anyhow::Error::from)?,
        };
        return Ok((out, 0));
    }

    let start = Instant::now();
    let decision = decide(&problem, &options)?;
    eprintln!("time_ms: {:.3}", start.elapsed().as_secs_f64() * 1000.0);
    if let Some(pred) = &cli.dump_facts {
        return Ok((dump_facts(&decision.facts, pred), 0));
    }
    let mut out = format!("{}\n{}", decision.verdict, decision.stats);
    if cli.oracle_check {
        let expected = oracle_verdict(&decision.analysis, oracle_limit()).map_err(anyhow::Error::from)?;
        out.push_str(&format!("oracle: {expected}\n"));
        if expected != decision.verdict {
            return Err(Failure {
                code: EXIT_ORACLE_MISMATCH,
                error: anyhow::anyhow!("oracle disagrees: hammer says {}, oracle says {expected}", decision.verdict),
            });
        }
    }
    Ok((out, decision.verdict.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok((out, code)) => {
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, out) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
                None => print!("{out}"),
            }
            ExitCode::from(code)
        }
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
