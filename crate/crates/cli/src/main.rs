use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lettercost_cli::commands::{self, Format, Options};
use lettercost_cli::{CliError, ProbSource};

/// Prefix-free codes for letters of unequal cost.
#[derive(Parser)]
#[command(name = "lettercost", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the characteristic equation and print c, beta and tail convergence.
    Root(Common),
    /// Build a code and print codewords with the redundancy report.
    Code(Common),
    /// Print the redundancy report only.
    Bounds(Common),
    /// Exact optimum by exhaustive search (n <= 10, t <= 4).
    Oracle(Common),
    /// Coder against the exact optimum; `--sweep N` checks N seeded instances.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        sweep: Option<u64>,
    },
    /// Time code construction across sizes and print CSV.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Comma-separated sizes.
        #[arg(long, default_value = "1000,10000,100000,1000000", value_delimiter = ',')]
        sizes: Vec<String>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Cost spec, e.g. finite:1,3 | linear | repeat:3 | fib | rll:2,5 | telegraph | balanced
    #[arg(long, default_value = "finite:1,1")]
    costs: String,
    /// Probability file (one per line, # comments, or a JSON array).
    #[arg(long, group = "source")]
    probs: Option<String>,
    /// Comma-separated probabilities.
    #[arg(long, group = "source")]
    inline: Option<String>,
    /// Generator: uniform:n | geometric:q,n | zipf:s,n | dyadic:n
    #[arg(long, group = "source")]
    r#gen: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Rescale probabilities that do not sum to 1.
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value_t = lettercost::analysis::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Include the per-node split trace.
    #[arg(long)]
    trace: bool,
    #[arg(long, default_value_t = lettercost::costs::DEFAULT_TOL)]
    tol: f64,
}

impl Common {
    fn options(&self) -> Result<Options, CliError> {
        let source = match (&self.probs, &self.inline, &self.r#gen) {
            (Some(path), _, _) => Some(ProbSource::File(path.clone())),
            (_, Some(list), _) => Some(ProbSource::parse_inline(list)?),
            (_, _, Some(spec)) => Some(ProbSource::parse_generator(spec)?),
            _ => None,
        };
        Ok(Options {
            costs: self.costs.clone(),
            source,
            seed: self.seed,
            format: match self.format {
                FormatArg::Text => Format::Text,
                FormatArg::Json => Format::Json,
            },
            normalize: self.normalize,
            epsilon: self.epsilon,
            trace: self.trace,
            tol: self.tol,
        })
    }
}

fn parse_sizes(sizes: &[String]) -> Result<Vec<usize>, CliError> {
    sizes
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|n| *n >= 1.0 && n.fract() == 0.0)
                .map(|n| n as usize)
                .ok_or_else(|| CliError::Usage(format!("bad size '{s}'")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Root(c) => commands::cmd_root(&c.options()?),
        Command::Code(c) => commands::cmd_code(&c.options()?),
        Command::Bounds(c) => commands::cmd_bounds(&c.options()?),
        Command::Oracle(c) => commands::cmd_oracle(&c.options()?),
        Command::Compare { common, sweep } => match sweep {
            Some(count) => commands::cmd_sweep(&common.options()?, count),
            None => commands::cmd_compare(&common.options()?),
        },
        Command::Bench { common, sizes, repeats } => {
            commands::cmd_bench(&common.options()?, &parse_sizes(&sizes)?, repeats)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(lettercost_cli::EXIT_PARSE as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Violation { output, .. } = &e {
                print!("{output}");
            }
            let message = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {message}", e.reason());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
