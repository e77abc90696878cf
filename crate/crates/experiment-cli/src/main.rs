//! `mixbound`: sweeps, bounds, REM statics, environment process and path families.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use experiment_cli::{
    bounds_command, env_command, paths_command, rem_command, sweep_from_text, BoundsArgs, CommandOutput, EnvArgs,
    OutputArgs, OutputFormat, PathsArgs, RemArgs,
};

#[derive(Parser)]
#[command(name = "mixbound", version, about = "Mixing-time bounds for reversible chains and the Random Energy Model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's output format.
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Path-based bounds for a chain file.
    Bounds {
        #[command(flatten)]
        args: BoundsArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// REM statics and spectral gaps.
    Rem {
        #[command(flatten)]
        args: RemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Environment process checks and the averaged mixing time.
    Env {
        #[command(flatten)]
        args: EnvArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Path families and their goodness certificates.
    Paths {
        #[command(flatten)]
        args: PathsArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn report(out: &CommandOutput) {
    for m in &out.verdicts.hard_failures {
        eprintln!("hard failure: {m}");
    }
    for m in &out.verdicts.soft_failures {
        eprintln!("soft failure: {m}");
    }
}

fn run() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    let (out, path, format) = match cli.command {
        Command::Sweep { config, out, format } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let (cfg, result) = sweep_from_text(&text)?;
            let path = out.or(cfg.output.path.map(PathBuf::from));
            (result, path, format.unwrap_or(cfg.output.format))
        }
        Command::Bounds { args, output } => (bounds_command(&args)?, output.out, output.format),
        Command::Rem { args, output } => (rem_command(&args)?, output.out, output.format),
        Command::Env { args, output } => (env_command(&args)?, output.out, output.format),
        Command::Paths { args, output } => (paths_command(&args)?, output.out, output.format),
    };
    for p in out.emit(path.as_deref(), format)? {
        eprintln!("wrote {}", p.display());
    }
    report(&out);
    Ok(out.exit_code())
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}
