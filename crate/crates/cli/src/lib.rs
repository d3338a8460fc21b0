//! Library half of the command-line front end; `main` is a thin wrapper
//! around [`run`] so integration tests can drive everything in-process.
//!
//! Exit contract: 0 on success (physical findings such as blow-up or
//! collision terminations are successes and are recorded in the output
//! metadata), 1 on computational failure, 2 on usage errors.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod sweep;

use args::{Cli, Command};
use clap::Parser;
use config::{Mode, RunConfig, UsageError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn execute(config: &RunConfig) -> anyhow::Result<String> {
    Ok(match config.mode {
        Mode::Simulate => commands::simulate(config)?.render(config.format),
        Mode::Exact => commands::exact(config)?.render(config.format),
        Mode::Stability => commands::stability(config)?.render(config.format),
        Mode::Perturb => commands::perturb(config)?.render(config.format),
        Mode::Spectrum => commands::spectrum(config)?.render(config.format),
        Mode::Wedges => commands::wedges(config)?,
    })
}

fn run_single(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(text) => {
            if let Err(e) = output::emit(&text, config.output.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_FAILURE;
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    }
}

fn run_sweep(config: &RunConfig, spec: &str) -> i32 {
    let spec = match sweep::parse_sweep(spec) {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let base = match &config.output {
        Some(p) => p.clone(),
        None => {
            return usage_error(&UsageError(
                "--sweep writes one file per value and needs --output".into(),
            ))
        }
    };
    let mut worst = EXIT_OK;
    std::thread::scope(|scope| {
        let handles: Vec<_> = spec
            .values
            .iter()
            .map(|&value| {
                let config = sweep::apply(config, &spec.param, value);
                let path = sweep::output_path(&base, &spec.param, value);
                scope.spawn(move || {
                    let config = RunConfig {
                        output: Some(path),
                        ..config
                    };
                    run_single(&config)
                })
            })
            .collect();
        for h in handles {
            let code = h.join().unwrap_or(EXIT_FAILURE);
            worst = worst.max(code);
        }
    });
    worst
}

fn usage_error(e: &UsageError) -> i32 {
    eprintln!("error: {e}");
    eprintln!("Run `ptcalogero --help` (or `ptcalogero <command> --help`) for usage.");
    EXIT_USAGE
}

fn io_args(command: &Command) -> &args::IoArgs {
    match command {
        Command::Simulate(a) => &a.io,
        Command::Exact(a) => &a.io,
        Command::Stability(a) => &a.io,
        Command::Perturb(a) => &a.io,
        Command::Spectrum(a) => &a.io,
        Command::Wedges(a) => &a.io,
    }
}

/// Parse `argv`, resolve the configuration and run. Returns the process
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit codes: 0 for --help/--version, 2 otherwise.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };

    let config = match config::resolve(&cli.command) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };

    let io = io_args(&cli.command);
    if io.dump_config {
        print!("{}", config::dump(&config));
        return EXIT_OK;
    }
    match &io.sweep {
        Some(spec) => run_sweep(&config, spec),
        None => run_single(&config),
    }
}
