mod config;
mod error;
mod flow;
mod formula;
mod orbit;
mod output;
mod scan;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::{CliError, EXIT_CHECK_FAILED};
use output::{Format, Sink};

/// Birational Weyl group actions, tau cocycles, discrete and continuous
/// Painleve dynamics.
///
/// Exit status: 0 when everything requested passed, 1 when a check failed
/// or a run was cut short, 2 for configuration errors, 3 when a
/// computation hit a pole, 4 for other errors.
#[derive(Debug, Parser)]
#[command(name = "cremona", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named preset applied under the config file (A1l:<l>, dp2, sp4, pv,
    /// a_even:<n>, a_odd:<n>, p2, continuum, conjecture).
    #[arg(long, global = true)]
    preset: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write tables (or the report) to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification suites (default: coxeter; `all` for the standard set).
    Verify {
        suites: Vec<String>,
        /// Use A(1)_l with the cyclic orientation.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        family: Option<String>,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
    /// Print images, evolution formulas, cocycle values, flow equations.
    ///
    /// Targets: `word <w>`, `T<i>`, `T<i>^-1`, `cocycle --word <w> --weight
    /// <lambda>`, `dal`, `g --k <k> --r <r>`, `family <name>`.
    Formula {
        target: String,
        arg: Option<String>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Iterate a dP2 or shift-operator orbit; writes CSV.
    Orbit {
        /// dp2 or shift.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        /// Use floating point instead of exact rationals.
        #[arg(long)]
        float: bool,
        /// Index i of T_i for `--kind shift`.
        #[arg(long)]
        shift: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Integrate a flow (CSV), or run the continuum-limit comparison.
    Flow {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        continuum: bool,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        x1: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Check that phi_w(Lambda_k) is an integer polynomial for short words.
    ScanConjecture {
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Command::Verify { list: true, .. } = &cli.command {
        for (name, what) in verify::SUITES {
            println!("{name:<16} {what}");
        }
        return Ok(true);
    }
    let mut cfg = RunConfig::load(cli.config.as_deref(), cli.preset.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.verify.seed = seed;
    }
    let sink = Sink {
        format: cli.format,
        out: cli.out.clone(),
    };
    let set_l = |cfg: &mut RunConfig, l: Option<usize>| -> Result<(), CliError> {
        if let Some(l) = l {
            cfg.root = cfg.root.with_l(l);
            cfg.root.build()?;
        }
        Ok(())
    };
    match cli.command {
        Command::Verify { suites, l, family, .. } => {
            set_l(&mut cfg, l)?;
            if let Some(f) = family {
                cfg.flow.family = f;
            }
            let suites = if suites.is_empty() { cfg.verify.suites.clone() } else { suites };
            let r = verify::run(&cfg, &suites)?;
            sink.report(&r.render(sink.format))?;
            Ok(r.failures() == 0)
        }
        Command::Formula {
            target,
            arg,
            word,
            weight,
            k,
            r,
            l,
        } => {
            set_l(&mut cfg, l)?;
            let t = formula::Target::parse(&target, arg.as_deref(), word.as_deref(), weight.as_deref(), k, r)?;
            sink.report(&formula::run(&cfg, &t, sink.format)?)?;
            Ok(true)
        }
        Command::Orbit {
            kind,
            steps,
            float,
            shift,
            l,
        } => {
            set_l(&mut cfg, l)?;
            if let Some(k) = kind {
                cfg.orbit.kind = k;
            }
            if let Some(s) = steps {
                cfg.orbit.steps = s;
            }
            if float {
                cfg.orbit.exact = false;
            }
            if let Some(i) = shift {
                cfg.orbit.shift = i;
            }
            orbit::run(&cfg, &sink)
        }
        Command::Flow {
            family,
            continuum,
            eps,
            x1,
            step,
        } => {
            if let Some(f) = family {
                cfg.flow.family = f;
            }
            if let Some(e) = eps {
                cfg.continuum.eps = e;
            }
            if let Some(x) = x1 {
                cfg.flow.x1 = x;
            }
            if let Some(h) = step {
                cfg.flow.step = h;
            }
            if continuum {
                flow::continuum(&cfg, &sink)
            } else {
                flow::integrate(&cfg, &sink)
            }
        }
        Command::ScanConjecture { max_len, l } => {
            set_l(&mut cfg, l)?;
            let (text, ok) = scan::run(&cfg, max_len, sink.format)?;
            sink.report(&text)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
