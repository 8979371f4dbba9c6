//! Command-line front end.
//!
//! ```text
//! meanking check    --config PATH
//! meanking povm     --config PATH --out PATH [--r REAL]
//! meanking simulate --config PATH [--seed UINT] [--trials UINT] [--r REAL]
//! meanking sweep    --family random-uniform --count N [--seed UINT]
//! meanking sweep    --family tilted-planar --eps-range A:B:STEP
//! meanking play     --config PATH [--seed UINT] [--r REAL]
//! ```
//!
//! Exit codes: 0 success/feasible, 1 infeasible, 2 degenerate,
//! 3 parse or usage error.

use std::process::ExitCode;

use meanking_core::povm::{build_povm, feasibility, verify_povm, DegeneracyClass};
use meanking_core::protocol::{run, ProtocolConfig};

use meanking_cli::config::{load_config, RunConfig};
use meanking_cli::{
    exit_code_for_core_error, play, report, textfmt, EXIT_DEGENERATE, EXIT_INFEASIBLE, EXIT_OK,
    EXIT_USAGE,
};

const USAGE: &str = "usage:
  meanking check    --config PATH
  meanking povm     --config PATH --out PATH [--r REAL]
  meanking simulate --config PATH [--seed UINT] [--trials UINT] [--r REAL]
  meanking sweep    --family random-uniform --count N [--seed UINT]
  meanking sweep    --family tilted-planar --eps-range A:B:STEP
  meanking play     --config PATH [--seed UINT] [--r REAL]

exit codes: 0 success/feasible, 1 infeasible, 2 degenerate, 3 parse/usage error";

#[derive(Debug, Default)]
struct Flags {
    config: Option<String>,
    out: Option<String>,
    r: Option<f64>,
    seed: Option<u64>,
    trials: Option<u64>,
    family: Option<String>,
    eps_range: Option<(f64, f64, f64)>,
    count: Option<u64>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let mut value = || {
            it.next()
                .cloned()
                .ok_or_else(|| format!("flag {flag} requires a value"))
        };
        match flag.as_str() {
            "--config" => flags.config = Some(value()?),
            "--out" => flags.out = Some(value()?),
            "--r" => flags.r = Some(textfmt::parse_f64(&value()?)?),
            "--seed" => flags.seed = Some(textfmt::parse_u64(&value()?)?),
            "--trials" => flags.trials = Some(textfmt::parse_u64(&value()?)?),
            "--family" => flags.family = Some(value()?),
            "--count" => flags.count = Some(textfmt::parse_u64(&value()?)?),
            "--eps-range" => {
                let raw = value()?;
                let parts: Vec<&str> = raw.split(':').collect();
                if parts.len() != 3 {
                    return Err(format!("bad --eps-range {raw:?}: expected A:B:STEP"));
                }
                flags.eps_range = Some((
                    textfmt::parse_f64(parts[0])?,
                    textfmt::parse_f64(parts[1])?,
                    textfmt::parse_f64(parts[2])?,
                ));
            }
            other => return Err(format!("unknown flag {other}")),
        }
    }
    Ok(flags)
}

fn require_config(flags: &Flags) -> Result<RunConfig, String> {
    let path = flags.config.as_deref().ok_or("missing --config PATH")?;
    let mut cfg = load_config(path)?;
    if let Some(r) = flags.r {
        cfg.r = r;
    }
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = flags.trials {
        cfg.trials = trials;
    }
    Ok(cfg)
}

fn cmd_check(flags: &Flags) -> Result<u8, String> {
    let cfg = require_config(flags)?;
    let rep = feasibility(&cfg.triple);
    print!("{}", report::render_check_report(&cfg.triple, &rep));
    Ok(if rep.degeneracy != DegeneracyClass::Independent {
        EXIT_DEGENERATE
    } else if !rep.feasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    })
}

fn cmd_povm(flags: &Flags) -> Result<u8, String> {
    let cfg = require_config(flags)?;
    let out_path = flags.out.as_deref().ok_or("missing --out PATH")?;
    match build_povm(&cfg.triple, cfg.r) {
        Ok(povm) => {
            let diagnostics = verify_povm(&povm);
            let text = report::render_povm_file(&povm, &diagnostics);
            std::fs::write(out_path, text).map_err(|e| format!("cannot write {out_path}: {e}"))?;
            println!(
                "wrote {out_path} (completeness residual {})",
                textfmt::fmt_f64(diagnostics.completeness_residual)
            );
            Ok(EXIT_OK)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(exit_code_for_core_error(&e))
        }
    }
}

fn cmd_simulate(flags: &Flags) -> Result<u8, String> {
    let cfg = require_config(flags)?;
    let povm = match build_povm(&cfg.triple, cfg.r) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(exit_code_for_core_error(&e));
        }
    };
    let exact = verify_povm(&povm).prob_table;
    let out_run = run(&ProtocolConfig {
        triple: cfg.triple,
        r: cfg.r,
        seed: cfg.seed,
        trials: cfg.trials,
    })
    .map_err(|e| format!("simulation failed: {e}"))?;
    print!(
        "{}",
        report::render_simulate_report(&cfg.triple, cfg.r, cfg.seed, &out_run, &exact)
    );
    Ok(EXIT_OK)
}

fn cmd_sweep(flags: &Flags) -> Result<u8, String> {
    let family = flags.family.as_deref().ok_or("missing --family NAME")?;
    match family {
        "random-uniform" => {
            let count = flags.count.ok_or("random-uniform requires --count N")?;
            print!(
                "{}",
                report::sweep_random_uniform(count, flags.seed.unwrap_or(0))
            );
            Ok(EXIT_OK)
        }
        "tilted-planar" => {
            let (a, b, step) = flags
                .eps_range
                .ok_or("tilted-planar requires --eps-range A:B:STEP")?;
            print!("{}", report::sweep_tilted_planar(a, b, step)?);
            Ok(EXIT_OK)
        }
        other => Err(format!("unknown sweep family {other:?}")),
    }
}

fn cmd_play(flags: &Flags) -> Result<u8, String> {
    let cfg = require_config(flags)?;
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    play::play(&cfg, stdin.lock(), &mut stdout).map_err(|e| format!("io error: {e}"))
}

fn dispatch(args: &[String]) -> Result<u8, String> {
    let Some(command) = args.first() else {
        return Err("missing command".into());
    };
    let flags = parse_flags(&args[1..])?;
    match command.as_str() {
        "check" => cmd_check(&flags),
        "povm" => cmd_povm(&flags),
        "simulate" => cmd_simulate(&flags),
        "sweep" => cmd_sweep(&flags),
        "play" => cmd_play(&flags),
        other => Err(format!("unknown command {other:?}")),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            eprintln!("{USAGE}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
