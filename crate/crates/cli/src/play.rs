//! Interactive demonstration: the user plays Bob against Alice's
//! measurement.

use std::io::{BufRead, Write};

use meanking_core::povm::build_povm;
use meanking_core::protocol::{alice_measure, bob_measure, infer};
use meanking_core::quantum::OutcomeSign;
use meanking_core::rng::{SubStream, STREAM_ALICE_OUTCOME, STREAM_BOB_BETA};
use meanking_core::states::bob_post_state;

use crate::config::RunConfig;

enum Command {
    Round {
        k: usize,
        forced: Option<OutcomeSign>,
    },
    Quit,
    Invalid,
}

fn parse_command(line: &str) -> Command {
    let t = line.trim();
    if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("quit") {
        return Command::Quit;
    }
    let mut parts = t.split_whitespace();
    let k = match parts.next().and_then(|w| w.parse::<usize>().ok()) {
        Some(k @ 1..=3) => k,
        _ => return Command::Invalid,
    };
    let forced = match parts.next() {
        None => None,
        Some("+") | Some("+1") => Some(OutcomeSign::Plus),
        Some("-") | Some("-1") => Some(OutcomeSign::Minus),
        Some(_) => return Command::Invalid,
    };
    if parts.next().is_some() {
        return Command::Invalid;
    }
    Command::Round { k, forced }
}

/// Runs the interactive loop. Returns the process exit code.
pub fn play<R: BufRead, W: Write>(
    config: &RunConfig,
    input: R,
    out: &mut W,
) -> std::io::Result<u8> {
    let povm = match build_povm(&config.triple, config.r) {
        Ok(p) => p,
        Err(e) => {
            writeln!(out, "cannot build measurement: {e}")?;
            return Ok(crate::exit_code_for_core_error(&e));
        }
    };
    let beta_stream = SubStream::new(config.seed, STREAM_BOB_BETA);
    let alice_stream = SubStream::new(config.seed, STREAM_ALICE_OUTCOME);

    writeln!(out, "you are Bob; Alice has prepared the singlet")?;
    writeln!(
        out,
        "pick an observable: 1-3, optionally followed by + or - to force your outcome; q quits"
    )?;
    let mut round = 0u64;
    write!(out, "k> ")?;
    out.flush()?;
    for line in input.lines() {
        let line = line?;
        match parse_command(&line) {
            Command::Quit => break,
            Command::Invalid => {
                writeln!(out, "enter 1, 2, or 3 (optionally with + or -), or q")?;
            }
            Command::Round { k, forced } => {
                let n = config.triple.get(k - 1);
                let (beta, post) = match forced {
                    Some(beta) => (beta, bob_post_state(n, beta)),
                    None => bob_measure(n, beta_stream.u64_at(round)),
                };
                let outcome = alice_measure(&post, &povm, alice_stream.f64_at(round))
                    .expect("validated measurement cannot leak probability");
                let inferred = infer(outcome, k);
                writeln!(
                    out,
                    "round {}: you measured n{k}·σ and got β = {beta}",
                    round + 1
                )?;
                writeln!(out, "alice's outcome: {outcome}")?;
                writeln!(out, "alice infers β = {inferred}")?;
                writeln!(
                    out,
                    "verdict: {}",
                    if inferred == beta { "correct" } else { "WRONG" }
                )?;
                round += 1;
            }
        }
        write!(out, "k> ")?;
        out.flush()?;
    }
    writeln!(out, "goodbye")?;
    Ok(0)
}
