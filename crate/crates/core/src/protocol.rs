//! Deterministic Monte Carlo runner for the three-step protocol.
//!
//! One trial: Bob picks an observable `k` and a measurement outcome `β`
//! (both fair draws), Alice samples her eight-outcome measurement on the
//! resulting two-particle state and, told `k`, infers `β`. Randomness comes
//! from per-purpose counter streams (see [`crate::rng`]), so a `(config,
//! seed)` pair reproduces the run bit-for-bit regardless of batching.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::povm::{build_povm, Label, PovmSet, VectorTriple};
use crate::quantum::{OutcomeSign, State4};
use crate::rng::{SubStream, STREAM_ALICE_OUTCOME, STREAM_BOB_BETA, STREAM_BOB_CHOICE};
use crate::states::bob_post_state;
use crate::vec3::UnitVector3;

/// Probabilities below this are clamped to exactly zero before sampling, so
/// outcomes the measurement excludes are structurally unreachable rather
/// than merely improbable.
pub const STRUCTURAL_ZERO_CUTOFF: f64 = 1e-12;

/// Parameters of a protocol run.
#[derive(Debug, Clone, Copy)]
pub struct ProtocolConfig {
    pub triple: VectorTriple,
    pub r: f64,
    pub seed: u64,
    pub trials: u64,
}

/// One completed round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolTranscript {
    pub trial: u64,
    /// Bob's chosen observable, 1..=3.
    pub bob_choice: usize,
    pub true_beta: OutcomeSign,
    pub alice_outcome: Label,
    pub inferred_beta: OutcomeSign,
    pub correct: bool,
}

/// Aggregated outcome counts.
#[derive(Debug, Clone, Default)]
pub struct RunStatistics {
    /// counts[k][β][K] with k 0-based and β index 0 = +1, 1 = −1.
    counts: [[[u64; 8]; 2]; 3],
    pub total_trials: u64,
    pub correct_trials: u64,
}

impl RunStatistics {
    fn record(&mut self, t: &ProtocolTranscript) {
        let b = if t.true_beta == OutcomeSign::Plus {
            0
        } else {
            1
        };
        self.counts[t.bob_choice - 1][b][t.alice_outcome.index()] += 1;
        self.total_trials += 1;
        if t.correct {
            self.correct_trials += 1;
        }
    }

    /// Fraction of correct inferences; absent for an empty run.
    pub fn accuracy(&self) -> Option<f64> {
        if self.total_trials == 0 {
            None
        } else {
            Some(self.correct_trials as f64 / self.total_trials as f64)
        }
    }

    /// Count for a cell; `bob_choice` is 1..=3.
    pub fn count(&self, bob_choice: usize, beta: OutcomeSign, outcome: Label) -> u64 {
        let b = if beta == OutcomeSign::Plus { 0 } else { 1 };
        self.counts[bob_choice - 1][b][outcome.index()]
    }

    /// Trials that landed in a given (k, β) row.
    pub fn row_trials(&self, bob_choice: usize, beta: OutcomeSign) -> u64 {
        let b = if beta == OutcomeSign::Plus { 0 } else { 1 };
        self.counts[bob_choice - 1][b].iter().sum()
    }

    /// Empirical outcome frequencies for a (k, β) row; `None` if the row is
    /// empty.
    pub fn row_frequencies(&self, bob_choice: usize, beta: OutcomeSign) -> Option<[f64; 8]> {
        let n = self.row_trials(bob_choice, beta);
        if n == 0 {
            return None;
        }
        let b = if beta == OutcomeSign::Plus { 0 } else { 1 };
        let mut out = [0.0; 8];
        for (i, &count) in self.counts[bob_choice - 1][b].iter().enumerate() {
            out[i] = count as f64 / n as f64;
        }
        Some(out)
    }

    /// Largest binomial z-score of the empirical frequencies against an
    /// exact 6×8 probability table (rows ordered as in
    /// [`crate::povm::verify_povm`]). Cells with probability 0 or 1 are
    /// excluded; pair with [`RunStatistics::zero_cells_empty`].
    pub fn max_z_score(&self, exact: &[[f64; 8]; 6]) -> f64 {
        let mut worst = 0.0f64;
        for k in 1..=3usize {
            for (b, beta) in [OutcomeSign::Plus, OutcomeSign::Minus]
                .into_iter()
                .enumerate()
            {
                let n = self.row_trials(k, beta);
                if n == 0 {
                    continue;
                }
                let freqs = self.row_frequencies(k, beta).expect("nonempty row");
                for i in 0..8 {
                    let p = exact[2 * (k - 1) + b][i];
                    if p <= 0.0 || p >= 1.0 {
                        continue;
                    }
                    let sigma = libm::sqrt(p * (1.0 - p) / n as f64);
                    worst = worst.max(libm::fabs(freqs[i] - p) / sigma);
                }
            }
        }
        worst
    }

    /// True when every cell with exact probability below the structural-zero
    /// cutoff has an exactly zero count.
    pub fn zero_cells_empty(&self, exact: &[[f64; 8]; 6]) -> bool {
        for k in 1..=3usize {
            for (b, beta) in [OutcomeSign::Plus, OutcomeSign::Minus]
                .into_iter()
                .enumerate()
            {
                for (i, label) in Label::ALL.iter().enumerate() {
                    if exact[2 * (k - 1) + b][i] < STRUCTURAL_ZERO_CUTOFF
                        && self.count(k, beta, *label) != 0
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub statistics: RunStatistics,
    pub transcripts: Vec<ProtocolTranscript>,
}

/// Alice's inference rule: outcome `K` excludes `β = (S^(K))_k`, so she
/// announces the opposite sign. `bob_choice` is 1..=3.
pub fn infer(outcome: Label, bob_choice: usize) -> OutcomeSign {
    let s = outcome.signs()[bob_choice - 1];
    OutcomeSign::from_value(-s).expect("sign table entries are ±1")
}

/// Bob's measurement: a fair β from the draw (the singlet marginal is
/// maximally mixed for every direction) and his post-measurement state.
pub fn bob_measure(n: &UnitVector3, draw: u64) -> (OutcomeSign, State4) {
    let beta = if draw & 1 == 0 {
        OutcomeSign::Plus
    } else {
        OutcomeSign::Minus
    };
    (beta, bob_post_state(n, beta))
}

/// Samples Alice's outcome from the exact distribution `⟨ψ|E_K|ψ⟩` using a
/// uniform draw in [0, 1). Probabilities below
/// [`STRUCTURAL_ZERO_CUTOFF`] are clamped to exactly zero and the remaining
/// mass renormalized.
pub fn alice_measure(post: &State4, povm: &PovmSet, uniform: f64) -> Result<Label> {
    let raw = povm.outcome_probabilities(post)?;
    let sum: f64 = raw.iter().sum();
    if libm::fabs(sum - 1.0) > 1e-8 {
        return Err(Error::ProbabilityLeak { sum });
    }
    let mut clamped = raw;
    for p in clamped.iter_mut() {
        if *p < STRUCTURAL_ZERO_CUTOFF {
            *p = 0.0;
        }
    }
    let kept: f64 = clamped.iter().sum();
    let target = uniform * kept;
    let mut acc = 0.0;
    let mut last_nonzero = None;
    for (i, &p) in clamped.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        acc += p;
        last_nonzero = Some(i);
        if target < acc {
            return Ok(Label::from_index(i).expect("index in range"));
        }
    }
    // fp tail: land on the last reachable outcome
    last_nonzero
        .map(|i| Label::from_index(i).expect("index in range"))
        .ok_or(Error::ProbabilityLeak { sum: kept })
}

/// Runs the full protocol. Every transcript of a valid configuration has
/// `correct = true`; zero-probability outcomes are unreachable by
/// construction.
pub fn run(config: &ProtocolConfig) -> Result<RunOutput> {
    let povm = build_povm(&config.triple, config.r)?;
    let choice_stream = SubStream::new(config.seed, STREAM_BOB_CHOICE);
    let beta_stream = SubStream::new(config.seed, STREAM_BOB_BETA);
    let alice_stream = SubStream::new(config.seed, STREAM_ALICE_OUTCOME);

    let mut statistics = RunStatistics::default();
    let mut transcripts = Vec::with_capacity(config.trials.min(1 << 24) as usize);
    for trial in 0..config.trials {
        let bob_choice = (choice_stream.u64_at(trial) % 3) as usize + 1;
        let (true_beta, post) =
            bob_measure(config.triple.get(bob_choice - 1), beta_stream.u64_at(trial));
        let alice_outcome = alice_measure(&post, &povm, alice_stream.f64_at(trial))?;
        let inferred_beta = infer(alice_outcome, bob_choice);
        let transcript = ProtocolTranscript {
            trial,
            bob_choice,
            true_beta,
            alice_outcome,
            inferred_beta,
            correct: inferred_beta == true_beta,
        };
        statistics.record(&transcript);
        transcripts.push(transcript);
    }
    Ok(RunOutput {
        statistics,
        transcripts,
    })
}
