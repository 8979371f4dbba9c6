//! Serialized output formats: feasibility reports, measurement files,
//! simulation reports, and sweep tables. All formats are deterministic
//! functions of their inputs, so identical configurations produce
//! byte-identical output.

use std::fmt::Write as _;

use meanking_core::povm::{
    classify_degenerate, feasibility, DegeneracyReport, FeasibilityReport, Label, PovmDiagnostics,
    PovmSet, VectorTriple,
};
use meanking_core::protocol::{RunOutput, RunStatistics};
use meanking_core::quantum::{c, Operator4, OutcomeSign};
use meanking_core::rng::SubStream;

use crate::textfmt::{
    fmt_bool, fmt_f64, fmt_triple, parse_f64, parse_sign_triple, parse_triple_list,
};

fn triple_components(t: &VectorTriple) -> String {
    format!(
        "[{}, {}, {}]",
        fmt_triple(&t.get(0).components()),
        fmt_triple(&t.get(1).components()),
        fmt_triple(&t.get(2).components())
    )
}

// ---------------------------------------------------------------------------
// feasibility report

pub fn render_check_report(t: &VectorTriple, rep: &FeasibilityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format = meanking-check-v1");
    let _ = writeln!(out, "vectors = {}", triple_components(t));
    let _ = writeln!(out, "degeneracy = {}", rep.degeneracy);
    let _ = writeln!(out, "feasible = {}", fmt_bool(rep.feasible));
    let _ = writeln!(
        out,
        "sufficient_condition = {}",
        fmt_bool(rep.sufficient_condition_holds)
    );
    for (name, value) in ["pp", "pm", "mp", "mm"].iter().zip(rep.sign_norms) {
        let _ = writeln!(out, "sign_norm_{name} = {}", fmt_f64(value));
    }
    let _ = writeln!(out, "min_sign_norm = {}", fmt_f64(rep.min_sign_norm()));
    let _ = writeln!(out, "r_min = {}", fmt_f64(rep.r_interval.lo));
    let _ = writeln!(out, "r_max = {}", fmt_f64(rep.r_interval.hi));
    match classify_degenerate(t) {
        DegeneracyReport::Independent { det } => {
            let _ = writeln!(out, "det = {}", fmt_f64(det));
        }
        DegeneracyReport::DependentNonparallel { x, y, residual, .. } => {
            let _ = writeln!(out, "witness_x = {}", fmt_f64(x));
            let _ = writeln!(out, "witness_y = {}", fmt_f64(y));
            let _ = writeln!(out, "witness_residual = {}", fmt_f64(residual));
        }
        DegeneracyReport::ContainsParallelPair { first, second } => {
            let _ = writeln!(out, "parallel_pair = [{first}, {second}]");
        }
    }
    out
}

// ---------------------------------------------------------------------------
// measurement files

/// Serializes a measurement set: per element the label, coefficient, sign
/// vector, minimal eigenvalue, and the 4×4 matrix as 16 (re, im) pairs in
/// row-major order over the declared product basis.
pub fn render_povm_file(p: &PovmSet, d: &PovmDiagnostics) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format = meanking-povm-v1");
    let _ = writeln!(out, "vectors = {}", triple_components(p.triple()));
    let _ = writeln!(out, "r = {}", fmt_f64(p.coefficients().r()));
    let _ = writeln!(
        out,
        "completeness_residual = {}",
        fmt_f64(d.completeness_residual)
    );
    for label in Label::ALL {
        let _ = writeln!(out, "element = {label}");
        let _ = writeln!(
            out,
            "coefficient = {}",
            fmt_f64(p.coefficients().get(label))
        );
        let s = label.signs();
        let _ = writeln!(out, "signs = [{}, {}, {}]", s[0], s[1], s[2]);
        let _ = writeln!(
            out,
            "min_eigenvalue = {}",
            fmt_f64(d.min_eigenvalues[label.index()])
        );
        let mut entries = String::new();
        for i in 0..4 {
            for j in 0..4 {
                let z = p.element(label).entry(i, j);
                if !entries.is_empty() {
                    entries.push(' ');
                }
                let _ = write!(entries, "{} {}", fmt_f64(z.re), fmt_f64(z.im));
            }
        }
        let _ = writeln!(out, "matrix = {entries}");
    }
    out
}

#[derive(Debug, Clone)]
pub struct ParsedElement {
    pub label: Label,
    pub coefficient: f64,
    pub signs: [i8; 3],
    pub min_eigenvalue: f64,
    pub matrix: Operator4,
}

#[derive(Debug, Clone)]
pub struct ParsedPovm {
    pub vectors: [[f64; 3]; 3],
    pub r: f64,
    pub completeness_residual: f64,
    pub elements: Vec<ParsedElement>,
}

/// Accumulator for one element block while parsing.
type PartialElement = (
    Label,
    Option<f64>,
    Option<[i8; 3]>,
    Option<f64>,
    Option<Operator4>,
);

/// Parses a file produced by [`render_povm_file`].
pub fn parse_povm_file(text: &str) -> Result<ParsedPovm, String> {
    let mut vectors = None;
    let mut r = None;
    let mut completeness = None;
    let mut elements: Vec<ParsedElement> = Vec::new();
    let mut current: Option<PartialElement> = None;

    let finish = |cur: Option<PartialElement>,
                  elements: &mut Vec<ParsedElement>|
     -> Result<(), String> {
        if let Some((label, coeff, signs, mineig, matrix)) = cur {
            elements.push(ParsedElement {
                label,
                coefficient: coeff.ok_or(format!("element {label} missing coefficient"))?,
                signs: signs.ok_or(format!("element {label} missing signs"))?,
                min_eigenvalue: mineig.ok_or(format!("element {label} missing min_eigenvalue"))?,
                matrix: matrix.ok_or(format!("element {label} missing matrix"))?,
            });
        }
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "format" => {
                if value != "meanking-povm-v1" {
                    return Err(format!("unsupported format {value:?}"));
                }
            }
            "vectors" => vectors = Some(parse_triple_list(value)?),
            "r" => r = Some(parse_f64(value)?),
            "completeness_residual" => completeness = Some(parse_f64(value)?),
            "element" => {
                finish(current.take(), &mut elements)?;
                let ch = value
                    .chars()
                    .next()
                    .filter(|_| value.len() == 1)
                    .ok_or_else(|| format!("line {}: bad element label", lineno + 1))?;
                let label = Label::from_char(ch)
                    .ok_or_else(|| format!("line {}: bad element label {ch:?}", lineno + 1))?;
                current = Some((label, None, None, None, None));
            }
            "coefficient" => {
                let cur = current
                    .as_mut()
                    .ok_or_else(|| format!("line {}: coefficient outside element", lineno + 1))?;
                cur.1 = Some(parse_f64(value)?);
            }
            "signs" => {
                let cur = current
                    .as_mut()
                    .ok_or_else(|| format!("line {}: signs outside element", lineno + 1))?;
                cur.2 = Some(parse_sign_triple(value)?);
            }
            "min_eigenvalue" => {
                let cur = current.as_mut().ok_or_else(|| {
                    format!("line {}: min_eigenvalue outside element", lineno + 1)
                })?;
                cur.3 = Some(parse_f64(value)?);
            }
            "matrix" => {
                let cur = current
                    .as_mut()
                    .ok_or_else(|| format!("line {}: matrix outside element", lineno + 1))?;
                let numbers: Vec<f64> = value
                    .split_whitespace()
                    .map(parse_f64)
                    .collect::<Result<_, _>>()?;
                if numbers.len() != 32 {
                    return Err(format!(
                        "line {}: expected 32 numbers, got {}",
                        lineno + 1,
                        numbers.len()
                    ));
                }
                let mut entries = [[c(0.0, 0.0); 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        let base = 2 * (4 * i + j);
                        entries[i][j] = c(numbers[base], numbers[base + 1]);
                    }
                }
                cur.4 =
                    Some(Operator4::from_entries(entries).map_err(|e| format!("bad matrix: {e}"))?);
            }
            other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
        }
    }
    finish(current.take(), &mut elements)?;
    if elements.len() != 8 {
        return Err(format!("expected 8 elements, got {}", elements.len()));
    }
    Ok(ParsedPovm {
        vectors: vectors.ok_or("missing vectors")?,
        r: r.ok_or("missing r")?,
        completeness_residual: completeness.ok_or("missing completeness_residual")?,
        elements,
    })
}

// ---------------------------------------------------------------------------
// simulation reports

/// Renders a full run: header, accuracy, and per-(k, β) sections with raw
/// counts plus exact and empirical outcome distributions.
pub fn render_simulate_report(
    triple: &VectorTriple,
    r: f64,
    seed: u64,
    out_run: &RunOutput,
    exact: &[[f64; 8]; 6],
) -> String {
    let stats: &RunStatistics = &out_run.statistics;
    let mut out = String::new();
    let _ = writeln!(out, "format = meanking-simulate-v1");
    let _ = writeln!(out, "vectors = {}", triple_components(triple));
    let _ = writeln!(out, "r = {}", fmt_f64(r));
    let _ = writeln!(out, "seed = {seed}");
    let _ = writeln!(out, "trials = {}", stats.total_trials);
    let _ = writeln!(out, "correct = {}", stats.correct_trials);
    match stats.accuracy() {
        Some(a) => {
            let _ = writeln!(out, "accuracy = {}", fmt_f64(a));
        }
        None => {
            let _ = writeln!(out, "accuracy = undefined");
        }
    }
    let _ = writeln!(out, "max_z_score = {}", fmt_f64(stats.max_z_score(exact)));
    let _ = writeln!(
        out,
        "zero_cells_empty = {}",
        fmt_bool(stats.zero_cells_empty(exact))
    );
    for k in 1..=3usize {
        for (b, beta) in [OutcomeSign::Plus, OutcomeSign::Minus]
            .into_iter()
            .enumerate()
        {
            let _ = writeln!(out, "[row k={k} beta={beta}]");
            let _ = writeln!(out, "row_trials = {}", stats.row_trials(k, beta));
            let counts: Vec<String> = Label::ALL
                .iter()
                .map(|l| stats.count(k, beta, *l).to_string())
                .collect();
            let _ = writeln!(out, "counts = {}", counts.join(" "));
            let exact_row: Vec<String> =
                exact[2 * (k - 1) + b].iter().map(|p| fmt_f64(*p)).collect();
            let _ = writeln!(out, "exact = {}", exact_row.join(" "));
            let empirical: Vec<String> = match stats.row_frequencies(k, beta) {
                Some(freqs) => freqs.iter().map(|f| fmt_f64(*f)).collect(),
                None => Label::ALL.iter().map(|_| "undefined".to_string()).collect(),
            };
            let _ = writeln!(out, "empirical = {}", empirical.join(" "));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// sweeps

pub const SWEEP_HEADER: &str = "n1x,n1y,n1z,n2x,n2y,n2z,n3x,n3y,n3z,\
sign_norm_pp,sign_norm_pm,sign_norm_mp,sign_norm_mm,feasible,sufficient_condition,r_min,r_max";

fn sweep_row(t: &VectorTriple) -> String {
    let rep = feasibility(t);
    let mut fields: Vec<String> = Vec::with_capacity(17);
    for k in 0..3 {
        for x in t.get(k).components() {
            fields.push(fmt_f64(x));
        }
    }
    for n in rep.sign_norms {
        fields.push(fmt_f64(n));
    }
    fields.push(fmt_bool(rep.feasible).to_string());
    fields.push(fmt_bool(rep.sufficient_condition_holds).to_string());
    fields.push(fmt_f64(rep.r_interval.lo));
    fields.push(fmt_f64(rep.r_interval.hi));
    fields.join(",")
}

/// `count` uniform random triples drawn from the given seed.
pub fn sweep_random_uniform(count: u64, seed: u64) -> String {
    let stream = SubStream::new(seed, 0);
    let mut out = String::with_capacity(count as usize * 128);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for i in 0..count {
        out.push_str(&sweep_row(&VectorTriple::random(&stream, i)));
        out.push('\n');
    }
    out
}

/// The planar 120° family tilted by ε from `start` to `end` (inclusive up to
/// half a step) in increments of `step`.
pub fn sweep_tilted_planar(start: f64, end: f64, step: f64) -> Result<String, String> {
    // `!(step > 0.0)` also rejects NaN
    if !(step > 0.0) || !start.is_finite() || !end.is_finite() || end < start {
        return Err("bad eps range: expected START:END:STEP with positive step".into());
    }
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    let mut i = 0u64;
    loop {
        let eps = start + step * i as f64;
        if eps > end + step / 2.0 {
            break;
        }
        out.push_str(&sweep_row(&meanking_core::povm::tilted_planar_triple(eps)));
        out.push('\n');
        i += 1;
    }
    Ok(out)
}
