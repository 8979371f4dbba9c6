//! Run configuration files.
//!
//! A config is a plain-text document of `key = value` lines; `#` starts a
//! comment. Recognized keys:
//!
//! ```text
//! vectors = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]   # required: three directions
//! r       = 0.0                                  # optional, default 0
//! seed    = 42                                   # optional, default 0
//! trials  = 100000                               # optional, default 100000
//! ```
//!
//! Direction vectors must be unit to within 1e-9; enforcement happens at
//! load time.

use meanking_core::povm::VectorTriple;

use crate::textfmt::{parse_f64, parse_triple_list, parse_u64};

pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub triple: VectorTriple,
    pub r: f64,
    pub seed: u64,
    pub trials: u64,
}

/// Splits a document into `(key, value)` pairs, rejecting unknown keys,
/// duplicates, and malformed lines.
pub fn parse_config(text: &str) -> Result<RunConfig, String> {
    let mut vectors: Option<[[f64; 3]; 3]> = None;
    let mut r: Option<f64> = None;
    let mut seed: Option<u64> = None;
    let mut trials: Option<u64> = None;

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
        let dup = |name: &str| format!("line {}: duplicate key `{name}`", lineno + 1);
        match key {
            "vectors" => {
                if vectors.is_some() {
                    return Err(dup("vectors"));
                }
                vectors = Some(
                    parse_triple_list(value).map_err(|e| format!("line {}: {e}", lineno + 1))?,
                );
            }
            "r" => {
                if r.is_some() {
                    return Err(dup("r"));
                }
                r = Some(parse_f64(value).map_err(|e| format!("line {}: {e}", lineno + 1))?);
            }
            "seed" => {
                if seed.is_some() {
                    return Err(dup("seed"));
                }
                seed = Some(parse_u64(value).map_err(|e| format!("line {}: {e}", lineno + 1))?);
            }
            "trials" => {
                if trials.is_some() {
                    return Err(dup("trials"));
                }
                let t = parse_u64(value).map_err(|e| format!("line {}: {e}", lineno + 1))?;
                if t == 0 {
                    return Err(format!("line {}: trials must be positive", lineno + 1));
                }
                trials = Some(t);
            }
            other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
        }
    }

    let components = vectors.ok_or("missing required key `vectors`")?;
    let triple =
        VectorTriple::from_components(components).map_err(|e| format!("invalid vectors: {e}"))?;
    Ok(RunConfig {
        triple,
        r: r.unwrap_or(0.0),
        seed: seed.unwrap_or(0),
        trials: trials.unwrap_or(DEFAULT_TRIALS),
    })
}

pub fn load_config(path: &str) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    parse_config(&text)
}
