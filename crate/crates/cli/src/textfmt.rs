//! Numeric serialization helpers.
//!
//! Floats are emitted in scientific notation with 17 significant digits,
//! which round-trips every finite f64 exactly.

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| format!("bad float {s:?}: {e}"))
}

pub fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim()
        .parse::<u64>()
        .map_err(|e| format!("bad integer {s:?}: {e}"))
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// `[a, b, c]` with 17-significant-digit entries.
pub fn fmt_triple(v: &[f64; 3]) -> String {
    format!("[{}, {}, {}]", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]))
}

/// Splits `s` on `sep` at depth zero with respect to square brackets.
fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn strip_brackets(s: &str) -> Result<&str, String> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        Ok(inner)
    } else {
        Err(format!("expected a bracketed list, got {t:?}"))
    }
}

/// Parses `[x, y, z]`.
pub fn parse_number_triple(s: &str) -> Result<[f64; 3], String> {
    let inner = strip_brackets(s)?;
    let parts = split_top_level(inner, ',');
    if parts.len() != 3 {
        return Err(format!("expected 3 entries, got {}", parts.len()));
    }
    Ok([
        parse_f64(parts[0])?,
        parse_f64(parts[1])?,
        parse_f64(parts[2])?,
    ])
}

/// Parses `[[..], [..], [..]]` into three numeric triples.
pub fn parse_triple_list(s: &str) -> Result<[[f64; 3]; 3], String> {
    let inner = strip_brackets(s)?;
    let parts = split_top_level(inner, ',');
    if parts.len() != 3 {
        return Err(format!("expected 3 triples, got {}", parts.len()));
    }
    Ok([
        parse_number_triple(parts[0])?,
        parse_number_triple(parts[1])?,
        parse_number_triple(parts[2])?,
    ])
}

/// Parses `[a, b, c]` of signed integers.
pub fn parse_sign_triple(s: &str) -> Result<[i8; 3], String> {
    let inner = strip_brackets(s)?;
    let parts = split_top_level(inner, ',');
    if parts.len() != 3 {
        return Err(format!("expected 3 signs, got {}", parts.len()));
    }
    let mut out = [0i8; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse::<i8>()
            .map_err(|e| format!("bad sign {p:?}: {e}"))?;
        if *o != 1 && *o != -1 {
            return Err(format!("sign must be 1 or -1, got {o}"));
        }
    }
    Ok(out)
}
