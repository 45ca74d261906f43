//! The set-specification grammar shared with the command line.
//!
//! `squares`, `squares+c`, `squares-c`, `primes`, `primes+c`, `primes-c`,
//! `powers:k`, `polyz:a_d,...,a_0`, `polyp:a_d,...,a_0`, `list:v1,v2,...`,
//! `file:<path>` (one integer per line, `#` starts a comment).

use std::fs;

use super::{Family, ForbiddenSet, Polynomial};
use crate::error::{Error, Result};

pub(super) fn parse(spec: &str) -> Result<ForbiddenSet> {
    let s = spec.trim();
    let bad = |reason: &str| Error::InvalidSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let int = |t: &str| -> Result<i64> {
        t.trim()
            .parse::<i64>()
            .map_err(|e| bad(&format!("`{}`: {e}", t.trim())))
    };
    let int_list = |body: &str| -> Result<Vec<i64>> {
        if body.trim().is_empty() {
            return Ok(Vec::new());
        }
        body.split(',').map(int).collect()
    };

    let family = if let Some(rest) = s.strip_prefix("squares") {
        if rest.is_empty() {
            Family::Squares
        } else {
            Family::SquaresShift(shift(rest).ok_or_else(|| bad("expected squares+c or squares-c"))?)
        }
    } else if let Some(rest) = s.strip_prefix("primes") {
        if rest.is_empty() {
            Family::Primes
        } else {
            Family::PrimesShift(shift(rest).ok_or_else(|| bad("expected primes+c or primes-c"))?)
        }
    } else if let Some(k) = s.strip_prefix("powers:") {
        let k = int(k)?;
        Family::Powers(u32::try_from(k).map_err(|_| bad("exponent out of range"))?)
    } else if let Some(body) = s.strip_prefix("polyz:") {
        Family::PolyZ(Polynomial::from_descending(&int_list(body)?).map_err(|e| bad(&e.to_string()))?)
    } else if let Some(body) = s.strip_prefix("polyp:") {
        Family::PolyP(Polynomial::from_descending(&int_list(body)?).map_err(|e| bad(&e.to_string()))?)
    } else if let Some(body) = s.strip_prefix("list:") {
        Family::Explicit(int_list(body)?)
    } else if let Some(path) = s.strip_prefix("file:") {
        let text = fs::read_to_string(path)?;
        Family::Explicit(parse_integer_lines(&text)?)
    } else {
        return Err(bad("unknown family"));
    };
    ForbiddenSet::new(family).map_err(|e| match e {
        Error::InvalidArgument(reason) => bad(&reason),
        other => other,
    })
}

/// `+c` / `-c` suffix.
fn shift(rest: &str) -> Option<i64> {
    let (sign, digits) = match rest.as_bytes().first()? {
        b'+' => (1, &rest[1..]),
        b'-' => (-1, &rest[1..]),
        _ => return None,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<i64>().ok().map(|v| sign * v)
}

/// One base-10 integer per line; blank lines and `#` comments are skipped.
pub fn parse_integer_lines(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse::<i64>().map_err(|e| Error::Parse {
            line: i + 1,
            reason: format!("`{line}`: {e}"),
        })?);
    }
    Ok(out)
}
