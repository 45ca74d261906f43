//! Top-down sweep resolving `D(X, n)` over a range of n.
//!
//! Solving at N gives an optimal X-set A in translation normal form
//! (`min A = 1`). A stays optimal for every n in `[max A, N]`, so the sweep
//! jumps straight to `max A - 1`. Each later solve is bracketed: the previous
//! witness minus its top element is a lower bound of size `d - 1`, and `d`
//! itself is an upper bound.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::clique::{CliqueSearch, SearchConfig};
use crate::error::{Error, Result};
use crate::formulas::greedy_construct;
use crate::graph::{zero_neighborhood_graph_with, DifferenceFilter};
use crate::sets::ForbiddenSet;
use crate::validate::{forbidden_pair, normalize};

/// `D(X, n) = d` for every n in `[n_lo, n_hi]`, certified by `witness ⊆ [n_lo]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeRecord {
    pub set: String,
    pub n_lo: u64,
    pub n_hi: u64,
    pub d: u64,
    pub witness: Vec<i64>,
}

impl CascadeRecord {
    /// Checks the normal form and that the witness is an X-set.
    pub fn validate(&self, x: &ForbiddenSet) -> Result<()> {
        let fail = |why: String| {
            Err(Error::InvalidWitness(format!(
                "record [{}, {}]: {why}",
                self.n_lo, self.n_hi
            )))
        };
        if self.n_lo == 0 || self.n_lo > self.n_hi {
            return fail("empty range".into());
        }
        if self.witness.len() as u64 != self.d {
            return fail(format!("witness has {} elements, d = {}", self.witness.len(), self.d));
        }
        if self.witness.windows(2).any(|w| w[0] >= w[1]) {
            return fail("witness not strictly increasing".into());
        }
        if self.witness.first() != Some(&1) || self.witness.last() != Some(&(self.n_lo as i64)) {
            return fail("witness must start at 1 and end at n_lo".into());
        }
        if let Some((a, b)) = forbidden_pair(x, &self.witness)? {
            return fail(format!("{a} and {b} differ by a forbidden amount"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n_lo: u64,
    pub n_hi: u64,
    pub d: u64,
}

/// `D(X, n)` with an optimal witness in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DValue {
    pub n: u64,
    pub d: u64,
    pub witness: Vec<i64>,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct CascadeOptions {
    pub search: SearchConfig,
    /// JSONL record log, flushed after every solve.
    pub log: Option<PathBuf>,
    /// Continue from the records already in `log`.
    pub resume: bool,
}

/// Solves at `n`. `seed` is a known X-set in normal form inside `[n]`;
/// `upper` a proven bound on `D(X, n)`.
fn solve_bracketed(
    filter: &DifferenceFilter,
    n: u64,
    config: &SearchConfig,
    seed: &[i64],
    upper: Option<u64>,
) -> Result<DValue> {
    let graph = zero_neighborhood_graph_with(n, filter)?;
    let incumbent: Vec<i64> = seed.iter().filter(|&&a| a != 1).map(|&a| a - 1).collect();
    let mut search = CliqueSearch::new(&graph).config(config.clone()).incumbent(&incumbent);
    if let Some(u) = upper {
        search = search.upper_bound(u.saturating_sub(1) as usize);
    }
    let outcome = search.run()?;
    let mut witness = vec![1];
    witness.extend(outcome.witness.iter().map(|&c| c + 1));
    Ok(DValue {
        n,
        d: witness.len() as u64,
        witness,
        nodes_expanded: outcome.nodes_expanded,
        elapsed: outcome.elapsed,
    })
}

/// `D(X, n)` by one exact solve, seeded with the greedy construction.
pub fn compute_d(x: &ForbiddenSet, n: u64, config: &SearchConfig) -> Result<DValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let filter = DifferenceFilter::new(x, n - 1)?;
    let greedy = greedy_construct(x, n)?.witness.unwrap_or_default();
    solve_bracketed(&filter, n, config, &greedy, None)
}

/// Reads a JSONL record log.
pub fn read_log(path: &Path) -> Result<Vec<CascadeRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            reason: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Reads a log and revalidates every record against its own set.
pub fn load_log(path: &Path) -> Result<(ForbiddenSet, Vec<CascadeRecord>)> {
    let records = read_log(path)?;
    let first = records
        .first()
        .ok_or_else(|| Error::LogMismatch(format!("{} holds no records", path.display())))?;
    let x: ForbiddenSet = first.set.parse()?;
    for r in &records {
        if r.set != first.set {
            return Err(Error::LogMismatch(format!(
                "log mixes sets `{}` and `{}`",
                first.set, r.set
            )));
        }
        r.validate(&x)?;
    }
    Ok((x, records))
}

/// Cuts an unterminated last line left by an interrupted write.
fn drop_torn_tail(path: &Path) -> Result<()> {
    let bytes = std::fs::read(path)?;
    if bytes.last().is_some_and(|&b| b != b'\n') {
        let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        OpenOptions::new().write(true).open(path)?.set_len(keep as u64)?;
    }
    Ok(())
}

/// Sweeps from `max` down until `min` is covered. Returns maximal constant
/// ranges in ascending order; the lowest may extend below `min`.
pub fn cascade(
    x: &ForbiddenSet,
    min: u64,
    max: u64,
    options: &CascadeOptions,
    mut on_record: impl FnMut(&CascadeRecord),
) -> Result<Vec<CascadeRecord>> {
    if min == 0 || min > max {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= min <= max, got [{min}, {max}]"
        )));
    }
    let set = x.to_string();
    let mut raw: Vec<CascadeRecord> = Vec::new();

    if options.resume {
        let path = options
            .log
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("resume requires a log path".into()))?;
        if path.exists() {
            drop_torn_tail(path)?;
            raw = read_log(path)?;
            for r in &raw {
                if r.set != set {
                    return Err(Error::LogMismatch(format!("log is for `{}`, requested `{set}`", r.set)));
                }
                r.validate(x)?;
            }
            raw.sort_by_key(|r| std::cmp::Reverse(r.n_hi));
            if let Some(top) = raw.first() {
                if top.n_hi != max {
                    return Err(Error::LogMismatch(format!(
                        "log starts at N = {}, requested max {max}",
                        top.n_hi
                    )));
                }
            }
            for pair in raw.windows(2) {
                if pair[1].n_hi + 1 != pair[0].n_lo {
                    return Err(Error::Inconsistent(format!(
                        "log records [{}, {}] and [{}, {}] are not adjacent",
                        pair[1].n_lo, pair[1].n_hi, pair[0].n_lo, pair[0].n_hi
                    )));
                }
            }
        }
    }

    let mut log = match &options.log {
        Some(path) => Some(
            OpenOptions::new()
                .create(true)
                .write(true)
                .append(options.resume)
                .truncate(!options.resume)
                .open(path)?,
        ),
        None => None,
    };

    let filter = DifferenceFilter::new(x, max - 1)?;
    let mut n = raw.last().map_or(max, |r| r.n_lo - 1);
    while n >= min && n >= 1 {
        let (seed, upper) = match raw.last() {
            Some(prev) => (prev.witness[..prev.witness.len() - 1].to_vec(), Some(prev.d)),
            None => (greedy_construct(x, n)?.witness.unwrap_or_default(), None),
        };
        let solved = solve_bracketed(&filter, n, &options.search, &seed, upper)?;
        let witness = normalize(&solved.witness);
        let record = CascadeRecord {
            set: set.clone(),
            n_lo: *witness.last().expect("witness contains 1") as u64,
            n_hi: n,
            d: solved.d,
            witness,
        };
        record.validate(x)?;
        if let Some(file) = log.as_mut() {
            writeln!(file, "{}", serde_json::to_string(&record).expect("record serializes"))?;
            file.flush()?;
        }
        on_record(&record);
        n = record.n_lo - 1;
        raw.push(record);
    }

    Ok(merge_records(raw))
}

/// Merges adjacent records with equal d; result ascending.
fn merge_records(mut raw: Vec<CascadeRecord>) -> Vec<CascadeRecord> {
    raw.sort_by_key(|r| r.n_lo);
    let mut out: Vec<CascadeRecord> = Vec::new();
    for r in raw {
        match out.last_mut() {
            Some(last) if last.d == r.d && last.n_hi + 1 == r.n_lo => last.n_hi = r.n_hi,
            _ => out.push(r),
        }
    }
    out
}

/// Per-n values covered by the records, ascending.
pub fn expand_records(records: &[CascadeRecord]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = records
        .iter()
        .flat_map(|r| (r.n_lo..=r.n_hi).map(move |n| (n, r.d)))
        .collect();
    out.sort_unstable();
    out
}

/// Maximal ranges of constant d. Input must cover a contiguous range of n
/// exactly once.
pub fn compress_table(values: &[(u64, u64)]) -> Result<Vec<TableRow>> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by_key(|&(n, _)| n);
    let mut rows: Vec<TableRow> = Vec::new();
    for (n, d) in sorted {
        match rows.last_mut() {
            Some(last) if n <= last.n_hi => return Err(Error::Inconsistent(format!("N = {n} appears more than once"))),
            Some(last) if n != last.n_hi + 1 => {
                return Err(Error::Inconsistent(format!("gap between {} and {n}", last.n_hi)))
            }
            Some(last) if last.d == d => last.n_hi = n,
            _ => rows.push(TableRow { n_lo: n, n_hi: n, d }),
        }
    }
    Ok(rows)
}

pub fn compress_records(records: &[CascadeRecord]) -> Result<Vec<TableRow>> {
    compress_table(&expand_records(records))
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n_lo,n_hi,d\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n_lo, r.n_hi, r.d));
    }
    out
}

pub fn table_markdown(rows: &[TableRow], set: &str) -> String {
    let mut out = format!("| N | D({set}, N) |\n|---|---|\n");
    for r in rows {
        if r.n_lo == r.n_hi {
            out.push_str(&format!("| N = {} | {} |\n", r.n_lo, r.d));
        } else {
            out.push_str(&format!("| {} ≤ N ≤ {} | {} |\n", r.n_lo, r.n_hi, r.d));
        }
    }
    out
}

/// First n violating `D(n) <= D(n+1) <= D(n) + 1` on consecutive values.
pub fn monotonicity_violation(values: &[(u64, u64)]) -> Option<u64> {
    values.windows(2).find_map(|w| {
        let ((n, a), (m, b)) = (w[0], w[1]);
        (m == n + 1 && (b < a || b > a + 1)).then_some(n)
    })
}

/// First `(N, M)` with `D(N + M) > D(N) + D(M)` among the given values.
pub fn subadditivity_violation(values: &[(u64, u64)]) -> Option<(u64, u64)> {
    let lookup: std::collections::HashMap<u64, u64> = values.iter().copied().collect();
    for &(n, dn) in values {
        for &(m, dm) in values.iter().filter(|&&(m, _)| m >= n) {
            if let Some(&dsum) = lookup.get(&(n + m)) {
                if dsum > dn + dm {
                    return Some((n, m));
                }
            }
        }
    }
    None
}
