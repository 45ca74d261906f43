//! Local densities `d_X(m)`: the largest `A ⊆ Z/mZ` with `(A - A) ∩ X_m = ∅`.
//!
//! A circulant graph is vertex-transitive, so some maximum clique contains
//! 0; the search runs on the neighbourhood of 0 only. Ratios are exact.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::clique::{CliqueSearch, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::circulant_graph;
use crate::sets::{ForbiddenSet, ResidueSet};

pub const DEFAULT_MODULUS_CAP: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityRecord {
    pub m: u64,
    pub residues: Vec<u64>,
    pub d: u64,
    pub witness: Vec<u64>,
    #[serde(serialize_with = "ratio_string")]
    pub ratio: Ratio<u64>,
}

fn ratio_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

/// Always `numer/denom`, reduced.
pub fn format_ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl DensityRecord {
    pub fn csv_header() -> &'static str {
        "m,d,ratio,witness"
    }

    pub fn csv_row(&self) -> String {
        let witness: Vec<String> = self.witness.iter().map(u64::to_string).collect();
        format!(
            "{},{},{},\"{}\"",
            self.m,
            self.d,
            format_ratio(&self.ratio),
            witness.join(" ")
        )
    }
}

/// `d` for an explicit residue set, with a witness containing 0.
pub fn density_of_residues(residues: &ResidueSet, config: &SearchConfig) -> Result<(u64, Vec<u64>)> {
    let m = residues.modulus();
    if residues.contains(0) {
        return Ok((0, Vec::new()));
    }
    let graph = circulant_graph(residues);
    let around_zero: Vec<usize> = graph.neighbors(0).collect();
    let sub = graph.induced(&around_zero);
    let outcome = CliqueSearch::new(&sub).config(config.clone()).run()?;
    let mut witness = vec![0u64];
    witness.extend(outcome.witness.iter().map(|&r| r as u64));
    Ok((witness.len() as u64, smallest_translate(&witness, m)))
}

/// Among the translates `W - w` (`w ∈ W`), the lexicographically smallest.
fn smallest_translate(witness: &[u64], m: u64) -> Vec<u64> {
    witness
        .iter()
        .map(|&w| {
            let mut t: Vec<u64> = witness.iter().map(|&r| (r + m - w) % m).collect();
            t.sort_unstable();
            t
        })
        .min()
        .unwrap_or_default()
}

pub fn local_density(x: &ForbiddenSet, m: u64) -> Result<DensityRecord> {
    local_density_with(x, m, DEFAULT_MODULUS_CAP, &SearchConfig::default())
}

pub fn local_density_with(x: &ForbiddenSet, m: u64, cap: u64, config: &SearchConfig) -> Result<DensityRecord> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if m > cap {
        return Err(Error::InvalidArgument(format!("modulus {m} exceeds cap {cap}")));
    }
    let residues = x.residues_mod(m)?;
    let (d, witness) = density_of_residues(&residues, config)?;
    Ok(DensityRecord {
        m,
        residues: residues.to_vec(),
        d,
        witness,
        ratio: Ratio::new(d, m),
    })
}

/// `d_X(m)` for every `m <= max_m`, ascending.
pub fn density_scan(x: &ForbiddenSet, max_m: u64, config: &SearchConfig) -> Result<Vec<DensityRecord>> {
    if max_m == 0 {
        return Err(Error::InvalidArgument("max modulus must be positive".into()));
    }
    if max_m > DEFAULT_MODULUS_CAP {
        return Err(Error::InvalidArgument(format!(
            "max modulus {max_m} exceeds cap {DEFAULT_MODULUS_CAP}"
        )));
    }
    let sequential = SearchConfig {
        threads: 1,
        ..config.clone()
    };
    let run = |m: u64| local_density_with(x, m, DEFAULT_MODULUS_CAP, &sequential);
    if config.effective_threads() > 1 {
        (1..=max_m).into_par_iter().map(run).collect()
    } else {
        (1..=max_m).map(run).collect()
    }
}

/// The largest `d_X(m)/m` over `m <= max_m`, smallest m on ties. A union of
/// the witness classes is an X-set of that density, so this bounds the best
/// achievable density from below.
pub fn mu_lower_scan(x: &ForbiddenSet, max_m: u64, config: &SearchConfig) -> Result<DensityRecord> {
    best_ratio(density_scan(x, max_m, config)?)
}

pub fn best_ratio(records: Vec<DensityRecord>) -> Result<DensityRecord> {
    records
        .into_iter()
        .reduce(|best, r| if r.ratio > best.ratio { r } else { best })
        .ok_or_else(|| Error::InvalidArgument("no densities to compare".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCheck {
    pub holds: bool,
    pub first_failure: Option<u64>,
}

/// Whether X has a nonzero multiple of every `m <= max_m`.
pub fn locally_intersective_up_to(x: &ForbiddenSet, max_m: u64) -> Result<LocalCheck> {
    for m in 1..=max_m {
        if !x.residues_mod(m)?.contains(0) {
            return Ok(LocalCheck {
                holds: false,
                first_failure: Some(m),
            });
        }
    }
    Ok(LocalCheck {
        holds: true,
        first_failure: None,
    })
}

/// Lifts a residue witness to `{r + 1 + m t} ∩ [m k]`.
pub fn lift_witness(witness: &[u64], m: u64, k: u64) -> Vec<i64> {
    let mut out: Vec<i64> = (0..k)
        .flat_map(|t| witness.iter().map(move |&r| (r + 1 + m * t) as i64))
        .collect();
    out.sort_unstable();
    out
}
