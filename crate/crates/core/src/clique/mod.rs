//! Exact maximum clique search.
//!
//! [`CliqueSearch`] is a branch and bound in the MaxCliqueDyn family:
//! greedy sequential colouring bounds the candidate set, candidates are
//! expanded from the highest colour down, and near the top of the tree the
//! candidate list is re-sorted by degree inside the candidate set.
//! [`brute_force_max_clique`] is an independent Bron-Kerbosch enumeration
//! used as a test oracle on small graphs.

mod engine;
mod oracle;

use std::str::FromStr;
use std::time::Duration;

pub use oracle::{brute_force_max_clique, brute_force_max_clique_capped, ORACLE_VERTEX_CAP};

use crate::error::{Error, Result};
use crate::graph::DiffGraph;

/// Result of a clique search. `witness` holds vertex labels, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueOutcome {
    pub size: usize,
    pub witness: Vec<i64>,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

/// Limits on a search. Exhausting either one is reported as
/// [`Error::BudgetExhausted`], never as a result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(n: u64) -> Self {
        Self {
            max_nodes: Some(n),
            max_time: None,
        }
    }

    pub fn time(d: Duration) -> Self {
        Self {
            max_nodes: None,
            max_time: Some(d),
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    /// `12345` is a node limit, `30s` or `2.5s` a wall-clock limit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("bad budget `{s}` (expected <nodes> or <seconds>s)"));
        if let Some(secs) = s.strip_suffix('s') {
            let secs: f64 = secs.parse().map_err(|_| bad())?;
            if !secs.is_finite() || secs <= 0.0 {
                return Err(bad());
            }
            Ok(Self::time(Duration::from_secs_f64(secs)))
        } else {
            let n: u64 = s.parse().map_err(|_| bad())?;
            Ok(Self::nodes(n))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub budget: Budget,
    /// Worker threads; 0 means the available parallelism. Only a single
    /// thread gives a reproducible witness.
    pub threads: usize,
    /// Re-sort candidates by inner degree near the top of the tree.
    pub dynamic_ordering: bool,
    /// Fraction of steps below which a level counts as "near the top".
    pub tlimit: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: Budget::unlimited(),
            threads: 1,
            dynamic_ordering: true,
            tlimit: 0.025,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn effective_threads(&self) -> usize {
        if self.threads == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.threads
        }
    }
}

/// One maximum clique search over a graph.
///
/// In single-threaded mode the witness is the first maximum clique met in
/// the search order: vertices ranked by non-increasing degree (ties to the
/// smaller label), branches taken from the highest colour class down.
#[derive(Clone, Debug)]
pub struct CliqueSearch<'g> {
    graph: &'g DiffGraph,
    config: SearchConfig,
    incumbent: Vec<i64>,
    upper_bound: Option<usize>,
}

impl<'g> CliqueSearch<'g> {
    pub fn new(graph: &'g DiffGraph) -> Self {
        Self {
            graph,
            config: SearchConfig::default(),
            incumbent: Vec::new(),
            upper_bound: None,
        }
    }

    pub fn config(mut self, config: SearchConfig) -> Self {
        self.config = config;
        self
    }

    /// A known clique (labels). The search only looks for larger ones.
    pub fn incumbent(mut self, labels: &[i64]) -> Self {
        self.incumbent = labels.to_vec();
        self
    }

    /// A proven bound on the clique number; the search stops on reaching it.
    pub fn upper_bound(mut self, bound: usize) -> Self {
        self.upper_bound = Some(bound);
        self
    }

    pub fn run(&self) -> Result<CliqueOutcome> {
        let mut seed: Vec<i64> = self.incumbent.clone();
        seed.sort_unstable();
        seed.dedup();
        if !self.graph.is_clique(&seed) {
            return Err(Error::InvalidArgument("incumbent is not a clique of the graph".into()));
        }
        let outcome = engine::search(self.graph, &self.config, &seed, self.upper_bound);
        let checked = match &outcome {
            Ok(o) => o,
            Err(Error::BudgetExhausted(o)) => o,
            Err(_) => return outcome,
        };
        if checked.witness.len() != checked.size || !self.graph.is_clique(&checked.witness) {
            return Err(Error::Internal(format!(
                "solver returned an invalid clique {:?}",
                checked.witness
            )));
        }
        outcome
    }
}

/// Sequential exact search with a budget.
pub fn max_clique(graph: &DiffGraph, budget: Budget) -> Result<CliqueOutcome> {
    CliqueSearch::new(graph)
        .config(SearchConfig::default().with_budget(budget))
        .run()
}
