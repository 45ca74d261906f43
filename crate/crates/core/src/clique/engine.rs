//! Colouring-bounded branch and bound over bitset rows.

use std::sync::atomic::{AtomicU64, AtomicU8, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::{CliqueOutcome, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::DiffGraph;

const RUNNING: u8 = 0;
const EXHAUSTED: u8 = 1;
const BOUND_REACHED: u8 = 2;

/// Nodes between flushes of the local counter into the shared one.
const FLUSH_EVERY: u64 = 256;

/// The graph renumbered by initial rank: position 0 has the largest degree.
struct Ranked {
    words: usize,
    /// position -> vertex index of the input graph
    order: Vec<usize>,
    adj: Vec<u64>,
}

impl Ranked {
    fn new(graph: &DiffGraph) -> Self {
        let n = graph.len();
        let mut order: Vec<usize> = (0..n).collect();
        // Stable sort keeps smaller labels first among equal degrees.
        order.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for (pa, &a) in order.iter().enumerate() {
            for (pb, &b) in order.iter().enumerate() {
                if graph.adjacent(a, b) {
                    adj[pa * words + pb / 64] |= 1 << (pb % 64);
                }
            }
        }
        Self { words, order, adj }
    }

    #[inline]
    fn row(&self, p: u32) -> &[u64] {
        let p = p as usize;
        &self.adj[p * self.words..(p + 1) * self.words]
    }

    #[inline]
    fn adjacent(&self, a: u32, b: u32) -> bool {
        self.row(a)[b as usize / 64] >> (b % 64) & 1 == 1
    }
}

struct Shared {
    best_size: AtomicUsize,
    best: Mutex<Vec<u32>>,
    nodes: AtomicU64,
    state: AtomicU8,
    upper_bound: usize,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Shared {
    fn stopped(&self) -> bool {
        self.state.load(Ordering::Relaxed) != RUNNING
    }

    fn halt(&self, why: u8) {
        let _ = self
            .state
            .compare_exchange(RUNNING, why, Ordering::Relaxed, Ordering::Relaxed);
    }
}

struct Worker<'a> {
    ranked: &'a Ranked,
    shared: &'a Shared,
    dynamic: bool,
    tlimit: f64,
    current: Vec<u32>,
    pending: u64,
    steps: Vec<u64>,
    steps_old: Vec<u64>,
    all_steps: u64,
    class_bits: Vec<u64>,
    mask: Vec<u64>,
}

impl<'a> Worker<'a> {
    fn new(ranked: &'a Ranked, shared: &'a Shared, config: &SearchConfig) -> Self {
        Self {
            ranked,
            shared,
            dynamic: config.dynamic_ordering,
            tlimit: config.tlimit,
            current: Vec::new(),
            pending: 0,
            steps: vec![0; 2],
            steps_old: vec![0; 2],
            all_steps: 1,
            class_bits: Vec::new(),
            mask: vec![0; ranked.words],
        }
    }

    fn flush(&mut self) {
        if self.pending == 0 {
            return;
        }
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if self.shared.max_nodes.is_some_and(|cap| total >= cap)
            || self.shared.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.shared.halt(EXHAUSTED);
        }
    }

    /// Counts one expanded node. False once the search must stop.
    #[inline]
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            self.flush();
        }
        !self.shared.stopped()
    }

    fn record(&mut self) {
        let mut best = self.shared.best.lock().expect("incumbent lock poisoned");
        if self.current.len() > self.shared.best_size.load(Ordering::Relaxed) {
            best.clone_from(&self.current);
            self.shared.best_size.store(self.current.len(), Ordering::Relaxed);
            if self.current.len() >= self.shared.upper_bound {
                self.shared.halt(BOUND_REACHED);
            }
        }
    }

    /// Greedy sequential colouring. Returns candidates reordered so colours
    /// are non-decreasing, with their colours. Vertices whose colour cannot
    /// beat the incumbent are kept at the front with colour 0.
    fn color_sort(&mut self, cands: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let words = self.ranked.words;
        let best = self.shared.best_size.load(Ordering::Relaxed);
        let kmin = (best + 1).saturating_sub(self.current.len()).max(1);
        self.class_bits.clear();
        let mut color_of = Vec::with_capacity(cands.len());
        let mut classes = 0usize;
        for &v in cands {
            let row = self.ranked.row(v);
            let mut k = 0;
            while k < classes {
                let bits = &self.class_bits[k * words..(k + 1) * words];
                if bits.iter().zip(row).all(|(c, r)| c & r == 0) {
                    break;
                }
                k += 1;
            }
            if k == classes {
                classes += 1;
                self.class_bits.resize(classes * words, 0);
            }
            self.class_bits[k * words + v as usize / 64] |= 1 << (v % 64);
            color_of.push(k + 1);
        }
        let mut order = Vec::with_capacity(cands.len());
        let mut colors = Vec::with_capacity(cands.len());
        for (&v, &c) in cands.iter().zip(&color_of) {
            if c < kmin {
                order.push(v);
                colors.push(0);
            }
        }
        for k in kmin..=classes {
            for (&v, &c) in cands.iter().zip(&color_of) {
                if c == k {
                    order.push(v);
                    colors.push(k as u32);
                }
            }
        }
        (order, colors)
    }

    /// Stable re-sort by degree inside the candidate set, largest first.
    fn sort_by_inner_degree(&mut self, cands: &mut [u32]) {
        self.mask.iter_mut().for_each(|w| *w = 0);
        for &v in cands.iter() {
            self.mask[v as usize / 64] |= 1 << (v % 64);
        }
        let ranked = self.ranked;
        let mask = &self.mask;
        let degree = |v: u32| -> u32 { ranked.row(v).iter().zip(mask).map(|(r, m)| (r & m).count_ones()).sum() };
        let mut keyed: Vec<(u32, u32)> = cands.iter().map(|&v| (degree(v), v)).collect();
        keyed.sort_by_key(|&(d, _)| std::cmp::Reverse(d));
        for (slot, (_, v)) in cands.iter_mut().zip(keyed) {
            *slot = v;
        }
    }

    fn ensure_level(&mut self, level: usize) {
        if self.steps.len() <= level + 1 {
            self.steps.resize(level + 2, 0);
            self.steps_old.resize(level + 2, 0);
        }
    }

    /// Branch on candidate `i` of the list: add it, recurse on the common
    /// neighbours among earlier candidates. False once the search must stop.
    fn branch(&mut self, cands: &[u32], i: usize, level: usize) -> bool {
        if !self.tick() {
            return false;
        }
        let p = cands[i];
        self.current.push(p);
        let ranked = self.ranked;
        let mut next: Vec<u32> = cands[..i].iter().copied().filter(|&u| ranked.adjacent(p, u)).collect();
        let mut keep_going = true;
        if next.is_empty() {
            if self.current.len() > self.shared.best_size.load(Ordering::Relaxed) {
                self.record();
            }
        } else {
            self.ensure_level(level);
            if self.dynamic && (self.steps[level] as f64) / (self.all_steps as f64) < self.tlimit {
                self.sort_by_inner_degree(&mut next);
            }
            let (order, colors) = self.color_sort(&next);
            self.steps[level] += 1;
            self.all_steps += 1;
            keep_going = self.expand(&order, &colors, level + 1);
        }
        self.current.pop();
        keep_going && !self.shared.stopped()
    }

    fn expand(&mut self, cands: &[u32], colors: &[u32], level: usize) -> bool {
        self.ensure_level(level);
        self.steps[level] += self.steps[level - 1] - self.steps_old[level];
        self.steps_old[level] = self.steps[level - 1];
        for i in (0..cands.len()).rev() {
            let best = self.shared.best_size.load(Ordering::Relaxed);
            if self.current.len() + colors[i] as usize <= best {
                return true;
            }
            if !self.branch(cands, i, level) {
                return false;
            }
        }
        true
    }
}

pub(super) fn search(
    graph: &DiffGraph,
    config: &SearchConfig,
    seed: &[i64],
    upper_bound: Option<usize>,
) -> Result<CliqueOutcome> {
    let start = Instant::now();
    let ranked = Ranked::new(graph);
    let mut position = vec![0u32; graph.len()];
    for (p, &v) in ranked.order.iter().enumerate() {
        position[v] = p as u32;
    }
    let seed_positions: Vec<u32> = seed
        .iter()
        .map(|&l| position[graph.index_of(l).expect("seed validated by caller")])
        .collect();
    let shared = Shared {
        best_size: AtomicUsize::new(seed_positions.len()),
        best: Mutex::new(seed_positions),
        nodes: AtomicU64::new(0),
        state: AtomicU8::new(RUNNING),
        upper_bound: upper_bound.unwrap_or(usize::MAX),
        max_nodes: config.budget.max_nodes,
        deadline: config.budget.max_time.map(|d| start + d),
    };
    if seed.len() >= shared.upper_bound {
        shared.halt(BOUND_REACHED);
    }

    if !shared.stopped() && !graph.is_empty() {
        let all: Vec<u32> = (0..graph.len() as u32).collect();
        let mut root = Worker::new(&ranked, &shared, config);
        let (cands, colors) = root.color_sort(&all);
        let threads = config.effective_threads();
        if threads <= 1 {
            root.expand(&cands, &colors, 1);
            root.flush();
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            pool.install(|| {
                (0..cands.len()).into_par_iter().rev().for_each_init(
                    || Worker::new(&ranked, &shared, config),
                    |worker, i| {
                        if shared.stopped() || colors[i] as usize <= shared.best_size.load(Ordering::Relaxed) {
                            return;
                        }
                        worker.steps = vec![0; 2];
                        worker.steps_old = vec![0; 2];
                        worker.branch(&cands, i, 1);
                        worker.flush();
                    },
                );
            });
        }
    }

    let best = shared.best.into_inner().expect("incumbent lock poisoned");
    let mut witness: Vec<i64> = best.iter().map(|&p| graph.label(ranked.order[p as usize])).collect();
    witness.sort_unstable();
    let outcome = CliqueOutcome {
        size: witness.len(),
        witness,
        nodes_expanded: shared.nodes.into_inner(),
        elapsed: start.elapsed(),
    };
    if shared.state.into_inner() == EXHAUSTED {
        Err(Error::BudgetExhausted(Box::new(outcome)))
    } else {
        Ok(outcome)
    }
}
