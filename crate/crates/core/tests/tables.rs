use std::path::PathBuf;

use forbidden_diff::cascade::{
    compress_records, compress_table, expand_records, load_log, monotonicity_violation, read_log,
    subadditivity_violation,
};
use forbidden_diff::formulas::{
    greedy_construct, greedy_guarantee, primes_formula, squares_plus_one_formula, squares_plus_two_lower_bound,
    verify_formula, Formula, VerifyStatus,
};
use forbidden_diff::modular::{lift_witness, local_density, locally_intersective_up_to, mu_lower_scan};
use forbidden_diff::validate::forbidden_pair;
use forbidden_diff::{cascade, compute_d, CascadeOptions, Error, ForbiddenSet, SearchConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn set(spec: &str) -> ForbiddenSet {
    spec.parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fdiff-tables-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn sweep(x: &ForbiddenSet, min: u64, max: u64) -> Vec<(u64, u64)> {
    let records = cascade(x, min, max, &CascadeOptions::default(), |_| {}).unwrap();
    expand_records(&records)
}

#[test]
fn cascade_matches_direct_computation() {
    let mut rng = StdRng::seed_from_u64(11);
    for spec in ["squares", "primes-1", "squares+2", "primes"] {
        let x = set(spec);
        let values = sweep(&x, 1, 110);
        assert_eq!(values.first().unwrap().0, 1);
        assert_eq!(values.last().unwrap().0, 110);
        for _ in 0..50 {
            let n = rng.gen_range(1..=110u64);
            let direct = compute_d(&x, n, &SearchConfig::default()).unwrap();
            assert_eq!(values[n as usize - 1], (n, direct.d), "{spec}");
            assert_eq!(forbidden_pair(&x, &direct.witness).unwrap(), None);
        }
    }
}

#[test]
fn tables_are_monotone_and_subadditive() {
    for spec in [
        "squares",
        "primes-1",
        "squares+1",
        "squares+2",
        "primes",
        "powers:3",
        "list:1,2,7",
    ] {
        let values = sweep(&set(spec), 1, 100);
        assert_eq!(monotonicity_violation(&values), None, "{spec}");
        assert_eq!(subadditivity_violation(&values), None, "{spec}");
    }
}

#[test]
fn compress_examples() {
    let values: Vec<(u64, u64)> = (23..=37).map(|n| (n, if n <= 34 { 10 } else { 11 })).collect();
    let rows = compress_table(&values).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0].n_lo, rows[0].n_hi, rows[0].d), (23, 34, 10));
    assert_eq!((rows[1].n_lo, rows[1].n_hi, rows[1].d), (35, 37, 11));
    assert_eq!(compress_table(&[(5, 2)]).unwrap().len(), 1);
    assert!(matches!(compress_table(&[(1, 1), (3, 2)]), Err(Error::Inconsistent(_))));
    assert!(matches!(compress_table(&[(1, 1), (1, 1)]), Err(Error::Inconsistent(_))));

    let shifted = sweep(&set("primes-1"), 1, 35);
    let rows: Vec<_> = compress_table(&shifted)
        .unwrap()
        .iter()
        .map(|r| (r.n_lo, r.n_hi, r.d))
        .collect();
    assert_eq!(rows, vec![(1, 3, 1), (4, 8, 2), (9, 11, 3), (12, 32, 4), (33, 35, 5)]);
}

#[test]
fn log_round_trip_and_resume() {
    let x = ForbiddenSet::squares();
    let path = scratch("squares.jsonl");
    let opts = CascadeOptions {
        log: Some(path.clone()),
        ..Default::default()
    };
    let full = cascade(&x, 1, 80, &opts, |_| {}).unwrap();

    let (loaded_set, records) = load_log(&path).unwrap();
    assert_eq!(loaded_set, x);
    assert_eq!(compress_records(&records).unwrap(), compress_records(&full).unwrap());

    // keep the first three records plus a torn fourth line, then resume
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 4);
    let mut partial = lines[..3].join("\n");
    partial.push('\n');
    partial.push_str(&lines[3][..lines[3].len() / 2]);
    std::fs::write(&path, partial).unwrap();

    let mut fresh = 0;
    let resumed = cascade(
        &x,
        1,
        80,
        &CascadeOptions {
            resume: true,
            ..opts.clone()
        },
        |_| fresh += 1,
    )
    .unwrap();
    assert_eq!(resumed, full);
    assert_eq!(fresh, lines.len() - 3);
    assert_eq!(read_log(&path).unwrap().len(), lines.len());
}

#[test]
fn resume_rejects_other_set() {
    let path = scratch("mismatch.jsonl");
    let opts = CascadeOptions {
        log: Some(path.clone()),
        ..Default::default()
    };
    cascade(&ForbiddenSet::squares(), 1, 30, &opts, |_| {}).unwrap();
    let resume = CascadeOptions { resume: true, ..opts };
    let err = cascade(&set("primes-1"), 1, 30, &resume, |_| {}).unwrap_err();
    assert!(matches!(err, Error::LogMismatch(_)));
    let err = cascade(&ForbiddenSet::squares(), 1, 40, &resume, |_| {}).unwrap_err();
    assert!(matches!(err, Error::LogMismatch(_)));
}

#[test]
fn tampered_log_fails_validation() {
    let path = scratch("tampered.jsonl");
    let opts = CascadeOptions {
        log: Some(path.clone()),
        ..Default::default()
    };
    cascade(&ForbiddenSet::squares(), 1, 40, &opts, |_| {}).unwrap();
    let text = std::fs::read_to_string(&path)
        .unwrap()
        .replacen("\"witness\":[1,", "\"witness\":[1,2,", 1);
    std::fs::write(&path, text).unwrap();
    assert!(matches!(load_log(&path), Err(Error::InvalidWitness(_))));
}

#[test]
fn formula_witnesses_are_x_sets() {
    for n in 1..=400 {
        for (x, r) in [
            (ForbiddenSet::primes(), primes_formula(n).unwrap()),
            (ForbiddenSet::squares_shift(1), squares_plus_one_formula(n).unwrap()),
            (ForbiddenSet::squares_shift(2), squares_plus_two_lower_bound(n).unwrap()),
        ] {
            if let Some(w) = &r.witness {
                assert_eq!(w.len() as u64, r.value, "{x} at {n}");
                assert!(w.iter().all(|&v| (1..=n as i64).contains(&v)));
                assert_eq!(forbidden_pair(&x, w).unwrap(), None, "{x} at {n}");
            }
        }
    }
}

#[test]
fn formulas_step_by_at_most_one() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut samples: Vec<u64> = (1..2000).collect();
    samples.extend((0..2000).map(|_| rng.gen_range(1..1_000_000)));
    for n in samples {
        for f in [primes_formula, squares_plus_one_formula] {
            let (a, b) = (f(n).unwrap().value, f(n + 1).unwrap().value);
            assert!(a <= b && b <= a + 1, "N = {n}");
        }
    }
}

#[test]
fn squares_plus_two_beats_quarter() {
    for n in 2..=100_000u64 {
        let exceptional = n >= 5 && (n - 5) % 4 == 0 && {
            let k = (((n - 5) / 4) as f64).sqrt() as u64;
            (k.saturating_sub(1)..=k + 1).any(|k| 4 * k * k + 5 == n)
        };
        let bound = squares_plus_two_lower_bound(n).unwrap().value;
        if !exceptional {
            assert!(bound > n.div_ceil(4), "N = {n}");
        }
    }
}

#[test]
fn verify_reports() {
    let report = verify_formula(Formula::Primes, 1, 60, &SearchConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 60);
    assert!(report.rows.iter().all(|r| r.status == VerifyStatus::Match));
    assert!(report.to_csv().starts_with("N,formula_value,computed_D,status\n"));

    let report = verify_formula(Formula::SquaresPlusOne, 1, 50, &SearchConfig::default()).unwrap();
    assert_eq!(report.mismatches().count(), 0);
    let report = verify_formula(Formula::SquaresPlusTwoLowerBound, 51, 80, &SearchConfig::default()).unwrap();
    assert_eq!(report.slack().count(), 0);
    assert_eq!(report.mismatches().count(), 0);
}

#[test]
fn greedy_bound_on_random_sets() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let k = rng.gen_range(1..=8);
        let x = ForbiddenSet::explicit((0..k).map(|_| rng.gen_range(1..=60))).unwrap();
        let n = rng.gen_range(1..=400u64);
        let g = greedy_construct(&x, n).unwrap();
        let hits = x.elements_in_range(1, n as i64).unwrap().len() as u64;
        assert!(g.value * (hits + 1) >= n - 1, "{x}, N = {n}");
        assert!(g.value >= greedy_guarantee(&x, n).unwrap());
        assert_eq!(forbidden_pair(&x, &g.witness.unwrap()).unwrap(), None);
    }
}

#[test]
fn lifted_densities_are_x_sets() {
    for spec in [
        "squares+3",
        "squares+1",
        "primes",
        "primes+1",
        "polyz:1,0,3",
        "list:2,3",
    ] {
        let x = set(spec);
        for m in 1..=24 {
            let r = local_density(&x, m).unwrap();
            for k in 1..=5 {
                let lifted = lift_witness(&r.witness, m, k);
                assert_eq!(lifted.len() as u64, k * r.d);
                assert!(lifted.iter().all(|&v| (1..=(m * k) as i64).contains(&v)));
                assert_eq!(forbidden_pair(&x, &lifted).unwrap(), None, "{spec} mod {m}, k = {k}");
                if m * k <= 60 {
                    assert!(compute_d(&x, m * k, &SearchConfig::default()).unwrap().d >= k * r.d);
                }
            }
        }
    }
}

#[test]
fn densities_and_local_intersectivity() {
    let best = mu_lower_scan(&ForbiddenSet::primes(), 16, &SearchConfig::default()).unwrap();
    assert_eq!((best.m, best.d), (4, 1));
    assert_eq!(local_density(&ForbiddenSet::squares_shift(1), 3).unwrap().d, 1);
    assert_eq!(local_density(&ForbiddenSet::squares_shift(3), 3).unwrap().d, 0);

    let primes = locally_intersective_up_to(&ForbiddenSet::primes(), 10).unwrap();
    assert!(!primes.holds);
    assert_eq!(primes.first_failure, Some(4));
    assert!(locally_intersective_up_to(&set("primes-1"), 1000).unwrap().holds);
}
