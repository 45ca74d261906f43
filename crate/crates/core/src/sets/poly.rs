//! Integer polynomials and exact preimage search.
//!
//! Preimages of a value window are found without factoring: the search
//! domain is cut into integer intervals on which the polynomial is monotone
//! (found recursively from the sign changes of its forward differences),
//! and each interval is binary searched. Evaluation is exact (big integers).

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::sets::WORKING_LIMIT;

/// A nonzero polynomial with integer coefficients, stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<i64>,
}

impl Polynomial {
    /// Builds from coefficients listed highest degree first (`a_d, ..., a_0`).
    pub fn from_descending(coeffs: &[i64]) -> Result<Self> {
        let mut asc: Vec<i64> = coeffs.iter().rev().copied().collect();
        while asc.last() == Some(&0) {
            asc.pop();
        }
        if asc.is_empty() {
            return Err(Error::InvalidArgument("polynomial must be nonzero".into()));
        }
        if let Some(&c) = asc.iter().find(|c| c.unsigned_abs() > WORKING_LIMIT as u64) {
            return Err(Error::OutOfRange(c as i128));
        }
        Ok(Self { coeffs: asc })
    }

    pub(crate) fn from_ascending_unchecked(coeffs: Vec<i64>) -> Self {
        debug_assert!(coeffs.last().is_some_and(|&c| c != 0));
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients lowest degree first.
    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn constant_value(&self) -> Option<i64> {
        (self.degree() == 0).then(|| self.coeffs[0])
    }

    pub fn eval(&self, t: i128) -> BigInt {
        let t = BigInt::from(t);
        self.coeffs.iter().rev().fold(BigInt::from(0), |acc, &c| acc * &t + c)
    }

    /// `h(t)` in machine arithmetic, `None` on overflow.
    fn eval_small(&self, t: i128) -> Option<i128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i128, |acc, &c| acc.checked_mul(t)?.checked_add(c as i128))
    }

    /// `h(t) mod m`, in `[0, m)`.
    pub fn eval_mod(&self, t: u64, m: u64) -> u64 {
        let m = m as i128;
        let t = t as i128 % m;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * t + c as i128).rem_euclid(m);
        }
        acc as u64
    }

    /// k-th forward difference at t: sum_j (-1)^(k-j) C(k,j) h(t+j).
    fn forward_difference(&self, order: usize, t: i128) -> BigInt {
        let mut binom = BigInt::from(1);
        let mut total = BigInt::from(0);
        for j in 0..=order {
            let term = &binom * self.eval(t + j as i128);
            if (order - j).is_multiple_of(2) {
                total += term;
            } else {
                total -= term;
            }
            binom = binom * (order - j) / (j + 1);
        }
        total
    }

    fn difference_sign(&self, order: usize, t: i128) -> i8 {
        match self.forward_difference(order, t).sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Breakpoints `lo = b_0 < ... < b_r = hi` such that the `order`-th
    /// difference is monotone on every integer interval `[b_i, b_{i+1}]`.
    fn monotone_breakpoints(&self, order: usize, lo: i128, hi: i128) -> Vec<i128> {
        if lo >= hi || self.degree() <= order + 1 {
            return if lo >= hi { vec![lo] } else { vec![lo, hi] };
        }
        let inner = self.monotone_breakpoints(order + 1, lo, hi - 1);
        let mut points: BTreeSet<i128> = inner.iter().copied().collect();
        points.insert(lo);
        points.insert(hi);
        for pair in inner.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let sa = self.difference_sign(order + 1, a);
            let sb = self.difference_sign(order + 1, b);
            if (sa >= 0 && sb >= 0) || (sa <= 0 && sb <= 0) {
                continue;
            }
            // Monotone between a and b with a strict sign change: first index on
            // the far side of zero.
            let rising = sa < 0;
            let (mut l, mut r) = (a, b);
            while l < r {
                let mid = l + (r - l) / 2;
                let s = self.difference_sign(order + 1, mid);
                let crossed = if rising { s >= 0 } else { s <= 0 };
                if crossed {
                    r = mid;
                } else {
                    l = mid + 1;
                }
            }
            points.insert(l);
        }
        points.into_iter().collect()
    }

    /// A bound `T` such that `|h(t)| > magnitude` whenever `|t| > T`.
    fn domain_bound(&self, magnitude: u128) -> i128 {
        let lead = self.coeffs[self.degree()].unsigned_abs() as u128;
        let rest: u128 = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.unsigned_abs() as u128)
            .sum();
        ((rest + magnitude) / lead + 1) as i128
    }

    /// Maximal disjoint runs `[a, b]` of `t` with `lo <= h(t) <= hi`,
    /// ascending.
    ///
    /// Requires degree >= 1 (a constant polynomial has every integer as a
    /// preimage).
    pub fn preimage_runs(&self, lo: i64, hi: i64) -> Vec<(i128, i128)> {
        assert!(self.degree() >= 1, "constant polynomial has unbounded preimages");
        if lo > hi {
            return Vec::new();
        }
        let magnitude = lo.unsigned_abs().max(hi.unsigned_abs()) as u128;
        let bound = self.domain_bound(magnitude);
        let breaks = self.monotone_breakpoints(0, -bound, bound);
        let lo_big = BigInt::from(lo);
        let hi_big = BigInt::from(hi);
        // smallest t in [a, b] satisfying a monotone predicate, b + 1 if none
        let first = |a: i128, b: i128, pred: &dyn Fn(&BigInt) -> bool| {
            let (mut l, mut r) = (a, b + 1);
            while l < r {
                let mid = l + (r - l) / 2;
                if pred(&self.eval(mid)) {
                    r = mid;
                } else {
                    l = mid + 1;
                }
            }
            l
        };
        let mut runs: Vec<(i128, i128)> = Vec::new();
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (start, stop) = if self.eval(a) <= self.eval(b) {
                (first(a, b, &|v| *v >= lo_big), first(a, b, &|v| *v > hi_big))
            } else {
                (first(a, b, &|v| *v <= hi_big), first(a, b, &|v| *v < lo_big))
            };
            if start < stop {
                runs.push((start, stop - 1));
            }
        }
        runs.sort_unstable();
        let mut merged: Vec<(i128, i128)> = Vec::with_capacity(runs.len());
        for (a, b) in runs {
            match merged.last_mut() {
                Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        merged
    }

    /// Every `(t, h(t))` with `lo <= h(t) <= hi`, ordered by `t`.
    pub fn preimages_in(&self, lo: i64, hi: i64) -> Vec<(i128, i64)> {
        self.preimage_runs(lo, hi)
            .into_iter()
            .flat_map(|(a, b)| (a..=b).map(move |t| (t, self.value_in_window(t))))
            .collect()
    }

    /// `h(t)` for a `t` already known to map into the i64 window.
    pub(crate) fn value_in_window(&self, t: i128) -> i64 {
        match self.eval_small(t) {
            Some(v) => v as i64,
            None => self.eval(t).try_into().expect("value checked against window"),
        }
    }
}

impl fmt::Display for Polynomial {
    /// Comma-separated, highest degree first (the set-spec form).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
