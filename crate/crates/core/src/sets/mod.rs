//! Forbidden difference sets: membership, enumeration and residues.
//!
//! Every family is a subset of the integers. Values handled exactly live in
//! `[-2^62, 2^62]`; anything outside is rejected with [`Error::OutOfRange`].
//!
//! Residue sets for prime-indexed families (`primes`, `primes+c`, `polyp`)
//! are defined here as `{h(u) mod m : gcd(u, m) = 1}` together with
//! `{h(p) mod m : p prime, p | m}`. Dirichlet's theorem puts infinitely many
//! primes in every unit class; the non-unit classes are reached only by the
//! finitely many primes dividing `m`.

mod poly;
pub mod primes;
mod spec;

pub use spec::parse_integer_lines;

use std::fmt;
use std::str::FromStr;

pub use poly::Polynomial;

use crate::error::{Error, Result};

/// Largest magnitude accepted by membership and enumeration.
pub const WORKING_LIMIT: i64 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `{n^2 : n >= 1}`
    Squares,
    /// `{n^2 + c : n >= 1}`
    SquaresShift(i64),
    /// `{n^k : n >= 1}`, `k >= 2`
    Powers(u32),
    Primes,
    /// `{p + c : p prime}`
    PrimesShift(i64),
    /// `{h(t) : t in Z}`
    PolyZ(Polynomial),
    /// `{h(p) : p prime}`
    PolyP(Polynomial),
    /// Finite, sorted, deduplicated.
    Explicit(Vec<i64>),
}

/// An immutable, validated forbidden-difference set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ForbiddenSet {
    family: Family,
}

/// Residue classes modulo `m` that meet `X \ {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSet {
    modulus: u64,
    members: Vec<bool>,
}

impl ResidueSet {
    pub fn new(modulus: u64, residues: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut members = vec![false; modulus as usize];
        for &r in residues {
            if r >= modulus {
                return Err(Error::InvalidArgument(format!(
                    "residue {r} outside [0, {}]",
                    modulus - 1
                )));
            }
            members[r as usize] = true;
        }
        Ok(Self { modulus, members })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, r: u64) -> bool {
        self.members[(r % self.modulus) as usize]
    }

    pub fn to_vec(&self) -> Vec<u64> {
        (0..self.modulus).filter(|&r| self.contains(r)).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Closure under negation modulo `m`.
    pub fn symmetric_closure(&self) -> Self {
        let m = self.modulus;
        let mut members = self.members.clone();
        for r in 0..m {
            if self.contains(r) {
                members[((m - r) % m) as usize] = true;
            }
        }
        Self { modulus: m, members }
    }
}

fn check_range(v: i128) -> Result<()> {
    if v.unsigned_abs() > WORKING_LIMIT as u128 {
        Err(Error::OutOfRange(v))
    } else {
        Ok(())
    }
}

/// Exact `floor(v^(1/k))` for `v >= 0`.
fn integer_root(v: u128, k: u32) -> u128 {
    if v < 2 || k == 1 {
        return v;
    }
    let mut r = (v as f64).powf(1.0 / k as f64) as u128;
    let pow_le = |r: u128| r.checked_pow(k).is_some_and(|p| p <= v);
    while !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    r
}

/// The generating polynomial and index domain of a non-explicit family.
enum Generator {
    /// `h(n)`, `n >= 1`
    Positive(Polynomial),
    /// `h(t)`, `t` any integer
    Integers(Polynomial),
    /// `h(p)`, `p` prime
    Primes(Polynomial),
}

impl ForbiddenSet {
    pub fn new(family: Family) -> Result<Self> {
        let family = match family {
            Family::Powers(k) if k < 2 => {
                return Err(Error::InvalidArgument(format!("power exponent must be >= 2, got {k}")))
            }
            Family::SquaresShift(c) | Family::PrimesShift(c) if c.unsigned_abs() > WORKING_LIMIT as u64 => {
                return Err(Error::OutOfRange(c as i128))
            }
            Family::Explicit(mut values) => {
                for &v in &values {
                    check_range(v as i128)?;
                }
                values.sort_unstable();
                values.dedup();
                Family::Explicit(values)
            }
            other => other,
        };
        Ok(Self { family })
    }

    pub fn squares() -> Self {
        Self {
            family: Family::Squares,
        }
    }

    pub fn primes() -> Self {
        Self { family: Family::Primes }
    }

    pub fn squares_shift(c: i64) -> Self {
        Self::new(Family::SquaresShift(c)).expect("shift within working range")
    }

    pub fn primes_shift(c: i64) -> Self {
        Self::new(Family::PrimesShift(c)).expect("shift within working range")
    }

    pub fn explicit(values: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::new(Family::Explicit(values.into_iter().collect()))
    }

    pub fn empty() -> Self {
        Self {
            family: Family::Explicit(Vec::new()),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    fn generator(&self) -> Option<Generator> {
        let poly = |asc: Vec<i64>| Polynomial::from_ascending_unchecked(asc);
        Some(match &self.family {
            Family::Squares => Generator::Positive(poly(vec![0, 0, 1])),
            Family::SquaresShift(c) => Generator::Positive(poly(vec![*c, 0, 1])),
            Family::Powers(k) => {
                let mut asc = vec![0; *k as usize + 1];
                asc[*k as usize] = 1;
                Generator::Positive(poly(asc))
            }
            Family::Primes => Generator::Primes(poly(vec![0, 1])),
            Family::PrimesShift(c) => Generator::Primes(poly(vec![*c, 1])),
            Family::PolyZ(h) => Generator::Integers(h.clone()),
            Family::PolyP(h) => Generator::Primes(h.clone()),
            Family::Explicit(_) => return None,
        })
    }

    /// Exact membership test.
    pub fn contains(&self, v: i64) -> Result<bool> {
        check_range(v as i128)?;
        let v128 = v as i128;
        Ok(match &self.family {
            Family::Squares => v > 0 && integer_root(v as u128, 2).pow(2) == v as u128,
            Family::SquaresShift(c) => {
                let w = v128 - *c as i128;
                w > 0 && integer_root(w as u128, 2).pow(2) == w as u128
            }
            Family::Powers(k) => v > 0 && integer_root(v as u128, *k).pow(*k) == v as u128,
            Family::Primes => primes::is_prime_i128(v128),
            Family::PrimesShift(c) => primes::is_prime_i128(v128 - *c as i128),
            Family::PolyZ(h) => match h.constant_value() {
                Some(c) => c == v,
                None => !h.preimages_in(v, v).is_empty(),
            },
            Family::PolyP(h) => match h.constant_value() {
                Some(c) => c == v,
                None => h.preimages_in(v, v).iter().any(|&(t, _)| primes::is_prime_i128(t)),
            },
            Family::Explicit(values) => values.binary_search(&v).is_ok(),
        })
    }

    /// `{x in X : lo <= x <= hi}`, ascending without duplicates.
    pub fn elements_in_range(&self, lo: i64, hi: i64) -> Result<Vec<i64>> {
        check_range(lo as i128)?;
        check_range(hi as i128)?;
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi}]")));
        }
        let shifted = |c: i64| (lo as i128 - c as i128, hi as i128 - c as i128);
        let mut out = match &self.family {
            Family::Squares => power_values(lo as i128, hi as i128, 2, 0),
            Family::SquaresShift(c) => {
                let (a, b) = shifted(*c);
                power_values(a, b, 2, *c)
            }
            Family::Powers(k) => power_values(lo as i128, hi as i128, *k, 0),
            Family::Primes => prime_values(lo as i128, hi as i128, 0),
            Family::PrimesShift(c) => {
                let (a, b) = shifted(*c);
                prime_values(a, b, *c)
            }
            Family::PolyZ(h) | Family::PolyP(h) if h.degree() == 0 => {
                let c = h.coefficients()[0];
                if (lo..=hi).contains(&c) {
                    vec![c]
                } else {
                    vec![]
                }
            }
            Family::PolyZ(h) => h.preimages_in(lo, hi).into_iter().map(|(_, v)| v).collect(),
            Family::PolyP(h) => {
                let mut out = Vec::new();
                for (a, b) in h.preimage_runs(lo, hi) {
                    if b < 2 {
                        continue;
                    }
                    for p in primes::primes_in(a.max(2) as u64, b as u64) {
                        out.push(h.value_in_window(p as i128));
                    }
                }
                out
            }
            Family::Explicit(values) => {
                let start = values.partition_point(|&v| v < lo);
                let end = values.partition_point(|&v| v <= hi);
                values[start..end].to_vec()
            }
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Residue classes modulo `m` that contain a nonzero element of X.
    ///
    /// Prime families use `{h(u) : u a unit mod m} ∪ {h(p) : p prime, p | m}`:
    /// every unit class holds infinitely many primes, and a prime outside the
    /// units must divide `m`. For prime-power moduli this is a definition of
    /// this crate rather than a settled convention.
    pub fn residues_mod(&self, m: u64) -> Result<ResidueSet> {
        if m == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut members = vec![false; m as usize];
        let mut mark = |r: u64| members[r as usize] = true;
        match self.generator() {
            None => {
                if let Family::Explicit(values) = &self.family {
                    for &v in values.iter().filter(|&&v| v != 0) {
                        mark(v.rem_euclid(m as i64) as u64);
                    }
                }
            }
            Some(Generator::Positive(h)) | Some(Generator::Integers(h)) | Some(Generator::Primes(h))
                if h.degree() == 0 =>
            {
                let c = h.coefficients()[0];
                if c != 0 {
                    mark(c.rem_euclid(m as i64) as u64);
                }
            }
            // Every class of t contains infinitely many admissible indices, and a
            // nonconstant h vanishes at finitely many of them.
            Some(Generator::Positive(h)) | Some(Generator::Integers(h)) => {
                for t in 0..m {
                    mark(h.eval_mod(t, m));
                }
            }
            Some(Generator::Primes(h)) => {
                for u in 0..m {
                    if gcd(u, m) == 1 {
                        mark(h.eval_mod(u, m));
                    }
                }
                for p in primes::prime_divisors(m) {
                    if h.eval(p as i128) != 0.into() {
                        mark(h.eval_mod(p, m));
                    }
                }
            }
        }
        Ok(ResidueSet { modulus: m, members })
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `{n^k + c : n >= 1, lo <= n^k <= hi}` where `lo, hi` are already shifted by `-c`.
fn power_values(lo: i128, hi: i128, k: u32, c: i64) -> Vec<i64> {
    if hi < 1 {
        return Vec::new();
    }
    let lo = lo.max(1) as u128;
    let hi = hi as u128;
    let mut n = integer_root(lo, k);
    if n.pow(k) < lo {
        n += 1;
    }
    n = n.max(1);
    let mut out = Vec::new();
    while let Some(p) = n.checked_pow(k).filter(|&p| p <= hi) {
        out.push((p as i128 + c as i128) as i64);
        n += 1;
    }
    out
}

fn prime_values(lo: i128, hi: i128, c: i64) -> Vec<i64> {
    if hi < 2 {
        return Vec::new();
    }
    primes::primes_in(lo.max(2) as u64, hi as u64)
        .into_iter()
        .map(|p| (p as i128 + c as i128) as i64)
        .collect()
}

impl fmt::Display for ForbiddenSet {
    /// Canonical set-specification string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shift = |f: &mut fmt::Formatter<'_>, name: &str, c: i64| {
            if c >= 0 {
                write!(f, "{name}+{c}")
            } else {
                write!(f, "{name}{c}")
            }
        };
        match &self.family {
            Family::Squares => f.write_str("squares"),
            Family::SquaresShift(c) => shift(f, "squares", *c),
            Family::Powers(k) => write!(f, "powers:{k}"),
            Family::Primes => f.write_str("primes"),
            Family::PrimesShift(c) => shift(f, "primes", *c),
            Family::PolyZ(h) => write!(f, "polyz:{h}"),
            Family::PolyP(h) => write!(f, "polyp:{h}"),
            Family::Explicit(values) => {
                f.write_str("list:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ForbiddenSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        spec::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(spec: &str) -> ForbiddenSet {
        spec.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(set("squares").contains(49).unwrap());
        assert!(set("primes-1").contains(1).unwrap());
        assert!(set("squares+2").contains(146).unwrap());
        assert!(!set("squares").contains(-4).unwrap());
        assert!(!set("squares").contains(0).unwrap());
        assert!(set("powers:3").contains(343).unwrap());
        assert!(!set("powers:3").contains(-343).unwrap());
        assert!(set("polyz:1,0,0,0").contains(-343).unwrap());
        assert!(set("polyp:1,0,1").contains(10).unwrap());
        assert!(!set("polyp:1,0,1").contains(17).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(set("squares").elements_in_range(1, 20).unwrap(), vec![1, 4, 9, 16]);
        assert_eq!(
            set("primes-1").elements_in_range(1, 13).unwrap(),
            vec![1, 2, 4, 6, 10, 12]
        );
        assert_eq!(
            set("squares+2").elements_in_range(1, 50).unwrap(),
            vec![3, 6, 11, 18, 27, 38]
        );
        assert_eq!(set("squares-5").elements_in_range(-10, 5).unwrap(), vec![-4, -1, 4]);
        assert_eq!(set("polyz:1,0,0").elements_in_range(-3, 10).unwrap(), vec![0, 1, 4, 9]);
        assert_eq!(set("list:5,-3,5,2").elements_in_range(0, 10).unwrap(), vec![2, 5]);
    }

    #[test]
    fn residue_examples() {
        assert_eq!(set("primes").residues_mod(4).unwrap().to_vec(), vec![1, 2, 3]);
        assert_eq!(set("squares+3").residues_mod(3).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(set("squares").residues_mod(5).unwrap().to_vec(), vec![0, 1, 4]);
        assert_eq!(set("squares+3").residues_mod(8).unwrap().to_vec(), vec![3, 4, 7]);
        // p - 2 is a nonzero even number for no prime p.
        assert_eq!(set("primes-2").residues_mod(2).unwrap().to_vec(), vec![1]);
        assert_eq!(set("list:0,4").residues_mod(4).unwrap().to_vec(), vec![0]);
        assert_eq!(set("list:0").residues_mod(3).unwrap().to_vec(), Vec::<u64>::new());
        assert!(set("primes").residues_mod(0).is_err());
    }

    #[test]
    fn range_errors() {
        let s = set("squares");
        assert!(matches!(s.contains(i64::MAX), Err(Error::OutOfRange(_))));
        assert!(matches!(s.elements_in_range(0, i64::MIN), Err(Error::OutOfRange(_))));
        assert!(s.contains(WORKING_LIMIT).unwrap());
        assert!(matches!(s.elements_in_range(5, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn constructor_validation() {
        assert!(ForbiddenSet::new(Family::Powers(1)).is_err());
        let e = ForbiddenSet::explicit([3, 1, 3, 2]).unwrap();
        assert_eq!(e.family(), &Family::Explicit(vec![1, 2, 3]));
    }

    #[test]
    fn residue_symmetric_closure() {
        let r = ResidueSet::new(8, &[3, 4]).unwrap().symmetric_closure();
        assert_eq!(r.to_vec(), vec![3, 4, 5]);
        assert!(ResidueSet::new(4, &[4]).is_err());
    }
}
