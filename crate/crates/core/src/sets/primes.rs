//! Primality and prime enumeration over the signed working range.

/// Base primes are sieved up to this bound; larger prime factors are
/// ruled out by Miller-Rabin on the survivors.
const BASE_SIEVE_LIMIT: u64 = 1 << 20;
const SEGMENT: u64 = 1 << 16;

/// Deterministic for every `u64` (Miller-Rabin with a fixed witness set).
pub fn is_prime(n: u64) -> bool {
    primal::is_prime(n)
}

/// Signed convenience wrapper: negative values, 0 and 1 are not prime.
pub fn is_prime_i128(n: i128) -> bool {
    n >= 2 && n <= u64::MAX as i128 && is_prime(n as u64)
}

/// All primes in `[lo, hi]`, ascending, via a segmented sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }
    let root = hi.isqrt();
    let base_limit = root.min(BASE_SIEVE_LIMIT);
    let base: Vec<u64> = if base_limit >= 2 {
        primal::Sieve::new(base_limit as usize)
            .primes_from(0)
            .map(|p| p as u64)
            .collect()
    } else {
        Vec::new()
    };
    let needs_confirmation = root > BASE_SIEVE_LIMIT;

    let mut out = Vec::new();
    let mut seg_lo = lo;
    loop {
        let seg_hi = hi.min(seg_lo.saturating_add(SEGMENT - 1));
        let width = (seg_hi - seg_lo + 1) as usize;
        let mut composite = vec![false; width];
        for &p in &base {
            if p.saturating_mul(p) > seg_hi {
                break;
            }
            let first = (p * p).max(seg_lo.div_ceil(p) * p);
            let mut k = first;
            while k <= seg_hi {
                composite[(k - seg_lo) as usize] = true;
                k += p;
            }
        }
        for (offset, &c) in composite.iter().enumerate() {
            let v = seg_lo + offset as u64;
            if !c && (!needs_confirmation || is_prime(v)) {
                out.push(v);
            }
        }
        if seg_hi == hi {
            break;
        }
        seg_lo = seg_hi + 1;
    }
    out
}

/// Distinct prime divisors of `m`, ascending.
pub fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}
