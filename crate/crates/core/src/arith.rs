//! Integer utilities shared across the crate: gcd, prime sieves, deterministic
//! Miller-Rabin, Pollard rho and small factorization.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Floor of the a-th root of m, for a >= 1.
pub fn nth_root_floor(m: u128, a: u32) -> u64 {
    assert!(a >= 1);
    if a == 1 {
        return m.min(u64::MAX as u128) as u64;
    }
    let mut lo: u64 = 0;
    let mut hi: u64 = 1;
    while pow_u128(hi as u128, a).map_or(false, |v| v <= m) {
        if hi > u64::MAX / 2 {
            hi = u64::MAX;
            break;
        }
        hi *= 2;
    }
    // invariant: lo^a <= m < (hi+1)^a is not yet established; binary search on [lo, hi]
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        match pow_u128(mid as u128, a) {
            Some(v) if v <= m => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

/// x^a in u128, None on overflow.
pub fn pow_u128(x: u128, a: u32) -> Option<u128> {
    let mut r: u128 = 1;
    for _ in 0..a {
        r = r.checked_mul(x)?;
    }
    Some(r)
}

/// Primes up to n inclusive.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

fn mulmod_u128(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m <= u64::MAX so the product fits u128
    debug_assert!(m <= u64::MAX as u128);
    (a * b) % m
}

fn powmod_u64(mut base: u128, mut exp: u64, m: u128) -> u128 {
    let mut acc: u128 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for u64 (the 13 smallest prime bases decide
/// primality for everything below 3.3e24, in particular for all of u64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let n128 = n as u128;
    'base: for &b in &MR_BASES {
        let mut x = powmod_u64(b as u128, d, n128);
        if x == 1 || x == n128 - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u128(x, x, n128);
            if x == n128 - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on big integers. Exact below 3.3e24; for larger inputs the
/// fixed 13-base test is a strong pseudoprimality check.
pub fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return false;
    }
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'base: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Brent-style Pollard rho; returns a nontrivial factor of composite odd n,
/// or None if the fixed parameter schedule fails.
pub fn pollard_rho_u64(n: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let n128 = n as u128;
    for c in 1..20u128 {
        let f = |x: u128| (mulmod_u128(x, x, n128) + c) % n128;
        let mut x: u128 = 2;
        let mut y: u128 = 2;
        let mut d: u64 = 1;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u64(diff as u64, n);
            count += 1;
            if count > 1 << 22 {
                break;
            }
        }
        if d != 1 && d != n {
            return Some(d);
        }
    }
    None
}

/// Full factorization of a u64 (trial division then rho on cofactors).
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, e: u32, out: &mut Vec<(u64, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += e;
        } else {
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            push(p, e, &mut out);
        }
    }
    let mut p = 53u64;
    while p * p <= n && p < 100_000 {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            push(p, e, &mut out);
        }
        p += 2;
    }
    // remaining cofactor is 1, prime, or a product of primes > 1e5
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push(m, 1, &mut out);
        } else {
            let d = pollard_rho_u64(m).expect("rho failed on a u64 composite");
            stack.push(d);
            stack.push(m / d);
        }
    }
    out.sort_unstable();
    out
}

/// Outcome of asking whether an integer has a prime factor >= n_min.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LargeFactor {
    Yes,
    No,
    /// Factorization gave up on a large composite cofactor; the answer could
    /// be either way. Callers report this bucket separately.
    Unresolved,
}

/// Does `value` have a prime factor >= n_min? Zero counts as Yes (every prime
/// divides zero). Trial division up to `trial_bound` (at least n_min is
/// attempted), deterministic Miller-Rabin on the cofactor, one Pollard rho
/// attempt on u64-sized composites.
pub fn has_prime_factor_geq(value: &BigUint, n_min: u64, trial_bound: u64) -> LargeFactor {
    if value.is_zero() {
        return LargeFactor::Yes;
    }
    if value.is_one() {
        return LargeFactor::No;
    }
    let mut v = value.clone();
    let strip_to = trial_bound.min(n_min.saturating_sub(1));
    for p in primes_upto(strip_to) {
        let pb = BigUint::from(p);
        while (&v % &pb).is_zero() {
            v /= &pb;
        }
        if v.is_one() {
            return LargeFactor::No;
        }
    }
    if v.is_one() {
        return LargeFactor::No;
    }
    if n_min <= trial_bound.saturating_add(1) {
        // everything below n_min was stripped, so any remaining factor works
        return LargeFactor::Yes;
    }
    // remaining factors exceed trial_bound but may still be below n_min
    if is_prime_biguint(&v) {
        return if v >= BigUint::from(n_min) {
            LargeFactor::Yes
        } else {
            LargeFactor::No
        };
    }
    if let Some(small) = v.to_u64() {
        if let Some(d) = pollard_rho_u64(small) {
            let a = has_prime_factor_geq(&BigUint::from(d), n_min, trial_bound);
            if a == LargeFactor::Yes {
                return LargeFactor::Yes;
            }
            let b = has_prime_factor_geq(&BigUint::from(small / d), n_min, trial_bound);
            if b == LargeFactor::Yes {
                return LargeFactor::Yes;
            }
            if a == LargeFactor::No && b == LargeFactor::No {
                return LargeFactor::No;
            }
        }
    }
    LargeFactor::Unresolved
}

/// tau_3(d) for squarefree d with `omega` prime factors: ordered triples
/// (a,b,c) with abc = d.
pub fn tau3_squarefree(omega: u32) -> u64 {
    3u64.pow(omega)
}
