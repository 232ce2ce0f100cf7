//! Primality testing and integer factorization.
//!
//! Miller-Rabin with the deterministic 64-bit base set; trial division to
//! 10^6 followed by Pollard's rho (Brent's variant) for larger cofactors.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Primes are removed by trial division up to this bound.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut r) = (n - 1, 0u32);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin over the fixed base set; exact below 3.3e24, probabilistic above.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let r = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> r;
    'witness: for &a in &MR_BASES {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..r {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`, if one exists below `bound`.
pub fn next_prime(n: u64, bound: u64) -> Option<u64> {
    (n.max(2)..bound).find(|&k| is_prime_u64(k))
}

/// Result of factoring: prime factors found and any composite cofactor that
/// Pollard's rho could not split within its iteration budget.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    pub primes: Vec<BigUint>,
    pub unfactored: Vec<BigUint>,
}

/// Distinct prime factors of `n` (ascending).
pub fn factor(n: &BigUint) -> Factorization {
    let mut out = Factorization::default();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND {
        let bp = BigUint::from(p);
        if (&bp * &bp) > rest {
            break;
        }
        if (&rest % &bp).is_zero() {
            out.primes.push(bp.clone());
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_prime_big(&m) {
                out.primes.push(m);
                continue;
            }
            match pollard_brent(&m) {
                Some(f) => {
                    let g = &m / &f;
                    stack.push(f);
                    stack.push(g);
                }
                None => out.unfactored.push(m),
            }
        }
    }
    out.primes.sort();
    out.primes.dedup();
    out.unfactored.sort();
    out
}

/// A non-trivial factor of composite `n`, or `None` after the iteration budget.
fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    const BUDGET: u64 = 2_000_000;
    let one = BigUint::one();
    for c in 1u32..=20 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        let m = 128u64;
        while g == one && spent < BUDGET {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
                spent += m;
            }
            r *= 2;
        }
        if g == *n {
            // backtrack one step at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut is = vec![true; limit + 1];
        is[0] = false;
        is[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if is[i] {
                let mut j = i * i;
                while j <= limit {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let s = sieve(100_000);
        for (n, &expected) in s.iter().enumerate() {
            assert_eq!(is_prime_u64(n as u64), expected, "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn factors_mersenne_numbers() {
        // 2^67 - 1 = 193707721 * 761838257287
        let n = (BigUint::one() << 67u32) - BigUint::one();
        let f = factor(&n);
        assert_eq!(f.primes, vec![BigUint::from(193_707_721u64), BigUint::from(761_838_257_287u64)]);
        assert!(f.unfactored.is_empty());
        let f = factor(&BigUint::from(2u64 * 2 * 3 * 31 * 31));
        assert_eq!(f.primes, vec![2u32, 3, 31].into_iter().map(BigUint::from).collect::<Vec<_>>());
    }

    #[test]
    fn next_prime_search() {
        assert_eq!(next_prime(14, 100), Some(17));
        assert_eq!(next_prime(0, 100), Some(2));
        assert_eq!(next_prime(24, 29), None);
    }
}
