//! Elementary number theory on machine integers.

use alloc::vec::Vec;

use thiserror::Error;

/// Largest integer factored by trial division.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} exceeds the trial-division limit; supply a factorization")]
    TooLargeToFactor(u64),
    #[error("zero has no factorization")]
    Zero,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `None` on overflow.
pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    if n > TRIAL_DIVISION_LIMIT {
        return Err(ArithError::TooLargeToFactor(n));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

pub fn euler_phi(n: u64) -> Result<u64, ArithError> {
    Ok(factorize(n)?
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> Result<u64, ArithError> {
    Ok(factorize(n)?.iter().map(|&(p, _)| p).product())
}

/// Möbius function.
pub fn mobius(n: u64) -> Result<i8, ArithError> {
    let f = factorize(n)?;
    if f.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>, ArithError> {
    let mut divs = alloc::vec![1u64];
    for (p, e) in factorize(n)? {
        let base = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(base.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`, if it fits in a `u64`.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.checked_add(1)?;
    while !is_prime(c) {
        c = c.checked_add(1)?;
    }
    Some(c)
}

/// Inverse of `a` modulo `m` in `[0, m)`, when `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_radical() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(105).unwrap(), 48);
        assert_eq!(euler_phi(50625).unwrap(), 27000);
        assert_eq!(radical(72).unwrap(), 6);
        assert_eq!(radical(1).unwrap(), 1);
        assert!(factorize(TRIAL_DIVISION_LIMIT + 1).is_err());
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12).unwrap(), [1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1).unwrap(), [1]);
    }

    #[test]
    fn primality() {
        let sieve: Vec<u64> = (0..2000).filter(|&n| is_prime(n)).collect();
        let naive: Vec<u64> = (0..2000u64)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(sieve, naive);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(next_prime(15), Some(17));
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 5), Some(2));
        assert_eq!(mod_inverse(5, 3), Some(2));
        assert_eq!(mod_inverse(4, 8), None);
    }
}
