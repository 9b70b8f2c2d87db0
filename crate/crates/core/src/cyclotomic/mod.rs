//! Cyclotomic and inverse cyclotomic polynomials, the closed form for
//! `Φ_pq`, and support/gap analysis of candidate polynomials.

mod poly;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use poly::IntPolynomial;

use crate::arith::{self, ArithError};

/// Largest degree materialized as a dense coefficient vector.
pub const DENSE_DEGREE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact over the integers")]
    NotExact,
    #[error("the zero polynomial has no support")]
    ZeroPolynomial,
    #[error("index must be positive")]
    ZeroIndex,
    #[error("inverse cyclotomic polynomials need n >= 2, got {0}")]
    InverseIndex(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("closed form needs p < q, got p = {p}, q = {q}")]
    PrimeOrder { p: u64, q: u64 },
    #[error("degree {0} exceeds the dense storage limit")]
    DegreeTooLarge(u64),
    #[error("residue set must contain 0")]
    MissingZero,
    #[error("residue {value} is outside [0, {n})")]
    ResidueRange { value: u64, n: u64 },
    #[error("cannot parse polynomial {0:?}")]
    Parse(alloc::string::String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Summary numbers for `Φ_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicStats {
    pub n: u64,
    pub phi: u64,
    pub radical: u64,
    pub nonzero_count: usize,
    pub max_gap: usize,
}

/// `Φ_n`.
///
/// Reduces to the radical (`Φ_n(t) = Φ_{rad n}(t^{n/rad n})`), strips a
/// factor of two (`Φ_{2m}(t) = Φ_m(−t)` for odd `m > 1`), and builds the
/// remaining squarefree odd case as the truncated power series
/// `∏_{d | r} (1 − t^d)^{μ(r/d)}`.
pub fn cyclotomic(n: u64) -> Result<IntPolynomial, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroIndex);
    }
    let phi = arith::euler_phi(n)?;
    if phi > DENSE_DEGREE_LIMIT {
        return Err(PolyError::DegreeTooLarge(phi));
    }
    let rad = arith::radical(n)?;
    let base = if rad % 2 == 0 && rad > 2 {
        squarefree_odd(rad / 2)?.negate_variable()
    } else {
        squarefree_odd(rad)?
    };
    Ok(base.compose_power((n / rad) as usize))
}

fn squarefree_odd(r: u64) -> Result<IntPolynomial, PolyError> {
    match r {
        1 => return Ok(IntPolynomial::from_i64(&[-1, 1])),
        2 => return Ok(IntPolynomial::from_i64(&[1, 1])),
        _ => {}
    }
    let deg = arith::euler_phi(r)? as usize;
    let mut c = alloc::vec![BigInt::zero(); deg + 1];
    c[0] = BigInt::one();
    for d in arith::divisors(r)? {
        let d = d as usize;
        if d > deg {
            // (1 − t^d)^{±1} ≡ 1 modulo t^{deg+1}
            continue;
        }
        match arith::mobius(r / d as u64)? {
            1 => {
                for k in (d..=deg).rev() {
                    let prev = c[k - d].clone();
                    c[k] -= prev;
                }
            }
            -1 => {
                for k in d..=deg {
                    let prev = c[k - d].clone();
                    c[k] += prev;
                }
            }
            _ => {}
        }
    }
    Ok(IntPolynomial::from_coeffs(c))
}

/// `Φ_n` computed as `(t^n − 1) / ∏_{d | n, d < n} Φ_d`, recursing on the
/// proper divisors. Slower than [`cyclotomic`] and kept as an independent
/// route for cross-checks.
pub fn cyclotomic_by_division(n: u64) -> Result<IntPolynomial, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroIndex);
    }
    let mut memo: BTreeMap<u64, IntPolynomial> = BTreeMap::new();
    for d in arith::divisors(n)? {
        let mut p = IntPolynomial::x_pow_minus_one(d as usize);
        for e in arith::divisors(d)? {
            if e < d {
                p = p.exact_divide(&memo[&e])?;
            }
        }
        memo.insert(d, p);
    }
    Ok(memo.remove(&n).expect("n divides itself"))
}

/// Process-local memo of cyclotomic polynomials.
#[derive(Debug, Default, Clone)]
pub struct CyclotomicCache {
    table: BTreeMap<u64, IntPolynomial>,
}

impl CyclotomicCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, n: u64) -> Result<&IntPolynomial, PolyError> {
        if let alloc::collections::btree_map::Entry::Vacant(e) = self.table.entry(n) {
            e.insert(cyclotomic(n)?);
        }
        Ok(&self.table[&n])
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// `(t^n − 1) / Φ_n(t)`.
pub fn inverse_cyclotomic(n: u64) -> Result<IntPolynomial, PolyError> {
    if n < 2 {
        return Err(PolyError::InverseIndex(n));
    }
    if n > DENSE_DEGREE_LIMIT {
        return Err(PolyError::DegreeTooLarge(n));
    }
    IntPolynomial::x_pow_minus_one(n as usize).exact_divide(&cyclotomic(n)?)
}

/// `Φ_pq` from the Lam–Leung description, with `p̄ = p⁻¹ mod q` and
/// `q̄ = q⁻¹ mod p`: coefficient `+1` at `px + qy` for `x < p̄, y < q̄`, and
/// `−1` at `px + qy − pq` for `p̄ ≤ x < q, q̄ ≤ y < p`.
pub fn lam_leung(p: u64, q: u64) -> Result<IntPolynomial, PolyError> {
    for x in [p, q] {
        if !arith::is_prime(x) {
            return Err(PolyError::NotPrime(x));
        }
    }
    if p >= q {
        return Err(PolyError::PrimeOrder { p, q });
    }
    let degree = (p - 1) * (q - 1);
    if degree > DENSE_DEGREE_LIMIT {
        return Err(PolyError::DegreeTooLarge(degree));
    }
    let p_bar = arith::mod_inverse(p, q).expect("distinct primes");
    let q_bar = arith::mod_inverse(q, p).expect("distinct primes");
    let mut coeffs = alloc::vec![BigInt::zero(); degree as usize + 1];
    for x in 0..p_bar {
        for y in 0..q_bar {
            coeffs[(p * x + q * y) as usize] += 1;
        }
    }
    for x in p_bar..q {
        for y in q_bar..p {
            coeffs[(p * x + q * y - p * q) as usize] -= 1;
        }
    }
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// `2·p̄·q̄ − 1`, the number of nonzero coefficients of `Φ_pq`.
pub fn lam_leung_term_count(p: u64, q: u64) -> Result<u64, PolyError> {
    let p_bar = arith::mod_inverse(p, q).ok_or(PolyError::PrimeOrder { p, q })?;
    let q_bar = arith::mod_inverse(q, p).ok_or(PolyError::PrimeOrder { p, q })?;
    Ok(2 * p_bar * q_bar - 1)
}

/// `a / b` when `b` divides `a` exactly.
pub fn exact_divide(a: &IntPolynomial, b: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    a.exact_divide(b)
}

/// Sorted support and the largest difference between consecutive exponents.
pub fn support_and_gaps(h: &IntPolynomial) -> Result<(Vec<usize>, usize), PolyError> {
    if h.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let support = h.support();
    let gap = support.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    Ok((support, gap))
}

/// True when no nonzero `j ∈ J` has `−j mod n ∈ J`.
pub fn is_admissible_support(j: &[u64], n: u64) -> Result<bool, PolyError> {
    if !j.contains(&0) {
        return Err(PolyError::MissingZero);
    }
    if let Some(&value) = j.iter().find(|&&x| x >= n) {
        return Err(PolyError::ResidueRange { value, n });
    }
    Ok(j.iter().all(|&x| x == 0 || !j.contains(&(n - x))))
}

pub fn cyclotomic_stats(n: u64) -> Result<CyclotomicStats, PolyError> {
    let phi_n = cyclotomic(n)?;
    let (support, max_gap) = support_and_gaps(&phi_n)?;
    Ok(CyclotomicStats {
        n,
        phi: arith::euler_phi(n)?,
        radical: arith::radical(n)?,
        nonzero_count: support.len(),
        max_gap,
    })
}
