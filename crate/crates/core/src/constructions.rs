//! Lower-bound constructions and the `n = Q·r^s` family of upper bounds.
//!
//! The family takes `M` consecutive primes `p_j > M` with
//! `1/2 < ∏(1 − 1/p_j)`, `r = ∏ p_j`, the least prime `Q > r`, and
//! `h = Φ_Q·Φ_{r^s} = (1 + t + … + t^{Q−1})·Φ_r(t^{r^{s−1}})`. Since
//! `r^{s−1} > Q` the support blocks do not overlap, so `J = supp h` is
//! `{x + ℓ·r^{s−1} : 0 ≤ x < Q, ℓ ∈ supp Φ_r}` and is never expanded.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::abelian::{GroupElement, GroupSpec};
use crate::arith::{is_prime, next_prime};
use crate::cyclotomic::{cyclotomic, PolyError};
use crate::oracle::{exact_d, OracleError, DEFAULT_VERTEX_CAP};
use crate::Interrupt;

/// Exhaustive slab checks need `(n − 1)^N` at most this.
pub const SLAB_CHECK_LIMIT: u64 = 1_000_000;

/// Largest exponent denominator accepted for `ε`.
pub const MAX_EPS_DENOMINATOR: u64 = 64;

/// Largest `s` tried by the generator.
pub const MAX_S: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("n must be at least 3, got {0}")]
    ModulusTooSmall(u64),
    #[error("N must be at least 1")]
    ZeroLength,
    #[error("(n - 1)^N = {0} exceeds the exhaustive-check limit")]
    CheckTooLarge(BigUint),
    #[error("M must be at least 2, got {0}")]
    SmallM(u64),
    #[error("epsilon {0}/{1} is outside (0, 3/4]")]
    EpsRange(u64, u64),
    #[error("epsilon denominator {0} exceeds {MAX_EPS_DENOMINATOR}")]
    EpsDenominator(u64),
    #[error("prime search overflowed u64")]
    PrimeOverflow,
    #[error("no prime in (r, 2r) for r = {0}")]
    NoChebyshevPrime(u64),
    #[error("no s in [3, {MAX_S}] passes every bullet")]
    NoAdmissibleS,
    #[error("instance failed verification: {0}")]
    Unverified(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Coefficients of `(1 + t + … + t^{n−2})^N` up to `t^upto`, indexed by sum.
fn slab_distribution<T>(n: u64, big_n: u64, upto: usize) -> Vec<T>
where
    T: Clone + Zero + One + for<'a> core::ops::AddAssign<&'a T> + for<'a> core::ops::SubAssign<&'a T>,
{
    let w = (n - 1) as usize;
    let mut dist = vec![T::one()];
    for _ in 0..big_n {
        let len = (dist.len() + w - 1).min(upto + 1);
        let mut next = Vec::with_capacity(len);
        let mut window = T::zero();
        for s in 0..len {
            if s < dist.len() {
                window += &dist[s];
            }
            if s >= w {
                window -= &dist[s - w];
            }
            next.push(window.clone());
        }
        dist = next;
    }
    dist
}

/// Target coordinate sum `⌊(n − 2)N/2⌋`.
pub fn slab_target(n: u64, big_n: u64) -> u64 {
    (n - 2) * big_n / 2
}

/// Number of `a ∈ {0, …, n−2}^N` with `Σ a_i = ⌊(n−2)N/2⌋`, a lower bound
/// on `D_{Z_n}({0,1}, N)`.
pub fn alon_slab_size(n: u64, big_n: u64) -> Result<BigUint, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::ModulusTooSmall(n));
    }
    if big_n == 0 {
        return Err(ConstructionError::ZeroLength);
    }
    let target = slab_target(n, big_n) as usize;
    let fits = big_n <= 127 && (n as u128 - 1).checked_pow(big_n as u32).is_some();
    Ok(if fits {
        BigUint::from(slab_distribution::<u128>(n, big_n, target)[target])
    } else {
        slab_distribution::<BigUint>(n, big_n, target)[target].clone()
    })
}

/// Calls `f` on every slab member.
fn for_each_slab_member(n: u64, big_n: usize, target: u64, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    fn rec(
        n: u64,
        pos: usize,
        left: u64,
        cur: &mut Vec<u64>,
        big_n: usize,
        f: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if pos == big_n {
            return left != 0 || f(cur);
        }
        let rest = (big_n - pos - 1) as u64 * (n - 2);
        let lo = left.saturating_sub(rest);
        let hi = left.min(n - 2);
        for a in lo..=hi {
            cur.push(a);
            let ok = rec(n, pos + 1, left - a, cur, big_n, f);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut cur = Vec::with_capacity(big_n);
    rec(n, 0, target, &mut cur, big_n, f)
}

/// Whether some `δ ∈ {0,1}^N \ {0}` has `b − δ mod n` in the slab.
fn has_slab_neighbor(b: &[u64], n: u64, target: u64) -> bool {
    fn rec(b: &[u64], n: u64, pos: usize, sum: u64, moved: bool, target: u64) -> bool {
        if pos == b.len() {
            return moved && sum == target;
        }
        let rest_max = (b.len() - pos - 1) as u64 * (n - 2);
        for delta in [0u64, 1] {
            let v = (b[pos] + n - delta) % n;
            if v > n - 2 {
                continue;
            }
            let s = sum + v;
            if s > target || s + rest_max < target {
                continue;
            }
            if rec(b, n, pos + 1, s, moved || delta == 1, target) {
                return true;
            }
        }
        false
    }
    rec(b, n, 0, 0, false, target)
}

/// Exhaustive check that no two distinct slab members differ by a vector
/// in `{0,1}^N`.
pub fn slab_is_valid(n: u64, big_n: u64) -> Result<bool, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::ModulusTooSmall(n));
    }
    if big_n == 0 {
        return Err(ConstructionError::ZeroLength);
    }
    let space = BigUint::from(n - 1).pow(big_n as u32);
    if space > BigUint::from(SLAB_CHECK_LIMIT) {
        return Err(ConstructionError::CheckTooLarge(space));
    }
    let target = slab_target(n, big_n);
    Ok(for_each_slab_member(n, big_n as usize, target, &mut |b| {
        !has_slab_neighbor(b, n, target)
    }))
}

/// Slab members as residues, for cross-checks against the oracle.
pub fn slab_members(n: u64, big_n: u64) -> Result<Vec<Vec<u64>>, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::ModulusTooSmall(n));
    }
    let space = BigUint::from(n - 1).pow(big_n as u32);
    if space > BigUint::from(SLAB_CHECK_LIMIT) {
        return Err(ConstructionError::CheckTooLarge(space));
    }
    let mut out = Vec::new();
    for_each_slab_member(n, big_n as usize, slab_target(n, big_n), &mut |b| {
        out.push(b.to_vec());
        true
    });
    Ok(out)
}

/// `D_G(J, N) ≥ D_G(J, 1)^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLowerBound {
    pub value: BigUint,
    pub base: BigUint,
    /// `false` if the `N = 1` oracle was interrupted, leaving a lower bound.
    pub exact_base: bool,
}

pub fn product_lower_bound(
    group: &GroupSpec,
    j: &[GroupElement],
    big_n: u64,
    interrupt: &dyn Interrupt,
) -> Result<ProductLowerBound, ConstructionError> {
    if big_n == 0 {
        return Err(ConstructionError::ZeroLength);
    }
    let d1 = exact_d(group, j, 1, DEFAULT_VERTEX_CAP, interrupt)?;
    Ok(ProductLowerBound {
        value: d1.value.pow(big_n as u32),
        base: d1.value,
        exact_base: d1.exact,
    })
}

/// `⌈x^{1/k}⌉`.
fn ceil_root(x: &BigUint, k: u32) -> BigUint {
    let r = x.nth_root(k);
    if r.pow(k) < *x {
        r + 1u32
    } else {
        r
    }
}

/// One member of the construction family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm17Instance {
    pub m: u64,
    /// `ε = eps.0 / eps.1`, reduced.
    pub eps: (u64, u64),
    pub primes: Vec<u64>,
    pub r: u64,
    pub q: u64,
    pub s: u32,
    pub n: BigUint,
    /// `deg h = Q − 1 + φ(r^s)`.
    pub d: BigUint,
    /// Exponents `ℓ` with nonzero coefficient in `Φ_r`.
    pub phi_r_support: Vec<u64>,
    /// `|J| = Q·|supp Φ_r|`.
    pub j_size: BigUint,
    /// Elements added to `J` beyond the support of `h`, for probing the
    /// verifier.
    pub extra: Vec<BigUint>,
}

impl Thm17Instance {
    /// `r^{s−1}`, the block spacing.
    pub fn spacing(&self) -> BigUint {
        BigUint::from(self.r).pow(self.s - 1)
    }

    /// `φ(r^s) = r^{s−1}·∏(p_j − 1)`.
    pub fn phi_r_s(&self) -> BigUint {
        self.primes.iter().fold(self.spacing(), |acc, &p| acc * (p - 1))
    }

    /// Every element of `J \ {0}` (support elements, then extras).
    pub fn nonzero_elements(&self) -> impl Iterator<Item = BigUint> + '_ {
        let spacing = self.spacing();
        let q = self.q;
        self.phi_r_support
            .iter()
            .flat_map(move |&l| {
                let base = &spacing * l;
                (0..q).map(move |x| &base + x)
            })
            .filter(|a| !a.is_zero())
            .chain(self.extra.iter().cloned())
    }

    /// `Φ_Q · Φ_{r^s}` in words.
    pub fn h_description(&self) -> String {
        format!("Phi_{} * Phi_{}^{}", self.q, self.r, self.s)
    }

    /// Whether `ε` is zero, making the `n^{ε/3}` bullet vacuous.
    pub fn degenerate_eps(&self) -> bool {
        self.eps.0 == 0
    }
}

/// The four bullets of the construction theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bullet {
    /// `n` has at least `M` prime divisors, the smallest at least `M`.
    PrimeDivisors,
    /// `J ∩ (−J) = {0}`, `1 ∈ J`, `|J| ≥ n^{ε/3}`.
    JShape,
    /// `d ≥ n^{1−ε/3}/8` and `d ≥ n^{1−ε}|J|`.
    Degree,
    /// `[Z_n : ⟨a⟩] ≤ d − n^{1−ε/3}/24` for every `a ∈ J \ {0}`.
    Index,
}

impl fmt::Display for Bullet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bullet::PrimeDivisors => "i",
            Bullet::JShape => "ii",
            Bullet::Degree => "iii",
            Bullet::Index => "iv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BulletCheck {
    pub bullet: Bullet,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm17Report {
    /// Structural invariants: primes, window product, `Q`, block spacing.
    pub structure: Result<(), String>,
    pub bullets: Vec<BulletCheck>,
    pub degenerate_eps: bool,
    /// `ε ≤ 3/(s+1)`.
    pub eps_below_three_over_s1: bool,
    /// `4n^ε > n^{3/(s+1)}`.
    pub four_n_eps_condition: bool,
}

impl Thm17Report {
    pub fn passed(&self) -> bool {
        self.structure.is_ok() && self.bullets.iter().all(|b| b.passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        if let Err(e) = &self.structure {
            return Some(format!("structure: {e}"));
        }
        self.bullets
            .iter()
            .find(|b| !b.passed)
            .map(|b| format!("bullet ({}): {}", b.bullet, b.detail))
    }
}

fn check_structure(inst: &Thm17Instance) -> Result<(), String> {
    let primes = &inst.primes;
    if primes.len() < inst.m as usize {
        return Err(format!("{} primes, need {}", primes.len(), inst.m));
    }
    if !primes.windows(2).all(|w| w[0] < w[1]) || !primes.iter().all(|&p| is_prime(p) && p > inst.m) {
        return Err("primes must be increasing primes above M".into());
    }
    let prod: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
    if prod != BigUint::from(inst.r) {
        return Err("r is not the product of the primes".into());
    }
    let num: BigUint = primes.iter().map(|&p| BigUint::from(p - 1)).product();
    if !(&num * 2u32 > prod && num < prod) {
        return Err("prod(1 - 1/p) is not in (1/2, 1)".into());
    }
    if !(is_prime(inst.q) && inst.q > inst.r && (inst.q as u128) < 2 * inst.r as u128) {
        return Err(format!("Q = {} is not a prime in (r, 2r)", inst.q));
    }
    if inst.s < 2 || inst.spacing() <= BigUint::from(inst.q) {
        return Err("blocks overlap: r^(s-1) <= Q".into());
    }
    if inst.n != BigUint::from(inst.q) * BigUint::from(inst.r).pow(inst.s) {
        return Err("n != Q r^s".into());
    }
    if inst.d != BigUint::from(inst.q - 1) + inst.phi_r_s() {
        return Err("d != Q - 1 + phi(r^s)".into());
    }
    let phi_r = cyclotomic(inst.r).map_err(|e| format!("{e}"))?;
    let supp: Vec<u64> = phi_r.support().into_iter().map(|k| k as u64).collect();
    if supp != inst.phi_r_support {
        return Err("support of Phi_r does not match".into());
    }
    if inst.j_size != BigUint::from(inst.q) * supp.len() {
        return Err("|J| != Q * |supp Phi_r|".into());
    }
    Ok(())
}

fn pass(bullet: Bullet, detail: String) -> BulletCheck {
    BulletCheck {
        bullet,
        passed: true,
        detail,
    }
}

fn fail(bullet: Bullet, detail: String) -> BulletCheck {
    BulletCheck {
        bullet,
        passed: false,
        detail,
    }
}

/// `⌈n^{1−ε/3}⌉`, the threshold shared by bullets (iii) and (iv).
fn third_threshold(n: &BigUint, u: u64, v: u64) -> BigUint {
    // n^{(3v − u)/(3v)}
    ceil_root(&n.pow((3 * v - u) as u32), (3 * v) as u32)
}

/// Verifies every bullet in exact integer arithmetic.
pub fn thm17_verify(inst: &Thm17Instance) -> Thm17Report {
    let (u, v) = inst.eps;
    let n = &inst.n;
    let d = &inst.d;
    let structure = check_structure(inst);
    let mut bullets = Vec::with_capacity(4);

    // (i)
    let distinct = inst.primes.len() as u64 + 1;
    let smallest = inst.primes.first().copied().unwrap_or(0).min(inst.q);
    bullets.push(if distinct >= inst.m && smallest >= inst.m {
        pass(Bullet::PrimeDivisors, format!("{distinct} prime divisors, smallest {smallest}"))
    } else {
        fail(Bullet::PrimeDivisors, format!("{distinct} prime divisors, smallest {smallest}"))
    });

    // (ii): max J = d, so J ∩ (−J) = {0} iff 2d < n (extras checked too)
    let j_size = &inst.j_size + inst.extra.len();
    let max_j = inst.extra.iter().fold(d.clone(), |m, a| m.max(a.clone()));
    let antisym = &max_j * 2u32 < *n && inst.extra.iter().all(|a| !a.is_zero());
    let one_in_j = inst.q >= 2;
    let big_enough = j_size.pow((3 * v) as u32) >= n.pow(u as u32);
    bullets.push(match (antisym, one_in_j, big_enough) {
        (true, true, true) => pass(Bullet::JShape, format!("|J| = {j_size}, max J = {max_j}")),
        (false, _, _) => fail(Bullet::JShape, format!("J meets -J: max element {max_j}, n = {n}")),
        (_, false, _) => fail(Bullet::JShape, "1 is not in J".into()),
        _ => fail(Bullet::JShape, format!("|J| = {j_size} < n^(eps/3)")),
    });

    // (iii)
    let c = third_threshold(n, u, v);
    let first = d * 8u32 >= c;
    let second = d.pow(v as u32) >= n.pow((v - u.min(v)) as u32) * j_size.pow(v as u32);
    bullets.push(match (first, second) {
        (true, true) => pass(Bullet::Degree, format!("d = {d}")),
        (false, _) => fail(Bullet::Degree, format!("d = {d} < n^(1-eps/3)/8")),
        _ => fail(Bullet::Degree, format!("d = {d} < n^(1-eps)|J| with |J| = {j_size}")),
    });

    // (iv): 24(d − gcd) ≥ c ⟺ gcd ≤ d − ⌈c/24⌉
    let slack = c.div_ceil(&BigUint::from(24u32));
    bullets.push(if slack > *d {
        fail(Bullet::Index, format!("d = {d} below n^(1-eps/3)/24"))
    } else {
        let limit = d - &slack;
        match inst.nonzero_elements().find(|a| a.gcd(n) > limit) {
            None => pass(Bullet::Index, format!("every index <= {limit}")),
            Some(a) => fail(Bullet::Index, format!("a = {a} has index {} > {limit}", a.gcd(n))),
        }
    });

    // auxiliary conditions on s
    let s1 = inst.s as u64 + 1;
    let eps_cond = u * s1 <= 3 * v;
    // 4^{v(s+1)} n^{u(s+1)} > n^{3v}
    let four_cond = BigUint::from(4u32).pow((v * s1) as u32) * n.pow((u * s1) as u32) > n.pow((3 * v) as u32);

    Thm17Report {
        structure,
        bullets,
        degenerate_eps: inst.degenerate_eps(),
        eps_below_three_over_s1: eps_cond,
        four_n_eps_condition: four_cond,
    }
}

/// Membership in `J` for a residue, using the block decomposition.
pub fn thm17_contains(inst: &Thm17Instance, a: &BigUint) -> bool {
    if inst.extra.contains(a) {
        return true;
    }
    let (l, x) = a.div_rem(&inst.spacing());
    x < BigUint::from(inst.q) && l.to_u64().is_some_and(|l| inst.phi_r_support.contains(&l))
}

fn assemble(m: u64, eps: (u64, u64), primes: Vec<u64>, r: u64, q: u64, s: u32) -> Result<Thm17Instance, ConstructionError> {
    let phi_r = cyclotomic(r)?;
    let phi_r_support: Vec<u64> = phi_r.support().into_iter().map(|k| k as u64).collect();
    let n = BigUint::from(q) * BigUint::from(r).pow(s);
    let spacing = BigUint::from(r).pow(s - 1);
    let phi_rs = primes.iter().fold(spacing, |acc, &p| acc * (p - 1));
    let d = phi_rs + (q - 1);
    let j_size = BigUint::from(q) * phi_r_support.len();
    Ok(Thm17Instance {
        m,
        eps,
        primes,
        r,
        q,
        s,
        n,
        d,
        phi_r_support,
        j_size,
        extra: Vec::new(),
    })
}

/// `M` consecutive primes above `M` with `∏(1 − 1/p) > 1/2`.
fn prime_window(m: u64) -> Result<Vec<u64>, ConstructionError> {
    let mut window = Vec::with_capacity(m as usize);
    let mut p = m;
    while window.len() < m as usize {
        p = next_prime(p).ok_or(ConstructionError::PrimeOverflow)?;
        window.push(p);
    }
    loop {
        let num: BigUint = window.iter().map(|&p| BigUint::from(p - 1)).product();
        let den: BigUint = window.iter().map(|&p| BigUint::from(p)).product();
        if num * 2u32 > den {
            return Ok(window);
        }
        window.remove(0);
        p = next_prime(p).ok_or(ConstructionError::PrimeOverflow)?;
        window.push(p);
    }
}

/// Smallest instance for `(M, ε)`: the first prime window, the least `Q`,
/// and the least `s ≥ 3` at which every bullet verifies.
pub fn thm17_generate(m: u64, eps: (u64, u64)) -> Result<Thm17Instance, ConstructionError> {
    if m < 2 {
        return Err(ConstructionError::SmallM(m));
    }
    let (u, v) = eps;
    if v == 0 || u == 0 || 4 * u > 3 * v {
        return Err(ConstructionError::EpsRange(u, v));
    }
    let g = u.gcd(&v);
    let (u, v) = (u / g, v / g);
    if v > MAX_EPS_DENOMINATOR {
        return Err(ConstructionError::EpsDenominator(v));
    }
    let primes = prime_window(m)?;
    let r = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .ok_or(ConstructionError::PrimeOverflow)?;
    let q = next_prime(r).ok_or(ConstructionError::PrimeOverflow)?;
    if q as u128 >= 2 * r as u128 {
        return Err(ConstructionError::NoChebyshevPrime(r));
    }
    for s in 3..=MAX_S {
        let inst = assemble(m, (u, v), primes.clone(), r, q, s)?;
        if thm17_verify(&inst).passed() {
            return Ok(inst);
        }
    }
    Err(ConstructionError::NoAdmissibleS)
}

/// Instance with a prescribed `s`, verified or not.
pub fn thm17_with_s(m: u64, eps: (u64, u64), s: u32) -> Result<Thm17Instance, ConstructionError> {
    let base = thm17_generate(m, eps)?;
    assemble(m, base.eps, base.primes, base.r, base.q, s)
}

/// `(n − d)^N`; the instance is verified first.
pub fn thm17_bound(inst: &Thm17Instance, big_n: u64) -> Result<BigUint, ConstructionError> {
    if big_n == 0 {
        return Err(ConstructionError::ZeroLength);
    }
    let report = thm17_verify(inst);
    if let Some(why) = report.first_failure() {
        return Err(ConstructionError::Unverified(why));
    }
    Ok((&inst.n - &inst.d).pow(big_n as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slab_sizes() {
        assert_eq!(alon_slab_size(3, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(alon_slab_size(3, 6).unwrap(), BigUint::from(20u32));
        assert_eq!(alon_slab_size(5, 4).unwrap(), BigUint::from(44u32));
        assert_eq!(alon_slab_size(7, 1).unwrap(), BigUint::one());
        assert!(alon_slab_size(2, 3).is_err());
    }

    #[test]
    fn slab_validity() {
        assert!(slab_is_valid(3, 3).unwrap());
        assert!(slab_is_valid(4, 2).unwrap());
        assert!(slab_is_valid(9, 1).unwrap());
        assert!(matches!(slab_is_valid(5, 20), Err(ConstructionError::CheckTooLarge(_))));
        assert_eq!(slab_members(5, 4).unwrap().len(), 44);
    }

    #[test]
    fn neighbor_search_finds_planted_pair() {
        // lowering the target makes (1,0) and (0,1) reachable from (1,1)
        assert!(!has_slab_neighbor(&[1, 1], 4, 2));
        assert!(has_slab_neighbor(&[1, 1], 4, 1));
    }

    #[test]
    fn generation_for_m2() {
        let inst = thm17_generate(2, (3, 5)).unwrap();
        assert_eq!(inst.primes, vec![3, 5]);
        assert_eq!((inst.r, inst.q), (15, 17));
        assert_eq!(inst.j_size, BigUint::from(119u32));
        assert_eq!(inst.s, 5);
        assert_eq!(inst.n, BigUint::from(12_909_375u32));
        assert_eq!(inst.d, BigUint::from(405_016u32));
        assert_eq!(thm17_generate(2, (1, 2)).unwrap().s, 6);
        let report = thm17_verify(&inst);
        assert!(report.passed(), "{:?}", report.first_failure());
        assert!(thm17_generate(2, (1, 1)).is_err());
        assert!(thm17_generate(2, (1, 65)).is_err());
        assert!(thm17_generate(1, (1, 2)).is_err());
    }

    #[test]
    fn s4_fails_the_degree_bullet() {
        let inst = thm17_with_s(2, (3, 5), 4).unwrap();
        assert_eq!(inst.n, BigUint::from(860_625u32));
        assert_eq!(inst.d, BigUint::from(27_016u32));
        let report = thm17_verify(&inst);
        let failed: Vec<_> = report.bullets.iter().filter(|b| !b.passed).map(|b| b.bullet).collect();
        assert_eq!(failed, vec![Bullet::Degree]);
        assert!(report.eps_below_three_over_s1);
    }

    #[test]
    fn tampered_and_degenerate() {
        let mut inst = thm17_generate(2, (3, 5)).unwrap();
        let q_multiple = BigUint::from(inst.q) * 3u32;
        inst.extra.push(q_multiple.clone());
        let report = thm17_verify(&inst);
        assert!(report.bullets[3].passed);
        assert!(thm17_contains(&inst, &q_multiple));

        let mut zero = thm17_generate(2, (3, 5)).unwrap();
        zero.eps = (0, 1);
        let report = thm17_verify(&zero);
        assert!(report.degenerate_eps);
        assert!(report.bullets[1].passed);
    }

    #[test]
    fn bound_is_n_minus_d() {
        let inst = thm17_generate(2, (3, 5)).unwrap();
        assert_eq!(thm17_bound(&inst, 1).unwrap(), &inst.n - &inst.d);
        assert!(thm17_bound(&inst, 0).is_err());
        let bad = thm17_with_s(2, (3, 5), 4).unwrap();
        assert!(matches!(thm17_bound(&bad, 1), Err(ConstructionError::Unverified(_))));
    }
}
