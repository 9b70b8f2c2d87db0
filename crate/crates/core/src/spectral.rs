//! Spectra of weighted Cayley graphs and the bounds built on them.
//!
//! The eigenvalue of `M_{u,v} = f(u − v)` at the character `χ` is
//! `Σ_{x∈S} f(x)·χ(−x)`. For the product weight on `G^N` coming from a
//! polynomial `h`, it equals `−2 + 2·Re ∏ h(χ_j(1))`, and the number of
//! nonnegative eigenvalues bounds `D_G(J, N)`.
//!
//! Sign decisions are certified: exact zeros and ties are detected
//! algebraically, everything else goes through [`Ball`]s whose precision is
//! doubled until the comparison is decided or a cap is hit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::abelian::{
    character_value, cyclic_log, element_order, CharacterIndex, GroupElement, GroupError,
    GroupSpec,
};
use crate::arith::{self, divisors, gcd};
use crate::ball::{guarded_pi, unit_root, Ball, ComplexBall};
use crate::cyclotomic::{cyclotomic, IntPolynomial, PolyError};
use crate::{Interrupt, NoInterrupt};

pub const DEFAULT_START_BITS: u32 = 64;
pub const DEFAULT_MAX_BITS: u32 = 1024;
pub const DEFAULT_MULTISET_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("h(0) must equal 1")]
    ConstantTerm,
    #[error("h has a term t^{k}, outside [0, {n})")]
    SupportRange { k: usize, n: u64 },
    #[error("{k} and -{k} both carry weight modulo {n}")]
    Collision { k: u64, n: u64 },
    #[error("J must contain 0")]
    MissingZero,
    #[error("the support of h is not contained in J")]
    SupportNotInJ,
    #[error("{0} is not in the cyclic subgroup")]
    NotInSubgroup(alloc::string::String),
    #[error("weight is not symmetric at {0}")]
    Asymmetric(alloc::string::String),
    #[error("element has order {order}, expected {n}")]
    OrderMismatch { order: u64, n: u64 },
    #[error("modulus {n} is below the minimum {min}")]
    ModulusTooSmall { n: u64, min: u64 },
    #[error("N must be at least 1")]
    ZeroLength,
    #[error("{count} multisets exceed the cap of {cap}")]
    MultisetOverflow { count: BigUint, cap: u64 },
    #[error("comparison undecided at the {0}-bit precision cap")]
    PrecisionExhausted(u32),
    #[error("count {count} exceeds the root bound {bound}")]
    RootBoundViolated { count: BigUint, bound: BigUint },
    #[error("interrupted")]
    Interrupted,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] arith::ArithError),
}

/// Working precision schedule: start, then double up to the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            start_bits: DEFAULT_START_BITS,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

impl PrecisionPolicy {
    pub fn levels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut p = self.start_bits.max(8);
        loop {
            out.push(p.min(self.max_bits.max(8)));
            if p >= self.max_bits {
                return out;
            }
            p = p.saturating_mul(2);
        }
    }
}

/// `f` on `Z_n` read off from `h`: `f(k) = f(−k) = [t^k]h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    n: u64,
    values: BTreeMap<u64, BigInt>,
}

impl WeightFunction {
    pub fn from_polynomial(h: &IntPolynomial, n: u64) -> Result<Self, SpectralError> {
        if n == 0 {
            return Err(SpectralError::ModulusTooSmall { n, min: 1 });
        }
        if !h.coeff(0).is_one() {
            return Err(SpectralError::ConstantTerm);
        }
        let deg = h.degree().unwrap_or(0);
        if deg as u64 >= n {
            return Err(SpectralError::SupportRange { k: deg, n });
        }
        let support: BTreeSet<u64> = h.support().into_iter().map(|k| k as u64).collect();
        let mut values = BTreeMap::new();
        for (k, c) in h.terms() {
            let k = k as u64;
            if k == 0 {
                values.insert(0, c.clone());
                continue;
            }
            let neg = n - k;
            if neg == k || support.contains(&neg) {
                return Err(SpectralError::Collision { k, n });
            }
            values.insert(k, c.clone());
            values.insert(neg, c.clone());
        }
        Ok(Self { n, values })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn get(&self, k: u64) -> BigInt {
        self.values.get(&(k % self.n)).cloned().unwrap_or_default()
    }

    /// Residues with nonzero weight, including `0`.
    pub fn support(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.values.iter().map(|(&k, c)| (k, c))
    }

    /// Transport to `G` along `k ↦ k·a`, where `a` has order `n`.
    pub fn on_group(&self, group: &GroupSpec, a: &GroupElement) -> Result<GroupWeight, SpectralError> {
        let order = element_order(group, a);
        if order != self.n {
            return Err(SpectralError::OrderMismatch { order, n: self.n });
        }
        GroupWeight::new(
            group.clone(),
            self.support().map(|(k, c)| (group.scale(k, a), c.clone())),
        )
    }
}

/// Hypotheses on `h` needed by the counting bound: `h(0) = 1` and
/// `deg h < n`. Coefficients at `k` and `−k` may coexist; the matrix
/// `Σ_{x ∈ J^N \ 0} c(x)(P_x + P_x^T)` is still a pseudo-adjacency matrix
/// with eigenvalues `−2 + 2·Re ∏ h(χ_j(1))`.
pub fn check_counting_polynomial(h: &IntPolynomial, n: u64) -> Result<(), SpectralError> {
    if n == 0 {
        return Err(SpectralError::ModulusTooSmall { n, min: 1 });
    }
    if !h.coeff(0).is_one() {
        return Err(SpectralError::ConstantTerm);
    }
    let deg = h.degree().unwrap_or(0);
    if deg as u64 >= n {
        return Err(SpectralError::SupportRange { k: deg, n });
    }
    Ok(())
}

/// Real symmetric weight on the nonzero elements of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWeight {
    group: GroupSpec,
    entries: Vec<(GroupElement, BigInt)>,
}

impl GroupWeight {
    /// Collects `(x, f(x))` pairs, summing repeats. The value at `0` is
    /// dropped, since a pseudo-adjacency matrix has zero diagonal.
    pub fn new<I>(group: GroupSpec, entries: I) -> Result<Self, SpectralError>
    where
        I: IntoIterator<Item = (GroupElement, BigInt)>,
    {
        let mut map: BTreeMap<GroupElement, BigInt> = BTreeMap::new();
        for (x, c) in entries {
            if x.coords().len() != group.rank() {
                return Err(GroupError::Shape { expected: group.rank(), got: x.coords().len() }.into());
            }
            *map.entry(x).or_default() += c;
        }
        map.retain(|x, c| !x.is_zero() && !c.is_zero());
        for (x, c) in &map {
            if map.get(&group.neg(x)) != Some(c) {
                return Err(SpectralError::Asymmetric(x.to_string()));
            }
        }
        Ok(Self {
            group,
            entries: map.into_iter().collect(),
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn entries(&self) -> &[(GroupElement, BigInt)] {
        &self.entries
    }

    /// `Σ f(x)·χ(−x)` as `Σ_k c_k e(k/L)`.
    fn eigen_terms(&self, chi: &CharacterIndex) -> (BTreeMap<u64, BigInt>, u64) {
        let vals: Vec<_> = self
            .entries
            .iter()
            .map(|(x, c)| (character_value(&self.group, chi, &self.group.neg(x)), c))
            .collect();
        let l = vals
            .iter()
            .fold(1u64, |acc, (r, _)| acc / gcd(acc, r.denominator()) * r.denominator());
        let mut terms: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (r, c) in vals {
            let k = r.numerator() * (l / r.denominator());
            *terms.entry(k).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        (terms, l)
    }
}

/// Certified sign of a real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    Positive,
    Negative,
    Zero,
    Ambiguous,
}

/// Tally of eigenvalue signs, each with its multiplicity.
///
/// Exact zeros are included in both `n_nonneg` and `n_nonpos`; undecided
/// values are in neither and are counted in `n_ambiguous`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignCount {
    pub n_nonneg: BigUint,
    pub n_nonpos: BigUint,
    pub n_ambiguous: BigUint,
    pub n_zero: BigUint,
}

impl SignCount {
    pub fn record(&mut self, class: SignClass, mult: &BigUint) {
        match class {
            SignClass::Positive => self.n_nonneg += mult,
            SignClass::Negative => self.n_nonpos += mult,
            SignClass::Zero => {
                self.n_nonneg += mult;
                self.n_nonpos += mult;
                self.n_zero += mult;
            }
            SignClass::Ambiguous => self.n_ambiguous += mult,
        }
    }

    /// Number of classified values.
    pub fn total(&self) -> BigUint {
        &self.n_nonneg + &self.n_nonpos + &self.n_ambiguous - &self.n_zero
    }
}

/// `α ≤ min(n_≤0, n_≥0)`, with undecided values charged to both sides.
pub fn inertia_bound(sc: &SignCount) -> BigUint {
    let a = &sc.n_nonpos + &sc.n_ambiguous;
    let b = &sc.n_nonneg + &sc.n_ambiguous;
    a.min(b)
}

fn poly_from_terms(terms: &BTreeMap<u64, BigInt>) -> IntPolynomial {
    IntPolynomial::from_terms(terms.iter().map(|(&k, c)| (k as usize, c.clone())))
}

fn real_part(terms: &BTreeMap<u64, BigInt>, l: u64, prec: u32) -> Ball {
    let pi_ball = guarded_pi(prec);
    let mut acc = Ball::zero(prec);
    for (&k, c) in terms {
        acc = acc.add(&unit_root(k, l, &pi_ball, prec).re.mul_int(c));
    }
    acc
}

/// Sign of the real algebraic integer `Σ_k c_k e(k/L)`.
///
/// Exact zeros are found by divisibility by `Φ_L`; the rest by balls.
fn classify_cyclotomic_real(
    terms: &BTreeMap<u64, BigInt>,
    l: u64,
    policy: &PrecisionPolicy,
) -> SignClass {
    if terms.is_empty() {
        return SignClass::Zero;
    }
    if let Ok(phi) = cyclotomic(l) {
        if poly_from_terms(terms).rem_monic(&phi).is_zero() {
            return SignClass::Zero;
        }
    }
    for prec in policy.levels() {
        match real_part(terms, l, prec).cmp_int(&BigInt::zero()) {
            Some(Ordering::Greater) => return SignClass::Positive,
            Some(Ordering::Less) => return SignClass::Negative,
            Some(Ordering::Equal) => return SignClass::Zero,
            None => {}
        }
    }
    SignClass::Ambiguous
}

/// `Σ_{x∈S} f(x)·χ(−x)` as a ball at `prec` bits.
pub fn cayley_eigenvalue(w: &GroupWeight, chi: &CharacterIndex, prec: u32) -> ComplexBall {
    let (terms, l) = w.eigen_terms(chi);
    let pi_ball = guarded_pi(prec);
    let mut acc = ComplexBall::zero(prec);
    for (&k, c) in &terms {
        acc = acc.add(&unit_root(k, l, &pi_ball, prec).mul_int(c));
    }
    acc
}

/// Certified sign of the eigenvalue at `χ`.
pub fn classify_cayley_eigenvalue(
    w: &GroupWeight,
    chi: &CharacterIndex,
    policy: &PrecisionPolicy,
) -> SignClass {
    let (terms, l) = w.eigen_terms(chi);
    classify_cyclotomic_real(&terms, l, policy)
}

/// Signs of the whole spectrum of `Cay(G, S)` with weight `w`.
pub fn cayley_sign_count(w: &GroupWeight, policy: &PrecisionPolicy) -> Result<SignCount, SpectralError> {
    let mut sc = SignCount::default();
    let one = BigUint::one();
    for chi in w.group.characters()? {
        sc.record(classify_cayley_eigenvalue(w, &chi, policy), &one);
    }
    Ok(sc)
}

/// `h(e(v/n))` as a ball.
fn eval_at_root(h: &IntPolynomial, n: u64, v: u64, pi_ball: &Ball, prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero(prec);
    for (k, c) in h.terms() {
        let m = (k as u128 * v as u128 % n as u128) as u64;
        acc = acc.add(&unit_root(m, n, pi_ball, prec).mul_int(c));
    }
    acc
}

/// Residues `v ∈ Z_n` with `h(e(v/n)) = 0`, decided by divisibility.
pub fn root_residues(h: &IntPolynomial, n: u64) -> Result<Vec<bool>, SpectralError> {
    let mut is_root = vec![false; n as usize];
    for d in divisors(n)? {
        if cyclotomic(d)?.divides(h) {
            let step = n / d;
            // v with n/gcd(v, n) = d are the multiples of n/d coprime to d after division
            for j in 0..d {
                if gcd(j, d) == 1 {
                    is_root[(j * step) as usize] = true;
                }
            }
        }
    }
    Ok(is_root)
}

/// `−2 + 2·Re ∏_j h(e(v_j/n))` at `prec` bits.
pub fn product_eigenvalue(h: &IntPolynomial, n: u64, v: &[u64], prec: u32) -> Result<Ball, SpectralError> {
    check_counting_polynomial(h, n)?;
    let pi_ball = guarded_pi(prec);
    let mut prod = ComplexBall::one(prec);
    for &vj in v {
        prod = prod.mul(&eval_at_root(h, n, vj % n, &pi_ball, prec));
    }
    Ok(prod.re.mul_int(&BigInt::from(2)).sub(&Ball::from_i64(2, prec)))
}

/// Compares `Re ∏_j h(e(v_j/n))` with `1`, i.e. the product eigenvalue
/// with `0`.
pub fn compare_product_with_one(
    h: &IntPolynomial,
    n: u64,
    v: &[u64],
    policy: &PrecisionPolicy,
) -> Result<Ordering, SpectralError> {
    check_counting_polynomial(h, n)?;
    let roots = root_residues(h, n)?;
    if v.iter().any(|&x| roots[(x % n) as usize]) {
        return Ok(Ordering::Less);
    }
    let mut mult: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in v {
        *mult.entry(x % n).or_default() += 1;
    }
    let mult: Vec<(u64, u64)> = mult.into_iter().collect();
    let mut tie_checked = false;
    for prec in policy.levels() {
        let pi_ball = guarded_pi(prec);
        let mut prod = ComplexBall::one(prec);
        for &(x, m) in &mult {
            prod = prod.mul(&eval_at_root(h, n, x, &pi_ball, prec).pow(m));
        }
        if let Some(o) = prod.re.cmp_int(&BigInt::one()) {
            return Ok(o);
        }
        if !tie_checked {
            tie_checked = true;
            if real_part_is_one(h, n, &mult) {
                return Ok(Ordering::Equal);
            }
        }
    }
    Err(SpectralError::PrecisionExhausted(policy.max_bits))
}

/// Multiplication modulo `t^n − 1` by `h(t^v)`.
fn mul_cyclic_by(p: &[BigInt], h: &IntPolynomial, v: u64, n: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n as usize];
    for (k, c) in h.terms() {
        let shift = (k as u128 * v as u128 % n as u128) as usize;
        for (i, a) in p.iter().enumerate() {
            if !a.is_zero() {
                let j = (i + shift) % n as usize;
                out[j] += a * c;
            }
        }
    }
    out
}

/// Exact test of `Re ∏ h(ζ^{v})^{m} = 1` for `ζ = e(1/n)`.
///
/// With `P = ∏ h(t^v)^m mod t^n − 1`, the question is whether
/// `P(t) + P(t^{−1}) − 2` vanishes at `ζ`, i.e. is divisible by `Φ_n`.
pub fn real_part_is_one(h: &IntPolynomial, n: u64, mult: &[(u64, u64)]) -> bool {
    let Ok(phi) = cyclotomic(n) else {
        return false;
    };
    let mut p = vec![BigInt::zero(); n as usize];
    p[0] = BigInt::one();
    for &(v, m) in mult {
        for _ in 0..m {
            p = mul_cyclic_by(&p, h, v, n);
        }
    }
    let nn = n as usize;
    let mut q: Vec<BigInt> = (0..nn).map(|i| &p[i] + &p[(nn - i) % nn]).collect();
    q[0] -= 2;
    IntPolynomial::from_coeffs(q).rem_monic(&phi).is_zero()
}

/// Options for the multiset count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub policy: PrecisionPolicy,
    pub multiset_cap: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            policy: PrecisionPolicy::default(),
            multiset_cap: DEFAULT_MULTISET_CAP,
        }
    }
}

/// Result of counting `v ∈ Z_n^N` with `Re ∏ h(e(v_j/n)) ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCount {
    /// Tuples counted, including boundary and undecided ones.
    pub count: BigUint,
    /// Tuples with the real part exactly `1`.
    pub boundary: BigUint,
    /// Tuples left undecided at the precision cap.
    pub ambiguous: BigUint,
    /// Multisets visited.
    pub multisets: u64,
    /// Residues where `h` vanishes.
    pub roots: u64,
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

struct PowerTable {
    values: Vec<ComplexBall>,
    powers: Vec<Vec<ComplexBall>>,
}

impl PowerTable {
    fn pow(&mut self, i: usize, k: u64) -> &ComplexBall {
        let row = &mut self.powers[i];
        while row.len() as u64 <= k {
            let next = row.last().expect("row starts at 1").mul(&self.values[i]);
            row.push(next);
        }
        &row[k as usize]
    }
}

/// Exact count of `v ∈ Z_n^N` with `Re ∏ h(e(v_j/n)) ≥ 1`.
///
/// The product depends only on the multiset of the `v_j`, so multisets
/// over the non-root residues are enumerated and weighted by multinomial
/// coefficients. Tuples touching a root of `h` have product `0`.
pub fn count_nonneg_tuples(
    h: &IntPolynomial,
    n: u64,
    big_n: u64,
    opts: &CountOptions,
) -> Result<TupleCount, SpectralError> {
    count_nonneg_tuples_with(h, n, big_n, opts, &NoInterrupt)
}

pub fn count_nonneg_tuples_with(
    h: &IntPolynomial,
    n: u64,
    big_n: u64,
    opts: &CountOptions,
    interrupt: &dyn Interrupt,
) -> Result<TupleCount, SpectralError> {
    check_counting_polynomial(h, n)?;
    if big_n == 0 {
        return Err(SpectralError::ZeroLength);
    }
    let roots = root_residues(h, n)?;
    let live: Vec<u64> = (0..n).filter(|&v| !roots[v as usize]).collect();
    let root_count = n - live.len() as u64;
    let k = live.len();
    let mut out = TupleCount {
        count: BigUint::zero(),
        boundary: BigUint::zero(),
        ambiguous: BigUint::zero(),
        multisets: 0,
        roots: root_count,
    };
    if k == 0 {
        return Ok(out);
    }
    let total = binomial(big_n + k as u64 - 1, big_n);
    if total > BigUint::from(opts.multiset_cap) {
        return Err(SpectralError::MultisetOverflow {
            count: total,
            cap: opts.multiset_cap,
        });
    }

    let levels = opts.policy.levels();
    let prec0 = levels[0];
    let pi0 = guarded_pi(prec0);
    let values: Vec<ComplexBall> = live.iter().map(|&v| eval_at_root(h, n, v, &pi0, prec0)).collect();
    let mut table = PowerTable {
        powers: vec![vec![ComplexBall::one(prec0)]; k],
        values,
    };
    // higher-precision values, built on first use
    let mut fine: Vec<Option<Vec<ComplexBall>>> = vec![None; levels.len()];

    // odometer over the first k − 1 multiplicities; the last takes the rest
    let free = k - 1;
    let mut m = vec![0u64; k];
    let mut prefix_sum = vec![0u64; k];
    let mut prods = vec![ComplexBall::one(prec0); k];
    let mut weights = vec![BigUint::one(); k];
    let mut from = 0usize;
    loop {
        for i in from..free {
            let rem = big_n - prefix_sum[i];
            prods[i + 1] = prods[i].mul(table.pow(i, m[i]));
            weights[i + 1] = &weights[i] * binomial(rem, m[i]);
            prefix_sum[i + 1] = prefix_sum[i] + m[i];
        }
        m[free] = big_n - prefix_sum[free];
        let prod = prods[free].mul(table.pow(free, m[free]));
        let w = &weights[free];
        out.multisets += 1;
        if out.multisets.is_multiple_of(4096) && interrupt.should_stop() {
            return Err(SpectralError::Interrupted);
        }

        match prod.re.cmp_int(&BigInt::one()) {
            Some(Ordering::Greater) => out.count += w,
            Some(Ordering::Equal) => {
                out.count += w;
                out.boundary += w;
            }
            Some(Ordering::Less) => {}
            None => {
                let mult: Vec<(u64, u64)> = live
                    .iter()
                    .zip(&m)
                    .filter(|(_, &c)| c > 0)
                    .map(|(&v, &c)| (v, c))
                    .collect();
                if real_part_is_one(h, n, &mult) {
                    out.count += w;
                    out.boundary += w;
                } else {
                    let mut decided = None;
                    for (li, &prec) in levels.iter().enumerate().skip(1) {
                        let vals = fine[li].get_or_insert_with(|| {
                            let pi_ball = guarded_pi(prec);
                            live.iter().map(|&v| eval_at_root(h, n, v, &pi_ball, prec)).collect()
                        });
                        let mut p = ComplexBall::one(prec);
                        for (i, &c) in m.iter().enumerate() {
                            if c > 0 {
                                p = p.mul(&vals[i].pow(c));
                            }
                        }
                        if let Some(o) = p.re.cmp_int(&BigInt::one()) {
                            decided = Some(o);
                            break;
                        }
                    }
                    match decided {
                        Some(Ordering::Less) => {}
                        Some(_) => out.count += w,
                        None => {
                            out.count += w;
                            out.ambiguous += w;
                        }
                    }
                }
            }
        }

        // advance
        if free == 0 {
            break;
        }
        if prefix_sum[free] < big_n {
            m[free - 1] += 1;
            from = free - 1;
            // prefix sums below free − 1 are unchanged
        } else {
            let Some(j) = (0..free).rev().find(|&j| m[j] > 0) else {
                break;
            };
            if j == 0 {
                break;
            }
            m[j] = 0;
            m[j - 1] += 1;
            from = j - 1;
        }
        // the sum over the free slots must stay within N
        debug_assert!(m[..free].iter().sum::<u64>() <= big_n);
    }

    if divides_x_pow_minus_one(h, n) {
        let bound = BigUint::from(n - h.degree().unwrap_or(0) as u64).pow(big_n as u32);
        if out.count > bound {
            return Err(SpectralError::RootBoundViolated {
                count: out.count,
                bound,
            });
        }
    }
    Ok(out)
}

/// Whether `h | t^n − 1`, by computing `t^n mod h`.
///
/// A divisor of a monic integer polynomial has leading coefficient `±1`,
/// so any other `h` is rejected at once.
pub fn divides_x_pow_minus_one(h: &IntPolynomial, n: u64) -> bool {
    let Some(lead) = h.leading() else {
        return false;
    };
    let modulus = if lead.is_one() {
        h.clone()
    } else if (-lead).is_one() {
        -h
    } else {
        return false;
    };
    if modulus.degree() == Some(0) {
        return true;
    }
    let t = IntPolynomial::monomial(BigInt::one(), 1).rem_monic(&modulus);
    let mut acc = IntPolynomial::one().rem_monic(&modulus);
    let mut base = t;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).rem_monic(&modulus);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).rem_monic(&modulus);
        }
    }
    (&acc - &IntPolynomial::one()).rem_monic(&modulus).is_zero()
}

/// Outcome of the counting theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralBound {
    pub value: BigUint,
    /// `[G : ⟨a⟩]`.
    pub index: BigUint,
    pub n: u64,
    /// Set when `h | t^n − 1` and the closed form was used.
    pub closed_form: bool,
    pub tuples: Option<TupleCount>,
}

/// `J` as residues modulo `n = ord(a)`, after checking the hypotheses on
/// `(J, h)`.
fn residues_in_cyclic(
    group: &GroupSpec,
    a: &GroupElement,
    j: &[GroupElement],
    h: &IntPolynomial,
) -> Result<(u64, BTreeSet<u64>), SpectralError> {
    let n = element_order(group, a);
    let mut res = BTreeSet::new();
    for x in j {
        let k = cyclic_log(group, a, x).ok_or_else(|| SpectralError::NotInSubgroup(x.to_string()))?;
        res.insert(k);
    }
    if !res.contains(&0) {
        return Err(SpectralError::MissingZero);
    }
    check_counting_polynomial(h, n)?;
    if h.support().iter().any(|&k| !res.contains(&(k as u64))) {
        return Err(SpectralError::SupportNotInJ);
    }
    Ok((n, res))
}

/// `D_G(J, N) ≤ [G:H]^N · #{v : Re ∏ h(e(v_j/n)) ≥ 1}` with `H = ⟨a⟩`,
/// replaced by `(|G| − deg(h)·[G:H])^N` when `h | t^n − 1`.
pub fn spectral_upper_bound(
    group: &GroupSpec,
    a: &GroupElement,
    j: &[GroupElement],
    h: &IntPolynomial,
    big_n: u64,
    opts: &CountOptions,
) -> Result<SpectralBound, SpectralError> {
    if big_n == 0 {
        return Err(SpectralError::ZeroLength);
    }
    let (n, _) = residues_in_cyclic(group, a, j, h)?;
    let order = group.order();
    let index = &order / n;
    if divides_x_pow_minus_one(h, n) {
        let deg = h.degree().unwrap_or(0) as u64;
        let base = &order - &index * deg;
        return Ok(SpectralBound {
            value: base.pow(big_n as u32),
            index,
            n,
            closed_form: true,
            tuples: None,
        });
    }
    spectral_upper_bound_counted(group, a, j, h, big_n, opts)
}

/// As [`spectral_upper_bound`], always enumerating tuples.
pub fn spectral_upper_bound_counted(
    group: &GroupSpec,
    a: &GroupElement,
    j: &[GroupElement],
    h: &IntPolynomial,
    big_n: u64,
    opts: &CountOptions,
) -> Result<SpectralBound, SpectralError> {
    if big_n == 0 {
        return Err(SpectralError::ZeroLength);
    }
    let (n, _) = residues_in_cyclic(group, a, j, h)?;
    let index = group.order() / n;
    let tuples = count_nonneg_tuples(h, n, big_n, opts)?;
    Ok(SpectralBound {
        value: index.pow(big_n as u32) * &tuples.count,
        index,
        n,
        closed_form: false,
        tuples: Some(tuples),
    })
}

/// Whether `ρ = S mod 2n` gives `cos(π(S/n − N/2)) > 0`.
///
/// The angle is `π·(2ρ − nN)/(2n)`; with `x` that numerator reduced into
/// `(−2n, 2n]`, the cosine is positive exactly when `|x| < n`.
pub fn residue_is_positive(n: u64, big_n: u64, rho: u64) -> bool {
    let four_n = 4 * n as u128;
    let x = (2 * rho as u128 + four_n - (n as u128 * (big_n % 4) as u128) % four_n) % four_n;
    let x = x as i128;
    let centered = if x > 2 * n as i128 { x - four_n as i128 } else { x };
    centered.abs() < n as i128
}

/// Distribution of `S = Σ v_j mod 2n` over `v ∈ {1, …, n−1}^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueDpState {
    n: u64,
    steps: u64,
    counts: Vec<BigUint>,
}

impl ResidueDpState {
    pub fn new(n: u64) -> Result<Self, SpectralError> {
        if n < 3 {
            return Err(SpectralError::ModulusTooSmall { n, min: 3 });
        }
        let mut counts = vec![BigUint::zero(); 2 * n as usize];
        counts[0] = BigUint::one();
        Ok(Self { n, steps: 0, counts })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// One more coordinate, by a sliding window over `v ∈ [1, n−1]`.
    pub fn step(&mut self) {
        let m = self.counts.len();
        let w = (self.n - 1) as usize;
        let old = &self.counts;
        let mut window: BigUint = (1..=w).map(|v| &old[(m - v) % m]).sum();
        let mut next = Vec::with_capacity(m);
        for r in 0..m {
            next.push(window.clone());
            // window(r + 1) = window(r) + old[r] − old[r − w]
            window += &old[r];
            window -= &old[(r + m - w) % m];
        }
        self.counts = next;
        self.steps += 1;
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Tuples whose residue gives a positive cosine.
    pub fn accepted(&self) -> BigUint {
        self.counts
            .iter()
            .enumerate()
            .filter(|(r, _)| residue_is_positive(self.n, self.steps, *r as u64))
            .map(|(_, c)| c)
            .sum()
    }
}

/// Upper bound on `count_nonneg_tuples(1 − t, n, N)`.
///
/// `Re ∏ (1 − e(v_j/n)) = ∏ 2 sin(πv_j/n) · cos(π(S/n − N/2))`, so a
/// tuple with no zero coordinate can reach `1` only if the cosine is
/// positive.
pub fn residue_dp_count(n: u64, big_n: u64) -> Result<BigUint, SpectralError> {
    if big_n == 0 {
        return Err(SpectralError::ZeroLength);
    }
    let mut st = ResidueDpState::new(n)?;
    for _ in 0..big_n {
        st.step();
    }
    Ok(st.accepted())
}

/// `a / b` as a float, accurate even when both overflow `f64`.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::NAN;
    }
    let shift = 60u64 + b.bits().saturating_sub(a.bits());
    let q: BigUint = (a << shift as usize) / b;
    let qb = q.bits();
    let (mant, extra) = if qb > 64 { (&q >> (qb - 64) as usize, qb - 64) } else { (q, 0) };
    let mut x = mant.to_f64().unwrap_or(f64::NAN);
    let mut e = extra as i64 - shift as i64;
    while e > 0 {
        let s = e.min(60);
        x *= (1u64 << s) as f64;
        e -= s;
    }
    while e < 0 {
        let s = (-e).min(60);
        x /= (1u64 << s) as f64;
        e += s;
    }
    x
}

/// `(N, residue_dp_count(n, N)/(n − 1)^N)` for `N = 1..=max_n`.
pub fn residue_dp_ratios(n: u64, max_n: u64) -> Result<Vec<(u64, f64)>, SpectralError> {
    let mut st = ResidueDpState::new(n)?;
    let mut out = Vec::with_capacity(max_n as usize);
    for big_n in 1..=max_n {
        st.step();
        out.push((big_n, ratio_f64(&st.accepted(), &st.total())));
    }
    Ok(out)
}

/// Which clique gives a clique-coclique bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliqueKind {
    /// `{0, g, …, m·g} ⊆ J`: a clique of size `mN + 1`.
    Progression,
    /// `{−m·g, …, m·g} ⊆ J`: the clique `{0, g, …, m·g}^N`.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueBound {
    pub value: BigUint,
    pub kind: CliqueKind,
    pub generator: GroupElement,
    pub m: u64,
    pub clique_size: BigUint,
}

/// Clique-coclique bounds from progressions inside `J`, one or two per
/// `g ∈ J \ {0}`.
pub fn clique_bounds(
    group: &GroupSpec,
    j: &[GroupElement],
    big_n: u64,
) -> Result<Vec<CliqueBound>, SpectralError> {
    if big_n == 0 {
        return Err(SpectralError::ZeroLength);
    }
    let set: BTreeSet<&GroupElement> = j.iter().collect();
    if !set.contains(&group.zero()) {
        return Err(SpectralError::MissingZero);
    }
    let total = group.order().pow(big_n as u32);
    let mut out: Vec<CliqueBound> = Vec::new();
    for g in set.iter().filter(|g| !g.is_zero()) {
        let ord = element_order(group, g);
        let mut m = 0u64;
        while m + 1 < ord && set.contains(&group.scale(m + 1, g)) {
            m += 1;
        }
        if m >= 1 {
            let size = BigUint::from(m * big_n + 1);
            out.push(CliqueBound {
                value: &total / &size,
                kind: CliqueKind::Progression,
                generator: GroupElement::clone(g),
                m,
                clique_size: size,
            });
        }
        let mut s = 0u64;
        while s + 1 < ord
            && set.contains(&group.scale(s + 1, g))
            && set.contains(&group.neg(&group.scale(s + 1, g)))
        {
            s += 1;
        }
        if s >= 1 {
            let size = BigUint::from(s + 1).pow(big_n as u32);
            out.push(CliqueBound {
                value: &total / &size,
                kind: CliqueKind::Symmetric,
                generator: GroupElement::clone(g),
                m: s,
                clique_size: size,
            });
        }
    }
    Ok(out)
}

/// The clique behind a [`CliqueBound`], as points of `G^N`, when it has at
/// most `cap` points.
pub fn clique_witness(
    group: &GroupSpec,
    bound: &CliqueBound,
    big_n: u64,
    cap: u64,
) -> Option<Vec<Vec<GroupElement>>> {
    if bound.clique_size > BigUint::from(cap) {
        return None;
    }
    let g = &bound.generator;
    let nn = big_n as usize;
    match bound.kind {
        CliqueKind::Progression => {
            let mut out = vec![vec![group.zero(); nn]];
            for i in 0..bound.m {
                for k in 1..=nn {
                    let hi = group.scale(i + 1, g);
                    let lo = group.scale(i, g);
                    out.push((0..nn).map(|c| if c < k { hi.clone() } else { lo.clone() }).collect());
                }
            }
            Some(out)
        }
        CliqueKind::Symmetric => {
            let base = bound.m + 1;
            let count = bound.clique_size.to_u64()?;
            let steps: Vec<GroupElement> = (0..base).map(|i| group.scale(i, g)).collect();
            let mut out = Vec::with_capacity(count as usize);
            for mut idx in 0..count {
                let mut pt = Vec::with_capacity(nn);
                for _ in 0..nn {
                    pt.push(steps[(idx % base) as usize].clone());
                    idx /= base;
                }
                out.push(pt);
            }
            Some(out)
        }
    }
}
