//! Fixed-point ball arithmetic.
//!
//! A [`Ball`] at precision `p` is an integer midpoint `m` and an integer
//! radius `r`, standing for every real in `[(m − r)/2^p, (m + r)/2^p]`.
//! Every operation widens the radius enough to keep the true result inside,
//! so a ball that excludes a threshold certifies the comparison.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Extra bits carried while computing constants and roots of unity.
const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigUint,
    prec: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn ceil_div(a: &BigUint, d: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(d);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

impl Ball {
    pub fn zero(prec: u32) -> Self {
        Self {
            mid: BigInt::zero(),
            rad: BigUint::zero(),
            prec,
        }
    }

    pub fn from_int(k: &BigInt, prec: u32) -> Self {
        Self {
            mid: k << prec as usize,
            rad: BigUint::zero(),
            prec,
        }
    }

    pub fn from_i64(k: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(k), prec)
    }

    /// Ball around `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigUint, prec: u32) -> Self {
        Self::from_int(num, prec).div_uint(den)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigUint {
        &self.rad
    }

    /// Upper bound on `|x|`, in units of `2^-prec`.
    pub fn mag_upper(&self) -> BigUint {
        self.mid.magnitude() + &self.rad
    }

    /// Widens the radius by `e` units.
    pub fn add_error(&mut self, e: &BigUint) {
        self.rad += e;
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= &self.rad
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        Self {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec);
        let scale = pow2(self.prec);
        let raw = &self.mid * &other.mid;
        let (mid, low) = raw.div_mod_floor(&scale);
        let err = self.mid.magnitude() * &other.rad
            + other.mid.magnitude() * &self.rad
            + &self.rad * &other.rad;
        let mut rad = ceil_div(&err, scale.magnitude());
        if !low.is_zero() {
            rad += 1u32;
        }
        Self {
            mid,
            rad,
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        Self {
            mid: &self.mid * c,
            rad: &self.rad * c.magnitude(),
            prec: self.prec,
        }
    }

    pub fn div_uint(&self, d: &BigUint) -> Self {
        assert!(!d.is_zero(), "ball division by zero");
        let dd = BigInt::from_biguint(Sign::Plus, d.clone());
        let (mid, low) = self.mid.div_mod_floor(&dd);
        let mut rad = ceil_div(&self.rad, d);
        if !low.is_zero() {
            rad += 1u32;
        }
        Self {
            mid,
            rad,
            prec: self.prec,
        }
    }

    /// Same value at another precision, rounding outward when bits are dropped.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (prec - self.prec) as usize;
                Self {
                    mid: &self.mid << s,
                    rad: &self.rad << s,
                    prec,
                }
            }
            Ordering::Less => {
                let scale = pow2(self.prec - prec);
                let (mid, low) = self.mid.div_mod_floor(&scale);
                let mut rad = ceil_div(&self.rad, scale.magnitude());
                if !low.is_zero() {
                    rad += 1u32;
                }
                Self { mid, rad, prec }
            }
        }
    }

    /// Certified comparison with the integer `c`; `None` when the ball
    /// straddles `c`.
    pub fn cmp_int(&self, c: &BigInt) -> Option<Ordering> {
        let target = c << self.prec as usize;
        let rad = BigInt::from_biguint(Sign::Plus, self.rad.clone());
        if &self.mid - &rad > target {
            Some(Ordering::Greater)
        } else if &self.mid + &rad < target {
            Some(Ordering::Less)
        } else if self.rad.is_zero() && self.mid == target {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Midpoint as a float.
    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.mid, self.prec)
    }

    /// Radius as a float, rounded up loosely.
    pub fn rad_f64(&self) -> f64 {
        scaled_to_f64(&BigInt::from_biguint(Sign::Plus, self.rad.clone() + 1u32), self.prec)
    }
}

fn scaled_to_f64(x: &BigInt, prec: u32) -> f64 {
    let (v, p) = if prec > 60 {
        (x >> (prec - 60) as usize, 60)
    } else {
        (x.clone(), prec)
    };
    v.to_f64().unwrap_or(f64::NAN) / (1u64 << p) as f64
}

/// Rectangular complex ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        debug_assert_eq!(re.prec, im.prec);
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Ball::zero(prec), Ball::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(&BigInt::one(), prec)
    }

    pub fn from_int(k: &BigInt, prec: u32) -> Self {
        Self::new(Ball::from_int(k, prec), Ball::zero(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Self::new(re, im)
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        Self::new(self.re.mul_int(c), self.im.mul_int(c))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}

/// `π` as a ball, from `π = 16·atan(1/5) − 4·atan(1/239)`.
pub fn pi(prec: u32) -> Ball {
    let w = prec + GUARD_BITS;
    let a = atan_inv(5, w).mul_int(&BigInt::from(16));
    let b = atan_inv(239, w).mul_int(&BigInt::from(4));
    a.sub(&b).with_prec(prec)
}

/// `atan(1/k)` for an integer `k ≥ 2` by its alternating Taylor series.
fn atan_inv(k: u64, prec: u32) -> Ball {
    let one = pow2(prec);
    let k2 = BigUint::from(k) * k;
    let mut power = BigUint::from(k);
    let mut sum = Ball::zero(prec);
    let mut j = 0u64;
    loop {
        let den = &power * (2 * j + 1);
        let term = Ball::from_int(&one, 0).div_uint(&den);
        let term = Ball {
            mid: term.mid,
            rad: term.rad,
            prec,
        };
        if term.mag_upper() <= BigUint::one() {
            // remaining tail is below one unit in the last place
            sum.add_error(&BigUint::from(2u32));
            return sum;
        }
        sum = if j.is_multiple_of(2) { sum.add(&term) } else { sum.sub(&term) };
        power *= &k2;
        j += 1;
    }
}

/// `(cos 2πf, sin 2πf)` for `f = num/den`, by reduction to `f ∈ [0, 1/8]`.
fn cos_sin_turns(num: u64, den: u64, pi_ball: &Ball) -> (Ball, Ball) {
    let mut a = (num % den) as u128;
    let mut b = den as u128;
    let conj = 2 * a > b;
    if conj {
        a = b - a;
    }
    let reflect = 4 * a > b;
    if reflect {
        // 1/2 − a/b
        (a, b) = (b - 2 * a, 2 * b);
    }
    let swap = 8 * a > b;
    if swap {
        // 1/4 − a/b
        (a, b) = (b - 4 * a, 4 * b);
    }
    let x = pi_ball
        .mul_int(&BigInt::from(2 * a))
        .div_uint(&BigUint::from(b));
    let (mut c, mut s) = cos_sin_small(&x);
    if swap {
        core::mem::swap(&mut c, &mut s);
    }
    if reflect {
        c = c.neg();
    }
    if conj {
        s = s.neg();
    }
    (c, s)
}

/// Taylor series for `|x| ≤ π/4`.
fn cos_sin_small(x: &Ball) -> (Ball, Ball) {
    let prec = x.prec;
    let x2 = x.mul(x);
    let series = |first: Ball, offset: u64| {
        let mut sum = first.clone();
        let mut term = first;
        let mut k = 0u64;
        loop {
            let d = (2 * k + 1 + offset) * (2 * k + 2 + offset);
            term = term.mul(&x2).div_uint(&BigUint::from(d)).neg();
            if term.mag_upper() <= BigUint::one() {
                sum.add_error(&term.mag_upper());
                return sum;
            }
            sum = sum.add(&term);
            k += 1;
        }
    };
    let cos = series(Ball::from_i64(1, prec), 0);
    let sin = series(x.clone(), 1);
    (cos, sin)
}

/// `π` carrying the guard bits that [`unit_root`] expects.
pub fn guarded_pi(prec: u32) -> Ball {
    pi(prec + GUARD_BITS)
}

/// `e(num/den)` at `prec` bits; `pi_ball` comes from [`guarded_pi`]`(prec)`.
pub fn unit_root(num: u64, den: u64, pi_ball: &Ball, prec: u32) -> ComplexBall {
    debug_assert_eq!(pi_ball.prec(), prec + GUARD_BITS);
    let (c, s) = cos_sin_turns(num, den, pi_ball);
    ComplexBall::new(c.with_prec(prec), s.with_prec(prec))
}

/// `e(m/n)` for every `m ∈ [0, n)` at a fixed precision.
#[derive(Debug, Clone)]
pub struct RootTable {
    n: u64,
    prec: u32,
    roots: Vec<ComplexBall>,
}

impl RootTable {
    pub fn new(n: u64, prec: u32) -> Self {
        assert!(n >= 1);
        let pi_ball = guarded_pi(prec);
        let roots = (0..n).map(|m| unit_root(m, n, &pi_ball, prec)).collect();
        Self { n, prec, roots }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `e(m/n)`, `m` taken modulo `n`.
    pub fn get(&self, m: u64) -> &ComplexBall {
        &self.roots[(m % self.n) as usize]
    }

    /// `Σ_k c_k · e(k·v/n)` for `coeffs[k] = c_k`.
    pub fn eval_poly(&self, coeffs: &[BigInt], v: u64) -> ComplexBall {
        let mut acc = ComplexBall::zero(self.prec);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = ((k as u128 * v as u128) % self.n as u128) as u64;
            acc = acc.add(&self.get(idx).mul_int(c));
        }
        acc
    }
}

/// Sign of `x` when certifiable.
pub fn sign(x: &Ball) -> Option<Ordering> {
    x.cmp_int(&BigInt::zero())
}

/// Whether the ball is exactly an integer.
pub fn is_exact_int(x: &Ball) -> bool {
    x.rad.is_zero() && x.mid.is_multiple_of(&pow2(x.prec))
}
