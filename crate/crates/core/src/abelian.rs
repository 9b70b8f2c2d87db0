//! Finite abelian groups `Z_{n_1} × … × Z_{n_k}`, their elements, cyclic
//! and generated subgroups, and exactly evaluated characters.
//!
//! Character values are kept as rational angles: `χ_c(g) = e(Σ c_i g_i / n_i)`
//! where `e(x) = exp(2πi x)`. Nothing in this module touches floating point.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::{gcd, lcm, mod_inverse};

/// Groups up to this order may be enumerated element by element.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one cyclic factor")]
    NoFactors,
    #[error("cyclic factor {0} is smaller than 2")]
    FactorTooSmall(u64),
    #[error("group exponent overflows 64 bits")]
    ExponentOverflow,
    #[error("element has {got} coordinates, group has {expected} factors")]
    Shape { expected: usize, got: usize },
    #[error("coordinate {value} is out of range for Z_{modulus}")]
    CoordinateRange { value: u64, modulus: u64 },
    #[error("residue {x} is outside [0, {n})")]
    ResidueRange { x: u64, n: u64 },
    #[error("group of order {0} is too large to enumerate")]
    TooLarge(BigUint),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("generating set is empty")]
    EmptyGenerators,
}

/// `Z_{n_1} × … × Z_{n_k}` with every `n_i ≥ 2`.
///
/// Factor order is significant for coordinates; [`GroupSpec::canonical`]
/// sorts the factors when an order-independent key is wanted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    factors: Vec<u64>,
    exponent: u64,
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::NoFactors);
        }
        let mut exponent = 1u64;
        for &n in &factors {
            if n < 2 {
                return Err(GroupError::FactorTooSmall(n));
            }
            exponent = lcm(exponent, n).ok_or(GroupError::ExponentOverflow)?;
        }
        Ok(Self { factors, exponent })
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::new(alloc::vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().map(|&n| BigUint::from(n)).product()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n))
    }

    /// Least common multiple of the factors.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// True when the group is isomorphic to a cyclic group.
    pub fn is_cyclic(&self) -> bool {
        self.order_u64() == Some(self.exponent)
    }

    pub fn canonical(&self) -> Self {
        let mut factors = self.factors.clone();
        factors.sort_unstable();
        Self {
            factors,
            exponent: self.exponent,
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: alloc::vec![0; self.rank()],
        }
    }

    /// Builds an element, rejecting unreduced coordinates.
    pub fn element(&self, coords: Vec<u64>) -> Result<GroupElement, GroupError> {
        self.check_coords(&coords)?;
        Ok(GroupElement { coords })
    }

    /// Builds an element, reducing each coordinate modulo its factor.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.rank() {
            return Err(GroupError::Shape {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn character(&self, coords: Vec<u64>) -> Result<CharacterIndex, GroupError> {
        self.check_coords(&coords)?;
        Ok(CharacterIndex { coords })
    }

    fn check_coords(&self, coords: &[u64]) -> Result<(), GroupError> {
        if coords.len() != self.rank() {
            return Err(GroupError::Shape {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        for (&c, &n) in coords.iter().zip(&self.factors) {
            if c >= n {
                return Err(GroupError::CoordinateRange { value: c, modulus: n });
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| ((x as u128 + y as u128) % n as u128) as u64)
            .collect();
        GroupElement { coords }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| if x == 0 { 0 } else { n - x })
            .collect();
        GroupElement { coords }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// `k·a`.
    pub fn scale(&self, k: u64, a: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| ((k as u128 % n as u128) * x as u128 % n as u128) as u64)
            .collect();
        GroupElement { coords }
    }

    /// Mixed-radix position of `g`, first coordinate varying fastest.
    pub fn index_of(&self, g: &GroupElement) -> u64 {
        let mut idx = 0u64;
        for (&c, &n) in g.coords.iter().zip(&self.factors).rev() {
            idx = idx * n + c;
        }
        idx
    }

    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let coords = self
            .factors
            .iter()
            .map(|&n| {
                let c = index % n;
                index /= n;
                c
            })
            .collect();
        GroupElement { coords }
    }

    fn enumerable_order(&self) -> Result<u64, GroupError> {
        match self.order_u64() {
            Some(o) if o <= ENUMERATION_LIMIT => Ok(o),
            _ => Err(GroupError::TooLarge(self.order())),
        }
    }

    /// All elements in [`GroupSpec::index_of`] order.
    pub fn elements(&self) -> Result<impl Iterator<Item = GroupElement> + '_, GroupError> {
        let order = self.enumerable_order()?;
        Ok((0..order).map(move |i| self.element_at(i)))
    }

    /// All characters, indexed like elements.
    pub fn characters(&self) -> Result<impl Iterator<Item = CharacterIndex> + '_, GroupError> {
        Ok(self.elements()?.map(|g| CharacterIndex { coords: g.coords }))
    }

    /// Parses an element literal such as `"7"` or `"1,3"`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let coords = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GroupError::Parse(s.into()))?;
        self.element_reduced(&coords)
    }

    /// Parses a set of elements separated by `;`. For single-factor groups a
    /// plain comma list such as `"0,1,4"` is also accepted.
    pub fn parse_subset(&self, s: &str) -> Result<Vec<GroupElement>, GroupError> {
        let parts: Vec<&str> = if s.contains(';') || self.rank() > 1 {
            s.split(';').collect()
        } else {
            s.split(',').collect()
        };
        let mut out: Vec<GroupElement> = parts
            .into_iter()
            .filter(|p| !p.trim().is_empty())
            .map(|p| self.parse_element(p))
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// `"12"` is `Z_12`, `"2x4"` is `Z_2 × Z_4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let factors = s
            .split(['x', 'X'])
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GroupError::Parse(s.into()))?;
        Self::new(factors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Index `c` of the character `χ_c(g) = e(Σ c_i g_i / n_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterIndex {
    coords: Vec<u64>,
}

impl CharacterIndex {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// `e(numerator / denominator)` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    numerator: u64,
    denominator: u64,
}

impl RootOfUnity {
    /// Reduces `num/den` modulo 1 and to lowest terms. `den` must be positive.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let num = num % den;
        let g = gcd(num, den);
        Self {
            numerator: num / g,
            denominator: den / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn one() -> Self {
        Self::new(0, 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let den = self.denominator as u128 * other.denominator as u128;
        let num = self.numerator as u128 * other.denominator as u128
            + other.numerator as u128 * self.denominator as u128;
        let g = gcd_u128(num % den, den);
        Self::new(((num % den) / g) as u64, (den / g) as u64)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.denominator - self.numerator, self.denominator)
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.numerator, self.denominator)
    }
}

/// Least `t ≥ 1` with `t·g = 0`.
pub fn element_order(group: &GroupSpec, g: &GroupElement) -> u64 {
    g.coords
        .iter()
        .zip(group.factors())
        .fold(1u64, |acc, (&c, &n)| {
            let o = n / gcd(c, n);
            // o divides the exponent, which fits in u64
            acc / gcd(acc, o) * o
        })
}

/// The `k ∈ [0, ord a)` with `k·a = x`, when `x ∈ ⟨a⟩`.
pub fn cyclic_log(group: &GroupSpec, a: &GroupElement, x: &GroupElement) -> Option<u64> {
    // solve k·a_i ≡ x_i (mod n_i) per coordinate and merge the congruences
    let (mut r, mut m) = (0u128, 1u128);
    for ((&ai, &xi), &n) in a.coords.iter().zip(&x.coords).zip(group.factors()) {
        let g = gcd(ai, n);
        if xi % g != 0 {
            return None;
        }
        let mi = n / g;
        let ri = if mi == 1 {
            0
        } else {
            let inv = mod_inverse((ai / g) % mi, mi)?;
            ((xi / g) as u128 * inv as u128 % mi as u128) as u64
        };
        let (ri, mi) = (ri as u128, mi as u128);
        let d = gcd_u128(m, mi);
        let diff = (ri + mi - r % mi) % mi;
        if diff % d != 0 {
            return None;
        }
        let step = mi / d;
        let t = if step == 1 {
            0
        } else {
            let inv = mod_inverse(((m / d) % step) as u64, step as u64)? as u128;
            (diff / d) % step * inv % step
        };
        r += m * t;
        m *= step;
        r %= m;
    }
    Some(r as u64)
}

/// Exact value of `χ_c(g)`.
pub fn character_value(group: &GroupSpec, c: &CharacterIndex, g: &GroupElement) -> RootOfUnity {
    let l = group.exponent() as u128;
    let mut num = 0u128;
    for ((&ci, &gi), &n) in c.coords.iter().zip(&g.coords).zip(group.factors()) {
        let n = n as u128;
        num = (num + (ci as u128 * gi as u128 % n) * (l / n)) % l;
    }
    RootOfUnity::new(num as u64, l as u64)
}

/// Subgroup generated by a set of elements.
///
/// Stored as the Hermite normal form of the lattice `L ⊂ Z^k` spanned by
/// the generators and by `n_i·e_i`, so that `H = L / ⊕ n_i Z`. Membership
/// and element enumeration are exact for every group size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupInfo {
    factors: Vec<u64>,
    generators: Vec<GroupElement>,
    basis: Vec<Vec<i128>>,
}

impl SubgroupInfo {
    pub fn order(&self) -> BigUint {
        self.factors
            .iter()
            .zip(self.pivots())
            .map(|(&n, d)| BigUint::from(n / d))
            .product()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.factors
            .iter()
            .zip(self.pivots())
            .try_fold(1u64, |acc, (&n, d)| acc.checked_mul(n / d))
    }

    /// `[G : H]`.
    pub fn index(&self) -> BigUint {
        self.pivots().map(BigUint::from).product()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    fn pivots(&self) -> impl Iterator<Item = u64> + '_ {
        self.basis.iter().enumerate().map(|(i, row)| row[i] as u64)
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        if g.coords.len() != self.factors.len() {
            return false;
        }
        let mut x: Vec<i128> = g.coords.iter().map(|&c| c as i128).collect();
        for (col, row) in self.basis.iter().enumerate() {
            let n = self.factors[col] as i128;
            let d = row[col];
            let v = x[col].rem_euclid(n);
            if v % d != 0 {
                return false;
            }
            let q = v / d;
            for j in col..x.len() {
                x[j] = (x[j] - q * row[j]).rem_euclid(self.factors[j] as i128);
            }
        }
        true
    }

    /// Every element of the subgroup, each exactly once.
    pub fn members(&self, group: &GroupSpec) -> Result<Vec<GroupElement>, GroupError> {
        let order = match self.order_u64() {
            Some(o) if o <= ENUMERATION_LIMIT => o,
            _ => return Err(GroupError::TooLarge(self.order())),
        };
        let ranges: Vec<u64> = self
            .factors
            .iter()
            .zip(self.pivots())
            .map(|(&n, d)| n / d)
            .collect();
        let k = self.factors.len();
        let mut out = Vec::with_capacity(order as usize);
        let mut counter = alloc::vec![0u64; k];
        for _ in 0..order {
            let mut x = alloc::vec![0i128; k];
            for (i, &c) in counter.iter().enumerate() {
                for (xj, &b) in x[i..].iter_mut().zip(&self.basis[i][i..]) {
                    *xj += c as i128 * b;
                }
            }
            let coords = x
                .iter()
                .zip(group.factors())
                .map(|(&v, &n)| v.rem_euclid(n as i128) as u64)
                .collect();
            out.push(GroupElement { coords });
            for (c, &r) in counter.iter_mut().zip(&ranges) {
                *c += 1;
                if *c < r {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }
}

/// `⟨S⟩`, with exact order and index.
pub fn subgroup_generated(
    group: &GroupSpec,
    gens: &[GroupElement],
) -> Result<SubgroupInfo, GroupError> {
    if gens.is_empty() {
        return Err(GroupError::EmptyGenerators);
    }
    for g in gens {
        group.check_coords(&g.coords)?;
    }
    let k = group.rank();
    let factors = group.factors().to_vec();
    let mut rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.coords.iter().map(|&c| c as i128).collect())
        .collect();
    for (i, &n) in factors.iter().enumerate() {
        let mut r = alloc::vec![0i128; k];
        r[i] = n as i128;
        rows.push(r);
    }
    let mut basis = Vec::with_capacity(k);
    for col in 0..k {
        loop {
            let pivot = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| r[col].unsigned_abs())
                .map(|(i, _)| i)
                .expect("lattice contains n_i e_i");
            let mut done = true;
            for i in 0..rows.len() {
                if i == pivot || rows[i][col] == 0 {
                    continue;
                }
                let q = rows[i][col].div_euclid(rows[pivot][col]);
                for j in col..k {
                    let v = rows[i][j] - q * rows[pivot][j];
                    rows[i][j] = if j > col {
                        v.rem_euclid(factors[j] as i128)
                    } else {
                        v
                    };
                }
                if rows[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                let mut row = rows.swap_remove(pivot);
                if row[col] < 0 {
                    for v in row.iter_mut().skip(col) {
                        *v = -*v;
                    }
                    for j in col + 1..k {
                        row[j] = row[j].rem_euclid(factors[j] as i128);
                    }
                }
                basis.push(row);
                break;
            }
        }
        rows.retain(|r| r.iter().any(|&v| v != 0));
    }
    Ok(SubgroupInfo {
        factors,
        generators: gens.to_vec(),
        basis,
    })
}

/// Number of characters `χ` of `G` with `χ(a) = e_n(x)`, `n = ord(a)`,
/// found by enumerating all `|G|` characters.
pub fn count_character_extensions(
    group: &GroupSpec,
    a: &GroupElement,
    x: u64,
) -> Result<u64, GroupError> {
    let n = element_order(group, a);
    if x >= n {
        return Err(GroupError::ResidueRange { x, n });
    }
    let target = RootOfUnity::new(x, n);
    Ok(group
        .characters()?
        .filter(|c| character_value(group, c, a) == target)
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn orders() {
        let z6 = g("6");
        assert_eq!(element_order(&z6, &z6.element(vec![0]).unwrap()), 1);
        assert_eq!(element_order(&z6, &z6.element(vec![2]).unwrap()), 3);
        let z24 = g("2x4");
        assert_eq!(element_order(&z24, &z24.element(vec![1, 2]).unwrap()), 2);
    }

    #[test]
    fn generated_subgroups() {
        let z12 = g("12");
        let h = subgroup_generated(&z12, &[z12.element(vec![4]).unwrap()]).unwrap();
        assert_eq!(h.order(), 3u32.into());
        assert_eq!(h.index(), 4u32.into());

        let k4 = g("2x2");
        let h = subgroup_generated(&k4, &[k4.element(vec![1, 0]).unwrap()]).unwrap();
        assert_eq!((h.order(), h.index()), (2u32.into(), 2u32.into()));

        let z105 = g("105");
        let h = subgroup_generated(&z105, &[z105.element(vec![35]).unwrap()]).unwrap();
        assert_eq!((h.order(), h.index()), (3u32.into(), 35u32.into()));
        assert!(h.contains(&z105.element(vec![70]).unwrap()));
        assert!(!h.contains(&z105.element(vec![1]).unwrap()));
        assert!(h.generators().iter().all(|x| h.contains(x)));
    }

    #[test]
    fn members_match_closure() {
        let grp = g("4x6");
        let gens = [grp.element(vec![2, 3]).unwrap(), grp.element(vec![0, 2]).unwrap()];
        let h = subgroup_generated(&grp, &gens).unwrap();
        let mut closure = vec![grp.zero()];
        let mut i = 0;
        while i < closure.len() {
            for s in &gens {
                let y = grp.add(&closure[i], s);
                if !closure.contains(&y) {
                    closure.push(y);
                }
            }
            i += 1;
        }
        closure.sort();
        let mut members = h.members(&grp).unwrap();
        members.sort();
        assert_eq!(members, closure);
        for x in grp.elements().unwrap() {
            assert_eq!(h.contains(&x), closure.contains(&x));
        }
    }

    #[test]
    fn character_values() {
        let z5 = g("5");
        let c0 = z5.character(vec![0]).unwrap();
        let c2 = z5.character(vec![2]).unwrap();
        let x3 = z5.element(vec![3]).unwrap();
        assert_eq!(character_value(&z5, &c0, &x3), RootOfUnity::new(0, 1));
        assert_eq!(character_value(&z5, &c2, &x3), RootOfUnity::new(1, 5));
        let z23 = g("2x3");
        let c = z23.character(vec![1, 1]).unwrap();
        let x = z23.element(vec![1, 2]).unwrap();
        assert_eq!(character_value(&z23, &c, &x), RootOfUnity::new(1, 6));
    }

    #[test]
    fn extensions() {
        let z6 = g("6");
        assert_eq!(
            count_character_extensions(&z6, &z6.element(vec![1]).unwrap(), 2).unwrap(),
            1
        );
        let k4 = g("2x2");
        assert_eq!(
            count_character_extensions(&k4, &k4.element(vec![1, 0]).unwrap(), 1).unwrap(),
            2
        );
        let z12 = g("12");
        let a = z12.element(vec![4]).unwrap();
        assert_eq!(count_character_extensions(&z12, &a, 1).unwrap(), 4);
        assert!(matches!(
            count_character_extensions(&z12, &a, 3),
            Err(GroupError::ResidueRange { x: 3, n: 3 })
        ));
    }

    #[test]
    fn literals() {
        let grp = g("2x4");
        assert_eq!(grp.factors(), &[2, 4]);
        assert_eq!(alloc::format!("{grp}"), "2x4");
        assert_eq!(grp.parse_element("1,3").unwrap().coords(), &[1, 3]);
        assert!(grp.parse_element("1").is_err());
        let z5 = g("5");
        let j = z5.parse_subset("0,1,4").unwrap();
        assert_eq!(j.len(), 3);
        assert_eq!(z5.parse_element("-1").unwrap().coords(), &[4]);
        assert!("1x3".parse::<GroupSpec>().is_err());
        assert!(g("2x3").is_cyclic());
        assert!(!g("2x2").is_cyclic());
        assert_eq!(g("4x2").canonical(), g("2x4"));
    }

    #[test]
    fn logs_in_cyclic_subgroups() {
        let grp = g("4x6");
        let a = grp.element(vec![1, 2]).unwrap();
        assert_eq!(element_order(&grp, &a), 12);
        for k in 0..12u64 {
            let x = grp.scale(k, &a);
            assert_eq!(cyclic_log(&grp, &a, &x), Some(k));
        }
        let off = grp.element(vec![0, 1]).unwrap();
        assert_eq!(cyclic_log(&grp, &a, &off), None);
        let z = g("12");
        let five = z.element(vec![5]).unwrap();
        assert_eq!(cyclic_log(&z, &five, &z.element(vec![1]).unwrap()), Some(5));
    }
}
