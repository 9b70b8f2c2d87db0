//! Every applicable bound for a query `(G, J, N)`, with provenance.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::abelian::{
    cyclic_log, element_order, subgroup_generated, GroupElement, GroupError, GroupSpec,
    ENUMERATION_LIMIT,
};
use crate::arith::{divisors, euler_phi, ArithError};
use crate::constructions::{alon_slab_size, product_lower_bound};
use crate::cyclotomic::{cyclotomic, IntPolynomial, PolyError};
use crate::oracle::{exact_d, oracle_feasible};
use crate::spectral::{
    clique_bounds, residue_dp_count, spectral_upper_bound, spectral_upper_bound_counted,
    CliqueKind, CountOptions, SpectralError,
};
use crate::Interrupt;

/// Default cap on `search_h` subsets.
pub const SEARCH_SUBSET_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("J must contain 0")]
    MissingZero,
    #[error("N must be at least 1")]
    ZeroLength,
    #[error("the generic bound needs a cyclic group")]
    NotCyclic,
    #[error("the group must have order at least {0}")]
    GroupTooSmall(u64),
    #[error("a = -a; the pair bound needs order at least 3")]
    SelfInverse,
    #[error("residue {0} is outside [0, n)")]
    ResidueRange(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Where a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// `(|G| − |J| + 1)^N` for cyclic `G`.
    Generic,
    /// Clique of size `mN + 1` from `{0, g, …, mg} ⊆ J`.
    CliqueProgression,
    /// Clique `{0, …, mg}^N` from `{−mg, …, mg} ⊆ J`.
    CliqueSymmetric,
    /// Closed form for a product of cyclotomic factors found by `search_h`.
    SpectralCyclotomic,
    /// `(|G| − [G:⟨a⟩])^N` from `h = 1 − t` on a pair `{0, a} ⊆ J`.
    SpectralPair,
    /// Exact tuple count for `h = 1 − t` on a pair.
    SpectralCount,
    /// `[G:⟨a⟩]^N` times the cosine residue count.
    PairResidueDp,
    /// Exact independence number.
    Oracle,
    /// `D_G(J, 1)^N`.
    Product,
    /// Slab in `⟨a⟩^N` times `[G:⟨a⟩]^N`.
    AlonSlab,
}

impl Method {
    pub const ALL: [Method; 10] = [
        Method::Generic,
        Method::CliqueProgression,
        Method::CliqueSymmetric,
        Method::SpectralCyclotomic,
        Method::SpectralPair,
        Method::SpectralCount,
        Method::PairResidueDp,
        Method::Oracle,
        Method::Product,
        Method::AlonSlab,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Generic => "generic",
            Method::CliqueProgression => "clique-progression",
            Method::CliqueSymmetric => "clique-symmetric",
            Method::SpectralCyclotomic => "spectral-cyclotomic",
            Method::SpectralPair => "spectral-pair",
            Method::SpectralCount => "spectral-count",
            Method::PairResidueDp => "pair-residue-dp",
            Method::Oracle => "oracle",
            Method::Product => "product",
            Method::AlonSlab => "alon-slab",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundEntry {
    pub value: BigUint,
    pub method: Method,
    pub params: BTreeMap<String, String>,
}

impl BoundEntry {
    pub fn new(value: BigUint, method: Method) -> Self {
        Self {
            value,
            method,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub group: GroupSpec,
    /// Sorted, without repeats.
    pub j: Vec<GroupElement>,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub query: Query,
    pub upper: Vec<BoundEntry>,
    pub lower: Vec<BoundEntry>,
    /// Present when the oracle finished.
    pub exact: Option<BigUint>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn best_upper(&self) -> Option<&BoundEntry> {
        self.upper.iter().min_by(|a, b| a.value.cmp(&b.value))
    }

    pub fn best_lower(&self) -> Option<&BoundEntry> {
        self.lower.iter().max_by(|a, b| a.value.cmp(&b.value))
    }

    /// Every pair that contradicts `lower ≤ exact ≤ upper`.
    pub fn inconsistencies(&self) -> Vec<String> {
        let mut out = Vec::new();
        for u in &self.upper {
            for l in &self.lower {
                if l.value > u.value {
                    out.push(format!("lower {} ({}) > upper {} ({})", l.value, l.method, u.value, u.method));
                }
            }
            if let Some(e) = &self.exact {
                if *e > u.value {
                    out.push(format!("exact {e} > upper {} ({})", u.value, u.method));
                }
            }
        }
        if let Some(e) = &self.exact {
            for l in &self.lower {
                if l.value > *e {
                    out.push(format!("lower {} ({}) > exact {e}", l.value, l.method));
                }
            }
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistencies().is_empty()
    }
}

/// `(|G| − |J| + 1)^N` for cyclic `G`.
pub fn generic_upper_bound(group: &GroupSpec, j: &[GroupElement], big_n: u64) -> Result<BigUint, EngineError> {
    if !group.is_cyclic() {
        return Err(EngineError::NotCyclic);
    }
    if group.order() < BigUint::from(3u32) {
        return Err(EngineError::GroupTooSmall(3));
    }
    let set: BTreeSet<&GroupElement> = j.iter().collect();
    if !set.contains(&group.zero()) {
        return Err(EngineError::MissingZero);
    }
    Ok((group.order() + 1u32 - set.len()).pow(big_n as u32))
}

/// A cyclotomic product whose support fits in the allowed residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub h: IntPolynomial,
    /// Divisors used; `1` stands for the factor `1 − t = −Φ_1`.
    pub divisors: Vec<u64>,
    pub subsets_visited: u64,
    /// Set when the subset cap stopped the search early.
    pub truncated: bool,
}

/// Highest-degree `h = ∏_{d∈S} ±Φ_d` over divisor sets `S` of `n` with
/// `supp h ⊆ J`.
///
/// `Φ_1` enters as `1 − t`, so every candidate has `h(0) = 1`, and the
/// negated inverse cyclotomic polynomial is among the candidates.
pub fn search_h(n: u64, j: &BTreeSet<u64>) -> Result<Option<SearchHit>, EngineError> {
    search_h_capped(n, j, SEARCH_SUBSET_CAP)
}

pub fn search_h_capped(n: u64, j: &BTreeSet<u64>, cap: u64) -> Result<Option<SearchHit>, EngineError> {
    if let Some(&bad) = j.iter().find(|&&k| k >= n) {
        return Err(EngineError::ResidueRange(bad));
    }
    if !j.contains(&0) {
        return Err(EngineError::MissingZero);
    }
    let max_deg = *j.iter().next_back().expect("contains 0");
    let mut factors: Vec<(u64, u64)> = Vec::new();
    for d in divisors(n)? {
        let phi = euler_phi(d)?;
        if phi <= max_deg {
            factors.push((d, phi));
        }
    }
    let mut polys: Vec<IntPolynomial> = Vec::with_capacity(factors.len());
    for &(d, _) in &factors {
        polys.push(if d == 1 { IntPolynomial::from_i64(&[1, -1]) } else { cyclotomic(d)? });
    }

    struct Ctx<'a> {
        factors: &'a [(u64, u64)],
        polys: &'a [IntPolynomial],
        j: &'a BTreeSet<u64>,
        max_deg: u64,
        cap: u64,
        visited: u64,
        truncated: bool,
        best: Option<(usize, IntPolynomial, Vec<u64>)>,
    }

    fn rec(ctx: &mut Ctx<'_>, start: usize, deg: u64, cur: &IntPolynomial, chosen: &mut Vec<u64>) {
        for i in start..ctx.factors.len() {
            if ctx.visited >= ctx.cap {
                ctx.truncated = true;
                return;
            }
            let (d, phi) = ctx.factors[i];
            if deg + phi > ctx.max_deg {
                continue;
            }
            ctx.visited += 1;
            let next = cur * &ctx.polys[i];
            chosen.push(d);
            let fits = next.support().iter().all(|&k| ctx.j.contains(&(k as u64)));
            let ndeg = next.degree().unwrap_or(0);
            if fits && ctx.best.as_ref().is_none_or(|b| ndeg > b.0) {
                ctx.best = Some((ndeg, next.clone(), chosen.clone()));
            }
            rec(ctx, i + 1, deg + phi, &next, chosen);
            chosen.pop();
        }
    }

    let mut ctx = Ctx {
        factors: &factors,
        polys: &polys,
        j,
        max_deg,
        cap,
        visited: 0,
        truncated: false,
        best: None,
    };
    rec(&mut ctx, 0, 0, &IntPolynomial::one(), &mut Vec::new());
    let (visited, truncated) = (ctx.visited, ctx.truncated);
    Ok(ctx.best.map(|(_, h, divisors)| SearchHit {
        h,
        divisors,
        subsets_visited: visited,
        truncated,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBound {
    pub value: BigUint,
    pub index: BigUint,
    pub n: u64,
    pub dp_count: BigUint,
}

/// `[G:⟨a⟩]^N · residue_dp_count(ord a, N)`.
pub fn pair_upper_bound(group: &GroupSpec, a: &GroupElement, big_n: u64) -> Result<PairBound, EngineError> {
    if big_n == 0 {
        return Err(EngineError::ZeroLength);
    }
    let n = element_order(group, a);
    if n < 3 {
        return Err(EngineError::SelfInverse);
    }
    let index = group.order() / n;
    let dp_count = residue_dp_count(n, big_n)?;
    Ok(PairBound {
        value: index.pow(big_n as u32) * &dp_count,
        index,
        n,
        dp_count,
    })
}

/// Knobs for [`best_bounds`].
#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    /// Largest `|⟨J⟩|^N` handed to the oracle.
    pub oracle_cap: u64,
    /// Options for exact tuple counts; a small multiset cap keeps reports fast.
    pub count: CountOptions,
    pub search_cap: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            oracle_cap: 1 << 7,
            count: CountOptions {
                multiset_cap: 1_000_000,
                ..CountOptions::default()
            },
            search_cap: SEARCH_SUBSET_CAP,
        }
    }
}

/// An element generating `⟨J⟩`, when that subgroup is cyclic and small
/// enough to scan.
pub fn subgroup_generator(group: &GroupSpec, j: &[GroupElement]) -> Option<GroupElement> {
    let h = subgroup_generated(group, j).ok()?;
    let order = h.order_u64()?;
    if order > ENUMERATION_LIMIT {
        return None;
    }
    h.members(group).ok()?.into_iter().find(|x| element_order(group, x) == order)
}

/// Aggregates every applicable bound.
pub fn best_bounds(
    group: &GroupSpec,
    j: &[GroupElement],
    big_n: u64,
    opts: &EngineOptions,
    interrupt: &dyn Interrupt,
) -> Result<BoundReport, EngineError> {
    if big_n == 0 {
        return Err(EngineError::ZeroLength);
    }
    let set: BTreeSet<GroupElement> = j.iter().cloned().collect();
    if !set.contains(&group.zero()) {
        return Err(EngineError::MissingZero);
    }
    let j: Vec<GroupElement> = set.iter().cloned().collect();
    let mut report = BoundReport {
        query: Query {
            group: group.clone(),
            j: j.clone(),
            n: big_n,
        },
        upper: Vec::new(),
        lower: Vec::new(),
        exact: None,
        notes: Vec::new(),
    };
    let order = group.order();
    let trivial = order.pow(big_n as u32);
    report.upper.push(BoundEntry::new(trivial, Method::Generic).with("form", "|G|^N"));

    match generic_upper_bound(group, &j, big_n) {
        Ok(v) => report
            .upper
            .push(BoundEntry::new(v, Method::Generic).with("form", "(|G|-|J|+1)^N")),
        Err(e) => report.notes.push(format!("generic: {e}")),
    }

    match clique_bounds(group, &j, big_n) {
        Ok(list) => {
            let mut best: BTreeMap<Method, BoundEntry> = BTreeMap::new();
            for c in list {
                let method = match c.kind {
                    CliqueKind::Progression => Method::CliqueProgression,
                    CliqueKind::Symmetric => Method::CliqueSymmetric,
                };
                if best.get(&method).is_some_and(|b| b.value <= c.value) {
                    continue;
                }
                best.insert(
                    method,
                    BoundEntry::new(c.value, method)
                        .with("g", &c.generator)
                        .with("m", c.m)
                        .with("clique", c.clique_size),
                );
            }
            report.upper.extend(best.into_values());
        }
        Err(e) => report.notes.push(format!("clique: {e}")),
    }

    // cyclotomic products on a cyclic subgroup containing J
    let mut generators: Vec<GroupElement> = Vec::new();
    if group.is_cyclic() {
        generators.push(group.element_reduced(&alloc::vec![1i64; group.rank()])?);
    }
    match subgroup_generator(group, &j) {
        Some(g) if !generators.iter().any(|x| element_order(group, x) == element_order(group, &g)) => {
            generators.push(g)
        }
        Some(_) => {}
        None => report.notes.push("spectral: <J> is not a scannable cyclic subgroup".into()),
    }
    for a in &generators {
        let n = element_order(group, a);
        let residues: Option<BTreeSet<u64>> = j.iter().map(|x| cyclic_log(group, a, x)).collect();
        let Some(residues) = residues else { continue };
        match search_h_capped(n, &residues, opts.search_cap) {
            Ok(Some(hit)) => {
                if hit.truncated {
                    report.notes.push(format!("search_h truncated after {} subsets", hit.subsets_visited));
                }
                match spectral_upper_bound(group, a, &j, &hit.h, big_n, &opts.count) {
                    Ok(b) => report.upper.push(
                        BoundEntry::new(b.value, Method::SpectralCyclotomic)
                            .with("a", a)
                            .with("n", n)
                            .with("h", &hit.h)
                            .with("divisors", join(&hit.divisors))
                            .with("degree", hit.h.degree().unwrap_or(0)),
                    ),
                    Err(e) => report.notes.push(format!("spectral on <{a}>: {e}")),
                }
            }
            Ok(None) => report.notes.push(format!("search_h: no cyclotomic product fits J in <{a}>")),
            Err(e) => report.notes.push(format!("search_h on <{a}>: {e}")),
        }
    }

    // pairs {0, a} ⊆ J, by D_G(J, N) ≤ D_G({0, a}, N)
    let one_minus_t = IntPolynomial::from_i64(&[1, -1]);
    let mut best_pair: Option<BoundEntry> = None;
    let mut best_dp: Option<BoundEntry> = None;
    let mut best_count: Option<BoundEntry> = None;
    let keep_min = |slot: &mut Option<BoundEntry>, e: BoundEntry| {
        if slot.as_ref().is_none_or(|b| e.value < b.value) {
            *slot = Some(e);
        }
    };
    for a in j.iter().filter(|x| !x.is_zero()) {
        let pair = [group.zero(), a.clone()];
        let n = element_order(group, a);
        if let Ok(b) = spectral_upper_bound(group, a, &pair, &one_minus_t, big_n, &opts.count) {
            keep_min(&mut best_pair, BoundEntry::new(b.value, Method::SpectralPair).with("a", a).with("n", n));
        }
        match spectral_upper_bound_counted(group, a, &pair, &one_minus_t, big_n, &opts.count) {
            Ok(b) => {
                let t = b.tuples.expect("counted");
                keep_min(
                    &mut best_count,
                    BoundEntry::new(b.value, Method::SpectralCount)
                        .with("a", a)
                        .with("n", n)
                        .with("count", &t.count)
                        .with("boundary", &t.boundary)
                        .with("ambiguous", &t.ambiguous),
                );
            }
            Err(SpectralError::MultisetOverflow { .. }) => {}
            Err(e) => report.notes.push(format!("tuple count on <{a}>: {e}")),
        }
        if n >= 3 {
            match pair_upper_bound(group, a, big_n) {
                Ok(p) => keep_min(
                    &mut best_dp,
                    BoundEntry::new(p.value, Method::PairResidueDp)
                        .with("a", a)
                        .with("n", n)
                        .with("dp", &p.dp_count),
                ),
                Err(e) => report.notes.push(format!("pair bound at {a}: {e}")),
            }
        }
    }
    report.upper.extend([best_pair, best_count, best_dp].into_iter().flatten());

    // lower bounds
    if j.len() == 2 {
        let a = &j[1];
        let n = element_order(group, a);
        if n >= 3 {
            let index = group.order() / n;
            match alon_slab_size(n, big_n) {
                Ok(s) => report.lower.push(
                    BoundEntry::new(s * index.pow(big_n as u32), Method::AlonSlab)
                        .with("a", a)
                        .with("n", n),
                ),
                Err(e) => report.notes.push(format!("slab: {e}")),
            }
        }
    }
    if oracle_feasible(group, &j, 1, opts.oracle_cap) {
        match product_lower_bound(group, &j, big_n, interrupt) {
            Ok(p) => report.lower.push(
                BoundEntry::new(p.value, Method::Product)
                    .with("base", &p.base)
                    .with("exact_base", p.exact_base),
            ),
            Err(e) => report.notes.push(format!("product: {e}")),
        }
    }
    if oracle_feasible(group, &j, big_n, opts.oracle_cap) {
        match exact_d(group, &j, big_n, opts.oracle_cap, interrupt) {
            Ok(d) => {
                let entry = BoundEntry::new(d.value.clone(), Method::Oracle)
                    .with("alpha", d.alpha_reduced)
                    .with("index", &d.index)
                    .with("exact", d.exact);
                if d.exact {
                    report.upper.push(entry.clone());
                    report.exact = Some(d.value);
                } else {
                    report.notes.push("oracle interrupted; value kept as a lower bound".into());
                }
                report.lower.push(entry);
            }
            Err(e) => report.notes.push(format!("oracle: {e}")),
        }
    } else {
        report.notes.push(format!("oracle skipped: |<J>|^N above {}", opts.oracle_cap));
    }
    if report.lower.is_empty() {
        report.lower.push(BoundEntry::new(BigUint::one(), Method::Product).with("form", "trivial"));
    }
    Ok(report)
}

fn join(ds: &[u64]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NoInterrupt;
    use alloc::vec;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn elems(g: &GroupSpec, ks: &[u64]) -> Vec<GroupElement> {
        ks.iter().map(|&k| g.element_at(k)).collect()
    }

    #[test]
    fn generic_examples() {
        let g = z(7);
        assert_eq!(generic_upper_bound(&g, &elems(&g, &[0, 1]), 2).unwrap(), BigUint::from(36u32));
        let g3 = z(3);
        assert_eq!(generic_upper_bound(&g3, &elems(&g3, &[0]), 4).unwrap(), BigUint::from(81u32));
        let f4 = GroupSpec::new(vec![2, 2]).unwrap();
        assert_eq!(generic_upper_bound(&f4, &[f4.zero()], 1), Err(EngineError::NotCyclic));
    }

    #[test]
    fn search_finds_phi105() {
        let h0 = cyclotomic(105).unwrap();
        let j: BTreeSet<u64> = h0.support().into_iter().map(|k| k as u64).collect();
        let hit = search_h(105, &j).unwrap().unwrap();
        assert_eq!(hit.h.degree(), Some(48));
        assert_eq!(hit.h, h0);
    }

    #[test]
    fn search_small_cases() {
        let pair: BTreeSet<u64> = [0, 1].into();
        let hit = search_h(7, &pair).unwrap().unwrap();
        assert_eq!(hit.h, IntPolynomial::from_i64(&[1, -1]));
        let j: BTreeSet<u64> = [0, 1, 2, 3, 4, 7, 8, 9, 10, 11].into();
        let hit = search_h(35, &j).unwrap().unwrap();
        assert_eq!(hit.h.degree(), Some(11));
        assert!(search_h(5, &[1].into()).is_err());
    }

    #[test]
    fn pair_bounds() {
        let g = z(3);
        let p = pair_upper_bound(&g, &g.element_at(1), 2).unwrap();
        assert_eq!(p.value, BigUint::from(4u32));
        let g = GroupSpec::new(vec![2, 4]).unwrap();
        let a = g.element(vec![0, 1]).unwrap();
        let p = pair_upper_bound(&g, &a, 1).unwrap();
        assert_eq!(p.value, BigUint::from(2u32) * residue_dp_count(4, 1).unwrap());
        let f4 = GroupSpec::new(vec![2, 2]).unwrap();
        assert_eq!(
            pair_upper_bound(&f4, &f4.element(vec![1, 0]).unwrap(), 1),
            Err(EngineError::SelfInverse)
        );
    }

    #[test]
    fn report_examples() {
        let opts = EngineOptions::default();
        let g = z(105);
        let j: Vec<_> = cyclotomic(105)
            .unwrap()
            .support()
            .into_iter()
            .map(|k| g.element_at(k as u64))
            .collect();
        let r = best_bounds(&g, &j, 2, &opts, &NoInterrupt).unwrap();
        assert!(r
            .upper
            .iter()
            .any(|e| e.method == Method::SpectralCyclotomic && e.value == BigUint::from(3249u32)));
        let best = r.best_upper().unwrap();
        assert_eq!((best.method, best.value.clone()), (Method::CliqueProgression, BigUint::from(848u32)));
        assert!(r.upper.iter().any(|e| e.method == Method::Generic && e.value == BigUint::from(5329u32)));
        assert!(r.is_consistent());

        let f4 = GroupSpec::new(vec![2, 2]).unwrap();
        let j = vec![f4.zero(), f4.element(vec![1, 0]).unwrap()];
        let r = best_bounds(&f4, &j, 3, &opts, &NoInterrupt).unwrap();
        assert_eq!(r.exact, Some(BigUint::from(8u32)));
        assert!(r
            .upper
            .iter()
            .any(|e| e.method == Method::SpectralPair && e.value == BigUint::from(8u32)));

        let g5 = z(5);
        let r = best_bounds(&g5, &elems(&g5, &[0, 1]), 1, &opts, &NoInterrupt).unwrap();
        assert_eq!(r.best_upper().unwrap().value, BigUint::from(2u32));
        assert_eq!(r.best_lower().unwrap().value, BigUint::from(2u32));
        assert!(r.is_consistent());
    }

    #[test]
    fn methods_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>(), Ok(m));
        }
    }
}
