//! Exact `D_G(J, N)` at small scale.
//!
//! `A ⊂ G^N` has `(A − A) ∩ J^N = {0}` exactly when it is independent in
//! `Cay(G^N, J^N ∪ (−J)^N \ {0})`. The independence number is found as a
//! maximum clique of the complement with a greedy-coloring bound.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::abelian::{subgroup_generated, GroupElement, GroupError, GroupSpec};
use crate::{Interrupt, NoInterrupt};

pub const DEFAULT_VERTEX_CAP: u64 = 1 << 20;

/// Largest vertex count for which adjacency is stored as bitsets.
pub const DENSE_LIMIT: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("J must contain 0")]
    MissingZero,
    #[error("{vertices} vertices exceed the cap of {cap}")]
    TooLarge { vertices: BigUint, cap: u64 },
    #[error("vertex {0} is out of range")]
    VertexRange(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `Cay(B^N, J^N ∪ (−J)^N \ {0})` where the alphabet `B` is `G` or a
/// subgroup containing `J`.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    group: GroupSpec,
    big_n: usize,
    base: Vec<GroupElement>,
    /// `in_j[i·b + k]`: whether `base[i] − base[k] ∈ J`.
    in_j: Vec<bool>,
    vertices: u64,
    dense: Option<Vec<Vec<u64>>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

fn set_bit(row: &mut [u64], j: usize) {
    row[j / 64] |= 1 << (j % 64);
}

impl CayleyGraph {
    fn with_base(
        group: &GroupSpec,
        j: &[GroupElement],
        big_n: u64,
        base: Vec<GroupElement>,
        cap: u64,
    ) -> Result<Self, OracleError> {
        if !j.iter().any(GroupElement::is_zero) {
            return Err(OracleError::MissingZero);
        }
        let b = base.len();
        let count = BigUint::from(b).pow(big_n as u32);
        let vertices = match count.to_u64() {
            Some(v) if v <= cap => v,
            _ => return Err(OracleError::TooLarge { vertices: count, cap }),
        };
        let mut in_j = vec![false; b * b];
        for (i, x) in base.iter().enumerate() {
            for (k, y) in base.iter().enumerate() {
                let d = group.sub(x, y);
                in_j[i * b + k] = j.contains(&d);
            }
        }
        let mut g = Self {
            group: group.clone(),
            big_n: big_n as usize,
            base,
            in_j,
            vertices,
            dense: None,
        };
        if vertices <= DENSE_LIMIT {
            let n = vertices as usize;
            let mut rows = vec![vec![0u64; words(n)]; n];
            for u in 0..n {
                for v in u + 1..n {
                    if g.adjacent_raw(u as u64, v as u64) {
                        set_bit(&mut rows[u], v);
                        set_bit(&mut rows[v], u);
                    }
                }
            }
            g.dense = Some(rows);
        }
        Ok(g)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn dimension(&self) -> usize {
        self.big_n
    }

    /// Alphabet of each coordinate.
    pub fn base(&self) -> &[GroupElement] {
        &self.base
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertices
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    /// Vertex id of a point, first coordinate varying fastest.
    pub fn encode(&self, point: &[GroupElement]) -> Option<u64> {
        if point.len() != self.big_n {
            return None;
        }
        let b = self.base.len() as u64;
        let mut id = 0u64;
        for x in point.iter().rev() {
            let digit = self.base.iter().position(|y| y == x)? as u64;
            id = id * b + digit;
        }
        Some(id)
    }

    pub fn decode(&self, mut id: u64) -> Vec<GroupElement> {
        let b = self.base.len() as u64;
        (0..self.big_n)
            .map(|_| {
                let d = id % b;
                id /= b;
                self.base[d as usize].clone()
            })
            .collect()
    }

    fn adjacent_raw(&self, mut u: u64, mut v: u64) -> bool {
        if u == v {
            return false;
        }
        let b = self.base.len() as u64;
        let (mut fwd, mut bwd) = (true, true);
        for _ in 0..self.big_n {
            let (du, dv) = ((u % b) as usize, (v % b) as usize);
            u /= b;
            v /= b;
            let bs = b as usize;
            fwd &= self.in_j[du * bs + dv];
            bwd &= self.in_j[dv * bs + du];
            if !fwd && !bwd {
                return false;
            }
        }
        true
    }

    pub fn adjacent(&self, u: u64, v: u64) -> bool {
        match &self.dense {
            Some(rows) => bit(&rows[u as usize], v as usize),
            None => self.adjacent_raw(u, v),
        }
    }

    pub fn neighbors(&self, u: u64) -> Vec<u64> {
        (0..self.vertices).filter(|&v| self.adjacent(u, v)).collect()
    }

    pub fn degree(&self, u: u64) -> u64 {
        (0..self.vertices).filter(|&v| self.adjacent(u, v)).count() as u64
    }
}

/// Cayley graph on all of `G^N`.
pub fn build_cayley(
    group: &GroupSpec,
    j: &[GroupElement],
    big_n: u64,
    cap: u64,
) -> Result<CayleyGraph, OracleError> {
    let elems: Vec<GroupElement> = group.elements()?.collect();
    CayleyGraph::with_base(group, j, big_n, elems, cap)
}

/// Whether every pair in `set` is adjacent.
pub fn verify_clique(x: &CayleyGraph, set: &[u64]) -> bool {
    set.iter().enumerate().all(|(i, &u)| {
        u < x.vertex_count() && set[i + 1..].iter().all(|&v| x.adjacent(u, v))
    })
}

/// Whether no pair in `set` is adjacent (repeats count as one vertex).
pub fn verify_independent(x: &CayleyGraph, set: &[u64]) -> bool {
    set.iter().enumerate().all(|(i, &u)| {
        u < x.vertex_count() && set[i + 1..].iter().all(|&v| u == v || !x.adjacent(u, v))
    })
}

/// Outcome of an independence-number search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisOutcome {
    /// Size of the largest independent set found.
    pub alpha: u64,
    /// Whether `alpha` is proved maximum; `false` after an interrupt.
    pub exact: bool,
    /// Vertex ids of an independent set of size `alpha`.
    pub certificate: Vec<u64>,
}

trait Adjacency {
    fn len(&self) -> usize;
    fn adj(&self, i: usize, j: usize) -> bool;
}

/// Complement of `X` restricted to the candidate list.
struct BitComplement {
    rows: Vec<Vec<u64>>,
}

impl Adjacency for BitComplement {
    fn len(&self) -> usize {
        self.rows.len()
    }
    fn adj(&self, i: usize, j: usize) -> bool {
        bit(&self.rows[i], j)
    }
}

struct LazyComplement<'a> {
    graph: &'a CayleyGraph,
    cand: &'a [u64],
}

impl Adjacency for LazyComplement<'_> {
    fn len(&self) -> usize {
        self.cand.len()
    }
    fn adj(&self, i: usize, j: usize) -> bool {
        i != j && !self.graph.adjacent(self.cand[i], self.cand[j])
    }
}

struct CliqueSearch<'a, A: Adjacency> {
    adj: &'a A,
    best: Vec<u32>,
    current: Vec<u32>,
    nodes: u64,
    stopped: bool,
    interrupt: &'a dyn Interrupt,
}

impl<A: Adjacency> CliqueSearch<'_, A> {
    /// Greedy coloring of `p` in order; returns vertices sorted by color
    /// together with their color numbers (1-based).
    fn color_sort(&self, p: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for &v in p {
            let slot = classes
                .iter()
                .position(|c| c.iter().all(|&w| !self.adj.adj(v as usize, w as usize)));
            match slot {
                Some(k) => classes[k].push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(p.len());
        let mut colors = Vec::with_capacity(p.len());
        for (k, c) in classes.iter().enumerate() {
            for &v in c {
                order.push(v);
                colors.push(k as u32 + 1);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, mut p: Vec<u32>, mut colors: Vec<u32>) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.interrupt.should_stop() {
            self.stopped = true;
        }
        while let Some(&v) = p.last() {
            if self.stopped {
                return;
            }
            let c = *colors.last().expect("colors track p");
            if self.current.len() + c as usize <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next: Vec<u32> = p[..p.len() - 1]
                .iter()
                .copied()
                .filter(|&w| self.adj.adj(v as usize, w as usize))
                .collect();
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                let (order, cols) = self.color_sort(&next);
                self.expand(order, cols);
            }
            self.current.pop();
            p.pop();
            colors.pop();
        }
    }
}

fn max_clique<A: Adjacency>(adj: &A, interrupt: &dyn Interrupt) -> (Vec<u32>, bool) {
    let n = adj.len();
    if n == 0 {
        return (Vec::new(), true);
    }
    let mut deg: Vec<(usize, u32)> = (0..n)
        .map(|i| ((0..n).filter(|&j| adj.adj(i, j)).count(), i as u32))
        .collect();
    deg.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let initial: Vec<u32> = deg.iter().map(|&(_, v)| v).collect();

    let mut search = CliqueSearch {
        adj,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        stopped: false,
        interrupt,
    };
    // a greedy clique gives an early incumbent
    let mut greedy: Vec<u32> = Vec::new();
    for &v in &initial {
        if greedy.iter().all(|&w| adj.adj(v as usize, w as usize)) {
            greedy.push(v);
        }
    }
    search.best = greedy;
    let (order, colors) = search.color_sort(&initial);
    search.expand(order, colors);
    let best = search.best;
    (best, !search.stopped)
}

/// Exact `α(X)`, or a flagged lower bound if interrupted.
///
/// Translations act transitively, so some maximum independent set
/// contains vertex `0`; the search runs on its non-neighbors.
pub fn independence_number(x: &CayleyGraph, interrupt: &dyn Interrupt) -> MisOutcome {
    let n = x.vertex_count();
    if n == 0 {
        return MisOutcome {
            alpha: 0,
            exact: true,
            certificate: Vec::new(),
        };
    }
    let cand: Vec<u64> = (1..n).filter(|&v| !x.adjacent(0, v)).collect();
    let (clique, exact) = if cand.len() as u64 <= DENSE_LIMIT {
        let m = cand.len();
        let mut rows = vec![vec![0u64; words(m)]; m];
        for i in 0..m {
            for k in i + 1..m {
                if !x.adjacent(cand[i], cand[k]) {
                    set_bit(&mut rows[i], k);
                    set_bit(&mut rows[k], i);
                }
            }
        }
        max_clique(&BitComplement { rows }, interrupt)
    } else {
        max_clique(&LazyComplement { graph: x, cand: &cand }, interrupt)
    };
    let mut certificate = vec![0u64];
    certificate.extend(clique.iter().map(|&i| cand[i as usize]));
    MisOutcome {
        alpha: certificate.len() as u64,
        exact,
        certificate,
    }
}

/// Result of [`exact_d`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactD {
    /// `α(Y)·[G:H]^N`, a lower bound when `exact` is false.
    pub value: BigUint,
    pub exact: bool,
    /// `α` of the graph on `H^N`.
    pub alpha_reduced: u64,
    /// `[G : H]`.
    pub index: BigUint,
    /// Independent set in `H^N`, as points of `G^N`.
    pub certificate: Vec<Vec<GroupElement>>,
}

/// `D_G(J, N) = D_H(J, N)·[G:H]^N` with `H = ⟨J⟩`.
pub fn exact_d(
    group: &GroupSpec,
    j: &[GroupElement],
    big_n: u64,
    cap: u64,
    interrupt: &dyn Interrupt,
) -> Result<ExactD, OracleError> {
    let h = subgroup_generated(group, j)?;
    let members = h.members(group)?;
    let y = CayleyGraph::with_base(group, j, big_n, members, cap)?;
    let out = independence_number(&y, interrupt);
    let index = h.index();
    Ok(ExactD {
        value: BigUint::from(out.alpha) * index.pow(big_n as u32),
        exact: out.exact,
        alpha_reduced: out.alpha,
        index,
        certificate: out.certificate.iter().map(|&v| y.decode(v)).collect(),
    })
}

/// [`exact_d`] without interruption and with the default cap.
pub fn exact_d_default(group: &GroupSpec, j: &[GroupElement], big_n: u64) -> Result<ExactD, OracleError> {
    exact_d(group, j, big_n, DEFAULT_VERTEX_CAP, &NoInterrupt)
}

/// Whether `|⟨J⟩|^N` is within `cap`.
pub fn oracle_feasible(group: &GroupSpec, j: &[GroupElement], big_n: u64, cap: u64) -> bool {
    match subgroup_generated(group, j) {
        Ok(h) => h.order().pow(big_n as u32) <= BigUint::from(cap),
        Err(_) => false,
    }
}

/// `true` if every point pair in `points` has difference outside
/// `J^N \ {0}` in both directions.
pub fn verify_difference_free(group: &GroupSpec, j: &[GroupElement], points: &[Vec<GroupElement>]) -> bool {
    let in_jn = |a: &[GroupElement], b: &[GroupElement]| {
        a.iter().zip(b).all(|(x, y)| j.contains(&group.sub(x, y)))
    };
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a == b || in_jn(a, b) || in_jn(b, a) {
                return false;
            }
        }
    }
    true
}
