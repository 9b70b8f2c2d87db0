//! Upper and lower bounds, and exact values at small scale, for
//! `D_G(J, N)`: the largest `A ⊂ G^N` whose difference set meets `J^N`
//! only at the origin, for a finite abelian group `G` and `0 ∈ J ⊂ G`.
//!
//! The crate is `no_std` and needs only `alloc`. Anything that touches the
//! clock, the filesystem, or a process-wide cache lives in the companion
//! `intersective` crate.
//!
//! Layout:
//!
//! * [`abelian`]: groups as products of cyclic factors, subgroups, characters.
//! * [`cyclotomic`]: exact integer polynomials and cyclotomic polynomials.
//! * [`ball`]: fixed-point ball arithmetic used to certify sign decisions.
//! * [`spectral`]: weighted Cayley spectra, tuple counts, residue DP,
//!   inertia and clique bounds.
//! * [`oracle`]: explicit Cayley graphs and exact independence numbers.
//! * [`constructions`]: lower-bound constructions and the `n = Q·r^s` family.
//! * [`engine`]: aggregation of every applicable bound into a report.

#![no_std]

extern crate alloc;

pub mod abelian;
pub mod arith;
pub mod ball;
pub mod constructions;
pub mod cyclotomic;
pub mod engine;
pub mod oracle;
pub mod spectral;

pub use abelian::{CharacterIndex, GroupElement, GroupSpec, RootOfUnity, SubgroupInfo};

pub use ball::{Ball, ComplexBall};
pub use cyclotomic::IntPolynomial;
pub use engine::{BoundEntry, BoundReport, EngineOptions, Method};

/// Cooperative cancellation hook for long searches.
///
/// The core crate has no clock; callers that want a wall-clock timeout pass
/// a closure that reports when the deadline has passed.
pub trait Interrupt {
    fn should_stop(&self) -> bool;
}

impl<F: Fn() -> bool> Interrupt for F {
    fn should_stop(&self) -> bool {
        self()
    }
}

/// Never interrupts.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoInterrupt;

impl Interrupt for NoInterrupt {
    fn should_stop(&self) -> bool {
        false
    }
}
