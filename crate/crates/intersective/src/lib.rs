//! Command-line front end and JSON formats for `intersective-core`.
//!
//! Also holds the pieces that need `std`: a process-wide cyclotomic memo and
//! a wall-clock [`Deadline`] usable wherever the core accepts an interrupt.

pub mod cli;
pub mod formats;
pub mod memo;

use std::time::{Duration, Instant};

use intersective_core::Interrupt;

pub use intersective_core as core;

/// Interrupt that fires once a wall-clock instant has passed.
#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    at: Option<Instant>,
}

impl Deadline {
    pub fn never() -> Self {
        Self { at: None }
    }

    pub fn after(d: Duration) -> Self {
        Self {
            at: Some(Instant::now() + d),
        }
    }

    /// `None` means no limit.
    pub fn from_secs(secs: Option<f64>) -> Self {
        match secs {
            Some(s) => Self::after(Duration::from_secs_f64(s.max(0.0))),
            None => Self::never(),
        }
    }

    pub fn expired(&self) -> bool {
        self.at.is_some_and(|t| Instant::now() >= t)
    }
}

impl Interrupt for Deadline {
    fn should_stop(&self) -> bool {
        self.expired()
    }
}
