//! Process-wide memo for cyclotomic polynomials.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use intersective_core::cyclotomic::{cyclotomic, PolyError};
use intersective_core::IntPolynomial;

/// Concurrent map `n ↦ Φ_n`. Reads share the lock; two threads racing on the
/// same `n` both compute it and the first insert wins, which is harmless
/// since the value is the same.
#[derive(Debug, Default)]
pub struct CyclotomicMemo {
    table: RwLock<HashMap<u64, Arc<IntPolynomial>>>,
}

impl CyclotomicMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u64) -> Result<Arc<IntPolynomial>, PolyError> {
        if let Some(p) = self.table.read().expect("memo lock").get(&n) {
            return Ok(Arc::clone(p));
        }
        let fresh = Arc::new(cyclotomic(n)?);
        let mut w = self.table.write().expect("memo lock");
        Ok(Arc::clone(w.entry(n).or_insert(fresh)))
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn global() -> &'static CyclotomicMemo {
    static MEMO: OnceLock<CyclotomicMemo> = OnceLock::new();
    MEMO.get_or_init(CyclotomicMemo::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::thread;

    #[test]
    fn concurrent_inserts_agree() {
        let memo = Arc::new(CyclotomicMemo::new());
        let handles: Vec<_> = (0..8)
            .map(|t| {
                let memo = Arc::clone(&memo);
                thread::spawn(move || {
                    (1..=60u64)
                        .filter_map(|n| memo.get((n * (t + 1)) % 60 + 1).unwrap().degree())
                        .count()
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 60);
        }
        assert_eq!(memo.len(), 60);
        for n in 1..=60 {
            assert_eq!(*memo.get(n).unwrap(), cyclotomic(n).unwrap());
        }
        let a = memo.get(105).unwrap();
        let b = memo.get(105).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
