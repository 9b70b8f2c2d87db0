use num_bigint::BigUint;
use proptest::prelude::*;

use intersective_core::abelian::{GroupElement, GroupSpec};
use intersective_core::engine::{best_bounds, EngineOptions, Method};
use intersective_core::NoInterrupt;

fn query(g: &GroupSpec, mask: u32) -> Vec<GroupElement> {
    let rest: Vec<_> = g.elements().unwrap().filter(|x| !x.is_zero()).collect();
    let mut j = vec![g.zero()];
    j.extend((0..rest.len()).filter(|i| mask >> i & 1 == 1).map(|i| rest[i].clone()));
    j
}

#[test]
fn reports_bracket_exact_values() {
    let opts = EngineOptions::default();
    let mut groups: Vec<GroupSpec> = (3..=5).map(|n| GroupSpec::cyclic(n).unwrap()).collect();
    groups.push(GroupSpec::new(vec![2, 2]).unwrap());
    for g in groups {
        let k = g.elements().unwrap().count() - 1;
        for mask in 0..1u32 << k {
            let j = query(&g, mask);
            for big_n in 1..=2 {
                let r = best_bounds(&g, &j, big_n, &opts, &NoInterrupt).unwrap();
                let exact = r.exact.clone().expect("oracle runs at this size");
                assert!(r.is_consistent(), "{:?}", r.inconsistencies());
                assert!(r.upper.iter().all(|e| e.value >= exact));
                assert!(r.lower.iter().all(|e| e.value <= exact));
            }
        }
    }
}

#[test]
fn pair_and_slab_entries_present() {
    let g = GroupSpec::cyclic(7).unwrap();
    let j = vec![g.zero(), g.element_at(1)];
    let r = best_bounds(&g, &j, 6, &EngineOptions::default(), &NoInterrupt).unwrap();
    let methods: Vec<Method> = r.upper.iter().chain(&r.lower).map(|e| e.method).collect();
    for m in [Method::PairResidueDp, Method::SpectralPair, Method::AlonSlab, Method::Generic] {
        assert!(methods.contains(&m), "{m}");
    }
    assert!(r.exact.is_none());
    assert!(r.is_consistent());
}

#[test]
fn non_cyclic_queries_skip_generic() {
    let g = GroupSpec::new(vec![2, 4]).unwrap();
    let j = vec![g.zero(), g.element(vec![1, 0]).unwrap(), g.element(vec![0, 1]).unwrap()];
    let r = best_bounds(&g, &j, 1, &EngineOptions::default(), &NoInterrupt).unwrap();
    assert!(r.notes.iter().any(|n| n.starts_with("generic")));
    assert_eq!(r.exact, Some(BigUint::from(4u32)));
    assert!(r.is_consistent());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_queries_are_consistent(n in 3u64..10, mask in any::<u32>(), big_n in 1u64..4) {
        let g = GroupSpec::cyclic(n).unwrap();
        let j = query(&g, mask & ((1 << (n - 1)) - 1));
        let r = best_bounds(&g, &j, big_n, &EngineOptions::default(), &NoInterrupt).unwrap();
        prop_assert!(r.is_consistent(), "{:?}", r.inconsistencies());
    }
}
