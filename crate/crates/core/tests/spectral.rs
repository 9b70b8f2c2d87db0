use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use intersective_core::abelian::GroupSpec;
use intersective_core::arith::divisors;
use intersective_core::cyclotomic::cyclotomic;
use intersective_core::engine::search_h;
use intersective_core::spectral::{
    cayley_eigenvalue, count_nonneg_tuples, divides_x_pow_minus_one, residue_dp_count,
    residue_dp_ratios, CountOptions, GroupWeight, ResidueDpState,
};
use intersective_core::IntPolynomial;

fn small_groups() -> Vec<GroupSpec> {
    let mut out: Vec<GroupSpec> = (2..=12).map(|n| GroupSpec::cyclic(n).unwrap()).collect();
    for f in [vec![2, 2], vec![2, 4], vec![2, 2, 2], vec![3, 3], vec![2, 6], vec![2, 2, 3]] {
        out.push(GroupSpec::new(f).unwrap());
    }
    out
}

#[test]
fn character_sums_match_dense_eigensolver() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for g in small_groups() {
        let elems: Vec<_> = g.elements().unwrap().collect();
        let m = elems.len();
        for _ in 0..4 {
            let mut f = vec![0i64; m];
            for x in &elems {
                let i = g.index_of(x) as usize;
                let j = g.index_of(&g.neg(x)) as usize;
                if i <= j && !x.is_zero() {
                    let c = rng.gen_range(-5..=5);
                    f[i] = c;
                    f[j] = c;
                }
            }
            let w = GroupWeight::new(
                g.clone(),
                elems.iter().map(|x| (x.clone(), BigInt::from(f[g.index_of(x) as usize]))),
            )
            .unwrap();
            let a = DMatrix::from_fn(m, m, |r, c| f[g.index_of(&g.sub(&elems[c], &elems[r])) as usize] as f64);
            let mut dense: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
            let mut ours: Vec<f64> = g
                .characters()
                .unwrap()
                .map(|chi| {
                    let z = cayley_eigenvalue(&w, &chi, 96);
                    assert!(z.im.to_f64().abs() < 1e-12);
                    z.re.to_f64()
                })
                .collect();
            dense.sort_by(f64::total_cmp);
            ours.sort_by(f64::total_cmp);
            for (x, y) in dense.iter().zip(&ours) {
                assert!((x - y).abs() < 1e-9, "{g}: {x} vs {y}");
            }
        }
    }
}

fn eval(h: &IntPolynomial, z: Complex64) -> Complex64 {
    h.terms().map(|(k, c)| z.powu(k as u32) * c.to_string().parse::<f64>().unwrap()).sum()
}

fn brute_count(h: &IntPolynomial, n: u64, big_n: u32) -> u64 {
    let vals: Vec<Complex64> = (0..n)
        .map(|v| eval(h, Complex64::from_polar(1.0, 2.0 * PI * v as f64 / n as f64)))
        .collect();
    let mut count = 0;
    for idx in 0..n.pow(big_n) {
        let mut t = idx;
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..big_n {
            p *= vals[(t % n) as usize];
            t /= n;
        }
        if p.re >= 1.0 - 1e-9 {
            count += 1;
        }
    }
    count
}

fn candidate_hs(n: u64) -> Vec<IntPolynomial> {
    let mut out = vec![IntPolynomial::from_i64(&[1, -1])];
    if n > 2 {
        out.push(IntPolynomial::from_i64(&[1, 0, -1]));
    }
    let ds = divisors(n).unwrap();
    for mask in 1u32..(1 << ds.len()) {
        let mut h = IntPolynomial::one();
        for (i, &d) in ds.iter().enumerate() {
            if mask >> i & 1 == 1 {
                h = &h * &if d == 1 { IntPolynomial::from_i64(&[1, -1]) } else { cyclotomic(d).unwrap() };
            }
        }
        if h.degree().unwrap() < n as usize && !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

#[test]
fn tuple_counts_match_enumeration() {
    let opts = CountOptions::default();
    for n in 2..=6u64 {
        for h in candidate_hs(n) {
            for big_n in 1..=4u32 {
                let c = count_nonneg_tuples(&h, n, big_n as u64, &opts).unwrap();
                assert_eq!(c.ambiguous, BigUint::ZERO);
                assert_eq!(c.count, BigUint::from(brute_count(&h, n, big_n)), "h={h} n={n} N={big_n}");
                if divides_x_pow_minus_one(&h, n) {
                    let closed = BigUint::from(n - h.degree().unwrap() as u64).pow(big_n);
                    assert!(c.count <= closed);
                }
            }
        }
    }
}

fn brute_dp(n: u64, big_n: u32) -> u64 {
    let m = n - 1;
    (0..m.pow(big_n))
        .filter(|&idx| {
            let mut t = idx;
            let mut s = 0;
            for _ in 0..big_n {
                s += t % m + 1;
                t /= m;
            }
            (PI * (s as f64 / n as f64 - big_n as f64 / 2.0)).cos() > 1e-9
        })
        .count() as u64
}

#[test]
fn residue_dp_matches_enumeration() {
    for n in 3..=7u64 {
        for big_n in 1..=5u32 {
            assert_eq!(residue_dp_count(n, big_n as u64).unwrap(), BigUint::from(brute_dp(n, big_n)));
        }
    }
    assert_eq!(residue_dp_count(3, 2).unwrap(), BigUint::from(4u32));
    assert_eq!(residue_dp_count(5, 1).unwrap(), BigUint::from(4u32));
}

#[test]
fn residue_dp_dominates_pair_count() {
    let h = IntPolynomial::from_i64(&[1, -1]);
    for n in 3..=7u64 {
        for big_n in 1..=4u64 {
            let c = count_nonneg_tuples(&h, n, big_n, &CountOptions::default()).unwrap();
            assert!(c.count <= residue_dp_count(n, big_n).unwrap());
        }
    }
}

#[test]
fn ratios_settle_near_parity_constants() {
    for n in [3u64, 5, 7] {
        let rows = residue_dp_ratios(n, 201).unwrap();
        for &(big_n, r) in &rows[199..] {
            let c = if big_n % 2 == 0 { 0.5 } else { (n - 1) as f64 / (2 * n) as f64 };
            assert!((r - c).abs() <= 0.02, "n={n} N={big_n}: {r}");
        }
    }
}

#[test]
fn search_recovers_products() {
    let cases = [
        (105u64, cyclotomic(105).unwrap()),
        (17 * 27, &cyclotomic(17).unwrap() * &cyclotomic(27).unwrap()),
    ];
    for (n, h0) in cases {
        let j: BTreeSet<u64> = h0.support().into_iter().map(|k| k as u64).collect();
        let hit = search_h(n, &j).unwrap().unwrap();
        assert!(hit.h.degree() >= h0.degree());
        assert!(hit.h.support().iter().all(|&k| j.contains(&(k as u64))));
        assert!(divides_x_pow_minus_one(&hit.h, n));
    }
}

proptest! {
    #[test]
    fn dp_distribution_is_mirror_symmetric(n in 3u64..12, big_n in 1u64..12) {
        let mut st = ResidueDpState::new(n).unwrap();
        for _ in 0..big_n {
            st.step();
        }
        let two_n = 2 * n;
        let counts = st.counts();
        for rho in 0..two_n {
            let mirror = ((n * big_n) % two_n + two_n - rho) % two_n;
            prop_assert_eq!(&counts[rho as usize], &counts[mirror as usize]);
        }
        prop_assert_eq!(st.total(), BigUint::from(n - 1).pow(big_n as u32));
        prop_assert!(st.accepted() <= st.total());
    }

    #[test]
    fn search_hits_are_admissible(n in 3u64..80, extra in proptest::collection::btree_set(1u64..80, 0..12)) {
        let mut j: BTreeSet<u64> = extra.into_iter().filter(|&k| k < n).collect();
        j.insert(0);
        if let Some(hit) = search_h(n, &j).unwrap() {
            prop_assert!(hit.h.support().iter().all(|&k| j.contains(&(k as u64))));
            prop_assert_eq!(hit.h.coeff(0), BigInt::from(1));
            prop_assert!(divides_x_pow_minus_one(&hit.h, n));
        }
    }
}
