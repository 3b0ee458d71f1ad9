use ivpoly::exact::{rat, Int};
use ivpoly::lattice::{basis_int_k, basis_int_mod, prime_pattern, zx_plus_m_int};
use ivpoly::membership::{in_int_k, in_int_mod};
use ivpoly::poly::BinomPoly;
use proptest::prelude::*;

fn candidate(degree: usize) -> impl Strategy<Value = BinomPoly> {
    proptest::collection::vec((-8i64..=8, prop_oneof![Just(1i64), Just(2), Just(4), Just(8), Just(3)]), degree + 1)
        .prop_map(|v| BinomPoly::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mod_basis_is_complete(b in candidate(7), m in prop_oneof![Just(2i64), Just(3), Just(4), Just(6), Just(8)]) {
        let l = basis_int_mod(&Int::from(m), 7).unwrap();
        let f = b.to_poly();
        prop_assert_eq!(l.contains(&f), in_int_mod(&f, &Int::from(m)).unwrap().member);
    }

    #[test]
    fn derivative_basis_is_complete(b in candidate(7), k in 0usize..=3) {
        let l = basis_int_k(k, 7).unwrap();
        let f = b.to_poly();
        prop_assert_eq!(l.contains(&f), in_int_k(&f, k).member);
    }
}

#[test]
fn rows_are_members() {
    for m in [2i64, 4, 9, 12] {
        for row in basis_int_mod(&Int::from(m), 9).unwrap().rows_as_polys() {
            assert!(in_int_mod(&row.to_poly(), &Int::from(m)).unwrap().member, "{m}: {row}");
        }
    }
    for k in 0..=4 {
        for row in basis_int_k(k, 9).unwrap().rows_as_polys() {
            assert!(in_int_k(&row.to_poly(), k).member);
        }
    }
}

#[test]
fn derivative_filtration_decreases() {
    for k in 0..4 {
        let a = basis_int_k(k + 1, 10).unwrap();
        let b = basis_int_k(k, 10).unwrap();
        assert!(a.is_sublattice_of(&b).unwrap());
        assert!(!b.is_sublattice_of(&a).unwrap());
    }
}

#[test]
fn primes_give_zx_plus_p_int() {
    for p in [2u64, 3, 5, 7] {
        let l = basis_int_mod(&Int::from(p), 10).unwrap();
        assert_eq!(l, zx_plus_m_int(&Int::from(p), 10).unwrap());
        let got: Vec<Int> = l.pivots().into_iter().map(Option::unwrap).collect();
        assert_eq!(got, prime_pattern(p, 10));
    }
}

#[test]
fn frozen_mod4_pivots() {
    let got: Vec<String> = basis_int_mod(&Int::from(4), 12)
        .unwrap()
        .pivots()
        .into_iter()
        .map(|p| p.unwrap().to_string())
        .collect();
    assert_eq!(got, ["1", "1", "2", "2", "2", "2", "4", "4", "4", "4", "4", "4", "4"]);
}

#[test]
fn extending_the_degree_keeps_the_slice() {
    let small = basis_int_k(2, 6).unwrap();
    let big = basis_int_k(2, 9).unwrap();
    assert!(small.extend_degree(9).is_sublattice_of(&big).unwrap());
}
