use ivpoly::exact::{rat, Rat};
use ivpoly::poly::{BinomPoly, Poly};
use ivpoly::ringext::{find_ring_witness, in_int_ext, GenDualElem, GenDualPoly, RelationVector};
use proptest::prelude::*;

fn comp() -> impl Strategy<Value = Poly> {
    proptest::collection::vec((-4i64..=4, prop_oneof![Just(1i64), Just(2), Just(3), Just(4)]), 1..=4)
        .prop_map(|v| BinomPoly::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()).to_poly())
}

fn ext_poly(rel: RelationVector) -> impl Strategy<Value = GenDualPoly> {
    let n = rel.full_mask() as usize + 1;
    proptest::collection::vec(comp(), n).prop_map(move |cs| {
        GenDualPoly::from_components(&rel, cs.into_iter().enumerate().map(|(m, p)| (m as u32, p)))
    })
}

fn elem(rel: &RelationVector) -> impl Strategy<Value = GenDualElem> {
    let rel = rel.clone();
    let n = rel.full_mask() as usize + 1;
    proptest::collection::vec(-3i64..=3, n).prop_map(move |v| {
        GenDualElem::from_coeffs(&rel, v.into_iter().enumerate().map(|(m, c)| (m as u32, Rat::from_integer(c.into()))))
    })
}

fn rel2() -> RelationVector {
    RelationVector::from_i64(&[2, 0]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_is_a_ring_map(f in ext_poly(rel2()), g in ext_poly(rel2()), z in elem(&rel2())) {
        let fz = f.eval_direct(&z).unwrap();
        let gz = g.eval_direct(&z).unwrap();
        prop_assert_eq!(f.add(&g).unwrap().eval_direct(&z).unwrap(), fz.add(&gz).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().eval_direct(&z).unwrap(), fz.mul(&gz).unwrap());
    }

    #[test]
    fn members_have_no_witness(f in ext_poly(RelationVector::from_i64(&[3]).unwrap())) {
        let v = in_int_ext(&f).unwrap();
        let w = find_ring_witness(&f, 6).unwrap();
        if v.member {
            prop_assert!(w.is_none());
        }
        if let Some(w) = w {
            prop_assert!(!v.member);
            prop_assert!(!w.value.is_integral());
        }
    }

    #[test]
    fn unit_relation_splits(f in comp(), g in comp()) {
        // rho^2 = rho: Z[rho] = Z x Z via rho -> 0, rho -> 1.
        let rel = RelationVector::from_i64(&[1]).unwrap();
        let fg = GenDualPoly::from_components(&rel, [(0, f.clone()), (1, g.clone())]);
        let plus = &f + &g;
        let split = ivpoly::membership::in_int(&f).member && ivpoly::membership::in_int(&plus).member;
        prop_assert_eq!(in_int_ext(&fg).unwrap().member, split);
    }
}

#[test]
fn frozen_dual_examples() {
    let rel = RelationVector::dual(1).unwrap();
    let member = GenDualPoly::parse("2*C(X,2) + C(X,1)*eps1", &rel).unwrap();
    assert!(in_int_ext(&member).unwrap().member);
    let outsider = GenDualPoly::parse("C(X,2)", &rel).unwrap();
    let v = in_int_ext(&outsider).unwrap();
    assert!(!v.member);
    let w = find_ring_witness(&outsider, 3).unwrap().unwrap();
    assert!(!w.value.is_integral());
}
