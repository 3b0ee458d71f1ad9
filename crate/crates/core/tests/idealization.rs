use ivpoly::idealization::{
    grid_oracle, grid_points, ideal_eval, ideal_eval_horner, in_int_idealization, random_ideal_poly, IdealPoly,
    ModuleSpec,
};
use ivpoly::random::rng;
use proptest::prelude::*;

fn specs() -> Vec<ModuleSpec> {
    ["Z", "Z^2", "Z/4", "Z/6", "Q"]
        .iter()
        .map(|s| ModuleSpec::parse(s).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_matches_horner(seed in any::<u64>(), k in 0usize..=2) {
        let mut r = rng(seed);
        for spec in specs() {
            let f = random_ideal_poly(&mut r, &spec, k).unwrap();
            for z in grid_points(&spec, 3) {
                prop_assert_eq!(ideal_eval(&f, &z).ok(), ideal_eval_horner(&f, &z).ok());
            }
        }
    }

    #[test]
    fn verdict_matches_grid(seed in any::<u64>(), k in 0usize..=2) {
        let mut r = rng(seed);
        for spec in specs() {
            let f = random_ideal_poly(&mut r, &spec, k).unwrap();
            prop_assert_eq!(in_int_idealization(&f, k).member, grid_oracle(&f, k).unwrap(), "{} k={}", spec, k);
        }
    }

    #[test]
    fn members_survive_one_derivative(seed in any::<u64>(), k in 1usize..=2) {
        let mut r = rng(seed);
        for spec in specs() {
            let f = random_ideal_poly(&mut r, &spec, k).unwrap();
            if in_int_idealization(&f, k).member {
                prop_assert!(in_int_idealization(&f.derivative(), k - 1).member);
            }
        }
    }
}

#[test]
fn frozen_examples() {
    let v = |s: &str, k| in_int_idealization(&IdealPoly::parse(s).unwrap(), k).member;
    assert!(v("(2*C(X,2) ; C(X,2)) over Z(+)Z", 0));
    assert!(!v("(C(X,2) ; 0) over Z(+)Z", 0));
    assert!(!v("(X^2/3 ; 0) over Z(+)Z/3", 0));
    assert!(v("(C(X,2) ; 0) over Z(+)Z/3", 0));
    assert!(!v("(C(X,2) ; 0) over Z(+)Z/2", 0));
    assert!(v("(C(X,2) ; 1/2) over Z(+)Q", 0));
    assert!(!v("(C(X,2) ; 0) over Z(+)Q", 1));
}
