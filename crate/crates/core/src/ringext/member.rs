use num_traits::{One, Zero};
use serde::Serialize;

use super::{GenDualElem, GenDualPoly};
use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::membership::{
    in_int, in_int_mod, in_int_multiset, MembershipVerdict, MultisetSpec, DEFAULT_MULTISET_CAP,
};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub subset: String,
    pub multiset: MultisetSpec,
    pub verdict: MembershipVerdict,
}

/// A point of the ring and the (non-integral) value there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingPoint {
    pub z: GenDualElem,
    pub value: GenDualElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtVerdict {
    pub member: bool,
    pub components: Vec<ComponentVerdict>,
}

/// `F = Σ f_T ρ_T` is integer-valued on `Z[ρ_1..ρ_n]` iff every `f_T` lies
/// in Int(Z; {r_i : i ∉ T}).
pub fn in_int_ext(f: &GenDualPoly) -> Result<ExtVerdict> {
    let rel = f.relations();
    if rel.len() > DEFAULT_MULTISET_CAP {
        return Err(Error::CapExceeded {
            size: rel.len(),
            cap: DEFAULT_MULTISET_CAP,
        });
    }
    let mut components = Vec::new();
    let mut member = true;
    for (t, p) in f.components() {
        let s = MultisetSpec::new(
            (0..rel.len())
                .filter(|i| t & (1 << i) == 0)
                .map(|i| rel.get(i).clone())
                .collect(),
        );
        let verdict = in_int_multiset(p, &s)?;
        member &= verdict.member;
        components.push(ComponentVerdict {
            subset: if t == 0 { "1".into() } else { super::subset_name(t) },
            multiset: s,
            verdict,
        });
    }
    Ok(ExtVerdict { member, components })
}

/// Looks for `z = x + Σ y_i ρ_i` with small integer entries where `F(z)`
/// leaves `Z[ρ]`. Exhaustive over `|x| <= bound` and `y_i ∈ {-2..2}`.
pub fn find_ring_witness(f: &GenDualPoly, bound: i64) -> Result<Option<RingPoint>> {
    let rel = f.relations();
    let n = rel.len();
    let order = [0i64, 1, -1, 2, -2];
    let xs: Vec<i64> = (0..=bound).flat_map(|x| if x == 0 { vec![0] } else { vec![x, -x] }).collect();
    let total = order.len().pow(n as u32);
    for idx in 0..total {
        let mut ys = Vec::with_capacity(n);
        let mut rest = idx;
        for _ in 0..n {
            ys.push(order[rest % order.len()]);
            rest /= order.len();
        }
        for &x in &xs {
            let z = GenDualElem::from_coeffs(
                rel,
                std::iter::once((0u32, Rat::from_integer(Int::from(x))))
                    .chain(ys.iter().enumerate().map(|(i, &y)| (1u32 << i, Rat::from_integer(Int::from(y))))),
            );
            let value = f.eval_direct(&z)?;
            if !value.is_integral() {
                return Ok(Some(RingPoint { z, value }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseVerdict {
    pub member: bool,
    pub witness: Option<RingPoint>,
}

/// Evaluates on `x + Σ b_i ε_i` with `x ∈ {0..degree+n}`, `b_i ∈ {0,1}`.
/// For pure dual relations this set is polynomially dense, so the answer
/// is exact.
pub fn dense_set_oracle(f: &GenDualPoly, degree: usize) -> Result<DenseVerdict> {
    let rel = f.relations();
    if let Some((i, r)) = rel.values().iter().enumerate().find(|(_, r)| !r.is_zero()) {
        return Err(Error::NonzeroRelation {
            index: i + 1,
            value: r.to_string(),
        });
    }
    if degree < f.degree() {
        return Err(Error::InvalidParameter(format!(
            "degree bound {degree} is below the polynomial degree {}",
            f.degree()
        )));
    }
    let n = rel.len();
    for bits in 0u32..(1 << n) {
        for x in 0..=(degree + n) {
            let z = GenDualElem::from_coeffs(
                rel,
                std::iter::once((0u32, Rat::from_integer(Int::from(x))))
                    .chain((0..n).filter(|i| bits & (1 << i) != 0).map(|i| (1u32 << i, Rat::one()))),
            );
            let value = f.eval_direct(&z)?;
            if !value.is_integral() {
                return Ok(DenseVerdict {
                    member: false,
                    witness: Some(RingPoint { z, value }),
                });
            }
        }
    }
    Ok(DenseVerdict {
        member: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackResult {
    pub first: Poly,
    pub second: Poly,
    pub fiber_ok: bool,
}

/// `f + gρ ↦ (f, f + rg)`, with the fiber condition: both coordinates in
/// Int(Z; rZ) and their difference `rg` in `r·Int(Z)`.
pub fn pullback_iso(f: &GenDualPoly) -> Result<PullbackResult> {
    let rel = f.relations();
    if rel.len() != 1 {
        return Err(Error::GeneratorCount {
            expected: 1,
            found: rel.len(),
        });
    }
    let r = rel.get(0).clone();
    if r.is_zero() {
        return Err(Error::ZeroRelation);
    }
    let (a, g) = (f.component(0), f.component(1));
    let b = &a + &g.scale(&Rat::from_integer(r.clone()));
    let diff_ok = in_int(&(&b - &a).scale(&Rat::new(Int::one(), r.clone()))).member;
    let fiber_ok = in_int_mod(&a, &r)?.member && in_int_mod(&b, &r)?.member && diff_ok;
    Ok(PullbackResult {
        first: a,
        second: b,
        fiber_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::super::RelationVector;
    use super::*;
    use crate::membership::in_int_k;
    use crate::poly::parse::parse_poly;

    fn rel(r: &[i64]) -> RelationVector {
        RelationVector::from_i64(r).unwrap()
    }

    fn ring(src: &str, r: &[i64]) -> GenDualPoly {
        GenDualPoly::parse(src, &rel(r)).unwrap()
    }

    #[test]
    fn dual_numbers_split() {
        for (f, g) in [("C(X,2)", "X"), ("2*C(X,2)", "C(X,3)"), ("X^2", "X/2")] {
            let poly = ring(&format!("{f} + ({g})*eps1"), &[0]);
            let expect = in_int_k(&parse_poly(f).unwrap(), 1).member && in_int(&parse_poly(g).unwrap()).member;
            assert_eq!(in_int_ext(&poly).unwrap().member, expect, "{f} + {g} eps");
            assert_eq!(dense_set_oracle(&poly, 4).unwrap().member, expect);
        }
    }

    #[test]
    fn split_complex_examples() {
        let good = ring("X + (C(X,2))*rho1", &[2]);
        assert!(in_int_ext(&good).unwrap().member);
        for x in -3..=3 {
            for y in -3..=3 {
                let z = GenDualElem::pair(good.relations(), Rat::from_integer(x.into()), Rat::from_integer(y.into()));
                assert!(good.eval_direct(&z).unwrap().is_integral());
            }
        }
        let bad = ring("C(X,2)", &[2]);
        assert!(!in_int_ext(&bad).unwrap().member);
        let z = GenDualElem::pair(bad.relations(), Rat::zero(), Rat::one());
        assert!(!bad.eval_direct(&z).unwrap().is_integral());
        let found = find_ring_witness(&bad, 4).unwrap().unwrap();
        assert!(!found.value.is_integral());
    }

    #[test]
    fn pullback_examples() {
        let p = pullback_iso(&ring("X + (C(X,2))*rho1", &[2])).unwrap();
        assert_eq!(p.second, parse_poly("X^2").unwrap());
        assert!(p.fiber_ok);
        assert!(pullback_iso(&ring("X^3 + (2*X - 5)*rho1", &[3])).unwrap().fiber_ok);
        let bad = pullback_iso(&ring("C(X,2)", &[2])).unwrap();
        assert_eq!(bad.first, bad.second);
        assert!(!bad.fiber_ok);
        assert_eq!(pullback_iso(&ring("X", &[0])), Err(Error::ZeroRelation));
        assert!(matches!(pullback_iso(&ring("X", &[1, 1])), Err(Error::GeneratorCount { .. })));
    }

    #[test]
    fn dense_witness_is_real() {
        let poly = ring("C(X,2)", &[0, 0]);
        let v = dense_set_oracle(&poly, 2).unwrap();
        assert!(!v.member);
        let w = v.witness.unwrap();
        assert_eq!(poly.eval_direct(&w.z).unwrap(), w.value);
        assert!(!w.value.is_integral());
        assert!(dense_set_oracle(&ring("3*X^2 + (X)*eps1*eps2", &[0, 0]), 2).unwrap().member);
    }
}
