//! The difference quotient `Δ_Y f(X) = (f(X+Y) - f(X)) / Y`.
//!
//! Bivariate results live in variables `(X, Y)` = `(0, 1)`.

use num_traits::{One, Zero};

use crate::exact::{binomial_u, Int, Rat};
use crate::poly::{Basis, MultiPoly, Poly};

/// The unique `g` with `Y*g(X,Y) = f(X+Y) - f(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaResult {
    pub g: MultiPoly,
}

impl DeltaResult {
    /// `g(x_image, y_image)`; this is Δ with a polynomial displacement.
    pub fn substitute(&self, x_image: &MultiPoly, y_image: &MultiPoly) -> MultiPoly {
        self.g.substitute(&[x_image.clone(), y_image.clone()])
    }
}

pub fn delta(f: &Poly) -> DeltaResult {
    let mut terms = Vec::new();
    for (n, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for i in 1..=n {
            let c = a * Rat::from_integer(binomial_u(n, i));
            terms.push((vec![(n - i) as u32, (i - 1) as u32], c));
        }
    }
    DeltaResult {
        g: MultiPoly::from_terms(2, Basis::Monomial, terms),
    }
}

/// `Δ_y f(X)`; at `y = 0` this is the derivative.
pub fn delta_at(f: &Poly, y: &Rat) -> Poly {
    let n = f.coeffs().len();
    let mut out = vec![Rat::zero(); n.saturating_sub(1)];
    for (deg, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut ypow = Rat::one();
        for i in 1..=deg {
            out[deg - i] += a * Rat::from_integer(binomial_u(deg, i)) * &ypow;
            ypow *= y;
        }
    }
    Poly::from_coeffs(out)
}

/// `Δ_h f` for a polynomial displacement `h`, expressed in whatever
/// variables `x` and `h` use.
pub fn delta_by(f: &Poly, x: &MultiPoly, h: &MultiPoly) -> MultiPoly {
    delta(f).substitute(x, h)
}

/// For `F(X, Y_1..Y_v)`, returns `Y·Δ_{Y·u} F` in `X` with a fresh last
/// variable `Y = Y_{v+1}`:
/// `c·m(Y)·X^n  ->  c·m(Y)·Σ_{i=1..n} C(n,i) u^(i-1) X^(n-i) Y^i`.
pub fn scaled_delta(f: &MultiPoly, u: &Int) -> MultiPoly {
    let f = f.to_monomial();
    let v = f.nvars();
    let u = Rat::from_integer(u.clone());
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        let n = e[0] as usize;
        let mut upow = Rat::one();
        for i in 1..=n {
            let mut ne = e.clone();
            ne[0] = (n - i) as u32;
            ne.push(i as u32);
            terms.push((ne, c * Rat::from_integer(binomial_u(n, i)) * &upow));
            upow *= &u;
        }
    }
    MultiPoly::from_terms(v + 1, Basis::Monomial, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn x2() -> MultiPoly {
        MultiPoly::var(0, 2)
    }
    fn y2() -> MultiPoly {
        MultiPoly::var(1, 2)
    }
    fn lift(f: &Poly) -> MultiPoly {
        MultiPoly::from_poly(f, 0, 2)
    }
    fn shifted(f: &Poly) -> MultiPoly {
        lift(f).substitute(&[&x2() + &y2(), y2()])
    }

    #[test]
    fn delta_examples() {
        let g = delta(&Poly::from_i64(&[0, 0, 1])).g;
        assert_eq!(g, &x2().scale(&rat(2, 1)) + &y2());
        assert!(delta(&Poly::from_i64(&[7])).g.is_zero());
        let cube = delta(&Poly::from_i64(&[0, 0, 0, 1])).g;
        let expect = MultiPoly::from_terms(
            2,
            Basis::Monomial,
            [
                (vec![2, 0], rat(3, 1)),
                (vec![1, 1], rat(3, 1)),
                (vec![0, 2], rat(1, 1)),
            ],
        );
        assert_eq!(cube, expect);
        assert_eq!(cube.to_string(), "3*X^2 + 3*X*Y + Y^2");
    }

    #[test]
    fn delta_at_examples() {
        let sq = Poly::from_i64(&[0, 0, 1]);
        assert_eq!(delta_at(&sq, &rat(0, 1)), Poly::from_i64(&[0, 2]));
        assert_eq!(delta_at(&sq, &rat(1, 1)), Poly::from_i64(&[1, 2]));
        let c2 = Poly::binomial(2);
        let direct = (&c2.shift(&rat(2, 1)) - &c2).scale(&rat(1, 2));
        assert_eq!(delta_at(&c2, &rat(2, 1)), direct);
        assert_eq!(direct, Poly::from_coeffs(vec![rat(1, 2), rat(1, 1)]));
    }

    #[test]
    fn scaled_delta_matches_specialization() {
        // F = X^3 with one parameter; Y·Δ_{3Y}F at Y = 2 is 2·Δ_6 F
        let f = Poly::from_i64(&[1, -2, 0, 1]);
        let s = scaled_delta(&MultiPoly::from_poly(&f, 0, 1), &Int::from(3));
        let at = s.substitute(&[MultiPoly::var(0, 1), MultiPoly::constant(rat(2, 1), 1)]);
        let expect = delta_at(&f, &rat(6, 1)).scale(&rat(2, 1));
        assert_eq!(at.to_poly_in(0).unwrap(), expect);
    }

    fn any_poly(deg: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-9i64..9, 1i64..4), 0..=deg + 1)
            .prop_map(|v| Poly::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn defining_identity(f in any_poly(7)) {
            let lhs = &y2() * &delta(&f).g;
            prop_assert_eq!(lhs, &shifted(&f) - &lift(&f));
        }

        #[test]
        fn derivative_at_zero(f in any_poly(8)) {
            prop_assert_eq!(delta_at(&f, &rat(0, 1)), f.derivative());
        }

        #[test]
        fn product_rule(f in any_poly(6), g in any_poly(6)) {
            let lhs = delta(&(&f * &g)).g;
            let rhs = &(&delta(&f).g * &shifted(&g)) + &(&lift(&f) * &delta(&g).g);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn chain_rule(f in any_poly(4), g in any_poly(4)) {
            let lhs = delta(&f.compose(&g)).g;
            let h = &shifted(&g) - &lift(&g);
            let rhs = &delta_by(&f, &lift(&g), &h) * &delta(&g).g;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn commutation(f in any_poly(7), y in -3i64..=3, z in -3i64..=3) {
            let (y, z) = (rat(y, 1), rat(z, 1));
            prop_assert_eq!(
                delta_at(&delta_at(&f, &y), &z),
                delta_at(&delta_at(&f, &z), &y)
            );
        }
    }
}
