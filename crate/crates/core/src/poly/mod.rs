//! Polynomials over Q: dense univariate ([`Poly`], [`BinomPoly`]) and sparse
//! multivariate ([`MultiPoly`]).

mod binomial;
mod multi;
pub mod parse;

pub use binomial::BinomPoly;
pub use multi::{Basis, MultiPoly};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{binomial as int_binomial, Int, Rat};

/// Univariate polynomial in the monomial basis, `coeffs[k]` multiplying `X^k`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and [`Poly::degree`] returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// The binomial coefficient polynomial C(X, k).
    pub fn binomial(k: usize) -> Self {
        let mut e = vec![Rat::zero(); k + 1];
        e[k] = Rat::one();
        BinomPoly::from_coeffs(e).to_poly()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: &Int) -> Rat {
        self.eval(&Rat::from_integer(x.clone()))
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(Int::from(k)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Poly {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// `self(g(X))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * g) + &Poly::constant(c.clone()))
    }

    /// `self(X + c)`, expanded with the binomial theorem.
    pub fn shift(&self, c: &Rat) -> Poly {
        let n = self.coeffs.len();
        let mut out = vec![Rat::zero(); n];
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut cpow = Rat::one();
            for j in (0..=k).rev() {
                out[j] += a * Rat::from_integer(int_binomial(&Int::from(k), k - j)) * &cpow;
                cpow *= c;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn to_binomial(&self) -> BinomPoly {
        BinomPoly::from_poly(self)
    }

    pub fn is_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(crate::exact::is_integral)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> Int {
        crate::exact::common_denominator(&self.coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Poly, Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Polynomials serialize as their text form.
macro_rules! serialize_as_text {
    ($($t:ty),*) => {$(
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}
serialize_as_text!(Poly, BinomPoly, MultiPoly);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Rat, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let atom = match k {
                    0 => String::new(),
                    1 => "X".to_string(),
                    _ => format!("X^{k}"),
                };
                (c.clone(), atom)
            })
            .collect();
        f.write_str(&parse::render_terms(&terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn derivative_examples() {
        assert_eq!(Poly::from_i64(&[0, 0, 1]).derivative(), Poly::from_i64(&[0, 2]));
        assert!(Poly::from_i64(&[5]).derivative().is_zero());
        let c2 = Poly::binomial(2);
        assert_eq!(
            c2.derivative(),
            Poly::from_coeffs(vec![rat(-1, 2), rat(1, 1)])
        );
    }

    #[test]
    fn degree_of_zero_is_none() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::from_i64(&[1, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn shift_examples() {
        let sq = Poly::from_i64(&[0, 0, 1]);
        assert_eq!(sq.shift(&rat(1, 1)), Poly::from_i64(&[1, 2, 1]));
        assert_eq!(sq.shift(&rat(0, 1)), sq);
        // C(X+1,2) = C(X,2) + C(X,1), checked by evaluation at 0..3
        let lhs = Poly::binomial(2).shift(&rat(1, 1));
        let rhs = &Poly::binomial(2) + &Poly::binomial(1);
        for x in 0..4 {
            assert_eq!(lhs.eval(&rat(x, 1)), rhs.eval(&rat(x, 1)));
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_monomial_form() {
        let p = Poly::from_coeffs(vec![rat(1, 1), rat(-1, 1), rat(3, 2)]);
        assert_eq!(p.to_string(), "3/2*X^2 - X + 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::from_i64(&[0, -2]).to_string(), "-2*X");
    }
}
