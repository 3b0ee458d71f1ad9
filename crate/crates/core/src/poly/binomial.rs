use std::fmt;

use num_traits::{One, Zero};

use super::Poly;
use crate::exact::{factorial, is_integral, stirling1_table, stirling2_table, Int, Rat};

/// Univariate polynomial in the binomial basis: `coeffs[k]` multiplies
/// `C(X, k) = X(X-1)...(X-k+1)/k!`.
///
/// A polynomial is integer-valued on Z exactly when all of these coefficients
/// are integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinomPoly {
    coeffs: Vec<Rat>,
}

impl BinomPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BinomPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[Int]) -> Self {
        Self::from_coeffs(coeffs.iter().cloned().map(Rat::from_integer).collect())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// Converts through the Stirling numbers of the second kind:
    /// `X^n = sum_k S(n,k) k! C(X,k)`.
    pub fn from_poly(f: &Poly) -> Self {
        let n = f.coeffs().len();
        if n == 0 {
            return BinomPoly::default();
        }
        let s2 = stirling2_table(n - 1);
        let mut out = vec![Rat::zero(); n];
        for (deg, a) in f.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate().take(deg + 1) {
                if !s2[deg][k].is_zero() {
                    *slot += a * Rat::from_integer(&s2[deg][k] * factorial(k));
                }
            }
        }
        BinomPoly::from_coeffs(out)
    }

    /// Converts back through the signed Stirling numbers of the first kind.
    pub fn to_poly(&self) -> Poly {
        let n = self.coeffs.len();
        if n == 0 {
            return Poly::zero();
        }
        let s1 = stirling1_table(n - 1);
        let mut out = vec![Rat::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scale = c / Rat::from_integer(factorial(k));
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                if !s1[k][j].is_zero() {
                    *slot += &scale * Rat::from_integer(s1[k][j].clone());
                }
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// All binomial coefficients integral, i.e. the polynomial maps Z into Z.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(is_integral)
    }

    /// Smallest `k` whose coefficient is not an integer. The polynomial then
    /// takes a non-integral value at `X = k`.
    pub fn first_nonintegral(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !is_integral(c))
    }

    /// Integer coordinates padded to `len`, if all coefficients are integral.
    pub fn integer_coords(&self, len: usize) -> Option<Vec<Int>> {
        if self.coeffs.len() > len || !self.is_integral() {
            return None;
        }
        let mut v: Vec<Int> = self.coeffs.iter().map(|c| c.numer().clone()).collect();
        v.resize(len, Int::zero());
        Some(v)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut basis = Rat::one();
        let mut acc = Rat::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                basis = basis * (x - Rat::from_integer(Int::from(k - 1)))
                    / Rat::from_integer(Int::from(k));
            }
            acc += c * &basis;
        }
        acc
    }
}

impl fmt::Debug for BinomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinomPoly({self})")
    }
}

impl fmt::Display for BinomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Rat, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let atom = if k == 0 {
                    String::new()
                } else {
                    format!("C(X,{k})")
                };
                (c.clone(), atom)
            })
            .collect();
        f.write_str(&super::parse::render_terms(&terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    /// Independent route: the k-th binomial coefficient is the k-th forward
    /// difference at 0.
    fn forward_difference_coords(f: &Poly) -> Vec<Rat> {
        let n = f.coeffs().len();
        let mut vals: Vec<Rat> = (0..n).map(|x| f.eval(&rat(x as i64, 1))).collect();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(vals[0].clone());
            vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }

    #[test]
    fn square_and_cube() {
        assert_eq!(
            Poly::from_i64(&[0, 0, 1]).to_binomial(),
            BinomPoly::from_i64(&[0, 1, 2])
        );
        let cube = Poly::from_i64(&[0, 0, 0, 1]);
        assert_eq!(forward_difference_coords(&cube), BinomPoly::from_i64(&[0, 1, 6, 6]).coeffs());
        assert_eq!(cube.to_binomial(), BinomPoly::from_i64(&[0, 1, 6, 6]));
    }

    #[test]
    fn c2_back_to_monomials() {
        assert_eq!(
            BinomPoly::from_i64(&[0, 0, 1]).to_poly(),
            Poly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)])
        );
    }

    #[test]
    fn display_binomial_form() {
        let b = BinomPoly::from_i64(&[0, 0, 1, 0, 0, 2]);
        assert_eq!(b.to_string(), "C(X,2) + 2*C(X,5)");
    }

    fn any_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-30i64..30, 1i64..7), 0..=max_deg + 1)
            .prop_map(|v| Poly::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn round_trip(f in any_poly(12)) {
            prop_assert_eq!(f.to_binomial().to_poly(), f);
        }

        #[test]
        fn matches_forward_differences(f in any_poly(8)) {
            let mut expect = forward_difference_coords(&f);
            while expect.last().is_some_and(|c| c.is_zero()) { expect.pop(); }
            let got = f.to_binomial();
            prop_assert_eq!(got.coeffs(), &expect[..]);
        }

        #[test]
        fn binomial_eval_agrees(f in any_poly(8), x in -20i64..20) {
            prop_assert_eq!(f.to_binomial().eval(&rat(x, 1)), f.eval(&rat(x, 1)));
        }
    }
}
