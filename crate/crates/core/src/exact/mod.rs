//! Exact integers, rationals and integer matrices.
//!
//! Everything downstream is built on [`Int`] (arbitrary precision) and
//! [`Rat`] (always reduced, positive denominator). The integrality test used
//! by every membership decision is simply "denominator is one".

mod matrix;

pub use matrix::{congruence_lattice, hnf, lattice_equal, IMatrix};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_int(v: Int) -> Rat {
    Rat::from_integer(v)
}

pub fn is_integral(q: &Rat) -> bool {
    q.denom().is_one()
}

pub fn factorial(k: usize) -> Int {
    (1..=k).fold(Int::one(), |acc, i| acc * Int::from(i))
}

/// C(n, k) for a (possibly negative) integer `n`, via the falling factorial.
pub fn binomial(n: &Int, k: usize) -> Int {
    let mut num = Int::one();
    for i in 0..k {
        num *= n - Int::from(i);
    }
    num / factorial(k)
}

pub fn binomial_u(n: usize, k: usize) -> Int {
    if k > n {
        Int::zero()
    } else {
        binomial(&Int::from(n), k)
    }
}

/// Least common multiple of the denominators, one for an empty slice.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn abs_int(v: &Int) -> Int {
    v.abs()
}

pub fn to_usize(v: &Int) -> Option<usize> {
    v.to_usize()
}

/// Stirling numbers of the second kind S(n, k) for 0 <= k <= n <= max.
pub(crate) fn stirling2_table(max: usize) -> Vec<Vec<Int>> {
    let mut t = vec![vec![Int::zero(); max + 1]; max + 1];
    t[0][0] = Int::one();
    for n in 1..=max {
        for k in 1..=n {
            t[n][k] = Int::from(k) * &t[n - 1][k] + &t[n - 1][k - 1];
        }
    }
    t
}

/// Signed Stirling numbers of the first kind s(n, k), the coefficients of the
/// falling factorial X(X-1)...(X-n+1).
pub(crate) fn stirling1_table(max: usize) -> Vec<Vec<Int>> {
    let mut t = vec![vec![Int::zero(); max + 1]; max + 1];
    t[0][0] = Int::one();
    for n in 1..=max {
        for k in 1..=n {
            t[n][k] = &t[n - 1][k - 1] - Int::from(n - 1) * &t[n - 1][k];
        }
    }
    t
}

/// Serde adapters that write exact numbers as decimal strings.
pub mod as_string {
    use serde::Serializer;
    use std::fmt::Display;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub mod seq {
        use serde::ser::SerializeSeq;
        use serde::Serializer;
        use std::fmt::Display;

        pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &int(-3));
        assert_eq!(q.denom(), &int(2));
        assert!(!is_integral(&q));
        assert!(is_integral(&rat(8, 4)));
    }

    #[test]
    fn binomials_with_negative_top() {
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&int(-1), 3), int(-1));
        assert_eq!(binomial(&int(2), 3), int(0));
        assert_eq!(binomial_u(7, 0), int(1));
    }

    #[test]
    fn stirling_rows() {
        let s2 = stirling2_table(4);
        assert_eq!(s2[4][2], int(7));
        let s1 = stirling1_table(3);
        // X(X-1)(X-2) = X^3 - 3X^2 + 2X
        assert_eq!(s1[3][1..=3].to_vec(), vec![int(2), int(-3), int(1)]);
    }
}
