//! Degree-bounded Z-bases of Int(Z; mZ) and Int^(k)(Z), in binomial
//! coordinates and Hermite normal form.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, common_denominator, congruence_lattice, IMatrix, Int, Rat};
use crate::membership::in_int_mod;
use crate::poly::{BinomPoly, Poly};

/// A lattice of polynomials of degree at most `degree`; row `i` of the basis
/// holds the coefficients of `C(X,0), ..., C(X,degree)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IntLattice {
    degree: usize,
    basis: IMatrix,
}

impl IntLattice {
    /// Wraps generators; the stored basis is their HNF.
    pub fn from_generators(degree: usize, generators: &IMatrix) -> Result<Self> {
        if generators.cols() != degree + 1 {
            return Err(Error::DimensionMismatch {
                expected: degree + 1,
                found: generators.cols(),
            });
        }
        Ok(IntLattice {
            degree,
            basis: generators.hnf(),
        })
    }

    /// The lattice spanned by the given polynomials (all of degree at most
    /// `degree`, with integral binomial coordinates).
    pub fn from_polys(degree: usize, polys: &[Poly]) -> Result<Self> {
        let rows = polys
            .iter()
            .map(|p| {
                p.to_binomial().integer_coords(degree + 1).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "{p} is not an integral combination of C(X,0..{degree})"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_generators(degree, &IMatrix::from_rows(degree + 1, rows)?)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &IMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn rows_as_polys(&self) -> Vec<BinomPoly> {
        (0..self.basis.rows())
            .map(|i| BinomPoly::from_ints(self.basis.row(i)))
            .collect()
    }

    /// Pivot of each degree, `None` for degrees without a basis row.
    pub fn pivots(&self) -> Vec<Option<Int>> {
        self.basis.pivot_profile()
    }

    pub fn contains_coords(&self, c: &[Int]) -> bool {
        self.basis.hnf_contains(c)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        match f.to_binomial().integer_coords(self.degree + 1) {
            Some(c) => self.contains_coords(&c),
            None => false,
        }
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> Result<bool> {
        self.basis.is_sublattice_of(&other.basis)
    }

    /// The same lattice viewed inside a higher degree bound.
    pub fn extend_degree(&self, degree: usize) -> IntLattice {
        IntLattice {
            degree,
            basis: self.basis.extend_cols(degree + 1).hnf(),
        }
    }
}

impl fmt::Display for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.rows_as_polys().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// `{f ∈ Int(Z; mZ) : deg f <= degree}`.
///
/// With `f = Σ c_k C(X,k)`, Vandermonde gives
/// `f(X+m) - f(X) = Σ_j C(X,j) Σ_{k>j} c_k C(m,k-j)`, so membership is
/// `Σ_{k>j} c_k C(m,k-j) ≡ 0 (mod m)` for every `j`.
pub fn basis_int_mod(m: &Int, degree: usize) -> Result<IntLattice> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let m = m.abs();
    let n = degree + 1;
    let rows: Vec<Vec<Int>> = (0..degree)
        .map(|j| {
            (0..n)
                .map(|k| {
                    if k > j {
                        binomial(&m, k - j)
                    } else {
                        Int::zero()
                    }
                })
                .collect()
        })
        .collect();
    let conditions = IMatrix::from_rows(n, rows)?;
    IntLattice::from_generators(degree, &congruence_lattice(&conditions, &m))
}

/// Matrix of the `order`-th derivative on binomial coordinates: column `i`
/// holds the coordinates of `C(X,i)^(order)`.
fn derivative_matrix(order: usize, degree: usize) -> Vec<Vec<Rat>> {
    let n = degree + 1;
    let mut m = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        let d = Poly::binomial(i).nth_derivative(order).to_binomial();
        for (row, slot) in m.iter_mut().enumerate() {
            slot[i] = d.coeff(row);
        }
    }
    m
}

/// `{f : deg f <= degree, f, f', ..., f^(k) ∈ Int(Z)}`.
pub fn basis_int_k(k: usize, degree: usize) -> Result<IntLattice> {
    let n = degree + 1;
    let rows: Vec<Vec<Rat>> = (1..=k).flat_map(|j| derivative_matrix(j, degree)).collect();
    let d = common_denominator(rows.iter().flatten());
    let scaled: Vec<Vec<Int>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|q| (q * Rat::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect();
    let conditions = IMatrix::from_rows(n, scaled)?;
    IntLattice::from_generators(degree, &congruence_lattice(&conditions, &d))
}

/// Generators of `Z[X] + m Int(Z)` up to `degree`.
pub fn zx_plus_m_int(m: &Int, degree: usize) -> Result<IntLattice> {
    let mut polys: Vec<Poly> = (0..=degree).map(|k| Poly::monomial(Rat::one(), k)).collect();
    polys.extend((0..=degree).map(|k| Poly::binomial(k).scale(&Rat::from_integer(m.clone()))));
    IntLattice::from_polys(degree, &polys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum ConjectureVerdict {
    Equal,
    ConjectureProperSublattice,
    ConjectureProperSuperlattice,
    Incomparable,
}

impl fmt::Display for ConjectureVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjectureVerdict::Equal => "EQUAL",
            ConjectureVerdict::ConjectureProperSublattice => "CONJECTURE-PROPER-SUBLATTICE",
            ConjectureVerdict::ConjectureProperSuperlattice => "CONJECTURE-PROPER-SUPERLATTICE",
            ConjectureVerdict::Incomparable => "INCOMPARABLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub degree: usize,
    pub generators: Vec<GeneratorCheck>,
    pub conjectured_hnf: IMatrix,
    pub computed_hnf: IMatrix,
    pub conjecture_contained: bool,
    pub computed_contained: bool,
    pub verdict: ConjectureVerdict,
    /// A polynomial in one lattice but not the other, if they differ.
    pub witness: Option<String>,
}

/// The conjectured generators of Int(Z; 4Z), truncated at `degree`.
pub fn conjectured_mod4_generators(degree: usize) -> Vec<BinomPoly> {
    let fixed: [&[i64]; 6] = [
        &[1],
        &[0, 1],
        &[0, 0, 2],
        &[0, 0, 0, 2],
        &[0, 0, 1, 0, 2],
        &[0, 0, 0, 1, 0, 2],
    ];
    let mut out: Vec<BinomPoly> = fixed
        .iter()
        .filter(|c| c.len() <= degree + 1)
        .map(|c| BinomPoly::from_i64(c))
        .collect();
    for k in 6..=degree {
        let mut c = vec![0i64; k + 1];
        c[k] = 4;
        out.push(BinomPoly::from_i64(&c));
    }
    out
}

/// Compares the conjectured decomposition of Int(Z; 4Z) with the computed
/// slice at degree `degree`.
pub fn conjecture_check_mod4(degree: usize) -> Result<ConjectureReport> {
    if degree < 6 {
        return Err(Error::InvalidParameter(format!(
            "degree {degree} is below 6, where the conjectured pattern starts"
        )));
    }
    let four = Int::from(4);
    let gens = conjectured_mod4_generators(degree);
    let generators = gens
        .iter()
        .map(|g| {
            Ok(GeneratorCheck {
                generator: g.to_string(),
                member: in_int_mod(&g.to_poly(), &four)?.member,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| g.integer_coords(degree + 1).expect("integral generators"))
        .collect();
    let conj = IntLattice::from_generators(degree, &IMatrix::from_rows(degree + 1, rows)?)?;
    let computed = basis_int_mod(&four, degree)?;
    let conjecture_contained = conj.is_sublattice_of(&computed)?;
    let computed_contained = computed.is_sublattice_of(&conj)?;
    let verdict = match (conjecture_contained, computed_contained) {
        (true, true) => ConjectureVerdict::Equal,
        (true, false) => ConjectureVerdict::ConjectureProperSublattice,
        (false, true) => ConjectureVerdict::ConjectureProperSuperlattice,
        (false, false) => ConjectureVerdict::Incomparable,
    };
    let outside = |a: &IntLattice, b: &IntLattice| {
        a.rows_as_polys()
            .into_iter()
            .zip(0..)
            .find(|(_, i)| !b.contains_coords(a.basis().row(*i)))
            .map(|(p, _)| p.to_string())
    };
    let witness = outside(&computed, &conj).or_else(|| outside(&conj, &computed));
    Ok(ConjectureReport {
        degree,
        generators,
        conjectured_hnf: conj.basis,
        computed_hnf: computed.basis,
        conjecture_contained,
        computed_contained,
        verdict,
        witness,
    })
}

/// Pivots of Z[X] + p Int(Z): 1 below degree `p`, `p` from there on.
pub fn prime_pattern(p: u64, degree: usize) -> Vec<Int> {
    (0..=degree)
        .map(|k| if (k as u64) < p { Int::one() } else { Int::from(p) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::membership::{in_int_k, in_int_mod};

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn identity_cases() {
        assert_eq!(basis_int_mod(&int(1), 4).unwrap().basis(), &IMatrix::identity(5));
        assert_eq!(basis_int_k(0, 5).unwrap().basis(), &IMatrix::identity(6));
        assert_eq!(basis_int_mod(&int(0), 3), Err(Error::ZeroModulus));
    }

    #[test]
    fn mod2_is_zx_plus_2int() {
        let b = basis_int_mod(&int(2), 5).unwrap();
        assert_eq!(b, zx_plus_m_int(&int(2), 5).unwrap());
    }

    #[test]
    fn mod3_pivots_start_at_degree_three() {
        let b = basis_int_mod(&int(3), 6).unwrap();
        let pivots: Vec<Int> = b.pivots().into_iter().map(|p| p.unwrap()).collect();
        assert_eq!(pivots, ints(&[1, 1, 1, 3, 3, 3, 3]));
        assert!(!in_int_mod(&Poly::binomial(3), &int(3)).unwrap().member);
        assert!(!b.contains(&Poly::binomial(3)));
    }

    #[test]
    fn first_derivative_slice() {
        let b = basis_int_k(1, 2).unwrap();
        assert!(b.contains(&Poly::binomial(2).scale(&Rat::from_integer(int(2)))));
        assert!(!b.contains(&Poly::binomial(2)));
    }

    #[test]
    fn rows_pass_their_oracles() {
        for m in [2, 3, 4, 6] {
            for row in basis_int_mod(&int(m), 8).unwrap().rows_as_polys() {
                assert!(in_int_mod(&row.to_poly(), &int(m)).unwrap().member, "{m}: {row}");
            }
        }
        for k in 0..=3 {
            for row in basis_int_k(k, 8).unwrap().rows_as_polys() {
                assert!(in_int_k(&row.to_poly(), k).member, "{k}: {row}");
            }
        }
    }

    #[test]
    fn conjecture_report_shape() {
        let r = conjecture_check_mod4(8).unwrap();
        assert!(r.generators.iter().all(|g| g.member));
        assert!(r.conjecture_contained);
        assert_eq!(r.conjectured_hnf.cols(), 9);
        assert!(conjecture_check_mod4(5).is_err());
    }
}
