//! Polynomial torsion over finite rings `Z/n1 x ... x Z/nt`: vanishing
//! ideals, counts of polynomial functions, and the `Int(Z, M) = M[X]` test.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{congruence_lattice, hnf, IMatrix};
use crate::exact::{Int, Rat};
use crate::idealization::ModuleSpec;
use crate::poly::parse::render_terms;
use crate::poly::Poly;

/// Largest ring accepted by [`poly_function_count`].
pub const RING_SIZE_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiniteRingSpec {
    ZmodN(u64),
    ProductOfZmod(Vec<u64>),
}

impl FiniteRingSpec {
    pub fn zmod(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(FiniteRingSpec::ZmodN(n))
    }

    pub fn product(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("empty product of rings".into()));
        }
        if factors.contains(&0) {
            return Err(Error::ZeroModulus);
        }
        Ok(FiniteRingSpec::ProductOfZmod(factors))
    }

    /// Parses `Z/6`, `F_5` or `Z/2 x Z/3`.
    pub fn parse(src: &str) -> Result<Self> {
        let parts: Vec<&str> = src.split(['x', '*']).map(str::trim).collect();
        let mut factors = Vec::with_capacity(parts.len());
        for p in &parts {
            let n = p
                .strip_prefix("Z/")
                .or_else(|| p.strip_prefix("F_"))
                .and_then(|v| v.parse::<u64>().ok())
                .ok_or_else(|| Error::parse(0, format!("unknown finite ring '{src}'")))?;
            factors.push(n);
        }
        if factors.len() == 1 {
            Self::zmod(factors[0])
        } else {
            Self::product(factors)
        }
    }

    pub fn factors(&self) -> Vec<u64> {
        match self {
            FiniteRingSpec::ZmodN(n) => vec![*n],
            FiniteRingSpec::ProductOfZmod(f) => f.clone(),
        }
    }

    pub fn size(&self) -> Result<usize> {
        self.factors()
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .ok_or_else(|| Error::InvalidParameter("ring too large".into()))
    }

    /// Every element as a tuple of residues.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for n in self.factors() {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..n).map(move |a| {
                        let mut v = e.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Decomposition into local rings `Z/p^e`, by the Chinese remainder
    /// theorem.
    pub fn local_factors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for mut n in self.factors() {
            let mut p = 2;
            while n > 1 {
                if p * p > n {
                    out.push(n);
                    break;
                }
                let mut q = 1;
                while n % p == 0 {
                    n /= p;
                    q *= p;
                }
                if q > 1 {
                    out.push(q);
                }
                p += 1;
            }
        }
        out
    }
}

impl fmt::Display for FiniteRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors().iter().map(|n| format!("Z/{n}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

impl Serialize for FiniteRingSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn pow_mod(a: u64, k: usize, n: u64) -> u64 {
    let mut acc = 1 % n;
    for _ in 0..k {
        acc = ((acc as u128 * a as u128) % n as u128) as u64;
    }
    acc
}

/// Polynomial over a finite ring, stored componentwise with coefficients
/// reduced into `0..n_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingPoly {
    ring: FiniteRingSpec,
    comps: Vec<Vec<Int>>,
}

impl RingPoly {
    pub fn new(ring: &FiniteRingSpec, comps: Vec<Vec<Int>>) -> Result<Self> {
        let factors = ring.factors();
        if comps.len() != factors.len() {
            return Err(Error::DimensionMismatch {
                expected: factors.len(),
                found: comps.len(),
            });
        }
        let comps = comps
            .into_iter()
            .zip(&factors)
            .map(|(c, &n)| {
                let n = Int::from(n);
                let mut c: Vec<Int> = c.iter().map(|v| v.mod_floor(&n)).collect();
                while c.last().is_some_and(Zero::is_zero) {
                    c.pop();
                }
                c
            })
            .collect();
        Ok(RingPoly {
            ring: ring.clone(),
            comps,
        })
    }

    /// The same integer polynomial in every component.
    pub fn from_int_poly(ring: &FiniteRingSpec, coeffs: &[i64]) -> Result<Self> {
        let c: Vec<Int> = coeffs.iter().map(|&v| Int::from(v)).collect();
        Self::new(ring, vec![c; ring.factors().len()])
    }

    pub fn ring(&self) -> &FiniteRingSpec {
        &self.ring
    }

    pub fn components(&self) -> &[Vec<Int>] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Vec::is_empty)
    }

    pub fn degree(&self) -> Option<usize> {
        self.comps.iter().filter_map(|c| c.len().checked_sub(1)).max()
    }

    pub fn eval(&self, point: &[u64]) -> Vec<u64> {
        self.comps
            .iter()
            .zip(self.ring.factors())
            .zip(point)
            .map(|((c, n), &a)| {
                let nn = Int::from(n);
                let mut acc = Int::zero();
                for v in c.iter().rev() {
                    acc = (acc * a + v).mod_floor(&nn);
                }
                acc.try_into().expect("residue fits u64")
            })
            .collect()
    }

    /// True when the polynomial is zero as a function on the ring.
    pub fn vanishes(&self) -> bool {
        self.ring.elements().iter().all(|p| self.eval(p).iter().all(|&v| v == 0))
    }

    fn flat(&self, degree: usize) -> Vec<Int> {
        let mut out = Vec::new();
        for c in &self.comps {
            let mut block = vec![Int::zero(); degree + 1];
            for (k, v) in c.iter().enumerate() {
                block[k] = v.clone();
            }
            out.extend(block);
        }
        out
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |c: &Vec<Int>, n: u64| {
            let n = Int::from(n);
            let half = &n / 2;
            let terms: Vec<(Rat, String)> = c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| {
                    let v = if *v > half { v - &n } else { v.clone() };
                    let m = match k {
                        0 => String::new(),
                        1 => "X".into(),
                        _ => format!("X^{k}"),
                    };
                    (Rat::from(v), m)
                })
                .collect();
            render_terms(&terms)
        };
        let parts: Vec<String> = self.comps.iter().zip(self.ring.factors()).map(|(c, n)| render(c, n)).collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

impl Serialize for RingPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `{f ∈ R[X] : deg f <= degree, f(R) = 0}` as a lattice over `Z` that
/// contains `n_i Z` in every coordinate of block `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingIdealSlice {
    pub ring: FiniteRingSpec,
    pub degree: usize,
    /// HNF basis; columns are the coefficients of `X^0..X^degree`, one block
    /// per factor.
    pub lattice: IMatrix,
}

impl VanishingIdealSlice {
    /// Basis rows that are nonzero in `R[X]`.
    pub fn generators(&self) -> Vec<RingPoly> {
        (0..self.lattice.rows())
            .map(|i| self.row_poly(self.lattice.row(i)))
            .filter(|p| !p.is_zero())
            .collect()
    }

    fn row_poly(&self, row: &[Int]) -> RingPoly {
        let w = self.degree + 1;
        let comps = (0..self.ring.factors().len()).map(|i| row[i * w..(i + 1) * w].to_vec()).collect();
        RingPoly::new(&self.ring, comps).expect("block count matches")
    }

    pub fn is_zero(&self) -> bool {
        self.generators().is_empty()
    }

    /// Number of elements of the slice.
    pub fn size(&self) -> Int {
        let total = self
            .ring
            .factors()
            .iter()
            .fold(Int::one(), |a, &n| a * Int::from(n).pow(self.degree as u32 + 1));
        total / lattice_index(&self.lattice)
    }

    pub fn contains(&self, f: &RingPoly) -> bool {
        f.ring == self.ring && f.degree().is_none_or(|d| d <= self.degree) && self.lattice.hnf_contains(&f.flat(self.degree))
    }

    /// Whether the slice equals `(g) ∩ R[X]_{<=degree}`. Each nonzero
    /// component of `g` needs a unit leading coefficient.
    pub fn is_generated_by(&self, g: &RingPoly) -> Result<bool> {
        if g.ring != self.ring {
            return Err(Error::InvalidParameter(format!("{} vs {}", g.ring, self.ring)));
        }
        let factors = self.ring.factors();
        let w = self.degree + 1;
        let mut rows = modulus_rows(&factors, w);
        for (i, (c, &n)) in g.comps.iter().zip(&factors).enumerate() {
            let Some(lead) = c.last() else { continue };
            if !lead.gcd(&Int::from(n)).is_one() {
                return Err(Error::InvalidParameter(format!("leading coefficient {lead} is not a unit mod {n}")));
            }
            for shift in 0..w.saturating_sub(c.len() - 1) {
                let mut r = vec![Int::zero(); factors.len() * w];
                for (k, v) in c.iter().enumerate() {
                    r[i * w + shift + k] = v.clone();
                }
                rows.push(r);
            }
        }
        let span = hnf(&IMatrix::from_rows(factors.len() * w, rows)?);
        Ok(span == self.lattice)
    }
}

fn modulus_rows(factors: &[u64], w: usize) -> Vec<Vec<Int>> {
    let mut rows = Vec::new();
    for (i, &n) in factors.iter().enumerate() {
        for k in 0..w {
            let mut r = vec![Int::zero(); factors.len() * w];
            r[i * w + k] = Int::from(n);
            rows.push(r);
        }
    }
    rows
}

/// `|Z^k / L|` for a full-rank HNF basis.
fn lattice_index(h: &IMatrix) -> Int {
    h.pivots().into_iter().fold(Int::one(), |a, (_, p)| a * p)
}

/// Kernel of evaluation `R[X]_{<=degree} -> R^R`, found as a congruence
/// lattice: block `i` of `f` must vanish at every residue mod `n_i`.
pub fn vanishing_ideal(ring: &FiniteRingSpec, degree: usize) -> Result<VanishingIdealSlice> {
    let factors = ring.factors();
    let w = degree + 1;
    let big = factors.iter().fold(1u64, |a, &n| a.lcm(&n));
    let mut conditions = Vec::new();
    for (i, &n) in factors.iter().enumerate() {
        for a in 0..n {
            let mut r = vec![Int::zero(); factors.len() * w];
            for k in 0..w {
                r[i * w + k] = Int::from(pow_mod(a, k, n) * (big / n));
            }
            conditions.push(r);
        }
    }
    let lattice = congruence_lattice(&IMatrix::from_rows(factors.len() * w, conditions)?, &Int::from(big));
    Ok(VanishingIdealSlice {
        ring: ring.clone(),
        degree,
        lattice,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalPrincipality {
    pub modulus: u64,
    /// Monic kernel element of least degree, when the slice has one.
    pub candidate: Option<RingPoly>,
    pub generates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalityReport {
    pub ring: FiniteRingSpec,
    pub degree: usize,
    pub principal: bool,
    pub local: Vec<LocalPrincipality>,
}

/// Splits `R` into local rings `Z/p^e`; on each, takes the monic kernel
/// element of least degree (the HNF row with pivot 1) and asks whether its
/// multiples span the whole slice.
pub fn principality_report(ring: &FiniteRingSpec, degree: usize) -> Result<PrincipalityReport> {
    let size = ring.size()?;
    if degree < size {
        return Err(Error::InvalidParameter(format!(
            "degree {degree} is below the ring size {size}"
        )));
    }
    let mut local = Vec::new();
    for q in ring.local_factors() {
        let r = FiniteRingSpec::ZmodN(q);
        let slice = vanishing_ideal(&r, degree)?;
        let candidate = (0..slice.lattice.rows())
            .map(|i| slice.lattice.row(i))
            .find(|row| row.iter().rev().find(|v| !v.is_zero()).is_some_and(One::is_one))
            .map(|row| slice.row_poly(row));
        let generates = match &candidate {
            Some(g) => slice.is_generated_by(g)?,
            None => false,
        };
        local.push(LocalPrincipality {
            modulus: q,
            candidate,
            generates,
        });
    }
    Ok(PrincipalityReport {
        ring: ring.clone(),
        degree,
        principal: local.iter().all(|l| l.generates),
        local,
    })
}

pub fn is_principal_slicewise(ring: &FiniteRingSpec, degree: usize) -> Result<bool> {
    Ok(principality_report(ring, degree)?.principal)
}

/// A nonzero nilpotent element, found by brute force.
pub fn nilpotent_witness(ring: &FiniteRingSpec) -> Option<Vec<u64>> {
    let factors = ring.factors();
    ring.elements().into_iter().find(|e| {
        e.iter().any(|&v| v != 0)
            && e
                .iter()
                .zip(&factors)
                .all(|(&a, &n)| (1..=64).any(|k| pow_mod(a, k, n) == 0))
    })
}

pub fn is_reduced(ring: &FiniteRingSpec) -> bool {
    nilpotent_witness(ring).is_none()
}

fn check_cap(ring: &FiniteRingSpec) -> Result<usize> {
    let size = ring.size()?;
    if size > RING_SIZE_CAP {
        return Err(Error::SizeCapExceeded {
            size,
            cap: RING_SIZE_CAP,
        });
    }
    Ok(size)
}

/// Number of functions `R -> R` given by polynomials, through the kernel:
/// `|R[X]_{<|R|}| / |I_R slice|`. Degree `< |R|` suffices because the
/// product of `X - a` over `a ∈ R` is monic and vanishes.
pub fn poly_function_count(ring: &FiniteRingSpec) -> Result<Int> {
    let size = check_cap(ring)?;
    let slice = vanishing_ideal(ring, size - 1)?;
    Ok(lattice_index(&slice.lattice))
}

/// The same count through the image: the subgroup of `(Z/n)^n` spanned by
/// the value tables of `X^k`, one factor at a time.
pub fn poly_function_count_image(ring: &FiniteRingSpec) -> Result<Int> {
    let size = check_cap(ring)?;
    let mut count = Int::one();
    for n in ring.factors() {
        let w = n as usize;
        let mut rows = modulus_rows(&[n], w);
        for k in 0..size {
            rows.push((0..n).map(|a| Int::from(pow_mod(a, k, n))).collect());
        }
        let image = hnf(&IMatrix::from_rows(w, rows)?);
        count *= Int::from(n).pow(n as u32) / lattice_index(&image);
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MxVerdict {
    pub equal: bool,
    /// An integer-valued module polynomial without module coefficients.
    pub witness: Option<Poly>,
}

/// Whether every `h ∈ T(M)[X]` of degree `<= degree` with `h(Z) ⊆ M` has
/// coefficients in `M`. `T(M)/M` is `(Q/Z)^n` for `Z^n` and zero for `Q`
/// and `Z/m`.
pub fn int_equals_mx(module: &ModuleSpec, degree: usize) -> MxVerdict {
    match module {
        ModuleSpec::FreeZn(_) => {
            let witness = (0..=degree).map(Poly::binomial).find(|b| !b.is_integer_coeffs());
            MxVerdict {
                equal: witness.is_none(),
                witness,
            }
        }
        ModuleSpec::ZmodM(_) | ModuleSpec::RationalsQ => MxVerdict {
            equal: true,
            witness: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::factorial;

    fn zn(n: u64) -> FiniteRingSpec {
        FiniteRingSpec::zmod(n).unwrap()
    }

    #[test]
    fn fields_are_generated_by_x_q_minus_x() {
        for p in [2u64, 3, 5] {
            let s = vanishing_ideal(&zn(p), p as usize).unwrap();
            let mut c = vec![0i64; p as usize + 1];
            c[1] = -1;
            c[p as usize] = 1;
            let g = RingPoly::from_int_poly(&zn(p), &c).unwrap();
            assert!(s.is_generated_by(&g).unwrap());
            assert_eq!(s.generators(), vec![g]);
        }
        assert_eq!(vanishing_ideal(&zn(3), 3).unwrap().generators()[0].to_string(), "X^3 - X");
    }

    #[test]
    fn mod4_kernel() {
        let s = vanishing_ideal(&zn(4), 4).unwrap();
        for c in [[0i64, -2, 2, 0, 0], [0, 0, -1, 0, 1]] {
            assert!(s.contains(&RingPoly::from_int_poly(&zn(4), &c).unwrap()));
        }
        assert!(!s.is_zero());
        for g in s.generators() {
            assert!(g.vanishes());
        }
    }

    #[test]
    fn constants_never_vanish() {
        for r in [zn(2), zn(12), FiniteRingSpec::product(vec![2, 2]).unwrap()] {
            assert!(vanishing_ideal(&r, 0).unwrap().is_zero());
        }
    }

    #[test]
    fn gilmer_examples() {
        assert!(is_principal_slicewise(&zn(6), 6).unwrap());
        assert!(!is_principal_slicewise(&zn(4), 4).unwrap());
        let rep = principality_report(&zn(2), 2).unwrap();
        assert!(rep.principal);
        assert_eq!(rep.local[0].candidate.as_ref().unwrap().to_string(), "X^2 + X");
        assert!(is_principal_slicewise(&FiniteRingSpec::product(vec![2, 3]).unwrap(), 6).unwrap());
        assert!(is_reduced(&zn(30)) && !is_reduced(&zn(12)));
        assert!(principality_report(&zn(5), 4).is_err());
    }

    fn kempner(n: u64) -> Int {
        (0..n as usize).fold(Int::one(), |acc, k| {
            let n = Int::from(n);
            acc * (&n / n.gcd(&factorial(k)))
        })
    }

    #[test]
    fn function_counts() {
        assert_eq!(poly_function_count(&zn(2)).unwrap(), Int::from(4));
        assert_eq!(poly_function_count(&zn(3)).unwrap(), Int::from(27));
        for n in 1..=16 {
            let k = kempner(n);
            assert_eq!(poly_function_count(&zn(n)).unwrap(), k, "n = {n}");
            assert_eq!(poly_function_count_image(&zn(n)).unwrap(), k, "n = {n}");
        }
        let pr = FiniteRingSpec::product(vec![2, 2]).unwrap();
        assert_eq!(poly_function_count(&pr).unwrap(), Int::from(16));
        assert!(matches!(poly_function_count(&zn(65)), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn function_count_by_search() {
        // Horner closure: functions of degree <= d + 1 are g*X + c
        for n in 1..=6u64 {
            let pts: &[u64] = &(0..n).collect::<Vec<_>>();
            let mut seen: std::collections::BTreeSet<Vec<u64>> = (0..n).map(|c| vec![c; n as usize]).collect();
            loop {
                let next: std::collections::BTreeSet<Vec<u64>> = seen
                    .iter()
                    .flat_map(|g| (0..n).map(move |c| pts.iter().map(|&a| (g[a as usize] * a + c) % n).collect()))
                    .collect();
                if next.is_subset(&seen) {
                    break;
                }
                seen.extend(next);
            }
            assert_eq!(Int::from(seen.len()), poly_function_count(&zn(n)).unwrap());
        }
    }

    #[test]
    fn submodule_heredity() {
        for n in 2..=30u64 {
            for degree in 0..=6 {
                if !vanishing_ideal(&zn(n), degree).unwrap().is_zero() {
                    continue;
                }
                for d in (1..n).filter(|d| n % d == 0) {
                    assert!(vanishing_ideal(&zn(d), degree).unwrap().is_zero(), "{n} {d} {degree}");
                }
            }
        }
    }

    #[test]
    fn int_versus_mx() {
        let v = int_equals_mx(&ModuleSpec::FreeZn(1), 2);
        assert!(!v.equal);
        assert_eq!(v.witness, Some(Poly::binomial(2)));
        assert!(int_equals_mx(&ModuleSpec::FreeZn(1), 1).equal);
        assert!(int_equals_mx(&ModuleSpec::RationalsQ, 9).equal);
        assert!(int_equals_mx(&ModuleSpec::zmod(4).unwrap(), 9).equal);
    }

    #[test]
    fn parse_rings() {
        assert_eq!(FiniteRingSpec::parse("Z/6").unwrap(), zn(6));
        assert_eq!(FiniteRingSpec::parse("F_5").unwrap(), zn(5));
        assert_eq!(FiniteRingSpec::parse("Z/2 x Z/3").unwrap().to_string(), "Z/2 x Z/3");
        assert!(FiniteRingSpec::parse("Z/0").is_err());
        assert!(FiniteRingSpec::parse("Q").is_err());
        assert_eq!(zn(360).local_factors(), vec![8, 9, 5]);
    }
}
