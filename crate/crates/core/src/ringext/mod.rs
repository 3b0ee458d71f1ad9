//! The rings `R[ρ_1, ..., ρ_n]` with `ρ_i^2 = r_i ρ_i` over the rationals,
//! polynomials over them, and integer-valuedness over `Z[ρ_1, ..., ρ_n]`.
//!
//! A relation `r_i = 0` gives a dual unit `ε_i`, `r_i = 2` the split-complex
//! `ρ = 1 + j`, and a unit `r_i` a copy of `R × R`.

mod eval;
mod member;

pub use eval::{ClosedDualEval, ClosedTerm, RhoForms};
pub use member::{
    dense_set_oracle, find_ring_witness, in_int_ext, pullback_iso, ComponentVerdict,
    DenseVerdict, ExtVerdict, PullbackResult, RingPoint,
};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_integral, Int, Rat};
use crate::membership::parse_int_list;
use crate::poly::parse::{eval_expr, parse_expr, render_terms, Algebra, Atoms};
use crate::poly::Poly;

pub const MAX_GENERATORS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationVector {
    r: Vec<Int>,
}

impl RelationVector {
    pub fn new(r: Vec<Int>) -> Result<Self> {
        if r.is_empty() || r.len() > MAX_GENERATORS {
            return Err(Error::InvalidParameter(format!(
                "need between 1 and {MAX_GENERATORS} relations, got {}",
                r.len()
            )));
        }
        Ok(RelationVector { r })
    }

    pub fn from_i64(r: &[i64]) -> Result<Self> {
        Self::new(r.iter().map(|&v| Int::from(v)).collect())
    }

    /// `n` dual generators.
    pub fn dual(n: usize) -> Result<Self> {
        Self::new(vec![Int::zero(); n])
    }

    /// Parses `"[0, 2]"` or `"0,2"`.
    pub fn parse(src: &str) -> Result<Self> {
        Self::new(parse_int_list(src)?)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn values(&self) -> &[Int] {
        &self.r
    }

    pub fn get(&self, i: usize) -> &Int {
        &self.r[i]
    }

    pub fn is_pure_dual(&self) -> bool {
        self.r.iter().all(|v| v.is_zero())
    }

    /// All subset masks of the generators.
    pub fn subsets(&self) -> std::ops::Range<u32> {
        0..(1u32 << self.r.len())
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.r.len()) - 1
    }

    /// `ρ_S ρ_T = (Π_{i ∈ S∩T} r_i) ρ_{S∪T}`.
    pub fn product_factor(&self, s: u32, t: u32) -> Int {
        let mut f = Int::one();
        let common = s & t;
        for (i, r) in self.r.iter().enumerate() {
            if common & (1 << i) != 0 {
                f *= r;
            }
        }
        f
    }

    fn check_same(&self, other: &RelationVector) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RelationMismatch {
                left: self.r.iter().map(|v| v.to_string()).collect(),
                right: other.r.iter().map(|v| v.to_string()).collect(),
            })
        }
    }
}

impl fmt::Display for RelationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.r.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for RelationVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::exact::as_string::seq::serialize(&self.r, s)
    }
}

/// `ρ_S` written as `rho1*rho3`.
pub fn subset_name(mask: u32) -> String {
    let names: Vec<String> = (0..32)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("rho{}", i + 1))
        .collect();
    names.join("*")
}

/// Serialized through the text form.
macro_rules! serialize_as_text {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    };
}
serialize_as_text!(GenDualElem);
serialize_as_text!(GenDualPoly);

/// An element `Σ_S x_S ρ_S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenDualElem {
    relations: RelationVector,
    coeffs: BTreeMap<u32, Rat>,
}

impl GenDualElem {
    pub fn zero(relations: &RelationVector) -> Self {
        GenDualElem {
            relations: relations.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(relations: &RelationVector, c: Rat) -> Self {
        Self::from_coeffs(relations, [(0, c)])
    }

    pub fn one(relations: &RelationVector) -> Self {
        Self::scalar(relations, Rat::one())
    }

    /// The generator `ρ_i` (zero-based `i`).
    pub fn generator(relations: &RelationVector, i: usize) -> Self {
        Self::from_coeffs(relations, [(1u32 << i, Rat::one())])
    }

    pub fn from_coeffs(relations: &RelationVector, coeffs: impl IntoIterator<Item = (u32, Rat)>) -> Self {
        let mut e = Self::zero(relations);
        for (m, c) in coeffs {
            assert!(m <= relations.full_mask(), "subset out of range");
            e.add_term(m, c);
        }
        e
    }

    /// `x + y ρ_1` for a single generator.
    pub fn pair(relations: &RelationVector, x: Rat, y: Rat) -> Self {
        Self::from_coeffs(relations, [(0, x), (1, y)])
    }

    fn add_term(&mut self, m: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn relations(&self) -> &RelationVector {
        &self.relations
    }

    pub fn coeff(&self, mask: u32) -> Rat {
        self.coeffs.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn base_part(&self) -> Rat {
        self.coeff(0)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lies in `Z[ρ_1, ..., ρ_n]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(is_integral)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.relations.check_same(&rhs.relations)?;
        let mut out = self.clone();
        for (m, c) in &rhs.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(&self.relations);
        for (m, v) in &self.coeffs {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.relations.check_same(&rhs.relations)?;
        let mut out = Self::zero(&self.relations);
        for (s, a) in &self.coeffs {
            for (t, b) in &rhs.coeffs {
                let f = self.relations.product_factor(*s, *t);
                if f.is_zero() {
                    continue;
                }
                out.add_term(s | t, a * b * Rat::from_integer(f));
            }
        }
        Ok(out)
    }

    fn require_single(&self) -> Result<()> {
        if self.relations.len() == 1 {
            Ok(())
        } else {
            Err(Error::GeneratorCount {
                expected: 1,
                found: self.relations.len(),
            })
        }
    }

    /// For `z = x + yρ`: `conj = x + y(r - ρ)` and `norm = z·conj = x(x + ry)`.
    pub fn conj_norm(&self) -> Result<(GenDualElem, Rat)> {
        self.require_single()?;
        let (x, y) = (self.coeff(0), self.coeff(1));
        let r = Rat::from_integer(self.relations.get(0).clone());
        let conj = Self::pair(&self.relations, &x + &r * &y, -y.clone());
        let norm = &x * (&x + &r * &y);
        Ok((conj, norm))
    }

    /// Over Z, `x + yρ` is a non-zerodivisor iff `x ≠ 0` and `x + ry ≠ 0`.
    pub fn is_regular(&self) -> Result<bool> {
        self.require_single()?;
        let (x, y) = (self.coeff(0), self.coeff(1));
        let r = Rat::from_integer(self.relations.get(0).clone());
        Ok(!x.is_zero() && !(&x + r * y).is_zero())
    }
}

impl fmt::Display for GenDualElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Rat, String)> = self
            .coeffs
            .iter()
            .map(|(m, c)| (c.clone(), subset_name(*m)))
            .collect();
        f.write_str(&render_terms(&terms))
    }
}

/// `F = Σ_T f_T(X) ρ_T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenDualPoly {
    relations: RelationVector,
    components: BTreeMap<u32, Poly>,
}

impl GenDualPoly {
    pub fn zero(relations: &RelationVector) -> Self {
        GenDualPoly {
            relations: relations.clone(),
            components: BTreeMap::new(),
        }
    }

    pub fn from_components(
        relations: &RelationVector,
        components: impl IntoIterator<Item = (u32, Poly)>,
    ) -> Self {
        let mut out = Self::zero(relations);
        for (m, p) in components {
            assert!(m <= relations.full_mask(), "subset out of range");
            out.add_component(m, &p);
        }
        out
    }

    /// A polynomial with coefficients in the base ring only.
    pub fn scalar(relations: &RelationVector, f: Poly) -> Self {
        Self::from_components(relations, [(0, f)])
    }

    fn add_component(&mut self, m: u32, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let slot = self.components.entry(m).or_default();
        *slot = &*slot + p;
        if slot.is_zero() {
            self.components.remove(&m);
        }
    }

    pub fn relations(&self) -> &RelationVector {
        &self.relations
    }

    pub fn component(&self, mask: u32) -> Poly {
        self.components.get(&mask).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.components.iter().map(|(m, p)| (*m, p))
    }

    pub fn degree(&self) -> usize {
        self.components
            .values()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.relations.check_same(&rhs.relations)?;
        let mut out = self.clone();
        for (m, p) in &rhs.components {
            out.add_component(*m, p);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(&self.relations);
        for (m, p) in &self.components {
            out.add_component(*m, &p.scale(c));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.relations.check_same(&rhs.relations)?;
        let mut out = Self::zero(&self.relations);
        for (s, a) in &self.components {
            for (t, b) in &rhs.components {
                let f = self.relations.product_factor(*s, *t);
                if f.is_zero() {
                    continue;
                }
                out.add_component(s | t, &(a * b).scale(&Rat::from_integer(f)));
            }
        }
        Ok(out)
    }

    /// Coefficient of `X^k` as a ring element.
    pub fn coeff_elem(&self, k: usize) -> GenDualElem {
        GenDualElem::from_coeffs(
            &self.relations,
            self.components.iter().map(|(m, p)| (*m, p.coeff(k))),
        )
    }

    /// Parses the body syntax `f0 + (g)*rho1 + (h)*rho1*rho2` against the
    /// given relations. `eps<i>` is accepted for `rho<i>` when `r_i = 0`.
    pub fn parse(src: &str, relations: &RelationVector) -> Result<Self> {
        let e = parse_expr(src, 0)?;
        eval_expr(&e, &RingAtoms { relations })
    }

    /// Parses the full text form: an optional `relations: [...]` header line
    /// (or header followed by `;`) and the body.
    pub fn parse_text(src: &str) -> Result<Self> {
        let trimmed = src.trim_start();
        let Some(rest) = trimmed.strip_prefix("relations:") else {
            return Err(Error::parse(0, "expected a 'relations: [...]' header"));
        };
        let header_start = src.len() - trimmed.len() + "relations:".len();
        let end = rest
            .find(['\n', ';'])
            .ok_or_else(|| Error::parse(src.len(), "missing polynomial after the header"))?;
        let relations = RelationVector::parse(&rest[..end])?;
        let body_start = header_start + end + 1;
        let e = parse_expr(&src[body_start..], body_start)?;
        eval_expr(&e, &RingAtoms { relations: &relations })
    }

    /// Header line plus body; [`GenDualPoly::parse_text`] reads it back.
    pub fn to_text(&self) -> String {
        format!("relations: {}\n{}", self.relations, self)
    }
}

impl fmt::Display for GenDualPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, p) in &self.components {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if *m == 0 {
                write!(f, "{p}")?;
            } else {
                write!(f, "({p})*{}", subset_name(*m))?;
            }
        }
        Ok(())
    }
}

struct RingAtoms<'a> {
    relations: &'a RelationVector,
}

impl Atoms<GenDualPoly> for RingAtoms<'_> {
    fn constant(&self, c: Rat) -> GenDualPoly {
        GenDualPoly::scalar(self.relations, Poly::constant(c))
    }

    fn x(&self) -> GenDualPoly {
        GenDualPoly::scalar(self.relations, Poly::x())
    }

    fn symbol(&self, name: &str, pos: usize) -> Result<GenDualPoly> {
        let (idx, dual_only) = if let Some(i) = name.strip_prefix("rho") {
            (i, false)
        } else if let Some(i) = name.strip_prefix("eps") {
            (i, true)
        } else {
            return Err(Error::parse(pos, format!("unknown symbol '{name}'")));
        };
        let i: usize = idx
            .parse()
            .map_err(|_| Error::parse(pos, format!("bad generator index in '{name}'")))?;
        if i == 0 || i > self.relations.len() {
            return Err(Error::parse(
                pos,
                format!("generator '{name}' outside 1..={}", self.relations.len()),
            ));
        }
        if dual_only && !self.relations.get(i - 1).is_zero() {
            return Err(Error::parse(pos, format!("'{name}' needs relation 0, use rho{i}")));
        }
        Ok(GenDualPoly::from_components(
            self.relations,
            [(1u32 << (i - 1), Poly::one())],
        ))
    }
}

impl Algebra for GenDualPoly {
    fn add(&self, rhs: &Self) -> Result<Self> {
        GenDualPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Result<Self> {
        GenDualPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Result<Self> {
        GenDualPoly::mul(self, rhs)
    }
    fn scale(&self, c: &Rat) -> Self {
        GenDualPoly::scale(self, c)
    }
    fn as_constant(&self) -> Option<Rat> {
        if self.components.keys().any(|m| *m != 0) {
            return None;
        }
        let f = self.component(0);
        match f.degree() {
            None => Some(Rat::zero()),
            Some(0) => Some(f.coeff(0)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rel(r: &[i64]) -> RelationVector {
        RelationVector::from_i64(r).unwrap()
    }

    #[test]
    fn generator_products() {
        let d = rel(&[0]);
        let e = GenDualElem::generator(&d, 0);
        assert!(e.mul(&e).unwrap().is_zero());
        let s = rel(&[2]);
        let rho = GenDualElem::generator(&s, 0);
        assert_eq!(rho.mul(&rho).unwrap(), rho.scale(&rat(2, 1)));
        // j = rho - 1 squares to 1
        let j = rho.sub(&GenDualElem::one(&s)).unwrap();
        assert_eq!(j.mul(&j).unwrap(), GenDualElem::one(&s));
        let two = rel(&[0, 0]);
        let e1 = GenDualElem::generator(&two, 0);
        let e2 = GenDualElem::generator(&two, 1);
        let e12 = e1.mul(&e2).unwrap();
        assert_eq!(e12, GenDualElem::from_coeffs(&two, [(0b11, rat(1, 1))]));
        assert!(e12.mul(&e12).unwrap().is_zero());
        assert!(matches!(e1.mul(&rho), Err(Error::RelationMismatch { .. })));
    }

    #[test]
    fn conjugate_and_norm() {
        let s = rel(&[2]);
        let z = GenDualElem::pair(&s, rat(1, 1), rat(1, 1));
        let (conj, norm) = z.conj_norm().unwrap();
        assert_eq!(conj, GenDualElem::pair(&s, rat(3, 1), rat(-1, 1)));
        assert_eq!(norm, rat(3, 1));
        assert_eq!(z.mul(&conj).unwrap(), GenDualElem::scalar(&s, rat(3, 1)));
        let d = rel(&[0]);
        let (_, n) = GenDualElem::pair(&d, rat(5, 1), rat(7, 1)).conj_norm().unwrap();
        assert_eq!(n, rat(25, 1));
        assert_eq!(GenDualElem::one(&s).conj_norm().unwrap().1, rat(1, 1));
        assert!(GenDualElem::one(&rel(&[0, 0])).conj_norm().is_err());
    }

    #[test]
    fn regularity() {
        let s = rel(&[2]);
        let z = GenDualElem::pair(&s, rat(2, 1), rat(-1, 1));
        assert!(!z.is_regular().unwrap());
        assert!(z.mul(&GenDualElem::generator(&s, 0)).unwrap().is_zero());
        assert!(GenDualElem::scalar(&s, rat(5, 1)).is_regular().unwrap());
        assert!(!GenDualElem::generator(&rel(&[0]), 0).is_regular().unwrap());
    }

    #[test]
    fn text_round_trip() {
        let r = rel(&[0, 2]);
        let f = GenDualPoly::parse("X + (C(X,2))*rho1 + (X^2/3)*rho1*rho2 - 1", &r).unwrap();
        assert_eq!(f.component(0), Poly::from_i64(&[-1, 1]));
        assert_eq!(f.component(0b11), Poly::from_coeffs(vec![rat(0, 1), rat(0, 1), rat(1, 3)]));
        let text = f.to_text();
        assert!(text.starts_with("relations: [0, 2]\n"));
        assert_eq!(GenDualPoly::parse_text(&text).unwrap(), f);
        assert_eq!(GenDualPoly::parse_text("relations: [0]; X*eps1").unwrap().to_string(), "(X)*rho1");
        assert!(GenDualPoly::parse("rho3", &r).is_err());
        assert!(GenDualPoly::parse("eps2", &r).is_err());
        assert!(GenDualPoly::parse("X/rho1", &r).is_err());
    }
}
