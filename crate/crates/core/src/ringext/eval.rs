use num_traits::Zero;
use serde::Serialize;

use super::{GenDualElem, GenDualPoly};
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::findiff::delta_at;
use crate::partition::mask_partitions;
use crate::poly::Poly;

impl GenDualPoly {
    /// Horner evaluation inside the ring.
    pub fn eval_direct(&self, z: &GenDualElem) -> Result<GenDualElem> {
        self.relations.check_same(z.relations())?;
        let mut acc = GenDualElem::zero(&self.relations);
        for k in (0..=self.degree()).rev() {
            acc = acc.mul(z)?.add(&self.coeff_elem(k))?;
        }
        Ok(acc)
    }

    /// Set-partition closed form for the pure dual case: the coefficient of
    /// `ε_S` in `F(z)` is
    /// `Σ_{T ⊆ S} Σ_{partitions B_1..B_k of S∖T} f_T^(k)(x_∅) Π x_{B_i}`.
    pub fn eval_closed_dual(&self, z: &GenDualElem) -> Result<ClosedDualEval> {
        self.relations.check_same(z.relations())?;
        if let Some((i, r)) = self.relations.values().iter().enumerate().find(|(_, r)| !r.is_zero()) {
            return Err(Error::NonzeroRelation {
                index: i + 1,
                value: r.to_string(),
            });
        }
        let n = self.relations.len();
        let x0 = z.base_part();
        let derivs: Vec<(u32, Vec<Rat>)> = self
            .components
            .iter()
            .map(|(t, f)| {
                let mut vals = Vec::with_capacity(n + 1);
                let mut d = f.clone();
                for _ in 0..=n {
                    vals.push(d.eval(&x0));
                    d = d.derivative();
                }
                (*t, vals)
            })
            .collect();
        let mut value = GenDualElem::zero(&self.relations);
        let mut terms = Vec::new();
        for s in self.relations.subsets() {
            let mut coeff = Rat::zero();
            for (t, vals) in &derivs {
                if t & !s != 0 {
                    continue;
                }
                for blocks in mask_partitions(s & !t) {
                    let order = blocks.len();
                    let mut term = vals[order].clone();
                    for b in &blocks {
                        term *= z.coeff(*b);
                    }
                    coeff += term;
                    terms.push(ClosedTerm {
                        subset: s,
                        component: *t,
                        order,
                        blocks,
                    });
                }
            }
            value.add_term(s, coeff);
        }
        Ok(ClosedDualEval { value, terms })
    }

    /// The two closed forms for one generator, `z = x + yρ`:
    /// `F(x) + Δ_{yr}F(x)·yρ` and `F(x+yr) + yΔ_{yr}F(x)·(ρ - r)`.
    pub fn eval_closed_rho(&self, z: &GenDualElem) -> Result<RhoForms> {
        self.relations.check_same(z.relations())?;
        if self.relations.len() != 1 {
            return Err(Error::GeneratorCount {
                expected: 1,
                found: self.relations.len(),
            });
        }
        let rel = &self.relations;
        let (x, y) = (z.coeff(0), z.coeff(1));
        let r = Rat::from_integer(rel.get(0).clone());
        let (f, g) = (self.component(0), self.component(1));
        let at = |p: &Poly, q: &Poly, v: &Rat| GenDualElem::pair(rel, p.eval(v), q.eval(v));
        let yr = &y * &r;
        let df = delta_at(&f, &yr);
        let dg = delta_at(&g, &yr);
        let delta_val = at(&df, &dg, &x);
        let rho = GenDualElem::generator(rel, 0);
        let first = at(&f, &g, &x).add(&delta_val.mul(&rho.scale(&y))?)?;
        let rho_minus_r = rho.sub(&GenDualElem::scalar(rel, r.clone()))?;
        let second = at(&f, &g, &(&x + &yr)).add(&delta_val.scale(&y).mul(&rho_minus_r)?)?;
        Ok(RhoForms { first, second })
    }
}

/// One summand of the closed form: `f_T^(order)(x_∅) Π x_B` contributing to
/// the coefficient of `ε_S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedTerm {
    pub subset: u32,
    pub component: u32,
    pub order: usize,
    pub blocks: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedDualEval {
    pub value: GenDualElem,
    /// Every summand in a fixed order (subset, component, partition).
    pub terms: Vec<ClosedTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoForms {
    pub first: GenDualElem,
    pub second: GenDualElem,
}

#[cfg(test)]
mod tests {
    use super::super::RelationVector;
    use super::*;
    use crate::exact::rat;
    use crate::partition::bell_numbers;
    use crate::poly::parse::parse_poly;

    fn rel(r: &[i64]) -> RelationVector {
        RelationVector::from_i64(r).unwrap()
    }

    #[test]
    fn square_examples() {
        let d = rel(&[0]);
        let sq = GenDualPoly::scalar(&d, parse_poly("X^2").unwrap());
        let z = GenDualElem::pair(&d, rat(3, 1), rat(5, 1));
        assert_eq!(sq.eval_direct(&z).unwrap(), GenDualElem::pair(&d, rat(9, 1), rat(30, 1)));
        for r in [-2, 1, 3] {
            let rr = rel(&[r]);
            let sq = GenDualPoly::scalar(&rr, parse_poly("X^2").unwrap());
            let z = GenDualElem::pair(&rr, rat(2, 1), rat(7, 1));
            let expect = GenDualElem::pair(&rr, rat(4, 1), rat(2 * 2 * 7 + r * 49, 1));
            assert_eq!(sq.eval_direct(&z).unwrap(), expect);
        }
        let x = GenDualPoly::scalar(&d, Poly::x());
        assert_eq!(x.eval_direct(&z).unwrap(), z);
    }

    #[test]
    fn two_generator_closed_form() {
        // F(x + x1 ε1 + x2 ε2 + x12 ε1ε2) has ε1ε2 part F''(x)x1x2 + F'(x)x12
        let r = rel(&[0, 0]);
        let f = parse_poly("X^4 - 2*X").unwrap();
        let poly = GenDualPoly::scalar(&r, f.clone());
        let z = GenDualElem::from_coeffs(&r, [(0, rat(2, 1)), (1, rat(3, 1)), (2, rat(5, 1)), (3, rat(7, 1))]);
        let closed = poly.eval_closed_dual(&z).unwrap();
        let x = rat(2, 1);
        let expect = f.nth_derivative(2).eval(&x) * rat(15, 1) + f.derivative().eval(&x) * rat(7, 1);
        assert_eq!(closed.value.coeff(3), expect);
        assert_eq!(closed.value, poly.eval_direct(&z).unwrap());
    }

    #[test]
    fn three_generator_top_coefficient() {
        let r = rel(&[0, 0, 0]);
        let f = parse_poly("X^5/3 + X^3").unwrap();
        let coeffs: Vec<(u32, Rat)> = (0..8).map(|m| (m, rat(m as i64 + 2, 1))).collect();
        let z = GenDualElem::from_coeffs(&r, coeffs);
        let c = |m: u32| z.coeff(m);
        let x = c(0);
        let d = |k| f.nth_derivative(k).eval(&x);
        let expect = d(3) * c(1) * c(2) * c(4)
            + d(2) * (c(3) * c(4) + c(5) * c(2) + c(6) * c(1))
            + d(1) * c(7);
        let closed = GenDualPoly::scalar(&r, f).eval_closed_dual(&z).unwrap();
        assert_eq!(closed.value.coeff(7), expect);
    }

    #[test]
    fn scalar_term_counts_are_bell() {
        let bell = bell_numbers(6);
        for n in 1..=4 {
            let r = RelationVector::dual(n).unwrap();
            let poly = GenDualPoly::scalar(&r, Poly::x());
            let z = GenDualElem::one(&r);
            let closed = poly.eval_closed_dual(&z).unwrap();
            assert_eq!(closed.terms.len() as u64, bell[n + 1]);
        }
    }

    #[test]
    fn closed_dual_rejects_relations() {
        let r = rel(&[0, 3]);
        let poly = GenDualPoly::scalar(&r, Poly::x());
        assert_eq!(
            poly.eval_closed_dual(&GenDualElem::one(&r)),
            Err(Error::NonzeroRelation {
                index: 2,
                value: "3".into()
            })
        );
    }

    #[test]
    fn rho_forms() {
        let r = rel(&[3]);
        let sq = GenDualPoly::scalar(&r, parse_poly("X^2").unwrap());
        let z = GenDualElem::pair(&r, rat(1, 1), rat(1, 1));
        let forms = sq.eval_closed_rho(&z).unwrap();
        let expect = GenDualElem::pair(&r, rat(1, 1), rat(5, 1));
        assert_eq!(forms.first, expect);
        assert_eq!(forms.second, expect);
        let d = rel(&[0]);
        let f = parse_poly("X^3 - X/2").unwrap();
        let poly = GenDualPoly::scalar(&d, f.clone());
        let z = GenDualElem::pair(&d, rat(2, 1), rat(3, 1));
        let expect = GenDualElem::pair(&d, f.eval(&rat(2, 1)), f.derivative().eval(&rat(2, 1)) * rat(3, 1));
        assert_eq!(poly.eval_closed_rho(&z).unwrap().first, expect);
        let c = GenDualPoly::scalar(&r, Poly::constant(rat(4, 1)));
        assert_eq!(c.eval_closed_rho(&z_for(&r)).unwrap().first, GenDualElem::scalar(&r, rat(4, 1)));
    }

    fn z_for(r: &RelationVector) -> GenDualElem {
        GenDualElem::pair(r, rat(-2, 1), rat(5, 1))
    }
}
