use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Poly;
use crate::exact::{factorial, is_integral, stirling1_table, stirling2_table, Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    /// Products `C(X_1,k_1) ... C(X_v,k_v)`.
    TensorBinomial,
}

/// Sparse polynomial over Q in `nvars` variables, stored in either basis.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    basis: Basis,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            basis: Basis::Monomial,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.insert(vec![0; nvars], c);
        p
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.insert(e, Rat::one());
        p
    }

    /// Builds from `(exponents, coefficient)` pairs in the given basis.
    pub fn from_terms(
        nvars: usize,
        basis: Basis,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Self {
        let mut p = MultiPoly {
            nvars,
            basis,
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.insert(e, c);
        }
        p
    }

    /// Embeds a univariate polynomial as a polynomial in variable `var`.
    pub fn from_poly(f: &Poly, var: usize, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for (k, c) in f.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            p.insert(e, c.clone());
        }
        p
    }

    fn insert(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Adds trailing variables that do not occur.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        MultiPoly {
            nvars,
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(nvars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MultiPoly {
                terms: BTreeMap::new(),
                ..self.clone()
            };
        }
        MultiPoly {
            nvars: self.nvars,
            basis: self.basis,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn in_basis(&self, basis: Basis) -> Self {
        match basis {
            Basis::Monomial => self.to_monomial(),
            Basis::TensorBinomial => self.to_tensor_binomial(),
        }
    }

    pub fn to_tensor_binomial(&self) -> Self {
        if self.basis == Basis::TensorBinomial {
            return self.clone();
        }
        let max = self.max_exponent();
        let s2 = stirling2_table(max);
        let facts: Vec<Int> = (0..=max).map(factorial).collect();
        // expansion of X^n in the binomial basis: (k, S(n,k) k!)
        let expand: Vec<Vec<(u32, Rat)>> = (0..=max)
            .map(|n| {
                (0..=n)
                    .filter(|&k| !s2[n][k].is_zero())
                    .map(|k| (k as u32, Rat::from_integer(&s2[n][k] * &facts[k])))
                    .collect()
            })
            .collect();
        self.change_basis(Basis::TensorBinomial, &expand)
    }

    pub fn to_monomial(&self) -> Self {
        if self.basis == Basis::Monomial {
            return self.clone();
        }
        let max = self.max_exponent();
        let s1 = stirling1_table(max);
        let expand: Vec<Vec<(u32, Rat)>> = (0..=max)
            .map(|k| {
                let kf = Rat::from_integer(factorial(k));
                (0..=k)
                    .filter(|&j| !s1[k][j].is_zero())
                    .map(|j| (j as u32, Rat::from_integer(s1[k][j].clone()) / &kf))
                    .collect()
            })
            .collect();
        self.change_basis(Basis::Monomial, &expand)
    }

    fn max_exponent(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0) as usize
    }

    fn change_basis(&self, target: Basis, expand: &[Vec<(u32, Rat)>]) -> Self {
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut partial: Vec<(Vec<u32>, Rat)> = vec![(Vec::with_capacity(self.nvars), c.clone())];
            for &ei in e {
                let mut next = Vec::with_capacity(partial.len() * expand[ei as usize].len());
                for (pe, pc) in &partial {
                    for (k, w) in &expand[ei as usize] {
                        let mut ne = pe.clone();
                        ne.push(*k);
                        next.push((ne, pc * w));
                    }
                }
                partial = next;
            }
            for (ne, nc) in partial {
                *acc.entry(ne).or_insert_with(Rat::zero) += nc;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly {
            nvars: self.nvars,
            basis: target,
            terms: acc,
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                term *= match self.basis {
                    Basis::Monomial => pow(x, k),
                    Basis::TensorBinomial => rat_binomial(x, k),
                };
            }
            acc += term;
        }
        acc
    }

    pub fn eval_int(&self, point: &[Int]) -> Rat {
        let p: Vec<Rat> = point.iter().cloned().map(Rat::from_integer).collect();
        self.eval(&p)
    }

    /// Replaces variable `i` by `images[i]`; all images share a variable count.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let images: Vec<MultiPoly> = images.iter().map(|p| p.to_monomial()).collect();
        let me = self.to_monomial();
        let max = me.max_exponent();
        let powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|img| {
                let mut pw = vec![MultiPoly::constant(Rat::one(), target)];
                for k in 1..=max {
                    let next = &pw[k - 1] * img;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut out = MultiPoly::zero(target);
        for (e, c) in &me.terms {
            let mut term = MultiPoly::constant(c.clone(), target);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// The univariate polynomial in `var`, if no other variable occurs.
    pub fn to_poly_in(&self, var: usize) -> Option<Poly> {
        let me = self.to_monomial();
        let mut coeffs = vec![Rat::zero(); me.degree_in(var) as usize + 1];
        for (e, c) in &me.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            coeffs[e[var] as usize] = c.clone();
        }
        Some(Poly::from_coeffs(coeffs))
    }

    /// True iff the polynomial maps Z^v into Z: every tensor-binomial
    /// coefficient must be an integer.
    pub fn is_integral_on_lattice(&self) -> bool {
        self.to_tensor_binomial().terms.values().all(is_integral)
    }

    /// An integer point where the value is not an integer, if one exists.
    ///
    /// Picks a non-integral tensor-binomial coefficient of least total degree;
    /// every coefficient strictly below it is integral, so the value at that
    /// multi-index differs from the coefficient by an integer.
    pub fn nonintegral_point(&self) -> Option<Vec<Int>> {
        self.to_tensor_binomial()
            .terms
            .iter()
            .filter(|(_, c)| !is_integral(c))
            .min_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()))
            .map(|(e, _)| e.iter().map(|&k| Int::from(k)).collect())
    }

    fn combine(&self, rhs: &MultiPoly, sign: bool) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let (a, b) = if self.basis == rhs.basis {
            (self.clone(), rhs.clone())
        } else {
            (self.to_monomial(), rhs.to_monomial())
        };
        let mut out = a;
        for (e, c) in b.terms {
            out.insert(e, if sign { c } else { -c });
        }
        out
    }
}

fn pow(x: &Rat, k: u32) -> Rat {
    (0..k).fold(Rat::one(), |acc, _| acc * x)
}

fn rat_binomial(x: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * (x - Rat::from_integer(Int::from(i))) / Rat::from_integer(Int::from(i + 1));
    }
    acc
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.combine(rhs, true)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.combine(rhs, false)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

/// Product, computed in the monomial basis.
impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let a = self.to_monomial();
        let b = rhs.to_monomial();
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly {
            nvars: self.nvars,
            basis: Basis::Monomial,
            terms: acc,
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{:?}]({self})", self.basis)
    }
}

pub(crate) fn var_name(i: usize, nvars: usize) -> String {
    match (i, nvars) {
        (0, _) => "X".to_string(),
        (1, 2) => "Y".to_string(),
        _ => format!("Y{i}"),
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        // highest total degree first
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        let rendered: Vec<(Rat, String)> = terms
            .into_iter()
            .map(|(e, c)| {
                let atoms: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        let v = var_name(i, self.nvars);
                        match (self.basis, k) {
                            (Basis::Monomial, 1) => v,
                            (Basis::Monomial, _) => format!("{v}^{k}"),
                            (Basis::TensorBinomial, _) => format!("C({v},{k})"),
                        }
                    })
                    .collect();
                (c.clone(), atoms.join("*"))
            })
            .collect();
        f.write_str(&super::parse::render_terms(&rendered))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn xy(c: Rat) -> MultiPoly {
        MultiPoly::from_terms(2, Basis::Monomial, [(vec![1, 1], c)])
    }

    #[test]
    fn xy_examples() {
        assert!(xy(rat(1, 1)).is_integral_on_lattice());
        let half = xy(rat(1, 2));
        assert!(!half.is_integral_on_lattice());
        let pt = half.nonintegral_point().unwrap();
        assert_eq!(pt, vec![Int::from(1), Int::from(1)]);
        assert_eq!(half.eval_int(&pt), rat(1, 2));
    }

    #[test]
    fn binomial_product_is_integral() {
        let p = MultiPoly::from_terms(2, Basis::TensorBinomial, [(vec![2, 3], rat(1, 1))]);
        // exhaustive check on {0..5}^2
        for x in 0..=5 {
            for y in 0..=5 {
                assert!(is_integral(&p.eval(&[rat(x, 1), rat(y, 1)])));
            }
        }
        assert!(p.is_integral_on_lattice());
        assert!(p.to_monomial().is_integral_on_lattice());
    }

    #[test]
    fn substitution_composes() {
        // (X + Y)^2 with X -> Y, Y -> X gives the same thing
        let s = &MultiPoly::var(0, 2) + &MultiPoly::var(1, 2);
        let sq = &s * &s;
        let swapped = sq.substitute(&[MultiPoly::var(1, 2), MultiPoly::var(0, 2)]);
        assert_eq!(swapped, sq);
    }

    fn any_multi(v: usize, deg: u32) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(
            (proptest::collection::vec(0..=deg, v), -12i64..12, 1i64..5),
            0..8,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(
                v,
                Basis::Monomial,
                ts.into_iter().map(|(e, n, d)| (e, rat(n, d))),
            )
        })
    }

    fn grid_integral(p: &MultiPoly) -> bool {
        let v = p.nvars();
        let bounds: Vec<u32> = (0..v).map(|i| p.degree_in(i)).collect();
        let mut idx = vec![0u32; v];
        loop {
            let pt: Vec<Rat> = idx.iter().map(|&k| rat(k as i64, 1)).collect();
            if !is_integral(&p.eval(&pt)) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == v {
                    return true;
                }
                if idx[i] < bounds[i] {
                    idx[i] += 1;
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    proptest! {
        #[test]
        fn basis_round_trip(p in any_multi(3, 4)) {
            prop_assert_eq!(p.to_tensor_binomial().to_monomial(), p);
        }

        #[test]
        fn criterion_matches_grid(v in 1usize..=3, seed in any_multi(3, 4)) {
            let p = MultiPoly::from_terms(v, Basis::Monomial,
                seed.terms().map(|(e, c)| (e[..v].to_vec(), c.clone())));
            prop_assert_eq!(p.is_integral_on_lattice(), grid_integral(&p));
            if let Some(pt) = p.nonintegral_point() {
                prop_assert!(!is_integral(&p.eval_int(&pt)));
            }
        }

        #[test]
        fn eval_agrees_across_bases(p in any_multi(2, 4), x in -6i64..6, y in -6i64..6) {
            let pt = [rat(x, 1), rat(y, 1)];
            prop_assert_eq!(p.eval(&pt), p.to_tensor_binomial().eval(&pt));
        }
    }
}
