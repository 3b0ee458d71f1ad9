//! Membership in Int(Z), Int^(k)(Z), Int(Z; mZ) and the multiset rings
//! Int(Z; S).

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{as_string, is_integral, Int, Rat};
use crate::findiff::{delta_at, scaled_delta};
use crate::poly::{MultiPoly, Poly};

pub const DEFAULT_MULTISET_CAP: usize = 4;

/// A finite multiset of integers, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct MultisetSpec {
    #[serde(with = "as_string::seq")]
    elements: Vec<Int>,
}

impl MultisetSpec {
    pub fn new(mut elements: Vec<Int>) -> Self {
        elements.sort();
        MultisetSpec { elements }
    }

    pub fn from_i64(elements: &[i64]) -> Self {
        Self::new(elements.iter().map(|&e| Int::from(e)).collect())
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn elements(&self) -> &[Int] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Accepts `"2,3"`, `"[2, 3]"` or `"{2,3}"`; the empty list is allowed.
    pub fn parse(src: &str) -> Result<Self> {
        Ok(Self::new(parse_int_list(src)?))
    }
}

impl fmt::Display for MultisetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub(crate) fn parse_int_list(src: &str) -> Result<Vec<Int>> {
    let trimmed = src.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .or_else(|| trimmed.strip_prefix('{').and_then(|s| s.strip_suffix('}')))
        .unwrap_or(trimmed);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut offset = src.find(inner).unwrap_or(0);
    let mut out = Vec::new();
    for part in inner.split(',') {
        let t = part.trim();
        out.push(
            t.parse::<Int>()
                .map_err(|_| Error::parse(offset, format!("expected an integer, found '{t}'")))?,
        );
        offset += part.len() + 1;
    }
    Ok(out)
}

/// Why a polynomial is not a member. Every variant can be replayed against
/// the polynomial with [`Witness::replay`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `f(x)` is not an integer.
    Point {
        #[serde(with = "as_string")]
        x: Int,
        #[serde(with = "as_string")]
        value: Rat,
    },
    /// The `order`-th derivative takes a non-integral value at `x`.
    Derivative {
        order: usize,
        #[serde(with = "as_string")]
        x: Int,
        #[serde(with = "as_string")]
        value: Rat,
    },
    /// `a ≡ b (mod modulus)` but `f(a) ≢ f(b)`.
    Congruence {
        #[serde(with = "as_string")]
        a: Int,
        #[serde(with = "as_string")]
        b: Int,
        #[serde(with = "as_string")]
        modulus: Int,
        #[serde(with = "as_string")]
        fa: Rat,
        #[serde(with = "as_string")]
        fb: Rat,
    },
    /// Applying `h -> y_j Δ_{y_j u_j} h` for each step in turn, then
    /// evaluating at `x`, gives a non-integer.
    DeltaChain {
        #[serde(with = "as_string::seq")]
        displacements: Vec<Int>,
        #[serde(with = "as_string::seq")]
        ys: Vec<Int>,
        #[serde(with = "as_string")]
        x: Int,
        #[serde(with = "as_string")]
        value: Rat,
    },
}

impl Witness {
    /// True when the witness really does falsify membership of `f`.
    pub fn replay(&self, f: &Poly) -> bool {
        match self {
            Witness::Point { x, .. } => !is_integral(&f.eval_int(x)),
            Witness::Derivative { order, x, .. } => {
                !is_integral(&f.nth_derivative(*order).eval_int(x))
            }
            Witness::Congruence { a, b, modulus, .. } => {
                let (fa, fb) = (f.eval_int(a), f.eval_int(b));
                let diff_ok = is_integral(&((&fb - &fa) / Rat::from_integer(modulus.clone())));
                let congruent = (b - a) % modulus == Int::zero();
                congruent && (!is_integral(&fa) || !is_integral(&fb) || !diff_ok)
            }
            Witness::DeltaChain {
                displacements,
                ys,
                x,
                ..
            } => {
                let h = replay_chain(f, displacements, ys);
                !is_integral(&h.eval_int(x))
            }
        }
    }
}

fn replay_chain(f: &Poly, displacements: &[Int], ys: &[Int]) -> Poly {
    displacements
        .iter()
        .zip(ys)
        .fold(f.clone(), |h, (u, y)| {
            let y = Rat::from_integer(y.clone());
            delta_at(&h, &(&y * Rat::from_integer(u.clone()))).scale(&y)
        })
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point { x, value } => write!(f, "f({x}) = {value}"),
            Witness::Derivative { order, x, value } => {
                write!(f, "derivative of order {order} at {x} is {value}")
            }
            Witness::Congruence {
                a,
                b,
                modulus,
                fa,
                fb,
            } => write!(f, "{a} ≡ {b} mod {modulus} but f({a}) = {fa}, f({b}) = {fb}"),
            Witness::DeltaChain {
                displacements,
                ys,
                x,
                value,
            } => {
                let steps: Vec<String> = displacements
                    .iter()
                    .zip(ys)
                    .map(|(u, y)| format!("y={y}, u={u}"))
                    .collect();
                write!(f, "difference chain [{}] at x={x} gives {value}", steps.join("; "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub witness: Option<Witness>,
}

impl MembershipVerdict {
    pub fn yes() -> Self {
        MembershipVerdict {
            member: true,
            witness: None,
        }
    }

    pub fn no(w: Witness) -> Self {
        MembershipVerdict {
            member: false,
            witness: Some(w),
        }
    }
}

pub fn in_int(f: &Poly) -> MembershipVerdict {
    match f.to_binomial().first_nonintegral() {
        None => MembershipVerdict::yes(),
        Some(k) => {
            let x = Int::from(k);
            let value = f.eval_int(&x);
            MembershipVerdict::no(Witness::Point { x, value })
        }
    }
}

pub fn in_int_k(f: &Poly, k: usize) -> MembershipVerdict {
    let mut d = f.clone();
    for order in 0..=k {
        if let Some(x) = d.to_binomial().first_nonintegral() {
            let x = Int::from(x);
            let value = d.eval_int(&x);
            return MembershipVerdict::no(Witness::Derivative { order, x, value });
        }
        d = d.derivative();
    }
    MembershipVerdict::yes()
}

/// Congruence preservation mod `m`: `f ∈ Int(Z)` and
/// `(f(X+m) - f(X))/m ∈ Int(Z)`. Negative `m` is read as `|m|`.
pub fn in_int_mod(f: &Poly, m: &Int) -> Result<MembershipVerdict> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let m = m.abs();
    let base = in_int(f);
    if !base.member {
        return Ok(base);
    }
    let step = delta_at(f, &Rat::from_integer(m.clone()));
    Ok(match step.to_binomial().first_nonintegral() {
        None => MembershipVerdict::yes(),
        Some(k) => {
            let a = Int::from(k);
            let b = &a + &m;
            MembershipVerdict::no(Witness::Congruence {
                fa: f.eval_int(&a),
                fb: f.eval_int(&b),
                a,
                b,
                modulus: m,
            })
        }
    })
}

pub fn in_int_multiset(f: &Poly, s: &MultisetSpec) -> Result<MembershipVerdict> {
    in_int_multiset_with_cap(f, s, DEFAULT_MULTISET_CAP)
}

pub fn in_int_multiset_with_cap(f: &Poly, s: &MultisetSpec, cap: usize) -> Result<MembershipVerdict> {
    if s.len() > cap {
        return Err(Error::CapExceeded { size: s.len(), cap });
    }
    Ok(in_int_multiset_in_order(f, s.elements()))
}

/// The recursive definition unfolded in the given element order (the last
/// element is the one adjoined last). The verdict does not depend on the
/// order; this entry point exists so that can be tested.
pub fn in_int_multiset_in_order(f: &Poly, order: &[Int]) -> MembershipVerdict {
    let lifted = MultiPoly::from_poly(f, 0, 1);
    match check_param(&lifted, order, &mut Vec::new()) {
        None => MembershipVerdict::yes(),
        Some(w) => MembershipVerdict::no(w),
    }
}

/// Decides whether `F(X, Y_1..Y_v)` lies in Int(Z; S) for every integer
/// choice of the parameters. The universally quantified `y` of each step
/// becomes a fresh variable; integrality on all of Z^(v+1) is then exactly
/// integrality of the tensor-binomial coefficients.
fn check_param(f: &MultiPoly, s: &[Int], chain: &mut Vec<Int>) -> Option<Witness> {
    let Some((last, rest)) = s.split_last() else {
        let pt = f.nonintegral_point()?;
        let value = f.eval_int(&pt);
        return Some(Witness::DeltaChain {
            displacements: chain.clone(),
            ys: pt[1..].to_vec(),
            x: pt[0].clone(),
            value,
        });
    };
    if let Some(w) = check_param(f, rest, chain) {
        return Some(w);
    }
    for mask in 0u32..(1 << rest.len()) {
        let mut u = last.clone();
        let mut t = Vec::new();
        for (i, r) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                t.push(r.clone());
            } else {
                u *= r;
            }
        }
        let g = scaled_delta(f, &u);
        chain.push(u);
        let found = check_param(&g, &t, chain);
        chain.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Falsification oracle for Int(Z; S): runs the recursive definition with
/// concrete `y` drawn from `ys` at every level. A `false` answer is a proof
/// of non-membership; `true` is only evidence.
pub fn sampled_multiset_check(f: &Poly, order: &[Int], ys: &[Int]) -> bool {
    let Some((last, rest)) = order.split_last() else {
        return in_int(f).member;
    };
    if !sampled_multiset_check(f, rest, ys) {
        return false;
    }
    for mask in 0u32..(1 << rest.len()) {
        let mut u = last.clone();
        let mut t = Vec::new();
        for (i, r) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                t.push(r.clone());
            } else {
                u *= r;
            }
        }
        for y in ys {
            let yr = Rat::from_integer(y.clone());
            let g = delta_at(f, &(&yr * Rat::from_integer(u.clone()))).scale(&yr);
            if !sampled_multiset_check(&g, &t, ys) {
                return false;
            }
        }
    }
    true
}

/// Direct congruence check `f(a) ≡ f(a + k m)` for `a` in `-2m..=2m` and
/// `k` in `1..=3`, plus integrality at those points.
pub fn sampled_congruence_check(f: &Poly, m: &Int) -> bool {
    let m = m.abs();
    let mut a: Int = -(&m * Int::from(2));
    let top: Int = &m * Int::from(2);
    while a <= top {
        let fa = f.eval_int(&a);
        if !is_integral(&fa) {
            return false;
        }
        for k in 1..=3 {
            let b = &a + &m * Int::from(k);
            let fb = f.eval_int(&b);
            if !is_integral(&fb) || !is_integral(&((&fb - &fa) / Rat::from_integer(m.clone()))) {
                return false;
            }
        }
        a += Int::one();
    }
    true
}
