//! Nagata idealization `Z(+)M` for `M` one of `Z^n`, `Z/mZ`, `Q`.
//!
//! Elements are pairs `(x, v)` with product `(x, v)(y, w) = (xy, xw + yv)`,
//! so `M` becomes a square-zero ideal.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_integral, Int, Rat};
use crate::membership::{in_int_k, MembershipVerdict};
use crate::poly::parse::{parse_poly, split_top_level};
use crate::poly::Poly;

mod checks;

pub use checks::{
    canned_corollary_checks, canned_corollary_checks_seeded, discriminating_check, dual_number_agreement,
    elem_to_dual_numbers, random_ideal_poly, to_dual_numbers, zmod_module_polys_are_integral, CorollaryCheck,
    Discrimination, CANNED_SEED,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleSpec {
    FreeZn(usize),
    ZmodM(Int),
    RationalsQ,
}

impl ModuleSpec {
    pub fn zmod(m: i64) -> Result<Self> {
        Self::zmod_int(Int::from(m))
    }

    pub fn zmod_int(m: Int) -> Result<Self> {
        let m = m.abs();
        if m.is_zero() {
            return Err(Error::ZeroModulus);
        }
        Ok(ModuleSpec::ZmodM(m))
    }

    /// Number of rational coordinates of a module element.
    pub fn rank(&self) -> usize {
        match self {
            ModuleSpec::FreeZn(n) => *n,
            _ => 1,
        }
    }

    /// Accepts `Z(+)Z^n`, `Z(+)Z`, `Z(+)Z/m` and `Z(+)Q` (the `Z(+)` prefix
    /// is optional).
    pub fn parse(src: &str) -> Result<Self> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s.strip_prefix("Z(+)").unwrap_or(&s);
        let bad = || Error::parse(0, format!("unknown module '{src}'"));
        if body == "Q" {
            Ok(ModuleSpec::RationalsQ)
        } else if body == "Z" {
            Ok(ModuleSpec::FreeZn(1))
        } else if let Some(n) = body.strip_prefix("Z^") {
            let n: usize = n.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(Error::InvalidParameter("Z^0 is the zero module".into()));
            }
            Ok(ModuleSpec::FreeZn(n))
        } else if let Some(m) = body.strip_prefix("Z/") {
            Self::zmod_int(m.parse().map_err(|_| bad())?)
        } else {
            Err(bad())
        }
    }

    fn check_same(&self, other: &ModuleSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModuleMismatch(format!("{self} vs {other}")))
        }
    }

    /// Brings a coordinate vector into canonical form (residues for `Z/m`).
    fn normalize(&self, v: Vec<Rat>) -> Result<Vec<Rat>> {
        match self {
            ModuleSpec::ZmodM(m) => v.into_iter().map(|c| residue(&c, m)).collect(),
            _ => Ok(v),
        }
    }

    /// `c · v`.
    fn act(&self, c: &Rat, v: &[Rat]) -> Result<Vec<Rat>> {
        match self {
            ModuleSpec::ZmodM(m) => {
                let c = residue(c, m)?;
                v.iter().map(|x| residue(&(&c * x), m)).collect()
            }
            _ => Ok(v.iter().map(|x| c * x).collect()),
        }
    }
}

/// The class of `c` in `Z/m`; needs the denominator to be a unit mod `m`.
fn residue(c: &Rat, m: &Int) -> Result<Rat> {
    let den = c.denom();
    let g = den.extended_gcd(m);
    if !g.gcd.is_one() {
        return Err(Error::ScalarNotInvertible(format!("{c} mod {m}")));
    }
    let inv = g.x.mod_floor(m);
    Ok(Rat::from_integer((c.numer() * inv).mod_floor(m)))
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSpec::FreeZn(1) => write!(f, "Z(+)Z"),
            ModuleSpec::FreeZn(n) => write!(f, "Z(+)Z^{n}"),
            ModuleSpec::ZmodM(m) => write!(f, "Z(+)Z/{m}"),
            ModuleSpec::RationalsQ => write!(f, "Z(+)Q"),
        }
    }
}

impl Serialize for ModuleSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealElem {
    spec: ModuleSpec,
    x: Rat,
    m: Vec<Rat>,
}

impl IdealElem {
    pub fn new(spec: &ModuleSpec, x: Rat, m: Vec<Rat>) -> Result<Self> {
        if m.len() != spec.rank() {
            return Err(Error::DimensionMismatch {
                expected: spec.rank(),
                found: m.len(),
            });
        }
        if let ModuleSpec::ZmodM(md) = spec {
            // base parts must be regular on M to live in the total quotient ring
            residue(&x, md)?;
        }
        Ok(IdealElem {
            spec: spec.clone(),
            m: spec.normalize(m)?,
            x,
        })
    }

    pub fn from_i64(spec: &ModuleSpec, x: i64, m: &[i64]) -> Result<Self> {
        Self::new(
            spec,
            Rat::from_integer(x.into()),
            m.iter().map(|&v| Rat::from_integer(v.into())).collect(),
        )
    }

    pub fn one(spec: &ModuleSpec) -> Self {
        IdealElem {
            spec: spec.clone(),
            x: Rat::one(),
            m: vec![Rat::zero(); spec.rank()],
        }
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn m(&self) -> &[Rat] {
        &self.m
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    /// In `Z(+)M` proper: integral base part and module part in `M`.
    pub fn is_integral(&self) -> bool {
        is_integral(&self.x)
            && match self.spec {
                ModuleSpec::FreeZn(_) => self.m.iter().all(is_integral),
                _ => true,
            }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.spec.check_same(&rhs.spec)?;
        let m = self.m.iter().zip(&rhs.m).map(|(a, b)| a + b).collect();
        Ok(IdealElem {
            spec: self.spec.clone(),
            x: &self.x + &rhs.x,
            m: self.spec.normalize(m)?,
        })
    }
}

impl fmt::Display for IdealElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|v| v.to_string()).collect();
        write!(f, "({}, [{}])", self.x, parts.join(", "))
    }
}

impl Serialize for IdealElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(x, v)(y, w) = (xy, xw + yv)`.
pub fn ideal_mul(a: &IdealElem, b: &IdealElem) -> Result<IdealElem> {
    a.spec.check_same(&b.spec)?;
    let xw = a.spec.act(&a.x, &b.m)?;
    let yv = a.spec.act(&b.x, &a.m)?;
    let m = xw.iter().zip(&yv).map(|(p, q)| p + q).collect();
    Ok(IdealElem {
        spec: a.spec.clone(),
        x: &a.x * &b.x,
        m: a.spec.normalize(m)?,
    })
}

/// `F = f + hε` with `f` over Q and `h` a module-valued polynomial, one
/// polynomial per module coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealPoly {
    spec: ModuleSpec,
    f: Poly,
    h: Vec<Poly>,
}

impl IdealPoly {
    pub fn new(spec: &ModuleSpec, f: Poly, h: Vec<Poly>) -> Result<Self> {
        if h.len() != spec.rank() {
            return Err(Error::DimensionMismatch {
                expected: spec.rank(),
                found: h.len(),
            });
        }
        let h = match spec {
            ModuleSpec::ZmodM(m) => h
                .iter()
                .map(|p| {
                    let c = p.coeffs().iter().map(|c| residue(c, m)).collect::<Result<Vec<_>>>()?;
                    Ok(Poly::from_coeffs(c))
                })
                .collect::<Result<Vec<_>>>()?,
            _ => h,
        };
        Ok(IdealPoly {
            spec: spec.clone(),
            f,
            h,
        })
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn h(&self) -> &[Poly] {
        &self.h
    }

    pub fn derivative(&self) -> IdealPoly {
        IdealPoly {
            spec: self.spec.clone(),
            f: self.f.derivative(),
            h: self.h.iter().map(Poly::derivative).collect(),
        }
    }

    fn degree(&self) -> usize {
        std::iter::once(&self.f)
            .chain(&self.h)
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Parses `(f ; h1, h2) over Z(+)Z^2`, `(f ; h) over Z(+)Z/4`, ...
    pub fn parse(src: &str) -> Result<Self> {
        let (body, spec_text) = match src.rfind(" over ") {
            Some(i) => (&src[..i], &src[i + 6..]),
            None => return Err(Error::parse(src.len(), "expected 'over <module>'")),
        };
        let spec = ModuleSpec::parse(spec_text)?;
        let t = body.trim();
        let lead = body.len() - body.trim_start().len();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(lead, "expected '(f ; h)'"))?;
        let halves = split_top_level(inner, ';');
        if halves.len() != 2 {
            return Err(Error::parse(lead, "expected exactly one ';'"));
        }
        let at = |off: usize| lead + 1 + off;
        let f = parse_poly(halves[0].1).map_err(|e| shift(e, at(halves[0].0)))?;
        let h = split_top_level(halves[1].1, ',')
            .into_iter()
            .map(|(o, s)| parse_poly(s).map_err(|e| shift(e, at(halves[1].0 + o))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&spec, f, h)
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

impl fmt::Display for IdealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hs: Vec<String> = self.h.iter().map(|p| p.to_string()).collect();
        write!(f, "({} ; {}) over {}", self.f, hs.join(", "), self.spec)
    }
}

impl Serialize for IdealPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `F(x + vε) = f(x) + (f'(x)v + h(x))ε`.
pub fn ideal_eval(f: &IdealPoly, z: &IdealElem) -> Result<IdealElem> {
    f.spec.check_same(&z.spec)?;
    let spec = &f.spec;
    if let ModuleSpec::ZmodM(m) = spec {
        if let Some(c) = f.f.coeffs().iter().find(|c| !c.denom().gcd(m).is_one()) {
            return Err(Error::ScalarNotInvertible(format!("{c} mod {m}")));
        }
    }
    let fx = f.f.eval(&z.x);
    let mut m = spec.act(&f.f.derivative().eval(&z.x), &z.m)?;
    for (slot, h) in m.iter_mut().zip(&f.h) {
        *slot += module_eval(spec, h, &z.x)?;
    }
    Ok(IdealElem {
        spec: spec.clone(),
        x: fx,
        m: spec.normalize(m)?,
    })
}

/// `h(x)` with module coefficients and scalar `x`.
fn module_eval(spec: &ModuleSpec, h: &Poly, x: &Rat) -> Result<Rat> {
    let mut acc = Rat::zero();
    for c in h.coeffs().iter().rev() {
        acc = spec.act(x, &[acc])?.remove(0) + c;
    }
    Ok(spec.normalize(vec![acc])?.remove(0))
}

/// Horner evaluation through [`ideal_mul`]; agrees with [`ideal_eval`].
pub fn ideal_eval_horner(f: &IdealPoly, z: &IdealElem) -> Result<IdealElem> {
    f.spec.check_same(&z.spec)?;
    let spec = &f.spec;
    let mut acc = IdealElem {
        spec: spec.clone(),
        x: Rat::zero(),
        m: vec![Rat::zero(); spec.rank()],
    };
    for k in (0..=f.degree()).rev() {
        let c = IdealElem {
            spec: spec.clone(),
            x: f.f.coeff(k),
            m: f.h.iter().map(|p| p.coeff(k)).collect(),
        };
        acc = ideal_mul(&acc, z)?.add(&c)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealVerdict {
    pub member: bool,
    /// Verdict on the base component `f`.
    pub base: MembershipVerdict,
    /// One verdict per module coordinate of `h`.
    pub module: Vec<MembershipVerdict>,
    /// Set when `f` has a coefficient outside the total quotient ring.
    pub note: Option<String>,
}

/// Membership in `Int^(k)(Z(+)M)`:
///
/// * `Z^n`: `f ∈ Int^(k+1)(Z)`, every `h_i ∈ Int^(k)(Z)`;
/// * `Z/m`: denominators of `f` prime to `m` and `f ∈ Int^(k)(Z)`; `h` has
///   coefficients in `M` already;
/// * `Q`: `f ∈ Int^(k)(Z)`, `h` arbitrary.
pub fn in_int_idealization(f: &IdealPoly, k: usize) -> IdealVerdict {
    let yes = MembershipVerdict::yes;
    match &f.spec {
        ModuleSpec::FreeZn(_) => {
            let base = in_int_k(&f.f, k + 1);
            let module: Vec<MembershipVerdict> = f.h.iter().map(|h| in_int_k(h, k)).collect();
            IdealVerdict {
                member: base.member && module.iter().all(|v| v.member),
                base,
                module,
                note: None,
            }
        }
        ModuleSpec::ZmodM(m) => {
            let bad = f.f.coeffs().iter().find(|c| !c.denom().gcd(m).is_one());
            let base = in_int_k(&f.f, k);
            let note = bad.map(|c| format!("coefficient {c} is not defined modulo {m}"));
            IdealVerdict {
                member: base.member && note.is_none(),
                base,
                module: vec![yes()],
                note,
            }
        }
        ModuleSpec::RationalsQ => {
            let base = in_int_k(&f.f, k);
            IdealVerdict {
                member: base.member,
                base,
                module: vec![yes()],
                note: None,
            }
        }
    }
}

/// Sample points `(x, v)` for the grid oracle: `x ∈ {0..=xmax}` and `v`
/// ranging over `{-1,0,1}^n`, all residues, or `{0, 1, 1/2}`.
pub fn grid_points(spec: &ModuleSpec, xmax: usize) -> Vec<IdealElem> {
    let module_parts: Vec<Vec<Rat>> = match spec {
        ModuleSpec::FreeZn(n) => {
            let mut out = vec![Vec::new()];
            for _ in 0..*n {
                out = out
                    .into_iter()
                    .flat_map(|v| {
                        [-1i64, 0, 1].into_iter().map(move |c| {
                            let mut w = v.clone();
                            w.push(Rat::from_integer(c.into()));
                            w
                        })
                    })
                    .collect();
            }
            out
        }
        ModuleSpec::ZmodM(m) => {
            let mut out = Vec::new();
            let mut r = Int::zero();
            while &r < m {
                out.push(vec![Rat::from_integer(r.clone())]);
                r += 1;
            }
            out
        }
        ModuleSpec::RationalsQ => vec![
            vec![Rat::zero()],
            vec![Rat::one()],
            vec![Rat::new(Int::one(), Int::from(2))],
        ],
    };
    let mut pts = Vec::new();
    for x in 0..=xmax {
        for v in &module_parts {
            pts.push(IdealElem {
                spec: spec.clone(),
                x: Rat::from_integer(Int::from(x)),
                m: v.clone(),
            });
        }
    }
    pts
}

/// Evaluation oracle: `F, F', ..., F^(k)` map every grid point into `Z(+)M`.
/// Coefficients outside the total quotient ring count as failure.
pub fn grid_oracle(f: &IdealPoly, k: usize) -> Result<bool> {
    if let ModuleSpec::ZmodM(m) = &f.spec {
        if f.f.coeffs().iter().any(|c| !c.denom().gcd(m).is_one()) {
            return Ok(false);
        }
    }
    let pts = grid_points(&f.spec, f.degree() + 1);
    let mut d = f.clone();
    for _ in 0..=k {
        for z in &pts {
            if !ideal_eval(&d, z)?.is_integral() {
                return Ok(false);
            }
        }
        d = d.derivative();
    }
    Ok(true)
}
