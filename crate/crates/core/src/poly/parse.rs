//! Text syntax shared by every polynomial-like type.
//!
//! Accepted grammar (whitespace-insensitive):
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" uint)?
//! atom  := number | "X" | symbol | "C(" expr "," uint ")" | "(" expr ")"
//! ```
//!
//! Division is only allowed by constants. Symbols other than `X` are
//! handed to the caller, which is how `rho1`, `eps2` and friends get their
//! meaning.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Poly;
use crate::error::{Error, Result};
use crate::exact::{Int, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Int),
    X,
    Symbol(String, usize),
    Binom(Box<Expr>, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Int),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((start, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::parse(i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected '{op}'")))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n.to_u32().ok_or_else(|| Error::parse(at, "exponent too large"))
            }
            _ => Err(Error::parse(at, "expected a non-negative integer")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                self.pos += 1;
                let at = self.offset();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            Ok(Expr::Pow(Box::new(base), self.uint()?))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "C" && self.peek() == Some(&Tok::Op('(')) {
                    self.pos += 1;
                    let inner = self.expr()?;
                    self.expect(',')?;
                    let k = self.uint()? as usize;
                    self.expect(')')?;
                    Ok(Expr::Binom(Box::new(inner), k))
                } else if name == "X" || name == "x" {
                    Ok(Expr::X)
                } else {
                    Ok(Expr::Symbol(name, at))
                }
            }
            Some(Tok::Op(c)) => Err(Error::parse(at, format!("unexpected '{c}'"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

/// Parses a complete expression; `base` offsets error positions when the
/// text is a slice of a larger input.
pub fn parse_expr(src: &str, base: usize) -> Result<Expr> {
    let toks: Vec<(usize, Tok)> = lex(src)
        .map_err(|e| shift_err(e, base))?
        .into_iter()
        .map(|(o, t)| (o + base, t))
        .collect();
    let mut p = Parser {
        toks,
        pos: 0,
        end: base + src.chars().count(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    Ok(e)
}

fn shift_err(e: Error, base: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos: pos + base,
            msg,
        },
        other => other,
    }
}

/// Anything an expression can be evaluated into.
pub trait Algebra: Sized + Clone {
    fn add(&self, rhs: &Self) -> Result<Self>;
    fn sub(&self, rhs: &Self) -> Result<Self>;
    fn mul(&self, rhs: &Self) -> Result<Self>;
    fn scale(&self, c: &Rat) -> Self;
    /// The value as a constant, if it is one (needed for division).
    fn as_constant(&self) -> Option<Rat>;
}

/// Leaves of the expression tree, supplied by the target type.
pub trait Atoms<T> {
    fn constant(&self, c: Rat) -> T;
    fn x(&self) -> T;
    fn symbol(&self, name: &str, pos: usize) -> Result<T>;
}

pub fn eval_expr<T: Algebra, A: Atoms<T>>(e: &Expr, atoms: &A) -> Result<T> {
    match e {
        Expr::Num(n) => Ok(atoms.constant(Rat::from_integer(n.clone()))),
        Expr::X => Ok(atoms.x()),
        Expr::Symbol(s, at) => atoms.symbol(s, *at),
        Expr::Neg(a) => Ok(eval_expr(a, atoms)?.scale(&-Rat::one())),
        Expr::Add(a, b) => eval_expr(a, atoms)?.add(&eval_expr(b, atoms)?),
        Expr::Sub(a, b) => eval_expr(a, atoms)?.sub(&eval_expr(b, atoms)?),
        Expr::Mul(a, b) => eval_expr(a, atoms)?.mul(&eval_expr(b, atoms)?),
        Expr::Div(a, b, at) => {
            let d = eval_expr(b, atoms)?
                .as_constant()
                .ok_or_else(|| Error::parse(*at, "division by a non-constant"))?;
            if d.is_zero() {
                return Err(Error::parse(*at, "division by zero"));
            }
            Ok(eval_expr(a, atoms)?.scale(&d.recip()))
        }
        Expr::Pow(a, k) => {
            let base = eval_expr(a, atoms)?;
            let mut acc = atoms.constant(Rat::one());
            for _ in 0..*k {
                acc = acc.mul(&base)?;
            }
            Ok(acc)
        }
        Expr::Binom(a, k) => {
            let inner = eval_expr(a, atoms)?;
            let mut acc = atoms.constant(Rat::one());
            for i in 0..*k {
                let factor = inner.sub(&atoms.constant(Rat::from_integer(Int::from(i))))?;
                acc = acc
                    .mul(&factor)?
                    .scale(&Rat::new(Int::one(), Int::from(i + 1)));
            }
            Ok(acc)
        }
    }
}

impl Algebra for Poly {
    fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }
    fn scale(&self, c: &Rat) -> Self {
        Poly::scale(self, c)
    }
    fn as_constant(&self) -> Option<Rat> {
        match self.degree() {
            None => Some(Rat::zero()),
            Some(0) => Some(self.coeff(0)),
            _ => None,
        }
    }
}

struct PolyAtoms;

impl Atoms<Poly> for PolyAtoms {
    fn constant(&self, c: Rat) -> Poly {
        Poly::constant(c)
    }
    fn x(&self) -> Poly {
        Poly::x()
    }
    fn symbol(&self, name: &str, pos: usize) -> Result<Poly> {
        Err(Error::parse(pos, format!("unknown symbol '{name}'")))
    }
}

/// Parses either textual form ("3/2*X^2 - X + 1" or "C(X,2) + 2*C(X,5)").
pub fn parse_poly(src: &str) -> Result<Poly> {
    let e = parse_expr(src, 0)?;
    eval_expr(&e, &PolyAtoms)
}

impl std::str::FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poly> {
        parse_poly(s)
    }
}

/// Renders `c1*atom1 + c2*atom2 ...`; an empty atom denotes a constant term.
pub fn render_terms(terms: &[(Rat, String)]) -> String {
    let mut out = String::new();
    for (i, (c, atom)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if atom.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(atom);
        } else {
            out.push_str(&format!("{a}*{atom}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Splits at top-level occurrences of `sep` (outside parentheses and
/// brackets), returning each piece with its starting offset.
pub fn split_top_level(src: &str, sep: char) -> Vec<(usize, &str)> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in src.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push((start, &src[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &src[start..]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::poly::BinomPoly;
    use proptest::prelude::*;

    #[test]
    fn both_forms_parse() {
        let p = parse_poly("3/2*X^2 - X + 1").unwrap();
        assert_eq!(p, Poly::from_coeffs(vec![rat(1, 1), rat(-1, 1), rat(3, 2)]));
        let b = parse_poly("C(X,2) + 2*C(X,5)").unwrap();
        assert_eq!(b.to_binomial(), BinomPoly::from_i64(&[0, 0, 1, 0, 0, 2]));
        assert_eq!(parse_poly(" ( X^5 -X ) / 5 ").unwrap().coeff(5), rat(1, 5));
        assert_eq!(parse_poly("-X^2").unwrap(), Poly::from_i64(&[0, 0, -1]));
        assert_eq!(parse_poly("C(X+2,2)").unwrap(), Poly::binomial(2).shift(&rat(2, 1)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("X + * 2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("X / X").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("rho1").is_err());
        assert!(parse_poly("X)").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("X $ 1").is_err());
    }

    #[test]
    fn split_respects_nesting() {
        let parts: Vec<&str> = split_top_level("(a, b), c", ',').into_iter().map(|p| p.1).collect();
        assert_eq!(parts, vec!["(a, b)", " c"]);
    }

    fn any_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-40i64..40, 1i64..9), 0..10)
            .prop_map(|v| Poly::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn monomial_round_trip(f in any_poly()) {
            prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn binomial_round_trip(f in any_poly()) {
            let b = f.to_binomial();
            let back = parse_poly(&b.to_string()).unwrap();
            prop_assert_eq!(back.to_binomial().to_string(), b.to_string());
            prop_assert_eq!(back, f);
        }
    }
}
