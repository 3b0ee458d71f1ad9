//! The acceptance suite: ten groups of exact checks, each reproducible from
//! a seed.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_integral, Int, Rat};
use crate::findiff::{delta, delta_at, delta_by};
use crate::idealization::{
    canned_corollary_checks, discriminating_check, dual_number_agreement, ideal_eval, ideal_eval_horner,
    random_ideal_poly, IdealElem, ModuleSpec,
};
use crate::lattice::{basis_int_k, basis_int_mod, conjecture_check_mod4, prime_pattern, zx_plus_m_int};
use crate::membership::{in_int, in_int_mod, in_int_multiset, MultisetSpec};
use crate::partition::bell_numbers;
use crate::poly::{BinomPoly, MultiPoly, Poly};
use crate::random;
use crate::ringext::{dense_set_oracle, in_int_ext, pullback_iso, GenDualElem, GenDualPoly, RelationVector};
use crate::torsion::{
    int_equals_mx, is_principal_slicewise, is_reduced, poly_function_count, poly_function_count_image,
    vanishing_ideal, FiniteRingSpec, RingPoly,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// The mathematical statement being exercised.
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub criterion: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
        write!(f, "criterion {:>2} [{status}] {}", self.criterion, self.title)?;
        if !failed.is_empty() {
            write!(f, " (failed: {})", failed.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Section2,
    Section3,
    Section4,
    Section5,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
            Suite::Section2 => &[1, 2, 3],
            Suite::Section3 => &[4, 5, 6, 7, 8],
            Suite::Section4 => &[9],
            Suite::Section5 => &[10],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "section2" => Ok(Suite::Section2),
            "section3" => Ok(Suite::Section3),
            "section4" => Ok(Suite::Section4),
            "section5" => Ok(Suite::Section5),
            _ => Err(Error::InvalidParameter(format!(
                "unknown suite '{s}' (expected all, section2, section3, section4 or section5)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Section2 => "section2",
            Suite::Section3 => "section3",
            Suite::Section4 => "section4",
            Suite::Section5 => "section5",
        })
    }
}

/// Runs the criteria of `suite` in parallel; the output order is fixed.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CriterionReport> {
    suite.criteria().par_iter().map(|&c| run_criterion(c, seed)).collect()
}

pub fn run_criterion(n: u8, seed: u64) -> CriterionReport {
    let seed = random::sub_seed(seed, n as u64);
    let (title, checks) = match n {
        1 => ("binomial basis", c1(seed)),
        2 => ("closed-form evaluation in hyper-dual rings", c2(seed)),
        3 => ("membership in hyper-dual rings against a dense set", c3(seed)),
        4 => ("difference operator laws", c4(seed)),
        5 => ("single-element multisets against congruence preservation", c5(seed)),
        6 => ("worked bases of Int(Z; mZ)", c6()),
        7 => ("decomposition conjecture for Int(Z; 4Z)", c7()),
        8 => ("pullback description of Z[rho]", c8(seed)),
        9 => ("idealization", c9(seed)),
        10 => ("polynomial torsion", c10()),
        _ => ("unknown criterion", Err(Error::InvalidParameter(format!("criterion {n}")))),
    };
    let checks = checks.unwrap_or_else(|e| {
        vec![CheckResult {
            id: format!("c{n}-error"),
            anchor: "internal".into(),
            passed: false,
            detail: e.to_string(),
        }]
    });
    CriterionReport {
        criterion: n,
        title: title.into(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn check(id: &str, anchor: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        id: id.into(),
        anchor: anchor.into(),
        passed,
        detail: detail.into(),
    }
}

/// Agreement counter that also records how often each verdict occurred.
#[derive(Default)]
struct Agreement {
    agree: usize,
    total: usize,
    positive: usize,
    first_miss: Option<String>,
}

impl Agreement {
    fn record(&mut self, a: bool, b: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        self.positive += a as usize;
        if a == b {
            self.agree += 1;
        } else if self.first_miss.is_none() {
            self.first_miss = Some(what());
        }
    }

    fn passed(&self) -> bool {
        self.agree == self.total
    }

    /// Both verdicts must actually occur for the comparison to mean much.
    fn passed_both_ways(&self) -> bool {
        self.passed() && self.positive > 0 && self.positive < self.total
    }

    fn detail(&self) -> String {
        let mut s = format!("{}/{} agree, {} positive", self.agree, self.total, self.positive);
        if let Some(m) = &self.first_miss {
            s.push_str(&format!("; first disagreement: {m}"));
        }
        s
    }
}

fn c1(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = random::rng(seed);
    let mut trips = 0;
    for _ in 0..1000 {
        let f = random::poly(&mut rng, 12, 20, 12);
        trips += (BinomPoly::from_poly(&f).to_poly() == f) as usize;
    }
    let mut agree = Agreement::default();
    let mut replays = true;
    for _ in 0..500 {
        let f = random::binomial_candidate(&mut rng, 10, 6, 12);
        let v = in_int(&f);
        let deg = f.degree().unwrap_or(0);
        let exhaustive = (0..=deg).all(|x| is_integral(&f.eval_int(&Int::from(x))));
        replays &= v.witness.as_ref().is_none_or(|w| w.replay(&f));
        agree.record(v.member, exhaustive, || f.to_string());
    }
    Ok(vec![
        check(
            "c1-roundtrip",
            "C(X,0), C(X,1), ... is a Q-basis of Q[X]",
            trips == 1000,
            format!("{trips}/1000 round trips"),
        ),
        check(
            "c1-membership",
            "Int(Z) is free on the binomial polynomials",
            agree.passed_both_ways() && replays,
            format!("{}; witnesses replay: {replays}", agree.detail()),
        ),
    ])
}

fn random_dual_poly(rng: &mut StdRng, rel: &RelationVector, max_deg: usize) -> GenDualPoly {
    let mut comps = Vec::new();
    for t in rel.subsets() {
        if rng.gen_bool(0.6) {
            comps.push((t, random::poly(rng, max_deg, 6, 4)));
        }
    }
    GenDualPoly::from_components(rel, comps)
}

fn random_dual_elem(rng: &mut StdRng, rel: &RelationVector) -> GenDualElem {
    let coeffs: Vec<(u32, Rat)> = rel.subsets().map(|m| (m, random::rat_in(rng, 5, 3))).collect();
    GenDualElem::from_coeffs(rel, coeffs)
}

fn c2(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = random::rng(seed);
    let mut same = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let rel = RelationVector::dual(n)?;
        let f = random_dual_poly(&mut rng, &rel, 5);
        let z = random_dual_elem(&mut rng, &rel);
        same += (f.eval_closed_dual(&z)?.value == f.eval_direct(&z)?) as usize;
    }
    let bell = bell_numbers(6);
    let mut counts = Vec::new();
    let mut ok = true;
    for n in 1..=4 {
        let rel = RelationVector::dual(n)?;
        let f = GenDualPoly::scalar(&rel, Poly::from_i64(&[1, 1, 1, 1, 1, 1]));
        let closed = f.eval_closed_dual(&GenDualElem::one(&rel))?;
        let total = closed.terms.len() as u64;
        let top = closed.terms.iter().filter(|t| t.subset == rel.full_mask()).count() as u64;
        ok &= total == bell[n + 1] && top == bell[n];
        counts.push(format!("n={n}: {total} terms (B_{} = {}), top {top}", n + 1, bell[n + 1]));
    }
    Ok(vec![
        check(
            "c2-closed-form",
            "set-partition formula for F(x_0 + Σ x_S ε_S)",
            same == 500,
            format!("{same}/500 equal"),
        ),
        check(
            "c2-bell-counts",
            "the closed form for n generators has B_(n+1) summands",
            ok,
            counts.join("; "),
        ),
    ])
}

/// Lattice element of `Int^(k)` below `degree`, pushed off it half the time.
fn near_int_k(rng: &mut StdRng, k: usize, degree: usize, push: f64) -> Result<Poly> {
    let rows = basis_int_k(k, degree)?.rows_as_polys();
    let mut f = random::lattice_member(rng, &rows, 3);
    if rng.gen_bool(push) {
        let d = [2i64, 3, 4, 6][rng.gen_range(0..4)];
        f = &f + &Poly::binomial(rng.gen_range(0..=degree)).scale(&Rat::new(Int::from(1), Int::from(d)));
    }
    Ok(f)
}

fn c3(seed: u64) -> Result<Vec<CheckResult>> {
    let degree = 5;
    let mut out = Vec::new();
    for n in 1..=3usize {
        let mut rng = random::rng(random::sub_seed(seed, n as u64));
        let rel = RelationVector::dual(n)?;
        let mut agree = Agreement::default();
        for _ in 0..200 {
            let mut comps = Vec::new();
            for t in rel.subsets() {
                if rng.gen_bool(0.7) {
                    let k = n - t.count_ones() as usize;
                    comps.push((t, near_int_k(&mut rng, k, degree, 0.15)?));
                }
            }
            let f = GenDualPoly::from_components(&rel, comps);
            let a = in_int_ext(&f)?.member;
            let b = dense_set_oracle(&f, degree)?.member;
            agree.record(a, b, || f.to_string());
        }
        out.push(check(
            &format!("c3-n{n}"),
            "Int(Z[ε_1..ε_n]) splits into Int^(n-|T|)(Z) components; evaluation on a polynomially dense set decides it",
            agree.passed_both_ways(),
            agree.detail(),
        ));
    }
    Ok(out)
}

fn c4(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = random::rng(seed);
    let x = MultiPoly::var(0, 2);
    let y = MultiPoly::var(1, 2);
    let lift = |f: &Poly| MultiPoly::from_poly(f, 0, 2);
    let shifted = |f: &Poly| lift(f).substitute(&[&x + &y, y.clone()]);
    let (mut prod, mut chain, mut comm) = (0, 0, 0);
    for _ in 0..200 {
        let f = random::poly(&mut rng, 6, 9, 4);
        let g = random::poly(&mut rng, 6, 9, 4);
        let lhs = delta(&(&f * &g)).g;
        let rhs = &(&delta(&f).g * &shifted(&g)) + &(&lift(&f) * &delta(&g).g);
        prod += (lhs == rhs) as usize;
    }
    for _ in 0..200 {
        let f = random::poly(&mut rng, 4, 9, 4);
        let g = random::poly(&mut rng, 4, 9, 4);
        let lhs = delta(&f.compose(&g)).g;
        let h = &shifted(&g) - &lift(&g);
        let rhs = &delta_by(&f, &lift(&g), &h) * &delta(&g).g;
        chain += (lhs == rhs) as usize;
    }
    for _ in 0..200 {
        let f = random::poly(&mut rng, 8, 9, 4);
        let a = random::rat_in(&mut rng, 4, 2);
        let b = random::rat_in(&mut rng, 4, 2);
        comm += (delta_at(&delta_at(&f, &a), &b) == delta_at(&delta_at(&f, &b), &a)) as usize;
    }
    Ok(vec![
        check(
            "c4-product",
            "Δ(fg) = Δf·g(X+Y) + f·Δg",
            prod == 200,
            format!("{prod}/200"),
        ),
        check(
            "c4-chain",
            "Δ(f∘g) = (Δ_{Δg·Y} f)(g)·Δg",
            chain == 200,
            format!("{chain}/200"),
        ),
        check(
            "c4-commutation",
            "Δ_a Δ_b = Δ_b Δ_a",
            comm == 200,
            format!("{comm}/200"),
        ),
    ])
}

fn c5(seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for r in [2i64, 3, 4, 6] {
        let mut rng = random::rng(random::sub_seed(seed, r as u64));
        let ri = Int::from(r);
        let rows = basis_int_mod(&ri, 8)?.rows_as_polys();
        let s = MultisetSpec::from_i64(&[r]);
        let mut agree = Agreement::default();
        for _ in 0..300 {
            let f = if rng.gen_bool(0.5) {
                let mut f = random::lattice_member(&mut rng, &rows, 3);
                if rng.gen_bool(0.4) {
                    f = &f + &Poly::binomial(rng.gen_range(1..=8));
                }
                f
            } else {
                random::binomial_candidate(&mut rng, 8, 5, 2 * r)
            };
            let a = in_int_multiset(&f, &s)?.member;
            let b = in_int_mod(&f, &ri)?.member;
            agree.record(a, b, || f.to_string());
        }
        out.push(check(
            &format!("c5-r{r}"),
            "Int(Z; {r}) = Int(Z; rZ)",
            agree.passed_both_ways(),
            agree.detail(),
        ));
    }
    Ok(out)
}

fn pivot_list(p: &[Option<Int>]) -> String {
    let v: Vec<String> = p.iter().map(|x| x.as_ref().map_or("-".into(), |v| v.to_string())).collect();
    v.join(",")
}

fn c6() -> Result<Vec<CheckResult>> {
    let two = Int::from(2);
    let a = basis_int_mod(&two, 8)?;
    let b = zx_plus_m_int(&two, 8)?;
    let mut out = vec![check(
        "c6-mod2",
        "Int(Z; 2Z) = Z[X] + 2 Int(Z)",
        a == b,
        format!("pivots {}", pivot_list(&a.pivots())),
    )];
    let mut stated_ok = true;
    let mut corrected_ok = true;
    let mut stated = Vec::new();
    let mut corrected = Vec::new();
    for p in [2u64, 3, 5] {
        let got = basis_int_mod(&Int::from(p), 10)?.pivots();
        let expect_stated: Vec<Option<Int>> = (0..=10u64)
            .map(|k| Some(if k <= p { Int::from(1) } else { Int::from(p) }))
            .collect();
        let expect_corrected: Vec<Option<Int>> = prime_pattern(p, 10).into_iter().map(Some).collect();
        stated_ok &= got == expect_stated;
        corrected_ok &= got == expect_corrected;
        let line = format!("p={p}: computed {} expected {}", pivot_list(&got), pivot_list(&expect_stated));
        stated.push(line);
        corrected.push(format!("p={p}: {}", pivot_list(&got)));
    }
    out.push(check(
        "c6-prime-pattern-as-stated",
        "pivots 1 for k <= p, p for k > p",
        stated_ok,
        stated.join("; "),
    ));
    out.push(check(
        "c6-prime-pattern",
        "Int(Z; pZ) = Z[X] + p Int(Z): pivots 1 for k < p, p for k >= p",
        corrected_ok,
        corrected.join("; "),
    ));
    Ok(out)
}

fn c7() -> Result<Vec<CheckResult>> {
    let first = conjecture_check_mod4(12)?;
    let second = conjecture_check_mod4(12)?;
    let gens_ok = first.generators.iter().all(|g| g.member);
    Ok(vec![
        check(
            "c7-generators",
            "conjectured generators lie in Int(Z; 4Z)",
            gens_ok,
            format!("{} generators", first.generators.len()),
        ),
        check(
            "c7-containment",
            "conjectured lattice ⊆ computed lattice",
            first.conjecture_contained,
            format!("reverse containment: {}", first.computed_contained),
        ),
        check(
            "c7-verdict",
            "verdict is reproducible",
            first == second,
            format!(
                "verdict {} at degree 12{}",
                first.verdict,
                first.witness.as_ref().map(|w| format!(", witness {w}")).unwrap_or_default()
            ),
        ),
    ])
}

fn c8(seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for r in [2i64, 3, 4] {
        let mut rng = random::rng(random::sub_seed(seed, r as u64));
        let rel = RelationVector::from_i64(&[r])?;
        let base_rows = basis_int_mod(&Int::from(r), 6)?.rows_as_polys();
        let int_rows = basis_int_k(0, 6)?.rows_as_polys();
        let mut agree = Agreement::default();
        for _ in 0..200 {
            let mut f = random::lattice_member(&mut rng, &base_rows, 3);
            let mut g = random::lattice_member(&mut rng, &int_rows, 3);
            if rng.gen_bool(0.25) {
                f = &f + &Poly::binomial(rng.gen_range(1..=6));
            }
            if rng.gen_bool(0.25) {
                g = &g + &Poly::binomial(rng.gen_range(1..=6)).scale(&Rat::new(Int::from(1), Int::from(2)));
            }
            let poly = GenDualPoly::from_components(&rel, [(0, f), (1, g)]);
            let a = pullback_iso(&poly)?.fiber_ok;
            let b = in_int_ext(&poly)?.member;
            agree.record(a, b, || poly.to_string());
        }
        out.push(check(
            &format!("c8-r{r}"),
            "Z[ρ] with ρ² = rρ is the pullback {(a, b) : a ≡ b mod r}",
            agree.passed_both_ways(),
            agree.detail(),
        ));
    }
    Ok(out)
}

fn random_point(rng: &mut StdRng, spec: &ModuleSpec) -> Result<IdealElem> {
    let den = [1i64, 5, 7][rng.gen_range(0..3)];
    let x = Rat::new(random::int_in(rng, -6, 6), Int::from(den));
    let m = (0..spec.rank()).map(|_| random::rat_in(rng, 6, 1)).collect();
    IdealElem::new(spec, x, m)
}

fn c9(seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut lemma = Vec::new();
    let mut lemma_ok = true;
    for (i, spec) in [ModuleSpec::FreeZn(2), ModuleSpec::zmod(6)?, ModuleSpec::RationalsQ]
        .into_iter()
        .enumerate()
    {
        let mut rng = random::rng(random::sub_seed(seed, i as u64));
        let (mut same, mut done) = (0, 0);
        while done < 300 {
            let f = random_ideal_poly(&mut rng, &spec, 0)?;
            let z = random_point(&mut rng, &spec)?;
            let (Ok(a), Ok(b)) = (ideal_eval(&f, &z), ideal_eval_horner(&f, &z)) else {
                // coefficients outside the total quotient ring; not an element
                continue;
            };
            done += 1;
            same += (a == b) as usize;
        }
        lemma_ok &= same == 300;
        lemma.push(format!("{spec}: {same}/300"));
    }
    out.push(check(
        "c9-lemma",
        "F(x + mε) = f(x) + (f'(x)m + h(x))ε",
        lemma_ok,
        lemma.join("; "),
    ));
    let (agree, total) = dual_number_agreement(random::sub_seed(seed, 10), 300)?;
    out.push(check(
        "c9-dual-numbers",
        "Z(+)Z ≅ Z[ε] preserves products and integer-valuedness",
        agree == total,
        format!("{agree}/{total}"),
    ));
    for c in canned_corollary_checks()? {
        let mut detail = c.detail.clone();
        if let Some(f) = &c.finding {
            detail.push_str(&format!("; finding: {f}"));
        }
        out.push(check(&format!("c9-corollary: {}", c.name), &c.anchor, c.passed, detail));
    }
    let d = discriminating_check()?;
    out.push(check(
        "c9-discriminating",
        "δ_iδ_j = 0 in Z(+)Z^2 but ε_1ε_2 ≠ 0 in Z[ε_1, ε_2]",
        d.passed,
        format!(
            "f = {}: idealization {}, hyper-dual {}, ε1ε2 coefficient at x = {} is {}",
            d.f, d.accepted_by_idealization, d.accepted_by_hyperdual, d.x, d.cross_term
        ),
    ));
    Ok(out)
}

fn c10() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut gens = Vec::new();
    let mut ok = true;
    for p in [2u64, 3, 5] {
        let ring = FiniteRingSpec::zmod(p)?;
        let mut c = vec![0i64; p as usize + 1];
        c[1] = -1;
        c[p as usize] = 1;
        let g = RingPoly::from_int_poly(&ring, &c)?;
        let slice = vanishing_ideal(&ring, p as usize)?;
        let good = slice.is_generated_by(&g)? && slice.generators().iter().all(RingPoly::vanishes);
        ok &= good;
        gens.push(format!("F_{p}: {good}"));
    }
    out.push(check(
        "c10-finite-fields",
        "I_(F_q) = (X^q - X)",
        ok,
        gens.join("; "),
    ));
    let mut agree = Agreement::default();
    for n in 2..=30u64 {
        let ring = FiniteRingSpec::zmod(n)?;
        agree.record(is_principal_slicewise(&ring, n as usize)?, is_reduced(&ring), || format!("n={n}"));
    }
    out.push(check(
        "c10-principal",
        "I_R is principal iff R is reduced",
        agree.passed_both_ways(),
        agree.detail(),
    ));
    let mut agree = Agreement::default();
    for n in 1..=12u64 {
        let ring = FiniteRingSpec::zmod(n)?;
        let (a, b) = (poly_function_count(&ring)?, poly_function_count_image(&ring)?);
        agree.record(true, a == b, || format!("n={n}: {a} vs {b}"));
    }
    out.push(check(
        "c10-function-counts",
        "|P(R,R)| = |R[X]_{<|R|}| / |I_R slice|",
        agree.passed(),
        format!("{}/{} agree", agree.agree, agree.total),
    ));
    let v = int_equals_mx(&ModuleSpec::FreeZn(1), 2);
    out.push(check(
        "c10-int-vs-zx",
        "Int(Z) ≠ Z[X] since Q/Z has polynomial torsion",
        !v.equal && v.witness == Some(Poly::binomial(2)),
        format!(
            "equal: {}, witness {}",
            v.equal,
            v.witness.map_or("none".into(), |w| BinomPoly::from_poly(&w).to_string())
        ),
    ));
    Ok(out)
}
