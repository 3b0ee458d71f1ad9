use ivpoly::exact::Int;
use ivpoly::idealization::{ideal_eval, ideal_eval_horner, in_int_idealization, IdealElem, IdealPoly, ModuleSpec};
use ivpoly::lattice::{basis_int_k, basis_int_mod, conjecture_check_mod4};
use ivpoly::membership::{in_int, in_int_k, in_int_mod, in_int_multiset, MembershipVerdict, MultisetSpec};
use ivpoly::poly::parse::parse_poly;
use ivpoly::poly::{BinomPoly, Poly};
use ivpoly::ringext::{find_ring_witness, in_int_ext, pullback_iso, GenDualPoly, RelationVector};
use ivpoly::torsion::{
    nilpotent_witness, poly_function_count, principality_report, vanishing_ideal, FiniteRingSpec, RING_SIZE_CAP,
};
use ivpoly::verify::{run_suite, Suite};
use serde_json::json;

use crate::report::{to_value, Report};
use crate::{Context, Failure, Outcome};

const MAX_BASIS_DEGREE: usize = 64;

enum Target {
    Int,
    IntK(usize),
    IntMod(Int),
    Multiset(MultisetSpec),
    Ext(RelationVector),
    Ideal(ModuleSpec, usize),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_int(s: &str) -> Result<Int, Failure> {
    s.trim().parse().map_err(|_| usage(format!("'{s}' is not an integer")))
}

fn parse_count(s: &str) -> Result<usize, Failure> {
    s.trim().parse().map_err(|_| usage(format!("'{s}' is not a non-negative integer")))
}

fn parse_target(t: &str) -> Result<Target, Failure> {
    if t == "int" {
        return Ok(Target::Int);
    }
    let (kind, arg) = t.split_once(':').ok_or_else(|| usage(format!("unsupported target '{t}'")))?;
    match kind {
        "int-k" => Ok(Target::IntK(parse_count(arg)?)),
        "int-mod" => Ok(Target::IntMod(parse_int(arg)?)),
        "int-multiset" => Ok(Target::Multiset(MultisetSpec::parse(arg)?)),
        "ext" => Ok(Target::Ext(RelationVector::parse(arg)?)),
        "idealization" => {
            let (spec, k) = arg
                .rsplit_once(',')
                .ok_or_else(|| usage("idealization target needs '<module>,<k>'"))?;
            Ok(Target::Ideal(ModuleSpec::parse(spec)?, parse_count(k)?))
        }
        _ => Err(usage(format!("unsupported target '{t}'"))),
    }
}

fn target_from_flags(ctx: &Context) -> Result<Target, Failure> {
    if let Some(m) = &ctx.module {
        return Ok(Target::Ideal(ModuleSpec::parse(m)?, ctx.k.unwrap_or(0)));
    }
    if let Some(r) = &ctx.relations {
        return Ok(Target::Ext(RelationVector::parse(r)?));
    }
    if let Some(s) = &ctx.multiset {
        return Ok(Target::Multiset(MultisetSpec::parse(s)?));
    }
    if let Some(m) = &ctx.modulus {
        return Ok(Target::IntMod(parse_int(m)?));
    }
    Ok(ctx.k.map_or(Target::Int, Target::IntK))
}

fn parse_ideal(expr: &str, spec: &ModuleSpec) -> Result<IdealPoly, Failure> {
    let src = if expr.contains(" over ") {
        expr.to_string()
    } else {
        format!("{expr} over {spec}")
    };
    let f = IdealPoly::parse(&src)?;
    if f.spec() != spec {
        return Err(usage(format!("expression is over {} but the target is {spec}", f.spec())));
    }
    Ok(f)
}

fn verdict_outcome(member: bool) -> Outcome {
    if member {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn push_witness(report: &mut Report, v: &MembershipVerdict) {
    if let Some(w) = &v.witness {
        let mut val = to_value(w);
        if let Some(obj) = val.as_object_mut() {
            obj.insert("text".into(), json!(w.to_string()));
        }
        report.witnesses.push(val);
    }
}

fn poly_verdict(report: &mut Report, f: &Poly, v: MembershipVerdict) -> Outcome {
    push_witness(report, &v);
    report.result = json!({
        "member": v.member,
        "polynomial": f.to_string(),
        "binomial": BinomPoly::from_poly(f).to_string(),
    });
    verdict_outcome(v.member)
}

pub fn member(report: &mut Report, expr: &str, target: Option<&str>, ctx: &Context) -> Result<Outcome, Failure> {
    let t = match target {
        Some(t) => parse_target(t)?,
        None if ctx.module.is_none() && expr.contains(" over ") => {
            Target::Ideal(IdealPoly::parse(expr)?.spec().clone(), ctx.k.unwrap_or(0))
        }
        None => target_from_flags(ctx)?,
    };
    report.param("expr", expr);
    match t {
        Target::Int => {
            report.param("target", "int");
            let f = parse_poly(expr)?;
            Ok(poly_verdict(report, &f, in_int(&f)))
        }
        Target::IntK(k) => {
            report.param("target", format!("int-k:{k}"));
            let f = parse_poly(expr)?;
            Ok(poly_verdict(report, &f, in_int_k(&f, k)))
        }
        Target::IntMod(m) => {
            report.param("target", format!("int-mod:{m}"));
            let f = parse_poly(expr)?;
            let v = in_int_mod(&f, &m)?;
            Ok(poly_verdict(report, &f, v))
        }
        Target::Multiset(s) => {
            report.param("target", format!("int-multiset:{s}"));
            let f = parse_poly(expr)?;
            let v = in_int_multiset(&f, &s)?;
            Ok(poly_verdict(report, &f, v))
        }
        Target::Ext(rel) => {
            report.param("target", format!("ext:{rel}"));
            let f = GenDualPoly::parse(expr, &rel)?;
            let v = in_int_ext(&f)?;
            for c in &v.components {
                push_witness(report, &c.verdict);
            }
            if !v.member {
                if let Some(p) = find_ring_witness(&f, 4)? {
                    report.witnesses.push(json!({
                        "kind": "ring_point",
                        "z": p.z.to_string(),
                        "value": p.value.to_string(),
                    }));
                }
            }
            report.result = json!({
                "member": v.member,
                "polynomial": f.to_string(),
                "components": to_value(&v.components),
            });
            Ok(verdict_outcome(v.member))
        }
        Target::Ideal(spec, k) => {
            report.param("target", format!("idealization:{spec},{k}"));
            let f = parse_ideal(expr, &spec)?;
            let v = in_int_idealization(&f, k);
            push_witness(report, &v.base);
            for m in &v.module {
                push_witness(report, m);
            }
            report.result = json!({
                "member": v.member,
                "polynomial": f.to_string(),
                "verdict": to_value(&v),
            });
            Ok(verdict_outcome(v.member))
        }
    }
}

pub fn basis(
    report: &mut Report,
    selector: Option<&str>,
    degree: usize,
    conjecture: bool,
    ctx: &Context,
) -> Result<Outcome, Failure> {
    if degree > MAX_BASIS_DEGREE {
        return Err(usage(format!("degree {degree} exceeds {MAX_BASIS_DEGREE}")));
    }
    let sel = match selector {
        Some(s) => s.to_string(),
        None => match (&ctx.modulus, ctx.k) {
            (Some(m), None) => format!("mod:{m}"),
            (None, Some(k)) => format!("diff:{k}"),
            _ => return Err(usage("give a selector mod:<m> or diff:<k>")),
        },
    };
    report.param("selector", &sel).param("degree", degree);
    let lattice = match sel.split_once(':') {
        Some(("mod", m)) => basis_int_mod(&parse_int(m)?, degree)?,
        Some(("diff", k)) => basis_int_k(parse_count(k)?, degree)?,
        _ => return Err(usage(format!("invalid selector '{sel}'"))),
    };
    let pivots: Vec<String> = lattice
        .pivots()
        .iter()
        .map(|p| p.as_ref().map_or("-".into(), |v| v.to_string()))
        .collect();
    let rows: Vec<String> = lattice.rows_as_polys().iter().map(|r| r.to_string()).collect();
    let mut result = json!({
        "rank": lattice.rank(),
        "pivots": pivots,
        "hnf": to_value(lattice.basis()),
        "rows": rows,
    });
    if conjecture {
        report.param("conjecture", true);
        if sel != "mod:4" {
            return Err(usage("--conjecture applies to mod:4 only"));
        }
        let c = conjecture_check_mod4(degree)?;
        if let Some(w) = &c.witness {
            report.witnesses.push(json!({ "kind": "lattice_difference", "polynomial": w }));
        }
        result["conjecture"] = to_value(&c);
        result["verdict"] = json!(c.verdict.to_string());
    }
    report.result = result;
    Ok(Outcome::Yes)
}

pub fn eval(report: &mut Report, expr: &str, point: &str, ctx: &Context) -> Result<Outcome, Failure> {
    report.param("expr", expr).param("point", point);
    if let Some(r) = &ctx.relations {
        let rel = RelationVector::parse(r)?;
        report.param("relations", rel.to_string());
        let f = GenDualPoly::parse(expr, &rel)?;
        let p = GenDualPoly::parse(point, &rel)?;
        if p.degree() > 0 {
            return Err(usage("the point must not involve X"));
        }
        let z = p.coeff_elem(0);
        let value = f.eval_direct(&z)?;
        let mut result = json!({ "value": value.to_string(), "integral": value.is_integral() });
        if rel.is_pure_dual() {
            let closed = f.eval_closed_dual(&z)?;
            if closed.value != value {
                return Err(Failure::Internal(format!("closed form {} differs from {}", closed.value, value)));
            }
            result["closed_form_terms"] = json!(closed.terms.len());
        }
        if rel.len() == 1 {
            let forms = f.eval_closed_rho(&z)?;
            if forms.first != value || forms.second != value {
                return Err(Failure::Internal("rho closed forms differ from direct evaluation".into()));
            }
        }
        report.result = result;
        return Ok(Outcome::Yes);
    }
    if let Some(m) = &ctx.module {
        let spec = ModuleSpec::parse(m)?;
        report.param("module", spec.to_string());
        let f = parse_ideal(expr, &spec)?;
        let p = parse_ideal(point, &spec)?;
        if p.f().degree().unwrap_or(0) > 0 || p.h().iter().any(|h| h.degree().unwrap_or(0) > 0) {
            return Err(usage("the point must not involve X"));
        }
        let z = IdealElem::new(&spec, p.f().coeff(0), p.h().iter().map(|h| h.coeff(0)).collect())?;
        let value = ideal_eval(&f, &z)?;
        if ideal_eval_horner(&f, &z)? != value {
            return Err(Failure::Internal("lemma formula differs from Horner evaluation".into()));
        }
        report.result = json!({ "value": value.to_string(), "integral": value.is_integral() });
        return Ok(Outcome::Yes);
    }
    let f = parse_poly(expr)?;
    let x = parse_poly(point)?;
    if x.degree().unwrap_or(0) > 0 {
        return Err(usage("the point must be a constant"));
    }
    let value = f.eval(&x.coeff(0));
    report.result = json!({ "value": value.to_string(), "integral": value.is_integer() });
    Ok(Outcome::Yes)
}

pub fn decompose(report: &mut Report, expr: &str, ctx: &Context) -> Result<Outcome, Failure> {
    report.param("expr", expr);
    if let Some(r) = &ctx.relations {
        let rel = RelationVector::parse(r)?;
        report.param("relations", rel.to_string());
        let f = GenDualPoly::parse(expr, &rel)?;
        let v = in_int_ext(&f)?;
        // in_int_ext reports components in the order f stores them
        let comps: Vec<_> = v
            .components
            .iter()
            .zip(f.components())
            .map(|(c, (_, p))| {
                json!({
                    "subset": c.subset,
                    "component": p.to_string(),
                    "binomial": BinomPoly::from_poly(p).to_string(),
                    "multiset": c.multiset.to_string(),
                    "member": c.verdict.member,
                })
            })
            .collect();
        let mut result = json!({ "member": v.member, "components": comps });
        if rel.len() == 1 && !rel.is_pure_dual() {
            let p = pullback_iso(&f)?;
            result["pullback"] = json!({
                "first": p.first.to_string(),
                "second": p.second.to_string(),
                "fiber_ok": p.fiber_ok,
            });
        }
        report.result = result;
        return Ok(Outcome::Yes);
    }
    if let Some(m) = &ctx.module {
        let spec = ModuleSpec::parse(m)?;
        let k = ctx.k.unwrap_or(0);
        report.param("module", spec.to_string()).param("k", k);
        let f = parse_ideal(expr, &spec)?;
        let v = in_int_idealization(&f, k);
        let hs: Vec<String> = f.h().iter().map(|h| h.to_string()).collect();
        report.result = json!({
            "f": f.f().to_string(),
            "h": hs,
            "member": v.member,
            "verdict": to_value(&v),
        });
        return Ok(Outcome::Yes);
    }
    let f = parse_poly(expr)?;
    let b = BinomPoly::from_poly(&f);
    let coords: Vec<String> = b.coeffs().iter().map(|c| c.to_string()).collect();
    let v = in_int(&f);
    push_witness(report, &v);
    report.result = json!({
        "binomial": b.to_string(),
        "coordinates": coords,
        "member": v.member,
    });
    Ok(Outcome::Yes)
}

pub fn vanish(report: &mut Report, ring: &str, degree: Option<usize>) -> Result<Outcome, Failure> {
    let r = FiniteRingSpec::parse(ring)?;
    let size = r.size()?;
    let d = degree.unwrap_or(size);
    report.param("ring", r.to_string()).param("degree", d);
    let slice = vanishing_ideal(&r, d)?;
    let gens = slice.generators();
    if let Some(g) = gens.iter().find(|g| !g.vanishes()) {
        return Err(Failure::Internal(format!("kernel element {g} does not vanish")));
    }
    let mut result = json!({
        "size": slice.size().to_string(),
        "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "reduced": nilpotent_witness(&r).is_none(),
    });
    if let Some(n) = nilpotent_witness(&r) {
        report.witnesses.push(json!({ "kind": "nilpotent", "element": n }));
    }
    if d >= size {
        result["principality"] = to_value(principality_report(&r, d)?);
    }
    if size <= RING_SIZE_CAP {
        result["polynomial_functions"] = json!(poly_function_count(&r)?.to_string());
    }
    report.result = result;
    Ok(Outcome::Yes)
}

pub fn verify(report: &mut Report, suite: &str, seed: u64) -> Result<Outcome, Failure> {
    let s: Suite = suite.parse()?;
    report.param("suite", s.to_string()).param("seed", seed);
    let reports = run_suite(s, seed);
    let passed = reports.iter().filter(|r| r.passed).count();
    report.result = json!({
        "summary": format!("{passed}/{} criteria pass", reports.len()),
        "lines": reports.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "criteria": to_value(&reports),
    });
    Ok(verdict_outcome(passed == reports.len()))
}
