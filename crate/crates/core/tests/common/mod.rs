#![allow(dead_code)]


use pts_core::alpha::alpha_eq;
use pts_core::beta::{beta_conv, Conv};
use pts_core::oracle::naive_subst;
use pts_core::parser::{parse_ctx, parse_term};
use pts_core::subst::{apply, chi_var, subst1, Sub};
use pts_core::syntax::{fv, is_fresh, member, Sort, Term, Var};
use pts_core::typing::{
    ctx_apply, infer, lambda_cube, subst_wt, well_formed, Corner, Ctx, CtxDerivation, Derivation, PtsSpec,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FUEL: u64 = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn var(n: &str) -> Var {
    Var::new(n)
}

pub fn v(n: &str) -> Term {
    Term::var(var(n))
}

pub fn star() -> Term {
    Term::sort(Sort::star())
}

pub fn boxed() -> Term {
    Term::sort(Sort::boxed())
}

pub fn t(src: &str) -> Term {
    parse_term(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn names(ns: &[&str]) -> Vec<Var> {
    ns.iter().map(|n| var(n)).collect()
}

/// Three names, two of which collide with the kernel's canonical choices.
pub fn three_vars() -> Vec<Var> {
    names(&["x0", "x1", "y"])
}

pub fn star_only() -> Vec<Sort> {
    vec![Sort::star()]
}

pub fn two_sorts() -> Vec<Sort> {
    vec![Sort::star(), Sort::boxed()]
}

/// Twenty substitutions over `x0`, `x1`, `y`: identity, renamings and
/// single or multiple updates whose images contain binders and free
/// canonical names.
pub fn sub_bank() -> Vec<Sub> {
    let images = [
        v("x2"),
        Term::app(v("x0"), v("y")),
        Term::lam(var("x0"), star(), v("x0")),
        Term::pi(var("y"), v("x0"), v("y")),
        Term::lam(var("x1"), star(), v("x0")),
    ];
    let mut bank = vec![
        Sub::identity(),
        Sub::from_pairs([(var("x0"), v("x1")), (var("x1"), v("x0"))]),
        Sub::from_pairs([(var("y"), v("x0"))]),
        Sub::from_pairs([(var("x0"), v("x1")), (var("y"), v("x1"))]),
        Sub::from_pairs([
            (var("x0"), v("y")),
            (var("x1"), Term::app(v("x1"), v("x0"))),
            (var("y"), Term::lam(var("y"), star(), v("x1"))),
        ]),
    ];
    for x in three_vars() {
        for img in &images {
            bank.push(Sub::identity().update(x.clone(), img.clone()));
        }
    }
    assert_eq!(bank.len(), 20);
    bank
}

/// Images used for updates in the substitution lemmas.
pub fn update_images() -> Vec<Term> {
    vec![v("x1"), Term::lam(var("x0"), v("y"), v("x0")), Term::app(v("y"), v("x2"))]
}

/// Random term of at most `size` nodes. `redex` is the probability that an
/// application gets an abstraction in function position.
pub fn random_term(r: &mut ChaCha8Rng, size: usize, vars: &[Var], sorts: &[Sort], redex: f64) -> Term {
    if size < 3 || r.gen_bool(0.15) {
        let n = vars.len() + sorts.len();
        let i = r.gen_range(0..n);
        return if i < vars.len() {
            Term::Var(vars[i].clone())
        } else {
            Term::Const(sorts[i - vars.len()].clone())
        };
    }
    let rest = size - 1;
    let left = r.gen_range(1..rest);
    let right = rest - left;
    match r.gen_range(0..10) {
        0..=3 => {
            let f = if left >= 3 && r.gen_bool(redex) {
                let inner = left - 1;
                let a = r.gen_range(1..inner);
                Term::lam(
                    vars.choose(r).unwrap().clone(),
                    random_term(r, a, vars, sorts, redex),
                    random_term(r, inner - a, vars, sorts, redex),
                )
            } else {
                random_term(r, left, vars, sorts, redex)
            };
            Term::app(f, random_term(r, right, vars, sorts, redex))
        }
        4..=6 => Term::lam(
            vars.choose(r).unwrap().clone(),
            random_term(r, left, vars, sorts, redex),
            random_term(r, right, vars, sorts, redex),
        ),
        _ => Term::pi(
            vars.choose(r).unwrap().clone(),
            random_term(r, left, vars, sorts, redex),
            random_term(r, right, vars, sorts, redex),
        ),
    }
}

pub fn random_sub(r: &mut ChaCha8Rng, vars: &[Var], sorts: &[Sort]) -> Sub {
    let mut s = Sub::identity();
    for x in vars {
        if r.gen_bool(0.5) {
            let size = r.gen_range(1..=5);
            s = s.update(x.clone(), random_term(r, size, vars, sorts, 0.2));
        }
    }
    s
}

/// Renames binders at random while keeping the term alpha-equivalent. The
/// new name never occurs free in the body, and the renaming itself goes
/// through the oracle's capture-avoiding substitution.
pub fn alpha_variant(r: &mut ChaCha8Rng, m: &Term, pool: &[Var]) -> Term {
    match m {
        Term::Const(_) | Term::Var(_) => m.clone(),
        Term::App(p, q) => Term::app(alpha_variant(r, p, pool), alpha_variant(r, q, pool)),
        Term::Lam(x, a, b) | Term::Pi(x, a, b) => {
            let a2 = alpha_variant(r, a, pool);
            let b2 = alpha_variant(r, b, pool);
            let candidates: Vec<&Var> = pool.iter().filter(|z| *z == x || is_fresh(z, &b2)).collect();
            let z = (*candidates.choose(r).unwrap()).clone();
            let body = naive_subst(&b2, x, &Term::Var(z.clone()));
            if matches!(m, Term::Lam(..)) {
                Term::lam(z, a2, body)
            } else {
                Term::pi(z, a2, body)
            }
        }
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// `x ∈ fv (M ∙ σ)` iff `x` is free in the image of some free variable of `M`.
pub fn no_capture(m: &Term, s: &Sub, candidates: &[Var]) -> Result<(), String> {
    let out = fv(&apply(m, s));
    for x in candidates {
        let lhs = member(x, &out);
        let rhs = fv(m).iter().any(|y| member(x, &fv(&s.get(y))));
        ensure(lhs == rhs, || format!("noCapture: {x} in {m:?} under {s:?}"))?;
    }
    Ok(())
}

/// Agreement on `fv M` gives identical results.
pub fn sub_eq_res(m: &Term, s: &Sub, s2: &Sub) -> Result<(), String> {
    let agree = fv(m).iter().all(|y| s.get(y) == s2.get(y));
    ensure(!agree || apply(m, s) == apply(m, s2), || {
        format!("subEqRes: {m:?} under {s:?} and {s2:?}")
    })
}

pub fn upd_fresh(m: &Term, s: &Sub, x: &Var, n: &Term) -> Result<(), String> {
    ensure(
        !is_fresh(x, m) || apply(m, &s.update(x.clone(), n.clone())) == apply(m, s),
        || format!("updFresh: {m:?}, {x} := {n:?}, {s:?}"),
    )
}

pub fn compos_ren_upd(m: &Term, s: &Sub, x: &Var, z: &Var, n: &Term) -> Result<(), String> {
    let premise = !fv(m).iter().any(|y| y == z && y != x);
    if !premise {
        return Ok(());
    }
    let lhs = apply(m, &s.update(x.clone(), n.clone()));
    let rhs = apply(&subst1(m, x, &Term::Var(z.clone())), &s.update(z.clone(), n.clone()));
    ensure(lhs == rhs, || format!("composRenUpd: {m:?}, {x} -> {z}, {n:?}, {s:?}"))
}

pub fn sub_distrib_upd(m: &Term, s: &Sub, x: &Var, n: &Term) -> Result<(), String> {
    let lhs = apply(m, &s.update(x.clone(), apply(n, s)));
    let rhs = apply(&subst1(m, x, n), s);
    ensure(lhs == rhs, || format!("subDistribUpd: {m:?}, {x} := {n:?}, {s:?}"))
}

pub fn sub_comp(m: &Term, s: &Sub, s2: &Sub) -> Result<(), String> {
    let lhs = apply(&apply(m, s), s2);
    let rhs = apply(m, &s2.compose(s));
    ensure(lhs == rhs, || format!("subComp: {m:?}, {s:?} then {s2:?}"))
}

/// All six substitution lemmas at one term, one substitution pair and one
/// choice of update data.
pub fn subst_lemmas(
    m: &Term,
    s: &Sub,
    s2: &Sub,
    xs: &[Var],
    zs: &[Var],
    images: &[Term],
) -> Result<(), String> {
    let mut candidates: Vec<Var> = zs.to_vec();
    candidates.extend(xs.iter().cloned());
    candidates.extend(s.support().flat_map(|(_, t)| fv(t)));
    no_capture(m, s, &candidates)?;
    sub_eq_res(m, s, s2)?;
    // an explicit trivial entry and an update off `fv M` must not matter
    let mut padded = s.clone();
    for z in zs {
        if !member(z, &fv(m)) {
            padded = padded.update(z.clone(), star());
        }
    }
    sub_eq_res(m, s, &padded)?;
    sub_comp(m, s, s2)?;
    for x in xs {
        for n in images {
            upd_fresh(m, s, x, n)?;
            sub_distrib_upd(m, s, x, n)?;
            for z in zs {
                compos_ren_upd(m, s, x, z, n)?;
            }
        }
    }
    Ok(())
}

/// A context, a term and the corner it was written for.
#[derive(Clone, Debug)]
pub struct Typed {
    pub corner: Corner,
    pub ctx: Ctx,
    pub term: Term,
}

const HAND_BANK: &[(&str, &str, &str)] = &[
    ("arrow", "A : *", r"\(x:A) -> x"),
    ("arrow", "A : *, B : *", r"\(x:A) -> \(y:B) -> x"),
    ("arrow", "A : *, B : *", "Pi (x:A) -> B"),
    ("arrow", "A : *, f : Pi (x:A) -> A, a : A", "f (f a)"),
    ("arrow", "A : *, B : *, f : Pi (x:A) -> B", r"\(a:A) -> f a"),
    ("arrow", "A : *", r"\(f : Pi (x:A) -> A) -> \(a:A) -> f (f a)"),
    ("arrow", "A : *, a : A", r"(\(x:A) -> x) a"),
    ("arrow", "A : *, B : *, C : *", r"\(f : Pi (y:B) -> C) -> \(g : Pi (x:A) -> B) -> \(x:A) -> f (g x)"),
    ("arrow", "A : *", "Pi (f : Pi (x:A) -> A) -> A"),
    ("arrow", "A : *, B : *, b : B", r"\(x:A) -> (\(y:B) -> y) b"),
    ("two", "", r"\(A:*) -> \(x:A) -> x"),
    ("two", "", "Pi (A:*) -> Pi (x:A) -> A"),
    ("two", "", "Pi (A:*) -> A"),
    ("two", "B : *, b : B", r"(\(A:*) -> \(x:A) -> x) B b"),
    ("two", "", r"(\(A:*) -> \(x:A) -> x) (Pi (A:*) -> Pi (x:A) -> A) (\(A:*) -> \(x:A) -> x)"),
    ("two", "", r"\(A:*) -> \(B:*) -> \(x:A) -> \(y:B) -> x"),
    ("two", "", "Pi (A:*) -> Pi (B:*) -> Pi (x:A) -> Pi (y:B) -> A"),
    ("two", "", r"\(A:*) -> \(f : Pi (x:A) -> A) -> \(x:A) -> f (f x)"),
    ("two", "N : *", r"\(n : Pi (A:*) -> Pi (f : Pi (x:A) -> A) -> Pi (x:A) -> A) -> n N"),
    ("two", "", r"\(x : Pi (A:*) -> A) -> x (Pi (A:*) -> A)"),
    ("P", "A : *", "Pi (x:A) -> *"),
    ("P", "A : *, Q : Pi (x:A) -> *", r"\(a:A) -> Q a"),
    ("P", "A : *, Q : Pi (x:A) -> *, a : A", "Q a"),
    ("P", "A : *, Q : Pi (x:A) -> *", "Pi (a:A) -> Q a"),
    ("P", "A : *, Q : Pi (x:A) -> *", r"\(a:A) -> \(p : Q a) -> p"),
    (
        "P",
        "A : *, Q : Pi (x:A) -> *, R : Pi (x:A) -> *, f : Pi (a:A) -> Pi (p : Q a) -> R a, a : A, q : Q a",
        "f a q",
    ),
    ("P", "A : *, a : A, Q : Pi (x:A) -> *", "Pi (p : Q a) -> Q a"),
    ("P", "A : *", "Pi (x:A) -> Pi (y:A) -> *"),
    ("P", "A : *, E : Pi (x:A) -> Pi (y:A) -> *, a : A", "E a a"),
    ("P", "A : *, E : Pi (x:A) -> Pi (y:A) -> *, r : Pi (a:A) -> E a a, a : A", "r a"),
    ("omega_u", "", r"\(A:*) -> A"),
    ("omega_u", "", "Pi (A:*) -> *"),
    ("omega_u", "B : *", r"(\(A:*) -> A) B"),
    ("omega_u", r"B : *, b : (\(A:*) -> A) B", "b"),
    ("omega_u", r"B : *, b : (\(A:*) -> A) B", r"\(x:B) -> b"),
    ("omega_u", "", r"\(F : Pi (A:*) -> *) -> \(A:*) -> F (F A)"),
    ("omega_u", "B : *", r"(\(F : Pi (A:*) -> *) -> \(A:*) -> F (F A)) (\(A:*) -> Pi (x:A) -> A) B"),
    ("omega_u", r"B : *, f : (\(A:*) -> Pi (x:A) -> A) B, b : B", "f b"),
    ("omega", "", r"\(A:*) -> \(B:*) -> Pi (C:*) -> Pi (f : Pi (x:A) -> Pi (y:B) -> C) -> C"),
    ("omega", "", r"\(F : Pi (A:*) -> *) -> \(A:*) -> \(x : F A) -> x"),
    ("omega", "", r"(\(A:*) -> \(x:A) -> x) ((\(A:*) -> A) (Pi (A:*) -> Pi (x:A) -> A))"),
    ("omega", "B : *, b : B", r"(\(A:*) -> \(x:A) -> x) ((\(A:*) -> A) B) b"),
    ("omega", "", "Pi (F : Pi (A:*) -> *) -> Pi (A:*) -> F A"),
    ("P2", "A : *, Q : Pi (x:A) -> *", r"\(B:*) -> \(q : Pi (a:A) -> Q a) -> q"),
    ("P2", "A : *", "Pi (P : Pi (x:A) -> *) -> Pi (a:A) -> P a"),
    ("P2", "A : *, a : A", r"\(P : Pi (x:A) -> *) -> \(p : P a) -> p"),
    ("P_omega", "A : *", r"\(F : Pi (x:A) -> *) -> \(a:A) -> F a"),
    ("P_omega", "A : *", r"\(a:A) -> \(T:*) -> T"),
    ("P_omega", "A : *, E : Pi (x:A) -> Pi (y:A) -> *", r"\(a:A) -> E a"),
    ("C", "", r"\(A:*) -> \(x:A) -> x"),
    ("C", "", "Pi (A:*) -> Pi (P : Pi (x:A) -> *) -> Pi (a:A) -> Pi (p : P a) -> P a"),
    ("C", "", r"\(A:*) -> \(a:A) -> \(b:A) -> Pi (P : Pi (x:A) -> *) -> Pi (p : P a) -> P b"),
    ("C", "A : *, a : A", r"\(P : Pi (x:A) -> *) -> \(p : P a) -> p"),
    ("C", "", r"(\(F : Pi (A:*) -> *) -> F) (\(A:*) -> A)"),
    ("C", "", r"\(A : *) -> (\(B:*) -> \(x:B) -> x) A"),
    ("C", "", "Pi (A:*) -> *"),
    (
        "C",
        "A : *, a : A",
        r"(\(A:*) -> \(a:A) -> \(b:A) -> Pi (P : Pi (x:A) -> *) -> Pi (p : P a) -> P b) A a a",
    ),
    ("C", "A : *, a : A", r"(\(P : Pi (x:A) -> *) -> \(p : P a) -> p) (\(x:A) -> A)"),
];

/// Hand-written well-typed terms, one entry per corner they were written
/// for, plus `[] ⊢ *` in every corner.
pub fn hand_bank() -> Vec<Typed> {
    let mut out: Vec<Typed> = HAND_BANK
        .iter()
        .map(|(c, g, m)| Typed {
            corner: c.parse().unwrap(),
            ctx: parse_ctx(g).unwrap_or_else(|e| panic!("{g}: {e}")),
            term: t(m),
        })
        .collect();
    for corner in Corner::ALL {
        out.push(Typed {
            corner,
            ctx: Ctx::new(),
            term: star(),
        });
    }
    out
}

/// Every corner whose rules include those of `c`.
pub fn supersets(c: Corner) -> Vec<Corner> {
    let rules = lambda_cube(c).rules().clone();
    Corner::ALL
        .into_iter()
        .filter(|d| rules.is_subset(lambda_cube(*d).rules()))
        .collect()
}

/// Well-typed terms found by random generation over a few fixed contexts,
/// deduplicated, in the richest corner.
pub fn generated_bank(seed: u64, wanted: usize) -> Vec<Typed> {
    let contexts = [
        "A : *, a : A, f : Pi (x:A) -> A",
        "A : *, Q : Pi (x:A) -> *, a : A, q : Q a",
        "F : Pi (A:*) -> *, B : *, b : B",
        "",
    ];
    let spec = lambda_cube(Corner::C);
    let mut r = rng(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let binders = names(&["x", "y", "z"]);
    let sorts = vec![Sort::star()];
    for attempt in 0..2_000_000usize {
        if out.len() >= wanted {
            break;
        }
        let ctx = parse_ctx(contexts[attempt % contexts.len()]).unwrap();
        let mut atoms = ctx.dom();
        atoms.extend(binders.iter().cloned());
        let size = r.gen_range(3..=13);
        let m = random_typed_candidate(&mut r, size, &atoms, &binders, &sorts);
        if !seen.insert((attempt % contexts.len(), m.clone())) {
            continue;
        }
        if let Ok(ty) = infer(&spec, &ctx, &m, FUEL) {
            if ty != boxed() || r.gen_bool(0.1) {
                out.push(Typed {
                    corner: Corner::C,
                    ctx,
                    term: m,
                });
            }
        }
    }
    out
}

fn random_typed_candidate(
    r: &mut ChaCha8Rng,
    size: usize,
    atoms: &[Var],
    binders: &[Var],
    sorts: &[Sort],
) -> Term {
    if size < 3 || r.gen_bool(0.2) {
        return if r.gen_bool(0.85) {
            Term::Var(atoms.choose(r).unwrap().clone())
        } else {
            Term::Const(sorts.choose(r).unwrap().clone())
        };
    }
    let rest = size - 1;
    let left = r.gen_range(1..rest);
    let right = rest - left;
    let x = binders.choose(r).unwrap().clone();
    // binder domains are kept small so that the body has a chance to type
    match r.gen_range(0..10) {
        0..=4 => Term::app(
            random_typed_candidate(r, left, atoms, binders, sorts),
            random_typed_candidate(r, right, atoms, binders, sorts),
        ),
        5..=7 => Term::lam(
            x,
            random_typed_candidate(r, left.min(3), atoms, binders, sorts),
            random_typed_candidate(r, right, atoms, binders, sorts),
        ),
        _ => Term::pi(
            x,
            random_typed_candidate(r, left.min(3), atoms, binders, sorts),
            random_typed_candidate(r, right, atoms, binders, sorts),
        ),
    }
}

fn conv_yes(a: &Term, b: &Term, what: &str) -> Result<(), String> {
    match beta_conv(a, b, FUEL) {
        Conv::Yes => Ok(()),
        Conv::No => Err(format!("{what}: `{a}` and `{b}` are not convertible")),
        Conv::Unknown => Err(format!("{what}: unknown verdict for `{a}` and `{b}`")),
    }
}

fn infer_ok(spec: &PtsSpec, ctx: &Ctx, m: &Term, what: &str) -> Result<Term, String> {
    infer(spec, ctx, m, FUEL).map_err(|e| format!("{what}: [{ctx}] |- {m} failed: {e}"))
}

fn sort_of(spec: &PtsSpec, ctx: &Ctx, a: &Term, what: &str) -> Result<Sort, String> {
    let ty = infer_ok(spec, ctx, a, what)?;
    match pts_core::beta::whnf(&ty, FUEL).0 {
        Term::Const(s) => Ok(s),
        other => Err(format!("{what}: `{a}` has non-sort type `{other}`")),
    }
}

/// Name not in `dom ctx` and not free in any of `terms`.
fn fresh_for(ctx: &Ctx, terms: &[&Term]) -> Var {
    let mut avoid = ctx.dom();
    for t in terms {
        avoid.extend(fv(t));
    }
    chi_var(&avoid)
}

/// Candidate arguments for cut: variables of the context and a few closed
/// or near-closed terms built from them.
fn cut_candidates(ctx: &Ctx) -> Vec<Term> {
    let mut out: Vec<Term> = ctx.dom().into_iter().map(Term::Var).collect();
    out.push(star());
    for (x, a) in ctx.iter() {
        if *a == star() {
            out.push(Term::pi(var("w"), Term::Var(x.clone()), Term::Var(x.clone())));
            out.push(Term::lam(var("w"), Term::Var(x.clone()), Term::Var(var("w"))));
        }
    }
    out
}

/// Counts of properties exercised with a non-vacuous premise.
#[derive(Default, Debug, Clone, Copy)]
pub struct Tally {
    pub thinning: usize,
    pub validity: usize,
    pub valid_decl: usize,
    pub alpha: usize,
    pub substitution: usize,
    pub cut: usize,
    pub unary_ren: usize,
    pub fresh: usize,
    pub gen_prod: usize,
}

/// The typing metatheory for one well-typed `ctx ⊢ m` in `spec`.
pub fn typing_props(spec: &PtsSpec, ctx: &Ctx, m: &Term, seed: u64, tally: &mut Tally) -> Result<(), String> {
    let a = infer_ok(spec, ctx, m, "subject")?;
    let mut r = rng(seed);

    // freshness: every free name of M and A is declared
    for x in fv(m).iter().chain(fv(&a).iter()) {
        if !ctx.in_dom(x) {
            return Err(format!("fvAsg: `{x}` free in [{ctx}] |- {m} : {a}"));
        }
    }
    tally.fresh += 1;

    // syntactic validity
    if a.as_sort().is_none() {
        sort_of(spec, ctx, &a, "syntacticValidity")?;
    }
    tally.validity += 1;

    // validDecl
    for (_, d) in ctx.iter() {
        sort_of(spec, ctx, d, "validDecl")?;
        tally.valid_decl += 1;
    }

    // genProd, on the subject and on its type
    for p in [m, &a] {
        if let Term::Pi(x, dom, cod) = p {
            let whole = infer_ok(spec, ctx, p, "genProd")?;
            let s1 = sort_of(spec, ctx, dom, "genProd domain")?;
            let y = fresh_for(ctx, &[cod]);
            let inner = ctx.extend(y.clone(), (**dom).clone());
            let s2 = sort_of(spec, &inner, &subst1(cod, x, &Term::Var(y)), "genProd codomain")?;
            let s3 = spec
                .rule_of(&s1, &s2)
                .ok_or_else(|| format!("genProd: no rule ({s1}, {s2}) for `{p}`"))?;
            if whole != Term::Const(s3.clone()) || !spec.has_rule(&s1, &s2, s3) {
                return Err(format!("genProd: `{p}` has type `{whole}`, rule gives {s3}"));
            }
            tally.gen_prod += 1;
        }
    }

    // thinning: a fresh declaration at the front and at the back
    let w = fresh_for(ctx, &[m, &a]);
    let mut front = vec![(w.clone(), star())];
    front.extend(ctx.decls().iter().cloned());
    let mut back = ctx.decls().to_vec();
    back.push((w.clone(), ctx.decls().last().map_or(star(), |(_, d)| d.clone())));
    for bigger in [Ctx::from_decls(front), Ctx::from_decls(back)] {
        if well_formed(spec, &bigger, FUEL).is_err() {
            continue;
        }
        let a2 = infer_ok(spec, &bigger, m, "thinning")?;
        if !alpha_eq(&a, &a2) {
            return Err(format!("thinning: `{a}` became `{a2}` under [{bigger}]"));
        }
        tally.thinning += 1;
    }

    // closure under alpha
    let pool = names(&["x", "y", "z", "x0", "x1", "x2", "w"]);
    let m2 = alpha_variant(&mut r, m, &pool);
    let ctx2 = Ctx::from_decls(
        ctx.iter()
            .map(|(x, d)| (x.clone(), alpha_variant(&mut r, d, &pool)))
            .collect(),
    );
    let a2 = infer_ok(spec, &ctx2, &m2, "closAlpha")?;
    if !alpha_eq(&a, &a2) {
        return Err(format!("closAlpha: `{a}` vs `{a2}` for `{m2}`"));
    }
    tally.alpha += 1;

    // closure under substitution: identity and a full renaming
    let mut subs = vec![(Sub::identity(), ctx_apply(ctx, &Sub::identity()))];
    let renaming = Sub::from_pairs(
        ctx.dom()
            .into_iter()
            .map(|x| (x.clone(), Term::Var(var(&format!("{}_r", x.name()))))),
    );
    subs.push((renaming.clone(), Ctx::from_decls(
        ctx.iter()
            .map(|(x, d)| (var(&format!("{}_r", x.name())), apply(d, &renaming)))
            .collect(),
    )));
    if let Some(((x, d), prefix)) = ctx.decls().split_last() {
        let prefix = Ctx::from_decls(prefix.to_vec());
        let pi = ctx_apply(&prefix, &Sub::identity());
        // cut and unaryRen at the innermost declaration
        for n in cut_candidates(&prefix) {
            let Ok(nt) = infer(spec, &prefix, &n, FUEL) else { continue };
            if beta_conv(&nt, d, FUEL) != Conv::Yes {
                continue;
            }
            // `(ι, x := N) : Γ, x : A ⇀ Γ ∙∙ ι`
            subs.push((Sub::identity().update(x.clone(), n.clone()), pi.clone()));
            let got = infer_ok(spec, &prefix, &subst1(m, x, &n), "cut")?;
            conv_yes(&got, &subst1(&a, x, &n), "cut")?;
            tally.cut += 1;
        }
        let y = fresh_for(ctx, &[m, &a]);
        let renamed = prefix.extend(y.clone(), d.clone());
        let yv = Term::Var(y);
        let got = infer_ok(spec, &renamed, &subst1(m, x, &yv), "unaryRen")?;
        conv_yes(&got, &subst1(&a, x, &yv), "unaryRen")?;
        tally.unary_ren += 1;
    }
    for (s, delta) in subs {
        subst_wt(spec, &s, ctx, &delta, FUEL).map_err(|e| format!("substitution typing {s:?}: {e}"))?;
        well_formed(spec, &delta, FUEL).map_err(|e| format!("target context [{delta}]: {e}"))?;
        let got = infer_ok(spec, &delta, &apply(m, &s), "closureSub")?;
        conv_yes(&got, &apply(&a, &s), "closureSub")?;
        tally.substitution += 1;
    }
    Ok(())
}

pub fn arb_var(pool: &'static [&'static str]) -> impl Strategy<Value = Var> {
    proptest::sample::select(pool).prop_map(var)
}

/// Terms over the given names and the two cube sorts, up to roughly
/// `nodes` constructors.
pub fn arb_term(pool: &'static [&'static str], nodes: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => arb_var(pool).prop_map(Term::Var),
        1 => Just(star()),
        1 => Just(boxed()),
    ];
    leaf.prop_recursive(6, nodes, 2, move |inner| {
        prop_oneof![
            2 => (inner.clone(), inner.clone()).prop_map(|(m, n)| Term::app(m, n)),
            1 => (arb_var(pool), inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(x, a, m, n)| Term::app(Term::lam(x, a, m), n)),
            2 => (arb_var(pool), inner.clone(), inner.clone()).prop_map(|(x, a, m)| Term::lam(x, a, m)),
            1 => (arb_var(pool), inner.clone(), inner).prop_map(|(x, a, b)| Term::pi(x, a, b)),
        ]
    })
}

pub fn arb_sub(pool: &'static [&'static str]) -> impl Strategy<Value = Sub> {
    proptest::collection::vec((arb_var(pool), arb_term(pool, 6)), 0..4).prop_map(Sub::from_pairs)
}

pub const POOL: &[&str] = &["x0", "x1", "x2", "y", "z"];

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn arb_renaming(pool: &'static [&'static str]) -> impl Strategy<Value = Sub> {
    proptest::collection::vec((arb_var(pool), arb_var(pool)), 0..4)
        .prop_map(|ps| Sub::from_pairs(ps.into_iter().map(|(x, y)| (x, Term::Var(y)))))
}

/// `[A : *] ⊢ λ[x : A] x : Π[x : A] A` built by hand, premises at the fresh
/// name `z`.
pub fn arrow_identity_tree(spec_ctx: &Ctx) -> Derivation {
    let a = v("A");
    let gamma = spec_ctx.clone();
    let inner = gamma.extend(var("z"), a.clone());
    let ok_gamma = CtxDerivation::Cons {
        ctx: Ctx::new(),
        var: var("A"),
        ty: star(),
        sort: Sort::boxed(),
        ok: Box::new(CtxDerivation::Nil),
        ty_deriv: Box::new(Derivation::Sort {
            ctx: Ctx::new(),
            sort: Sort::star(),
            sort_ty: Sort::boxed(),
            ok: Box::new(CtxDerivation::Nil),
        }),
    };
    let a_in_gamma = Derivation::Var {
        ctx: gamma.clone(),
        var: var("A"),
        ty: star(),
        ok: Box::new(ok_gamma.clone()),
    };
    let ok_inner = CtxDerivation::Cons {
        ctx: gamma.clone(),
        var: var("z"),
        ty: a.clone(),
        sort: Sort::star(),
        ok: Box::new(ok_gamma),
        ty_deriv: Box::new(a_in_gamma.clone()),
    };
    Derivation::Abs {
        ctx: gamma,
        var: var("x"),
        ty_var: var("x"),
        fresh: var("z"),
        domain: a.clone(),
        body: v("x"),
        body_ty: a.clone(),
        sorts: (Sort::star(), Sort::star(), Sort::star()),
        domain_deriv: Box::new(a_in_gamma),
        body_ty_deriv: Box::new(Derivation::Var {
            ctx: inner.clone(),
            var: var("A"),
            ty: star(),
            ok: Box::new(ok_inner.clone()),
        }),
        body_deriv: Box::new(Derivation::Var {
            ctx: inner,
            var: var("z"),
            ty: a,
            ok: Box::new(ok_inner),
        }),
    }
}
