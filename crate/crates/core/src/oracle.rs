//! Brute-force references for cross-checking the kernel.
//!
//! Nothing here calls into `subst`, `alpha` or `beta`: alpha-equivalence is
//! decided on a nameless representation, unary substitution follows the
//! textbook definition that renames only when capture threatens, and
//! one-step reduction is recomputed with index shifting.

use std::collections::HashSet;

use crate::syntax::{Sort, Term, Var};

/// Nameless mirror of [`Term`]. Bound occurrences become indices counting
/// enclosing binders outward; free occurrences keep their names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DbTerm {
    Const(Sort),
    Bound(usize),
    Free(Var),
    Lam(Box<DbTerm>, Box<DbTerm>),
    Pi(Box<DbTerm>, Box<DbTerm>),
    App(Box<DbTerm>, Box<DbTerm>),
}

pub fn to_debruijn(term: &Term) -> DbTerm {
    fn go(t: &Term, env: &mut Vec<Var>) -> DbTerm {
        match t {
            Term::Const(s) => DbTerm::Const(s.clone()),
            Term::Var(x) => match env.iter().rev().position(|y| y == x) {
                Some(k) => DbTerm::Bound(k),
                None => DbTerm::Free(x.clone()),
            },
            Term::Lam(x, a, m) | Term::Pi(x, a, m) => {
                let a = go(a, env);
                env.push(x.clone());
                let m = go(m, env);
                env.pop();
                if matches!(t, Term::Lam(..)) {
                    DbTerm::Lam(Box::new(a), Box::new(m))
                } else {
                    DbTerm::Pi(Box::new(a), Box::new(m))
                }
            }
            Term::App(m, n) => DbTerm::App(Box::new(go(m, env)), Box::new(go(n, env))),
        }
    }
    go(term, &mut Vec::new())
}

fn free_names(t: &Term) -> HashSet<Var> {
    fn go(t: &Term, bound: &mut Vec<Var>, out: &mut HashSet<Var>) {
        match t {
            Term::Const(_) => {}
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, a, m) | Term::Pi(x, a, m) => {
                go(a, bound, out);
                bound.push(x.clone());
                go(m, bound, out);
                bound.pop();
            }
            Term::App(m, n) => {
                go(m, bound, out);
                go(n, bound, out);
            }
        }
    }
    let mut out = HashSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// `base_0`, `base_1`, ... : the first such name outside `avoid`.
fn prime(base: &Var, avoid: &HashSet<Var>) -> Var {
    (0..)
        .map(|k| Var::new(&format!("{}_{k}", base.name())))
        .find(|v| !avoid.contains(v))
        .unwrap()
}

/// Textbook capture-avoiding `M[x := N]`. Binders are kept unless they
/// would capture a free name of `N`, in which case only that binder is
/// renamed before descending.
pub fn naive_subst(m: &Term, x: &Var, n: &Term) -> Term {
    match m {
        Term::Const(_) => m.clone(),
        Term::Var(y) if y == x => n.clone(),
        Term::Var(_) => m.clone(),
        Term::App(p, q) => Term::app(naive_subst(p, x, n), naive_subst(q, x, n)),
        Term::Lam(y, a, body) | Term::Pi(y, a, body) => {
            let rebuild = |y: Var, a: Term, b: Term| {
                if matches!(m, Term::Lam(..)) {
                    Term::lam(y, a, b)
                } else {
                    Term::pi(y, a, b)
                }
            };
            let a2 = naive_subst(a, x, n);
            let body_free = free_names(body);
            if y == x || !body_free.contains(x) {
                return rebuild(y.clone(), a2, (**body).clone());
            }
            let n_free = free_names(n);
            if !n_free.contains(y) {
                return rebuild(y.clone(), a2, naive_subst(body, x, n));
            }
            let mut avoid = n_free;
            avoid.extend(body_free);
            avoid.insert(x.clone());
            let z = prime(y, &avoid);
            let renamed = naive_subst(body, y, &Term::Var(z.clone()));
            rebuild(z, a2, naive_subst(&renamed, x, n))
        }
    }
}

/// Adds `d` to every index at or above `cutoff`.
fn shift(t: &DbTerm, d: isize, cutoff: usize) -> DbTerm {
    match t {
        DbTerm::Const(_) | DbTerm::Free(_) => t.clone(),
        DbTerm::Bound(k) if *k >= cutoff => DbTerm::Bound((*k as isize + d) as usize),
        DbTerm::Bound(_) => t.clone(),
        DbTerm::Lam(a, m) => DbTerm::Lam(Box::new(shift(a, d, cutoff)), Box::new(shift(m, d, cutoff + 1))),
        DbTerm::Pi(a, m) => DbTerm::Pi(Box::new(shift(a, d, cutoff)), Box::new(shift(m, d, cutoff + 1))),
        DbTerm::App(m, n) => DbTerm::App(Box::new(shift(m, d, cutoff)), Box::new(shift(n, d, cutoff))),
    }
}

/// Replaces index `j` with `s`, leaving the other indices alone.
fn db_subst(t: &DbTerm, j: usize, s: &DbTerm) -> DbTerm {
    match t {
        DbTerm::Const(_) | DbTerm::Free(_) => t.clone(),
        DbTerm::Bound(k) if *k == j => s.clone(),
        DbTerm::Bound(_) => t.clone(),
        DbTerm::Lam(a, m) => DbTerm::Lam(
            Box::new(db_subst(a, j, s)),
            Box::new(db_subst(m, j + 1, &shift(s, 1, 0))),
        ),
        DbTerm::Pi(a, m) => DbTerm::Pi(
            Box::new(db_subst(a, j, s)),
            Box::new(db_subst(m, j + 1, &shift(s, 1, 0))),
        ),
        DbTerm::App(m, n) => DbTerm::App(Box::new(db_subst(m, j, s)), Box::new(db_subst(n, j, s))),
    }
}

fn db_contract(body: &DbTerm, arg: &DbTerm) -> DbTerm {
    shift(&db_subst(body, 0, &shift(arg, 1, 0)), -1, 0)
}

/// Every one-step successor, computed without names.
pub fn db_reducts(t: &DbTerm) -> Vec<DbTerm> {
    let mut out = Vec::new();
    match t {
        DbTerm::Const(_) | DbTerm::Bound(_) | DbTerm::Free(_) => {}
        DbTerm::Lam(a, m) | DbTerm::Pi(a, m) => {
            let wrap = |a: DbTerm, m: DbTerm| {
                if matches!(t, DbTerm::Lam(..)) {
                    DbTerm::Lam(Box::new(a), Box::new(m))
                } else {
                    DbTerm::Pi(Box::new(a), Box::new(m))
                }
            };
            for a2 in db_reducts(a) {
                out.push(wrap(a2, (**m).clone()));
            }
            for m2 in db_reducts(m) {
                out.push(wrap((**a).clone(), m2));
            }
        }
        DbTerm::App(f, n) => {
            if let DbTerm::Lam(_, body) = &**f {
                out.push(db_contract(body, n));
            }
            for f2 in db_reducts(f) {
                out.push(DbTerm::App(Box::new(f2), n.clone()));
            }
            for n2 in db_reducts(n) {
                out.push(DbTerm::App(f.clone(), Box::new(n2)));
            }
        }
    }
    out
}

pub fn oracle_reducts(term: &Term) -> Vec<DbTerm> {
    db_reducts(&to_debruijn(term))
}

/// All terms of exactly `size` nodes over the given atoms, in a fixed order.
/// Binder names range over `vars`.
pub fn terms_of_size(size: usize, vars: &[Var], sorts: &[Sort]) -> Vec<Term> {
    let mut table: Vec<Vec<Term>> = Vec::with_capacity(size + 1);
    for n in 0..=size {
        let row = build_row(n, &table, vars, sorts);
        table.push(row);
    }
    table.pop().unwrap_or_default()
}

fn build_row(n: usize, table: &[Vec<Term>], vars: &[Var], sorts: &[Sort]) -> Vec<Term> {
    let mut row = Vec::new();
    if n == 1 {
        row.extend(sorts.iter().cloned().map(Term::Const));
        row.extend(vars.iter().cloned().map(Term::Var));
    }
    if n < 3 {
        return row;
    }
    let pairs = || (1..n - 1).flat_map(move |i| table[i].iter().flat_map(move |l| table[n - 1 - i].iter().map(move |r| (l, r))));
    for (l, r) in pairs() {
        row.push(Term::app(l.clone(), r.clone()));
    }
    for x in vars {
        for (l, r) in pairs() {
            row.push(Term::lam(x.clone(), l.clone(), r.clone()));
        }
    }
    for x in vars {
        for (l, r) in pairs() {
            row.push(Term::pi(x.clone(), l.clone(), r.clone()));
        }
    }
    row
}

/// Every term of at most `max_size` nodes, smallest first, each once.
pub fn enum_terms(max_size: usize, vars: &[Var], sorts: &[Sort]) -> Vec<Term> {
    let mut table: Vec<Vec<Term>> = Vec::with_capacity(max_size + 1);
    for n in 0..=max_size {
        let row = build_row(n, &table, vars, sorts);
        table.push(row);
    }
    table.into_iter().flatten().collect()
}
