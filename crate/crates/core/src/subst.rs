//! Multiple substitution that renames every binder it crosses.
//!
//! Applying a substitution renames every binder it passes through to the
//! first name that is fresh for the images of the binder's scope, so the
//! operation is structurally recursive and capture-avoiding without any case
//! analysis on bound names.

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{decode, delete, encode, fv, member, Term, Var, VarList};

/// Least natural number not in `ns`.
pub fn chi_nat(ns: &[u64]) -> u64 {
    let mut seen = vec![false; ns.len() + 1];
    for &n in ns {
        if let Some(slot) = usize::try_from(n).ok().and_then(|i| seen.get_mut(i)) {
            *slot = true;
        }
    }
    seen.iter().position(|s| !s).unwrap() as u64
}

/// A variable not in `xs`, obtained through the `encode`/`decode` numbering.
pub fn chi_var(xs: &[Var]) -> Var {
    let codes: Vec<u64> = xs.iter().map(encode).collect();
    decode(chi_nat(&codes))
}

/// A total map from variables to terms with finite support; variables
/// outside the support map to themselves.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Sub {
    support: BTreeMap<Var, Term>,
}

impl Sub {
    /// The identity substitution.
    pub fn identity() -> Sub {
        Sub::default()
    }

    pub fn get(&self, x: &Var) -> Term {
        self.support
            .get(x)
            .cloned()
            .unwrap_or_else(|| Term::Var(x.clone()))
    }

    /// `(σ, x := N)`: maps `x` to `N` and agrees with `self` elsewhere.
    pub fn update(&self, x: Var, image: Term) -> Sub {
        let mut support = self.support.clone();
        support.insert(x, image);
        Sub { support }
    }

    /// Variables with an explicit entry. Entries may be trivial (`x ↦ x`).
    pub fn support(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.support.iter()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Term)>>(pairs: I) -> Sub {
        Sub {
            support: pairs.into_iter().collect(),
        }
    }

    /// `σ ⊙ σ'`: the substitution `x ↦ σ'(x) ∙ σ`.
    pub fn compose(&self, inner: &Sub) -> Sub {
        let mut support = BTreeMap::new();
        for x in self.support.keys().chain(inner.support.keys()) {
            if !support.contains_key(x) {
                support.insert(x.clone(), apply(&inner.get(x), self));
            }
        }
        Sub { support }
    }
}

impl fmt::Debug for Sub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, t)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} := {t}")?;
        }
        f.write_str("]")
    }
}

/// Free function form of [`Sub::update`].
pub fn update(sigma: &Sub, x: Var, image: Term) -> Sub {
    sigma.update(x, image)
}

/// Free function form of [`Sub::compose`]: `compose(σ, σ')` is `σ ⊙ σ'`.
pub fn compose(sigma: &Sub, inner: &Sub) -> Sub {
    sigma.compose(inner)
}

/// A substitution confined to a list of variables.
#[derive(Clone, Debug)]
pub struct Res {
    pub sub: Sub,
    pub scope: VarList,
}

impl Res {
    pub fn new(sub: Sub, scope: VarList) -> Res {
        Res { sub, scope }
    }
}

/// The names that occur free in the images of `scope` under `sigma`.
pub fn image_fv(sigma: &Sub, scope: &[Var]) -> VarList {
    scope.iter().flat_map(|z| fv(&sigma.get(z))).collect()
}

/// First variable fresh for every image of the restriction.
pub fn chi_res(r: &Res) -> Var {
    chi_var(&image_fv(&r.sub, &r.scope))
}

fn fresh_binder(sigma: &Sub, x: &Var, body: &Term) -> Var {
    let scope = delete(&fv(body), x);
    chi_var(&image_fv(sigma, &scope))
}

/// `M ∙ σ`.
pub fn apply(term: &Term, sigma: &Sub) -> Term {
    match term {
        Term::Const(_) => term.clone(),
        Term::Var(x) => sigma.get(x),
        Term::App(m, n) => Term::app(apply(m, sigma), apply(n, sigma)),
        Term::Lam(x, a, m) => {
            let y = fresh_binder(sigma, x, m);
            let body = apply(m, &sigma.update(x.clone(), Term::Var(y.clone())));
            Term::lam(y, apply(a, sigma), body)
        }
        Term::Pi(x, a, b) => {
            let y = fresh_binder(sigma, x, b);
            let body = apply(b, &sigma.update(x.clone(), Term::Var(y.clone())));
            Term::pi(y, apply(a, sigma), body)
        }
    }
}

/// `M[x := N]`, i.e. `M ∙ (ι, x := N)`. Renames every binder of `M`, even
/// when `x` does not occur.
pub fn subst1(term: &Term, x: &Var, image: &Term) -> Term {
    apply(term, &Sub::identity().update(x.clone(), image.clone()))
}

/// Equality on restrictions: mutual inclusion of the scopes and identical
/// images on the first scope.
pub fn res_eq(r: &Res, other: &Res) -> bool {
    let included = |xs: &[Var], ys: &[Var]| xs.iter().all(|x| member(x, ys));
    included(&r.scope, &other.scope)
        && included(&other.scope, &r.scope)
        && r.scope.iter().all(|x| r.sub.get(x) == other.sub.get(x))
}

/// `x #⇂ (σ, xs)`: `x` is fresh for the image of every variable in scope.
pub fn fresh_for_res(x: &Var, r: &Res) -> bool {
    r.scope
        .iter()
        .all(|z| crate::syntax::is_fresh(x, &r.sub.get(z)))
}

/// `x $*⇂ (σ, xs)`: `x` is free in the image of some variable in scope.
pub fn free_in_res(x: &Var, r: &Res) -> bool {
    !fresh_for_res(x, r)
}
