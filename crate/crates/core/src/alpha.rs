//! Alpha-conversion.
//!
//! [`alpha_eq`] is the decision procedure used everywhere else: two terms are
//! alpha-convertible exactly when their identity-substitution normal forms
//! are identical. [`alpha_structural`] follows the inductive rules directly
//! and exists to cross-check the decision procedure.

use crate::subst::{apply, chi_var, subst1, Sub};
use crate::syntax::{delete, fv, member, Term, Var};
use crate::typing::Ctx;

/// Decides `M ∼α N` by comparing `M ∙ ι` with `N ∙ ι`.
pub fn alpha_eq(m: &Term, n: &Term) -> bool {
    // fast path; identical terms are trivially convertible
    m == n || apply(m, &Sub::identity()) == apply(n, &Sub::identity())
}

/// The premise used for binder bodies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Bodies renamed to a common fresh name must be syntactically identical.
    Syntactic,
    /// Bodies renamed to a common fresh name must be related recursively.
    Recursive,
}

/// The default witness for the binder rule: first name avoiding both bodies
/// and both binders.
pub fn default_witness(avoid: &[Var]) -> Var {
    chi_var(avoid)
}

/// Checks `M ∼α N` (or `M ∼αₛ N`) by following the inductive rules.
pub fn alpha_structural(m: &Term, n: &Term, flavor: Flavor) -> bool {
    alpha_structural_by(m, n, flavor, &default_witness)
}

/// As [`alpha_structural`] with a caller-supplied witness choice. The chooser
/// receives `fv M' ++ fv M ++ [x, x']` for the two bodies and must return a
/// name outside that list.
pub fn alpha_structural_by(
    m: &Term,
    n: &Term,
    flavor: Flavor,
    choose: &dyn Fn(&[Var]) -> Var,
) -> bool {
    match (m, n) {
        (Term::Const(k), Term::Const(k2)) => k == k2,
        (Term::Var(x), Term::Var(y)) => x == y,
        (Term::App(m1, n1), Term::App(m2, n2)) => {
            alpha_structural_by(m1, m2, flavor, choose) && alpha_structural_by(n1, n2, flavor, choose)
        }
        (Term::Lam(x, a, body), Term::Lam(x2, a2, body2))
        | (Term::Pi(x, a, body), Term::Pi(x2, a2, body2)) => {
            if !alpha_structural_by(a, a2, flavor, choose) {
                return false;
            }
            let mut avoid = fv(body2);
            avoid.extend(fv(body));
            avoid.push(x.clone());
            avoid.push(x2.clone());
            let y = choose(&avoid);
            debug_assert!(!member(&y, &delete(&fv(body), x)));
            debug_assert!(!member(&y, &delete(&fv(body2), x2)));
            let left = subst1(body, x, &Term::Var(y.clone()));
            let right = subst1(body2, x2, &Term::Var(y));
            match flavor {
                Flavor::Syntactic => left == right,
                Flavor::Recursive => alpha_structural_by(&left, &right, flavor, choose),
            }
        }
        _ => false,
    }
}

/// `σ ∼α σ' ⇂ xs`.
pub fn sub_alpha_eq(sigma: &Sub, other: &Sub, xs: &[Var]) -> bool {
    xs.iter().all(|x| alpha_eq(&sigma.get(x), &other.get(x)))
}

/// `Γ ≈α Δ`: same variables in the same order with alpha-convertible types.
pub fn ctx_alpha_eq(gamma: &Ctx, delta: &Ctx) -> bool {
    gamma.len() == delta.len()
        && gamma
            .iter()
            .zip(delta.iter())
            .all(|((x, a), (y, b))| x == y && alpha_eq(a, b))
}
