//! Pure Type Systems: instance specifications, contexts, a checker for
//! finitary derivation trees and a type synthesizer for functional
//! instances.
//!
//! The two faces are independent. [`check_deriv`] validates any derivation
//! node by node against an arbitrary instance, deciding conversion only
//! through explicit certificates. [`infer`] reads the rules syntax-directedly,
//! choosing one canonical fresh name for every binder premise, and decides
//! conversion by normalization. [`derive`] turns a successful synthesis into
//! a derivation tree that [`check_deriv`] can validate.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::beta::{beta_conv, check_certificate, whnf_traced, Conv, ConvCertificate, Outcome};
use crate::subst::{apply, chi_var, subst1, Sub};
use crate::syntax::{delete, fv, member, Sort, Term, Var, VarList};

/// A PTS instance: sorts, axioms `𝒜 s₁ s₂` and rules `ℛ s₁ s₂ s₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtsSpec {
    sorts: BTreeSet<Sort>,
    axioms: BTreeSet<(Sort, Sort)>,
    rules: BTreeSet<(Sort, Sort, Sort)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("sort {0} is used but not declared")]
    UndeclaredSort(Sort),
    #[error("the instance declares no sorts")]
    NoSorts,
}

impl PtsSpec {
    pub fn new(
        sorts: impl IntoIterator<Item = Sort>,
        axioms: impl IntoIterator<Item = (Sort, Sort)>,
        rules: impl IntoIterator<Item = (Sort, Sort, Sort)>,
    ) -> Result<PtsSpec, SpecError> {
        let spec = PtsSpec {
            sorts: sorts.into_iter().collect(),
            axioms: axioms.into_iter().collect(),
            rules: rules.into_iter().collect(),
        };
        let mentioned = spec
            .axioms
            .iter()
            .flat_map(|(a, b)| [a, b])
            .chain(spec.rules.iter().flat_map(|(a, b, c)| [a, b, c]));
        for s in mentioned {
            if !spec.sorts.contains(s) {
                return Err(SpecError::UndeclaredSort(s.clone()));
            }
        }
        if spec.sorts.is_empty() {
            return Err(SpecError::NoSorts);
        }
        Ok(spec)
    }

    pub fn sorts(&self) -> &BTreeSet<Sort> {
        &self.sorts
    }

    pub fn axioms(&self) -> &BTreeSet<(Sort, Sort)> {
        &self.axioms
    }

    pub fn rules(&self) -> &BTreeSet<(Sort, Sort, Sort)> {
        &self.rules
    }

    pub fn has_axiom(&self, s1: &Sort, s2: &Sort) -> bool {
        self.axioms.contains(&(s1.clone(), s2.clone()))
    }

    pub fn has_rule(&self, s1: &Sort, s2: &Sort, s3: &Sort) -> bool {
        self.rules.contains(&(s1.clone(), s2.clone(), s3.clone()))
    }

    /// True when axioms and rules are partial functions of their leading
    /// sorts.
    pub fn is_functional(&self) -> bool {
        let axioms: BTreeSet<&Sort> = self.axioms.iter().map(|(a, _)| a).collect();
        let rules: BTreeSet<(&Sort, &Sort)> = self.rules.iter().map(|(a, b, _)| (a, b)).collect();
        axioms.len() == self.axioms.len() && rules.len() == self.rules.len()
    }

    /// The unique `s₂` with `𝒜 s s₂`, for functional instances.
    pub fn axiom_of(&self, s: &Sort) -> Option<&Sort> {
        self.axioms.iter().find(|(a, _)| a == s).map(|(_, b)| b)
    }

    /// The unique `s₃` with `ℛ s₁ s₂ s₃`, for functional instances.
    pub fn rule_of(&self, s1: &Sort, s2: &Sort) -> Option<&Sort> {
        self.rules
            .iter()
            .find(|(a, b, _)| a == s1 && b == s2)
            .map(|(_, _, c)| c)
    }
}

/// The eight corners of the lambda cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    Arrow,
    Two,
    P,
    Omega,
    OmegaU,
    P2,
    POmega,
    C,
}

impl Corner {
    pub const ALL: [Corner; 8] = [
        Corner::Arrow,
        Corner::Two,
        Corner::P,
        Corner::Omega,
        Corner::OmegaU,
        Corner::P2,
        Corner::POmega,
        Corner::C,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Corner::Arrow => "arrow",
            Corner::Two => "two",
            Corner::P => "P",
            Corner::Omega => "omega",
            Corner::OmegaU => "omega_u",
            Corner::P2 => "P2",
            Corner::POmega => "P_omega",
            Corner::C => "C",
        }
    }

    /// Which of the three non-base rules the corner admits, as
    /// `(terms on types, types on types, types on terms)`: `(#,*)`, `(#,#)`,
    /// `(*,#)`.
    fn features(self) -> (bool, bool, bool) {
        match self {
            Corner::Arrow => (false, false, false),
            Corner::Two => (true, false, false),
            Corner::P => (false, false, true),
            Corner::OmegaU => (false, true, false),
            Corner::Omega => (true, true, false),
            Corner::P2 => (true, false, true),
            Corner::POmega => (false, true, true),
            Corner::C => (true, true, true),
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown lambda cube corner `{0}`")]
pub struct UnknownCorner(pub String);

impl FromStr for Corner {
    type Err = UnknownCorner;

    fn from_str(s: &str) -> Result<Corner, UnknownCorner> {
        Corner::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| UnknownCorner(s.to_string()))
    }
}

pub fn lambda_cube(corner: Corner) -> PtsSpec {
    let (star, boxed) = (Sort::star(), Sort::boxed());
    let (poly, oper, dep) = corner.features();
    let mut rules = vec![(star.clone(), star.clone(), star.clone())];
    if poly {
        rules.push((boxed.clone(), star.clone(), star.clone()));
    }
    if oper {
        rules.push((boxed.clone(), boxed.clone(), boxed.clone()));
    }
    if dep {
        rules.push((star.clone(), boxed.clone(), boxed.clone()));
    }
    PtsSpec::new(
        [star.clone(), boxed.clone()],
        [(star, boxed)],
        rules,
    )
    .expect("cube corners are closed over their sorts")
}

/// An ordered list of declarations, innermost last.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Ctx {
    decls: Vec<(Var, Term)>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn from_decls(decls: Vec<(Var, Term)>) -> Ctx {
        Ctx { decls }
    }

    pub fn decls(&self) -> &[(Var, Term)] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, Term)> {
        self.decls.iter()
    }

    pub fn dom(&self) -> VarList {
        self.decls.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn in_dom(&self, x: &Var) -> bool {
        self.decls.iter().any(|(y, _)| y == x)
    }

    /// The innermost declaration of `x`.
    pub fn lookup(&self, x: &Var) -> Option<&Term> {
        self.decls.iter().rev().find(|(y, _)| y == x).map(|(_, a)| a)
    }

    pub fn contains(&self, x: &Var, ty: &Term) -> bool {
        self.decls.iter().any(|(y, a)| y == x && a == ty)
    }

    /// `Γ, x : A`.
    pub fn extend(&self, x: Var, ty: Term) -> Ctx {
        let mut decls = self.decls.clone();
        decls.push((x, ty));
        Ctx { decls }
    }

    /// The context without its innermost declaration.
    pub fn split_last(&self) -> Option<(Ctx, &Var, &Term)> {
        let ((x, a), rest) = self.decls.split_last()?;
        Some((
            Ctx {
                decls: rest.to_vec(),
            },
            x,
            a,
        ))
    }

    /// Every declaration of `self` occurs in `other`.
    pub fn is_sub_of(&self, other: &Ctx) -> bool {
        self.decls.iter().all(|(x, a)| other.contains(x, a))
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// `Γ ∙∙ σ`: applies `σ` to every declared type.
pub fn ctx_apply(ctx: &Ctx, sigma: &Sub) -> Ctx {
    Ctx {
        decls: ctx
            .decls
            .iter()
            .map(|(x, a)| (x.clone(), apply(a, sigma)))
            .collect(),
    }
}

/// `Γ ⊢ M : A`.
#[derive(Clone, PartialEq, Eq)]
pub struct Judgment {
    pub ctx: Ctx,
    pub subject: Term,
    pub ty: Term,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {} : {}", self.ctx, self.subject, self.ty)
    }
}

impl fmt::Debug for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Derivation of `Γ ok`.
#[derive(Clone, Debug)]
pub enum CtxDerivation {
    Nil,
    /// Concludes `ctx, var : ty ok` from `ctx ok` and `ctx ⊢ ty : sort`.
    Cons {
        ctx: Ctx,
        var: Var,
        ty: Term,
        sort: Sort,
        ok: Box<CtxDerivation>,
        ty_deriv: Box<Derivation>,
    },
}

impl CtxDerivation {
    pub fn conclusion(&self) -> Ctx {
        match self {
            CtxDerivation::Nil => Ctx::new(),
            CtxDerivation::Cons { ctx, var, ty, .. } => ctx.extend(var.clone(), ty.clone()),
        }
    }
}

/// A finitary typing derivation. Each node carries the data its rule
/// mentions; premises are matched against it by syntactic identity.
#[derive(Clone, Debug)]
pub enum Derivation {
    /// `Γ ⊢ c s₁ : c s₂`.
    Sort {
        ctx: Ctx,
        sort: Sort,
        sort_ty: Sort,
        ok: Box<CtxDerivation>,
    },
    /// `Γ ⊢ v x : A`.
    Var {
        ctx: Ctx,
        var: Var,
        ty: Term,
        ok: Box<CtxDerivation>,
    },
    /// `Γ ⊢ Π[var : domain] codomain : c s₃`, premises at `fresh`.
    Prod {
        ctx: Ctx,
        var: Var,
        fresh: Var,
        domain: Term,
        codomain: Term,
        sorts: (Sort, Sort, Sort),
        domain_deriv: Box<Derivation>,
        codomain_deriv: Box<Derivation>,
    },
    /// `Γ ⊢ λ[var : domain] body : Π[ty_var : domain] body_ty`, premises at
    /// `fresh`.
    Abs {
        ctx: Ctx,
        var: Var,
        ty_var: Var,
        fresh: Var,
        domain: Term,
        body: Term,
        body_ty: Term,
        sorts: (Sort, Sort, Sort),
        domain_deriv: Box<Derivation>,
        body_ty_deriv: Box<Derivation>,
        body_deriv: Box<Derivation>,
    },
    /// `Γ ⊢ fun · arg : codomain[var := arg]`. The optional third premise
    /// types the result type.
    App {
        ctx: Ctx,
        fun: Term,
        arg: Term,
        var: Var,
        domain: Term,
        codomain: Term,
        fun_deriv: Box<Derivation>,
        arg_deriv: Box<Derivation>,
        result_sort: Option<(Sort, Box<Derivation>)>,
    },
    /// `Γ ⊢ subject : to` from `Γ ⊢ subject : from`, `from ≃β to` and
    /// `Γ ⊢ to : c sort`.
    Conv {
        ctx: Ctx,
        subject: Term,
        from: Term,
        to: Term,
        sort: Sort,
        subject_deriv: Box<Derivation>,
        cert: ConvCertificate,
        to_deriv: Box<Derivation>,
    },
}

impl Derivation {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Derivation::Sort { .. } => "sort",
            Derivation::Var { .. } => "var",
            Derivation::Prod { .. } => "prod",
            Derivation::Abs { .. } => "abs",
            Derivation::App { .. } => "app",
            Derivation::Conv { .. } => "conv",
        }
    }

    pub fn conclusion(&self) -> Judgment {
        let (ctx, subject, ty) = match self {
            Derivation::Sort {
                ctx, sort, sort_ty, ..
            } => (ctx, Term::Const(sort.clone()), Term::Const(sort_ty.clone())),
            Derivation::Var { ctx, var, ty, .. } => (ctx, Term::Var(var.clone()), ty.clone()),
            Derivation::Prod {
                ctx,
                var,
                domain,
                codomain,
                sorts,
                ..
            } => (
                ctx,
                Term::pi(var.clone(), domain.clone(), codomain.clone()),
                Term::Const(sorts.2.clone()),
            ),
            Derivation::Abs {
                ctx,
                var,
                ty_var,
                domain,
                body,
                body_ty,
                ..
            } => (
                ctx,
                Term::lam(var.clone(), domain.clone(), body.clone()),
                Term::pi(ty_var.clone(), domain.clone(), body_ty.clone()),
            ),
            Derivation::App {
                ctx,
                fun,
                arg,
                var,
                codomain,
                ..
            } => (
                ctx,
                Term::app(fun.clone(), arg.clone()),
                subst1(codomain, var, arg),
            ),
            Derivation::Conv {
                ctx, subject, to, ..
            } => (ctx, subject.clone(), to.clone()),
        };
        Judgment {
            ctx: ctx.clone(),
            subject,
            ty,
        }
    }

    /// Number of nodes, context-formation nodes included.
    pub fn node_count(&self) -> usize {
        fn ok_count(d: &CtxDerivation) -> usize {
            match d {
                CtxDerivation::Nil => 1,
                CtxDerivation::Cons { ok, ty_deriv, .. } => 1 + ok_count(ok) + ty_deriv.node_count(),
            }
        }
        1 + match self {
            Derivation::Sort { ok, .. } | Derivation::Var { ok, .. } => ok_count(ok),
            Derivation::Prod {
                domain_deriv,
                codomain_deriv,
                ..
            } => domain_deriv.node_count() + codomain_deriv.node_count(),
            Derivation::Abs {
                domain_deriv,
                body_ty_deriv,
                body_deriv,
                ..
            } => domain_deriv.node_count() + body_ty_deriv.node_count() + body_deriv.node_count(),
            Derivation::App {
                fun_deriv,
                arg_deriv,
                result_sort,
                ..
            } => {
                fun_deriv.node_count()
                    + arg_deriv.node_count()
                    + result_sort.as_ref().map_or(0, |(_, d)| d.node_count())
            }
            Derivation::Conv {
                subject_deriv,
                to_deriv,
                ..
            } => subject_deriv.node_count() + to_deriv.node_count(),
        }
    }
}

/// A rejected derivation node. `path` lists premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{} at {}: {reason}", .rule, display_path(.path))]
pub struct CheckError {
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub reason: String,
}

fn display_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

struct DerivChecker<'a> {
    spec: &'a PtsSpec,
    path: Vec<usize>,
}

impl DerivChecker<'_> {
    fn fail(&self, rule: &'static str, reason: String) -> CheckError {
        CheckError {
            path: self.path.clone(),
            rule,
            reason,
        }
    }

    fn premise<T>(
        &mut self,
        index: usize,
        f: impl FnOnce(&mut Self) -> Result<T, CheckError>,
    ) -> Result<T, CheckError> {
        self.path.push(index);
        let r = f(self);
        self.path.pop();
        r
    }

    fn ctx(&mut self, d: &CtxDerivation) -> Result<(), CheckError> {
        let CtxDerivation::Cons {
            ctx,
            var,
            ty,
            sort,
            ok,
            ty_deriv,
        } = d
        else {
            return Ok(());
        };
        if ctx.in_dom(var) {
            return Err(self.fail("cons", format!("`{var}` ∉ dom Γ violated")));
        }
        if !self.spec.sorts.contains(sort) {
            return Err(self.fail("cons", format!("{sort} is not a sort of the instance")));
        }
        self.premise(0, |c| c.ok_concluding(ok, ctx, "cons"))?;
        let expected = Judgment {
            ctx: ctx.clone(),
            subject: ty.clone(),
            ty: Term::Const(sort.clone()),
        };
        self.premise(1, |c| c.deriv_concluding(ty_deriv, &expected, "cons"))
    }

    fn ok_concluding(
        &mut self,
        d: &CtxDerivation,
        ctx: &Ctx,
        rule: &'static str,
    ) -> Result<(), CheckError> {
        let got = d.conclusion();
        if &got != ctx {
            return Err(self.fail(
                rule,
                format!("premise concludes `{got}` ok, expected `{ctx}` ok"),
            ));
        }
        self.ctx(d)
    }

    fn deriv_concluding(
        &mut self,
        d: &Derivation,
        expected: &Judgment,
        rule: &'static str,
    ) -> Result<(), CheckError> {
        let got = d.conclusion();
        if &got != expected {
            return Err(self.fail(
                rule,
                format!("premise concludes `{got}`, expected `{expected}`"),
            ));
        }
        self.deriv(d)
    }

    fn deriv(&mut self, d: &Derivation) -> Result<(), CheckError> {
        let rule = d.rule_name();
        let judge = |ctx: &Ctx, subject: Term, ty: Term| Judgment {
            ctx: ctx.clone(),
            subject,
            ty,
        };
        match d {
            Derivation::Sort {
                ctx,
                sort,
                sort_ty,
                ok,
            } => {
                if !self.spec.has_axiom(sort, sort_ty) {
                    return Err(self.fail(rule, format!("axiom ({sort}, {sort_ty}) missing")));
                }
                self.premise(0, |c| c.ok_concluding(ok, ctx, rule))
            }
            Derivation::Var { ctx, var, ty, ok } => {
                if !ctx.contains(var, ty) {
                    return Err(self.fail(rule, format!("({var} : {ty}) ∈ Γ violated")));
                }
                self.premise(0, |c| c.ok_concluding(ok, ctx, rule))
            }
            Derivation::Prod {
                ctx,
                var,
                fresh,
                domain,
                codomain,
                sorts: (s1, s2, s3),
                domain_deriv,
                codomain_deriv,
            } => {
                if !self.spec.has_rule(s1, s2, s3) {
                    return Err(self.fail(rule, format!("rule ({s1}, {s2}, {s3}) missing")));
                }
                if member(fresh, &delete(&fv(codomain), var)) {
                    return Err(self.fail(rule, format!("`{fresh}` ∉ fv B - {var} violated")));
                }
                let a = judge(ctx, domain.clone(), Term::Const(s1.clone()));
                self.premise(0, |c| c.deriv_concluding(domain_deriv, &a, rule))?;
                let b = judge(
                    &ctx.extend(fresh.clone(), domain.clone()),
                    subst1(codomain, var, &Term::Var(fresh.clone())),
                    Term::Const(s2.clone()),
                );
                self.premise(1, |c| c.deriv_concluding(codomain_deriv, &b, rule))
            }
            Derivation::Abs {
                ctx,
                var,
                ty_var,
                fresh,
                domain,
                body,
                body_ty,
                sorts: (s1, s2, s3),
                domain_deriv,
                body_ty_deriv,
                body_deriv,
            } => {
                if !self.spec.has_rule(s1, s2, s3) {
                    return Err(self.fail(rule, format!("rule ({s1}, {s2}, {s3}) missing")));
                }
                if member(fresh, &delete(&fv(body), var)) {
                    return Err(self.fail(rule, format!("`{fresh}` ∉ fv M - {var} violated")));
                }
                if member(fresh, &delete(&fv(body_ty), ty_var)) {
                    return Err(self.fail(rule, format!("`{fresh}` ∉ fv B - {ty_var} violated")));
                }
                let a = judge(ctx, domain.clone(), Term::Const(s1.clone()));
                self.premise(0, |c| c.deriv_concluding(domain_deriv, &a, rule))?;
                let inner = ctx.extend(fresh.clone(), domain.clone());
                let z = Term::Var(fresh.clone());
                let b = subst1(body_ty, ty_var, &z);
                let bj = judge(&inner, b.clone(), Term::Const(s2.clone()));
                self.premise(1, |c| c.deriv_concluding(body_ty_deriv, &bj, rule))?;
                let mj = judge(&inner, subst1(body, var, &z), b);
                self.premise(2, |c| c.deriv_concluding(body_deriv, &mj, rule))
            }
            Derivation::App {
                ctx,
                fun,
                arg,
                var,
                domain,
                codomain,
                fun_deriv,
                arg_deriv,
                result_sort,
            } => {
                let pi = Term::pi(var.clone(), domain.clone(), codomain.clone());
                let fj = judge(ctx, fun.clone(), pi);
                self.premise(0, |c| c.deriv_concluding(fun_deriv, &fj, rule))?;
                let aj = judge(ctx, arg.clone(), domain.clone());
                self.premise(1, |c| c.deriv_concluding(arg_deriv, &aj, rule))?;
                if let Some((s, d)) = result_sort {
                    let rj = judge(ctx, subst1(codomain, var, arg), Term::Const(s.clone()));
                    self.premise(2, |c| c.deriv_concluding(d, &rj, rule))?;
                }
                Ok(())
            }
            Derivation::Conv {
                ctx,
                subject,
                from,
                to,
                sort,
                subject_deriv,
                cert,
                to_deriv,
            } => {
                if cert.first() != Some(from) || cert.last() != Some(to) {
                    return Err(self.fail(rule, "certificate does not join A and B".to_string()));
                }
                if !check_certificate(cert) {
                    return Err(self.fail(rule, "A ≃β B certificate is invalid".to_string()));
                }
                let mj = judge(ctx, subject.clone(), from.clone());
                self.premise(0, |c| c.deriv_concluding(subject_deriv, &mj, rule))?;
                let tj = judge(ctx, to.clone(), Term::Const(sort.clone()));
                self.premise(1, |c| c.deriv_concluding(to_deriv, &tj, rule))
            }
        }
    }
}

/// Validates a context-formation derivation.
pub fn check_ctx(spec: &PtsSpec, d: &CtxDerivation) -> Result<(), CheckError> {
    DerivChecker {
        spec,
        path: Vec::new(),
    }
    .ctx(d)
}

/// Validates a typing derivation node by node.
pub fn check_deriv(spec: &PtsSpec, d: &Derivation) -> Result<(), CheckError> {
    DerivChecker {
        spec,
        path: Vec::new(),
    }
    .deriv(d)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InferError {
    #[error("nonFunctionalSpec: axioms or rules are not functional")]
    NonFunctionalSpec,
    #[error("unboundVariable: `{0}` is not declared")]
    UnboundVariable(Var),
    #[error("notAPi: `{term}` has type `{ty}`, which is not a product")]
    NotAPi { term: Term, ty: Term },
    #[error("sortExpected: `{term}` has type `{ty}`, which is not a sort")]
    SortExpected { term: Term, ty: Term },
    #[error("ruleMissing: no rule ({0}, {1}, _)")]
    RuleMissing(Sort, Sort),
    #[error("axiomMissing: no axiom ({0}, _)")]
    AxiomMissing(Sort),
    #[error("typeMismatch: expected `{expected}`, got `{got}`")]
    TypeMismatch { expected: Term, got: Term },
    #[error("fuelExhausted: reduction did not finish within the fuel bound")]
    FuelExhausted,
    #[error("illFormedContext: {0}")]
    IllFormedContext(String),
}

impl InferError {
    /// The variant name used in messages and structured output.
    pub fn kind(&self) -> &'static str {
        match self {
            InferError::NonFunctionalSpec => "nonFunctionalSpec",
            InferError::UnboundVariable(_) => "unboundVariable",
            InferError::NotAPi { .. } => "notAPi",
            InferError::SortExpected { .. } => "sortExpected",
            InferError::RuleMissing(..) => "ruleMissing",
            InferError::AxiomMissing(_) => "axiomMissing",
            InferError::TypeMismatch { .. } => "typeMismatch",
            InferError::FuelExhausted => "fuelExhausted",
            InferError::IllFormedContext(_) => "illFormedContext",
        }
    }
}

/// Fresh name for the premise of a product `Π[x:A]B` under `ctx`.
pub fn prod_witness(ctx: &Ctx, codomain: &Term) -> Var {
    let mut avoid = ctx.dom();
    avoid.extend(fv(codomain));
    chi_var(&avoid)
}

/// Fresh name for the premises of an abstraction `λ[x:A]M` under `ctx`.
pub fn abs_witness(ctx: &Ctx, domain: &Term, body: &Term) -> Var {
    let mut avoid = ctx.dom();
    avoid.extend(fv(body));
    avoid.extend(fv(domain));
    chi_var(&avoid)
}

struct Synth<'a> {
    spec: &'a PtsSpec,
    fuel: u64,
}

impl Synth<'_> {
    fn whnf(&self, t: &Term) -> Result<Term, InferError> {
        let r = whnf_traced(t, self.fuel);
        match r.outcome {
            Outcome::Normal => Ok(r.term),
            Outcome::FuelExhausted => Err(InferError::FuelExhausted),
        }
    }

    fn sort_of(&self, ctx: &Ctx, t: &Term) -> Result<Sort, InferError> {
        let ty = self.infer(ctx, t)?;
        match self.whnf(&ty)? {
            Term::Const(s) => Ok(s),
            _ => Err(InferError::SortExpected {
                term: t.clone(),
                ty,
            }),
        }
    }

    fn rule(&self, s1: &Sort, s2: &Sort) -> Result<Sort, InferError> {
        self.spec
            .rule_of(s1, s2)
            .cloned()
            .ok_or_else(|| InferError::RuleMissing(s1.clone(), s2.clone()))
    }

    fn well_formed(&self, ctx: &Ctx) -> Result<(), InferError> {
        let mut prefix = Ctx::new();
        for (x, a) in ctx.iter() {
            if prefix.in_dom(x) {
                return Err(InferError::IllFormedContext(format!(
                    "`{x}` is declared twice"
                )));
            }
            self.sort_of(&prefix, a).map_err(|e| match e {
                InferError::FuelExhausted => e,
                e => InferError::IllFormedContext(format!("declaration of `{x}`: {e}")),
            })?;
            prefix = prefix.extend(x.clone(), a.clone());
        }
        Ok(())
    }

    fn infer(&self, ctx: &Ctx, t: &Term) -> Result<Term, InferError> {
        match t {
            Term::Const(s) => self
                .spec
                .axiom_of(s)
                .map(|s2| Term::Const(s2.clone()))
                .ok_or_else(|| InferError::AxiomMissing(s.clone())),
            Term::Var(x) => ctx
                .lookup(x)
                .cloned()
                .ok_or_else(|| InferError::UnboundVariable(x.clone())),
            Term::Pi(x, a, b) => {
                let s1 = self.sort_of(ctx, a)?;
                let y = prod_witness(ctx, b);
                let inner = ctx.extend(y.clone(), (**a).clone());
                let s2 = self.sort_of(&inner, &subst1(b, x, &Term::Var(y)))?;
                Ok(Term::Const(self.rule(&s1, &s2)?))
            }
            Term::Lam(x, a, m) => {
                let s1 = self.sort_of(ctx, a)?;
                let z = abs_witness(ctx, a, m);
                let inner = ctx.extend(z.clone(), (**a).clone());
                let body_ty = self.infer(&inner, &subst1(m, x, &Term::Var(z.clone())))?;
                let s2 = self.sort_of(&inner, &body_ty)?;
                self.rule(&s1, &s2)?;
                Ok(Term::pi(z, (**a).clone(), body_ty))
            }
            Term::App(m, n) => {
                let fun_ty = self.infer(ctx, m)?;
                let Term::Pi(x, a, b) = self.whnf(&fun_ty)? else {
                    return Err(InferError::NotAPi {
                        term: (**m).clone(),
                        ty: fun_ty,
                    });
                };
                let arg_ty = self.infer(ctx, n)?;
                match beta_conv(&arg_ty, &a, self.fuel) {
                    Conv::Yes => Ok(subst1(&b, &x, n)),
                    Conv::No => Err(InferError::TypeMismatch {
                        expected: (*a).clone(),
                        got: arg_ty,
                    }),
                    Conv::Unknown => Err(InferError::FuelExhausted),
                }
            }
        }
    }
}

fn synth(spec: &PtsSpec, fuel: u64) -> Result<Synth<'_>, InferError> {
    if !spec.is_functional() {
        return Err(InferError::NonFunctionalSpec);
    }
    Ok(Synth { spec, fuel })
}

/// Checks that `ctx` has a distinct domain and that every declared type has
/// a sort in the context preceding it.
pub fn well_formed(spec: &PtsSpec, ctx: &Ctx, fuel: u64) -> Result<(), InferError> {
    synth(spec, fuel)?.well_formed(ctx)
}

/// Synthesizes a type of `term` under `ctx` in a functional instance.
pub fn infer(spec: &PtsSpec, ctx: &Ctx, term: &Term, fuel: u64) -> Result<Term, InferError> {
    let s = synth(spec, fuel)?;
    s.well_formed(ctx)?;
    s.infer(ctx, term)
}

/// A substitution that fails to be well-typed at one declaration.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("declaration `{var}`: {error}")]
pub struct SubstTypingError {
    pub var: Var,
    pub error: InferError,
}

/// `σ : Γ ⇀ Δ`: every declaration `(x, A)` of `Γ` has `Δ ⊢ σ x : A ∙ σ`,
/// with types compared up to conversion.
pub fn subst_wt(
    spec: &PtsSpec,
    sigma: &Sub,
    gamma: &Ctx,
    delta: &Ctx,
    fuel: u64,
) -> Result<(), SubstTypingError> {
    let at = |var: &Var| {
        let var = var.clone();
        move |error| SubstTypingError { var, error }
    };
    let s = synth(spec, fuel).map_err(at(&Var::new("_")))?;
    s.well_formed(delta).map_err(at(&Var::new("_")))?;
    for (x, a) in gamma.iter() {
        let image = sigma.get(x);
        let got = s.infer(delta, &image).map_err(at(x))?;
        let expected = apply(a, sigma);
        match beta_conv(&got, &expected, fuel) {
            Conv::Yes => {}
            Conv::No => return Err(at(x)(InferError::TypeMismatch { expected, got })),
            Conv::Unknown => return Err(at(x)(InferError::FuelExhausted)),
        }
    }
    Ok(())
}

/// Whether [`derive`] emits the optional third premise of application nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AppPremise {
    Omit,
    Include,
}

struct Elaborator<'a> {
    synth: Synth<'a>,
    app_premise: AppPremise,
}

impl Elaborator<'_> {
    fn ok(&self, ctx: &Ctx) -> Result<CtxDerivation, InferError> {
        let Some((prefix, x, a)) = ctx.split_last() else {
            return Ok(CtxDerivation::Nil);
        };
        let ok = self.ok(&prefix)?;
        let (ty_deriv, sort) = self.sorted(&prefix, a)?;
        Ok(CtxDerivation::Cons {
            ctx: prefix,
            var: x.clone(),
            ty: a.clone(),
            sort,
            ok: Box::new(ok),
            ty_deriv: Box::new(ty_deriv),
        })
    }

    /// A derivation of `ctx ⊢ t : c s` whose type is literally a sort.
    fn sorted(&self, ctx: &Ctx, t: &Term) -> Result<(Derivation, Sort), InferError> {
        let d = self.derive(ctx, t)?;
        let ty = d.conclusion().ty;
        let head = whnf_traced(&ty, self.synth.fuel);
        if head.outcome == Outcome::FuelExhausted {
            return Err(InferError::FuelExhausted);
        }
        let Term::Const(s) = &head.term else {
            return Err(InferError::SortExpected {
                term: t.clone(),
                ty,
            });
        };
        if ty == head.term {
            return Ok((d, s.clone()));
        }
        let top = self
            .synth
            .spec
            .axiom_of(s)
            .cloned()
            .ok_or_else(|| InferError::AxiomMissing(s.clone()))?;
        let to_deriv = Derivation::Sort {
            ctx: ctx.clone(),
            sort: s.clone(),
            sort_ty: top.clone(),
            ok: Box::new(self.ok(ctx)?),
        };
        let conv = Derivation::Conv {
            ctx: ctx.clone(),
            subject: t.clone(),
            from: ty,
            to: head.term.clone(),
            sort: top,
            subject_deriv: Box::new(d),
            cert: ConvCertificate::new(head.trace),
            to_deriv: Box::new(to_deriv),
        };
        Ok((conv, s.clone()))
    }

    /// Wraps `d` in a conversion node so that it concludes type `target`.
    fn coerce(
        &self,
        ctx: &Ctx,
        d: Derivation,
        target: &Term,
        cert: Option<ConvCertificate>,
    ) -> Result<Derivation, InferError> {
        let j = d.conclusion();
        if &j.ty == target {
            return Ok(d);
        }
        let cert = match cert {
            Some(c) => c,
            None if crate::alpha::alpha_eq(&j.ty, target) => {
                ConvCertificate::new(vec![j.ty.clone(), target.clone()])
            }
            None => ConvCertificate::by_normalization(&j.ty, target, self.synth.fuel).ok_or_else(
                || InferError::TypeMismatch {
                    expected: target.clone(),
                    got: j.ty.clone(),
                },
            )?,
        };
        let (to_deriv, sort) = self.sorted(ctx, target)?;
        Ok(Derivation::Conv {
            ctx: ctx.clone(),
            subject: j.subject,
            from: j.ty,
            to: target.clone(),
            sort,
            subject_deriv: Box::new(d),
            cert,
            to_deriv: Box::new(to_deriv),
        })
    }

    fn derive(&self, ctx: &Ctx, t: &Term) -> Result<Derivation, InferError> {
        match t {
            Term::Const(s) => {
                let top = self
                    .synth
                    .spec
                    .axiom_of(s)
                    .cloned()
                    .ok_or_else(|| InferError::AxiomMissing(s.clone()))?;
                Ok(Derivation::Sort {
                    ctx: ctx.clone(),
                    sort: s.clone(),
                    sort_ty: top,
                    ok: Box::new(self.ok(ctx)?),
                })
            }
            Term::Var(x) => {
                let ty = ctx
                    .lookup(x)
                    .cloned()
                    .ok_or_else(|| InferError::UnboundVariable(x.clone()))?;
                Ok(Derivation::Var {
                    ctx: ctx.clone(),
                    var: x.clone(),
                    ty,
                    ok: Box::new(self.ok(ctx)?),
                })
            }
            Term::Pi(x, a, b) => {
                let (domain_deriv, s1) = self.sorted(ctx, a)?;
                let y = prod_witness(ctx, b);
                let inner = ctx.extend(y.clone(), (**a).clone());
                let (codomain_deriv, s2) =
                    self.sorted(&inner, &subst1(b, x, &Term::Var(y.clone())))?;
                let s3 = self.synth.rule(&s1, &s2)?;
                Ok(Derivation::Prod {
                    ctx: ctx.clone(),
                    var: x.clone(),
                    fresh: y,
                    domain: (**a).clone(),
                    codomain: (**b).clone(),
                    sorts: (s1, s2, s3),
                    domain_deriv: Box::new(domain_deriv),
                    codomain_deriv: Box::new(codomain_deriv),
                })
            }
            Term::Lam(x, a, m) => {
                let (domain_deriv, s1) = self.sorted(ctx, a)?;
                let z = abs_witness(ctx, a, m);
                let zv = Term::Var(z.clone());
                let inner = ctx.extend(z.clone(), (**a).clone());
                let body = subst1(m, x, &zv);
                let body_deriv = self.derive(&inner, &body)?;
                let body_ty = body_deriv.conclusion().ty;
                // the rule's premises mention B[z := z], the ι-normal form of B
                let renamed = subst1(&body_ty, &z, &zv);
                let (body_ty_deriv, s2) = self.sorted(&inner, &renamed)?;
                let s3 = self.synth.rule(&s1, &s2)?;
                let body_deriv = self.coerce(&inner, body_deriv, &renamed, None)?;
                Ok(Derivation::Abs {
                    ctx: ctx.clone(),
                    var: x.clone(),
                    ty_var: z.clone(),
                    fresh: z,
                    domain: (**a).clone(),
                    body: (**m).clone(),
                    body_ty,
                    sorts: (s1, s2, s3),
                    domain_deriv: Box::new(domain_deriv),
                    body_ty_deriv: Box::new(body_ty_deriv),
                    body_deriv: Box::new(body_deriv),
                })
            }
            Term::App(m, n) => {
                let fun_deriv = self.derive(ctx, m)?;
                let fun_ty = fun_deriv.conclusion().ty;
                let head = whnf_traced(&fun_ty, self.synth.fuel);
                if head.outcome == Outcome::FuelExhausted {
                    return Err(InferError::FuelExhausted);
                }
                let Term::Pi(x, a, b) = &head.term else {
                    return Err(InferError::NotAPi {
                        term: (**m).clone(),
                        ty: fun_ty,
                    });
                };
                let pi = head.term.clone();
                let fun_deriv =
                    self.coerce(ctx, fun_deriv, &pi, Some(ConvCertificate::new(head.trace)))?;
                let arg_deriv = self.derive(ctx, n)?;
                let arg_deriv = self.coerce(ctx, arg_deriv, a, None)?;
                let result_sort = match self.app_premise {
                    AppPremise::Omit => None,
                    AppPremise::Include => {
                        let (d, s) = self.sorted(ctx, &subst1(b, x, n))?;
                        Some((s, Box::new(d)))
                    }
                };
                Ok(Derivation::App {
                    ctx: ctx.clone(),
                    fun: (**m).clone(),
                    arg: (**n).clone(),
                    var: x.clone(),
                    domain: (**a).clone(),
                    codomain: (**b).clone(),
                    fun_deriv: Box::new(fun_deriv),
                    arg_deriv: Box::new(arg_deriv),
                    result_sort,
                })
            }
        }
    }
}

/// Builds a derivation of `ctx ⊢ term : A` where `A` is exactly the type
/// returned by [`infer`]. Conversion nodes are inserted wherever a premise
/// needs a type that synthesis only reaches up to conversion.
pub fn derive(
    spec: &PtsSpec,
    ctx: &Ctx,
    term: &Term,
    fuel: u64,
    app_premise: AppPremise,
) -> Result<Derivation, InferError> {
    let synth = synth(spec, fuel)?;
    synth.well_formed(ctx)?;
    Elaborator { synth, app_premise }.derive(ctx, term)
}

/// Builds a derivation of `ctx ok`.
pub fn derive_ctx(spec: &PtsSpec, ctx: &Ctx, fuel: u64) -> Result<CtxDerivation, InferError> {
    let synth = synth(spec, fuel)?;
    synth.well_formed(ctx)?;
    Elaborator {
        synth,
        app_premise: AppPremise::Omit,
    }
    .ok(ctx)
}
