//! Beta-reduction, fuel-bounded normalization and beta-conversion.

use crate::alpha::alpha_eq;
use crate::subst::subst1;
use crate::syntax::Term;

/// Contracts a redex at the root: `(λ[x:A]M) N ▹β M[x:=N]`.
pub fn contract(term: &Term) -> Option<Term> {
    match term {
        Term::App(f, arg) => match &**f {
            Term::Lam(x, _, body) => Some(subst1(body, x, arg)),
            _ => None,
        },
        _ => None,
    }
}

/// Every one-step reduct, one per redex position, outermost first and then
/// left to right. Only the contracted redex is renamed; the surrounding
/// context is rebuilt verbatim.
pub fn reducts(term: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    collect_reducts(term, &mut out);
    out
}

fn collect_reducts(term: &Term, out: &mut Vec<Term>) {
    if let Some(r) = contract(term) {
        out.push(r);
    }
    match term {
        Term::Const(_) | Term::Var(_) => {}
        Term::Lam(x, a, m) => {
            out.extend(reducts(a).into_iter().map(|a2| Term::lam(x.clone(), a2, (**m).clone())));
            out.extend(reducts(m).into_iter().map(|m2| Term::lam(x.clone(), (**a).clone(), m2)));
        }
        Term::Pi(x, a, b) => {
            out.extend(reducts(a).into_iter().map(|a2| Term::pi(x.clone(), a2, (**b).clone())));
            out.extend(reducts(b).into_iter().map(|b2| Term::pi(x.clone(), (**a).clone(), b2)));
        }
        Term::App(m, n) => {
            out.extend(reducts(m).into_iter().map(|m2| Term::app(m2, (**n).clone())));
            out.extend(reducts(n).into_iter().map(|n2| Term::app((**m).clone(), n2)));
        }
    }
}

/// The leftmost-outermost reduct; always `reducts(term).first()`.
pub fn step(term: &Term) -> Option<Term> {
    if let Some(r) = contract(term) {
        return Some(r);
    }
    match term {
        Term::Const(_) | Term::Var(_) => None,
        Term::Lam(x, a, m) => step(a)
            .map(|a2| Term::lam(x.clone(), a2, (**m).clone()))
            .or_else(|| step(m).map(|m2| Term::lam(x.clone(), (**a).clone(), m2))),
        Term::Pi(x, a, b) => step(a)
            .map(|a2| Term::pi(x.clone(), a2, (**b).clone()))
            .or_else(|| step(b).map(|b2| Term::pi(x.clone(), (**a).clone(), b2))),
        Term::App(m, n) => step(m)
            .map(|m2| Term::app(m2, (**n).clone()))
            .or_else(|| step(n).map(|n2| Term::app((**m).clone(), n2))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Normal,
    FuelExhausted,
}

/// Result of a fuel-bounded reduction, together with every intermediate
/// term. `trace[0]` is the input and `trace.last()` is `term`; consecutive
/// entries are one-step reductions.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub term: Term,
    pub outcome: Outcome,
    pub trace: Vec<Term>,
}

/// Leftmost-outermost normalization with at most `fuel` contractions.
pub fn normalize(term: &Term, fuel: u64) -> (Term, Outcome) {
    let r = normalize_traced(term, fuel);
    (r.term, r.outcome)
}

pub fn normalize_traced(term: &Term, fuel: u64) -> Reduction {
    run(term, fuel, step)
}

/// Reduces the head redex of an application spine until the head is a
/// binder, a constant or a variable.
pub fn whnf(term: &Term, fuel: u64) -> (Term, Outcome) {
    let r = whnf_traced(term, fuel);
    (r.term, r.outcome)
}

pub fn whnf_traced(term: &Term, fuel: u64) -> Reduction {
    run(term, fuel, head_step)
}

fn head_step(term: &Term) -> Option<Term> {
    match term {
        Term::App(f, arg) => match &**f {
            Term::Lam(..) => contract(term),
            _ => head_step(f).map(|f2| Term::app(f2, (**arg).clone())),
        },
        _ => None,
    }
}

fn run(term: &Term, mut fuel: u64, next: fn(&Term) -> Option<Term>) -> Reduction {
    let mut trace = vec![term.clone()];
    loop {
        let current = trace.last().unwrap();
        let Some(reduced) = next(current) else {
            return Reduction {
                term: current.clone(),
                outcome: Outcome::Normal,
                trace,
            };
        };
        if fuel == 0 {
            return Reduction {
                term: current.clone(),
                outcome: Outcome::FuelExhausted,
                trace,
            };
        }
        fuel -= 1;
        trace.push(reduced);
    }
}

/// Three-valued answer of a fuel-bounded decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conv {
    Yes,
    No,
    Unknown,
}

/// Decides `M ≃β N` for normalizing terms: normalizes both sides and
/// compares normal forms up to alpha. Complete under confluence.
pub fn beta_conv(m: &Term, n: &Term, fuel: u64) -> Conv {
    if alpha_eq(m, n) {
        return Conv::Yes;
    }
    let (nm, om) = normalize(m, fuel);
    let (nn, on) = normalize(n, fuel);
    match (om, on) {
        (Outcome::Normal, Outcome::Normal) if alpha_eq(&nm, &nn) => Conv::Yes,
        (Outcome::Normal, Outcome::Normal) => Conv::No,
        _ => Conv::Unknown,
    }
}

/// A chain of terms witnessing `first ≃β last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCertificate {
    pub chain: Vec<Term>,
}

impl ConvCertificate {
    pub fn new(chain: Vec<Term>) -> ConvCertificate {
        ConvCertificate { chain }
    }

    pub fn first(&self) -> Option<&Term> {
        self.chain.first()
    }

    pub fn last(&self) -> Option<&Term> {
        self.chain.last()
    }

    /// Builds a certificate from `from` to `to` by normalizing both ends.
    /// Returns `None` unless both normalize within `fuel` to alpha-equal
    /// normal forms.
    pub fn by_normalization(from: &Term, to: &Term, fuel: u64) -> Option<ConvCertificate> {
        let left = normalize_traced(from, fuel);
        let right = normalize_traced(to, fuel);
        if left.outcome != Outcome::Normal
            || right.outcome != Outcome::Normal
            || !alpha_eq(&left.term, &right.term)
        {
            return None;
        }
        let mut chain = left.trace;
        chain.extend(right.trace.into_iter().rev());
        Some(ConvCertificate { chain })
    }
}

/// Checks that adjacent terms are alpha-convertible or one-step reducts of
/// each other in either direction. The empty chain is rejected.
pub fn check_certificate(cert: &ConvCertificate) -> bool {
    !cert.chain.is_empty()
        && cert.chain.windows(2).all(|w| {
            let (p, q) = (&w[0], &w[1]);
            alpha_eq(p, q) || reducts(p).contains(q) || reducts(q).contains(p)
        })
}
