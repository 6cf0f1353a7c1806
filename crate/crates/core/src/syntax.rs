//! First-order abstract syntax with one sort of names.
//!
//! Terms are compared by structural identity only. Alpha-equivalence lives
//! in [`crate::alpha`] and is never implied by `==` on [`Term`].

use std::fmt;
use std::rc::Rc;

/// A variable name: a token of letters, digits and underscores that does
/// not start with a digit. The keyword `Pi` is not a variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Rc<str>);

/// Rejected variable or sort token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid name `{0}`")]
pub struct InvalidName(pub String);

pub(crate) fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "Pi"
}

impl Var {
    /// Panics on a name that is not a valid identifier; see [`Var::try_new`].
    pub fn new(name: &str) -> Var {
        Var::try_new(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(name: &str) -> Result<Var, InvalidName> {
        if is_ident(name) {
            Ok(Var(Rc::from(name)))
        } else {
            Err(InvalidName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Maps every variable to a natural number. Canonical names `x<n>` (no
/// leading zeros) map to `n`; every other name maps to 0.
pub fn encode(x: &Var) -> u64 {
    let name = x.name();
    let digits = match name.strip_prefix('x') {
        Some(d) if !d.is_empty() => d,
        _ => return 0,
    };
    if !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0'))
    {
        return 0;
    }
    digits.parse().unwrap_or(0)
}

/// Right inverse of [`encode`]: `encode(&decode(n)) == n`.
pub fn decode(n: u64) -> Var {
    Var(Rc::from(format!("x{n}")))
}

/// A constant of the calculus. `*` and `#` are the usual cube sorts; any
/// identifier may name a user sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Rc<str>);

impl Sort {
    pub fn new(name: &str) -> Sort {
        Sort::try_new(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_new(name: &str) -> Result<Sort, InvalidName> {
        if name == "*" || name == "#" || is_ident(name) {
            Ok(Sort(Rc::from(name)))
        } else {
            Err(InvalidName(name.to_string()))
        }
    }

    pub fn star() -> Sort {
        Sort::new("*")
    }

    pub fn boxed() -> Sort {
        Sort::new("#")
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for sorts that print without a leading quote.
    pub fn is_builtin(&self) -> bool {
        &*self.0 == "*" || &*self.0 == "#"
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_builtin() {
            f.write_str(&self.0)
        } else {
            write!(f, "'{}", self.0)
        }
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Sort),
    Var(Var),
    Lam(Var, Rc<Term>, Rc<Term>),
    Pi(Var, Rc<Term>, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
}

impl Term {
    pub fn sort(s: Sort) -> Term {
        Term::Const(s)
    }

    pub fn var(x: Var) -> Term {
        Term::Var(x)
    }

    pub fn lam(x: Var, ty: Term, body: Term) -> Term {
        Term::Lam(x, Rc::new(ty), Rc::new(body))
    }

    pub fn pi(x: Var, ty: Term, body: Term) -> Term {
        Term::Pi(x, Rc::new(ty), Rc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Rc::new(fun), Rc::new(arg))
    }

    /// Number of constructor nodes; binder names are not counted.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 1,
            Term::Lam(_, a, m) | Term::Pi(_, a, m) => 1 + a.size() + m.size(),
            Term::App(m, n) => 1 + m.size() + n.size(),
        }
    }

    pub fn as_sort(&self) -> Option<&Sort> {
        match self {
            Term::Const(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Ordered list of variables; duplicates are kept.
pub type VarList = Vec<Var>;

/// Free variables in left-to-right order, with duplicates.
pub fn fv(term: &Term) -> VarList {
    let mut out = Vec::new();
    collect_fv(term, &mut out);
    out
}

fn collect_fv(term: &Term, out: &mut VarList) {
    match term {
        Term::Const(_) => {}
        Term::Var(x) => out.push(x.clone()),
        Term::Lam(x, a, m) | Term::Pi(x, a, m) => {
            collect_fv(a, out);
            out.extend(delete(&fv(m), x));
        }
        Term::App(m, n) => {
            collect_fv(m, out);
            collect_fv(n, out);
        }
    }
}

/// Removes every occurrence of `y`.
pub fn delete(xs: &[Var], y: &Var) -> VarList {
    xs.iter().filter(|x| *x != y).cloned().collect()
}

pub fn concat(xs: &[Var], ys: &[Var]) -> VarList {
    xs.iter().chain(ys).cloned().collect()
}

pub fn member(x: &Var, xs: &[Var]) -> bool {
    xs.contains(x)
}

pub fn is_fresh(x: &Var, term: &Term) -> bool {
    !occurs_free(x, term)
}

pub fn is_free(x: &Var, term: &Term) -> bool {
    occurs_free(x, term)
}

fn occurs_free(x: &Var, term: &Term) -> bool {
    match term {
        Term::Const(_) => false,
        Term::Var(y) => x == y,
        Term::Lam(y, a, m) | Term::Pi(y, a, m) => occurs_free(x, a) || (x != y && occurs_free(x, m)),
        Term::App(m, n) => occurs_free(x, m) || occurs_free(x, n),
    }
}
