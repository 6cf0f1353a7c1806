//! Named lambda terms with dependent products, multiple substitution with
//! uniform binder renaming, decidable alpha- and beta-conversion, and an
//! executable Pure Type System kernel.

pub mod alpha;
pub mod beta;
pub mod oracle;
pub mod parser;
pub mod subst;
pub mod syntax;
pub mod typing;

pub use alpha::alpha_eq;
pub use beta::{beta_conv, normalize, whnf, Conv, ConvCertificate, Outcome};
pub use parser::{parse_ctx, parse_spec, parse_term, print_term, ParseError};
pub use subst::{apply, chi_var, subst1, Sub};
pub use syntax::{fv, Sort, Term, Var};
pub use typing::{check_deriv, infer, lambda_cube, Corner, Ctx, Derivation, InferError, PtsSpec};
