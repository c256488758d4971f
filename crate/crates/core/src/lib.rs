//! Exact trace algebra generated by two orthogonal projections.
//!
//! * [`ncword`]: normal-form polynomials in two idempotents `P`, `Q`.
//! * [`dihedral`]: the group algebra of the symmetries `R = 2P-1`, `S = 2Q-1`.
//! * [`trace`]: the tracial state as a map into the moment basis.
//! * [`identities`]: registry of exactly verified moment/operator identities.
//! * [`triangle`]: the coefficient triangle of `τ[(P+QPQ)^n]`.
//! * [`oracle`]: finite-dimensional projection pairs with prescribed angles.
//! * [`cli`]: the `twoproj` command-line front end.

pub mod cli;
pub mod dihedral;
pub mod identities;
pub mod ncword;
pub mod oracle;
pub mod rational;
pub mod series;
pub mod trace;
pub mod triangle;

pub use dihedral::{DihedralElem, DihedralPoly};
pub use identities::{IdentityError, IdentityReport, Residual, Status, Verifier};
pub use ncword::{parse_word, Letter, NCPoly, ParseError, Word};
pub use rational::Rational;
pub use trace::{eval, trace, trace_word, Assignment, EvalError, MomentExpr};
