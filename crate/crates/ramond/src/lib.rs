//! Exact-arithmetic verification engine for the N=1 and N=2 Ramond
//! superconformal algebras and a family of non-weight modules built from
//! Weyl-superalgebra representations.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals,
//! optionally polynomial in a declared set of formal parameters (`b`, `λ`,
//! `α`, …). There are no floats and no tolerances; every check either yields
//! an identically-zero residual or reports the exact nonzero witness.
//!
//! # Layout
//!
//! | module | contents |
//! |--------|----------|
//! | [`scalars`] | rationals and multivariate Laurent polynomials over ℚ |
//! | [`carriers`] | the five ℤ₂-graded carrier families and sparse vectors |
//! | [`weyl`] | Weyl-superalgebra generator actions `t^m, D_t, d/dt, ξ, ∂_ξ` |
//! | [`superalgebras`] | structure constants, super-Jacobi, realization, twist, embedding |
//! | [`modules`] | the `L/H/G^±/G` module actions, axiom and restriction checks |
//! | [`probes`] | finite-window orbit spans, submodule closure, operator identities |
//! | [`intertwiners`] | explicit module maps and window intertwiner spaces |
//! | [`report`] | deterministic machine-readable check reports |
//! | [`text`] | the text grammar for scalars and vectors used in CLI I/O |
//!
//! # Algebras
//!
//! Both algebras extend the Virasoro algebra
//! `[L_m, L_n] = (n−m)L_{m+n} + ((n³−n)/12)δ_{m+n,0}C` by odd currents:
//! the N=1 algebra adds one family `G_m`, the N=2 algebra adds `H_m` and
//! `G_m^±`. The precise tables live in [`superalgebras`]; each sign is pinned
//! down by the graded Jacobi identity, which the test suite verifies
//! exhaustively on mode windows.
//!
//! # Modules
//!
//! A carrier `A` is one of five concrete Weyl-superalgebra modules (Laurent
//! series, rank-two free, degree-two, degree-n, fraction — see
//! [`carriers::FamilySpec`]). For a parameter `b`, the algebras act through
//! operator words such as `L_m = t^m(D_t + mb + (m/2)ξ∂_ξ)`, giving the
//! non-weight modules verified by this crate.

pub mod carriers;
pub mod intertwiners;
pub mod modules;
pub mod probes;
pub mod report;
pub mod scalars;
pub mod superalgebras;
pub mod text;
pub mod weyl;

pub use carriers::{BasisIndex, FamilySpec, Parity, TPoly, Vector, WindowSpec};
pub use modules::ActionConfig;
pub use report::{Report, Status};
pub use scalars::{ParamRing, Rational, SymScalar};
pub use superalgebras::{Algebra, GenKind, Generator};

/// Errors shared across the whole crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two values built over different parameter rings were combined.
    #[error("parameter ring mismatch: {0}")]
    RingMismatch(String),
    /// A scalar operation left the ring (e.g. a negative exponent on a
    /// non-Laurent parameter, or a zero binding for λ/μ).
    #[error("scalar domain error: {0}")]
    ScalarDomain(String),
    /// Incompatible carrier families, algebra tags, or generators.
    #[error("configuration error: {0}")]
    Config(String),
    /// Text that does not parse under the documented grammar.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
