//! Linear programs whose objective, constraint matrix and right-hand side are
//! only known through imprecise uncertainty models.
//!
//! The uncertain LP `max Uᵀx s.t. Yx ≤ Z, x ≥ 0` is turned into a decision
//! problem over a finite candidate set with the utility
//!
//! ```text
//! G_x(u, y, z) = (uᵀx − L) · 1[yx ≤ z] + L
//! ```
//!
//! where `L` is a punishment strictly below every candidate's guaranteed
//! objective. Candidates are ranked by lower expected utility (Γ-maximin) or
//! filtered by pairwise upper-expected utility differences (maximality).
//!
//! Each uncertain parameter is described by one of three models, from least
//! to most informative: an interval, an ε-contaminated distribution, or a
//! probability box. All of them are reduced to Dempster–Shafer structures and
//! combined under random-set independence.
//!
//! Modules:
//! - [`uncertainty`]: the models and lower/upper expectations.
//! - [`problem`]: the uncertain LP and its realizations.
//! - [`lp`]: an exact vertex-enumeration solver for small deterministic LPs.
//! - [`decision`]: the utility, candidate sets, maximin and maximal sets.
//! - [`oracle`]: brute-force verifiers used by the test and verify suites.
//! - [`verify`]: the seeded property suite behind `imprecise-lp verify`.
//! - [`harness`]: predict-then-optimize experiments and regret.
//! - [`cli`]: configuration files and the command implementations.

pub mod cli;
pub mod decision;
pub mod harness;
pub mod lp;
pub mod oracle;
pub mod problem;
pub mod uncertainty;
pub mod verify;

/// Absolute tolerance used for "within tolerance" comparisons throughout.
pub const TOL: f64 = 1e-9;
