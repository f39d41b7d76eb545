//! Exact symbolic computation for the positive part `U_q^+(so_5)` of the
//! quantized enveloping algebra of type B2, its simple quotients
//! `B_{alpha,beta}` of Gelfand-Kirillov dimension 2, the localization
//! `R = B_{alpha,beta}[e4^-1]`, and the quantum generalized Weyl algebra
//! picture of `R`.
//!
//! Everything is computed over the field `Q(q)` of rational functions in a
//! symbolic `q`; there is no floating point anywhere and every identity
//! check is exact.
//!
//! Module map:
//! - [`ratq`]: the coefficient field `Q(q)` with canonical forms.
//! - [`pbw`]: a generic sparse straightening engine producing PBW normal
//!   forms for algebras presented by a rule table, with Ore-style
//!   localization at designated generators.
//! - [`so5`]: the concrete `U_q^+(so_5)` presentation, its central elements
//!   `chi_1, chi_2`, and the q-commuting variables produced by the deleting
//!   derivation construction.
//! - [`bquot`]: the simple quotients `B_{alpha,beta}`, their monomial basis,
//!   the localization `R` and the maps to and from the GWA picture.
//! - [`gwa`]: quantum generalized Weyl algebra arithmetic over `K[h^{±1}]`
//!   and the constructive decomposition of derivations into inner plus
//!   scalar parts.
//! - [`linalg`]: exact kernel computation over `Q(q)`.
//! - [`deriv`]: derivations of `B_{alpha,beta}`: Leibniz checking,
//!   innerization, and the degree-bounded derivation-space solver.
//! - [`exprio`]: expression parsing, deterministic printing, JSON element
//!   and report formats.
//! - [`verify`]: the identity suite backing the `verify` CLI command.

pub mod bquot;
pub mod deriv;
pub mod exprio;
pub mod gwa;
pub mod linalg;
pub mod pbw;
pub mod ratq;
pub mod so5;
pub mod verify;





pub use ratq::RatQ;
