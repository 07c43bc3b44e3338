//! Improved Li-Yau gradient bounds for positive solutions of the heat
//! equation under a curvature-dimension condition CD(ρ, n), with the
//! Harnack inequalities they integrate to, the classical bounds they
//! improve on, and a radial heat-equation harness on model spaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod heat;
pub mod kernel;
pub mod numeric;
pub mod psi;
pub mod report;
pub mod roots;

pub use error::{Error, Result};
pub use kernel::{
    domain_limit, eval_f, eval_f_prime, eval_phi, eval_phi_limit, eval_phi_prime, eval_phi_tilde, eval_s, liyau_rhs,
    BoundQuery, CurvatureDimension, KernelArgument,
};
pub use roots::{find_roots, RootSet};
pub use psi::{harnack_exponent, legendre, psi_domain, HarnackQuery, LegendreResult, PsiDomain, PsiFunction};
pub use report::MarginReport;
