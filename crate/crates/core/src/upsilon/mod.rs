//! Exact upsilon functions via certified minimisation of `χ_t`.

mod audit;
mod envelope;
mod minimize;
mod pl;

pub use audit::{zemke_audit, AuditPoint, ZemkeReport};
pub use envelope::{d_invariant, tau, upsilon, upsilon_envelope, Envelope, EnvelopeLine};
pub use minimize::{minimize_chi, MinCertificate};
pub use pl::PiecewiseLinearFn;
