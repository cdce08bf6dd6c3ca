//! The `[K, E]` model of the deformed lattice complex and the surgery exact
//! sequence `0 → CF_t(Γ − v) → CF_t(Γ) → CF_t(Γ₊₁(v)) → 0`.

mod form;
mod homology;
mod maps;
mod relations;
mod verify;
mod window;

pub use homology::{window_cutoff, window_homology, WindowHomology};
pub use form::{KeForm, KeGenerator, Term, VertexSet};
pub use maps::{b_map, m_bound, psi_v};
pub use relations::{relations_audit, RelationsReport, VertexRelations};
pub use verify::{run_exactness_checks, verify_exact, CheckResult, ExactnessReport, VerifyOptions};
pub use window::KeWindow;
