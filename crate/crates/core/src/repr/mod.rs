//! Matrix representations in `SO(3)` and `SL(2,ℝ)`.
//!
//! Freeness and faithfulness are certified only up to a word length `L`;
//! density only as a finite covering radius.

mod certify;
mod deform;
mod density;
mod group;
mod rep;
mod scan;

pub use certify::{
    certify_free, certify_free_with, Certificate, CertificateKind, FailureWitness, FreeCheck,
};
pub use deform::{
    enlarge_rank, free_from_surface, surface_from_free, SearchOptions, RESIDUAL_BOUND,
};
pub use density::{covering_radius, covering_radius_with, KdTree};
pub use group::{
    sl2_exp, sl2_log, ClosureCurve, GroupElement, GroupKind, Sl2, So3, DEGENERATE_EPS,
    RENORMALIZE_EVERY, SL2_SAMPLER, SL2_SAMPLER_RADIUS,
};
pub use rep::{evaluate_codes, sample_tuple, AnyRep, MatrixRep, DEFAULT_TOLERANCE};
