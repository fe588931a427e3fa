//! Parameter and embedding changes, normalization, and invariants.

mod invariants;
mod normalize;
pub mod predict;
mod reparam;

pub use invariants::{
    c_table, check_svva, d_invariant, element_height, invariant_report, local_height, svva_constants, Bound,
    CTable, DOutcome, InvariantReport,
};
pub use normalize::{
    galois_step, kill_coefficient, normalize_galois, normalize_modulus, GaloisOutcome, KillOutcome,
    ModulusOutcome,
};
pub use reparam::{change_generator, parameter_series, reembed, reembed_lift, reparam, reparametrize, Reembed, Reparam};
