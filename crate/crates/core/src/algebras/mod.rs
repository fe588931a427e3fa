//! Example structures, center probes and norm equations over finite fields.

mod norm;
mod presets;

pub use norm::FiniteFieldExt;
pub use presets::{center_probe, preset, Preset, ProbeAgainst, ProbeWitness};
