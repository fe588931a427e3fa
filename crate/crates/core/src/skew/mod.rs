//! Truncated skew Laurent series `F_p(t)((z))` and the maps `ₘδᵢ`.

mod checks;
mod series;
mod structure;

pub use checks::{
    binomial_delta, check_flyii, check_ooo, check_triviall, ooo_operators, CheckReport, DeltaQuery,
    DeltaSource, IdentityCheck,
};
pub use series::SkewSeries;
pub use structure::{build_structure, SkewStructure};
