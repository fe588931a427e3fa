//! Shared fixtures for the benchmarks.

use skewforge_core::algebras::{preset, Preset};
use skewforge_core::{RatFunc, SkewStructure};

/// The `t + z` structure over F_3.
pub fn reference(precision: usize) -> SkewStructure {
    preset(3, &Preset::WildLevel { i: 1, a: RatFunc::one(3) }, precision).expect("valid preset")
}

pub fn tame(precision: usize) -> SkewStructure {
    preset(5, &Preset::TameSymbol { zeta: 2 }, precision).expect("valid preset")
}
