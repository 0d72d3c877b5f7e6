//! Shared fixtures for the criterion benchmarks.

use amsos_core::{BuiltinMixture, Dataset};

/// Generation seed used by every benchmark.
pub const SEED: u64 = 2011;

pub fn builtin(id: BuiltinMixture) -> Dataset {
    id.spec().generate(SEED)
}
