//! Fixtures shared by the kernel benchmarks.

use pencil_core::canon::{BlockKind, BlockSpec, SpectralSpec};
use pencil_core::lab::{prepare, PreparedScenario};
use pencil_core::{EigenvalueRef, StructureTag};

pub fn eig(s: &str) -> EigenvalueRef {
    s.parse().expect("valid eigenvalue literal")
}

/// Hermitian blocks (3,2,2,1) at 2 with mixed signs plus a spectator at 5.
pub fn hermitian_spec() -> SpectralSpec {
    let two = eig("2");
    SpectralSpec::new(
        StructureTag::Hermitian,
        vec![
            BlockSpec::real(two.clone(), 3, 1),
            BlockSpec::real(two.clone(), 2, 1),
            BlockSpec::real(two.clone(), 2, -1),
            BlockSpec::real(two, 1, 1),
            BlockSpec::real(eig("5"), 1, 1),
        ],
    )
    .with_seed_transform(1)
}

/// ⊤-even pair of size-3 blocks at 0 plus a pair at ±2.
pub fn t_even_spec() -> SpectralSpec {
    SpectralSpec::new(
        StructureTag::TEven,
        vec![BlockSpec::plain(BlockKind::TEvenZeroOddPair, 3), BlockSpec::at(BlockKind::TEvenNonzeroPair, eig("2"), 1)],
    )
}

pub fn hermitian_scenario() -> PreparedScenario {
    prepare(&hermitian_spec(), 2, Some(1)).expect("admissible scenario")
}
