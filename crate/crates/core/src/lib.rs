//! Exact structured matrix pencils over the Gaussian rationals.
//!
//! The crate builds structured pencils from canonical block data, splits
//! low-rank structured pencils into structured rank-one terms, samples
//! structured low-rank perturbations and checks how partial multiplicities
//! change under them.

pub mod canon;
pub mod decomp;
pub mod exactnum;
pub mod lab;
pub mod matrix;
pub mod paramz;
pub mod pencil;
pub mod poly;
pub mod smith;

pub use canon::{build_block, build_pencil, jordan_pencil, singular_block, BlockKind, BlockSpec, SpectralSpec};
pub use decomp::{
    conjugate_decomposition, decompose_canonical, merge_opposite_signs, minimal_ell, reconstruct, signsum,
    RankOneDecomposition,
};
pub use exactnum::{GaussianRational, Rational};
pub use matrix::Matrix;
pub use paramz::{named_perturbation, phi_general, phi_structured, sample_params, ParamVector, PerturbationRecipe};
pub use pencil::{check_structure, normal_rank, Pencil, PolyVector, Star, StructureTag};
pub use poly::Poly;
pub use smith::{det_poly, partial_multiplicities, EigenvalueRef, MultiplicityList};
