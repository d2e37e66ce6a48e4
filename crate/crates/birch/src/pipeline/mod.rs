//! The constructive pipeline: orthogonal families, multi-homogeneous
//! solving, diagonal specialization, the normal form and certified points.

mod certificate;
mod leaf;
mod multihom;
mod normal;
mod orthogonal;
mod pencil;
mod solve;

pub use certificate::{
    unify_fields, CertScalar, CertificateInput, CoordinateJson, Encoder, FieldJson, SolutionCertificate, ValueJson,
    FORMAT_VERSION,
};
pub use leaf::select_vanishing_vector;
pub use normal::{normal_form, IndexData, NormalFormData, Parameters};
pub use multihom::{solve_multihomogeneous, MultihomSystem};
pub use orthogonal::{
    birch_orthogonal_blocks, brauer_orthogonal_sequence, is_orthogonal, BirchBlocks, Members,
    OrthogonalFamily, OrthogonalityCheck,
};
pub use solve::{diagonal_solve, sample_points, solve_affine, solve_system, system_normal_form, tolerance_from_f64, System};
pub use pencil::{
    add_diagonal_term, build_bihomogeneous_system, specialize_diagonal, BihomSystem, PencilWithTerm,
    Specialization,
};

/// Knobs of the normal form and solving stages.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Dimension of each orthogonal block, capped by the number of forms.
    pub ell: usize,
    /// Override of the block count used by diagonal specialization.
    pub blocks: Option<usize>,
    /// Regularize before solving, with this strength threshold.
    pub regularize_threshold: Option<crate::strength::Threshold>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            ell: 3,
            blocks: None,
            regularize_threshold: None,
        }
    }
}
