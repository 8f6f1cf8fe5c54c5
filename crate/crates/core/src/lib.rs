//! Linear relations on `C^n`, represented by orthonormal frames of their graphs.
//!
//! A relation `T ⊂ C^n ⊕ C^n` is stored as a subspace of `C^{2n}`; operators
//! are the special case with trivial multivalued part. On top of the relation
//! algebra the crate provides the Z transform, invariance and reduction
//! checks, four canonical decompositions and a finite model of the shift.

pub mod batch;
pub mod decompose;
pub mod error;
pub mod invariance;
pub mod io;
pub mod linalg;
pub mod relation;
pub mod sample;
pub mod shiftmodel;
pub mod subspace;
pub mod ztransform;

pub use decompose::{
    decompose, dissipative_decompose, maximalize_contraction, nfl_decompose, symmetric_wold_core,
    symmetric_wold_decompose, unitary_part_subspace, von_neumann_check, wold_decompose,
    wold_structure, DecompositionMode, DecompositionResult, VonNeumannReport, WoldStructure,
};
pub use error::{Error, Result};
pub use invariance::{
    adjoint_within, invariance, is_invariant, is_reducing, reduction_certificates,
    reduction_residual, Certificate, InvarianceReport, ReductionReport,
};
pub use linalg::{c, CMatrix, CVector, C64, I};
pub use relation::{
    ClassificationReport, ClassificationResiduals, FormBounds, GraphParts, Relation,
    SpectralPointClass,
};
pub use subspace::{Subspace, ToleranceConfig};
pub use ztransform::{
    subspace_fixed_point_check, z_properties_check, z_transform, PropertyCheck, ZPropertyReport,
};
