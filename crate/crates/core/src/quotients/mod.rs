//! Finite quotients of `Z^N`, exact integer linear algebra, and homology.

pub mod complex;
pub mod det;
pub mod intmat;
pub mod resolution;
pub mod snf;
pub mod subgroup;

pub use complex::{homology, DegreeHomology, HomologySummary, IntegerComplex};
pub use det::{det_bareiss, det_crt, exact_determinant};
pub use intmat::IntMatrix;
pub use resolution::{
    complex_from_resolution, euler_characteristic, fixed_points_count, homology_at, koszul_resolution,
    FreeResolution, FreeResolutionJson, SubgroupSequence,
};
pub use snf::{smith_normal_form, smith_normal_form_with_transforms, SmithForm};
pub use subgroup::{FiniteIndexSubgroup, QuotientGroup};
