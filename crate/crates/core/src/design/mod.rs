//! Saddle eigenframes, the coexistence conditions, and the homoclinic
//! geometry they produce.

pub mod frame;
pub mod homoclinic;
pub mod locus;
pub mod solve;

pub use frame::SaddleFrame;
pub use homoclinic::{homoclinic_points, theorem1_check, xi_crossings, HomoclinicQuad};
pub use locus::{closed_family_rlr, design_vectors, hat_y, residuals, DesignResiduals};
pub use solve::{solve_codim3, Codim3Solution, Pinned, SolverOptions};
