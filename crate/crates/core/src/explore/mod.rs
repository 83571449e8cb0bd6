//! Phase-portrait and basin-of-attraction data.

pub mod basin;
pub mod manifold;
pub mod portrait;
pub mod render;
pub mod window;

pub use basin::{basin_raster, family_targets, BasinConfig, BasinImage, BasinTarget, DIVERGED, UNRESOLVED};
pub use manifold::{
    branch_coincidence, invariance_defect, manifold_polyline, Branch, Coincidence, Direction, Manifold,
    ManifoldPolyline,
};
pub use portrait::{portrait, write_bundle, FamilyMember, Portrait, PortraitOptions};
pub use render::{render_image, to_rgb, Palette};
pub use window::{default_window, Window};
