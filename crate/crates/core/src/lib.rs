//! Periodic solutions of the two-dimensional border-collision normal form,
//! the design of parameter values with infinitely many coexisting attracting
//! cycles, closed-form checks of the `(RLR)^k LR` family, and phase-portrait
//! and basin-of-attraction data.

pub mod cycle;
pub mod design;
mod error;
pub mod explore;
pub mod map;
pub mod polyline;
pub mod presets;
pub mod verify;
pub mod words;

pub use cycle::{classify, solve_cycle, Admissibility, Cycle, CycleReport, Side, Stability};
pub use error::{Error, Result};
pub use map::{AffineMap2, Mat2, ParamName, Params, Point};
pub use words::{Symbol, Word};
