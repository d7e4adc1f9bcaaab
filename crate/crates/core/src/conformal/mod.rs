//! Conformal maps: explicit formulas, compositions, Newton inverses, and the
//! numerical Riemann map of Jordan domains.

pub mod cache;
mod map;
mod szego;

pub use map::{Jet, MapSpec};
pub use szego::{default_base_point, riemann_map, RiemannSolve, CONDITION_LIMIT};
