//! Algebraic layer: parameters, the branch `w`, Gauss map, forms, ends.

mod ends;
mod forms;
mod params;

pub use ends::{Direction, EndBehaviour, EndTilt, FreeCoordinate};
pub use forms::{
    branch_sqrt, gauss_of_w, normal_of_gauss, BranchedValue, Extended, FormTriple, GaussValue,
};
pub use params::{Axis, RawParams, SurfaceParams};
