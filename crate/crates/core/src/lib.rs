pub mod catalog;
pub mod error;
pub mod integrator;
pub mod mesh;
pub mod minimal;
pub mod report;
pub mod singular;
pub mod weierstrass;

pub use error::{Error, Result};
pub use integrator::Surface;
pub use weierstrass::SurfaceParams;
