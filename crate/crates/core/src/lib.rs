pub mod bound;
pub mod error;
pub mod numeric;
pub mod radial;
pub mod spaceform;
pub mod verifier;

pub use bound::{constant_c, neumann_upper_bound, wang_constant, BoundBreakdown, BoundInput};
pub use error::{Error, Result};
pub use radial::{first_neumann_eigenvalue, RadialEigenpair, RadialProblem, ShootingConfig};
pub use spaceform::{Curvature, SpaceFormBall};
