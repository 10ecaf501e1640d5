//! Numerical checks of the bound on concrete two-dimensional domains.

pub mod chain;
pub mod com;
pub mod domain;
pub mod eigen;
pub mod fem;
pub mod mesh;
pub mod model;
pub mod revolution;
pub mod spec;
pub mod verify;

pub use chain::{proof_chain_check, ChainReport};
pub use com::{center_of_mass, CenterOfMass};
pub use domain::{ConformalDomain, FourierBoundary};
pub use fem::{domain_diameter, domain_volume, fem_mu1, FemEigenpair};
pub use mesh::{mesh_star_domain, Mesh};
pub use model::ConformalModel;
pub use revolution::{gauss_curvature_range, revolution_mu1, Profile, RevolutionSurface};
pub use spec::ScenarioSpec;
pub use verify::{verify_conformal, verify_revolution, VerificationReport};
