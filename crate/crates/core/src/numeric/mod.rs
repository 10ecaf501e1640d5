//! Numerical building blocks shared by the geometry and eigenvalue modules.

pub mod interp;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod sparse;
