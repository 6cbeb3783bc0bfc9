//! Certified lower bounds on bipartite entanglement from the Frobenius
//! distance to the separable set.

pub mod error;
pub mod generators;
pub mod linalg;
pub mod measures;
pub mod oracle;
pub mod random;
pub mod states;
pub mod witnesses;

pub use error::{Error, Result};
pub mod cli;
