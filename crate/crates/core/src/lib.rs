//! Exact tools for the first Milnor fiber cohomology of hyperplane arrangements:
//! combinatorial vanishing certificates, eigenspace dimensions from braided wiring
//! diagrams, and a Fox-calculus cross-check.

pub mod arrangement;
pub mod criteria;
pub mod cyclo;
pub mod error;
pub mod linalg;
pub mod monodromy;
pub mod oracle;
pub mod par;

pub use error::{Error, Result};
