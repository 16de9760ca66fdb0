//! Refutation certificates for semirandom and smoothed Boolean CSPs.
//!
//! The pipeline takes a k-XOR instance (or a CSP over an arbitrary Boolean
//! predicate), splits its hypergraph into regular bipartite pieces, squares
//! each piece, builds the cloned Kikuchi matrix and bounds its infinity-to-one
//! norm by pruning, bucketing and certified spectral norms. Every number the
//! pipeline outputs is a sound upper bound on the instance value.
//!
//! Alongside the spectral route the crate ships even-cover search and
//! disjoint-cover witnesses, which certify weaker bounds at lower densities.

pub mod cli;
pub mod covers;
pub mod csp;
pub mod decompose;
pub mod error;
pub mod hypergraph;
pub mod linalg;
pub mod refute;
pub mod instances;
pub mod kikuchi;
pub mod subsets;

pub use error::{Error, Result};
