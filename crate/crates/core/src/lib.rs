//! Exact moments and cumulants of the purity of random bipartite pure
//! states, Edgeworth densities for purity and Meyer–Wallach entanglement,
//! and a Haar-random Monte Carlo sampler to check them against.
//!
//! ```
//! use entmom::purity::{moment_r, DimensionPair};
//!
//! let dims = DimensionPair::new(2, 4).unwrap();
//! assert_eq!(moment_r(dims, 2).unwrap().to_string(), "5/11");
//! ```

pub mod compare;
pub mod cumulants;
pub mod edgeworth;
pub mod meyer_wallach;
pub mod numkit;
pub mod purity;
pub mod quad;
pub mod sampler;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use numkit::Rational;
