//! Exact arithmetic and the combinatorial enumerations behind every
//! analytic formula in the crate.

mod combinatorics;
mod hermite;
mod rational;

pub(crate) use combinatorics::fact;
pub use combinatorics::{
    binomial, compositions, factorial, half_gamma, multinomial, multiplicity_vectors, Composition,
    Compositions, MultiplicityVector,
};
pub use hermite::{hermite_he, IntPolynomial};
pub(crate) use hermite::{hermite_table_f64, horner};
pub use rational::Rational;
