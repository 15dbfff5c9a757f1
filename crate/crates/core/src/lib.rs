//! Restricted Poincaré series of free-group extensions of subshifts of
//! finite type, their critical exponents, measure-theoretic lower bounds and
//! covering upper bounds for the dimensions of directional escaping sets, and
//! a Schottky-surface instantiation exhibiting the dimension gap between the
//! directional escaping sets and the full limit set.
//!
//! The computational core is a pruned dynamic program over pairs
//! (potential context, reduced group element): level sums of the series
//! Z(p|g) = Σ_{χ(ω)=g} exp(-p S_ω u) are exact for locally constant
//! potentials, and states that cannot reach the target fiber within the
//! remaining length budget are discarded losslessly.

pub mod config;
pub mod error;
pub mod escape;
pub mod extension;
pub mod freegroup;
pub mod poincare;
pub mod schottky;
pub mod symbolic;
pub mod verification;

pub use error::{Error, Result};
