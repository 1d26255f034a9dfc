//! Continued fractions, Schubert normal forms and epimorphism censuses for
//! 2-bridge knots.

pub mod cli;
pub mod counting;
pub mod epimorphism;
pub mod error;
pub mod knot;
pub mod rational_cf;

pub use epimorphism::{CensusRecord, OrsExpansion};
pub use error::{Error, Result};
pub use knot::{EvenStandardCf, TwoBridgeKnot};
pub use rational_cf::{ContinuedFraction, Fraction, Matrix2};
