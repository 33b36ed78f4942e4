#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod bounds;
pub mod error;
pub mod manifold;
pub mod operators;
pub mod oracle;
pub mod rational;
pub mod spectrum;
pub mod variational;

pub use error::{Error, Result};
pub use manifold::{GeometryData, ProductManifold, SphereFactor};
pub use rational::Rational;
