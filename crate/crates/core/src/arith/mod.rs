//! Exact scalar arithmetic: rationals and cyclotomic field elements.

pub mod cyclotomic;
pub mod rational;

pub use cyclotomic::{cyclotomic_poly, euler_phi, CycloElem};
pub use rational::Rational;
