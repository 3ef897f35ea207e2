//! Exact evaluation of Verlinde-type dimension formulas.
//!
//! The crate computes dimensions of spaces of sections of powers of the
//! determinant line bundle on moduli spaces of rank-`r` bundles with fixed
//! determinant (the SL_r case) and on their quotients by the `r`-torsion of
//! the Jacobian (the PGL_r case, `r` prime). Every sum runs over tuples of
//! roots of unity and is evaluated exactly in a cyclotomic field; a
//! high-precision floating oracle and brute-force enumerations check the
//! exact path independently.
//!
//! ```
//! use verlinde::verlinde::{sl_dimension, pgl_dimension, ModuliQuery};
//!
//! let q = ModuliQuery::new(2, 0, 4, 2).unwrap();
//! assert_eq!(sl_dimension(&q).unwrap().value.to_string(), "35");
//! assert_eq!(pgl_dimension(&q).unwrap().value.to_string(), "5");
//! ```

pub mod arith;
pub mod checks;
pub mod error;
pub mod oracle;
pub mod smatrix;
pub mod verlinde;
pub mod weights;

pub use arith::{CycloElem, Rational};
pub use error::{Error, Result};
