//! Exact finite-level models of Bratteli diagrams, their path spaces, the
//! AF-algebra tower they generate, and the tail-equivalence groupoid
//! convolution algebra.
//!
//! ```
//! use std::sync::Arc;
//! use af_tail::{cylinder::CylinderFunction, expectation::en, Builtin, Scalar};
//!
//! let d = Arc::new(Builtin::Car.diagram(3)?);
//! let gamma = d.enumerate_paths(2)?[1].clone();
//! let f = CylinderFunction::indicator_path(d.clone(), &gamma)?;
//! assert_eq!(en(&f, 2)?, CylinderFunction::constant(d, Scalar::ratio(1, 4)));
//! # Ok::<(), af_tail::Error>(())
//! ```

pub mod cylinder;
pub mod diagram;
pub mod error;
pub mod expectation;
pub mod groupoid;
pub mod harness;
pub mod scalar;
pub mod tower;

pub use diagram::{BratteliDiagram, Builtin, Edge, FinitePath, PathSegment, Vertex};
pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
