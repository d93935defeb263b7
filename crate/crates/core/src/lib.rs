//! Spherical codes built by lifting Euclidean-metric codes over `Z_q` onto the
//! unit sphere with the Yaglom map, together with the asymptotic rate bounds
//! that describe how good such codes can be.
//!
//! The crate is organised bottom-up:
//!
//! * [`euclid`] embeds `Z_q^n` into `R^n`, measures Euclidean and Lee weights
//!   and performs the Yaglom lift `x -> (x, sqrt(R^2 - x.x))`.
//! * [`counting`] computes exact Euclidean ball sizes `V(n, q, r)` and the
//!   saddle-point exponent of their growth.
//! * [`bounds`] evaluates rate curves, TVZ concatenation lines, tangents,
//!   feasibility regions and envelopes in `x = ln(rho)` coordinates.
//! * [`constructor`] builds desk-scale codes: greedy Gilbert codes, Lee-metric
//!   BCH inner codes, Reed-Solomon outer codes and their concatenation.
//! * [`verify`] runs the acceptance checks shared by the test suite and the
//!   `verify` CLI command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod constructor;
pub mod counting;
pub mod error;
pub mod euclid;
pub mod verify;

pub use bounds::{BoundPoint, CurveKind, CurveParams, TangentLine, TvzParams};
pub use constructor::{
    ConcatenatedCode, ExtField, FieldElement, LinearCode, RsCode, SphericalCodeResult,
};
pub use counting::{SaddleSolution, WeightEnumerator};
pub use error::{Error, Result};
pub use euclid::{Constellation, RealPoint, Word};
