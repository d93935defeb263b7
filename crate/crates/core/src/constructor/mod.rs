//! Desk-scale code builders.

pub mod bch;
pub mod concat;
pub mod field;
pub mod gilbert;
pub mod linear;
pub mod primality;
pub mod rs;
pub mod spherical;

pub use bch::{generator_polynomial, lee_bch};
pub use concat::{ConcatenatedCode, DistanceReport};
pub use field::{ExtField, FieldElement};
pub use gilbert::greedy_gilbert;
pub use linear::{LinearCode, Metric};
pub use primality::{is_probable_prime, primitive_root};
pub use rs::{rs_code, RsCode};
pub use spherical::{to_spherical, SphericalCodeResult};
