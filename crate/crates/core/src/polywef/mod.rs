//! Exact integer polynomials and weight enumerating functions of component codes.

mod poly;
mod wef;

pub use poly::IntPoly;
pub use wef::{TiltedMoments, Wef, DEFAULT_ENUMERATION_LIMIT};
