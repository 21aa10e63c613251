//! Hyperplane arrangements cut out by sets of positive roots: root systems,
//! Weyl group inversion sets, coconvex sets, freeness certification, Peterson
//! translation and minimal non-free patterns.

pub mod arrangement;
pub mod coconvex;
pub mod error;
pub mod linalg;
pub mod mask;
pub mod patterns;
pub mod peterson;
pub mod poly;
pub mod rootsys;
pub mod weyl;

pub use arrangement::{Arrangement, FreenessVerdict};
pub use error::{Error, Result};
pub use mask::Mask;
pub use poly::IntPoly;
pub use rootsys::{Root, RootSystem};
pub use weyl::WeylWord;

