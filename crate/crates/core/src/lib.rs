//! Construction and verification of homogeneous 3-(alpha, delta)-Sasaki
//! models with exact arithmetic.

pub mod linalg;
pub mod liealg;
pub mod scalars;
pub mod clifford;
pub mod models;
pub mod geometry;
pub mod faults;
pub mod oracles;
pub mod serial;
pub mod suite;
