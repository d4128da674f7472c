//! Winograd / Toom-Cook convolution with arbitrary real interpolation points.
//!
//! The crate is organised bottom-up:
//!
//! * [`point`], [`poly`], [`transform`], [`families`]: transform matrices for a
//!   point set, point-set generators and multiply-count arithmetic.
//! * [`conv`]: direct and Winograd convolution under several precision modes
//!   and summation orders, plus a tiled multi-channel layer.
//! * [`harness`]: seeded randomized trials measuring error against a
//!   double-precision direct oracle.
//! * [`search`]: sweeps, grid searches and subset enumeration over symmetric
//!   point families.
//!
//! Trials and grid points are evaluated data-parallel with rayon when the
//! `parallel` feature is enabled (the default); results are reduced in a fixed
//! order so they are bitwise independent of the thread count.

pub mod conv;
pub mod error;
pub mod exec;
pub mod families;
pub mod harness;
pub mod point;
pub mod poly;
pub mod reference;
pub mod search;
pub mod transform;

pub use error::{Error, Result};
pub use point::{Point, PointSet};
pub use poly::Polynomial;
pub use transform::{build_transforms, Matrix, TransformSet};
